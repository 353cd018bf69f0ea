#!/usr/bin/env node
// render_figure --kind <kind> --in <csv> --out <svg>
// Exit codes: 0 success, 1 render failure, 2 usage.

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { RENDERERS, renderFigure, type FigureKind } from "./figures.js";

const KINDS = Object.keys(RENDERERS).join(", ");

export function main(argv: string[]): number {
  let kind: string | undefined;
  let input: string | undefined;
  let out: string | undefined;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
      },
    });
    kind = values.kind;
    input = values.in;
    out = values.out;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  if (kind === undefined || input === undefined || out === undefined) {
    console.error("usage: render_figure --kind <kind> --in <csv> --out <svg>");
    return 2;
  }
  if (!(kind in RENDERERS)) {
    console.error(`error: unknown kind "${kind}" (expected one of: ${KINDS})`);
    return 2;
  }
  let csvText: string;
  try {
    csvText = readFileSync(input, "utf8");
  } catch (err) {
    console.error(`error: cannot read ${input}: ${(err as Error).message}`);
    return 2;
  }
  let svg: string;
  try {
    svg = renderFigure(kind as FigureKind, csvText);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  writeFileSync(out, svg + "\n");
  return 0;
}

if (process.argv[1] !== undefined
  && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
