// The five figure kinds, one renderer per sweep CSV contract.
// Each renderer is a pure string -> string map so runs are reproducible.

import {
  parseDuration, parsePopulations, parseSnapshots, parseTrajectory, parseXi,
} from "./csv.js";
import {
  PALETTE, el, frame, legend, linearScale, render, text,
} from "./svg.js";

function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

function byKey<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const out = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = out.get(k);
    if (bucket === undefined) out.set(k, [row]);
    else bucket.push(row);
  }
  return out;
}

export function renderDurationSweep(csvText: string): string {
  const rows = parseDuration(csvText);
  const series = byKey(rows, (r) => `${r.scheme} n=${r.n}`);

  // one (mean, std) summary point per (series, tau); the per-phi rows
  // repeat the group statistics by construction
  type Pt = { tau: number; mean: number; std: number };
  const summaries = new Map<string, Pt[]>();
  for (const [name, group] of series) {
    const perTau = byKey(group, (r) => `${r.tau_fs}`);
    const pts = [...perTau.values()]
      .map((g) => ({ tau: g[0].tau_fs, mean: g[0].mean, std: g[0].std }))
      .sort((a, b) => a.tau - b.tau);
    summaries.set(name, pts);
  }

  const all = [...summaries.values()].flat();
  const taus = all.map((p) => p.tau);
  const lo = Math.min(...all.map((p) => p.mean - p.std));
  const hi = Math.max(...all.map((p) => p.mean + p.std));
  const pad = Math.max((hi - lo) * 0.08, 1e-4);
  const f = frame([Math.min(...taus), Math.max(...taus)], [lo - pad, hi + pad], {
    xLabel: "pulse duration (fs)", yLabel: "mean gate fidelity",
  });

  let index = 0;
  for (const [name, pts] of summaries) {
    const color = seriesColor(index++);
    const path = pts.map((p) => `${f.x.map(p.tau).toFixed(2)},${f.y.map(p.mean).toFixed(2)}`);
    f.body.push(el("polyline", {
      points: path.join(" "), fill: "none", stroke: color,
      "stroke-width": 1.5, class: "series",
    }));
    for (const p of pts) {
      const px = f.x.map(p.tau);
      const yLo = f.y.map(p.mean - p.std);
      const yHi = f.y.map(p.mean + p.std);
      f.body.push(el("line", {
        x1: px, y1: yLo, x2: px, y2: yHi,
        stroke: color, "stroke-width": 1, class: "error-bar",
      }));
      for (const cap of [yLo, yHi]) {
        f.body.push(el("line", {
          x1: px - 3, y1: cap, x2: px + 3, y2: cap, stroke: color, "stroke-width": 1,
        }));
      }
      f.body.push(el("circle", { cx: px, cy: f.y.map(p.mean), r: 2.5, fill: color }));
    }
  }
  legend(f, [...summaries.keys()].map((label, i) => ({ label, color: seriesColor(i) })));
  return render(f);
}

export function renderXiSweep(csvText: string): string {
  // log-x in rotation infidelity; the perfect-pulse rows (infidelity 0)
  // have no place on that axis and are dropped
  const rows = parseXi(csvText).filter((r) => r.rotation_infidelity > 0);
  if (rows.length === 0) throw new Error("xi sweep has no imperfect-pulse rows");
  const series = byKey(rows, (r) => `${r.scheme} n=${r.n}`);

  const logs = rows.map((r) => Math.log10(r.rotation_infidelity));
  const fids = rows.map((r) => r.fidelity);
  const pad = (Math.max(...fids) - Math.min(...fids)) * 0.08 + 1e-3;
  const f = frame(
    [Math.min(...logs) - 0.1, Math.max(...logs) + 0.1],
    [Math.min(...fids) - pad, Math.max(...fids) + pad],
    {
      xLabel: "rotation infidelity", yLabel: "gate fidelity",
      xTickLabel: (v) => `1e${Math.round(v)}`,
    });

  let index = 0;
  for (const [name, group] of series) {
    const color = seriesColor(index++);
    const pts = group
      .map((r) => ({ lx: Math.log10(r.rotation_infidelity), fy: r.fidelity }))
      .sort((a, b) => a.lx - b.lx);
    f.body.push(el("polyline", {
      points: pts.map((p) => `${f.x.map(p.lx).toFixed(2)},${f.y.map(p.fy).toFixed(2)}`).join(" "),
      fill: "none", stroke: color, "stroke-width": 1.5, class: "series",
    }));
    for (const p of pts) {
      f.body.push(el("circle", {
        cx: f.x.map(p.lx), cy: f.y.map(p.fy), r: 3, fill: color, class: "pt",
      }));
    }
    void name;
  }
  legend(f, [...series.keys()].map((label, i) => ({ label, color: seriesColor(i) })));
  return render(f);
}

const STATE_ORDER = ["gg", "ge", "eg", "ee"];

export function renderPopulations(csvText: string): string {
  const rows = parsePopulations(csvText);
  const byXi = byKey(rows, (r) => `${r.xi}`);
  const groups = [...byXi.entries()].map(([label, group]) => {
    const totals = new Map<string, number>(STATE_ORDER.map((s) => [s, 0]));
    for (const r of group) {
      totals.set(r.internal_state, (totals.get(r.internal_state) ?? 0) + r.probability);
    }
    return { label, totals };
  });

  const f = frame([0, groups.length], [0, 1.0], {
    xLabel: "pulse-area fraction", yLabel: "final population",
    xTickLabel: () => "",
  });
  const y0 = f.y.map(0);
  const slot = (f.x.map(1) - f.x.map(0));
  const barWidth = (slot * 0.8) / STATE_ORDER.length;

  groups.forEach((g, gi) => {
    const left = f.x.map(gi) + slot * 0.1;
    STATE_ORDER.forEach((state, si) => {
      const p = g.totals.get(state) ?? 0;
      const top = f.y.map(p);
      f.body.push(el("rect", {
        x: left + si * barWidth, y: top,
        width: barWidth - 2, height: Math.max(y0 - top, 0),
        fill: seriesColor(si), class: "bar",
      }));
    });
    f.body.push(text(f.x.map(gi + 0.5), f.height - f.margin.bottom + 19,
      `xi=${g.label}`, { "text-anchor": "middle" }));
  });
  legend(f, STATE_ORDER.map((label, i) => ({ label, color: seriesColor(i) })));
  return render(f);
}

export function renderTrajectory(csvText: string): string {
  const rows = parseTrajectory(csvText);
  const res = rows.map((r) => r.re);
  const ims = rows.map((r) => r.im);
  // equal aspect: one scale factor for both axes, centered on the orbit
  const span = Math.max(
    Math.max(...res) - Math.min(...res),
    Math.max(...ims) - Math.min(...ims)) * 1.15 || 1;
  const cx = (Math.max(...res) + Math.min(...res)) / 2;
  const cy = (Math.max(...ims) + Math.min(...ims)) / 2;

  const side = 480;
  const margin = { top: 24, right: 24, bottom: 48, left: 64 };
  const f = frame(
    [cx - span / 2, cx + span / 2], [cy - span / 2, cy + span / 2],
    {
      width: side + margin.left + margin.right,
      height: side + margin.top + margin.bottom,
      margin, xLabel: "Re(alpha)", yLabel: "Im(alpha)",
    });

  // the loop closes by construction; <polygon> states that in the markup
  const points = rows
    .map((r) => `${f.x.map(r.re).toFixed(2)},${f.y.map(r.im).toFixed(2)}`)
    .join(" ");
  f.body.push(el("polygon", {
    points, fill: PALETTE[0], "fill-opacity": 0.08,
    stroke: PALETTE[0], "stroke-width": 1.5, class: "orbit",
  }));
  for (const r of rows) {
    f.body.push(el("circle", {
      cx: f.x.map(r.re), cy: f.y.map(r.im), r: 3, fill: PALETTE[3], class: "vertex",
    }));
  }
  f.body.push(el("circle", {
    cx: f.x.map(0), cy: f.y.map(0), r: 4,
    fill: "none", stroke: "#222", "stroke-width": 1,
  }));
  return render(f);
}

export function renderSnapshots(csvText: string): string {
  const rows = parseSnapshots(csvText);
  const models = [...byKey(rows, (r) => r.model).entries()];
  const events = Math.max(...rows.map((r) => r.event_index)) + 1;
  const nMax = Math.max(...rows.map((r) => r.n)) + 1;

  const panelHeight = 150;
  const width = 720;
  const margin = { top: 28, right: 24, bottom: 44, left: 64 };
  const height = margin.top + models.length * (panelHeight + 34) + margin.bottom;

  const body: string[] = [];
  body.push(el("rect", { x: 0, y: 0, width, height, fill: "#fff" }));
  models.forEach(([model, group], mi) => {
    const top = margin.top + mi * (panelHeight + 34);
    const x = linearScale([0, events], [margin.left, width - margin.right]);
    const y = linearScale([0, nMax], [top + panelHeight, top]);
    const cellW = x.map(1) - x.map(0);
    const cellH = y.map(0) - y.map(1);

    const cells: string[] = [];
    // population per (event, n) traced over internal states
    const totals = new Map<string, number>();
    for (const r of group) {
      const k = `${r.event_index}:${r.n}`;
      totals.set(k, (totals.get(k) ?? 0) + r.probability);
    }
    for (const [k, p] of totals) {
      const [ev, n] = k.split(":").map(Number);
      cells.push(el("rect", {
        x: x.map(ev), y: y.map(n + 1), width: cellW, height: cellH,
        fill: PALETTE[0], "fill-opacity": Math.min(Math.sqrt(p), 1).toFixed(3),
        class: "cell",
      }));
    }
    const frameRect = el("rect", {
      x: margin.left, y: top, width: width - margin.left - margin.right,
      height: panelHeight, fill: "none", stroke: "#333",
    });
    const label = text(margin.left, top - 6, model, { "font-weight": "bold" });
    const yLab = el("g", {
      transform: `translate(16 ${top + panelHeight / 2}) rotate(-90)`,
    }, [text(0, 0, "n", { "text-anchor": "middle" })]);
    body.push(el("g", { class: "panel" }, [...cells, frameRect, label, yLab]));

    if (mi === models.length - 1) {
      for (let ev = 0; ev < events; ev += 2) {
        body.push(text(x.map(ev + 0.5), top + panelHeight + 16, `${ev}`,
          { "text-anchor": "middle" }));
      }
      body.push(text(width / 2, height - 8, "event index", { "text-anchor": "middle" }));
    }
  });
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">`,
    ...body,
    "</svg>",
  ].join("\n");
}

export const RENDERERS = {
  duration_sweep: renderDurationSweep,
  xi_sweep: renderXiSweep,
  populations: renderPopulations,
  trajectory: renderTrajectory,
  snapshots: renderSnapshots,
} as const;

export type FigureKind = keyof typeof RENDERERS;

export function renderFigure(kind: FigureKind, csvText: string): string {
  return RENDERERS[kind](csvText);
}
