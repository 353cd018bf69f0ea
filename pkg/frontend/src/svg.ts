// Minimal SVG assembly: element strings, linear scales, framed axes.
// Output is deterministic (fixed precision, no timestamps or ids).

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const fmt = (v: number): string => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

export function el(tag: string, attrs: Record<string, string | number>,
  children: string[] = []): string {
  const body = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join("");
  if (children.length === 0) return `<${tag}${body}/>`;
  return `<${tag}${body}>${children.join("")}</${tag}>`;
}

export function text(x: number, y: number, content: string,
  attrs: Record<string, string | number> = {}): string {
  const base: Record<string, string | number> = {
    x, y, "font-family": "sans-serif", "font-size": 12, fill: "#222",
  };
  return el("text", { ...base, ...attrs }, [escapeText(content)]);
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Scale {
  map(v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number],
  range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return { map: (v: number) => r0 + ((v - d0) / span) * (r1 - r0), domain };
}

// round tick steps: 1/2/5 times a power of ten covering the span
export function ticks(domain: [number, number], count: number): number[] {
  const span = domain[1] - domain[0];
  if (span <= 0) return [domain[0]];
  const raw = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? mag * 10;
  const start = Math.ceil(domain[0] / step) * step;
  const out: number[] = [];
  for (let v = start; v <= domain[1] + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0);
  }
  return `${Number(v.toPrecision(6))}`;
}

export interface Frame {
  width: number;
  height: number;
  margin: Margin;
  x: Scale;
  y: Scale;
  body: string[];
}

export function frame(xDomain: [number, number], yDomain: [number, number],
  opts: { width?: number; height?: number; margin?: Margin;
    xLabel: string; yLabel: string;
    xTickLabel?: (v: number) => string }): Frame {
  const width = opts.width ?? 720;
  const height = opts.height ?? 440;
  const margin = opts.margin ?? { top: 24, right: 156, bottom: 48, left: 64 };
  const x = linearScale(xDomain, [margin.left, width - margin.right]);
  const y = linearScale(yDomain, [height - margin.bottom, margin.top]);
  const body: string[] = [];
  const label = opts.xTickLabel ?? tickLabel;

  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  body.push(el("rect", {
    x: x0, y: y1, width: x1 - x0, height: y0 - y1,
    fill: "none", stroke: "#333", "stroke-width": 1,
  }));
  for (const v of ticks(xDomain, 7)) {
    const px = x.map(v);
    body.push(el("line", { x1: px, y1: y0, x2: px, y2: y0 + 5, stroke: "#333" }));
    body.push(text(px, y0 + 19, label(v), { "text-anchor": "middle" }));
  }
  for (const v of ticks(yDomain, 6)) {
    const py = y.map(v);
    body.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "#333" }));
    body.push(text(x0 - 9, py + 4, tickLabel(v), { "text-anchor": "end" }));
    body.push(el("line", {
      x1: x0, y1: py, x2: x1, y2: py,
      stroke: "#ddd", "stroke-width": 0.5,
    }));
  }
  body.push(text((x0 + x1) / 2, height - 10, opts.xLabel, { "text-anchor": "middle" }));
  body.push(el("g", {
    transform: `translate(16 ${(y0 + y1) / 2}) rotate(-90)`,
  }, [text(0, 0, opts.yLabel, { "text-anchor": "middle" })]));
  return { width, height, margin, x, y, body };
}

export function legend(f: Frame, entries: Array<{ label: string; color: string }>): void {
  const lx = f.width - f.margin.right + 14;
  entries.forEach((e, i) => {
    const ly = f.margin.top + 14 + i * 18;
    f.body.push(el("line", {
      x1: lx, y1: ly - 4, x2: lx + 18, y2: ly - 4,
      stroke: e.color, "stroke-width": 2,
    }));
    f.body.push(text(lx + 24, ly, e.label));
  });
}

export function render(f: Frame): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" ` +
    `height="${f.height}" viewBox="0 0 ${f.width} ${f.height}">`,
    el("rect", { x: 0, y: 0, width: f.width, height: f.height, fill: "#fff" }),
    ...f.body,
    "</svg>",
  ].join("\n");
}
