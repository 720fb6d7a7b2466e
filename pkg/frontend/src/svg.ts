/** Minimal SVG assembly: element builders, linear scales, nice ticks. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Round tick positions covering the domain, at most `count` of them. */
export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (hi === lo) return [lo];
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (mult * power >= rawStep) {
      step = mult * power;
      break;
    }
  }
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : Number(v.toPrecision(12)));
  }
  return ticks;
}

export function fmt(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toPrecision(4);
  return String(Number(s));
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const rendered = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : escapeText(String(v))}"`)
    .join(" ");
  return body === "" && tag !== "text"
    ? `<${tag} ${rendered}/>`
    : `<${tag} ${rendered}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Record<string, string | number> = {}): string {
  return el("text", { x, y, "font-family": "sans-serif", "font-size": 12, fill: "#222", ...attrs }, escapeText(content));
}

export function polylinePoints(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 420,
  margin: { top: 36, right: 24, bottom: 48, left: 60 },
};

export interface Axes {
  x: Scale;
  y: Scale;
  parts: string[];
}

/** Plot frame with tick marks, grid lines, labels, and a title. */
export function axes(
  frame: Frame,
  xDomain: [number, number],
  yDomain: [number, number],
  labels: { title: string; x: string; y: string },
  opts: { xTicks?: number[]; yTicks?: number[] } = {},
): Axes {
  const { width, height, margin } = frame;
  const x = linearScale(xDomain, [margin.left, width - margin.right]);
  const y = linearScale(yDomain, [height - margin.bottom, margin.top]);
  const parts: string[] = [];
  const xTicks = opts.xTicks ?? niceTicks(xDomain[0], xDomain[1]);
  const yTicks = opts.yTicks ?? niceTicks(yDomain[0], yDomain[1]);

  parts.push(el("rect", { x: 0, y: 0, width, height, fill: "white" }));
  for (const t of yTicks) {
    parts.push(el("line", {
      x1: margin.left, x2: width - margin.right, y1: y(t), y2: y(t),
      stroke: "#e0e0e0", "stroke-width": 1,
    }));
    parts.push(text(margin.left - 8, y(t) + 4, fmt(t), { "text-anchor": "end" }));
  }
  for (const t of xTicks) {
    parts.push(el("line", {
      x1: x(t), x2: x(t), y1: height - margin.bottom, y2: height - margin.bottom + 5,
      stroke: "#222", "stroke-width": 1,
    }));
    parts.push(text(x(t), height - margin.bottom + 18, fmt(t), { "text-anchor": "middle" }));
  }
  parts.push(el("line", {
    x1: margin.left, x2: width - margin.right,
    y1: height - margin.bottom, y2: height - margin.bottom,
    stroke: "#222", "stroke-width": 1,
  }));
  parts.push(el("line", {
    x1: margin.left, x2: margin.left, y1: margin.top, y2: height - margin.bottom,
    stroke: "#222", "stroke-width": 1,
  }));
  parts.push(text(width / 2, height - 12, labels.x, { "text-anchor": "middle" }));
  parts.push(text(14, height / 2, labels.y, {
    "text-anchor": "middle", transform: `rotate(-90 14 ${height / 2})`,
  }));
  parts.push(text(width / 2, 20, labels.title, { "text-anchor": "middle", "font-size": 14, "font-weight": "bold" }));
  return { x, y, parts };
}

export function document(frame: Frame, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" ` +
    `viewBox="0 0 ${frame.width} ${frame.height}">` +
    body.join("") +
    "</svg>"
  );
}
