/**
 * Accuracy-vs-delay curves: one curve per run (solid float baseline,
 * dashed integer engine), with the 1/D chance floor drawn and labelled.
 */

import { ExperimentResult, meanArray, requireMetric } from "../schema";
import { DEFAULT_FRAME, PALETTE, axes, document, el, polylinePoints, text } from "../svg";

function chanceLevel(result: ExperimentResult): number {
  for (const run of result.runs) {
    if (typeof run.aggregates.chance === "number") return run.aggregates.chance;
    const alphabet = run.config.alphabet;
    if (typeof alphabet === "number" && alphabet >= 2) return 1 / alphabet;
  }
  return 1 / 27;
}

function chanceLabel(chance: number): string {
  const denom = Math.round(1 / chance);
  return Math.abs(1 / denom - chance) < 1e-9 ? `1/${denom}` : chance.toFixed(3);
}

/** Same hue for runs that differ only by engine, so pairs read together. */
function hueKey(label: string): string {
  return label.replace(/^(esn|intesn-large|intesn)\s*/, "");
}

export function renderDelayCurves(result: ExperimentResult): string {
  const runs = result.runs;
  const series = runs.map((run, i) => {
    const metric = requireMetric(run, i, "accuracy");
    if (!metric.index || metric.index.length === 0) {
      throw new Error(`runs[${i}].metrics.accuracy has no delay index`);
    }
    return { run, delays: metric.index, mean: meanArray(metric) };
  });

  const maxDelay = Math.max(...series.map((s) => s.delays[s.delays.length - 1]));
  const frame = DEFAULT_FRAME;
  const ax = axes(frame, [0, maxDelay], [0, 1], {
    title: "Decoding accuracy vs delay",
    x: "delay (steps)",
    y: "accuracy",
  });
  const parts = [...ax.parts];

  const chance = chanceLevel(result);
  parts.push(el("line", {
    x1: ax.x(0), x2: ax.x(maxDelay), y1: ax.y(chance), y2: ax.y(chance),
    stroke: "#888", "stroke-width": 1, "stroke-dasharray": "2 3", "data-role": "chance-line",
  }));
  parts.push(text(ax.x(maxDelay) - 4, ax.y(chance) - 5, `chance ${chanceLabel(chance)}`, {
    "text-anchor": "end", fill: "#666", "font-size": 11, "data-role": "chance-label",
  }));

  const hues = new Map<string, string>();
  series.forEach((s, i) => {
    const key = hueKey(s.run.label);
    if (!hues.has(key)) hues.set(key, PALETTE[hues.size % PALETTE.length]);
    const color = hues.get(key)!;
    const dashed = s.run.engine.startsWith("intesn");
    parts.push(el("polyline", {
      points: polylinePoints(s.delays.map(ax.x), s.mean.map(ax.y)),
      fill: "none", stroke: color, "stroke-width": 2,
      ...(dashed ? { "stroke-dasharray": "6 4" } : {}),
      "data-role": "curve", "data-label": s.run.label,
    }));
    const lx = frame.width - frame.margin.right - 150;
    const ly = frame.margin.top + 14 * i + 6;
    parts.push(el("line", {
      x1: lx, x2: lx + 22, y1: ly - 4, y2: ly - 4, stroke: color, "stroke-width": 2,
      ...(dashed ? { "stroke-dasharray": "6 4" } : {}),
    }));
    parts.push(text(lx + 28, ly, s.run.label, { "font-size": 11 }));
  });

  return document(frame, parts);
}
