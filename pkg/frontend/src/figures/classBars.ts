/** Classification accuracy bars, one per run, with std whiskers. */

import { ExperimentResult, meanArray, requireMetric, stdArray } from "../schema";
import { DEFAULT_FRAME, axes, document, el, PALETTE, text } from "../svg";

export function renderClassBars(result: ExperimentResult): string {
  const bars = result.runs.map((run, i) => {
    const metric = requireMetric(run, i, "accuracy");
    return {
      label: run.label,
      engine: run.engine,
      mean: meanArray(metric)[0],
      std: stdArray(metric)[0],
    };
  });
  if (bars.length === 0) {
    throw new Error("no runs to draw");
  }

  const frame = { ...DEFAULT_FRAME, margin: { ...DEFAULT_FRAME.margin, bottom: 80 } };
  const ax = axes(frame, [0, bars.length], [0, 1], {
    title: "Classification accuracy",
    x: "",
    y: "accuracy",
  }, { xTicks: [] });
  const parts = [...ax.parts];

  const slot = (ax.x.range[1] - ax.x.range[0]) / bars.length;
  const barWidth = Math.min(slot * 0.6, 80);
  const engineColor = new Map<string, string>();
  bars.forEach((bar, i) => {
    if (!engineColor.has(bar.engine)) engineColor.set(bar.engine, PALETTE[engineColor.size % PALETTE.length]);
    const cx = ax.x.range[0] + slot * (i + 0.5);
    const y0 = ax.y(0);
    const y1 = ax.y(bar.mean);
    parts.push(el("rect", {
      x: cx - barWidth / 2, y: y1, width: barWidth, height: Math.max(y0 - y1, 0),
      fill: engineColor.get(bar.engine)!, "data-role": "bar", "data-label": bar.label,
    }));
    const whiskTop = ax.y(Math.min(bar.mean + bar.std, 1));
    const whiskBot = ax.y(Math.max(bar.mean - bar.std, 0));
    parts.push(el("line", { x1: cx, x2: cx, y1: whiskTop, y2: whiskBot, stroke: "#222", "stroke-width": 1.5 }));
    for (const wy of [whiskTop, whiskBot]) {
      parts.push(el("line", { x1: cx - 6, x2: cx + 6, y1: wy, y2: wy, stroke: "#222", "stroke-width": 1.5 }));
    }
    parts.push(text(cx, frame.height - frame.margin.bottom + 16, bar.label, {
      "text-anchor": "end", "font-size": 10,
      transform: `rotate(-25 ${cx} ${frame.height - frame.margin.bottom + 16})`,
    }));
    parts.push(text(cx, y1 - 6, bar.mean.toFixed(3), { "text-anchor": "middle", "font-size": 10, fill: "#444" }));
  });

  return document(frame, parts);
}
