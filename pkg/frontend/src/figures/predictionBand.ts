/**
 * Free-run prediction bands: per run, the 10-90% percentile envelope is
 * shaded, the mean prediction drawn solid, and the ground truth dashed.
 * Multiple runs stack as vertical panels.
 */

import { ExperimentResult, MetricSeries, meanArray, requireMetric, RunResult } from "../schema";
import { DEFAULT_FRAME, Frame, PALETTE, axes, document, el, polylinePoints, text } from "../svg";

interface Band {
  run: RunResult;
  steps: number[];
  mean: number[];
  p10: number[];
  p90: number[];
  truth: number[];
}

function extractBand(run: RunResult, i: number): Band {
  const prediction = requireMetric(run, i, "prediction");
  const missing: string[] = [];
  if (!prediction.p10) missing.push(`runs[${i}].metrics.prediction.p10`);
  if (!prediction.p90) missing.push(`runs[${i}].metrics.prediction.p90`);
  if (!prediction.index) missing.push(`runs[${i}].metrics.prediction.index`);
  if (missing.length > 0) {
    throw new Error(`result is missing keys: ${missing.join(", ")}`);
  }
  const truthMetric: MetricSeries = requireMetric(run, i, "truth");
  return {
    run,
    steps: prediction.index!,
    mean: meanArray(prediction),
    p10: prediction.p10!,
    p90: prediction.p90!,
    truth: meanArray(truthMetric),
  };
}

function panel(band: Band, frame: Frame, color: string): string[] {
  const values = [...band.p10, ...band.p90, ...band.truth, ...band.mean];
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = (hi - lo || 1) * 0.08;
  const ax = axes(frame, [band.steps[0], band.steps[band.steps.length - 1]], [lo - pad, hi + pad], {
    title: `${band.run.label}: free-run prediction (10-90% band)`,
    x: "prediction step",
    y: "output",
  });
  const parts = [...ax.parts];
  const xs = band.steps.map(ax.x);
  const envelope =
    polylinePoints(xs, band.p90.map(ax.y)) +
    " " +
    polylinePoints([...xs].reverse(), [...band.p10].reverse().map(ax.y));
  parts.push(el("polygon", {
    points: envelope, fill: color, "fill-opacity": 0.25, stroke: "none", "data-role": "band",
  }));
  parts.push(el("polyline", {
    points: polylinePoints(xs, band.mean.map(ax.y)),
    fill: "none", stroke: color, "stroke-width": 2, "data-role": "mean",
  }));
  parts.push(el("polyline", {
    points: polylinePoints(xs, band.truth.map(ax.y)),
    fill: "none", stroke: "#222", "stroke-width": 1.5, "stroke-dasharray": "5 4", "data-role": "truth",
  }));
  parts.push(text(frame.width - frame.margin.right - 4, frame.margin.top + 12, "truth dashed", {
    "text-anchor": "end", "font-size": 11, fill: "#555",
  }));
  return parts;
}

export function renderPredictionBand(result: ExperimentResult): string {
  const bands = result.runs.map(extractBand);
  const panelHeight = DEFAULT_FRAME.height;
  const frame: Frame = { ...DEFAULT_FRAME, height: panelHeight * bands.length };
  const parts: string[] = [el("rect", { x: 0, y: 0, width: frame.width, height: frame.height, fill: "white" })];
  bands.forEach((band, i) => {
    const sub: Frame = {
      width: frame.width,
      height: panelHeight,
      margin: DEFAULT_FRAME.margin,
    };
    const body = panel(band, sub, PALETTE[i % PALETTE.length]).join("");
    parts.push(el("g", { transform: `translate(0 ${i * panelHeight})` }, body));
  });
  return document(frame, parts);
}
