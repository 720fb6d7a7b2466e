/** Figure-kind dispatch. */

import { ExperimentResult, parseResult } from "./schema";
import { renderClassBars } from "./figures/classBars";
import { renderDelayCurves } from "./figures/delayCurves";
import { renderPatchGrid } from "./figures/patchGrid";
import { renderPredictionBand } from "./figures/predictionBand";

export const FIGURE_KINDS = ["delay-curves", "patch-grid", "class-bars", "prediction-band"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export function render(kind: FigureKind, result: ExperimentResult): string {
  switch (kind) {
    case "delay-curves":
      return renderDelayCurves(result);
    case "patch-grid":
      return renderPatchGrid(result);
    case "class-bars":
      return renderClassBars(result);
    case "prediction-band":
      return renderPredictionBand(result);
    default:
      throw new Error(`unknown figure kind ${String(kind)}`);
  }
}

export function renderFromJson(kind: FigureKind, rawJson: string): string {
  return render(kind, parseResult(JSON.parse(rawJson)));
}
