/**
 * Reconstructed patch grid: truth images across the top, one row per run
 * (reservoir size / clipping pair), one column per delay.
 */

import { ExperimentResult, PatchImages } from "../schema";
import { document, el, Frame, text } from "../svg";

const CELL = 96;
const GAP = 14;
const LEFT = 120;
const TOP = 56;

function imageCell(pixels: number[][], x: number, y: number, channels: number): string {
  const rows = pixels.length;
  const cols = channels === 1 ? pixels[0].length : pixels[0].length / channels;
  const px = CELL / cols;
  const py = CELL / rows;
  const parts: string[] = [];
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      let fill: string;
      if (channels === 1) {
        const v = Math.round(Math.min(Math.max(pixels[r][c], 0), 1) * 255);
        fill = `rgb(${v},${v},${v})`;
      } else {
        const base = c * channels;
        const rgb = [0, 1, 2].map((k) =>
          Math.round(Math.min(Math.max(pixels[r][base + k], 0), 1) * 255),
        );
        fill = `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
      }
      parts.push(el("rect", {
        x: x + c * px, y: y + r * py, width: px + 0.5, height: py + 0.5, fill,
      }));
    }
  }
  parts.push(el("rect", {
    x, y, width: CELL, height: CELL, fill: "none", stroke: "#999", "stroke-width": 0.5,
  }));
  return parts.join("");
}

export function renderPatchGrid(result: ExperimentResult): string {
  const withImages = result.runs.filter((run) => run.images && run.images.length > 0);
  if (withImages.length === 0) {
    throw new Error(
      "result is missing keys: runs[*].images (re-run the patches command without --no-embed-images)",
    );
  }
  const delays = withImages[0].images!.map((img) => img.delay);
  const cols = delays.length;
  const rows = withImages.length + 1; // truth row on top

  const frame: Frame = {
    width: LEFT + cols * (CELL + GAP) + GAP,
    height: TOP + rows * (CELL + GAP) + GAP,
    margin: { top: 0, right: 0, bottom: 0, left: 0 },
  };
  const parts: string[] = [el("rect", { x: 0, y: 0, width: frame.width, height: frame.height, fill: "white" })];
  parts.push(text(frame.width / 2, 22, "Patch reconstruction by reservoir size and delay", {
    "text-anchor": "middle", "font-size": 14, "font-weight": "bold",
  }));

  delays.forEach((delay, c) => {
    parts.push(text(LEFT + c * (CELL + GAP) + CELL / 2, TOP - 10, `delay ${delay}`, {
      "text-anchor": "middle", "font-size": 12,
    }));
  });

  const truthRow: PatchImages[] = withImages[0].images!;
  parts.push(text(LEFT - 10, TOP + CELL / 2, "stored", { "text-anchor": "end", "font-size": 12 }));
  truthRow.forEach((img, c) => {
    parts.push(imageCell(img.truth, LEFT + c * (CELL + GAP), TOP, img.channels));
  });

  withImages.forEach((run, r) => {
    const y = TOP + (r + 1) * (CELL + GAP);
    parts.push(text(LEFT - 10, y + CELL / 2, run.label, { "text-anchor": "end", "font-size": 12 }));
    run.images!.forEach((img, c) => {
      parts.push(imageCell(img.reconstructed, LEFT + c * (CELL + GAP), y, img.channels));
    });
  });

  return document(frame, parts);
}
