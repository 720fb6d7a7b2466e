#!/usr/bin/env node
/**
 * plot <kind> <result.json> -o <figure.(svg|png)>
 *
 * kinds: delay-curves, patch-grid, class-bars, prediction-band.
 * Output format follows the file extension; PNG uses resvg.
 */

import { readFileSync, writeFileSync } from "fs";
import { FIGURE_KINDS, FigureKind, renderFromJson } from "./render";

function usage(): string {
  return (
    "usage: plot <kind> <result.json> -o <figure.svg|figure.png> [--scale N]\n" +
    `kinds: ${FIGURE_KINDS.join(", ")}`
  );
}

export function main(argv: string[]): number {
  const args = [...argv];
  let out = "";
  let scale = 2;
  const positional: string[] = [];
  while (args.length > 0) {
    const arg = args.shift()!;
    if (arg === "-o" || arg === "--out") {
      out = args.shift() ?? "";
    } else if (arg === "--scale") {
      scale = Number(args.shift() ?? "2");
    } else if (arg === "-h" || arg === "--help") {
      console.log(usage());
      return 0;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 2 || out === "") {
    console.error(usage());
    return 2;
  }
  const [kind, inputPath] = positional;
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown figure kind ${kind}; expected one of ${FIGURE_KINDS.join(", ")}`);
    return 2;
  }
  if (!(out.endsWith(".svg") || out.endsWith(".png"))) {
    console.error("output path must end in .svg or .png");
    return 2;
  }

  let svg: string;
  try {
    svg = renderFromJson(kind as FigureKind, readFileSync(inputPath, "utf-8"));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }

  if (out.endsWith(".svg")) {
    writeFileSync(out, svg);
  } else {
    let Resvg: typeof import("@resvg/resvg-js").Resvg;
    try {
      ({ Resvg } = require("@resvg/resvg-js"));
    } catch {
      console.error("PNG output needs the @resvg/resvg-js dependency; write .svg instead");
      return 1;
    }
    const png = new Resvg(svg, { fitTo: { mode: "zoom", value: scale } }).render().asPng();
    writeFileSync(out, png);
  }
  console.log(`wrote ${out}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
