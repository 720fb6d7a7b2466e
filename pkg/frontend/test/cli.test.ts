import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli";

const GOLDEN = join(__dirname, "golden");

describe("plot command", () => {
  it("writes an SVG figure", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const out = join(dir, "recall.svg");
    const code = main(["delay-curves", join(GOLDEN, "recall_golden.json"), "-o", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf-8")).toContain("chance 1/27");
  });

  it("writes a PNG figure", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const out = join(dir, "band.png");
    const code = main(["prediction-band", join(GOLDEN, "sine_golden.json"), "-o", out]);
    expect(code).toBe(0);
    const bytes = readFileSync(out);
    expect(bytes.subarray(1, 4).toString()).toBe("PNG");
  });

  it("rejects unknown kinds with exit 2", () => {
    expect(main(["pie-chart", join(GOLDEN, "recall_golden.json"), "-o", "x.svg"])).toBe(2);
  });

  it("requires -o", () => {
    expect(main(["delay-curves", join(GOLDEN, "recall_golden.json")])).toBe(2);
  });

  it("fails cleanly on a malformed result", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const bad = join(dir, "bad.json");
    require("fs").writeFileSync(bad, JSON.stringify({ schema_version: 1 }));
    expect(main(["delay-curves", bad, "-o", join(dir, "x.svg")])).toBe(1);
  });
});
