/**
 * Result-file schema (version 1), as written by the benchmark CLI.
 * Validation reports every missing key by path so schema drift is obvious.
 */

export const SCHEMA_VERSION = 1;

export interface MetricSeries {
  per_seed: number[][] | number[];
  index?: number[];
  index_name?: string;
  mean: number[] | number;
  std: number[] | number;
  p10?: number[];
  p90?: number[];
}

export interface PatchImages {
  delay: number;
  width: number;
  height: number;
  channels: number;
  truth: number[][];
  reconstructed: number[][];
}

export interface RunResult {
  engine: string;
  label: string;
  config: Record<string, unknown>;
  seeds: number[];
  metrics: Record<string, MetricSeries>;
  aggregates: Record<string, number>;
  images?: PatchImages[];
}

export interface ExperimentResult {
  schema_version: number;
  experiment: string;
  runs: RunResult[];
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

/** Validate the generic envelope; figure kinds check their own metrics. */
export function parseResult(raw: unknown): ExperimentResult {
  const missing: string[] = [];
  if (!isObject(raw)) {
    throw new Error("result file is not a JSON object");
  }
  for (const key of ["schema_version", "experiment", "runs"]) {
    if (!(key in raw)) missing.push(key);
  }
  if (missing.length > 0) {
    throw new Error(`result is missing keys: ${missing.join(", ")}`);
  }
  if (raw.schema_version !== SCHEMA_VERSION) {
    throw new Error(
      `results schema version ${String(raw.schema_version)} != supported ${SCHEMA_VERSION}`,
    );
  }
  const runs = raw.runs;
  if (!Array.isArray(runs) || runs.length === 0) {
    throw new Error("result has no runs");
  }
  runs.forEach((run, i) => {
    if (!isObject(run)) {
      missing.push(`runs[${i}]`);
      return;
    }
    for (const key of ["engine", "label", "config", "seeds", "metrics", "aggregates"]) {
      if (!(key in run)) missing.push(`runs[${i}].${key}`);
    }
  });
  if (missing.length > 0) {
    throw new Error(`result is missing keys: ${missing.join(", ")}`);
  }
  return raw as unknown as ExperimentResult;
}

/** Fetch a metric, reporting the exact missing path. */
export function requireMetric(run: RunResult, runIndex: number, name: string): MetricSeries {
  const metric = run.metrics[name];
  if (metric === undefined) {
    throw new Error(`result is missing keys: runs[${runIndex}].metrics.${name}`);
  }
  const missing: string[] = [];
  for (const key of ["per_seed", "mean", "std"]) {
    if (!(key in metric)) missing.push(`runs[${runIndex}].metrics.${name}.${key}`);
  }
  if (missing.length > 0) {
    throw new Error(`result is missing keys: ${missing.join(", ")}`);
  }
  const mean = metric.mean;
  if (Array.isArray(mean) && mean.length === 0) {
    throw new Error(`metric ${name} in runs[${runIndex}] is empty; refusing to draw an empty figure`);
  }
  return metric;
}

export function meanArray(metric: MetricSeries): number[] {
  return Array.isArray(metric.mean) ? metric.mean : [metric.mean];
}

export function stdArray(metric: MetricSeries): number[] {
  return Array.isArray(metric.std) ? metric.std : [metric.std];
}
