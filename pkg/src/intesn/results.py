"""Experiment result records.

A result is one experiment with one or more runs (engine variants); each
run carries per-seed metric series plus aggregate scalars. Serialization
to JSON/CSV lives in data_io; this module owns the structure and the
aggregation arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


@dataclass
class MetricSeries:
    """Per-seed values of one metric, optionally indexed (delay, step, ...).

    For an indexed metric per_seed is S x len(index); for a scalar metric
    index is None and per_seed is a flat list of length S.
    """

    per_seed: list
    index: list | None = None
    index_name: str | None = None
    percentiles: bool = False

    def _array(self) -> np.ndarray:
        return np.asarray(self.per_seed, dtype=np.float64)

    def validate(self, name: str) -> None:
        arr = self._array()
        if not np.isfinite(arr).all():
            raise ValueError(f"metric {name!r} contains non-finite values")
        if self.index is not None:
            if arr.ndim != 2 or arr.shape[1] != len(self.index):
                raise ValueError(f"metric {name!r} rows do not match its index")
        elif arr.ndim != 1:
            raise ValueError(f"scalar metric {name!r} must be one value per seed")
        if "accuracy" in name and arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError(f"metric {name!r} must lie in [0, 1]")

    def mean(self) -> np.ndarray:
        return self._array().mean(axis=0)

    def std(self) -> np.ndarray:
        return self._array().std(axis=0)

    def to_dict(self, name: str) -> dict:
        self.validate(name)
        arr = self._array()
        out: dict = {"per_seed": arr.tolist()}
        if self.index is not None:
            out["index"] = list(self.index)
            out["index_name"] = self.index_name or "index"
        out["mean"] = arr.mean(axis=0).tolist()
        out["std"] = arr.std(axis=0).tolist()
        if self.percentiles:
            out["p10"] = np.percentile(arr, 10, axis=0).tolist()
            out["p90"] = np.percentile(arr, 90, axis=0).tolist()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "MetricSeries":
        return cls(
            per_seed=d["per_seed"],
            index=d.get("index"),
            index_name=d.get("index_name"),
            percentiles="p10" in d,
        )


@dataclass
class RunResult:
    """One engine variant's outcome: config echo, seeds, metrics, aggregates."""

    engine: str
    label: str
    config: dict
    seeds: list[int]
    metrics: dict[str, MetricSeries] = field(default_factory=dict)
    aggregates: dict[str, float] = field(default_factory=dict)
    images: list[dict] | None = None

    def validate(self) -> None:
        for name, series in self.metrics.items():
            series.validate(name)
            arr = series._array()
            # a single row marks a deterministic series (e.g. ground truth)
            if arr.shape[0] not in (1, len(self.seeds)):
                raise ValueError(f"metric {name!r} has {arr.shape[0]} rows for {len(self.seeds)} seeds")
        for name, value in self.aggregates.items():
            if not np.isfinite(value):
                raise ValueError(f"aggregate {name!r} is not finite")

    def to_dict(self) -> dict:
        self.validate()
        out = {
            "engine": self.engine,
            "label": self.label,
            "config": self.config,
            "seeds": list(self.seeds),
            "metrics": {k: v.to_dict(k) for k, v in sorted(self.metrics.items())},
            "aggregates": {k: float(v) for k, v in sorted(self.aggregates.items())},
        }
        if self.images is not None:
            out["images"] = self.images
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RunResult":
        return cls(
            engine=d["engine"],
            label=d["label"],
            config=d["config"],
            seeds=d["seeds"],
            metrics={k: MetricSeries.from_dict(v) for k, v in d.get("metrics", {}).items()},
            aggregates=d.get("aggregates", {}),
            images=d.get("images"),
        )


@dataclass
class ExperimentResult:
    """A named experiment and its runs, ready for serialization."""

    experiment: str
    runs: list[RunResult]

    def validate(self) -> None:
        if not self.runs:
            raise ValueError("experiment result has no runs")
        for run in self.runs:
            run.validate()

    def run(self, label: str) -> RunResult:
        for r in self.runs:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        self.validate()
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "runs": [r.to_dict() for r in self.runs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"results schema version {version} != supported {SCHEMA_VERSION}")
        return cls(
            experiment=d["experiment"],
            runs=[RunResult.from_dict(r) for r in d["runs"]],
        )
