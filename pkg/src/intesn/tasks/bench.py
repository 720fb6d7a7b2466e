"""Wall-clock comparison of the two engines' update steps."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .. import hd
from ..reservoir import Esn, EsnConfig, IntEsn, IntEsnConfig, generate_esn_weights
from ..results import ExperimentResult, MetricSeries, RunResult
from .metrics import one_hot


@dataclass
class BenchConfig:
    n: int = 300
    steps: int = 2000
    repetitions: int = 5
    alphabet: int = 27
    kappa: int = 3
    rho: float = 0.94
    beta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("need at least one step to measure")
        if self.repetitions < 1:
            raise ValueError("need at least one repetition")


def _time_steps(step_fn, inputs) -> float:
    start = time.perf_counter()
    for u in inputs:
        step_fn(u)
    return time.perf_counter() - start


def run_bench(cfg: BenchConfig) -> ExperimentResult:
    """Median steps/second for both engines at equal n; setup excluded."""
    rng = np.random.default_rng(cfg.seed)
    tokens = rng.integers(0, cfg.alphabet, size=cfg.steps)

    im = hd.random_item_memory(cfg.alphabet, cfg.n, rng)
    int_inputs = [im.row(t) for t in tokens]
    int_engine = IntEsn(IntEsnConfig(n=cfg.n, kappa=cfg.kappa, input_memory=im))

    esn_cfg = EsnConfig(k=cfg.alphabet, l=cfg.alphabet, n=cfg.n, rho=cfg.rho, beta=cfg.beta)
    esn_engine = Esn(esn_cfg, generate_esn_weights(esn_cfg, rng))
    encode = one_hot(np.arange(cfg.alphabet), cfg.alphabet)
    esn_inputs = [encode[t] for t in tokens]

    int_times, esn_times = [], []
    for _ in range(cfg.repetitions):
        int_engine.reset()
        int_times.append(_time_steps(lambda u: int_engine.step(u), int_inputs))
        esn_engine.reset()
        esn_times.append(_time_steps(lambda u: esn_engine.step(u), esn_inputs))

    int_sps = cfg.steps / float(np.median(int_times))
    esn_sps = cfg.steps / float(np.median(esn_times))
    run = RunResult(
        engine="both",
        label=f"bench N={cfg.n}",
        config=asdict(cfg),
        seeds=[cfg.seed],
        metrics={
            "intesn_seconds": MetricSeries(
                per_seed=[int_times], index=list(range(cfg.repetitions)), index_name="repetition"
            ),
            "esn_seconds": MetricSeries(
                per_seed=[esn_times], index=list(range(cfg.repetitions)), index_name="repetition"
            ),
        },
        aggregates={
            "intesn_steps_per_sec": int_sps,
            "esn_steps_per_sec": esn_sps,
            "speedup": int_sps / esn_sps,
        },
    )
    return ExperimentResult(experiment="bench", runs=[run])
