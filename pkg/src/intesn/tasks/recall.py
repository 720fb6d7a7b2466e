"""Sequence recall: store a token stream, decode the token seen d steps ago.

One readout is trained per delay on one-hot targets; accuracy per delay on
a fresh token stream characterizes the reservoir's memory, and the summed
per-delay channel information gives a single capacity number.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .. import hd
from ..readout import readout_apply, ridge_fit
from ..reservoir import Esn, EsnConfig, IntEsn, IntEsnConfig, generate_esn_weights, run_collect
from ..results import ExperimentResult, MetricSeries, RunResult
from .metrics import decoded_information, one_hot, seed_map

ENGINE_KINDS = ("intesn", "intesn-large", "esn")


def large_multiplier(kappa: int) -> int:
    """How many clipped-integer neurons fit in one 32-bit float's budget."""
    return 32 // hd.bits_per_element(kappa)


@dataclass
class RecallConfig:
    engine: str = "intesn"
    n: int = 300
    alphabet: int = 27
    max_delay: int = 15
    train_len: int = 2000
    washout: int = 500
    test_len: int = 2000
    kappa: int = 3
    rho: float = 0.94
    beta: float = 0.1
    lam: float = 0.0
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    shuffled_control: bool = False

    def __post_init__(self):
        if self.engine not in ENGINE_KINDS:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.n < 1:
            raise ValueError(f"invalid reservoir size n={self.n}")
        if self.kappa < 1:
            raise ValueError(f"invalid clipping threshold kappa={self.kappa}")
        if self.alphabet < 2:
            raise ValueError(f"invalid alphabet size {self.alphabet}")
        if self.washout >= self.test_len:
            raise ValueError("washout must be smaller than the test length")
        if self.max_delay >= self.train_len - self.washout:
            raise ValueError("max delay must be smaller than the kept training length")
        if self.max_delay >= self.washout:
            raise ValueError("washout must cover the largest delay")
        if not self.seeds:
            raise ValueError("need at least one seed")

    @property
    def effective_n(self) -> int:
        if self.engine == "intesn-large":
            return self.n * large_multiplier(self.kappa)
        return self.n


def _delay_targets(tokens: np.ndarray, kept: np.ndarray, delay: int, width: int) -> np.ndarray:
    return one_hot(tokens[kept - delay], width)


def _run_seed(cfg: RecallConfig, seed: int) -> np.ndarray:
    """Per-delay decoding accuracy for one network initialization."""
    ss = np.random.SeedSequence(seed)
    setup_rng, train_rng, test_rng, ctl_rng = [np.random.default_rng(c) for c in ss.spawn(4)]
    d = cfg.alphabet
    n = cfg.effective_n

    train_tokens = train_rng.integers(0, d, size=cfg.train_len)
    test_tokens = test_rng.integers(0, d, size=cfg.test_len)

    if cfg.engine == "esn":
        esn_cfg = EsnConfig(k=d, l=d, n=n, rho=cfg.rho, beta=cfg.beta)
        engine = Esn(esn_cfg, generate_esn_weights(esn_cfg, setup_rng))
        encode = one_hot(np.arange(d), d)
        inputs_train = [encode[t] for t in train_tokens]
        inputs_test = [encode[t] for t in test_tokens]
    else:
        im = hd.random_item_memory(d, n, setup_rng)
        engine = IntEsn(IntEsnConfig(n=n, kappa=cfg.kappa, input_memory=im))
        inputs_train = [im.row(t) for t in train_tokens]
        inputs_test = [im.row(t) for t in test_tokens]

    states_train = run_collect(engine, inputs_train, washout=cfg.washout)
    engine.reset()
    states_test = run_collect(engine, inputs_test, washout=cfg.washout)

    kept_train = np.arange(cfg.washout, cfg.train_len)
    kept_test = np.arange(cfg.washout, cfg.test_len)
    if cfg.shuffled_control:
        train_tokens = ctl_rng.integers(0, d, size=cfg.train_len)

    # one readout per delay, fit jointly (columns are independent, so one
    # stacked solve equals per-delay fits)
    targets = np.hstack(
        [_delay_targets(train_tokens, kept_train, delay, d) for delay in range(cfg.max_delay + 1)]
    )
    readout = ridge_fit(states_train, targets, cfg.lam)
    scores = readout_apply(readout, states_test)
    accuracies = np.empty(cfg.max_delay + 1)
    for delay in range(cfg.max_delay + 1):
        decoded = np.argmax(scores[:, delay * d : (delay + 1) * d], axis=1)
        accuracies[delay] = float(np.mean(decoded == test_tokens[kept_test - delay]))
    return accuracies


def run_recall(cfg: RecallConfig, jobs: int = 1) -> ExperimentResult:
    delays = list(range(cfg.max_delay + 1))
    per_seed = seed_map(lambda seed: _run_seed(cfg, seed), cfg.seeds, jobs)
    info_bits = [decoded_information(acc, cfg.alphabet) for acc in per_seed]
    mean_acc = np.mean(per_seed, axis=0)
    run = RunResult(
        engine=cfg.engine,
        label=f"{cfg.engine} N={cfg.n}",
        config=asdict(cfg),
        seeds=list(cfg.seeds),
        metrics={
            "accuracy": MetricSeries(per_seed=[a.tolist() for a in per_seed], index=delays, index_name="delay"),
            "decoded_information_bits": MetricSeries(per_seed=info_bits),
        },
        aggregates={
            "decoded_information_bits_mean": float(np.mean(info_bits)),
            "accuracy_at_delay_0": float(mean_acc[0]),
            "chance": 1.0 / cfg.alphabet,
        },
    )
    return ExperimentResult(experiment="recall", runs=[run])
