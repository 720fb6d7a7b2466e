"""Signal generation: teacher-forced training, then free-running prediction.

The network sees only its own output fed back through the feedback path
(no input layer). The integer engine must quantize each prediction to look
up a feedback vector in its level item memory, so quantization error
compounds over the horizon; the float baseline optionally runs in
quantized modes to expose the same effect.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .. import hd
from ..data_io import ModelFile
from ..readout import readout_apply, ridge_fit
from ..reservoir import Esn, EsnConfig, IntEsn, IntEsnConfig, generate_esn_weights, run_collect
from ..results import ExperimentResult, MetricSeries, RunResult
from .metrics import nrmse, seed_map

QUANTIZE_MODES = ("none", "train", "both")


def sine_series(length: int, start: int = 0) -> np.ndarray:
    """y(n) = 0.5 sin(n/4)."""
    n = np.arange(start, start + length, dtype=np.float64)
    return 0.5 * np.sin(n / 4.0)


def mackey_glass(
    length: int,
    tau: float = 17.0,
    a: float = 0.2,
    b: float = 0.1,
    n_exp: float = 10.0,
    dt: float = 0.1,
    x0: float = 1.2,
) -> np.ndarray:
    """Delay-differential series dx/dt = a*x(t-tau)/(1+x(t-tau)^n_exp) - b*x(t).

    Fourth-order Runge-Kutta at substep dt with constant history x0,
    subsampled to unit time steps. Deterministic.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    per_unit = int(round(1.0 / dt))
    steps = length * per_unit
    lag = tau / dt
    history = np.full(steps + 1, x0, dtype=np.float64)

    def delayed(i: float) -> float:
        # linear interpolation into the dt-grid history; constant before t=0
        j = i - lag
        if j <= 0.0:
            return x0
        j0 = int(np.floor(j))
        frac = j - j0
        if j0 + 1 > steps:
            return history[steps]
        return history[j0] * (1.0 - frac) + history[min(j0 + 1, steps)] * frac

    def f(x: float, xd: float) -> float:
        return a * xd / (1.0 + xd**n_exp) - b * x

    for i in range(steps):
        x = history[i]
        k1 = f(x, delayed(i))
        k2 = f(x + 0.5 * dt * k1, delayed(i + 0.5))
        k3 = f(x + 0.5 * dt * k2, delayed(i + 0.5))
        k4 = f(x + dt * k3, delayed(i + 1.0))
        history[i + 1] = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return history[per_unit::per_unit][:length].copy()


def squash(series: np.ndarray) -> np.ndarray:
    """The customary generator preprocessing for the Mackey-Glass series."""
    return np.tanh(np.asarray(series) - 1.0)


@dataclass
class GeneratorConfig:
    engine: str = "intesn"
    n: int = 1000
    kappa: int = 3
    rho: float = 0.8
    beta: float = 1.0
    lam: float = 0.0
    train_len: int = 3000
    washout: int = 1000
    horizon: int = 100
    q_lo: float = -0.5
    q_hi: float = 0.5
    q_step: float = 0.01
    quantize_esn: str = "none"  # none | train | both
    teacher_noise: float = 0.0  # feedback jitter during training; stabilizes free-run
    seeds: list[int] = field(default_factory=lambda: list(range(100)))

    def __post_init__(self):
        if self.engine not in ("intesn", "esn"):
            raise ValueError(f"unknown generator engine {self.engine!r}")
        if self.n < 1:
            raise ValueError(f"invalid reservoir size n={self.n}")
        if self.kappa < 1:
            raise ValueError(f"invalid clipping threshold kappa={self.kappa}")
        if self.quantize_esn not in QUANTIZE_MODES:
            raise ValueError(f"quantize mode must be one of {QUANTIZE_MODES}")
        if self.washout >= self.train_len:
            raise ValueError("washout must be smaller than the training length")
        if self.horizon < 2:
            raise ValueError("horizon must be >= 2")
        if not self.seeds:
            raise ValueError("need at least one seed")

    def quantizer(self) -> hd.Quantizer:
        return hd.Quantizer(lo=self.q_lo, hi=self.q_hi, step=self.q_step)


def _fed_back(cfg: GeneratorConfig, teacher: np.ndarray, seed_seq) -> np.ndarray:
    if cfg.teacher_noise == 0.0:
        return teacher
    noise_rng = np.random.default_rng(seed_seq)
    return teacher + cfg.teacher_noise * noise_rng.standard_normal(len(teacher))


def fit_model(cfg: GeneratorConfig, target: np.ndarray, seed: int, name: str = "generator") -> ModelFile:
    """Train one generator and package it, reservoir state included.

    The free run continues from the post-training state, so persisting the
    state is what makes saved and live predictions identical.
    """
    q = cfg.quantizer()
    setup_seq, noise_seq = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(setup_seq)
    train = np.asarray(target[: cfg.train_len], dtype=np.float64)

    model = ModelFile(
        engine=cfg.engine,
        config={**asdict(cfg), "task": name},
        seed=seed,
        extra={
            "task": name,
            "quantizer": {"lo": q.lo, "hi": q.hi, "step": q.step},
            "last_teacher": float(train[-1]),
        },
    )
    if cfg.engine == "intesn":
        memory = hd.linear_level_memory(q.levels, cfg.n, rng)
        engine = IntEsn(IntEsnConfig(n=cfg.n, kappa=cfg.kappa, output_memory=memory))
        fed = _fed_back(cfg, train, noise_seq)
        teacher_rows = [memory.row(q.index(float(v))) for v in fed]
        states = run_collect(engine, [None] * cfg.train_len, teachers=teacher_rows, washout=cfg.washout)
        readout = ridge_fit(states, q.quantize(train[cfg.washout :]).reshape(-1, 1), cfg.lam)
        model.item_memories = {"output": memory}
        model.state = engine.state
        model.state_bound = cfg.kappa
    else:
        esn_cfg = EsnConfig(k=0, l=1, n=cfg.n, rho=cfg.rho, beta=cfg.beta)
        engine = Esn(esn_cfg, generate_esn_weights(esn_cfg, rng))
        teacher = q.quantize(train) if cfg.quantize_esn in ("train", "both") else train
        teachers = [np.array([v]) for v in _fed_back(cfg, teacher, noise_seq)]
        states = run_collect(engine, [None] * cfg.train_len, teachers=teachers, washout=cfg.washout)
        readout = ridge_fit(states, teacher[cfg.washout :].reshape(-1, 1), cfg.lam)
        model.esn_weights = engine.weights
        model.state = engine.state
        model.extra["last_teacher"] = float(teacher[-1])
    model.readouts = {"generator": readout}
    return model


def model_generate(model: ModelFile, horizon: int) -> np.ndarray:
    """Free-run a saved generator for the given number of steps."""
    cfg = model.config
    qd = model.extra["quantizer"]
    q = hd.Quantizer(lo=qd["lo"], hi=qd["hi"], step=qd["step"])
    readout = model.readouts["generator"]
    predictions = np.empty(horizon)
    if model.engine == "intesn":
        memory = model.item_memories["output"]
        engine = IntEsn(IntEsnConfig(n=memory.dim, kappa=cfg["kappa"], output_memory=memory))
        engine.reset(model.state)
        feedback = memory.row(q.index(model.extra["last_teacher"]))
        for step in range(horizon):
            state = engine.step(None, feedback)
            y = float(readout_apply(readout, state.astype(np.float64))[0])
            predictions[step] = y
            feedback = memory.row(q.index(y))
    else:
        esn_cfg = EsnConfig(
            k=0, l=1, n=model.esn_weights.w.shape[0], rho=cfg["rho"], beta=cfg["beta"]
        )
        engine = Esn(esn_cfg, model.esn_weights)
        engine.reset(model.state)
        feedback = float(model.extra["last_teacher"])
        for step in range(horizon):
            state = engine.step(None, np.array([feedback]))
            y = float(readout_apply(readout, state)[0])
            predictions[step] = y
            feedback = q.quantize(y) if cfg["quantize_esn"] == "both" else y
    return predictions


def run_generator(cfg: GeneratorConfig, target: np.ndarray, name: str = "generator", jobs: int = 1) -> ExperimentResult:
    """Train on target[:train_len], free-run horizon steps, compare to the rest."""
    target = np.asarray(target, dtype=np.float64)
    if len(target) < cfg.train_len + cfg.horizon:
        raise ValueError(
            f"target series has {len(target)} samples, need train_len + horizon = "
            f"{cfg.train_len + cfg.horizon}"
        )
    q = cfg.quantizer()
    train = target[: cfg.train_len]
    if cfg.engine == "intesn" or cfg.quantize_esn != "none":
        if train.min() < q.lo - 1e-12 or train.max() > q.hi + 1e-12:
            raise ValueError(
                f"target range [{train.min():.4g}, {train.max():.4g}] violates the "
                f"quantizer range [{q.lo}, {q.hi}]"
            )

    truth = target[cfg.train_len : cfg.train_len + cfg.horizon]
    predictions = seed_map(
        lambda seed: model_generate(fit_model(cfg, target, seed, name), cfg.horizon), cfg.seeds, jobs
    )
    # nrmse is undefined for a constant truth; plain rmse then
    if truth.std() > 0.0:
        error_name = "nrmse"
        errors = [nrmse(p, truth) for p in predictions]
    else:
        error_name = "rmse"
        errors = [float(np.sqrt(np.mean((p - truth) ** 2))) for p in predictions]

    label = cfg.engine if cfg.quantize_esn == "none" else f"{cfg.engine}-q{cfg.quantize_esn}"
    run = RunResult(
        engine=cfg.engine,
        label=label,
        config={**asdict(cfg), "task": name},
        seeds=list(cfg.seeds),
        metrics={
            "prediction": MetricSeries(
                per_seed=[p.tolist() for p in predictions],
                index=list(range(cfg.horizon)),
                index_name="step",
                percentiles=True,
            ),
            "truth": MetricSeries(per_seed=[truth.tolist()], index=list(range(cfg.horizon)), index_name="step"),
            error_name: MetricSeries(per_seed=errors),
        },
        aggregates={
            f"{error_name}_median": float(np.median(errors)),
            f"{error_name}_mean": float(np.mean(errors)),
        },
    )
    return ExperimentResult(experiment=name, runs=[run])
