"""Time-series classification in endpoints mode.

Each series drives a freshly reset reservoir; only its final state is
kept. A single readout is fit on all final training states with one-hot
class targets and evaluated on the test split.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .. import hd
from ..data_io import ModelFile, TimeSeriesDataset
from ..readout import readout_apply, ridge_fit, winner_take_all
from ..reservoir import Esn, EsnConfig, IntEsn, IntEsnConfig, generate_esn_weights
from ..results import ExperimentResult, MetricSeries, RunResult
from .metrics import one_hot, seed_map
from .recall import ENGINE_KINDS, large_multiplier


@dataclass
class ClassifyConfig:
    engine: str = "intesn"
    n: int = 800
    kappa: int = 7
    rho: float = 0.99
    beta: float = 0.25
    lam: float = 1.0
    levels: int = 21
    range_pad: float = 0.05
    large_multiplier_override: int | None = None  # e.g. 2 for heavily overfitting sets
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    shuffled_control: bool = False  # fresh label shuffle per seed

    def __post_init__(self):
        if self.engine not in ENGINE_KINDS:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.n < 1:
            raise ValueError(f"invalid reservoir size n={self.n}")
        if self.kappa < 1:
            raise ValueError(f"invalid clipping threshold kappa={self.kappa}")
        if self.levels < 2:
            raise ValueError("need at least 2 quantization levels")
        if not self.seeds:
            raise ValueError("need at least one seed")

    @property
    def effective_n(self) -> int:
        if self.engine == "intesn-large":
            mult = self.large_multiplier_override or large_multiplier(self.kappa)
            return self.n * mult
        return self.n


def _value_quantizer(dataset: TimeSeriesDataset, cfg: ClassifyConfig) -> hd.Quantizer:
    lo, hi = dataset.value_range()
    span = max(hi - lo, 1e-6)
    lo -= cfg.range_pad * span
    hi += cfg.range_pad * span
    step = (hi - lo) / (cfg.levels - 1)
    # snap bounds onto the step grid so the quantizer accepts them
    lo = round(lo / step) * step
    hi = lo + (cfg.levels - 1) * step
    return hd.Quantizer(lo=lo, hi=hi, step=step)


class _IntEncoder:
    """Per-variable scatter-code memories over a shared quantizer."""

    def __init__(self, quantizer: hd.Quantizer, memories: list[hd.ItemMemory]):
        self.quantizer = quantizer
        self.memories = memories

    @classmethod
    def fresh(cls, dataset: TimeSeriesDataset, cfg: ClassifyConfig, n: int, rng) -> "_IntEncoder":
        quantizer = _value_quantizer(dataset, cfg)
        memories = [hd.scatter_level_memory(quantizer.levels, n, rng) for _ in range(dataset.variables)]
        return cls(quantizer, memories)

    def drive(self, engine: IntEsn, series: np.ndarray) -> None:
        if len(self.memories) == 1:
            memory = self.memories[0]
            for value in series[:, 0]:
                engine.step(memory.row(self.quantizer.index(float(value))))
        else:
            for sample in series:
                total = np.zeros(engine.n, dtype=np.int32)
                for v, value in enumerate(sample):
                    total += self.memories[v].row(self.quantizer.index(float(value)))
                engine.absorb(total)


def _final_states(engine, encoder, split, esn: bool) -> np.ndarray:
    states = np.empty((len(split), engine.n))
    for i, (series, _) in enumerate(split):
        engine.reset()
        if esn:
            for sample in series:
                engine.step(sample)
        else:
            encoder.drive(engine, series)
        states[i] = engine.state
    return states


def _fit(dataset: TimeSeriesDataset, cfg: ClassifyConfig, seed: int):
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n = cfg.effective_n
    if cfg.engine == "esn":
        esn_cfg = EsnConfig(k=dataset.variables, l=dataset.classes, n=n, rho=cfg.rho, beta=cfg.beta)
        engine = Esn(esn_cfg, generate_esn_weights(esn_cfg, rng))
        encoder = None
    else:
        encoder = _IntEncoder.fresh(dataset, cfg, n, rng)
        engine = IntEsn(IntEsnConfig(n=n, kappa=cfg.kappa, input_memory=encoder.memories[0]))

    train_states = _final_states(engine, encoder, dataset.train, cfg.engine == "esn")
    targets = one_hot([label for _, label in dataset.train], dataset.classes)
    readout = ridge_fit(train_states, targets, cfg.lam)
    return engine, encoder, readout


def _shuffle_train_labels(dataset: TimeSeriesDataset, seed: int) -> TimeSeriesDataset:
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5F]))
    labels = [label for _, label in dataset.train]
    perm = rng.permutation(len(labels))
    return TimeSeriesDataset(
        name=dataset.name + "_shuffled",
        variables=dataset.variables,
        classes=dataset.classes,
        train=[(series, labels[perm[i]]) for i, (series, _) in enumerate(dataset.train)],
        test=dataset.test,
        label_names=dataset.label_names,
    )


def _run_seed(dataset: TimeSeriesDataset, cfg: ClassifyConfig, seed: int) -> float:
    if cfg.shuffled_control:
        dataset = _shuffle_train_labels(dataset, seed)
    engine, encoder, readout = _fit(dataset, cfg, seed)
    test_states = _final_states(engine, encoder, dataset.test, cfg.engine == "esn")
    predicted = np.argmax(readout_apply(readout, test_states), axis=1)
    actual = np.array([label for _, label in dataset.test])
    return float(np.mean(predicted == actual))


def fit_model(dataset: TimeSeriesDataset, cfg: ClassifyConfig, seed: int) -> ModelFile:
    """Train on one seed and package the classifier for persistence."""
    engine, encoder, readout = _fit(dataset, cfg, seed)
    config = asdict(cfg)
    config.update(dataset=dataset.name, variables=dataset.variables, classes=dataset.classes)
    model = ModelFile(
        engine="esn" if cfg.engine == "esn" else "intesn",
        config=config,
        seed=seed,
        readouts={"classify": readout},
        extra={"task": "classify", "label_names": list(dataset.label_names)},
    )
    if cfg.engine == "esn":
        model.esn_weights = engine.weights
    else:
        model.item_memories = {f"var{v}": m for v, m in enumerate(encoder.memories)}
        q = encoder.quantizer
        model.extra["quantizer"] = {"lo": q.lo, "hi": q.hi, "step": q.step}
    return model


def model_predict(model: ModelFile, series: np.ndarray) -> int:
    """Class decision for one (T x variables) series from a saved model."""
    cfg = model.config
    series = np.atleast_2d(np.asarray(series, dtype=np.float64))
    if model.engine == "esn":
        esn_cfg = EsnConfig(
            k=cfg["variables"], l=cfg["classes"], n=model.esn_weights.w.shape[0],
            rho=cfg["rho"], beta=cfg["beta"],
        )
        engine = Esn(esn_cfg, model.esn_weights)
        for sample in series:
            engine.step(sample)
    else:
        qd = model.extra["quantizer"]
        memories = [model.item_memories[f"var{v}"] for v in range(cfg["variables"])]
        encoder = _IntEncoder(hd.Quantizer(lo=qd["lo"], hi=qd["hi"], step=qd["step"]), memories)
        engine = IntEsn(IntEsnConfig(n=memories[0].dim, kappa=cfg["kappa"], input_memory=memories[0]))
        encoder.drive(engine, series)
    return winner_take_all(readout_apply(model.readouts["classify"], engine.state.astype(np.float64)))


def run_classify(dataset: TimeSeriesDataset, cfg: ClassifyConfig, jobs: int = 1) -> ExperimentResult:
    if not dataset.test:
        raise ValueError(f"dataset {dataset.name!r} has no test split")
    train_labels = {label for _, label in dataset.train}
    missing = sorted({label for _, label in dataset.test} - train_labels)
    if missing:
        names = [dataset.label_names[m] for m in missing]
        raise ValueError(f"classes {names} appear in the test split but not in training")

    accuracies = seed_map(lambda seed: _run_seed(dataset, cfg, seed), cfg.seeds, jobs)
    config = asdict(cfg)
    config["dataset"] = dataset.name
    config["variables"] = dataset.variables
    config["classes"] = dataset.classes
    run = RunResult(
        engine=cfg.engine,
        label=f"{cfg.engine} {dataset.name}",
        config=config,
        seeds=list(cfg.seeds),
        metrics={"accuracy": MetricSeries(per_seed=accuracies)},
        aggregates={
            "accuracy_mean": float(np.mean(accuracies)),
            "accuracy_std": float(np.std(accuracies)),
            "chance": 1.0 / dataset.classes,
        },
    )
    return ExperimentResult(experiment="classify", runs=[run])
