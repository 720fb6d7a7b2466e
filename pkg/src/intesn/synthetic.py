"""Tiny synthetic stand-ins for the published classification datasets.

Each generator keeps the real dataset's shape (variable count, class
count, length range) but at CI-friendly sizes, since redistributing the
originals is out of scope. Series are class-dependent smooth signals with
additive noise, generated deterministically from a seed.
"""

from __future__ import annotations

import numpy as np

from .data_io import TimeSeriesDataset

# name: (variables, classes, length range, train per class, test per class)
STAND_IN_SHAPES = {
    "swedish_leaf": (1, 15, (128, 128), 4, 3),
    "distal_phalanx": (1, 3, (80, 80), 8, 6),
    "ecg": (1, 2, (96, 96), 12, 10),
    "wafer": (1, 2, (152, 152), 12, 10),
    "character_trajectories": (3, 20, (60, 182), 3, 2),
    "spoken_arabic_digit": (13, 10, (20, 93), 4, 3),
    "japanese_vowels": (12, 9, (7, 29), 5, 4),
}


def _class_series(rng, length, variables, levels, freqs, phases, noise):
    t = np.arange(length)[:, None]
    signal = levels + 0.3 * np.sin(2 * np.pi * freqs * t / max(length, 1) + phases)
    return np.clip(signal + noise * rng.standard_normal((length, variables)), -1.0, 1.0)


def stand_in(name: str, seed: int = 0, noise: float = 0.08) -> TimeSeriesDataset:
    """Synthetic dataset shaped like the named published one."""
    if name not in STAND_IN_SHAPES:
        raise ValueError(f"unknown stand-in {name!r}; choose from {sorted(STAND_IN_SHAPES)}")
    variables, classes, (t_lo, t_hi), per_class_train, per_class_test = STAND_IN_SHAPES[name]
    rng = np.random.default_rng(seed)
    levels = rng.uniform(-0.7, 0.7, size=(classes, variables))
    freqs = rng.uniform(1.0, 5.0, size=(classes, variables))
    phases = rng.uniform(0, 2 * np.pi, size=(classes, variables))

    def make_split(per_class):
        split = []
        for c in range(classes):
            for _ in range(per_class):
                length = int(rng.integers(t_lo, t_hi + 1))
                split.append((_class_series(rng, length, variables, levels[c], freqs[c], phases[c], noise), c))
        return split

    return TimeSeriesDataset(
        name=name,
        variables=variables,
        classes=classes,
        train=make_split(per_class_train),
        test=make_split(per_class_test),
        label_names=[str(c) for c in range(classes)],
    )


def separable_two_class(seed: int = 0, n_train: int = 40, n_test: int = 40, length: int = 50) -> TimeSeriesDataset:
    """Two constant-level classes far apart; endpoints are trivially separable."""
    rng = np.random.default_rng(seed)

    def make(count):
        split = []
        for i in range(count):
            c = i % 2
            level = -0.5 if c == 0 else 0.5
            series = np.full((length, 1), level) + 0.01 * rng.standard_normal((length, 1))
            split.append((np.clip(series, -1, 1), c))
        return split

    return TimeSeriesDataset(
        name="separable_two_class", variables=1, classes=2,
        train=make(n_train), test=make(n_test), label_names=["0", "1"],
    )


def noisy_two_class(seed: int = 0, n_train: int = 60, n_test: int = 60, length: int = 60, noise: float = 0.45) -> TimeSeriesDataset:
    """Two overlapping classes; accuracy depends on reservoir capacity."""
    rng = np.random.default_rng(seed)

    def make(count):
        split = []
        for i in range(count):
            c = i % 2
            level = -0.18 if c == 0 else 0.18
            series = level + noise * rng.standard_normal((length, 1))
            split.append((np.clip(series, -1, 1), c))
        return split

    return TimeSeriesDataset(
        name="noisy_two_class", variables=1, classes=2,
        train=make(n_train), test=make(n_test), label_names=["0", "1"],
    )


def shuffle_labels(dataset: TimeSeriesDataset, seed: int = 0) -> TimeSeriesDataset:
    """Control dataset with training labels randomly permuted."""
    rng = np.random.default_rng(seed)
    labels = [label for _, label in dataset.train]
    perm = rng.permutation(len(labels))
    shuffled = [(series, labels[perm[i]]) for i, (series, _) in enumerate(dataset.train)]
    return TimeSeriesDataset(
        name=dataset.name + "_shuffled",
        variables=dataset.variables,
        classes=dataset.classes,
        train=shuffled,
        test=dataset.test,
        label_names=dataset.label_names,
    )
