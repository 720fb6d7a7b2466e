"""Shared experiment metrics and the seed work-queue helper."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def seed_map(fn, seeds, jobs: int = 1) -> list:
    """Run fn over seeds, optionally on a bounded worker pool.

    Results come back in seed order regardless of completion order; each
    call builds its own engines and generators, so workers share nothing.
    """
    if jobs <= 1 or len(seeds) <= 1:
        return [fn(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, seeds))


def nrmse(pred, truth) -> float:
    """Root-mean-square error normalized by the truth's standard deviation."""
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size < 2:
        raise ValueError("need at least 2 samples")
    sd = truth.std()
    if sd == 0.0:
        raise ValueError("truth has zero variance")
    return float(np.sqrt(np.mean((pred - truth) ** 2)) / sd)


def decoded_information(accuracies, alphabet_size: int) -> float:
    """Total bits recoverable across delays, summed per-delay channel information.

    Each delay is treated as a symmetric channel over the alphabet: correct
    with probability p, otherwise uniform over the remaining symbols, with
    uniform input. Per-delay information is clamped at zero (chance-level
    accuracy carries none).
    """
    d = int(alphabet_size)
    if d < 2:
        raise ValueError(f"alphabet size must be >= 2, got {d}")
    total = 0.0
    for p in np.asarray(accuracies, dtype=np.float64):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"accuracy {p} outside [0, 1]")
        bits = np.log2(d)
        if p > 0.0:
            bits += p * np.log2(p)
        if p < 1.0:
            bits += (1.0 - p) * np.log2((1.0 - p) / (d - 1))
        total += max(bits, 0.0)
    return float(total)


def spearman_rho(x, y) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d and equally long")

    def ranks(v):
        order = np.argsort(v, kind="stable")
        r = np.empty(len(v))
        r[order] = np.arange(1, len(v) + 1)
        # average ranks across ties
        for val in np.unique(v):
            mask = v == val
            r[mask] = r[mask].mean()
        return r

    rx, ry = ranks(x), ranks(y)
    sx, sy = rx.std(), ry.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))


def one_hot(indices, width: int) -> np.ndarray:
    return np.eye(width)[np.asarray(indices, dtype=np.int64)]
