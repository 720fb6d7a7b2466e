"""Readout training and application.

Ridge regression against collected reservoir states; the lambda=0 path
falls back to the Moore-Penrose pseudo-inverse (minimum-norm solution) so
singular state matrices stay well-defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# relative singular-value cutoff for the lambda=0 pseudo-inverse path
PINV_RCOND = 1e-10


@dataclass(frozen=True)
class ReadoutMatrix:
    """Trained l x n readout, remembering the regularization it was fit with."""

    w_out: np.ndarray
    lam: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.w_out, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError("readout matrix must be 2-d")
        if not np.isfinite(w).all():
            raise ValueError("readout matrix contains non-finite entries")
        w.setflags(write=False)
        object.__setattr__(self, "w_out", w)

    @property
    def l(self) -> int:
        return self.w_out.shape[0]

    @property
    def n(self) -> int:
        return self.w_out.shape[1]


def ridge_fit(states: np.ndarray, targets: np.ndarray, lam: float = 0.0) -> ReadoutMatrix:
    """Fit W_out = Y^T X (X^T X + lam I)^-1 from states X and targets Y.

    Integer states are promoted to float64. With lam = 0 the minimum-norm
    least-squares solution is used instead of the normal equations.
    """
    x = np.asarray(states, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2 or y.ndim != 2:
        raise ValueError("states and targets must be 2-d")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"row count mismatch: {x.shape[0]} states vs {y.shape[0]} targets")
    if x.shape[0] < 1:
        raise ValueError("need at least one training row")
    if not np.isfinite(x).all():
        raise ValueError("states contain non-finite values")
    if not np.isfinite(y).all():
        raise ValueError("targets contain non-finite values")
    if lam < 0:
        raise ValueError(f"regularization must be non-negative, got {lam}")

    if lam == 0.0:
        w_t, *_ = np.linalg.lstsq(x, y, rcond=PINV_RCOND)
    elif x.shape[0] < x.shape[1]:
        # dual form: X (X^T X + lam I)^-1 = (X X^T + lam I)^-1 X, so the
        # solve is rows x rows instead of cols x cols
        gram = x @ x.T
        gram[np.diag_indices_from(gram)] += lam
        w_t = x.T @ np.linalg.solve(gram, y)
    else:
        gram = x.T @ x
        gram[np.diag_indices_from(gram)] += lam
        w_t = np.linalg.solve(gram, x.T @ y)
    return ReadoutMatrix(w_out=w_t.T, lam=float(lam))


def readout_apply(readout: ReadoutMatrix, x: np.ndarray) -> np.ndarray:
    """Linear output y = W_out x; accepts a state vector or a state matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        if x.shape[0] != readout.n:
            raise ValueError(f"state length {x.shape[0]} != readout width {readout.n}")
        return readout.w_out @ x
    if x.ndim == 2:
        if x.shape[1] != readout.n:
            raise ValueError(f"state width {x.shape[1]} != readout width {readout.n}")
        return x @ readout.w_out.T
    raise ValueError("state must be 1-d or 2-d")


def winner_take_all(y: np.ndarray) -> int:
    """Argmax output unit; ties break to the lowest index."""
    y = np.asarray(y)
    if y.size == 0:
        raise ValueError("cannot take the argmax of an empty vector")
    if not np.isfinite(y).all():
        raise ValueError("output vector contains non-finite values")
    return int(np.argmax(y))
