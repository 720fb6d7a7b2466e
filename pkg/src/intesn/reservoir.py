"""Reservoir state-update engines.

Two engines share a stepping interface: the integer reservoir (cyclic
shift, integer add, clipping) and the conventional float baseline
(orthogonal recurrent matrix, tanh). Engine instances own their mutable
state; configs and weights are immutable and shareable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hd import INTEGER, HyperVector, ItemMemory


@dataclass(frozen=True)
class IntEsnConfig:
    """Integer reservoir setup.

    At least one of input_memory/output_memory must be present; both must
    match the reservoir dimension n.
    """

    n: int
    kappa: int
    input_memory: ItemMemory | None = None
    output_memory: ItemMemory | None = None
    shift_amount: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid dimension {self.n}, must be >= 1")
        if self.kappa < 1:
            raise ValueError(f"invalid clipping threshold {self.kappa}, must be >= 1")
        if self.input_memory is None and self.output_memory is None:
            raise ValueError("need an input or output item memory")
        for im in (self.input_memory, self.output_memory):
            if im is not None and im.dim != self.n:
                raise ValueError(f"item memory dimension {im.dim} != reservoir dimension {self.n}")


@dataclass(frozen=True)
class EsnConfig:
    """Float baseline setup: k inputs, l outputs, n reservoir neurons."""

    k: int
    l: int
    n: int
    rho: float
    beta: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid reservoir size {self.n}")
        if self.k < 0 or self.l < 0:
            raise ValueError("layer sizes must be non-negative")
        if self.n < self.k or self.n < self.l:
            raise ValueError("reservoir must be at least as wide as input/output layers")
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"feedback strength must lie in (0, 1], got {self.rho}")
        if self.beta <= 0.0:
            raise ValueError(f"projection gain must be positive, got {self.beta}")


@dataclass(frozen=True)
class EsnWeights:
    """Fixed projection and recurrent matrices of the float baseline."""

    w: np.ndarray
    w_in: np.ndarray | None
    w_back: np.ndarray | None

    def __post_init__(self):
        for name, m in (("w", self.w), ("w_in", self.w_in), ("w_back", self.w_back)):
            if m is not None:
                m = np.asarray(m, dtype=np.float64)
                m.setflags(write=False)
                object.__setattr__(self, name, m)
        if self.w.ndim != 2 or self.w.shape[0] != self.w.shape[1]:
            raise ValueError("recurrent matrix must be square")


def generate_esn_weights(cfg: EsnConfig, rng: np.random.Generator | None = None) -> EsnWeights:
    """Orthogonal recurrent matrix plus uniform [-1,1] projections.

    The orthogonal factor comes from QR of a standard-normal matrix with
    R's diagonal forced positive, so the factor is unique per seed.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    a = rng.standard_normal((cfg.n, cfg.n))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    w_in = rng.uniform(-1.0, 1.0, size=(cfg.n, cfg.k)) if cfg.k > 0 else None
    w_back = rng.uniform(-1.0, 1.0, size=(cfg.n, cfg.l)) if cfg.l > 0 else None
    return EsnWeights(w=q, w_in=w_in, w_back=w_back)


def max_singular_value(m: np.ndarray, iters: int = 200, tol: float = 1e-9) -> float:
    """Largest singular value by power iteration on m^T m."""
    v = np.ones(m.shape[1]) / np.sqrt(m.shape[1])
    last = 0.0
    for _ in range(iters):
        v = m.T @ (m @ v)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return 0.0
        v /= norm
        if abs(norm - last) < tol * max(norm, 1.0):
            last = norm
            break
        last = norm
    return float(np.sqrt(last))


class IntEsn:
    """Integer reservoir: x(n) = clip(shift(x(n-1)) + u(n) + y(n-1), kappa).

    step() takes ternary drive vectors (item-memory rows); absorb() accepts
    wider integer vectors such as bundled encodings.
    """

    def __init__(self, cfg: IntEsnConfig):
        self.cfg = cfg
        # int8 holds every pre-clip value while kappa + 2 fits
        self._dtype = np.int8 if cfg.kappa <= 125 else np.int32
        self._x = np.zeros(cfg.n, dtype=self._dtype)
        self._scratch = np.empty(cfg.n, dtype=self._dtype)
        self.step_count = 0

    @property
    def n(self) -> int:
        return self.cfg.n

    @property
    def state(self) -> np.ndarray:
        return self._x.copy()

    def state_vector(self) -> HyperVector:
        return HyperVector(self._x.copy(), INTEGER, bound=self.cfg.kappa)

    def reset(self, state: np.ndarray | None = None) -> None:
        if state is None:
            self._x[:] = 0
        else:
            state = np.asarray(state)
            if state.shape != (self.cfg.n,):
                raise ValueError(f"state shape {state.shape} != ({self.cfg.n},)")
            if np.abs(state).max(initial=0) > self.cfg.kappa:
                raise ValueError("initial state exceeds the clipping bound")
            self._x[:] = state
        self.step_count = 0

    def _check_ternary(self, v, name: str) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.cfg.n,):
            raise ValueError(f"{name} has shape {v.shape}, expected ({self.cfg.n},)")
        if not np.issubdtype(v.dtype, np.integer):
            raise ValueError(f"{name} must be an integer vector")
        if np.abs(v).max() > 1:
            raise ValueError(f"{name} must be ternary (-1, 0, +1)")
        return v

    def step(self, u=None, y_prev=None) -> np.ndarray:
        """Advance one step with optional ternary input and feedback vectors."""
        if u is not None:
            u = self._check_ternary(u, "input vector")
        if y_prev is not None:
            y_prev = self._check_ternary(y_prev, "feedback vector")
        shift = self.cfg.shift_amount % self.cfg.n
        x, out = self._x, self._scratch
        if shift == 0:
            out[:] = x
        else:
            out[:shift] = x[-shift:]
            out[shift:] = x[:-shift]
        if u is not None:
            out += u
        if y_prev is not None:
            out += y_prev
        np.clip(out, -self.cfg.kappa, self.cfg.kappa, out=out)
        self._x, self._scratch = out, x
        self.step_count += 1
        return self._x

    def absorb(self, vec) -> np.ndarray:
        """Advance one step driven by an integer vector of any magnitude."""
        vec = np.asarray(vec)
        if vec.shape != (self.cfg.n,):
            raise ValueError(f"drive vector has shape {vec.shape}, expected ({self.cfg.n},)")
        if not np.issubdtype(vec.dtype, np.integer):
            raise ValueError("drive vector must be integer valued")
        shifted = np.roll(self._x, self.cfg.shift_amount).astype(np.int64)
        shifted += vec
        np.clip(shifted, -self.cfg.kappa, self.cfg.kappa, out=shifted)
        self._x = shifted.astype(self._dtype)
        self._scratch = np.empty_like(self._x)
        self.step_count += 1
        return self._x


class Esn:
    """Float baseline: x(n) = tanh(rho*W x(n-1) + beta*W_in u(n) + beta*W_back y(n-1))."""

    def __init__(self, cfg: EsnConfig, weights: EsnWeights | None = None):
        self.cfg = cfg
        self.weights = weights if weights is not None else generate_esn_weights(cfg)
        if self.weights.w.shape != (cfg.n, cfg.n):
            raise ValueError("recurrent matrix does not match the configured size")
        self._x = np.zeros(cfg.n, dtype=np.float64)
        self.step_count = 0

    @property
    def n(self) -> int:
        return self.cfg.n

    @property
    def state(self) -> np.ndarray:
        return self._x.copy()

    def reset(self, state: np.ndarray | None = None) -> None:
        if state is None:
            self._x[:] = 0.0
        else:
            state = np.asarray(state, dtype=np.float64)
            if state.shape != (self.cfg.n,):
                raise ValueError(f"state shape {state.shape} != ({self.cfg.n},)")
            self._x[:] = state
        self.step_count = 0

    def _check_vec(self, v, size: int, name: str) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (size,):
            raise ValueError(f"{name} has shape {v.shape}, expected ({size},)")
        if not np.isfinite(v).all():
            raise ValueError(f"{name} contains non-finite values")
        return v

    def step(self, u=None, y_prev=None) -> np.ndarray:
        """Advance one step with optional input and output-feedback vectors."""
        w = self.weights
        pre = self.cfg.rho * (w.w @ self._x)
        if u is not None:
            if w.w_in is None:
                raise ValueError("engine has no input layer (k=0) but got an input")
            pre += self.cfg.beta * (w.w_in @ self._check_vec(u, self.cfg.k, "input vector"))
        if y_prev is not None:
            if w.w_back is None:
                raise ValueError("engine has no output feedback (l=0) but got one")
            pre += self.cfg.beta * (w.w_back @ self._check_vec(y_prev, self.cfg.l, "feedback vector"))
        np.tanh(pre, out=pre)
        self._x = pre
        self.step_count += 1
        return self._x


def run_collect(engine, inputs, teachers=None, washout: int = 0) -> np.ndarray:
    """Step an engine over a sequence and return post-washout states.

    inputs and teachers are sequences of per-step vectors (entries may be
    None). Teacher forcing lags by one step: at step i the engine sees
    teachers[i-1]. Returns a (len(inputs) - washout) x n matrix.
    """
    total = len(inputs)
    if total == 0:
        raise ValueError("empty input sequence")
    if teachers is not None and len(teachers) != total:
        raise ValueError(f"teacher length {len(teachers)} != input length {total}")
    if washout >= total:
        raise ValueError(f"washout {washout} must be smaller than sequence length {total}")
    kept = np.empty((total - washout, engine.n), dtype=np.float64 if isinstance(engine, Esn) else np.int32)
    for i in range(total):
        y_prev = teachers[i - 1] if (teachers is not None and i > 0) else None
        state = engine.step(inputs[i], y_prev)
        if i >= washout:
            kept[i - washout] = state
    return kept
