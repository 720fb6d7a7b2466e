"""Hyperdimensional vector algebra.

Bipolar and ternary hypervectors, the integer vectors produced by bundling
and clipping them, item memories (codebooks), level encoders for real
values, scalar quantization, and the bit-packed integer codec used for
model files and footprint accounting.

All operations are pure functions; a seeded ``numpy.random.Generator`` is
passed in wherever randomness is needed so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BIPOLAR = "bipolar"
TERNARY = "ternary"
INTEGER = "integer"

_KINDS = (BIPOLAR, TERNARY, INTEGER)


@dataclass(frozen=True)
class HyperVector:
    """Fixed-length integer vector with a value-range tag.

    kind "bipolar" allows {-1,+1}, "ternary" {-1,0,+1}, "integer" any
    integers, optionally bounded to [-bound, bound].
    """

    elements: np.ndarray
    kind: str
    bound: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.elements)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("hypervector must be a non-empty 1-d array")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"hypervector elements must be integers, got dtype {arr.dtype}")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown hypervector kind {self.kind!r}")
        if self.kind == BIPOLAR:
            if not np.isin(arr, (-1, 1)).all():
                raise ValueError("bipolar hypervector must contain only -1 and +1")
        elif self.kind == TERNARY:
            if np.abs(arr).max() > 1:
                raise ValueError("ternary hypervector must contain only -1, 0, +1")
        elif self.bound is not None:
            if self.bound < 1:
                raise ValueError("integer hypervector bound must be >= 1")
            if np.abs(arr).max() > self.bound:
                raise ValueError(f"integer hypervector exceeds bound {self.bound}")
        arr = arr.copy() if not arr.flags.owndata else arr
        arr.setflags(write=False)
        object.__setattr__(self, "elements", arr)

    def __len__(self) -> int:
        return self.elements.shape[0]

    @property
    def n(self) -> int:
        return self.elements.shape[0]


@dataclass(frozen=True)
class ItemMemory:
    """Ordered codebook mapping dense symbol ids [0, D) to hypervectors.

    Rows of ``vectors`` are the atomic vectors; the row index is the
    symbol id.
    """

    vectors: np.ndarray
    kind: str = BIPOLAR

    def __post_init__(self):
        arr = np.asarray(self.vectors)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("item memory needs a non-empty 2-d (symbols x dimension) array")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("item memory vectors must be integer valued")
        arr = arr.copy() if not arr.flags.owndata else arr
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.size

    def vector(self, symbol: int) -> HyperVector:
        return HyperVector(self.vectors[symbol], self.kind)

    def row(self, symbol: int) -> np.ndarray:
        """Raw codebook row (read-only view), for hot loops."""
        return self.vectors[symbol]


def random_bipolar(n: int, rng: np.random.Generator) -> HyperVector:
    """Random bipolar hypervector, each element i.i.d. equiprobable +-1."""
    if n < 1:
        raise ValueError(f"invalid dimension {n}, must be >= 1")
    elements = rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1
    return HyperVector(elements, BIPOLAR)


def random_item_memory(d: int, n: int, rng: np.random.Generator) -> ItemMemory:
    """Codebook of d independent random bipolar vectors of dimension n."""
    if d < 1:
        raise ValueError(f"invalid alphabet size {d}, must be >= 1")
    if n < 1:
        raise ValueError(f"invalid dimension {n}, must be >= 1")
    vectors = rng.integers(0, 2, size=(d, n), dtype=np.int8) * 2 - 1
    return ItemMemory(vectors, BIPOLAR)


def cyclic_shift(x: HyperVector, k: int) -> HyperVector:
    """Rotate so the element at index i moves to index (i + k) mod n."""
    return HyperVector(np.roll(x.elements, k), x.kind, x.bound)


def bundle(vs: list[HyperVector]) -> HyperVector:
    """Elementwise integer sum of the given vectors. No clipping applied."""
    if not vs:
        raise ValueError("cannot bundle an empty list")
    n = vs[0].n
    for v in vs[1:]:
        if v.n != n:
            raise ValueError(f"dimension mismatch in bundle: {v.n} != {n}")
    total = np.zeros(n, dtype=np.int32)
    for v in vs:
        total += v.elements
    return HyperVector(total, INTEGER)


def clip(x: HyperVector, kappa: int) -> HyperVector:
    """Elementwise saturation to [-kappa, kappa]."""
    if kappa < 1:
        raise ValueError(f"invalid clipping threshold {kappa}, must be >= 1")
    return HyperVector(np.clip(x.elements, -kappa, kappa), INTEGER, bound=kappa)


def dot_similarity(x: HyperVector, y: HyperVector) -> int:
    """Exact integer dot product between two hypervectors."""
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: {x.n} != {y.n}")
    return int(np.multiply(x.elements, y.elements, dtype=np.int64).sum())


def cleanup(im: ItemMemory, query: HyperVector) -> tuple[int, int]:
    """Most similar codebook entry for the query.

    Returns (symbol id, dot score); ties break to the lowest symbol id.
    """
    if im.size == 0:
        raise ValueError("cannot clean up against an empty item memory")
    if query.n != im.dim:
        raise ValueError(f"dimension mismatch: query {query.n} vs memory {im.dim}")
    scores = im.vectors.astype(np.int64) @ query.elements.astype(np.int64)
    best = int(np.argmax(scores))
    return best, int(scores[best])


def linear_level_memory(levels: int, n: int, rng: np.random.Generator) -> ItemMemory:
    """Codebook whose dot similarity to entry 0 decreases affinely with level.

    Entries 0 and levels-1 are independent random bipolar vectors; entry k
    copies entry 0 but takes entry levels-1's value on the first
    floor(k*n/(levels-1)) positions of a fixed random position order.
    Nested position sets make dot(entry 0, entry k) exactly non-increasing
    in k.
    """
    if levels < 2:
        raise ValueError(f"need at least 2 levels, got {levels}")
    if levels > n:
        raise ValueError(f"levels ({levels}) must not exceed dimension ({n})")
    lo = rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1
    hi = rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1
    order = rng.permutation(n)
    vectors = np.empty((levels, n), dtype=np.int8)
    for k in range(levels):
        m = (k * n) // (levels - 1)
        v = lo.copy()
        v[order[:m]] = hi[order[:m]]
        vectors[k] = v
    return ItemMemory(vectors, BIPOLAR)


def scatter_level_memory(
    levels: int,
    n: int,
    rng: np.random.Generator,
    flip_fraction_per_level: float | None = None,
) -> ItemMemory:
    """Codebook where each level flips a fresh random subset of the previous.

    Similarity decays roughly exponentially with level distance. The default
    flip fraction 1/(2*levels) keeps end-to-end similarity above chance.
    """
    if levels < 2:
        raise ValueError(f"need at least 2 levels, got {levels}")
    if flip_fraction_per_level is None:
        flip_fraction_per_level = 1.0 / (2 * levels)
    if not 0.0 < flip_fraction_per_level < 1.0:
        raise ValueError(f"flip fraction must lie in (0, 1), got {flip_fraction_per_level}")
    flips = int(flip_fraction_per_level * n)
    vectors = np.empty((levels, n), dtype=np.int8)
    vectors[0] = rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1
    for k in range(1, levels):
        v = vectors[k - 1].copy()
        idx = rng.choice(n, size=flips, replace=False)
        v[idx] = -v[idx]
        vectors[k] = v
    return ItemMemory(vectors, BIPOLAR)


def sparsify(base: HyperVector, value: float, rng: np.random.Generator) -> HyperVector:
    """Encode a real value in [0, 1] by zeroing a matching fraction of base.

    Exactly round((1-value)*n) randomly chosen positions become zero, the
    rest are copied, so dot(result, base) = n - zeros exactly.
    """
    if base.kind != BIPOLAR:
        raise ValueError("sparsify expects a bipolar base vector")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"value must lie in [0, 1], got {value}")
    n = base.n
    zeros = int(round((1.0 - value) * n))
    out = base.elements.astype(np.int8, copy=True)
    if zeros:
        idx = rng.choice(n, size=zeros, replace=False)
        out[idx] = 0
    return HyperVector(out, TERNARY)


def _round_half_away(x):
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass(frozen=True)
class Quantizer:
    """Uniform scalar quantizer over [lo, hi] with round-half-away-from-zero.

    lo and hi must be integer multiples of step so every output is a
    representable level. Values outside [lo, hi] clamp to the boundary.
    """

    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.hi <= self.lo:
            raise ValueError(f"need hi > lo, got [{self.lo}, {self.hi}]")
        for name, edge in (("lo", self.lo), ("hi", self.hi)):
            ratio = edge / self.step
            if abs(ratio - round(ratio)) > 1e-9:
                raise ValueError(f"{name}={edge} is not an integer multiple of step={self.step}")

    @property
    def levels(self) -> int:
        """Number of representable levels, boundaries included."""
        return int(round((self.hi - self.lo) / self.step)) + 1

    def quantize(self, v):
        """Nearest representable level; scalar or ndarray in, same shape out."""
        clipped = np.clip(v, self.lo, self.hi)
        q = _round_half_away(clipped / self.step) * self.step
        q = np.clip(q, self.lo, self.hi)
        if np.isscalar(v):
            return float(q)
        return q

    def index(self, v):
        """Level index in [0, levels) of the quantized value."""
        q = self.quantize(v)
        idx = np.rint((np.asarray(q) - self.lo) / self.step).astype(np.int64)
        if np.isscalar(v):
            return int(idx)
        return idx

    def level_value(self, index: int) -> float:
        return self.lo + index * self.step


def bits_per_element(bound: int) -> int:
    """ceil(log2(2*bound+1)): bits needed for one integer in [-bound, bound]."""
    if bound < 1:
        raise ValueError(f"invalid bound {bound}, must be >= 1")
    # 2*bound+1 is odd, so bit_length equals the ceiling of its log2
    return int(2 * bound + 1).bit_length()


def pack_integers(values: np.ndarray, bound: int) -> bytes:
    """Pack integers in [-bound, bound] into a little-endian bitstream.

    Element i occupies bits [i*b, (i+1)*b) with b = bits_per_element(bound);
    total payload is ceil(n*b/8) bytes.
    """
    b = bits_per_element(bound)
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError("pack_integers expects a 1-d array")
    if arr.size and np.abs(arr).max() > bound:
        raise ValueError(f"values exceed bound {bound}")
    shifted = (arr.astype(np.int64) + bound).astype(np.uint8 if b <= 8 else np.uint32)
    bit_matrix = ((shifted[:, None] >> np.arange(b)) & 1).astype(np.uint8)
    return np.packbits(bit_matrix.ravel(), bitorder="little").tobytes()


def unpack_integers(data: bytes, n: int, bound: int) -> np.ndarray:
    """Inverse of pack_integers; returns an int32 array of length n."""
    b = bits_per_element(bound)
    need = math.ceil(n * b / 8)
    if len(data) < need:
        raise ValueError(f"packed payload too short: got {len(data)} bytes, need {need}")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")[: n * b]
    weights = (1 << np.arange(b)).astype(np.int64)
    values = bits.reshape(n, b).astype(np.int64) @ weights - bound
    return values.astype(np.int32)


def packed_size_bits(n: int, bound: int) -> int:
    """Payload size in bits of a packed n-element vector with this bound."""
    return n * bits_per_element(bound)
