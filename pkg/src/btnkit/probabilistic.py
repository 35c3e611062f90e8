"""Randomized encoders, the sparsity statistic and the lookup-table codec.

Every randomized draw uses ``numpy.random.default_rng([seed, attempt])``
(PCG64), so attempt ``t`` of seed ``s`` is reproducible on its own and the
first successful attempt does not depend on evaluation order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .data import Dataset
from .encoders import code_width, i2b
from .errors import DimensionError, InputError, SearchExhausted
from .network import Bits, Layer, LayeredNetwork, ThresholdGate

log = logging.getLogger(__name__)


def _attempt_rng(seed: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng([seed, attempt])


def first_collision(codes: Sequence[Sequence[int]]) -> tuple[int, int] | None:
    seen = {}
    for i, c in enumerate(codes):
        c = tuple(int(v) for v in c)
        if c in seen:
            return seen[c], i
        seen[c] = i
    return None


@dataclass(frozen=True)
class SparsityStats:
    M: int
    ones: tuple[int, ...]
    pair: tuple[int, int]


def compute_M(data: Dataset) -> SparsityStats:
    """Largest number of 1-coordinates shared by any two dataset vectors."""
    if data.n < 2:
        raise InputError("need at least two vectors")
    X = data.as_array().astype(np.int64)
    shared = X @ X.T
    np.fill_diagonal(shared, -1)
    i, j = np.unravel_index(int(np.argmax(shared)), shared.shape)
    return SparsityStats(int(shared[i, j]), tuple(int(v) for v in X.sum(axis=1)),
                         (int(min(i, j)), int(max(i, j))))


def random_sign_dimension(n: int, M: int) -> int:
    """Output width ``ceil(8 sqrt(2M) ln n)`` for the random-sign encoder.

    The formula is 0 when ``M = 0``; the width is never allowed below
    ``ceil(2 log2 n)``, the smallest ``d`` with ``2**d >= n**2``.
    """
    if n < 2:
        raise InputError("need n >= 2")
    d = math.ceil(8 * math.sqrt(2 * M) * math.log(n))
    floor = (n * n - 1).bit_length()
    return max(d, floor)


def parity_dimension(n: int) -> int:
    """``2 ceil(log2 n)``."""
    return 2 * (n - 1).bit_length()


@dataclass(frozen=True)
class RandomBuild:
    network: LayeredNetwork
    attempts: int
    seed: int


def build_random_sign_encoder(data: Dataset, seed: int, max_attempts: int = 50,
                              d: int | None = None) -> RandomBuild:
    """Two-layer encoder with ``+-1`` weights and threshold 1, resampled until perfect."""
    if d is None:
        d = random_sign_dimension(data.n, compute_M(data).M)
    X = data.as_array().astype(np.int64)
    if d == 0 and data.n > 1:
        raise SearchExhausted(0, (0, 1))
    last = None
    for attempt in range(1, max_attempts + 1):
        W = _attempt_rng(seed, attempt).choice(np.array([-1, 1]), size=(d, data.dim))
        codes = (X @ W.T >= 1).astype(np.int8)
        last = first_collision(codes)
        if last is None:
            log.info("random-sign encoder: seed %d succeeded on attempt %d (d=%d)",
                     seed, attempt, d)
            gates = tuple(ThresholdGate(tuple(int(v) for v in row), 1) for row in W)
            net = LayeredNetwork(data.dim, (Layer(gates, data.dim),))
            return RandomBuild(net, attempt, seed)
    raise SearchExhausted(max_attempts, last)


@dataclass(frozen=True)
class ParitySpec:
    """Output bit ``k`` is the parity of the input bits indexed by ``subsets[k]``."""

    dim: int
    subsets: tuple[tuple[int, ...], ...]
    seed: int | None = None

    def __post_init__(self):
        subs = tuple(tuple(sorted(int(j) for j in s)) for s in self.subsets)
        for s in subs:
            if any(not 0 <= j < self.dim for j in s):
                raise DimensionError(f"subset {s} has indices outside 0..{self.dim - 1}")
        object.__setattr__(self, "subsets", subs)

    def __call__(self, x: Sequence[int]) -> Bits:
        if len(x) != self.dim:
            raise DimensionError(f"expected {self.dim} inputs, got {len(x)}")
        return tuple(sum(int(x[j]) for j in s) % 2 for s in self.subsets)

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        M = np.zeros((len(self.subsets), self.dim), dtype=np.int64)
        for k, s in enumerate(self.subsets):
            M[k, list(s)] = 1
        return ((np.asarray(X, dtype=np.int64) @ M.T) % 2).astype(np.int8)


@dataclass(frozen=True)
class ParityBuild:
    spec: ParitySpec
    attempts: int


def build_parity_encoder(data: Dataset, seed: int, max_attempts: int = 50,
                         d: int | None = None) -> ParityBuild:
    """Random parity subsets, each coordinate kept with probability 1/2."""
    if data.n < 2:
        raise InputError("need n >= 2")
    if d is None:
        d = parity_dimension(data.n)
    X = data.as_array()
    last = None
    for attempt in range(1, max_attempts + 1):
        mask = _attempt_rng(seed, attempt).integers(0, 2, size=(d, data.dim))
        spec = ParitySpec(data.dim, tuple(tuple(np.flatnonzero(row)) for row in mask), seed)
        last = first_collision(spec.apply_batch(X))
        if last is None:
            log.info("parity encoder: seed %d succeeded on attempt %d (d=%d)", seed, attempt, d)
            return ParityBuild(spec, attempt)
    raise SearchExhausted(max_attempts, last)


def parity_to_threshold(spec: ParitySpec) -> LayeredNetwork:
    """Three-layer threshold network computing the parities of ``spec``.

    Output ``k`` gets a bank of ``|S_k|`` counters ``[sum_{j in S_k} x_j >= i+1]``
    and fires on the alternating sum ``h_0 - h_1 + h_2 - ...``, which equals
    the count mod 2.
    """
    D = spec.dim
    hidden = []
    banks = []
    for s in spec.subsets:
        start = len(hidden)
        w = [0] * D
        for j in s:
            w[j] = 1
        for i in range(len(s)):
            hidden.append(ThresholdGate(tuple(w), i + 1))
        banks.append(range(start, len(hidden)))
    out = []
    for bank in banks:
        w = [0] * len(hidden)
        for i, pos in enumerate(bank):
            w[pos] = 1 if i % 2 == 0 else -1
        out.append(ThresholdGate(tuple(w), 1))
    return LayeredNetwork(D, (Layer(tuple(hidden), D), Layer(tuple(out), len(hidden))))


class BinomialCheck(NamedTuple):
    m: int
    probability: Fraction
    holds: bool


def central_binomial_check(m: int) -> BinomialCheck:
    """Probability that ``m`` fair ``+-1`` steps end at 0 (even m) or +1 (odd m).

    Checks ``P >= 1/sqrt(2m)`` (even) or ``P >= 1/(2 sqrt m)`` (odd) by
    squaring both sides, in integers only.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m % 2 == 0:
        p = Fraction(math.comb(m, m // 2), 2**m)
        holds = p.numerator**2 * 2 * m >= p.denominator**2
    else:
        p = Fraction(math.comb(m, (m - 1) // 2), 2**m)
        holds = p.numerator**2 * 4 * m >= p.denominator**2
    return BinomialCheck(m, p, holds)


@dataclass(frozen=True)
class LookupCodec:
    """Table codec: vector ``i`` <-> ``i2b_d(i)`` with ``d = ceil(log n)``."""

    vectors: tuple[Bits, ...]
    d: int

    def encode(self, x: Sequence[int]) -> Bits:
        return i2b(self.vectors.index(tuple(x)), self.d)

    def decode(self, z: Sequence[int]) -> Bits:
        i = int("".join(map(str, z)), 2)
        if i >= len(self.vectors):
            raise KeyError(f"code {tuple(z)} is unused")
        return self.vectors[i]

    def as_network(self):
        """The codec as a three-layer Boolean network (arbitrary gates)."""
        from .verify import BooleanNetwork
        dim = len(self.vectors[0])
        return BooleanNetwork(dim, (self.encode, self.decode), middle_index=2)


def build_lookup_codec(data: Dataset) -> LookupCodec:
    return LookupCodec(data.vectors, code_width(data.n))
