"""A family that two-layer encoders compress to ``log n`` bits but no
two-layer decoder can reconstruct.

For ``n = 2**d`` the coordinates are the pairs ``(i, j)``, ``i < j < n``,
in lexicographic order, and vector ``y^k`` has a 1 exactly at the pairs
containing ``k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .data import Dataset
from .encoders import i2b
from .errors import RangeError
from .network import Bits, Layer, LayeredNetwork, ThresholdGate
from .separability import SeparabilityWitness, check_linearly_separable

MAX_INSTANCE_D = 6
MAX_CERTIFY_D = 4


@dataclass(frozen=True)
class HardInstance:
    d: int
    pairs: tuple[tuple[int, int], ...]
    vectors: tuple[Bits, ...]

    @property
    def n(self) -> int:
        return 2**self.d

    @property
    def N(self) -> int:
        return len(self.pairs)

    def position(self, i: int, j: int) -> int:
        """Flat coordinate of the pair ``{i, j}``."""
        i, j = min(i, j), max(i, j)
        n = self.n
        # Pairs (i, *) start after sum_{t<i} (n-1-t) entries.
        return i * (2 * n - i - 1) // 2 + (j - i - 1)

    def dataset(self) -> Dataset:
        return Dataset(self.vectors)


def gen_hard_set(d: int) -> HardInstance:
    if d < 2:
        raise RangeError("the hard family needs d >= 2")
    if d > MAX_INSTANCE_D:
        raise RangeError(f"d={d} exceeds the supported maximum {MAX_INSTANCE_D}")
    n = 2**d
    pairs = tuple(itertools.combinations(range(n), 2))
    vectors = tuple(tuple(int(k in p) for p in pairs) for k in range(n))
    return HardInstance(d, pairs, vectors)


def hard_encoder_terms(inst: HardInstance, t: int) -> list[tuple[int, int]]:
    """Pairs summed by the gate for bit ``t`` (``t = 0`` most significant).

    ``y^k`` has a 1 at ``(2i, 2i+1)`` iff ``i = k // 2``, and bit ``t < d-1``
    of ``k`` is bit ``t`` of the ``(d-1)``-bit number ``k // 2``; so the gate
    sums ``(2i, 2i+1)`` over the ``n/4`` values of ``i`` having that bit set.
    The last bit is ``k``'s parity, read from ``(1,3), (5,7), ...``.
    """
    d, n = inst.d, inst.n
    if t == d - 1:
        return [(4 * i + 1, 4 * i + 3) for i in range(n // 4)]
    shift = d - 2 - t
    return [(2 * i, 2 * i + 1) for i in range(n // 2) if (i >> shift) & 1]


def build_hard_encoder(inst: HardInstance) -> LayeredNetwork:
    gates = []
    for t in range(inst.d):
        w = [0] * inst.N
        for i, j in hard_encoder_terms(inst, t):
            w[inst.position(i, j)] = 1
        gates.append(ThresholdGate(tuple(w), 1))
    return LayeredNetwork(inst.N, (Layer(tuple(gates), inst.N),))


@dataclass(frozen=True)
class DecoderObstruction:
    """Why no two-layer network maps ``{0,1}^d`` onto the hard family.

    A decoder sending ``0^d`` to ``y^k`` and ``1^d`` to ``y^l`` must emit
    coordinate ``(k, l)`` as 1 on exactly those two inputs; ``witness``
    decides whether a single threshold gate can do that.
    """

    d: int
    pair: tuple[int, int]
    column_ones: tuple[int, ...]
    witness: SeparabilityWitness

    @property
    def certified(self) -> bool:
        return (not self.witness.separable) and self.witness.verify()

    def statement(self) -> str:
        k, l = self.pair
        z, o = "0" * self.d, "1" * self.d
        verdict = "no threshold gate exists" if self.certified else "NOT CERTIFIED"
        return (
            f"coordinate ({k},{l}) is 1 only on y^{k} and y^{l}; a decoder sending "
            f"{z} -> y^{k} and {o} -> y^{l} needs a gate separating {{{z},{o}}} from "
            f"the other {2**self.d - 2} points of {{0,1}}^{self.d}: {verdict}. "
            f"The split is the same whichever y^k, y^l the decoder picks, so this "
            f"rules out every assignment."
        )


def certify_no_2layer_decoder(inst: HardInstance) -> DecoderObstruction:
    if inst.d > MAX_CERTIFY_D:
        raise RangeError(f"certification is limited to d <= {MAX_CERTIFY_D}")
    d = inst.d
    k, l = 0, inst.n - 1
    col = inst.position(k, l)
    ones = tuple(idx for idx, v in enumerate(inst.vectors) if v[col])
    cube = list(itertools.product((0, 1), repeat=d))
    pos = [(0,) * d, (1,) * d]
    neg = [p for p in cube if p not in pos]
    return DecoderObstruction(d, (k, l), ones, check_linearly_separable(pos, neg, d))


def hard_codes(inst: HardInstance) -> list[Bits]:
    return [i2b(k, inst.d) for k in range(inst.n)]

