"""Deterministic encoders built from a separating key.

All builders take the key of :mod:`btnkit.keys` and address dataset vectors
by their rank ``i`` in key order.  Outputs are either step vectors
(``h^i[s]``: ones in positions ``0..i``) or MSB-first binary codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CodeCollision, DimensionError, RangeError
from .keys import SeparatingKey
from .network import Bits, Layer, LayeredNetwork, ThresholdGate, parallel_layers, stack


def ceil_log2(n: int) -> int:
    if n < 1:
        raise RangeError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def code_width(n: int) -> int:
    """Bits needed to give ``n`` items distinct codes; at least 1."""
    return max(1, ceil_log2(n))


def i2b(j: int, d: int) -> Bits:
    """``d``-bit binary representation of ``j``, most significant bit first."""
    if not 0 <= j < 2**d:
        raise RangeError(f"{j} does not fit in {d} bits")
    return tuple((j >> (d - 1 - p)) & 1 for p in range(d))


def b2i(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def copy_gate(j: int, fan_in: int) -> ThresholdGate:
    """``[x_j >= 1]``: passes input ``j`` through unchanged."""
    w = [0] * fan_in
    w[j] = 1
    return ThresholdGate(tuple(w), 1)


@dataclass(frozen=True)
class SqrtDecomposition:
    """Split of the ranks ``0..n-1`` into ``num_blocks`` blocks of ``block_size``.

    Rank ``i`` lives in block ``i // block_size`` at offset ``i % block_size``.
    ``padded_keys`` has one entry per slot; slots past ``n - 1`` hold
    ``b[n-1] + 1`` so that no dataset vector can reach them.  ``starts[k]``
    is the smallest key in block ``k``.
    """

    n: int
    block_size: int
    num_blocks: int
    padded_keys: tuple[int, ...]

    @classmethod
    def from_key(cls, key: SeparatingKey) -> "SqrtDecomposition":
        """``r x r`` slots with ``r = ceil(sqrt(n))``."""
        r = math.isqrt(key.n - 1) + 1
        return cls._build(key, r, r)

    @classmethod
    def binary_aligned(cls, key: SeparatingKey) -> "SqrtDecomposition":
        """Blocks of ``2**p`` with ``p = ceil(L/2)``, ``L = ceil(log2 n)``.

        Block index and offset then concatenate to exactly the ``L``-bit
        binary representation of the rank, for any ``n``.
        """
        p = (code_width(key.n) + 1) // 2
        c = 2**p
        return cls._build(key, c, -(-key.n // c))

    @classmethod
    def _build(cls, key, block_size, num_blocks):
        b = key.b
        pad = b[-1] + 1
        slots = block_size * num_blocks
        padded = tuple(b[i] if i < len(b) else pad for i in range(slots))
        return cls(key.n, block_size, num_blocks, padded)

    @property
    def r(self) -> int:
        return self.block_size

    @property
    def starts(self) -> tuple[int, ...]:
        return tuple(self.padded_keys[k * self.block_size] for k in range(self.num_blocks))

    def split(self, i: int) -> tuple[int, int]:
        return divmod(i, self.block_size)

    def telescopic(self, table: Sequence[int], offset: int) -> list[int]:
        """Coefficients ``c_t`` with ``sum_{t<=k} c_t = table[k*block_size + offset]``."""
        c = self.block_size
        coefs = [table[offset]]
        for t in range(1, self.num_blocks):
            coefs.append(table[t * c + offset] - table[(t - 1) * c + offset])
        return coefs


def build_step_encoder(key: SeparatingKey) -> LayeredNetwork:
    """Two layers ``D/n``: gate ``j`` is ``[a.x >= b_j]``, so ``x^i -> h^i[n]``."""
    gates = tuple(ThresholdGate(key.a, bj) for bj in key.b)
    return LayeredNetwork(key.dim, (Layer(gates, key.dim),))


def build_gmap_layer(codes: Sequence[Sequence[int]]) -> Layer:
    """Single layer mapping ``h^i[s]`` to ``codes[i]``.

    Gate ``j`` weighs ``h_0`` by ``z^0_j`` and ``h_i`` by ``z^i_j - z^{i-1}_j``;
    on a step vector the weighted sum telescopes to ``z^i_j`` and the
    threshold of 1 reads it off.
    """
    codes = [tuple(int(v) for v in z) for z in codes]
    if not codes:
        raise DimensionError("at least one code is required")
    d = len(codes[0])
    seen = {}
    for i, z in enumerate(codes):
        if len(z) != d:
            raise DimensionError(f"code {i} has width {len(z)}, expected {d}")
        if z in seen:
            raise CodeCollision(seen[z], i)
        seen[z] = i
    s = len(codes)
    gates = []
    for j in range(d):
        w = [codes[0][j]] + [codes[i][j] - codes[i - 1][j] for i in range(1, s)]
        gates.append(ThresholdGate(tuple(w), 1))
    return Layer(tuple(gates), s)


def build_binary_index_encoder(key: SeparatingKey) -> LayeredNetwork:
    """Three layers ``D/n/ceil(log n)``: ``x^i`` maps to ``i2b(i)``."""
    d = code_width(key.n)
    gmap = build_gmap_layer([i2b(i, d) for i in range(key.n)])
    return stack(build_step_encoder(key), LayeredNetwork(key.n, (gmap,)))


def build_sqrt_encoder(key: SeparatingKey, dec: SqrtDecomposition | None = None) -> LayeredNetwork:
    """Three layers ``D/(r+D)/2r`` mapping ``x^{kr+l}`` to ``(h^k[r], h^l[r])``.

    Hidden layer: ``r`` block detectors ``[a.x >= s_k]`` followed by ``D``
    copies of the input.  Output: copies of the block detectors, then ``r``
    gates ``[a.x - t_i >= 0]`` where ``t_i`` is a telescopic sum over the
    detectors that evaluates to the ``i``-th key of the active block.
    """
    dec = dec or SqrtDecomposition.from_key(key)
    D, nb, c = key.dim, dec.num_blocks, dec.block_size
    hidden = [ThresholdGate(key.a, s) for s in dec.starts]
    hidden += [copy_gate(j, D) for j in range(D)]
    width = nb + D
    out = [copy_gate(k, width) for k in range(nb)]
    for i in range(c):
        tele = dec.telescopic(dec.padded_keys, i)
        out.append(ThresholdGate(tuple(-t for t in tele) + key.a, 0))
    return LayeredNetwork(D, (Layer(tuple(hidden), D), Layer(tuple(out), width)))


def build_log_encoder_4layer(key: SeparatingKey,
                             dec: SqrtDecomposition | None = None) -> LayeredNetwork:
    """Four layers: the sqrt encoder plus two gmap blocks.

    The first block turns the block step vector into the binary block index,
    the second turns the offset step vector into the binary offset.  With
    the default binary-aligned decomposition the concatenation is the
    ``ceil(log n)``-bit code of the rank.
    """
    dec = dec or SqrtDecomposition.binary_aligned(key)
    nb, c = dec.num_blocks, dec.block_size
    hi_w, lo_w = ceil_log2(nb), ceil_log2(c)
    if hi_w + lo_w == 0:
        lo_w = 1
    hi = build_gmap_layer([i2b(k, hi_w) for k in range(nb)])
    lo = build_gmap_layer([i2b(l, lo_w) for l in range(c)])
    enc = build_sqrt_encoder(key, dec)
    return LayeredNetwork(enc.input_dim, enc.layers + (parallel_layers(hi, lo),))
