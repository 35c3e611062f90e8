"""Perfect autoencoders assembled from the encoders and gmap decoders."""

from __future__ import annotations

from .encoders import (
    SqrtDecomposition,
    build_gmap_layer,
    build_sqrt_encoder,
    build_step_encoder,
    code_width,
    i2b,
)
from .keys import SeparatingKey
from .network import Layer, LayeredNetwork, ThresholdGate, parallel_layers, stack


def build_auto3(key: SeparatingKey) -> LayeredNetwork:
    """``D/n/D``: step encoder, then a gmap layer back to the sorted vectors."""
    decoder = LayeredNetwork(key.n, (build_gmap_layer(key.vectors),))
    return stack(build_step_encoder(key), decoder, middle=True)


def _eta_layer(key: SeparatingKey, dec: SqrtDecomposition) -> Layer:
    # eta_{i,j} sits at position i*D + j; inputs are (beta1, beta2).
    D, nb, c = key.dim, dec.num_blocks, dec.block_size
    slots = nb * c
    padded = [key.vectors[min(i, key.n - 1)] for i in range(slots)]
    gates = []
    for i in range(c):
        for j in range(D):
            column = [v[j] for v in padded]
            w = dec.telescopic(column, i)
            b2 = [0] * c
            b2[i] = 1
            if i + 1 < c:
                b2[i + 1] = -1
            gates.append(ThresholdGate(tuple(w) + tuple(b2), 2))
    return Layer(tuple(gates), nb + c)


def _or_layer(c: int, D: int) -> Layer:
    # y_j = [sum_i eta_{i,j} >= 1]
    gates = []
    for j in range(D):
        w = [0] * (c * D)
        for i in range(c):
            w[i * D + j] = 1
        gates.append(ThresholdGate(tuple(w), 1))
    return Layer(tuple(gates), c * D)


def sqrt_decoder(key: SeparatingKey, dec: SqrtDecomposition) -> LayeredNetwork:
    """``2r/rD/D`` decoder taking ``(h^k[r], h^l[r])`` back to ``x^{kr+l}``.

    Node ``eta_{i,j}`` adds a telescopic sum over the block step vector (which
    evaluates to bit ``j`` of vector ``kr+i``) to ``beta2_i - beta2_{i+1}``;
    the second term is 1 only at ``i = l``, so with threshold 2 the node fires
    iff ``i = l`` and that bit is set.  For ``i = r-1`` the missing
    ``beta2_r`` is the constant 0 and its term is simply dropped.
    """
    eta = _eta_layer(key, dec)
    return LayeredNetwork(eta.fan_in, (eta, _or_layer(dec.block_size, key.dim)))


def build_auto5_sqrt(key: SeparatingKey, dec: SqrtDecomposition | None = None) -> LayeredNetwork:
    """``D/(r+D)/2r/rD/D`` with the middle at layer 3."""
    dec = dec or SqrtDecomposition.from_key(key)
    return stack(build_sqrt_encoder(key, dec), sqrt_decoder(key, dec), middle=True)


def _step_auto_layers(s: int) -> tuple[Layer, Layer]:
    m = code_width(s)
    gamma = build_gmap_layer([i2b(i, m) for i in range(s)])
    # Middle is MSB first, so position p carries weight 2**(m-1-p).
    place = tuple(2 ** (m - 1 - p) for p in range(m))
    delta = Layer(tuple(ThresholdGate(place, j) for j in range(s)), m)
    return gamma, delta


def build_step_auto(s: int) -> LayeredNetwork:
    """``s/ceil(log s)/s`` autoencoder for the step vectors ``h^0[s]..h^{s-1}[s]``.

    The middle layer holds ``i2b(i)`` (a gmap over binary codes); output
    gate ``j`` is ``[sum_h gamma_h 2^h >= j]``.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    gamma, delta = _step_auto_layers(s)
    return LayeredNetwork(s, (gamma, delta), middle_index=2)


def build_auto5_log(key: SeparatingKey) -> LayeredNetwork:
    """``D/n/ceil(log n)/n/D``: auto3 with its step middle autoencoded."""
    n = key.n
    gamma, delta = _step_auto_layers(n)
    layers = build_step_encoder(key).layers + (gamma, delta, build_gmap_layer(key.vectors))
    return LayeredNetwork(key.dim, layers, middle_index=3)


def build_auto7(key: SeparatingKey, dec: SqrtDecomposition | None = None) -> LayeredNetwork:
    """Seven layers; middle of width ``2 ceil(log r)`` at layer 4.

    auto5_sqrt with each of its two step-vector banks passed through its own
    step autoencoder before the decoder.
    """
    dec = dec or SqrtDecomposition.from_key(key)
    g1, d1 = _step_auto_layers(dec.num_blocks)
    g2, d2 = _step_auto_layers(dec.block_size)
    enc = build_sqrt_encoder(key, dec)
    layers = (enc.layers
              + (parallel_layers(g1, g2), parallel_layers(d1, d2))
              + sqrt_decoder(key, dec).layers)
    return LayeredNetwork(key.dim, layers, middle_index=4)


def auto7_hidden_nodes(dim: int, r: int) -> int:
    """Hidden nodes outside the middle layer of auto7 on an ``r x r`` split."""
    return (dim + 5) * r + dim
