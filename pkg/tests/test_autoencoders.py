import math

import numpy as np
import pytest

from btnkit.autoencoders import (
    auto7_hidden_nodes,
    build_auto3,
    build_auto5_log,
    build_auto5_sqrt,
    build_auto7,
    build_step_auto,
    sqrt_decoder,
)
from btnkit.data import Dataset, random_dataset
from btnkit.encoders import SqrtDecomposition, build_sqrt_encoder, code_width, i2b
from btnkit.keys import make_key, make_step_vector
from btnkit.network import split_at_middle
from btnkit.verify import exhaustive_equiv, is_perfect_autoencoder, is_perfect_encoder

from conftest import MATRIX

BUILDERS = [build_auto3, build_auto5_sqrt, build_auto5_log, build_auto7]


def trace(net, key):
    return net.run_batch(np.array(key.vectors))


@pytest.mark.parametrize("builder", BUILDERS)
def test_four_vectors_round_trips(four_vectors, builder):
    key = make_key(four_vectors)
    rep = is_perfect_autoencoder(builder(key), key.sorted_dataset())
    assert rep.ok and rep.middle.ok


@pytest.mark.parametrize("builder", BUILDERS)
def test_single_vector(builder):
    key = make_key(Dataset(((1, 0, 1, 1),)))
    assert is_perfect_autoencoder(builder(key), key.sorted_dataset()).ok


def test_big_widths(big):
    key = make_key(big)
    assert build_auto3(key).widths == [32, 64, 32]
    assert build_auto5_sqrt(key).widths == [32, 40, 16, 256, 32]
    assert build_auto5_log(key).widths == [32, 64, 6, 64, 32]
    net = build_auto7(key)
    assert net.widths == [32, 40, 16, 6, 16, 256, 32]
    assert net.middle_index == 4
    assert sum(net.widths[1:-1]) - 6 == auto7_hidden_nodes(32, 8)
    for b in BUILDERS:
        assert is_perfect_autoencoder(b(key), key.sorted_dataset()).ok


def test_auto5_log_n2():
    key = make_key(random_dataset(2, 7, 0))
    assert build_auto5_log(key).widths == [7, 2, 1, 2, 7]


def test_auto7_four_vectors_middle_width(four_vectors):
    net = build_auto7(make_key(four_vectors))
    assert net.widths[3] == 2


@pytest.mark.parametrize("n,D", [(n, D) for n, D in MATRIX])
def test_matrix_seed0(n, D):
    key = make_key(random_dataset(n, D, 0))
    data = key.sorted_dataset()
    for b in BUILDERS:
        net = b(key)
        assert is_perfect_autoencoder(net, data).ok, b.__name__
        enc, _ = split_at_middle(net)
        assert is_perfect_encoder(enc, data).ok


def test_eta_rows_exclusive():
    for n, D in [(17, 16), (64, 32), (5, 5)]:
        key = make_key(random_dataset(n, D, 3))
        net = build_auto5_sqrt(key)
        eta = trace(net, key)[3]
        c = math.isqrt(n - 1) + 1
        per_bit = eta.reshape(n, c, D).sum(axis=1)
        assert per_bit.max() <= 1
        # and only row l can fire
        for i in range(n):
            l = i % c
            rows = eta[i].reshape(c, D)
            assert rows[np.arange(c) != l].sum() == 0


def test_auto5_log_middle_is_rank(big):
    key = make_key(big)
    mid = trace(build_auto5_log(key), key)[2]
    assert [tuple(map(int, z)) for z in mid] == [i2b(i, 6) for i in range(64)]


@pytest.mark.parametrize("n", [4, 10, 17, 64])
def test_auto7_middle_is_block_and_offset(n):
    key = make_key(random_dataset(n, 12, n))
    r = math.isqrt(n - 1) + 1
    m = code_width(r)
    mid = trace(build_auto7(key), key)[3]
    for i, z in enumerate(mid):
        k, l = divmod(i, r)
        assert tuple(int(v) for v in z) == i2b(k, m) + i2b(l, m)


def test_step_auto_example():
    net = build_step_auto(4)
    tr = net.evaluate((1, 1, 1, 0))
    # MSB first: 2 is (1, 0)
    assert tr.layer(2) == (1, 0)
    assert tr.output == (1, 1, 1, 0)


@pytest.mark.parametrize("s", [1, 2, 3, 4, 5, 8, 13, 64, 100])
def test_step_auto_all_levels(s):
    net = build_step_auto(s)
    assert net.widths == [s, code_width(s), s]
    for i in range(s):
        h = make_step_vector(i, s)
        assert net.evaluate(h).output == h
    assert net.evaluate(make_step_vector(0, s)).output[0] == 1


def test_substitution_keeps_seam_behaviour():
    # the step autoencoders in auto7 reproduce (beta1, beta2) exactly at the seam
    key = make_key(random_dataset(17, 16, 1))
    dec = SqrtDecomposition.from_key(key)
    a5 = trace(build_auto5_sqrt(key, dec), key)
    a7 = trace(build_auto7(key, dec), key)
    assert np.array_equal(a5[2], a7[4])
    assert np.array_equal(a5[3], a7[5])
    assert np.array_equal(a5[-1], a7[-1])


def test_auto5_sqrt_halves():
    key = make_key(random_dataset(9, 8, 2))
    dec = SqrtDecomposition.from_key(key)
    enc, decoder = split_at_middle(build_auto5_sqrt(key, dec))
    assert enc == build_sqrt_encoder(key, dec)
    assert decoder.layers == sqrt_decoder(key, dec).layers


def test_step_auto_vs_identity_on_steps():
    # exhaustive: on step inputs, the step autoencoder behaves as identity
    s = 6
    net = build_step_auto(s)
    steps = np.array([make_step_vector(i, s) for i in range(s)])
    assert np.array_equal(net.run_batch(steps)[-1], steps)
    # and two builds of it are equivalent everywhere
    assert exhaustive_equiv(net, build_step_auto(s), s).equivalent
