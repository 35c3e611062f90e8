import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from btnkit.data import Dataset, random_dataset
from btnkit.encoders import (
    SqrtDecomposition,
    b2i,
    build_binary_index_encoder,
    build_gmap_layer,
    build_log_encoder_4layer,
    build_sqrt_encoder,
    build_step_encoder,
    code_width,
    i2b,
)
from btnkit.errors import CodeCollision, KeyCollision, RangeError, SearchExhausted
from btnkit.keys import (
    find_separating_vector,
    key_values,
    make_key,
    make_step_vector,
    sort_by_key,
)
from btnkit.network import LayeredNetwork
from btnkit.verify import is_perfect_encoder

from conftest import MATRIX


def outputs(net, key):
    return [tuple(int(v) for v in row) for row in net.run_batch(np.array(key.vectors))[-1]]


# -- keys -----------------------------------------------------------------

def test_powers_of_two_two_vectors():
    data = Dataset(((0, 1), (1, 0)))
    a = find_separating_vector(data)
    assert a == (1, 2)
    assert key_values(data, a) == [2, 1]


def test_four_vectors_key(four_vectors):
    assert find_separating_vector(four_vectors) == (1, 2, 4)
    key = sort_by_key(four_vectors, (1, 2, 4))
    assert key.b == (0, 1, 5, 7)
    assert key.perm == (0, 1, 2, 3)


def test_reversed_input_reverses_perm(four_vectors):
    rev = four_vectors.reordered([3, 2, 1, 0])
    key = sort_by_key(rev, (1, 2, 4))
    assert key.b == (0, 1, 5, 7)
    assert key.perm == (3, 2, 1, 0)
    assert key.sorted_dataset() == four_vectors


def test_single_vector_any_key():
    data = Dataset(((1, 0, 1),))
    key = sort_by_key(data, (1, 1, 1))
    assert key.b == (2,) and key.perm == (0,)


def test_zero_key_collides(four_vectors):
    with pytest.raises(KeyCollision):
        sort_by_key(four_vectors, (0, 0, 0))


def test_random_small_strategy():
    data = random_dataset(8, 10, 4)
    a = find_separating_vector(data, "random-small", seed=1, bound=5)
    assert all(-5 <= v <= 5 for v in a)
    assert len(set(key_values(data, a))) == data.n


@pytest.mark.parametrize("n,D", MATRIX)
def test_key_injective_and_sorted(n, D):
    for seed in range(3):
        data = random_dataset(n, D, seed)
        key = make_key(data)
        assert sorted(key.perm) == list(range(n))
        assert all(x < y for x, y in zip(key.b, key.b[1:]))
        assert key_values(key.sorted_dataset(), key.a) == list(key.b)


@pytest.mark.parametrize("i,s,want", [(0, 4, (1, 0, 0, 0)), (2, 4, (1, 1, 1, 0)), (3, 4, (1, 1, 1, 1))])
def test_step_vectors(i, s, want):
    assert make_step_vector(i, s) == want


def test_step_vector_range():
    with pytest.raises(RangeError):
        make_step_vector(4, 4)


@given(st.integers(1, 40))
def test_step_vectors_ordered(s):
    hs = [make_step_vector(i, s) for i in range(s)]
    for i, h in enumerate(hs):
        assert sum(h) == i + 1
    for lo, hi in zip(hs, hs[1:]):
        assert all(p <= q for p, q in zip(lo, hi))


# -- binary codes -----------------------------------------------------------

def test_i2b_msb_first():
    assert i2b(5, 3) == (1, 0, 1)
    assert b2i((1, 0, 1)) == 5
    assert [code_width(n) for n in (1, 2, 3, 4, 5, 64, 65)] == [1, 1, 2, 2, 3, 6, 7]


# -- step encoder -------------------------------------------------------------

def test_step_encoder_example():
    data = Dataset(((0, 0), (1, 0), (1, 1)))
    key = sort_by_key(data, (1, 2))
    assert key.b == (0, 1, 3)
    net = build_step_encoder(key)
    assert net.evaluate((1, 0)).output == (1, 1, 0)


def test_step_encoder_hits_every_step(big):
    key = make_key(big)
    out = outputs(build_step_encoder(key), key)
    assert out == [make_step_vector(i, key.n) for i in range(key.n)]


# -- gmap layer -----------------------------------------------------------

def test_gmap_example():
    layer = build_gmap_layer([(0, 0), (1, 0), (1, 1)])
    assert [g.weights for g in layer.gates] == [(0, 1, 0), (0, 0, 1)]
    net = LayeredNetwork(3, (layer,))
    assert net.evaluate((1, 1, 0)).output == (1, 0)


def test_gmap_identity_on_steps():
    s = 6
    steps = [make_step_vector(i, s) for i in range(s)]
    net = LayeredNetwork(s, (build_gmap_layer(steps),))
    assert [net.evaluate(h).output for h in steps] == steps


def test_gmap_single_code():
    net = LayeredNetwork(1, (build_gmap_layer([(1, 0, 1)]),))
    assert net.evaluate((1,)).output == (1, 0, 1)


def test_gmap_collision():
    with pytest.raises(CodeCollision):
        build_gmap_layer([(0, 1), (1, 0), (0, 1)])


def test_gmap_random_tables():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(1, 17))
        s = int(rng.integers(1, min(64, 2**d) + 1))
        picks = rng.choice(2**d, size=s, replace=False)
        codes = [i2b(int(v), d) for v in picks]
        net = LayeredNetwork(s, (build_gmap_layer(codes),))
        steps = np.array([make_step_vector(i, s) for i in range(s)])
        got = [tuple(int(v) for v in row) for row in net.run_batch(steps)[-1]]
        assert got == codes


# -- binary index encoder -------------------------------------------------------

def test_binary_index_small(four_vectors):
    key = make_key(four_vectors)
    net = build_binary_index_encoder(key)
    assert net.widths == [3, 4, 2]
    assert outputs(net, key)[2] == (1, 0)


def test_binary_index_single():
    key = make_key(Dataset(((0, 1),)))
    assert outputs(build_binary_index_encoder(key), key) == [(0,)]


@pytest.mark.parametrize("n,D", [(17, 16), (64, 32), (3, 5)])
def test_binary_index_is_rank(n, D):
    key = make_key(random_dataset(n, D, 1))
    assert [b2i(z) for z in outputs(build_binary_index_encoder(key), key)] == list(range(n))


# -- sqrt decomposition and encoder -------------------------------------------------

def test_decomposition_pads_past_last_key():
    key = make_key(random_dataset(5, 6, 0))
    dec = SqrtDecomposition.from_key(key)
    assert dec.r == 3 and dec.num_blocks == 3
    assert dec.padded_keys[:5] == key.b
    assert set(dec.padded_keys[5:]) == {key.b[-1] + 1}
    assert list(dec.starts) == sorted(dec.starts)
    for i in range(key.n):
        k, l = dec.split(i)
        assert i == k * dec.r + l and 0 <= l < dec.r


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=30), st.integers(1, 6), st.data())
def test_telescopic_prefix_sums(table, c, data):
    nb = -(-len(table) // c)
    table = table + [0] * (nb * c - len(table))
    dec = SqrtDecomposition(len(table), c, nb, tuple(table))
    off = data.draw(st.integers(0, c - 1))
    coefs = dec.telescopic(table, off)
    for k in range(nb):
        assert sum(coefs[: k + 1]) == table[k * c + off]


def test_sqrt_encoder_example(four_vectors):
    key = make_key(four_vectors)
    net = build_sqrt_encoder(key)
    assert net.widths == [3, 5, 4]
    out = outputs(net, key)
    assert out[2] == (1, 1, 1, 0)
    assert out[0] == (1, 0, 1, 0)
    assert out[3] == (1, 1, 1, 1)


@pytest.mark.parametrize("n,D", [(n, D) for n, D in MATRIX if D >= 5])
def test_sqrt_encoder_emits_step_pairs(n, D):
    key = make_key(random_dataset(n, D, 2))
    r = math.isqrt(n - 1) + 1
    net = build_sqrt_encoder(key)
    assert net.widths == [D, r + D, 2 * r]
    for i, z in enumerate(outputs(net, key)):
        k, l = divmod(i, r)
        assert z == make_step_vector(k, r) + make_step_vector(l, r)


def test_log4_examples(four_vectors):
    key = make_key(four_vectors)
    out = outputs(build_log_encoder_4layer(key), key)
    assert out[3] == (1, 1)
    assert out[0] == (0, 0)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 17, 33, 64])
def test_log4_code_is_rank(n):
    key = make_key(random_dataset(n, 8, n))
    net = build_log_encoder_4layer(key)
    assert net.num_layers == 4
    assert net.output_dim == code_width(n)
    assert [b2i(z) for z in outputs(net, key)] == list(range(n))


def test_log4_square_widths(big):
    key = make_key(big)
    net = build_log_encoder_4layer(key)
    assert net.widths == [32, 40, 16, 6]
    assert is_perfect_encoder(net, key.sorted_dataset()).ok


def test_log4_accepts_square_root_split():
    key = make_key(random_dataset(16, 8, 3))
    net = build_log_encoder_4layer(key, SqrtDecomposition.from_key(key))
    assert net.widths == [8, 12, 8, 4]
    assert [b2i(z) for z in outputs(net, key)] == list(range(16))


def test_sqrt_encoder_distinct_over_small_cube():
    # every subset of {0,1}^3 of size >= 1 encodes perfectly
    cube = list(itertools.product((0, 1), repeat=3))
    for size in range(1, 9):
        for subset in itertools.combinations(cube, size):
            key = make_key(Dataset(subset))
            assert is_perfect_encoder(build_sqrt_encoder(key), key.sorted_dataset()).ok


def test_random_small_exhausts():
    data = Dataset(((1, 0), (0, 1)))
    with pytest.raises(SearchExhausted):
        find_separating_vector(data, "random-small", seed=0, bound=0, max_attempts=5)
