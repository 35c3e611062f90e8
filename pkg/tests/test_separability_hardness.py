import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btnkit.encoders import i2b
from btnkit.errors import DimensionError, InputError, RangeError, ResourceError
from btnkit.hardness import (
    build_hard_encoder,
    certify_no_2layer_decoder,
    gen_hard_set,
    hard_codes,
    hard_encoder_terms,
)
from btnkit.network import ThresholdGate, eval_gate
from btnkit.separability import certificate_total, check_linearly_separable
from btnkit.verify import is_perfect_encoder


def cube(d):
    return list(itertools.product((0, 1), repeat=d))


def brute_separable(pos, neg, dim, span=3):
    # tiny-range search; complete for dim <= 2 with span 3
    for w in itertools.product(range(-span, span + 1), repeat=dim):
        for t in range(-span * dim - 1, span * dim + 2):
            g = ThresholdGate(w, t)
            if all(eval_gate(g, p) for p in pos) and not any(eval_gate(g, q) for q in neg):
                return True
    return False


# -- separability -------------------------------------------------------------

def test_xor_not_separable():
    w = check_linearly_separable([(0, 0), (1, 1)], [(0, 1), (1, 0)], 2)
    assert not w.separable and w.verify()
    assert certificate_total(w.certificate, 2) == ((0, 0, 0), 1)


def test_and_separable():
    pos = [(1, 1, 1)]
    w = check_linearly_separable(pos, [p for p in cube(3) if p not in pos], 3)
    assert w.separable and w.verify()
    g = w.gate()
    assert all(eval_gate(g, p) == int(p == (1, 1, 1)) for p in cube(3))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_ends_of_cube_not_separable(d):
    pos = [(0,) * d, (1,) * d]
    neg = [p for p in cube(d) if p not in pos]
    w = check_linearly_separable(pos, neg, d)
    assert not w.separable
    assert all(lam >= 0 for _, _, lam in w.certificate)
    coefs, rhs = certificate_total(w.certificate, d)
    assert all(c == 0 for c in coefs) and rhs == 1


def test_errors():
    with pytest.raises(InputError):
        check_linearly_separable([(0, 1)], [(0, 1)], 2)
    with pytest.raises(InputError):
        check_linearly_separable([], [(0, 1)], 2)
    with pytest.raises(DimensionError):
        check_linearly_separable([(0, 1, 1)], [(0, 1)], 2)
    with pytest.raises(ResourceError):
        check_linearly_separable([(0,) * 13], [(1,) * 13], 13)


def test_row_budget_reported():
    pos = [(0,) * 6, (1,) * 6]
    neg = [p for p in cube(6) if p not in pos]
    with pytest.raises(ResourceError):
        check_linearly_separable(pos, neg, 6, max_rows=50)


def test_all_splits_of_square_agree_with_brute_force():
    pts = cube(2)
    for r in range(1, 4):
        for pos in itertools.combinations(pts, r):
            neg = [p for p in pts if p not in pos]
            w = check_linearly_separable(pos, neg, 2)
            assert w.verify()
            assert w.separable == brute_separable(pos, neg, 2)


def test_three_cube_count():
    # 104 of the 256 Boolean functions of 3 variables are threshold functions;
    # excluding the two constants leaves 102 proper splits
    pts = cube(3)
    count = 0
    for mask in range(1, 255):
        pos = [p for k, p in enumerate(pts) if mask >> k & 1]
        neg = [p for k, p in enumerate(pts) if not mask >> k & 1]
        w = check_linearly_separable(pos, neg, 3)
        assert w.verify()
        count += w.separable
    assert count == 102


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_swap_and_permutation_invariance(d, data):
    pts = cube(d)
    mask = data.draw(st.lists(st.booleans(), min_size=len(pts), max_size=len(pts)))
    pos = [p for p, m in zip(pts, mask) if m]
    neg = [p for p, m in zip(pts, mask) if not m]
    if not pos or not neg:
        return
    w = check_linearly_separable(pos, neg, d)
    assert w.verify()
    swapped = check_linearly_separable(neg, pos, d)
    assert swapped.verify() and swapped.separable == w.separable
    if w.separable:
        # negating the witness separates the swapped split (with threshold 1 - theta)
        g = ThresholdGate(tuple(-v for v in w.weights), 1 - w.threshold)
        assert all(eval_gate(g, q) for q in neg) and not any(eval_gate(g, p) for p in pos)
    perm = data.draw(st.permutations(range(d)))
    pp = [tuple(p[i] for i in perm) for p in pos]
    nn = [tuple(q[i] for i in perm) for q in neg]
    assert check_linearly_separable(pp, nn, d).separable == w.separable


@pytest.mark.parametrize("d", [2, 3, 4])
def test_seeded_separable_controls(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        w = rng.integers(-3, 4, size=d)
        t = int(rng.integers(-3, 4))
        pos = [p for p in cube(d) if np.dot(w, p) >= t]
        neg = [p for p in cube(d) if np.dot(w, p) < t]
        if not pos or not neg:
            continue
        res = check_linearly_separable(pos, neg, d)
        assert res.separable and res.verify()


# -- hard instance ------------------------------------------------------------------

def test_gen_hard_sizes():
    inst = gen_hard_set(3)
    assert (inst.n, inst.N) == (8, 28)
    inst2 = gen_hard_set(2)
    assert (inst2.n, inst2.N) == (4, 6)
    ones = [inst2.pairs[p] for p, v in enumerate(inst2.vectors[0]) if v]
    assert ones == [(0, 1), (0, 2), (0, 3)]


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_hard_instance_invariants(d):
    inst = gen_hard_set(d)
    assert inst.N == math.comb(inst.n, 2)
    assert len(set(inst.vectors)) == inst.n
    assert all(sum(v) == inst.n - 1 for v in inst.vectors)
    for p, (i, j) in enumerate(inst.pairs):
        assert inst.position(i, j) == p == inst.position(j, i)


@pytest.mark.parametrize("d", [1, 0, 7])
def test_gen_hard_range(d):
    with pytest.raises(RangeError):
        gen_hard_set(d)


def test_hard_encoder_d3_values():
    inst = gen_hard_set(3)
    net = build_hard_encoder(inst)
    assert net.widths == [28, 3]
    assert net.evaluate(inst.vectors[7]).output == (1, 1, 1)
    assert net.evaluate(inst.vectors[1]).output == (0, 0, 1)
    assert hard_encoder_terms(inst, 0) == [(4, 5), (6, 7)]
    assert hard_encoder_terms(inst, 2) == [(1, 3), (5, 7)]


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_hard_encoder_is_binary(d):
    inst = gen_hard_set(d)
    net = build_hard_encoder(inst)
    out = [tuple(int(v) for v in z) for z in net.run_batch(inst.vectors)[-1]]
    assert out == hard_codes(inst) == [i2b(k, d) for k in range(inst.n)]
    assert is_perfect_encoder(net, inst.dataset()).ok


@pytest.mark.parametrize("d", [2, 3, 4])
def test_certify(d):
    inst = gen_hard_set(d)
    ob = certify_no_2layer_decoder(inst)
    assert ob.certified, "a separable verdict would contradict the obstruction"
    assert ob.pair == (0, inst.n - 1)
    assert ob.column_ones == (0, inst.n - 1)
    assert "no threshold gate exists" in ob.statement()


def test_certify_d2_is_xor():
    ob = certify_no_2layer_decoder(gen_hard_set(2))
    assert set(ob.witness.pos) == {(0, 0), (1, 1)}
    assert set(ob.witness.neg) == {(0, 1), (1, 0)}


def test_certify_range():
    with pytest.raises(RangeError):
        certify_no_2layer_decoder(gen_hard_set(5))


def test_certify_d4_fast():
    t0 = time.perf_counter()
    certify_no_2layer_decoder(gen_hard_set(4))
    assert time.perf_counter() - t0 < 5


def test_certificate_rejects_negative_multiplier():
    with pytest.raises(ValueError):
        certificate_total((((0, 1), True, Fraction(-1)),), 2)
