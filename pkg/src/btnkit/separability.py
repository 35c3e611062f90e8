"""Exact linear-separability decision for sets of bit vectors.

We look for integer ``(w, theta)`` with ``w.p >= theta`` on the positive set
and ``w.q <= theta - 1`` on the negative set.  Since the constraints are
homogeneous apart from the margin, any rational solution scales to an
integer one, so the question is plain rational feasibility.

Feasibility is decided by Fourier-Motzkin elimination in exact rationals.
Each derived row remembers the nonnegative multipliers of the original rows
that produced it, which gives a Farkas certificate on infeasibility for free.
Redundant rows are pruned with Chernikov's rule (a row built from more than
``k + 1`` originals after ``k`` eliminations is implied by others).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, InputError, ResourceError
from .network import Bits, ThresholdGate, as_bits, eval_gate

MAX_DIM = 12
MAX_ROWS = 200_000


@dataclass(frozen=True)
class _Row:
    coefs: tuple[Fraction, ...]   # row means coefs . z >= rhs
    rhs: Fraction
    mult: tuple[tuple[int, Fraction], ...]
    hist: frozenset


def _scale(row: _Row, f: Fraction) -> _Row:
    return _Row(tuple(c * f for c in row.coefs), row.rhs * f,
                tuple((i, m * f) for i, m in row.mult), row.hist)


def _combine(p: _Row, q: _Row, var: int) -> _Row:
    # p has a positive coefficient on var, q a negative one.
    lp, lq = -q.coefs[var], p.coefs[var]
    mult: dict[int, Fraction] = {}
    for i, m in p.mult:
        mult[i] = mult.get(i, 0) + m * lp
    for i, m in q.mult:
        mult[i] = mult.get(i, 0) + m * lq
    coefs = tuple(a * lp + b * lq for a, b in zip(p.coefs, q.coefs))
    return _normalize(_Row(coefs, p.rhs * lp + q.rhs * lq,
                           tuple(sorted(mult.items())), p.hist | q.hist))


def _normalize(row: _Row) -> _Row:
    big = max((abs(c) for c in row.coefs), default=0)
    if big == 0:
        return row
    return _scale(row, 1 / big)


def _eliminate(rows: list[_Row], var: int, stage: int, max_rows: int) -> list[_Row]:
    pos = [r for r in rows if r.coefs[var] > 0]
    neg = [r for r in rows if r.coefs[var] < 0]
    out: dict[tuple, _Row] = {}

    def keep(r: _Row):
        prev = out.get(r.coefs)
        if prev is None or r.rhs > prev.rhs or (r.rhs == prev.rhs and len(r.hist) < len(prev.hist)):
            out[r.coefs] = r

    for r in rows:
        if r.coefs[var] == 0:
            keep(r)
    for p in pos:
        for q in neg:
            if len(p.hist | q.hist) > stage + 1:
                continue
            keep(_combine(p, q, var))
            if len(out) > max_rows:
                raise ResourceError(
                    f"Fourier-Motzkin blow-up: more than {max_rows} rows after "
                    f"eliminating {stage} variables"
                )
    return list(out.values())


@dataclass(frozen=True)
class SeparabilityWitness:
    """Verdict of :func:`check_linearly_separable`.

    Separable: ``weights``/``threshold`` classify every point.  Not separable:
    ``certificate`` lists ``(point, is_positive, multiplier)`` triples whose
    weighted constraint sum reads ``0 >= 1``.
    """

    separable: bool
    dim: int
    pos: tuple[Bits, ...]
    neg: tuple[Bits, ...]
    weights: tuple[int, ...] | None = None
    threshold: int | None = None
    certificate: tuple[tuple[Bits, bool, Fraction], ...] = ()

    def gate(self) -> ThresholdGate:
        if not self.separable:
            raise ValueError("no separating gate for a non-separable split")
        return ThresholdGate(self.weights, self.threshold)

    def verify(self) -> bool:
        if self.separable:
            g = self.gate()
            return (all(eval_gate(g, p) == 1 for p in self.pos)
                    and all(eval_gate(g, q) == 0 for q in self.neg))
        return certificate_total(self.certificate, self.dim) == (
            (Fraction(0),) * (self.dim + 1), Fraction(1))


def certificate_total(cert, dim: int):
    """Sum of the certified constraints as ``(coefficients on (w, theta), rhs)``.

    Positive point ``p`` contributes ``w.p - theta >= 0``, negative point
    ``q`` contributes ``-w.q + theta >= 1``.
    """
    coefs = [Fraction(0)] * (dim + 1)
    rhs = Fraction(0)
    for point, positive, lam in cert:
        if lam < 0:
            raise ValueError("certificate multipliers must be nonnegative")
        sign = 1 if positive else -1
        for j, v in enumerate(point):
            coefs[j] += sign * lam * v
        coefs[dim] -= sign * lam
        if not positive:
            rhs += lam
    return tuple(coefs), rhs


def _pick(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(math.floor(hi))
    if hi is None:
        return Fraction(math.ceil(lo))
    c = Fraction(math.ceil(lo))
    return c if c <= hi else lo


def check_linearly_separable(pos: Iterable[Sequence[int]], neg: Iterable[Sequence[int]],
                             dim: int, max_rows: int = MAX_ROWS) -> SeparabilityWitness:
    pos = tuple(dict.fromkeys(as_bits(p) for p in pos))
    neg = tuple(dict.fromkeys(as_bits(q) for q in neg))
    if not pos or not neg:
        raise InputError("both point sets must be nonempty")
    for p in pos + neg:
        if len(p) != dim:
            raise DimensionError(f"point {p} does not have dimension {dim}")
    if set(pos) & set(neg):
        raise InputError("positive and negative sets overlap")
    if dim > MAX_DIM:
        raise ResourceError(f"dimension {dim} exceeds the elimination budget of {MAX_DIM}")

    points = [(p, True) for p in pos] + [(q, False) for q in neg]
    nv = dim + 1
    rows = []
    for idx, (x, positive) in enumerate(points):
        sign = 1 if positive else -1
        coefs = tuple(Fraction(sign * v) for v in x) + (Fraction(-sign),)
        rhs = Fraction(0 if positive else 1)
        rows.append(_normalize(_Row(coefs, rhs, ((idx, Fraction(1)),), frozenset([idx]))))

    # theta first: it pairs every positive point with every negative one.
    order = [dim] + list(range(dim))
    stages = []
    for stage, var in enumerate(order, start=1):
        stages.append(rows)
        rows = _eliminate(rows, var, stage, max_rows)

    for r in rows:
        if r.rhs > 0:
            cert = tuple((points[i][0], points[i][1], m / r.rhs) for i, m in r.mult if m != 0)
            return SeparabilityWitness(False, dim, pos, neg, certificate=cert)

    z = [Fraction(0)] * nv
    for var, srows in zip(reversed(order), reversed(stages)):
        lo = hi = None
        for r in srows:
            c = r.coefs[var]
            if c == 0:
                continue
            rest = r.rhs - sum(r.coefs[v] * z[v] for v in range(nv) if v != var)
            bound = rest / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        z[var] = _pick(lo, hi)
    scale = math.lcm(*(v.denominator for v in z))
    ints = [int(v * scale) for v in z]
    # Integer scaling keeps w.q < theta strict, so the unit margin survives.
    g = math.gcd(*ints) or 1
    ints = [v // g for v in ints]
    w, theta = tuple(ints[:dim]), ints[dim]
    witness = SeparabilityWitness(True, dim, pos, neg, weights=w, threshold=theta)
    if not witness.verify():
        raise AssertionError("back-substitution produced a non-separating gate")
    return witness

