"""Separating keys: an integer vector with distinct dot products on a dataset.

Every deterministic construction orders the dataset by its key value and
then addresses vectors by their rank in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Dataset
from .errors import KeyCollision, RangeError, SearchExhausted
from .network import Bits

POWERS_OF_TWO = "powers-of-two"
RANDOM_SMALL = "random-small"


@dataclass(frozen=True)
class SeparatingKey:
    """Key vector ``a``, sorted key values ``b`` and the sorting permutation.

    ``b[i] == a . data[perm[i]]`` and ``b`` is strictly increasing.
    ``vectors`` is the dataset in that sorted order.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    perm: tuple[int, ...]
    vectors: tuple[Bits, ...]

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def dim(self) -> int:
        return len(self.a)

    def sorted_dataset(self) -> Dataset:
        return Dataset(self.vectors)


def key_values(data: Dataset, a: Sequence[int]) -> list[int]:
    return [sum(int(w) * x for w, x in zip(a, v)) for v in data]


def _first_collision(values):
    seen = {}
    for i, val in enumerate(values):
        if val in seen:
            return seen[val], i, val
        seen[val] = i
    return None


def find_separating_vector(data: Dataset, strategy: str = POWERS_OF_TWO, *,
                           seed: int = 0, bound: int = 3,
                           max_attempts: int = 1000) -> tuple[int, ...]:
    """Integer vector whose dot products with the dataset are pairwise distinct.

    ``powers-of-two`` returns ``(1, 2, 4, ...)``: each vector's key is the
    integer it spells in little-endian binary, so it always separates.
    ``random-small`` draws coordinates from ``[-bound, bound]`` until the
    values are distinct, which gives smaller weights on sparse data.
    """
    if strategy == POWERS_OF_TWO:
        a = tuple(2**j for j in range(data.dim))
    elif strategy == RANDOM_SMALL:
        rng = np.random.default_rng(seed)
        a = None
        hit = None
        for _ in range(max_attempts):
            cand = tuple(int(v) for v in rng.integers(-bound, bound + 1, size=data.dim))
            hit = _first_collision(key_values(data, cand))
            if hit is None:
                a = cand
                break
        if a is None:
            raise SearchExhausted(max_attempts, hit[:2] if hit else None)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    hit = _first_collision(key_values(data, a))
    if hit is not None:
        raise KeyCollision(*hit)
    return a


def sort_by_key(data: Dataset, a: Sequence[int]) -> SeparatingKey:
    values = key_values(data, a)
    hit = _first_collision(values)
    if hit is not None:
        raise KeyCollision(*hit)
    perm = tuple(sorted(range(data.n), key=values.__getitem__))
    return SeparatingKey(
        a=tuple(int(w) for w in a),
        b=tuple(values[p] for p in perm),
        perm=perm,
        vectors=tuple(data[p] for p in perm),
    )


def make_key(data: Dataset, strategy: str = POWERS_OF_TWO, **kwargs) -> SeparatingKey:
    return sort_by_key(data, find_separating_vector(data, strategy, **kwargs))


def make_step_vector(i: int, s: int) -> Bits:
    """The ``s``-bit vector with ones in positions ``0..i``."""
    if not 0 <= i < s:
        raise RangeError(f"step level {i} outside 0..{s - 1}")
    return tuple(1 if j <= i else 0 for j in range(s))
