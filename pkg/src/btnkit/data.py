"""Datasets of distinct binary vectors, random generation and the text file format.

File format: one vector per line written as a contiguous ``0``/``1`` string.
Lines starting with ``#`` are comments, blank lines are skipped, and the first
data line fixes the dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, InfeasibleError, InputError
from .network import Bits, as_bits, bits_to_str


@dataclass(frozen=True)
class Dataset:
    """``n >= 1`` pairwise distinct vectors of common dimension ``D >= 1``."""

    vectors: tuple[Bits, ...]

    def __post_init__(self):
        vecs = tuple(as_bits(v) for v in self.vectors)
        if not vecs:
            raise InputError("a dataset needs at least one vector")
        dim = len(vecs[0])
        if dim < 1:
            raise InputError("vectors must have dimension >= 1")
        seen = {}
        for i, v in enumerate(vecs):
            if len(v) != dim:
                raise InputError(f"vector {i} has length {len(v)}, expected {dim}")
            if v in seen:
                raise InputError(f"vectors {seen[v]} and {i} are identical")
            seen[v] = i
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i) -> Bits:
        return self.vectors[i]

    def __iter__(self):
        return iter(self.vectors)

    def as_array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int8).reshape(self.n, self.dim)

    def reordered(self, perm: Sequence[int]) -> "Dataset":
        return Dataset(tuple(self.vectors[p] for p in perm))


def random_dataset(n: int, dim: int, seed: int, ones: int | None = None) -> Dataset:
    """Rejection-sample ``n`` distinct vectors.

    ``ones=None`` draws every bit uniformly; otherwise every vector has
    exactly ``ones`` set bits.
    """
    if n < 1 or dim < 1:
        raise InputError("need n >= 1 and dim >= 1")
    if ones is None:
        capacity = 2**dim
    else:
        if not 0 <= ones <= dim:
            raise InputError(f"ones-count target {ones} outside 0..{dim}")
        capacity = math.comb(dim, ones)
    if n > capacity:
        raise InfeasibleError(f"only {capacity} distinct vectors exist, {n} requested")
    rng = np.random.default_rng(seed)
    seen: dict[Bits, None] = {}
    while len(seen) < n:
        if ones is None:
            v = tuple(int(b) for b in rng.integers(0, 2, size=dim))
        else:
            idx = set(int(j) for j in rng.choice(dim, size=ones, replace=False))
            v = tuple(int(j in idx) for j in range(dim))
        seen.setdefault(v, None)
    return Dataset(tuple(seen))


def format_dataset(data: Dataset, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [bits_to_str(v) for v in data]
    return "\n".join(lines) + "\n"


def parse_dataset(text: str, source: str = "<dataset>") -> Dataset:
    vecs = []
    dim = None
    where = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise FormatError("expected a string of 0/1 characters", f"{source}:{lineno}")
        if dim is None:
            dim = len(line)
        elif len(line) != dim:
            raise FormatError(f"length {len(line)} differs from {dim}", f"{source}:{lineno}")
        v = tuple(int(c) for c in line)
        if v in where:
            raise FormatError(f"duplicate of line {where[v]}", f"{source}:{lineno}")
        where[v] = lineno
        vecs.append(v)
    if not vecs:
        raise FormatError("no vectors found", source)
    return Dataset(tuple(vecs))


def read_dataset(path) -> Dataset:
    path = Path(path)
    return parse_dataset(path.read_text(), str(path))


def write_dataset(data: Dataset, path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_dataset(data, header))
