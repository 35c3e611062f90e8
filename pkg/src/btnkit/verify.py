"""Construction-independent checks of the perfect encoder/autoencoder properties.

The checks accept anything shaped like a network: an ``input_dim``, a
``middle_index`` and ``run_batch(X)`` returning one activation array per
layer.  :class:`LayeredNetwork` qualifies, and :class:`BooleanNetwork`
wraps arbitrary Boolean maps (truth tables or callables) so examples that
are not threshold networks can be checked by the same code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .data import Dataset
from .errors import DimensionError, ResourceError, StateError
from .network import Bits, EvalTrace, Layer, LayeredNetwork, ThresholdGate, as_bits

Stage = Union[Callable[[Bits], Sequence[int]], Mapping[Bits, Sequence[int]]]

MAX_EQUIV_DIM = 20
_CHUNK = 1 << 16


@dataclass(frozen=True)
class BooleanNetwork:
    """Layered network whose stages are arbitrary Boolean maps."""

    input_dim: int
    stages: tuple[Stage, ...]
    middle_index: int | None = None

    @property
    def num_layers(self) -> int:
        return len(self.stages) + 1

    def _apply(self, stage, x: Bits) -> Bits:
        if isinstance(stage, Mapping):
            return as_bits(stage[x])
        return as_bits(stage(x))

    def evaluate(self, x: Sequence[int]) -> EvalTrace:
        x = as_bits(x)
        if len(x) != self.input_dim:
            raise DimensionError(f"network expects {self.input_dim} inputs, got {len(x)}")
        acts = [x]
        for stage in self.stages:
            acts.append(self._apply(stage, acts[-1]))
        return EvalTrace(tuple(acts))

    def run_batch(self, X) -> list[np.ndarray]:
        traces = [self.evaluate(tuple(int(v) for v in row)) for row in np.asarray(X)]
        if not traces:
            raise DimensionError("empty batch")
        return [np.array([t[k] for t in traces], dtype=np.int8).reshape(len(traces), -1)
                for k in range(self.num_layers)]


def _trace_at(acts, i) -> EvalTrace:
    return EvalTrace(tuple(tuple(int(v) for v in a[i]) for a in acts))


def _run(net, data: Dataset):
    if net.input_dim != data.dim:
        raise DimensionError(f"network takes {net.input_dim} inputs, dataset has D={data.dim}")
    return net.run_batch(data.as_array())


def _first_duplicate(rows: np.ndarray):
    seen = {}
    for i, row in enumerate(rows):
        key = row.tobytes()
        if key in seen:
            return seen[key], i
        seen[key] = i
    return None


@dataclass(frozen=True)
class EncoderReport:
    ok: bool
    codes: tuple[Bits, ...]
    collision: tuple[int, int] | None = None
    traces: tuple[EvalTrace, ...] = ()

    def __bool__(self):
        return self.ok


def _encoder_report(codes: np.ndarray, acts) -> EncoderReport:
    hit = _first_duplicate(codes)
    table = tuple(tuple(int(v) for v in row) for row in codes)
    if hit is None:
        return EncoderReport(True, table)
    return EncoderReport(False, table, hit, tuple(_trace_at(acts, i) for i in hit))


def is_perfect_encoder(net, data: Dataset) -> EncoderReport:
    """Pairwise distinct outputs on the dataset; reports the lowest colliding pair."""
    acts = _run(net, data)
    return _encoder_report(acts[-1], acts)


@dataclass(frozen=True)
class AutoencoderReport:
    ok: bool
    middle: EncoderReport
    mismatch: tuple[int, Bits] | None = None
    trace: EvalTrace | None = None

    def __bool__(self):
        return self.ok


def is_perfect_autoencoder(net, data: Dataset) -> AutoencoderReport:
    """Output equals input on every dataset vector.

    Also checks the middle-layer codes are distinct, since a perfect
    autoencoder must have a perfect encoder as its front half.
    """
    if net.middle_index is None:
        raise StateError("autoencoder check needs a designated middle layer")
    acts = _run(net, data)
    out = acts[-1]
    if out.shape[1] != data.dim:
        raise DimensionError(f"network emits {out.shape[1]} bits, dataset has D={data.dim}")
    middle = _encoder_report(acts[net.middle_index - 1], acts)
    X = acts[0]
    bad = np.flatnonzero((out != X).any(axis=1))
    if bad.size:
        i = int(bad[0])
        got = tuple(int(v) for v in out[i])
        return AutoencoderReport(False, middle, (i, got), _trace_at(acts, i))
    if not middle.ok:
        raise AssertionError("reconstruction succeeded but middle codes collide")
    return AutoencoderReport(True, middle)


@dataclass(frozen=True)
class EquivReport:
    equivalent: bool
    checked: int
    counterexample: Bits | None = None
    outputs: tuple[Bits, Bits] | None = None

    def __bool__(self):
        return self.equivalent


def all_inputs(dim: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows ``start..stop-1`` of the truth table of ``{0,1}^dim``, MSB first."""
    stop = 2**dim if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(dim - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def exhaustive_equiv(net_a, net_b, input_dim: int) -> EquivReport:
    """Compare final outputs of two networks on all ``2**input_dim`` inputs."""
    if input_dim > MAX_EQUIV_DIM:
        raise ResourceError(f"2**{input_dim} inputs exceed the budget of 2**{MAX_EQUIV_DIM}")
    for net in (net_a, net_b):
        if net.input_dim != input_dim:
            raise DimensionError(f"network takes {net.input_dim} inputs, expected {input_dim}")
    total = 2**input_dim
    for start in range(0, total, _CHUNK):
        X = all_inputs(input_dim, start, min(total, start + _CHUNK))
        ya, yb = net_a.run_batch(X)[-1], net_b.run_batch(X)[-1]
        if ya.shape[1] != yb.shape[1]:
            raise DimensionError(f"output widths differ: {ya.shape[1]} vs {yb.shape[1]}")
        bad = np.flatnonzero((ya != yb).any(axis=1))
        if bad.size:
            i = int(bad[0])
            return EquivReport(False, start + i + 1,
                               tuple(int(v) for v in X[i]),
                               (tuple(int(v) for v in ya[i]), tuple(int(v) for v in yb[i])))
    return EquivReport(True, total)


@dataclass(frozen=True)
class Mutation:
    layer: int        # 1-based position of the gate layer's output (2 = first gate layer)
    gate: int
    param: int        # weight index, or -1 for the threshold
    delta: int
    caught: bool


@dataclass(frozen=True)
class MutationReport:
    trials: int
    detected: int
    mutations: tuple[Mutation, ...]

    @property
    def fraction(self) -> float | None:
        return self.detected / self.trials if self.trials else None


def mutate(net: LayeredNetwork, layer: int, gate: int, param: int, delta: int) -> LayeredNetwork:
    """Copy of ``net`` with one weight (or the threshold, ``param=-1``) shifted by ``delta``."""
    lyr = net.layers[layer - 2]
    g = lyr.gates[gate]
    if param < 0:
        new = ThresholdGate(g.weights, g.threshold + delta)
    else:
        w = list(g.weights)
        w[param] += delta
        new = ThresholdGate(tuple(w), g.threshold)
    gates = lyr.gates[:gate] + (new,) + lyr.gates[gate + 1:]
    layers = list(net.layers)
    layers[layer - 2] = Layer(gates, lyr.fan_in)
    return LayeredNetwork(net.input_dim, tuple(layers), net.middle_index)


def mutation_sensitivity(net: LayeredNetwork, data: Dataset, trials: int, seed: int) -> MutationReport:
    """Share of random single-parameter ``+-1`` perturbations the autoencoder check catches.

    Each trial picks a gate uniformly, then one of its weights or its
    threshold uniformly, then a sign.
    """
    rng = np.random.default_rng(seed)
    slots = [(li, gi) for li, layer in enumerate(net.layers, start=2)
             for gi in range(layer.width)]
    records = []
    for _ in range(trials):
        li, gi = slots[int(rng.integers(len(slots)))]
        fan_in = net.layers[li - 2].fan_in
        param = int(rng.integers(fan_in + 1)) - 1
        delta = 1 if rng.integers(2) else -1
        caught = not is_perfect_autoencoder(mutate(net, li, gi, param, delta), data).ok
        records.append(Mutation(li, gi, param, delta, caught))
    return MutationReport(trials, sum(m.caught for m in records), tuple(records))
