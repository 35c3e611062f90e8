"""Layered Boolean threshold networks: representation and exact evaluation.

A gate computes ``[w . x >= theta]`` with integer weights and threshold.
Python integers are used throughout, so magnitudes are unbounded; batch
evaluation drops to a numpy ``int64`` matrix product only when every
partial sum provably fits.

Layer positions follow the usual convention of counting the input layer as
layer 1, so a network with ``k`` gate layers has ``k + 1`` layers in total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, FormatError, StateError

# Largest magnitude a partial sum may reach before we stop trusting int64.
_INT64_SAFE = 2**62

Bits = tuple[int, ...]


def as_bits(values: Iterable[int]) -> Bits:
    """Validate a 0/1 sequence and return it as an immutable tuple."""
    bits = tuple(int(v) for v in values)
    for v in bits:
        if v not in (0, 1):
            raise ValueError(f"bit vector entries must be 0 or 1, got {v}")
    return bits


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


@dataclass(frozen=True)
class ThresholdGate:
    weights: tuple[int, ...]
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "threshold", int(self.threshold))

    @property
    def fan_in(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class Layer:
    gates: tuple[ThresholdGate, ...]
    fan_in: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for pos, g in enumerate(self.gates):
            if g.fan_in != self.fan_in:
                raise DimensionError(
                    f"gate {pos} has fan-in {g.fan_in}, layer expects {self.fan_in}"
                )

    @classmethod
    def from_rows(cls, weights: Sequence[Sequence[int]], thresholds: Sequence[int],
                  fan_in: int | None = None) -> "Layer":
        if len(weights) != len(thresholds):
            raise DimensionError("one threshold per weight row is required")
        if fan_in is None:
            if not weights:
                raise DimensionError("fan_in is required for an empty layer")
            fan_in = len(weights[0])
        gates = tuple(ThresholdGate(tuple(w), t) for w, t in zip(weights, thresholds))
        return cls(gates, fan_in)

    @property
    def width(self) -> int:
        return len(self.gates)

    @cached_property
    def _matrices(self):
        w = [list(g.weights) for g in self.gates]
        t = [g.threshold for g in self.gates]
        bound = max((sum(abs(x) for x in row) for row in w), default=0)
        tmax = max((abs(x) for x in t), default=0)
        dtype = np.int64 if max(bound, tmax) < _INT64_SAFE else object
        wm = np.array(w, dtype=dtype).reshape(self.width, self.fan_in)
        tv = np.array(t, dtype=dtype).reshape(self.width)
        return wm, tv

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the layer on a batch of inputs (rows of ``x``)."""
        wm, tv = self._matrices
        if x.shape[1] != self.fan_in:
            raise DimensionError(f"layer expects {self.fan_in} inputs, got {x.shape[1]}")
        if wm.dtype == object:
            sums = x.astype(object) @ wm.T
        else:
            sums = x.astype(np.int64) @ wm.T
        return (sums >= tv).astype(np.int8)


def parallel_layers(*layers: Layer) -> Layer:
    """Side-by-side composition: block ``t`` reads only its own slice of the input."""
    total = sum(layer.fan_in for layer in layers)
    gates = []
    offset = 0
    for layer in layers:
        pre = (0,) * offset
        post = (0,) * (total - offset - layer.fan_in)
        gates.extend(ThresholdGate(pre + g.weights + post, g.threshold) for g in layer.gates)
        offset += layer.fan_in
    return Layer(tuple(gates), total)


@dataclass(frozen=True)
class EvalTrace:
    """Activations of every layer, input first."""

    activations: tuple[Bits, ...]

    def __len__(self):
        return len(self.activations)

    def __getitem__(self, idx):
        return self.activations[idx]

    @property
    def output(self) -> Bits:
        return self.activations[-1]

    def layer(self, position: int) -> Bits:
        """Activation at a 1-based layer position (input layer is 1)."""
        return self.activations[position - 1]


@dataclass(frozen=True)
class LayeredNetwork:
    input_dim: int
    layers: tuple[Layer, ...] = ()
    middle_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        width = self.input_dim
        for pos, layer in enumerate(self.layers, start=2):
            if layer.fan_in != width:
                raise DimensionError(
                    f"layer {pos} has fan-in {layer.fan_in} but layer {pos - 1} has width {width}"
                )
            width = layer.width
        m = self.middle_index
        if m is not None and not 1 < m <= self.num_layers:
            raise DimensionError(
                f"middle_index {m} outside 2..{self.num_layers}"
            )

    @property
    def num_layers(self) -> int:
        return len(self.layers) + 1

    @property
    def output_dim(self) -> int:
        return self.layers[-1].width if self.layers else self.input_dim

    @property
    def widths(self) -> list[int]:
        return [self.input_dim] + [layer.width for layer in self.layers]

    def with_middle(self, middle_index: int | None) -> "LayeredNetwork":
        return LayeredNetwork(self.input_dim, self.layers, middle_index)

    def run_batch(self, x) -> list[np.ndarray]:
        """Activations for a batch of inputs: one ``(m, width)`` array per layer."""
        x = np.asarray(x, dtype=np.int8)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise DimensionError(
                f"network expects inputs of width {self.input_dim}, got shape {x.shape}"
            )
        out = [x]
        for layer in self.layers:
            out.append(layer.apply(out[-1]))
        return out

    def evaluate(self, x: Sequence[int]) -> EvalTrace:
        return eval_network(self, x)


def eval_gate(gate: ThresholdGate, x: Sequence[int]) -> int:
    if len(x) != gate.fan_in:
        raise DimensionError(f"gate expects {gate.fan_in} inputs, got {len(x)}")
    total = sum(w * int(v) for w, v in zip(gate.weights, x))
    return int(total >= gate.threshold)


def eval_network(net: LayeredNetwork, x: Sequence[int]) -> EvalTrace:
    if len(x) != net.input_dim:
        raise DimensionError(f"network expects {net.input_dim} inputs, got {len(x)}")
    acts = net.run_batch([as_bits(x)])
    return EvalTrace(tuple(tuple(int(v) for v in a[0]) for a in acts))


def stack(front: LayeredNetwork, back: LayeredNetwork, middle: bool = False) -> LayeredNetwork:
    """Feed ``front``'s output into ``back``.

    With ``middle=True`` the seam (front's output layer) becomes the middle
    layer of the result; otherwise the result has no middle layer.
    """
    if front.output_dim != back.input_dim:
        raise DimensionError(
            f"front emits {front.output_dim} bits, back expects {back.input_dim}"
        )
    mid = front.num_layers if middle else None
    return LayeredNetwork(front.input_dim, front.layers + back.layers, mid)


def split_at_middle(net: LayeredNetwork) -> tuple[LayeredNetwork, LayeredNetwork]:
    if net.middle_index is None:
        raise StateError("network has no middle layer")
    k = net.middle_index
    enc = LayeredNetwork(net.input_dim, net.layers[: k - 1])
    dec = LayeredNetwork(enc.output_dim, net.layers[k - 1:])
    return enc, dec


@dataclass(frozen=True)
class NetworkStats:
    widths: list[int]
    gate_count: int
    max_abs_weight: int
    max_abs_threshold: int
    nonzero_weights: int
    middle_index: int | None = None
    middle_width: int | None = None
    hidden_nodes: int = field(default=0)

    def as_dict(self) -> dict:
        return {
            "widths": self.widths,
            "gate_count": self.gate_count,
            "max_abs_weight": str(self.max_abs_weight),
            "max_abs_threshold": str(self.max_abs_threshold),
            "nonzero_weights": self.nonzero_weights,
            "middle_index": self.middle_index,
            "middle_width": self.middle_width,
            "hidden_nodes": self.hidden_nodes,
        }


def network_stats(net: LayeredNetwork) -> NetworkStats:
    gates = [g for layer in net.layers for g in layer.gates]
    widths = net.widths if net.layers else []
    mid_w = None
    if net.middle_index is not None:
        mid_w = net.widths[net.middle_index - 1]
    return NetworkStats(
        widths=widths,
        gate_count=len(gates),
        max_abs_weight=max((abs(w) for g in gates for w in g.weights), default=0),
        max_abs_threshold=max((abs(g.threshold) for g in gates), default=0),
        nonzero_weights=sum(1 for g in gates for w in g.weights if w != 0),
        middle_index=net.middle_index,
        middle_width=mid_w,
        hidden_nodes=sum(widths[1:-1]) if len(widths) > 2 else 0,
    )


# -- serialization -----------------------------------------------------------

def network_to_dict(net: LayeredNetwork) -> dict:
    return {
        "input_dim": net.input_dim,
        "layers": [
            {
                "weights": [[str(w) for w in g.weights] for g in layer.gates],
                "thresholds": [str(g.threshold) for g in layer.gates],
            }
            for layer in net.layers
        ],
        "middle_index": net.middle_index,
    }


def _parse_int(value, where):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FormatError(f"expected a decimal integer string, got {value!r}", where)
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"not a decimal integer: {value!r}", where) from None


def network_from_dict(doc: dict) -> LayeredNetwork:
    if not isinstance(doc, dict):
        raise FormatError("network document must be an object", "$")
    for key in ("input_dim", "layers"):
        if key not in doc:
            raise FormatError(f"missing field {key!r}", "$")
    width = doc["input_dim"]
    if isinstance(width, bool) or not isinstance(width, int) or width < 0:
        raise FormatError("input_dim must be a non-negative integer", "$.input_dim")
    if not isinstance(doc["layers"], list):
        raise FormatError("layers must be an array", "$.layers")
    layers = []
    for li, ldoc in enumerate(doc["layers"]):
        where = f"$.layers[{li}]"
        if not isinstance(ldoc, dict) or "weights" not in ldoc or "thresholds" not in ldoc:
            raise FormatError("layer needs 'weights' and 'thresholds'", where)
        rows, ths = ldoc["weights"], ldoc["thresholds"]
        if not isinstance(rows, list) or not isinstance(ths, list) or len(rows) != len(ths):
            raise FormatError("weights and thresholds must be arrays of equal length", where)
        gates = []
        for gi, (row, th) in enumerate(zip(rows, ths)):
            gw = f"{where}.weights[{gi}]"
            if not isinstance(row, list) or len(row) != width:
                raise FormatError(f"expected {width} weights", gw)
            w = tuple(_parse_int(v, f"{gw}[{k}]") for k, v in enumerate(row))
            t = _parse_int(th, f"{where}.thresholds[{gi}]")
            gates.append(ThresholdGate(w, t))
        layers.append(Layer(tuple(gates), width))
        width = len(gates)
    mid = doc.get("middle_index")
    if mid is not None and (isinstance(mid, bool) or not isinstance(mid, int)):
        raise FormatError("middle_index must be an integer or null", "$.middle_index")
    try:
        return LayeredNetwork(doc["input_dim"], tuple(layers), mid)
    except DimensionError as exc:
        raise FormatError(str(exc), "$") from None


def dumps(net: LayeredNetwork, **extra) -> str:
    doc = network_to_dict(net)
    doc.update(extra)
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def loads(text: str) -> LayeredNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return network_from_dict(doc)
