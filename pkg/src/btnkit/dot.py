"""Graphviz DOT export of layered networks, one rank per layer, left to right."""

from __future__ import annotations

from .network import LayeredNetwork


def network_to_dot(net: LayeredNetwork, name: str = "btn") -> str:
    out = [f"digraph {name} {{", "\trankdir=LR;", "\tnode [shape=circle];"]

    def node(layer, idx):
        return f"L{layer}_{idx}"

    out.append("\t{ rank=same;")
    for j in range(net.input_dim):
        out.append(f'\t\t{node(1, j)} [label="x{j}", shape=box];')
    out.append("\t}")
    for pos, layer in enumerate(net.layers, start=2):
        mid = pos == net.middle_index
        out.append("\t{ rank=same;")
        for gi, gate in enumerate(layer.gates):
            style = ", style=bold" if mid else ""
            out.append(f'\t\t{node(pos, gi)} [label="{gate.threshold}"{style}];')
        out.append("\t}")
    for pos, layer in enumerate(net.layers, start=2):
        for gi, gate in enumerate(layer.gates):
            for src, w in enumerate(gate.weights):
                if w:
                    out.append(f'\t{node(pos - 1, src)} -> {node(pos, gi)} [label="{w}"];')
    out.append("}")
    return "\n".join(out) + "\n"
