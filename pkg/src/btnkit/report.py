"""Summary table: every construction built on one dataset, checked and measured."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .autoencoders import (
    auto7_hidden_nodes,
    build_auto3,
    build_auto5_log,
    build_auto5_sqrt,
    build_auto7,
)
from .data import Dataset
from .encoders import (
    build_binary_index_encoder,
    build_log_encoder_4layer,
    build_sqrt_encoder,
    build_step_encoder,
    code_width,
)
from .errors import BTNError
from .keys import make_key
from .probabilistic import (
    build_lookup_codec,
    build_parity_encoder,
    build_random_sign_encoder,
    compute_M,
    parity_dimension,
    parity_to_threshold,
    random_sign_dimension,
)
from .verify import BooleanNetwork, is_perfect_autoencoder, is_perfect_encoder


@dataclass
class SummaryRow:
    label: str
    d_formula: str
    architecture: str
    kind: str
    target_d: int | None = None
    target_widths: list[int] | None = None
    widths: list[int] | None = None
    d: int | None = None
    verified: bool = False
    attempts: int | None = None
    match: bool = False
    in_table: bool = True
    applicable: bool = True
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def summary_rows(data: Dataset, seed: int = 0, max_attempts: int = 50) -> list[SummaryRow]:
    n, D = data.n, data.dim
    L = code_width(n)
    key = make_key(data)
    r = math.isqrt(n - 1) + 1
    rows: list[SummaryRow] = []

    def run(row, builder, check, target_d):
        row.target_d = target_d
        try:
            net, attempts = builder()
        except BTNError as exc:
            row.notes.append(f"build failed: {exc}")
            rows.append(row)
            return None
        row.attempts = attempts
        row.widths = [a.shape[1] for a in net.run_batch(data.as_array()[:1])]
        pos = net.middle_index or net.num_layers
        row.d = row.widths[pos - 1]
        row.verified = bool(check(net, data))
        shape_ok = row.target_widths is None or row.widths == row.target_widths
        row.match = row.verified and shape_ok and row.d == target_d
        rows.append(row)
        return net

    codec = build_lookup_codec(data)
    row = SummaryRow("lookup-codec", "ceil(log n)", "D/d/D", "Encoder/Decoder (BN)",
                    target_widths=[D, L, D])
    run(row, lambda: (codec.as_network(), None), is_perfect_autoencoder, L)

    if n >= 2:
        M = compute_M(data).M
        d5 = random_sign_dimension(n, M)
        row = SummaryRow("rand-sign", "ceil(8 sqrt(2M) ln n)", "D/d", "Encoder",
                        target_widths=[D, d5])
        row.notes.append(f"M={M}")
        if M == 0:
            row.notes.append("M=0: width floored at ceil(2 log2 n)")

        def rand_sign():
            b = build_random_sign_encoder(data, seed, max_attempts)
            return b.network, b.attempts
        run(row, rand_sign, is_perfect_encoder, d5)

        dp = parity_dimension(n)
        parity = {}

        def parity_bn():
            b = build_parity_encoder(data, seed, max_attempts)
            parity["build"] = b
            return BooleanNetwork(D, (b.spec,)), b.attempts
        row = SummaryRow("parity", "2 ceil(log n)", "D/d", "Encoder (BN, parity)",
                        target_widths=[D, dp])
        run(row, parity_bn, is_perfect_encoder, dp)

        row = SummaryRow("parity-thr", "2 ceil(log n)", "D/D^2/d", "Encoder")
        if "build" in parity:
            b = parity["build"]
            net = run(row, lambda: (parity_to_threshold(b.spec), b.attempts),
                      is_perfect_encoder, dp)
            hidden = net.widths[1]
            row.match = row.verified and row.d == dp and hidden <= D * D
            row.notes.append(f"hidden={hidden} (sum |S_k|) <= D^2={D * D}")
        else:
            row.target_d = dp
            row.notes.append("skipped: parity draw failed")
            rows.append(row)
    else:
        for label in ("rand-sign", "parity", "parity-thr"):
            rows.append(SummaryRow(label, "-", "-", "Encoder", applicable=False,
                                  notes=["needs n >= 2"]))

    det = [
        ("step-enc", "n", "D/n", "Encoder", [D, n], n, build_step_encoder, is_perfect_encoder),
        ("sqrt-enc", "2 ceil(sqrt n)", "D/(r+D)/2r", "Encoder", [D, r + D, 2 * r], 2 * r,
         build_sqrt_encoder, is_perfect_encoder),
        ("log-enc3", "ceil(log n)", "D/n/d", "Encoder", [D, n, L], L,
         build_binary_index_encoder, is_perfect_encoder),
        ("log-enc4", "ceil(log n)", "4 layers (O(sqrt n + D) nodes)", "Encoder", None, L,
         build_log_encoder_4layer, is_perfect_encoder),
        ("auto3", "n", "D/n/D", "Encoder/Decoder", [D, n, D], n,
         build_auto3, is_perfect_autoencoder),
        ("auto5-sqrt", "2 ceil(sqrt n)", "D/(d/2+D)/d/(dD/2)/D", "Encoder/Decoder",
         [D, r + D, 2 * r, r * D, D], 2 * r, build_auto5_sqrt, is_perfect_autoencoder),
        ("auto5-log", "ceil(log n)", "D/n/d/n/D", "Encoder/Decoder", [D, n, L, n, D], L,
         build_auto5_log, is_perfect_autoencoder),
    ]
    in_table = {"log-enc4", "auto5-sqrt", "auto5-log"}
    for label, dform, arch, kind, target, td, builder, check in det:
        row = SummaryRow(label, dform, arch, kind, target_widths=target, in_table=label in in_table)
        net = run(row, lambda b=builder: (b(key), None), check, td)
        if label == "log-enc4" and net is not None:
            hidden = sum(net.widths[1:-1])
            bound = 3 * r + D
            row.match = row.match and len(net.widths) == 4
            row.notes.append(f"hidden={hidden} vs 3 ceil(sqrt n)+D={bound}"
                             + ("" if hidden <= bound else " (exceeds)"))

    m = code_width(r)
    row = SummaryRow("auto7", "2 ceil(log sqrt n)", "7 layers (O(D sqrt n) nodes)",
                    "Encoder/Decoder",
                    target_widths=[D, r + D, 2 * r, 2 * m, 2 * r, r * D, D])
    net = run(row, lambda: (build_auto7(key), None), is_perfect_autoencoder, 2 * m)
    if net is not None:
        other = sum(net.widths[1:-1]) - row.d
        expected = auto7_hidden_nodes(D, r)
        row.match = row.match and other == expected
        row.notes.append(f"other hidden={other} vs (D+5) ceil(sqrt n)+D={expected}")
    return rows


def format_summary(rows: list[SummaryRow], data: Dataset | None = None) -> str:
    lines = []
    if data is not None:
        lines.append(f"dataset: n={data.n} D={data.dim}")
    head = f"{'row':<14} {'d formula':<22} {'target d':>8} {'d':>4} {'verified':>8} " \
           f"{'attempts':>8} {'match':>5}  realized widths / notes"
    lines.append(head)
    lines.append("-" * len(head))
    for r in rows:
        widths = "/".join(map(str, r.widths)) if r.widths else "-"
        extra = "; ".join(r.notes)
        tag = "" if r.in_table else " *"
        if not r.applicable:
            lines.append(f"{r.label + tag:<14} n/a  [{extra}]")
            continue
        lines.append(
            f"{r.label + tag:<14} {r.d_formula:<22} {str(r.target_d):>8} {str(r.d):>4} "
            f"{'yes' if r.verified else 'NO':>8} {str(r.attempts or '-'):>8} "
            f"{'yes' if r.match else 'NO':>5}  {widths}" + (f"  [{extra}]" if extra else "")
        )
    lines.append("* supporting construction, not a headline row")
    return "\n".join(lines) + "\n"
