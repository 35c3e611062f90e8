"""Command-line interface.

Exit codes: 0 verified, 1 property violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import network as btn
from .autoencoders import build_auto3, build_auto5_log, build_auto5_sqrt, build_auto7
from .data import random_dataset, read_dataset, write_dataset
from .dot import network_to_dot
from .encoders import (
    build_binary_index_encoder,
    build_log_encoder_4layer,
    build_sqrt_encoder,
    build_step_encoder,
)
from .errors import BTNError, FormatError, InputError
from .hardness import (
    MAX_CERTIFY_D,
    build_hard_encoder,
    certify_no_2layer_decoder,
    gen_hard_set,
    hard_encoder_terms,
)
from .keys import make_key
from .network import bits_to_str
from .probabilistic import (
    build_parity_encoder,
    build_random_sign_encoder,
    parity_to_threshold,
)
from .report import format_summary, summary_rows
from .verify import is_perfect_autoencoder, is_perfect_encoder

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

KEYED = {
    "step-enc": build_step_encoder,
    "sqrt-enc": build_sqrt_encoder,
    "log-enc3": build_binary_index_encoder,
    "log-enc4": build_log_encoder_4layer,
    "auto3": build_auto3,
    "auto5-sqrt": build_auto5_sqrt,
    "auto5-log": build_auto5_log,
    "auto7": build_auto7,
}
RANDOMIZED = ("rand-sign", "parity")
CONSTRUCTIONS = tuple(KEYED) + RANDOMIZED + ("hard-enc",)


def _density(text: str):
    if text == "dense":
        return None
    try:
        t = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("density must be 'dense' or a ones count") from None
    if t < 0:
        raise argparse.ArgumentTypeError("ones count must be >= 0")
    return t


def cmd_gen(args, out) -> int:
    data = random_dataset(args.n, args.D, args.seed, ones=args.density)
    density = "dense" if args.density is None else f"ones={args.density}"
    write_dataset(data, args.out,
                  header=[f"btnkit dataset n={args.n} D={args.D} density={density} seed={args.seed}"])
    print(f"wrote {data.n} vectors of dimension {data.dim} to {args.out}", file=out)
    return EXIT_OK


def _build(args):
    """Returns (network, metadata dict)."""
    meta = {"construction": args.construction}
    if args.construction == "hard-enc":
        if args.d is None:
            raise InputError("hard-enc needs --d")
        inst = gen_hard_set(args.d)
        meta["d"] = args.d
        meta["perm"] = list(range(inst.n))
        return build_hard_encoder(inst), meta
    if args.dataset is None:
        raise InputError(f"{args.construction} needs --dataset")
    data = read_dataset(args.dataset)
    if args.construction in RANDOMIZED:
        if args.seed is None:
            raise InputError(f"{args.construction} needs an explicit --seed")
        meta["seed"] = args.seed
        meta["perm"] = list(range(data.n))
        if args.construction == "rand-sign":
            b = build_random_sign_encoder(data, args.seed, args.max_attempts)
            meta["attempts"] = b.attempts
            return b.network, meta
        b = build_parity_encoder(data, args.seed, args.max_attempts)
        meta["attempts"] = b.attempts
        meta["parity_subsets"] = [list(s) for s in b.spec.subsets]
        return parity_to_threshold(b.spec), meta
    key = make_key(data)
    meta["perm"] = list(key.perm)
    meta["key"] = [str(a) for a in key.a]
    return KEYED[args.construction](key), meta


def cmd_build(args, out) -> int:
    net, meta = _build(args)
    stats = btn.network_stats(net)
    meta["stats"] = stats.as_dict()
    Path(args.out).write_text(btn.dumps(net, **meta))
    print(f"construction: {args.construction}", file=out)
    print(f"widths: {'/'.join(map(str, stats.widths))}", file=out)
    print(f"middle_index: {net.middle_index}", file=out)
    print(f"gates: {stats.gate_count}  max|w|: {stats.max_abs_weight}  "
          f"max|theta|: {stats.max_abs_threshold}", file=out)
    if "attempts" in meta:
        print(f"seed: {meta['seed']}  attempts: {meta['attempts']}", file=out)
    print(f"perm: {' '.join(map(str, meta['perm']))}", file=out)
    return EXIT_OK


def _load_network(path):
    path = Path(path)
    try:
        return btn.loads(path.read_text())
    except FormatError as exc:
        raise FormatError(str(exc), str(path)) from None


def cmd_verify(args, out) -> int:
    net = _load_network(args.network)
    data = read_dataset(args.dataset)
    auto = net.middle_index is not None and net.middle_index < net.num_layers
    if auto:
        rep = is_perfect_autoencoder(net, data)
        middle, ok = rep.middle, rep.ok
        print(f"perfect autoencoder: {'yes' if ok else 'NO'}", file=out)
        if rep.mismatch:
            i, got = rep.mismatch
            print(f"mismatch: vector {i} {bits_to_str(data[i])} reconstructed as "
                  f"{bits_to_str(got)}", file=out)
            print("trace: " + " | ".join(bits_to_str(a) for a in rep.trace), file=out)
        print(f"middle codes distinct: {'yes' if middle.ok else 'NO'}", file=out)
    else:
        middle = is_perfect_encoder(net, data)
        ok = middle.ok
        print(f"perfect encoder: {'yes' if ok else 'NO'}", file=out)
    if middle.collision:
        i, j = middle.collision
        print(f"collision: vectors {i} and {j} share code {bits_to_str(middle.codes[i])}",
              file=out)
    print("code table:", file=out)
    for i, (x, z) in enumerate(zip(data, middle.codes)):
        print(f"  {i:>4}  {bits_to_str(x)} -> {bits_to_str(z)}", file=out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_table1(args, out) -> int:
    data = read_dataset(args.dataset)
    rows = summary_rows(data, args.seed, args.max_attempts)
    if args.json:
        json.dump([r.as_dict() for r in rows], out, indent=1)
        out.write("\n")
    else:
        out.write(format_summary(rows, data))
    good = all(r.verified and r.match for r in rows if r.applicable)
    return EXIT_OK if good else EXIT_VIOLATION


def cmd_hardness(args, out) -> int:
    inst = gen_hard_set(args.d)
    net = build_hard_encoder(inst)
    print(f"hard instance: d={inst.d} n={inst.n} N={inst.N}", file=out)
    for t in range(inst.d):
        terms = " + ".join(f"y{p}" for p in hard_encoder_terms(inst, t)).replace(" ", "")
        print(f"bit {t}: [{terms} >= 1]", file=out)
    outputs = net.run_batch(inst.vectors)[-1]
    for k, z in enumerate(outputs):
        print(f"y^{k} → {bits_to_str(z)}", file=out)
    enc = is_perfect_encoder(net, inst.dataset())
    binary = all(b2 == k for k, b2 in enumerate(int(bits_to_str(z), 2) for z in outputs))
    print(f"encoder perfect: {'yes' if enc.ok else 'NO'}; "
          f"codes equal binary(k): {'yes' if binary else 'NO'}", file=out)
    ok = enc.ok and binary
    if args.export:
        write_dataset(inst.dataset(), args.export,
                      header=[f"btnkit hard instance d={inst.d} n={inst.n} N={inst.N}"])
    if inst.d > MAX_CERTIFY_D:
        print(f"decoder certificate: skipped (d > {MAX_CERTIFY_D})", file=out)
        return EXIT_OK if ok else EXIT_VIOLATION
    ob = certify_no_2layer_decoder(inst)
    print(ob.statement(), file=out)
    print("infeasibility certificate (multipliers; sum reads 0 >= 1):", file=out)
    for point, positive, lam in ob.witness.certificate:
        side = "w.p - theta >= 0" if positive else "theta - w.q >= 1"
        print(f"  {lam}  x  [{side}] at {bits_to_str(point)}", file=out)
    print(f"certificate re-verified: {'yes' if ob.certified else 'NO'}", file=out)
    return EXIT_OK if ok and ob.certified else EXIT_VIOLATION


def cmd_export_dot(args, out) -> int:
    net = _load_network(args.network)
    Path(args.out).write_text(network_to_dot(net))
    stats = btn.network_stats(net)
    print(f"wrote {sum(net.widths)} nodes and {stats.nonzero_weights} edges to {args.out}",
          file=out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="btnkit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log randomized attempts")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random dataset of distinct vectors")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--D", type=int, required=True)
    g.add_argument("--density", type=_density, default=None,
                   help="'dense' (default) or an exact ones count per vector")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="construct a network")
    b.add_argument("--construction", choices=CONSTRUCTIONS, required=True)
    b.add_argument("--dataset")
    b.add_argument("--d", type=int, help="hard-instance size for hard-enc")
    b.add_argument("--seed", type=int)
    b.add_argument("--max-attempts", type=int, default=50)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a network against a dataset")
    v.add_argument("--network", required=True)
    v.add_argument("--dataset", required=True)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table1", help="build and verify every construction on a dataset")
    t.add_argument("--dataset", required=True)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--max-attempts", type=int, default=50)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table1)

    h = sub.add_parser("hardness", help="hard instance, its encoder and the decoder obstruction")
    h.add_argument("--d", type=int, required=True)
    h.add_argument("--export", help="also write the instance as a dataset file")
    h.set_defaults(func=cmd_hardness)

    e = sub.add_parser("export-dot", help="write a network as a Graphviz graph")
    e.add_argument("--network", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (BTNError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
