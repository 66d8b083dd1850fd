"""Command line entry point: ``cyclering <subcommand> [args] [--out path.json]``.

Exit codes: 0 success, 1 error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import linalg
from .cycle_ring import CycleRingElement, degree, pair, reduce_to_truncated
from .errors import CycleRingError
from .genus import GenusData, GenusLimits, enumerate_genus
from .isometry import automorphism_info, is_isometric
from .lattice import GramTarget, Lattice, bundled_lattice_names, rep_number, standard_lattice
from .qseries import verify_suite, theta_expansion
from .special_cycles import (eisenstein_coefficient, flat, inner_product, reduced_special_cycle,
                             sc_pairing_matrix, sc_radical_rank, special_cycle)
from .weights import WeightFunction, rep_number_weighted


def _load_json(arg: str):
    """A path to a JSON file, or an inline JSON literal."""
    path = Path(arg)
    if path.exists():
        return json.loads(path.read_text())
    return json.loads(arg)


def load_lattice(arg: str) -> Lattice:
    if arg in bundled_lattice_names():
        return standard_lattice(arg)
    data = _load_json(arg)
    if "classes" in data:
        return GenusData.from_json(data).base
    return Lattice.from_json(data)


def load_genus(arg: str, prime: int = 3) -> GenusData:
    """Genus JSON as written by ``genus``, or a lattice whose genus is enumerated."""
    if arg not in bundled_lattice_names():
        data = _load_json(arg)
        if "classes" in data:
            return GenusData.from_json(data)
    return enumerate_genus(load_lattice(arg), prime)


def load_target(arg: str) -> GramTarget:
    data = _load_json(arg) if not _is_number(arg) else arg
    return GramTarget.from_rows(data)


def _is_number(s: str) -> bool:
    try:
        linalg.to_fraction(s)
        return True
    except (ValueError, TypeError, ZeroDivisionError):
        return False


def load_weight(arg: str | None, base: Lattice, n: int) -> WeightFunction:
    if arg is None:
        return WeightFunction.trivial(base, n)
    w = WeightFunction.from_json(base, _load_json(arg))
    if w.n != n:
        raise ValueError(f"weight has n={w.n} but T has size {n}")
    return w


# -- subcommands ---------------------------------------------------------------------


def cmd_genus(args):
    limits = GenusLimits(max_classes=args.max_classes, sample_per_class=args.sample, seed=args.seed)
    return enumerate_genus(load_lattice(args.lattice), args.prime, limits).to_json()


def cmd_aut(args):
    info = automorphism_info(load_lattice(args.lattice))
    out = info.to_json()
    out["generator_count"] = len(info.generators)
    return out


def cmd_isom(args):
    u = is_isometric(load_lattice(args.a), load_lattice(args.b))
    return {"isometric": u is not None, "witness": u.to_json() if u is not None else "distinct"}


def cmd_rep(args):
    lat = load_lattice(args.lattice)
    t = load_target(args.T)
    if args.weight:
        value = rep_number_weighted(lat, t, load_weight(args.weight, lat, t.n))
    else:
        value = Fraction(rep_number(lat, t))
    return {"T": t.to_json(), "rep": linalg.fraction_str(value)}


def cmd_cycle(args):
    genus = load_genus(args.genus, args.prime)
    t = load_target(args.T)
    phi = load_weight(args.weight, genus.base, t.n)
    z = special_cycle(genus, t, phi)
    return {
        "T": t.to_json(),
        "cutoff": genus.cutoff,
        "sharp": z.to_json(),
        "flat": flat(z).to_json(),
        "A": linalg.fraction_str(eisenstein_coefficient(genus, t, phi).value),
    }


def cmd_pair(args):
    genus = load_genus(args.genus, args.prime)
    t1, t2 = load_target(args.T1), load_target(args.T2)
    z1 = reduced_special_cycle(genus, t1, load_weight(args.weight1, genus.base, t1.n))
    z2 = reduced_special_cycle(genus, t2, load_weight(args.weight2, genus.base, t2.n))
    return {"inner_product": linalg.fraction_str(inner_product(z1, z2))}


def cmd_gram_matrix(args):
    genus = load_genus(args.genus, args.prime)
    left = [(t, WeightFunction.trivial(genus.base, t.n)) for t in map(load_target, args.left)]
    right = None
    if args.right:
        right = [(t, WeightFunction.trivial(genus.base, t.n)) for t in map(load_target, args.right)]
    mat = sc_pairing_matrix(genus, left, right)
    return {"matrix": [[linalg.fraction_str(x) for x in r] for r in mat]}


def cmd_sc_rank(args):
    data = _load_json(args.matrix)
    mat = data["matrix"] if isinstance(data, dict) else data
    rank, kernel = sc_radical_rank([[linalg.to_fraction(x) for x in r] for r in mat])
    return {"rank": rank, "kernel": [[linalg.fraction_str(x) for x in v] for v in kernel]}


def cmd_theta(args):
    genus = load_genus(args.genus, args.prime)
    phi = load_weight(args.weight, genus.base, args.n) if args.weight else None
    return theta_expansion(genus, args.n, linalg.to_fraction(args.bound), phi).to_json()


def cmd_ring(args):
    def elem(arg):
        return CycleRingElement.from_json(args.cutoff, _load_json(arg))

    a = elem(args.a)
    if args.op == "deg":
        return {"degree": linalg.fraction_str(degree(a))}
    if args.op == "reduce":
        return {"truncated": reduce_to_truncated(a).to_json()}
    if args.b is None:
        raise ValueError(f"ring {args.op} needs two elements")
    b = elem(args.b)
    if args.op == "mul":
        return {"product": (a * b).to_json()}
    return {"pair": linalg.fraction_str(pair(a, b))}


def cmd_verify(args):
    return verify_suite(args.suite, seed=args.seed).to_json()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclering", description="Special-cycle ring computations on definite lattices.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write JSON here instead of stdout")
        return sp

    sp = add("genus", cmd_genus, "enumerate a genus by p-neighbours")
    sp.add_argument("lattice")
    sp.add_argument("--prime", type=int, default=3)
    sp.add_argument("--max-classes", type=int, default=64)
    sp.add_argument("--sample", type=int, default=24, help="lines sampled per class when not exhaustive")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("aut", cmd_aut, "automorphism group orders")
    sp.add_argument("lattice")

    sp = add("isom", cmd_isom, "isometry test with witness")
    sp.add_argument("a")
    sp.add_argument("b")

    sp = add("rep", cmd_rep, "representation number of a Gram target")
    sp.add_argument("lattice")
    sp.add_argument("--T", required=True)
    sp.add_argument("--weight")

    for name, func, text in [("cycle", cmd_cycle, "special cycle: sharp values, flat rep vector, A(T)"),
                             ("theta", cmd_theta, "theta coefficient table")]:
        sp = add(name, func, text)
        sp.add_argument("genus", help="genus JSON, or a lattice whose genus is enumerated")
        sp.add_argument("--prime", type=int, default=3)
        sp.add_argument("--weight")
        if name == "cycle":
            sp.add_argument("--T", required=True)
        else:
            sp.add_argument("--n", type=int, default=1)
            sp.add_argument("--bound", default="4", help="bound on trace(2T)")

    sp = add("pair", cmd_pair, "inner product of two flat special cycles")
    sp.add_argument("genus")
    sp.add_argument("--prime", type=int, default=3)
    sp.add_argument("--T1", required=True)
    sp.add_argument("--T2", required=True)
    sp.add_argument("--weight1")
    sp.add_argument("--weight2")

    sp = add("gram-matrix", cmd_gram_matrix, "pairing matrix between two families of targets")
    sp.add_argument("genus")
    sp.add_argument("--prime", type=int, default=3)
    sp.add_argument("--left", nargs="+", required=True)
    sp.add_argument("--right", nargs="+")

    sp = add("sc-rank", cmd_sc_rank, "rank and left kernel of a pairing matrix")
    sp.add_argument("matrix")

    sp = add("ring", cmd_ring, "symbol ring arithmetic")
    sp.add_argument("op", choices=["mul", "deg", "pair", "reduce"])
    sp.add_argument("a")
    sp.add_argument("b", nargs="?")
    sp.add_argument("--cutoff", type=int, required=True)

    sp = add("verify", cmd_verify, "run a named verification suite")
    sp.add_argument("suite")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (CycleRingError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.command == "verify" and not result["passed"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
