"""Print theta coefficient tables for a few bundled lattices.

Usage: python scripts/theta_tables.py [LATTICE ...] [--n 1] [--bound 6]
"""
import argparse

from cyclering import linalg
from cyclering.genus import enumerate_genus
from cyclering.lattice import standard_lattice
from cyclering.qseries import theta_expansion


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lattices", nargs="*", default=["I3", "D4", "E8"])
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--bound", default="6")
    args = ap.parse_args()
    for name in args.lattices:
        genus = enumerate_genus(standard_lattice(name), 3)
        table = theta_expansion(genus, args.n, linalg.to_fraction(args.bound))
        tag = "" if table.certified else "  (forms not certified unique)"
        print(f"{name}: {len(genus)} class(es), n={args.n}, trace(2T) <= {args.bound}{tag}")
        for e in table.entries:
            t = "; ".join(" ".join(r) for r in e.t.to_json())
            reps = ", ".join(linalg.fraction_str(r) for r in e.reps)
            print(f"  T = [{t}]  rep = [{reps}]  A = {linalg.fraction_str(e.a_value)}")


if __name__ == "__main__":
    main()
