"""Walk the rank-16 even unimodular genus and print a JSON report.

Usage: python scripts/genus16_report.py [--out report.json]
"""
import argparse
import json
import time

from cyclering import linalg
from cyclering.genus import enumerate_genus, local_invariants
from cyclering.isometry import is_isometric
from cyclering.lattice import GramTarget, rep_number, standard_lattice
from cyclering.qseries import verify_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--out")
    args = ap.parse_args()

    t0 = time.perf_counter()
    genus = enumerate_genus(standard_lattice("E8E8"), args.prime)
    walk = time.perf_counter() - t0
    lats = genus.lattices
    classes = []
    for lat, info in genus.classes:
        classes.append({
            "order_O": info.order_O,
            "order_SO": info.order_SO,
            "reps": {q: rep_number(lat, GramTarget.scalar(q)) for q in (1, 2, 3)},
            "local": {p: list(local_invariants(lat, p)) for p in (2, 3, 5, 7)},
        })
    report = {
        "classes": classes,
        "pairwise_distinct": all(is_isometric(a, b) is None for i, a in enumerate(lats) for b in lats[i + 1:]),
        "mass": linalg.fraction_str(genus.mass),
        "metadata": genus.metadata,
        "walk_seconds": round(walk, 1),
        "suite": verify_suite("genus16").to_json(),
    }
    text = json.dumps(report, indent=2, default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


if __name__ == "__main__":
    main()
