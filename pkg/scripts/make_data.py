"""Regenerate the bundled lattice JSON files under src/cyclering/data/."""
import json
from fractions import Fraction
from pathlib import Path

from cyclering import linalg

DATA = Path(__file__).resolve().parents[1] / "src" / "cyclering" / "data"


def cartan(n, edges):
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        g[a][b] = g[b][a] = -1
    return g


def gram_from_rows(rows):
    return [[sum(Fraction(a) * b for a, b in zip(r, s)) for s in rows] for r in rows]


def d16_plus_basis():
    # D16 simple roots plus the glue vector (1/2, ..., 1/2); HNF in doubled coordinates
    n = 16
    gens = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 2, -2
        gens.append(v)
    v = [0] * n
    v[n - 2] = v[n - 1] = 2
    gens.append(v)
    gens.append([1] * n)
    return [[Fraction(x, 2) for x in r] for r in linalg.hnf(gens)]


def write(name, gram):
    path = DATA / f"{name}.json"
    body = {"rank": len(gram), "gram": [[linalg.fraction_str(Fraction(x)) for x in r] for r in gram]}
    path.write_text(json.dumps(body) + "\n")
    print("wrote", path)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    for n in range(1, 9):
        write(f"I{n}", [[int(i == j) for j in range(n)] for i in range(n)])
    write("D4", cartan(4, [(0, 1), (1, 2), (1, 3)]))
    e8 = cartan(8, [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])
    write("E8", e8)
    write("E8E8", [r + [0] * 8 for r in e8] + [[0] * 8 + r for r in e8])
    write("D16plus", gram_from_rows(d16_plus_basis()))


if __name__ == "__main__":
    main()
