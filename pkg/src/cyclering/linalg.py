"""Exact integer and rational linear algebra on plain nested lists.

Everything here works on Python ``int`` / ``fractions.Fraction`` entries so
results never depend on floating point rounding.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

Matrix = list[list[int]]


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats are rejected: persisted data must stay exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "__index__"):
        return Fraction(int(value))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def clear_denominators(row: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector (sign kept)."""
    if all(type(x) is int for x in row):
        ints = list(row)
    else:
        fr = [to_fraction(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in fr]
    g = gcd(*ints)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def hnf_with_transform(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = U * a``.  Nonzero rows
    of ``H`` come first, pivots are positive and entries above a pivot lie in
    ``[0, pivot)``.
    """
    m = len(a)
    h = [list(map(int, r)) for r in a]
    u = identity(m)
    if m == 0:
        return h, u
    n = len(h[0])
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [i for i in range(row, m) if h[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][col]))
            if piv != row:
                h[row], h[piv] = h[piv], h[row]
                u[row], u[piv] = u[piv], u[row]
            p = h[row][col]
            clean = True
            for i in range(row + 1, m):
                if h[i][col]:
                    q = h[i][col] // p
                    if q:
                        hi, hr = h[i], h[row]
                        for j in range(col, n):
                            hi[j] -= q * hr[j]
                        ui, ur = u[i], u[row]
                        for j in range(m):
                            ui[j] -= q * ur[j]
                    if h[i][col]:
                        clean = False
            if clean:
                break
        if all(h[i][col] == 0 for i in range(row, m)):
            continue
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        p = h[row][col]
        for i in range(row):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return h, u


def hnf(a: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the Hermite normal form of the row lattice of ``a``."""
    h, _ = hnf_with_transform(a)
    return [r for r in h if any(r)]


def left_kernel(a: Sequence[Sequence[int]]) -> Matrix:
    """Saturated integer basis of ``{y : y a = 0}``."""
    h, u = hnf_with_transform(a)
    return [u[i] for i, r in enumerate(h) if not any(r)]


def saturate(rows: Sequence[Sequence], dim: int | None = None) -> Matrix:
    """HNF basis of ``span_Q(rows) ∩ Z^dim``; the canonical form of a subspace."""
    ints = [clear_denominators(r) for r in rows]
    ints = [r for r in ints if any(r)]
    if not ints:
        return []
    dim = len(ints[0]) if dim is None else dim
    right = left_kernel(transpose(ints))  # vectors y with ints . y = 0
    if not right:
        return identity(dim)
    sat = left_kernel(transpose(right))
    return hnf(sat)


def rank_int(rows: Sequence[Sequence]) -> int:
    return len(echelon(rows)[1])


def echelon(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Fraction-free (Bareiss) row echelon form.

    Rational rows are first scaled to integers, which changes neither rank
    nor right kernel.  Returns the echelon rows and the pivot columns.
    """
    m = [clear_denominators(r) for r in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, nrows):
            mi = m[i]
            a = mi[c]
            for j in range(ncols):
                mi[j] = (pr[c] * mi[j] - a * pr[j]) // prev
        prev = pr[c]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_and_kernel(rows: Sequence[Sequence]) -> tuple[int, list[list[Fraction]]]:
    """Exact rank and a right-kernel basis of a rational matrix."""
    if not rows:
        return 0, []
    ncols = len(rows[0])
    ech, pivots = echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            row, pc = ech[k], pivots[k]
            s = sum(row[j] * x[j] for j in range(pc + 1, ncols))
            x[pc] = Fraction(-s, row[pc])
        basis.append(x)
    return len(pivots), basis


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by exact Gaussian elimination over the rationals."""
    if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for r in rows for x in r):
        return Fraction(_det_int([[int(x) for x in r] for r in rows]))
    a = [[to_fraction(x) for x in r] for r in rows]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def _det_int(a: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(a)
    sign, prev = 1, 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    a = [[to_fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def int_adjugate(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """``(adj, d)`` with ``rows @ adj == d * I`` for a nonsingular integer matrix.

    Tries a rounded float inverse first and verifies it exactly; falls back to
    exact elimination when the float result does not check out.
    """
    a = [[int(x) for x in r] for r in rows]
    n = len(a)
    arr = np.array(a, dtype=float)
    d = int(round(np.linalg.det(arr)))
    if d:
        adj = np.rint(np.linalg.inv(arr) * d)
        if np.all(np.abs(adj) < 2**52):
            adj_i = [[int(x) for x in r] for r in adj]
            prod = matmul(a, adj_i)
            if all(prod[i][j] == (d if i == j else 0) for i in range(n) for j in range(n)):
                return adj_i, d
    d = int(det(a))
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    inv = inverse(a)
    return [[int(x * d) for x in r] for r in inv], d


class ModPRank:
    """Incremental rank test modulo a large prime.

    Rank mod p never exceeds the rational rank, so a vector accepted here is
    genuinely independent of the ones accepted before it.
    """

    P = 2_147_483_647

    def __init__(self):
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row normalized to pivot 1)

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.P
        w = [int(x) % p for x in v]
        for col, r in self.rows:
            f = w[col]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, r)]
        return w

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        col = next((i for i, x in enumerate(w) if x), None)
        if col is None:
            return False
        inv = pow(w[col], -1, self.P)
        self.rows.append((col, [(x * inv) % self.P for x in w]))
        return True
