"""Positive definite lattices with exact Gram matrices and their short vectors.

Conventions: a lattice is given by the Gram matrix of the bilinear form
``(e_i, e_j)`` on a basis; the quadratic form is ``Q(x) = (x, x) / 2``.
Vectors are integer coordinate tuples in that basis.  A ``GramTarget`` stores
``T`` with ``T_ii = Q(x_i)`` and ``T_ij = (x_i, x_j) / 2``, so the bilinear
Gram of a tuple is ``2 T``.

Short vector enumeration uses a floating point Fincke-Pohst box that is
slightly widened; every vector it proposes is confirmed with exact integer
arithmetic before it is returned.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .errors import NotPositiveDefinite, ResourceLimit

Vector = tuple[int, ...]

# largest breadth-first level the enumerator will materialize
MAX_FRONTIER = 20_000_000


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        return cls(tuple(tuple(linalg.to_fraction(x) for x in r) for r in rows))

    @classmethod
    def symmetric(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        m = cls.from_rows(rows)
        if not m.is_symmetric():
            raise ValueError("matrix is not symmetric")
        return m

    @classmethod
    def zero(cls, n: int, k: int | None = None) -> "RationalMatrix":
        k = n if k is None else k
        return cls(tuple(tuple(Fraction(0) for _ in range(k)) for _ in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries))) if self.entries else self

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix.from_rows(linalg.matmul(self.entries, other.entries))

    def __mul__(self, c) -> "RationalMatrix":
        c = linalg.to_fraction(c)
        return RationalMatrix(tuple(tuple(c * x for x in r) for r in self.entries))

    __rmul__ = __mul__

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def det(self) -> Fraction:
        return linalg.det(self.entries)

    def denominator(self) -> int:
        d = 1
        for r in self.entries:
            for x in r:
                d = lcm(d, x.denominator)
        return d

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def to_json(self) -> list[list[str]]:
        return [[linalg.fraction_str(x) for x in r] for r in self.entries]

    def __repr__(self):
        return f"RationalMatrix({self.to_json()})"


def cholesky_rational(gram: RationalMatrix) -> tuple[RationalMatrix, list[Fraction]]:
    """Exact ``L D L^T`` factorization with ``L`` unit lower triangular.

    Raises NotPositiveDefinite when a pivot is ``<= 0``.
    """
    if not gram.is_symmetric():
        raise ValueError("Gram matrix must be symmetric")
    n = gram.rows
    a = [list(r) for r in gram.entries]
    low = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d: list[Fraction] = []
    for k in range(n):
        p = a[k][k] - sum(low[k][j] ** 2 * d[j] for j in range(k))
        if p <= 0:
            raise NotPositiveDefinite(f"pivot {k} is {p}")
        d.append(p)
        for i in range(k + 1, n):
            s = a[i][k] - sum(low[i][j] * low[k][j] * d[j] for j in range(k))
            low[i][k] = s / p
    return RationalMatrix(tuple(tuple(r) for r in low)), d


def is_positive_semidefinite(m: RationalMatrix) -> bool:
    """Exact PSD test by symmetric elimination with zero-pivot checks."""
    if not m.is_symmetric():
        return False
    a = [list(r) for r in m.entries]
    n = len(a)
    alive = list(range(n))
    while alive:
        k = alive.pop(0)
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[k][j] != 0 for j in alive):
                return False
            continue
        for i in alive:
            f = a[i][k] / p
            if f:
                for j in alive:
                    a[i][j] -= f * a[k][j]
    return True


def _check_positive_definite(a: Sequence[Sequence[int]]):
    """Sylvester's criterion via fraction-free elimination on an integer matrix."""
    a = [list(r) for r in a]
    n = len(a)
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            raise NotPositiveDefinite(f"leading minor {k + 1} is not positive")
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]


@dataclass(frozen=True, eq=False)
class Lattice:
    """Positive definite lattice; immutable, compared by Gram matrix."""

    gram: RationalMatrix
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.gram.rows == 0 or self.gram.rows != self.gram.cols:
            raise ValueError("Gram matrix must be square and nonempty")
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        _check_positive_definite(self.int_gram)

    @classmethod
    def from_gram(cls, rows, name: str | None = None) -> "Lattice":
        return cls(RationalMatrix.symmetric(rows), name)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        label = self.name or "Lattice"
        return f"<{label} rank={self.rank} det={linalg.fraction_str(self.det)}>"

    @property
    def rank(self) -> int:
        return self.gram.rows

    @cached_property
    def det(self) -> Fraction:
        return self.gram.det()

    @cached_property
    def denominator(self) -> int:
        """Smallest ``D`` with ``D * gram`` integral."""
        return self.gram.denominator()

    @cached_property
    def int_gram(self) -> tuple[tuple[int, ...], ...]:
        d = self.denominator
        return tuple(tuple(int(x * d) for x in r) for r in self.gram.entries)

    @cached_property
    def np_gram(self) -> np.ndarray:
        return np.array(self.int_gram, dtype=np.int64)

    @cached_property
    def _fp_data(self):
        # float data only steers the pruning; norms are confirmed exactly
        c = np.linalg.cholesky(self.np_gram.astype(float))
        diag = np.diag(c)
        mu = (c / diag).T  # mu[i][j] = L[j][i] for the unit lower factor L
        return (diag**2).tolist(), mu.tolist()

    @cached_property
    def _vector_cache(self) -> dict:
        return {}

    def norm(self, x: Sequence[int]) -> Fraction:
        """``Q(x) = (x, x) / 2``."""
        return Fraction(self.scaled_pairing(x, x), 2 * self.denominator)

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return Fraction(self.scaled_pairing(x, y), self.denominator)

    def scaled_pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.int_gram
        ys = [(j, b) for j, b in enumerate(y) if b]
        return sum(a * sum(g[i][j] * b for j, b in ys) for i, a in enumerate(x) if a)

    def with_basis(self, u: Sequence[Sequence[int]], name: str | None = None) -> "Lattice":
        """Lattice with Gram ``U^T G U`` (columns of ``U`` are the new basis)."""
        um = RationalMatrix.from_rows(u)
        return Lattice(um.T @ self.gram @ um, name)

    def scaled(self, c) -> "Lattice":
        return Lattice(self.gram * c, None if self.name is None else f"{c}*{self.name}")

    def direct_sum(self, other: "Lattice", name: str | None = None) -> "Lattice":
        n, m = self.rank, other.rank
        rows = [list(r) + [0] * m for r in self.gram.entries]
        rows += [[0] * n + list(r) for r in other.gram.entries]
        return Lattice.from_gram(rows, name)

    def is_integral(self) -> bool:
        return self.denominator == 1

    def is_even(self) -> bool:
        return self.is_integral() and all(self.int_gram[i][i] % 2 == 0 for i in range(self.rank))

    def to_json(self) -> dict:
        out = {"rank": self.rank, "gram": self.gram.to_json()}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        gram = data["gram"]
        if "rank" in data and int(data["rank"]) != len(gram):
            raise ValueError("rank does not match Gram size")
        return cls.from_gram(gram, data.get("name"))

    # -- enumeration -----------------------------------------------------

    def _fincke_pohst(self, bound: int) -> tuple[np.ndarray, np.ndarray]:
        """All ``x`` with ``x^T (D G) x <= bound`` and their exact scaled norms.

        Breadth-first over coordinates from last to first; the float pruning is
        widened by a small tolerance and every survivor is confirmed with an
        exact integer norm.
        """
        n = self.rank
        d, mu = self._fp_data
        mu = np.array(mu)
        eps = 1e-7 * max(1.0, float(bound))
        xs = np.zeros((1, n), dtype=np.int64)
        rem = np.array([float(bound)])
        for i in range(n - 1, -1, -1):
            c = -(xs[:, i + 1:] @ mu[i, i + 1:]) if i + 1 < n else np.zeros(len(xs))
            r = np.sqrt(np.maximum(rem, 0.0) / d[i])
            lo = np.ceil(c - r - eps).astype(np.int64)
            hi = np.floor(c + r + eps).astype(np.int64)
            counts = np.maximum(hi - lo + 1, 0)
            if counts.sum() > MAX_FRONTIER:
                raise ResourceLimit(f"enumeration frontier exceeds {MAX_FRONTIER} nodes")
            parent = np.repeat(np.arange(len(xs)), counts)
            offs = np.arange(len(parent)) - np.repeat(np.cumsum(counts) - counts, counts)
            v = lo[parent] + offs
            rest = rem[parent] - d[i] * (v - c[parent]) ** 2
            keep = rest >= -eps
            xs = xs[parent[keep]]
            xs[:, i] = v[keep]
            rem = rest[keep]
        if np.abs(xs).max(initial=0) > 2**20:
            raise ResourceLimit("enumeration coordinates too large for exact int64 norms")
        g = self.np_gram
        norms = np.einsum("ij,jk,ik->i", xs, g, xs)
        ok = norms <= bound
        return xs[ok], norms[ok]

    def vectors_up_to(self, qmax) -> dict[Fraction, list[Vector]]:
        """Vectors grouped by ``Q``-value for all ``Q(x) <= qmax`` (cached)."""
        qmax = linalg.to_fraction(qmax)
        if qmax < 0:
            return {}
        bound = math.floor(2 * qmax * self.denominator)
        cache = self._vector_cache
        best = max((b for b in cache if b >= bound), default=None)
        if best is None:
            xs, norms = self._fincke_pohst(bound)
            order = np.lexsort(xs.T[::-1])
            xs, norms = xs[order], norms[order]
            groups: dict[int, list[Vector]] = {}
            for nrm in np.unique(norms):
                groups[int(nrm)] = list(map(tuple, xs[norms == nrm].tolist()))
            cache[bound] = groups
            best = bound
        groups = cache[best]
        scale = 2 * self.denominator
        return {Fraction(k, scale): groups[k] for k in sorted(groups) if k <= bound}

    def norm_vectors(self, q) -> list[Vector]:
        q = linalg.to_fraction(q)
        if q < 0:
            return []
        if q == 0:
            return [(0,) * self.rank]
        return list(self.vectors_up_to(q).get(q, []))

    def norm_array(self, q) -> np.ndarray:
        vs = self.norm_vectors(q)
        if not vs:
            return np.zeros((0, self.rank), dtype=np.int64)
        return np.array(vs, dtype=np.int64)

    def minimum(self) -> Fraction:
        """Smallest nonzero ``Q``-value."""
        q = Fraction(1, 2 * self.denominator)
        top = max(self.gram.entries[i][i] for i in range(self.rank)) / 2
        while True:
            groups = self.vectors_up_to(q)
            nonzero = [k for k in groups if k > 0]
            if nonzero:
                return min(nonzero)
            if q > top:  # pragma: no cover - a basis vector always qualifies
                raise RuntimeError("minimum search failed")
            q *= 2


def standard_lattice(name: str) -> Lattice:
    """Load one of the bundled lattices (``I1``..``I8``, ``D4``, ``E8``, ``E8E8``, ``D16plus``)."""
    import json
    from importlib import resources

    path = resources.files("cyclering") / "data" / f"{name}.json"
    with path.open() as fh:
        data = json.load(fh)
    data.setdefault("name", name)
    return Lattice.from_json(data)


def bundled_lattice_names() -> list[str]:
    from importlib import resources

    root = resources.files("cyclering") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


@dataclass(frozen=True)
class GramTarget:
    """Symmetric ``n x n`` target ``T`` with ``T_ii = Q(x_i)``, ``T_ij = (x_i, x_j)/2``."""

    matrix: RationalMatrix

    def __post_init__(self):
        if self.matrix.rows == 0 or not self.matrix.is_symmetric():
            raise ValueError("GramTarget must be a nonempty symmetric matrix")

    @classmethod
    def from_rows(cls, rows) -> "GramTarget":
        if isinstance(rows, (int, Fraction, str)):
            rows = [[rows]]
        return cls(RationalMatrix.symmetric(rows))

    @classmethod
    def scalar(cls, q) -> "GramTarget":
        return cls.from_rows([[q]])

    @classmethod
    def zero(cls, n: int) -> "GramTarget":
        return cls(RationalMatrix.zero(n))

    @classmethod
    def block(cls, t1: "GramTarget", t2: "GramTarget", b: Sequence[Sequence] | None = None) -> "GramTarget":
        """``[[T1, B], [B^T, T2]]``; ``B`` defaults to zero."""
        n1, n2 = t1.n, t2.n
        b = [[0] * n2 for _ in range(n1)] if b is None else b
        rows = [list(t1.matrix.entries[i]) + list(b[i]) for i in range(n1)]
        rows += [[b[i][j] for i in range(n1)] + list(t2.matrix.entries[j]) for j in range(n2)]
        return cls.from_rows(rows)

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __getitem__(self, ij):
        return self.matrix[ij]

    def is_psd(self) -> bool:
        return is_positive_semidefinite(self.matrix)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix.entries for x in r)

    def trace(self) -> Fraction:
        return sum((self.matrix[i, i] for i in range(self.n)), Fraction(0))

    def to_json(self) -> list[list[str]]:
        return self.matrix.to_json()

    def __repr__(self):
        return f"GramTarget({self.to_json()})"


def gram_of(lattice: Lattice, xs: Sequence[Vector]) -> GramTarget:
    """Gram target ``T`` of a vector tuple (``T_ii = Q(x_i)``)."""
    n = len(xs)
    return GramTarget.from_rows(
        [[lattice.norm(xs[i]) if i == j else lattice.pairing(xs[i], xs[j]) / 2 for j in range(n)] for i in range(n)]
    )


def enumerate_norm_vectors(lattice: Lattice, q) -> list[Vector]:
    """Exactly the vectors with ``Q(x) = q``, sorted lexicographically."""
    return lattice.norm_vectors(q)


def _scaled_targets(lattice: Lattice, t: GramTarget) -> list[list[int]] | None:
    """Integer targets for ``x_i^T (D G) x_j``; None if some entry is unreachable."""
    if not t.is_psd():
        raise ValueError(f"{t} is not positive semidefinite")
    scale = 2 * lattice.denominator
    out = []
    for row in t.matrix.entries:
        r = []
        for v in row:
            s = v * scale
            if s.denominator != 1:
                return None
            r.append(int(s))
        out.append(r)
    return out


def _tuple_search(lattice: Lattice, t: GramTarget, count_only: bool):
    targets = _scaled_targets(lattice, t)
    n = t.n
    if targets is None:
        return 0 if count_only else []
    if t.is_zero():
        return 1 if count_only else [((0,) * lattice.rank,) * n]
    live = [i for i in range(n) if t[i, i] != 0]
    if len(live) < n:
        # Q(x_i) = 0 forces x_i = 0, so its row of T must vanish
        if any(t[i, j] != 0 for i in range(n) if i not in live for j in range(n)):
            return 0 if count_only else []
        sub = GramTarget.from_rows([[t[i, j] for j in live] for i in live])
        inner = _tuple_search(lattice, sub, count_only)
        if count_only:
            return inner
        zero = (0,) * lattice.rank
        out = []
        for xs in inner:
            it = iter(xs)
            out.append(tuple(next(it) if i in live else zero for i in range(n)))
        out.sort()
        return out
    pools = [lattice.norm_array(t[i, i]) for i in range(n)]
    if any(len(p) == 0 for p in pools):
        return 0 if count_only else []
    gram = lattice.np_gram
    weighted = [p @ gram for p in pools]
    found: list[tuple[Vector, ...]] = []
    total = 0

    def count_pairs(k: int, a: np.ndarray, b: np.ndarray) -> int:
        # tuples finished by one choice from level k and one from level k + 1
        wa, pb = weighted[k][a], pools[k + 1][b]
        step = max(1, 20_000_000 // max(1, len(b)))
        return sum(int((wa[i:i + step] @ pb.T == targets[k][k + 1]).sum()) for i in range(0, len(a), step))

    def descend(k: int, cands: list[np.ndarray], prefix: tuple):
        # cands[l - k] indexes the level-l vectors compatible with the prefix
        nonlocal total
        if k == n - 1:
            if count_only:
                total += len(cands[0])
            else:
                for row in pools[k][cands[0]]:
                    found.append(prefix + (tuple(int(v) for v in row),))
            return
        if count_only and k == n - 2:
            total += count_pairs(k, cands[0], cands[1])
            return
        for idx in cands[0]:
            x = pools[k][idx]
            rest = [c[weighted[l][c] @ x == targets[k][l]] for l, c in zip(range(k + 1, n), cands[1:])]
            if all(len(c) for c in rest):
                descend(k + 1, rest, prefix + (tuple(int(v) for v in x),))

    descend(0, [np.arange(len(p)) for p in pools], ())
    if count_only:
        return total
    found.sort()
    return found


def enumerate_gram_tuples(lattice: Lattice, t: GramTarget) -> list[tuple[Vector, ...]]:
    """All n-tuples ``x`` with ``Q(x) = T``, in sorted canonical order."""
    return _tuple_search(lattice, t, count_only=False)


@lru_cache(maxsize=4096)
def rep_number(lattice: Lattice, t: GramTarget) -> int:
    """Number of n-tuples with Gram target ``T``; counts without materializing."""
    return _tuple_search(lattice, t, count_only=True)


def block_completions(lattice: Lattice, t1: GramTarget, t2: GramTarget) -> Iterator[GramTarget]:
    """Every PSD ``[[T1, B], [B^T, T2]]`` with ``B`` on the pairing grid.

    ``B_ij`` ranges over ``(1 / 2D) Z`` with ``|B_ij| <= sqrt(T1_ii T2_jj)``
    (Cauchy-Schwarz), which contains every value realized by lattice vectors.
    """
    step = Fraction(1, 2 * lattice.denominator)
    ranges = []
    for i in range(t1.n):
        for j in range(t2.n):
            bound_sq = t1[i, i] * t2[j, j]
            k = 0
            while (step * (k + 1)) ** 2 <= bound_sq:
                k += 1
            ranges.append([step * s for s in range(-k, k + 1)])
    for values in itertools.product(*ranges):
        b = [list(values[i * t2.n:(i + 1) * t2.n]) for i in range(t1.n)]
        t = GramTarget.block(t1, t2, b)
        if t.is_psd():
            yield t
