"""The graded symbol ring: formal sums of symbols ``[U]_n`` with a cutoff product.

``U`` is a rational subspace of the ambient coordinate space, stored as the
HNF basis of ``U ∩ Z^r`` so each subspace has exactly one representative.
``[U1]_a * [U2]_b = [U1 + U2]_{a+b}`` when ``a + b <= m`` and 0 otherwise.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import CutoffMismatch, ResourceLimit

Basis = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=1 << 16)
def _canonical(rows: Basis, dim: int) -> Basis:
    return tuple(tuple(r) for r in linalg.saturate(rows, dim))


def canonical_subspace(vectors: Iterable[Sequence], dim: int | None = None) -> Basis:
    """Canonical basis of the span of ``vectors`` (empty tuple for the zero space)."""
    rows = [linalg.clear_denominators(v) for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    dim = len(rows[0]) if dim is None else dim
    return _canonical(tuple(tuple(r) for r in sorted(rows)), dim)


@lru_cache(maxsize=1 << 18)
def _subspace_sum(a: Basis, b: Basis) -> Basis:
    if not a:
        return b
    if not b or a == b:
        return a
    return _canonical(tuple(sorted(set(a) | set(b))), len(a[0]))


@dataclass(frozen=True, order=True)
class SubspaceSymbol:
    grade: int
    basis: Basis

    def __post_init__(self):
        if self.grade < 0:
            raise ValueError("grade must be nonnegative")
        if len(self.basis) > self.grade:
            raise ValueError(f"dim U = {len(self.basis)} exceeds grade {self.grade}")

    @classmethod
    def of(cls, vectors: Iterable[Sequence], grade: int, dim: int | None = None) -> "SubspaceSymbol":
        return cls(grade, canonical_subspace(vectors, dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def act(self, g: np.ndarray) -> "SubspaceSymbol":
        """Image under ``x -> g x`` (``g`` acts on column coordinate vectors)."""
        if not self.basis:
            return self
        img = np.array(self.basis, dtype=object).dot(np.array(g, dtype=object).T)
        return SubspaceSymbol(self.grade, canonical_subspace(img.tolist()))

    def to_json(self) -> dict:
        return {"grade": self.grade, "basis": [list(r) for r in self.basis]}


class CycleRingElement:
    """Finite rational combination of symbols sharing one cutoff ``m``."""

    __slots__ = ("cutoff", "terms")

    def __init__(self, cutoff: int, terms: Mapping[SubspaceSymbol, Fraction] | None = None):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        clean = {}
        for s, c in (terms or {}).items():
            if s.grade > cutoff:
                raise ValueError(f"symbol grade {s.grade} exceeds cutoff {cutoff}")
            c = linalg.to_fraction(c)
            if c:
                clean[s] = c
        self.cutoff = cutoff
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, cutoff: int) -> "CycleRingElement":
        return cls(cutoff)

    @classmethod
    def symbol(cls, cutoff: int, vectors: Iterable[Sequence], grade: int, coeff=1) -> "CycleRingElement":
        return cls(cutoff, {SubspaceSymbol.of(vectors, grade): linalg.to_fraction(coeff)})

    @classmethod
    def one(cls, cutoff: int) -> "CycleRingElement":
        return cls(cutoff, {SubspaceSymbol(0, ()): Fraction(1)})

    @classmethod
    def c(cls, cutoff: int, power: int = 1) -> "CycleRingElement":
        """``(c♮)^power = [0]_power``; zero above the cutoff."""
        if power > cutoff:
            return cls(cutoff)
        return cls(cutoff, {SubspaceSymbol(power, ()): Fraction(1)})

    # arithmetic
    def _check(self, other: "CycleRingElement"):
        if not isinstance(other, CycleRingElement):
            raise TypeError("expected a CycleRingElement")
        if other.cutoff != self.cutoff:
            raise CutoffMismatch(f"cutoffs {self.cutoff} and {other.cutoff} differ")

    def __add__(self, other: "CycleRingElement") -> "CycleRingElement":
        self._check(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return CycleRingElement(self.cutoff, out)

    def __neg__(self) -> "CycleRingElement":
        return CycleRingElement(self.cutoff, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "CycleRingElement") -> "CycleRingElement":
        return self + (-other)

    def scale(self, a) -> "CycleRingElement":
        a = linalg.to_fraction(a)
        return CycleRingElement(self.cutoff, {s: a * c for s, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CycleRingElement):
            return symbol_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, CycleRingElement) and self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((self.cutoff, frozenset(self.terms.items())))

    def __repr__(self):
        body = " + ".join(f"{c}*[{list(map(list, s.basis))}]_{s.grade}" for s, c in sorted(self.terms.items()))
        return f"CycleRingElement(m={self.cutoff}: {body or '0'})"

    # structure
    def grades(self) -> set[int]:
        return {s.grade for s in self.terms}

    def component(self, n: int) -> "CycleRingElement":
        return CycleRingElement(self.cutoff, {s: c for s, c in self.terms.items() if s.grade == n})

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def coefficient_sum(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def act(self, g) -> "CycleRingElement":
        out: dict[SubspaceSymbol, Fraction] = {}
        for s, c in self.terms.items():
            t = s.act(g)
            out[t] = out.get(t, Fraction(0)) + c
        return CycleRingElement(self.cutoff, out)

    def to_json(self) -> list[dict]:
        return [dict(s.to_json(), coeff=linalg.fraction_str(c)) for s, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, cutoff: int, data: Sequence[dict]) -> "CycleRingElement":
        out: dict[SubspaceSymbol, Fraction] = {}
        for t in data:
            s = SubspaceSymbol.of(t["basis"], int(t["grade"]))
            out[s] = out.get(s, Fraction(0)) + linalg.to_fraction(t["coeff"])
        return cls(cutoff, out)


def symbol_product(z1: CycleRingElement, z2: CycleRingElement) -> CycleRingElement:
    z1._check(z2)
    m = z1.cutoff
    out: dict[SubspaceSymbol, Fraction] = {}
    for s1, c1 in z1.terms.items():
        for s2, c2 in z2.terms.items():
            n = s1.grade + s2.grade
            if n > m:
                continue
            s = SubspaceSymbol(n, _subspace_sum(s1.basis, s2.basis))
            out[s] = out.get(s, Fraction(0)) + c1 * c2
    return CycleRingElement(m, out)


def degree(z: CycleRingElement) -> Fraction:
    """Sum of the coefficients in the top grade ``m``."""
    return sum((c for s, c in z.terms.items() if s.grade == z.cutoff), Fraction(0))


def pair(z1: CycleRingElement, z2: CycleRingElement) -> Fraction:
    """``deg(z1 * z2)``, computed without forming the full product."""
    z1._check(z2)
    m = z1.cutoff
    by_grade: dict[int, Fraction] = {}
    for s, c in z2.terms.items():
        by_grade[s.grade] = by_grade.get(s.grade, Fraction(0)) + c
    # every product of symbols landing in grade m has degree 1
    return sum((c * by_grade.get(m - s.grade, Fraction(0)) for s, c in z1.terms.items()), Fraction(0))


@dataclass(frozen=True)
class TruncatedPoly:
    """``sum a_n c^n`` in ``Q[c]/(c^(m+1))``."""

    cutoff: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.cutoff + 1:
            raise ValueError("need exactly cutoff + 1 coefficients")

    @classmethod
    def monomial(cls, cutoff: int, n: int, a=1) -> "TruncatedPoly":
        coeffs = [Fraction(0)] * (cutoff + 1)
        if n <= cutoff:
            coeffs[n] = linalg.to_fraction(a)
        return cls(cutoff, tuple(coeffs))

    def _check(self, other: "TruncatedPoly"):
        if self.cutoff != other.cutoff:
            raise CutoffMismatch("truncation orders differ")

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check(other)
        return TruncatedPoly(self.cutoff, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if not isinstance(other, TruncatedPoly):
            a = linalg.to_fraction(other)
            return TruncatedPoly(self.cutoff, tuple(a * x for x in self.coeffs))
        self._check(other)
        m = self.cutoff
        out = [Fraction(0)] * (m + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(m + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncatedPoly(m, tuple(out))

    def __repr__(self):
        parts = [f"{a}*c^{i}" for i, a in enumerate(self.coeffs) if a]
        return " + ".join(parts) or "0"

    def to_json(self) -> list[str]:
        return [linalg.fraction_str(a) for a in self.coeffs]


def reduce_to_truncated(z: CycleRingElement) -> TruncatedPoly:
    """Image in the quotient by the radical: ``[U]_n -> c^n``."""
    coeffs = [Fraction(0)] * (z.cutoff + 1)
    for s, c in z.terms.items():
        coeffs[s.grade] += c
    return TruncatedPoly(z.cutoff, tuple(coeffs))


# -- orbit sums ------------------------------------------------------------


def _as_matrices(gens) -> list[np.ndarray]:
    out = []
    for g in gens:
        mat = g.matrix if hasattr(g, "matrix") else g
        out.append(np.array(mat, dtype=object))
    return out


def subspace_orbit(basis: Basis, gens, limit: int = 100_000) -> list[Basis]:
    """Orbit of a canonical subspace under the group generated by ``gens`` (sorted)."""
    mats = _as_matrices(gens)
    seen = {basis}
    frontier = [basis]
    while frontier:
        nxt = []
        for b in frontier:
            for g in mats:
                img = SubspaceSymbol(len(b), b).act(g).basis
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > limit:
                        raise ResourceLimit(f"orbit larger than {limit}")
        frontier = nxt
    return sorted(seen)


def orbit_sum(vectors: Iterable[Sequence], n: int, gens, cutoff: int, limit: int = 100_000) -> CycleRingElement:
    """``Z_n(U)_Γ``: one symbol ``[γU]_n`` per element of the orbit of ``U``."""
    basis = canonical_subspace(vectors)
    return CycleRingElement(cutoff, {SubspaceSymbol(n, b): Fraction(1) for b in subspace_orbit(basis, gens, limit)})


def orbit_product_expansion(u1, n1: int, u2, n2: int, gens, cutoff: int,
                            multiplicity: bool = True, limit: int = 100_000) -> CycleRingElement:
    """Right-hand side of the orbit-sum product rule, by diagonal orbits on pairs.

    Runs over representatives ``(γ1 U1, γ2 U2)`` of the diagonal action on
    pairs of orbit elements and adds ``k * Z_{n1+n2}(W)`` for ``W = γ1 U1 + γ2 U2``.
    With ``multiplicity`` the weight ``k`` is ``|pair orbit| / |orbit of W|``
    (the index of the pair stabilizer in the stabilizer of ``W``); without it
    ``k = 1``.
    """
    mats = _as_matrices(gens)
    o1 = subspace_orbit(canonical_subspace(u1), gens, limit)
    o2 = subspace_orbit(canonical_subspace(u2), gens, limit)
    n = n1 + n2
    if n > cutoff:
        return CycleRingElement.zero(cutoff)
    remaining = {(a, b) for a in o1 for b in o2}
    total = CycleRingElement.zero(cutoff)
    for start in sorted(remaining):
        if start not in remaining:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for a, b in frontier:
                for g in mats:
                    img = (SubspaceSymbol(len(a), a).act(g).basis, SubspaceSymbol(len(b), b).act(g).basis)
                    if img not in orbit:
                        orbit.add(img)
                        nxt.append(img)
            frontier = nxt
        remaining -= orbit
        w = _subspace_sum(*start)
        wsum = orbit_sum(w, n, gens, cutoff, limit)
        k = Fraction(len(orbit), len(wsum.terms)) if multiplicity else Fraction(1)
        total = total + wsum.scale(k)
    return total


# -- random elements (test and verification aid) ------------------------------


def random_subspace(rng: random.Random, rank: int, max_dim: int, entry: int = 2) -> Basis:
    d = rng.randint(0, max_dim)
    vecs = [[rng.randint(-entry, entry) for _ in range(rank)] for _ in range(d)]
    return canonical_subspace(vecs, rank)


def random_element(rng: random.Random, cutoff: int, rank: int, terms: int = 4, coeff: int = 5) -> CycleRingElement:
    """Random element whose symbols have ``dim U <= grade <= cutoff``."""
    out: dict[SubspaceSymbol, Fraction] = {}
    for _ in range(rng.randint(0, terms)):
        n = rng.randint(0, cutoff)
        b = random_subspace(rng, rank, min(n, rank))
        s = SubspaceSymbol(n, b)
        out[s] = out.get(s, Fraction(0)) + Fraction(rng.randint(-coeff, coeff), rng.randint(1, 3))
    return CycleRingElement(cutoff, out)
