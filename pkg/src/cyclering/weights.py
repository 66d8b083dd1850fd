"""Weight functions on vector tuples: rational combinations of coset indicators.

A weight of size ``n`` and modulus ``N`` is a finitely supported table on
``(L / N L)^n``; the trivial weight (``N = 1``) is the indicator of ``L^n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from . import linalg
from .errors import BaseMismatch, UnsupportedWeightTransport
from .lattice import GramTarget, Lattice, enumerate_gram_tuples, rep_number

Residue = tuple[tuple[int, ...], ...]


def _residue(x: Sequence[Sequence[int]], modulus: int) -> Residue:
    return tuple(tuple(int(c) % modulus for c in v) for v in x)


@dataclass(frozen=True, eq=False)
class WeightFunction:
    base: Lattice
    n: int
    modulus: int
    table: Mapping[Residue, Fraction]

    def __post_init__(self):
        if self.n < 1 or self.modulus < 1:
            raise ValueError("weights need n >= 1 and a positive modulus")
        if self.modulus == 1 and dict(self.table) != {self._zero(): Fraction(1)}:
            raise ValueError("modulus 1 is reserved for the trivial weight")

    def _zero(self) -> Residue:
        return ((0,) * self.base.rank,) * self.n

    @classmethod
    def trivial(cls, base: Lattice, n: int) -> "WeightFunction":
        return cls(base, n, 1, {((0,) * base.rank,) * n: Fraction(1)})

    @classmethod
    def coset(cls, base: Lattice, residue, modulus: int, value=1) -> "WeightFunction":
        """``value`` times the indicator of ``residue + N L^n``."""
        residue = _residue(residue, modulus)
        return cls._build(base, len(residue), modulus, {residue: linalg.to_fraction(value)})

    @classmethod
    def _build(cls, base, n, modulus, table) -> "WeightFunction":
        table = {k: Fraction(v) for k, v in table.items() if v != 0}
        if modulus == 1:
            value = table.get(((0,) * base.rank,) * n, Fraction(0))
            if value == 1:
                return cls.trivial(base, n)
            # a constant other than 1 is stored on the modulus-2 residues
            modulus = 2
            table = {r: value for r in _all_residues(base.rank, n, 2)} if value else {}
        return cls(base, n, modulus, table)

    @property
    def trivial_flag(self) -> bool:
        return self.modulus == 1

    def __call__(self, x) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x: Sequence[Sequence[int]]) -> Fraction:
        """Table lookup of ``x mod N``; zero off the support."""
        if len(x) != self.n:
            raise ValueError(f"expected a {self.n}-tuple")
        if self.modulus == 1:
            return Fraction(1)
        return self.table.get(_residue(x, self.modulus), Fraction(0))

    def at_zero(self) -> Fraction:
        return self.evaluate(self._zero())

    def lift(self, modulus: int) -> dict[Residue, Fraction]:
        """The same function as a table modulo a multiple of ``self.modulus``."""
        if modulus % self.modulus:
            raise ValueError("can only lift to a multiple of the modulus")
        k = modulus // self.modulus
        if k == 1:
            return dict(self.table)
        out = {}
        shifts = _all_residues(self.base.rank, self.n, k)
        for res, val in self.table.items():
            for s in shifts:
                out[tuple(tuple(r + self.modulus * t for r, t in zip(rv, sv)) for rv, sv in zip(res, s))] = val
        return out

    def _check_base(self, other: "WeightFunction"):
        if self.base != other.base:
            raise BaseMismatch("weights live on different base lattices")

    def __add__(self, other: "WeightFunction") -> "WeightFunction":
        self._check_base(other)
        if self.n != other.n:
            raise ValueError("cannot add weights of different tuple size")
        m = lcm(self.modulus, other.modulus)
        if m == 1:
            return WeightFunction._build(self.base, self.n, 1, {self._zero(): Fraction(2)})
        table = self.lift(m)
        for k, v in other.lift(m).items():
            table[k] = table.get(k, Fraction(0)) + v
        return WeightFunction._build(self.base, self.n, m, table)

    def __mul__(self, c) -> "WeightFunction":
        c = linalg.to_fraction(c)
        return WeightFunction._build(self.base, self.n, self.modulus, {k: c * v for k, v in self.table.items()})

    __rmul__ = __mul__

    def __sub__(self, other: "WeightFunction") -> "WeightFunction":
        return self + other * -1

    def conjugate(self) -> "WeightFunction":
        # rational values: complex conjugation is the identity
        return self

    def to_json(self) -> dict:
        if self.modulus == 1:
            return {"trivial": True, "n": self.n}
        return {
            "n": self.n,
            "modulus": self.modulus,
            "entries": [
                {"residue": [list(v) for v in k], "value": linalg.fraction_str(val)}
                for k, val in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, base: Lattice, data: dict) -> "WeightFunction":
        if data.get("trivial"):
            return cls.trivial(base, int(data["n"]))
        modulus = int(data["modulus"])
        table: dict[Residue, Fraction] = {}
        for e in data["entries"]:
            key = _residue(e["residue"], modulus)
            table[key] = table.get(key, Fraction(0)) + linalg.to_fraction(e["value"])
        w = cls._build(base, int(data["n"]), modulus, table)
        if any(len(k) != w.n or any(len(v) != base.rank for v in k) for k in w.table):
            raise ValueError("residue shape does not match n and the lattice rank")
        return w


def _all_residues(rank: int, n: int, modulus: int):
    vecs = list(itertools.product(range(modulus), repeat=rank))
    return [tuple(c) for c in itertools.product(vecs, repeat=n)]


def tensor(phi1: WeightFunction, phi2: WeightFunction) -> WeightFunction:
    """``(phi1 ⊗ phi2)(x1, x2) = phi1(x1) phi2(x2)`` on tuples of size ``n1 + n2``."""
    phi1._check_base(phi2)
    n = phi1.n + phi2.n
    m = lcm(phi1.modulus, phi2.modulus)
    if m == 1:
        return WeightFunction.trivial(phi1.base, n)
    t1, t2 = phi1.lift(m), phi2.lift(m)
    table = {a + b: va * vb for a, va in t1.items() for b, vb in t2.items()}
    return WeightFunction._build(phi1.base, n, m, table)


def evaluate(phi: WeightFunction, x) -> Fraction:
    return phi.evaluate(x)


def rep_number_weighted(lattice: Lattice, t: GramTarget, phi: WeightFunction) -> Fraction:
    """``sum phi(x)`` over tuples with ``Q(x) = T``.

    A nontrivial weight is only meaningful on its own base lattice; using it on
    another genus class raises UnsupportedWeightTransport.
    """
    if phi.n != t.n:
        raise ValueError(f"weight has n={phi.n} but T has size {t.n}")
    if phi.trivial_flag:
        return Fraction(rep_number(lattice, t))
    if lattice != phi.base:
        raise UnsupportedWeightTransport("nontrivial weights are only defined on their base class")
    return sum((phi.evaluate(x) for x in enumerate_gram_tuples(lattice, t)), Fraction(0))
