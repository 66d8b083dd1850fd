"""Special cycles on a genus: symbol-valued class functions, their flat images,
the total degree, the inner product and genus-averaged coefficients.

A genus with classes ``L_j`` carries weights ``w_j = 1/|SO(L_j)|``.  A
"sharp" class is one symbol-ring element per genus class; its flat image keeps
only the per-class coefficient sums (the representation numbers).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cycle_ring import CycleRingElement, SubspaceSymbol, canonical_subspace, symbol_product
from .errors import GenusMismatch, NotHomogeneous, UnsupportedWeightTransport
from .genus import GenusData
from .lattice import GramTarget, Lattice, enumerate_gram_tuples
from .weights import WeightFunction, rep_number_weighted, tensor


def _check_same(g1: GenusData, g2: GenusData):
    if not g1.same_as(g2):
        raise GenusMismatch("classes live on different genus data")


def _weight_on(lattice: Lattice, phi: WeightFunction):
    if phi.trivial_flag:
        return lambda x: Fraction(1)
    if lattice != phi.base:
        raise UnsupportedWeightTransport("nontrivial weights are only defined on their base class")
    return phi.evaluate


def genus_average(genus: GenusData, values: Sequence[Fraction]) -> Fraction:
    """``sum w_j v_j / sum w_j``."""
    w = genus.weights
    return sum((a * b for a, b in zip(w, values)), Fraction(0)) / sum(w, Fraction(0))


@dataclass(frozen=True, eq=False)
class GenusClassFunction:
    genus: GenusData
    values: tuple[CycleRingElement, ...]
    grade: int | None = None  # known grade, kept so that a zero class still has one

    def __post_init__(self):
        if len(self.values) != len(self.genus.classes):
            raise ValueError("need one value per genus class")
        if any(v.cutoff != self.genus.cutoff for v in self.values):
            raise ValueError("values must use the genus cutoff rank - 2")

    @property
    def cutoff(self) -> int:
        return self.genus.cutoff

    def grades(self) -> set[int]:
        return set().union(*(v.grades() for v in self.values))

    def __add__(self, other: "GenusClassFunction") -> "GenusClassFunction":
        _check_same(self.genus, other.genus)
        grade = self.grade if self.grade == other.grade else None
        return GenusClassFunction(self.genus, tuple(a + b for a, b in zip(self.values, other.values)), grade)

    def scale(self, a) -> "GenusClassFunction":
        return GenusClassFunction(self.genus, tuple(v.scale(a) for v in self.values), self.grade)

    def __mul__(self, other):
        if isinstance(other, GenusClassFunction):
            return sharp_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return (isinstance(other, GenusClassFunction) and self.genus.same_as(other.genus)
                and self.values == other.values)

    def is_invariant(self) -> bool:
        """Each value is fixed by the automorphism generators of its class."""
        for (_, aut), v in zip(self.genus.classes, self.values):
            if any(v.act(g.matrix) != v for g in aut.generators):
                return False
        return True

    def to_json(self) -> list:
        return [v.to_json() for v in self.values]


@dataclass(frozen=True, eq=False)
class ReducedClass:
    """The flat class ``rep * c^grade`` with ``rep`` one rational per genus class."""

    genus: GenusData
    grade: int
    rep: tuple[Fraction, ...]

    def __post_init__(self):
        if self.grade > self.genus.cutoff:
            raise ValueError("grade exceeds the cutoff")
        if len(self.rep) != len(self.genus.classes):
            raise ValueError("need one value per genus class")

    @classmethod
    def constant(cls, genus: GenusData, grade: int, value=1) -> "ReducedClass":
        """``value * c^grade``."""
        return cls(genus, grade, (linalg.to_fraction(value),) * len(genus.classes))

    def __add__(self, other: "ReducedClass") -> "ReducedClass":
        _check_same(self.genus, other.genus)
        if self.grade != other.grade:
            raise NotHomogeneous("cannot add flat classes of different grades")
        return ReducedClass(self.genus, self.grade, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def scale(self, a) -> "ReducedClass":
        a = linalg.to_fraction(a)
        return ReducedClass(self.genus, self.grade, tuple(a * r for r in self.rep))

    def __mul__(self, other):
        """Classwise product in the truncated ring; None (the zero class) above the cutoff."""
        if not isinstance(other, ReducedClass):
            return self.scale(other)
        _check_same(self.genus, other.genus)
        n = self.grade + other.grade
        if n > self.genus.cutoff:
            return None
        return ReducedClass(self.genus, n, tuple(a * b for a, b in zip(self.rep, other.rep)))

    def __eq__(self, other):
        return (isinstance(other, ReducedClass) and self.genus.same_as(other.genus)
                and self.grade == other.grade and self.rep == other.rep)

    def to_json(self) -> dict:
        return {"grade": self.grade, "rep": [linalg.fraction_str(r) for r in self.rep]}


@dataclass(frozen=True)
class EisensteinCoefficient:
    t: GramTarget
    value: Fraction

    def to_json(self) -> dict:
        return {"T": self.t.to_json(), "A": linalg.fraction_str(self.value)}


def special_cycle(genus: GenusData, t: GramTarget, phi: WeightFunction) -> GenusClassFunction:
    """``sum phi(x) [U(x)]_n`` over tuples with ``Q(x) = T``, class by class."""
    m = genus.cutoff
    n = t.n
    if n > m:
        raise ValueError(f"grade {n} exceeds the cutoff {m}")
    if phi.n != n:
        raise ValueError(f"weight has n={phi.n} but T has size {n}")
    values = []
    for lattice in genus.lattices:
        w = _weight_on(lattice, phi)
        terms: dict[SubspaceSymbol, Fraction] = {}
        for x in enumerate_gram_tuples(lattice, t):
            c = w(x)
            if c:
                s = SubspaceSymbol(n, canonical_subspace(x, lattice.rank))
                terms[s] = terms.get(s, Fraction(0)) + c
        values.append(CycleRingElement(m, terms))
    return GenusClassFunction(genus, tuple(values), n)


def flat(z: GenusClassFunction) -> ReducedClass:
    """Per-class coefficient sums of a homogeneous sharp class."""
    grades = z.grades()
    if len(grades) > 1 or (grades and z.grade is not None and grades != {z.grade}):
        raise NotHomogeneous(f"class has grades {sorted(grades)}")
    n = grades.pop() if grades else (z.grade or 0)
    return ReducedClass(z.genus, n, tuple(v.coefficient_sum() for v in z.values))


def reduced_special_cycle(genus: GenusData, t: GramTarget, phi: WeightFunction) -> ReducedClass:
    """``flat(special_cycle(...))`` computed from counts alone."""
    if t.n > genus.cutoff:
        raise ValueError(f"grade {t.n} exceeds the cutoff {genus.cutoff}")
    return ReducedClass(genus, t.n, tuple(rep_number_weighted(l, t, phi) for l in genus.lattices))


def deg_tot(z: ReducedClass) -> Fraction:
    """``2 * sum w_j rep_j / sum w_j`` in the top grade, 0 below it."""
    if z.grade != z.genus.cutoff:
        return Fraction(0)
    return 2 * genus_average(z.genus, z.rep)


def inner_product(z1: ReducedClass, z2: ReducedClass) -> Fraction:
    _check_same(z1.genus, z2.genus)
    if z1.grade + z2.grade != z1.genus.cutoff:
        return Fraction(0)
    return 2 * genus_average(z1.genus, [a * b for a, b in zip(z1.rep, z2.rep)])


def sharp_product(z1: GenusClassFunction, z2: GenusClassFunction) -> GenusClassFunction:
    _check_same(z1.genus, z2.genus)
    grade = None
    if z1.grade is not None and z2.grade is not None and z1.grade + z2.grade <= z1.cutoff:
        grade = z1.grade + z2.grade
    return GenusClassFunction(z1.genus, tuple(symbol_product(a, b) for a, b in zip(z1.values, z2.values)), grade)


def eisenstein_coefficient(genus: GenusData, t: GramTarget, phi: WeightFunction) -> EisensteinCoefficient:
    """Genus average of the weighted representation numbers of ``T``.

    For ``n <= m`` this is ``deg_tot(flat(z(T, phi)) * c^(m-n)) / 2``.
    """
    reps = [rep_number_weighted(l, t, phi) for l in genus.lattices]
    return EisensteinCoefficient(t, genus_average(genus, reps))


def block_sum_coefficient(genus: GenusData, t1: GramTarget, t2: GramTarget, phi) -> Fraction:
    """``sum_B A([[T1, B], [B^T, T2]], phi)`` over the admissible off-diagonal blocks."""
    from .lattice import block_completions

    total = Fraction(0)
    for t in block_completions(genus.base, t1, t2):
        total += eisenstein_coefficient(genus, t, phi).value
    return total


def padded_partner(t: GramTarget, phi: WeightFunction, grade: int) -> tuple[GramTarget, WeightFunction]:
    """``(T ⊕ 0, conj(phi) ⊗ trivial)`` of size ``grade >= n``.

    Anisotropy forces the padded vectors to vanish, so the partner has the
    same (conjugated) representation numbers as ``(T, phi)``.
    """
    n = t.n
    if grade < n:
        raise ValueError("padding can only enlarge T")
    if grade == n:
        return t, phi.conjugate()
    pad = GramTarget.block(t, GramTarget.zero(grade - n))
    return pad, tensor(phi.conjugate(), WeightFunction.trivial(phi.base, grade - n))


def sc_pairing_matrix(genus: GenusData, left: Sequence[tuple[GramTarget, WeightFunction]],
                      right: Sequence[tuple[GramTarget, WeightFunction]] | None = None) -> list[list[Fraction]]:
    """Inner products between flat classes of two generator families."""
    right = left if right is None else right
    lz = [reduced_special_cycle(genus, t, phi) for t, phi in left]
    rz = [reduced_special_cycle(genus, t, phi) for t, phi in right]
    return [[inner_product(a, b) for b in rz] for a in lz]


def sc_radical_rank(matrix: Sequence[Sequence]) -> tuple[int, list[list[Fraction]]]:
    """Rank of a pairing block and a basis of its left kernel.

    A kernel vector ``a`` gives a combination ``sum a_i z_i`` of the row
    generators that pairs to zero with every column generator.  The rank is a
    lower bound for the dimension of the corresponding graded piece.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return 0, []
    if not rows[0]:
        return 0, [[Fraction(int(i == j)) for j in range(len(rows))] for i in range(len(rows))]
    return linalg.rank_and_kernel(linalg.transpose(rows))
