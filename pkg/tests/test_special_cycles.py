from fractions import Fraction

import pytest

from cyclering.cycle_ring import CycleRingElement
from cyclering.errors import GenusMismatch, NotHomogeneous
from cyclering.genus import single_class_genus
from cyclering.lattice import GramTarget, block_completions, standard_lattice
from cyclering.special_cycles import (GenusClassFunction, ReducedClass, block_sum_coefficient, deg_tot,
                                      eisenstein_coefficient, flat, inner_product, padded_partner,
                                      reduced_special_cycle, sc_pairing_matrix, sc_radical_rank,
                                      sharp_product, special_cycle)
from cyclering.weights import WeightFunction, tensor

T1 = GramTarget.scalar(1)


@pytest.fixture(scope="module")
def e8g(e8):
    return single_class_genus(e8)


@pytest.fixture(scope="module")
def i4g():
    return single_class_genus(standard_lattice("I4"))


def triv(genus, n):
    return WeightFunction.trivial(genus.base, n)


def test_zero_target_is_power_of_c(i4g):
    phi = WeightFunction.coset(i4g.base, [(0, 0, 0, 0), (0, 0, 0, 0)], 2, 3)
    z = special_cycle(i4g, GramTarget.zero(2), phi)
    assert z.values == (CycleRingElement.c(2, 2).scale(3),)
    assert flat(z) == ReducedClass.constant(i4g, 2, 3)


def test_e8_norm1_cycle(e8g):
    z = special_cycle(e8g, T1, triv(e8g, 1))
    (v,) = z.values
    # a root and its negative span the same line
    assert len(v.terms) == 120
    assert set(v.terms.values()) == {2}
    assert v.coefficient_sum() == 240
    assert flat(z).rep == (240,)
    assert z.is_invariant()


def test_rank16_norm1_cycle(genus16):
    f = reduced_special_cycle(genus16, T1, triv(genus16, 1))
    assert f.rep == (480, 480)
    assert eisenstein_coefficient(genus16, T1, triv(genus16, 1)).value == 480


def test_flat_linear(i4g):
    a = special_cycle(i4g, GramTarget.scalar(1), triv(i4g, 1))
    b = special_cycle(i4g, GramTarget.scalar(Fraction(1, 2)), triv(i4g, 1))
    assert flat(a + b) == flat(a) + flat(b)
    assert flat(a) == reduced_special_cycle(i4g, GramTarget.scalar(1), triv(i4g, 1))


def test_flat_needs_homogeneous(i4g):
    a = special_cycle(i4g, GramTarget.scalar(1), triv(i4g, 1))
    b = special_cycle(i4g, GramTarget.zero(2), triv(i4g, 2))
    with pytest.raises(NotHomogeneous):
        flat(a + b)
    with pytest.raises(NotHomogeneous):
        flat(a) + flat(b)


def test_deg_tot(e8g, genus16):
    assert deg_tot(ReducedClass.constant(e8g, 6)) == 2
    assert deg_tot(ReducedClass(e8g, 6, (Fraction(7),))) == 14
    assert deg_tot(ReducedClass.constant(e8g, 5)) == 0
    w1, w2 = genus16.weights
    r = ReducedClass(genus16, 14, (Fraction(3), Fraction(5)))
    assert deg_tot(r) == 2 * (3 * w1 + 5 * w2) / (w1 + w2)


def test_inner_product_examples(e8g):
    z1 = reduced_special_cycle(e8g, T1, triv(e8g, 1))
    z0 = reduced_special_cycle(e8g, GramTarget.zero(5), triv(e8g, 5))
    assert inner_product(z1, z0) == 480
    assert inner_product(ReducedClass.constant(e8g, 2), ReducedClass.constant(e8g, 4)) == 2
    assert inner_product(z1, z1) == 0


def test_sharp_product_formula(e8g):
    z = special_cycle(e8g, T1, triv(e8g, 1))
    total = None
    for t in block_completions(e8g.base, T1, T1):
        s = special_cycle(e8g, t, triv(e8g, 2))
        total = s if total is None else total + s
    assert sharp_product(z, z) == total
    assert flat(z * z).rep == (Fraction(240 ** 2),)


def test_product_with_zero_class_raises_grade(i4g):
    z = special_cycle(i4g, GramTarget.scalar(1), triv(i4g, 1))
    c = special_cycle(i4g, GramTarget.zero(1), triv(i4g, 1) * 2)
    assert (z * c).values == ((z.values[0] * CycleRingElement.c(2)).scale(2),)
    assert flat(z * c) == flat(z).scale(2) * ReducedClass.constant(i4g, 1)
    top = special_cycle(i4g, GramTarget.zero(2), triv(i4g, 2))
    assert (z * top).values[0] == CycleRingElement.zero(2)


def test_genus_mismatch(e8g, i4g):
    a = ReducedClass.constant(e8g, 1)
    b = ReducedClass.constant(single_class_genus(standard_lattice("I8")), 1)
    with pytest.raises(GenusMismatch):
        a + b


def test_reduced_product_above_cutoff(e8g):
    assert ReducedClass.constant(e8g, 4) * ReducedClass.constant(e8g, 3) is None


def test_non_invariant_weight_flagged():
    i3 = standard_lattice("I3")
    g = single_class_genus(i3)
    phi = WeightFunction.coset(i3, [(1, 0, 0)], 3)
    z = special_cycle(g, GramTarget.scalar(Fraction(1, 2)), phi)
    assert not z.is_invariant()
    assert special_cycle(g, GramTarget.scalar(Fraction(1, 2)), triv(g, 1)).is_invariant()


def test_padded_inner_product_e8(e8g):
    t2, phi2 = padded_partner(T1, triv(e8g, 1), 5)
    assert t2.n == 5
    lhs = inner_product(reduced_special_cycle(e8g, T1, triv(e8g, 1)), reduced_special_cycle(e8g, t2, phi2))
    rhs = 2 * block_sum_coefficient(e8g, T1, t2, tensor(triv(e8g, 1), phi2))
    # the padded partner keeps rep = 240, so both sides are 2 * 240^2
    assert lhs == rhs == 115200


def test_padded_partner_with_coset_weight(e8g):
    phi = WeightFunction.coset(e8g.base, [(1, 0, 0, 0, 0, 0, 0, 0)], 2)
    t2, phi2 = padded_partner(T1, phi, 3)
    assert reduced_special_cycle(e8g, t2, phi2).rep == reduced_special_cycle(e8g, T1, phi).rep


def test_eisenstein_examples(e8g, genus16):
    assert eisenstein_coefficient(e8g, T1, triv(e8g, 1)).value == 240
    assert eisenstein_coefficient(genus16, GramTarget.zero(3), triv(genus16, 3)).value == 1
    t = GramTarget.scalar(2)
    a = eisenstein_coefficient(genus16, t, triv(genus16, 1)).value
    flat_t = reduced_special_cycle(genus16, t, triv(genus16, 1))
    assert a == deg_tot(flat_t * ReducedClass.constant(genus16, 13)) / 2


def test_eisenstein_seed_independent(genus16, genus16_from_d16):
    t = GramTarget.scalar(2)
    a = eisenstein_coefficient(genus16, t, triv(genus16, 1)).value
    b = eisenstein_coefficient(genus16_from_d16, t, triv(genus16_from_d16, 1)).value
    assert a == b == 61920


def test_sc_rank_examples(e8g):
    assert sc_radical_rank([]) == (0, [])
    rank, ker = sc_radical_rank([[0, 0], [0, 0]])
    assert rank == 0 and len(ker) == 2
    assert sc_radical_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0] == 3
    left = [(GramTarget.scalar(q), triv(e8g, 1)) for q in (1, 2, 1)]
    right = [padded_partner(t, p, 5) for t, p in left]
    mat = sc_pairing_matrix(e8g, left, right)
    rank, ker = sc_radical_rank(mat)
    assert rank == 1 and len(ker) == 2
    assert sc_pairing_matrix(e8g, []) == []


def test_genus_class_function_checks(e8g):
    with pytest.raises(ValueError):
        GenusClassFunction(e8g, ())
    with pytest.raises(ValueError):
        GenusClassFunction(e8g, (CycleRingElement.one(3),))


def test_zero_cycle_keeps_its_grade(e8g):
    phi = WeightFunction.coset(e8g.base, [(1,) + (0,) * 7, (0,) * 8], 2)
    z = special_cycle(e8g, GramTarget.zero(2), phi)
    assert all(not v.terms for v in z.values)
    assert flat(z) == ReducedClass.constant(e8g, 2, 0)
