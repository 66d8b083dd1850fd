"""Truncated q-expansions of genus theta series, Gram-target canonical forms and
the named verification suites behind the CLI ``verify`` command.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable

import numpy as np

from . import linalg
from .cycle_ring import (CycleRingElement, SubspaceSymbol, pair, random_element, random_subspace,
                         reduce_to_truncated, TruncatedPoly)
from .errors import UnknownSuite, UnsupportedWeightTransport
from .genus import GenusData, enumerate_genus, greedy_reduce, single_class_genus
from .lattice import GramTarget, Lattice, block_completions, rep_number, standard_lattice
from .special_cycles import (block_sum_coefficient, eisenstein_coefficient, genus_average, inner_product,
                             padded_partner, reduced_special_cycle, sc_pairing_matrix, sc_radical_rank,
                             special_cycle)
from .weights import WeightFunction, tensor

# -- canonical forms of Gram targets ----------------------------------------------

ScaledKey = tuple[tuple[int, ...], ...]


def _scaled(t: GramTarget) -> tuple[list[list[int]], int]:
    """``(S, d)`` with ``S = d * 2T`` integral and ``d`` minimal."""
    two_t = [[2 * x for x in r] for r in t.matrix.entries]
    d = 1
    for r in two_t:
        for x in r:
            d = lcm(d, x.denominator)
    return [[int(x * d) for x in r] for r in two_t], d


def _kernel_split(s: list[list[int]]) -> tuple[list[list[int]], int]:
    """Gram of ``Z^n / ker`` (positive definite) and the kernel dimension."""
    n = len(s)
    _, kern = linalg.rank_and_kernel(s)
    if not kern:
        return s, 0
    k = linalg.saturate(kern, n)
    # unimodular U with U k^T in Hermite form; the first len(k) columns of U^-1 span ker
    _, u = linalg.hnf_with_transform(linalg.transpose(k))
    uinv = [[int(x) for x in r] for r in linalg.inverse(u)]
    comp = [[uinv[i][j] for i in range(n)] for j in range(len(k), n)]  # complement basis (rows)
    g = [[sum(a[i] * s[i][j] * b[j] for i in range(n) for j in range(n)) for b in comp] for a in comp]
    return g, len(k)


def _lexmin_form(s: list[list[int]]) -> list[list[int]]:
    """Smallest ``(diagonal, upper entries)`` key over all bases made of short vectors.

    Every class of positive definite forms in dimension <= 3 has a basis
    realising its successive minima, so the minimum only involves vectors of
    norm <= the largest diagonal entry of any basis; the greedy reduced basis
    supplies that bound.
    """
    n = len(s)
    if n == 0:
        return []
    lat = Lattice.from_gram(s)
    red, _ = greedy_reduce(lat)
    bound = max(red.int_gram[i][i] for i in range(n))
    groups = lat.vectors_up_to(Fraction(bound, 2))
    cands = [v for q in sorted(groups) if q > 0 for v in groups[q]]
    arr = np.array(cands, dtype=np.int64)
    g = np.array(s, dtype=np.int64)
    norms = np.einsum("ij,jk,ik->i", arr, g, arr)
    best = None
    best_basis = None

    def key_of(basis):
        m = [[lat.scaled_pairing(a, b) for b in basis] for a in basis]
        return (tuple(m[i][i] for i in range(n)), tuple(m[i][j] for i in range(n) for j in range(i + 1, n))), m

    # diagonal must be the successive minima; walk candidates in norm order
    order = np.argsort(norms, kind="stable")

    def extend(basis, diag):
        nonlocal best, best_basis
        k = len(basis)
        if best is not None and diag > best[0][:k]:
            return
        if k == n:
            if abs(linalg.det(basis)) == 1:
                key, m = key_of(basis)
                if best is None or key < best:
                    best, best_basis = key, m
            return
        for idx in order:
            if best is not None and diag == best[0][:k] and norms[idx] > best[0][k]:
                break
            v = list(cands[idx])
            if linalg.rank_int(basis + [v]) <= k:
                continue
            extend(basis + [v], diag + (int(norms[idx]),))

    extend([], ())
    return best_basis


def canonical_target(t: GramTarget) -> tuple[GramTarget, bool]:
    """Representative of ``T`` up to ``T -> g^T T g`` with ``g`` in GL_n(Z).

    Returns ``(T', certified)``.  For ``n <= 3`` the representative is exact;
    larger ``n`` gets a greedily reduced form that is not guaranteed unique.
    """
    s, d = _scaled(t)
    pd, k = _kernel_split(s)
    if len(pd) <= 3:
        form, certified = _lexmin_form(pd), True
    else:
        red, _ = greedy_reduce(Lattice.from_gram(pd))
        form, certified = [list(r) for r in red.int_gram], False
    n = t.n
    full = [[0] * n for _ in range(n)]
    for i, r in enumerate(form):
        full[i][: len(r)] = r
    return GramTarget.from_rows([[Fraction(x, 2 * d) for x in r] for r in full]), certified


def target_key(t: GramTarget) -> tuple:
    return (t.trace(), tuple(tuple(r) for r in t.matrix.entries))


# -- theta tables --------------------------------------------------------------


def _tuple_counts(lattice: Lattice, n: int, bound: Fraction, phi: WeightFunction | None) -> dict[ScaledKey, Fraction]:
    """Weighted counts of n-tuples keyed by scaled Gram ``x_i^T (D G) x_j``, trace(2T) <= bound."""
    d = lattice.denominator
    budget = int(bound * d)  # trace of the scaled Gram, an integer
    groups = lattice.vectors_up_to(bound / 2)
    vecs = [v for q in sorted(groups) for v in groups[q]]
    arr = np.array(vecs, dtype=np.int64)
    g = lattice.np_gram
    w = arr @ g
    norms = np.einsum("ij,ij->i", w, arr)
    weighted = phi is not None and not phi.trivial_flag
    counts: dict[ScaledKey, Fraction] = {}

    def last(prefix: list[int], used: int):
        mask = norms <= budget - used
        cols = [norms[mask]] + [w[mask] @ arr[i] for i in prefix]
        table = np.stack(cols, axis=1)
        if weighted:
            rows = np.flatnonzero(mask)
            for r, row in zip(rows, table.tolist()):
                val = phi.evaluate([vecs[i] for i in prefix] + [vecs[r]])
                if val:
                    key = _key(prefix, row)
                    counts[key] = counts.get(key, Fraction(0)) + val
            return
        uniq, cnt = np.unique(table, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), cnt.tolist()):
            key = _key(prefix, row)
            counts[key] = counts.get(key, Fraction(0)) + c

    pair_cache: dict[tuple[int, int], int] = {}

    def _key(prefix, row):
        k = len(prefix) + 1
        m = [[0] * k for _ in range(k)]
        for a in range(k - 1):
            for b in range(a, k - 1):
                m[a][b] = m[b][a] = pair_cache[(prefix[a], prefix[b])]
        m[k - 1][k - 1] = row[0]
        for a in range(k - 1):
            m[a][k - 1] = m[k - 1][a] = row[1 + a]
        return tuple(tuple(r) for r in m)

    def walk(prefix: list[int], used: int):
        if len(prefix) == n - 1:
            last(prefix, used)
            return
        for i in np.flatnonzero(norms <= budget - used).tolist():
            for j in prefix + [i]:
                pair_cache[(i, j)] = pair_cache[(j, i)] = int(w[i] @ arr[j])
            walk(prefix + [i], used + int(norms[i]))

    walk([], 0)
    return counts


@dataclass(frozen=True)
class TableEntry:
    t: GramTarget
    reps: tuple[Fraction, ...]
    a_value: Fraction

    def to_json(self) -> dict:
        return {
            "T": self.t.to_json(),
            "rep": [linalg.fraction_str(r) for r in self.reps],
            "A": linalg.fraction_str(self.a_value),
        }


@dataclass(frozen=True)
class CoefficientTable:
    n: int
    bound: Fraction
    entries: tuple[TableEntry, ...]
    certified: bool = True
    weight: dict | None = field(default=None, compare=False)

    def lookup(self, t: GramTarget) -> TableEntry | None:
        key = target_key(canonical_target(t)[0]) if self.weight is None else target_key(t)
        return next((e for e in self.entries if target_key(e.t) == key), None)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "bound": linalg.fraction_str(self.bound),
            "canonical_forms": "certified" if self.certified else "reduced, not certified unique",
            "entries": [e.to_json() for e in self.entries],
        }
        if self.weight is not None:
            out["weight"] = self.weight
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def theta_expansion(genus: GenusData, n: int, bound, phi: WeightFunction | None = None) -> CoefficientTable:
    """Coefficients of the degree-n theta series of every class up to ``trace(2T) <= bound``.

    With the trivial weight entries are keyed by canonical ``GL_n(Z)`` forms;
    a nontrivial weight is not invariant under that action, so its table keeps
    each exact ``T``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = linalg.to_fraction(bound)
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if phi is not None and phi.n != n:
        raise ValueError("weight size does not match n")
    trivial = phi is None or phi.trivial_flag
    per_class = []
    for lattice in genus.lattices:
        if not trivial and lattice != phi.base:
            raise UnsupportedWeightTransport("nontrivial weights are only defined on their base class")
        per_class.append((lattice, _tuple_counts(lattice, n, bound, None if trivial else phi)))
    exact: dict[tuple, GramTarget] = {}
    for lattice, counts in per_class:
        scale = 2 * lattice.denominator
        for key, c in counts.items():
            if c:
                t = GramTarget.from_rows([[Fraction(x, scale) for x in r] for r in key])
                exact[target_key(t)] = t
    certified = True
    chosen: dict[tuple, GramTarget] = {}
    for t in exact.values():
        if trivial:
            t, ok = canonical_target(t)
            certified &= ok
        chosen[target_key(t)] = t
    entries = []
    for key in sorted(chosen):
        t = chosen[key]
        reps = []
        for lattice, counts in per_class:
            scale = 2 * lattice.denominator
            skey = tuple(tuple(int(x * scale) for x in r) for r in t.matrix.entries)
            reps.append(Fraction(counts.get(skey, 0)))
        entries.append(TableEntry(t, tuple(reps), genus_average(genus, reps)))
    return CoefficientTable(n, bound, tuple(entries), certified, None if trivial else phi.to_json())


# -- verification suites -----------------------------------------------------------


@dataclass
class Report:
    suite: str
    checks: list[dict] = field(default_factory=list)

    def check(self, name: str, ok: bool, **witness):
        entry = {"name": name, "passed": bool(ok)}
        if not ok:
            entry["witness"] = {k: _jsonable(v) for k, v in witness.items()}
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": self.checks}


def _jsonable(v):
    if isinstance(v, Fraction):
        return linalg.fraction_str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return v


def _suite_product_formula(rep: Report, options: dict):
    e8 = standard_lattice("E8")
    genus = single_class_genus(e8)
    t1 = GramTarget.scalar(1)
    blocks = list(block_completions(e8, t1, t1))
    lhs = rep_number(e8, t1) ** 2
    rhs = sum(rep_number(e8, t) for t in blocks)
    rep.check("rep(T1) rep(T2) = sum_B rep(block)", lhs == rhs, lhs=lhs, rhs=rhs)
    z = special_cycle(genus, t1, WeightFunction.trivial(e8, 1))
    total = None
    for t in blocks:
        s = special_cycle(genus, t, WeightFunction.trivial(e8, 2))
        total = s if total is None else total + s
    rep.check("sharp product equals the block sum termwise", (z * z) == total)


def _suite_truncation_hom(rep: Report, options: dict):
    rng = random.Random(options.get("seed", 0))
    cases = int(options.get("cases", 1000))
    bad_hom = bad_pair = bad_mono = 0
    witness = None
    for _ in range(cases):
        m = rng.randint(1, 8)
        r = rng.randint(1, 6)
        z1, z2, w = (random_element(rng, m, r) for _ in range(3))
        lhs = reduce_to_truncated(z1 * z2)
        rhs = reduce_to_truncated(z1) * reduce_to_truncated(z2)
        if lhs != rhs:
            bad_hom += 1
            witness = witness or {"z1": z1.to_json(), "z2": z2.to_json()}
        # an element with the same image: move every coefficient onto [0]_n
        shadow = CycleRingElement(m, {SubspaceSymbol(n, ()): a for n, a in enumerate(reduce_to_truncated(z1).coeffs)})
        if pair(z1, w) != pair(shadow, w):
            bad_pair += 1
        n = rng.randint(0, m)
        s = SubspaceSymbol(n, random_subspace(rng, r, min(n, r)))
        if reduce_to_truncated(CycleRingElement(m, {s: Fraction(1)})) != TruncatedPoly.monomial(m, n):
            bad_mono += 1
    rep.check(f"reduce is multiplicative on {cases} random pairs", bad_hom == 0, failures=bad_hom, example=witness)
    rep.check("pair(z, w) depends only on reduce(z)", bad_pair == 0, failures=bad_pair)
    rep.check("[U]_n maps to c^n", bad_mono == 0, failures=bad_mono)


def _ip_consistency(rep: Report, genus: GenusData, label: str):
    base = genus.base
    t1 = GramTarget.scalar(1)
    triv = WeightFunction.trivial(base, 1)
    z1 = reduced_special_cycle(genus, t1, triv)
    t2, phi2 = padded_partner(t1, triv, genus.cutoff - 1)
    z2 = reduced_special_cycle(genus, t2, phi2)
    lhs = inner_product(z1, z2)
    rhs = 2 * block_sum_coefficient(genus, t1, t2, tensor(triv, phi2))
    rep.check(f"{label}: <z(T1), z(T2 ⊕ 0)> = 2 sum_B A(block)", lhs == rhs, lhs=lhs, rhs=rhs)


def _suite_siegel_e8(rep: Report, options: dict):
    e8 = standard_lattice("E8")
    genus = enumerate_genus(e8, 3)
    rep.check("E8 genus has one class", len(genus.classes) == 1, classes=len(genus.classes))
    table = theta_expansion(genus, 1, 6)
    got = [e.reps[0] for e in table.entries]
    rep.check("theta coefficients 1, 240, 2160, 6720", got == [1, 240, 2160, 6720], got=got)
    for q, want in [(1, 240), (2, 2160), (3, 6720)]:
        a = eisenstein_coefficient(genus, GramTarget.scalar(q), WeightFunction.trivial(e8, 1)).value
        rep.check(f"A({q}) equals the class count", a == want, A=a)
    _ip_consistency(rep, genus, "E8")


def _suite_genus16(rep: Report, options: dict):
    genus = enumerate_genus(standard_lattice("E8E8"), 3)
    rep.check("two classes", len(genus.classes) == 2, classes=len(genus.classes))
    expected = sum((Fraction(1, a.order_SO) for _, a in genus.classes), Fraction(0))
    rep.check("mass is the sum of 1/|SO|", genus.mass == expected, mass=genus.mass)
    dets = {c.det for c in genus.lattices}
    rep.check("equal determinants", len(dets) == 1, dets=sorted(dets))
    table = theta_expansion(genus, 1, 4)
    for e in table.entries:
        rep.check(f"theta agreement at T={e.t.to_json()}", len(set(e.reps)) == 1, reps=e.reps)
    _ip_consistency(rep, genus, "rank 16")


def _suite_radical(rep: Report, options: dict):
    e8 = standard_lattice("E8")
    genus = single_class_genus(e8)
    m = genus.cutoff
    for n in range(1, m // 2 + 1):
        left = [(GramTarget.from_rows(np.diag([q] * n).tolist()), WeightFunction.trivial(e8, n)) for q in (1, 2)]
        right = [padded_partner(t, phi, m - n) for t, phi in left]
        mat = sc_pairing_matrix(genus, left, right)
        rank, _ = sc_radical_rank(mat)
        rep.check(f"E8 pairing block rank at grade {n} is 1", rank == 1, rank=rank, matrix=mat)
        rep.check(f"positive diagonal at grade {n}", all(mat[i][i] > 0 for i in range(len(mat))), matrix=mat)


SUITES: dict[str, Callable[[Report, dict], None]] = {
    "product-formula": _suite_product_formula,
    "truncation-hom": _suite_truncation_hom,
    "siegel-e8": _suite_siegel_e8,
    "genus16": _suite_genus16,
    "radical": _suite_radical,
}


def verify_suite(name: str, **options) -> Report:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    rep = Report(name)
    SUITES[name](rep, options)
    return rep
