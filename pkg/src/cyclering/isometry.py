"""Lattice isometry testing and automorphism group orders.

The search follows the usual Plesken-Souvignier pattern: pick a base of short
vectors spanning the lattice, then backtrack over images of the base vectors
among vectors of the same norm, pruning with the Gram matrix of the base.
Group orders come from orbit-stabilizer along the pointwise stabilizer chain
of the base, so the group is never listed.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import ResourceLimit
from .lattice import Lattice, Vector

DEFAULT_NODE_BUDGET = 5_000_000
MAX_POOL = 250_000


def node_budget_from_env(default: int = DEFAULT_NODE_BUDGET) -> int:
    raw = os.environ.get("CYCLERING_NODE_BUDGET")
    return int(raw) if raw else default


@dataclass(frozen=True)
class IsometryMap:
    """Integer matrix ``U`` with ``U^T G1 U = G2`` (columns act on coordinates)."""

    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def from_array(cls, a) -> "IsometryMap":
        return cls(tuple(tuple(int(x) for x in r) for r in np.asarray(a)))

    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    @property
    def det(self) -> int:
        return int(linalg.det(self.matrix))

    def check(self, source: Lattice, target: Lattice) -> bool:
        """``U^T G_source U == G_target`` exactly."""
        if source.denominator != target.denominator:
            return False
        u = np.array(self.matrix, dtype=object)
        lhs = u.T.dot(np.array(source.int_gram, dtype=object)).dot(u)
        return lhs.tolist() == [list(r) for r in target.int_gram]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class AutGroupInfo:
    order_O: int
    order_SO: int
    generators: tuple[IsometryMap, ...]
    orbit_lengths: tuple[int, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "order_O": self.order_O,
            "order_SO": self.order_SO,
            "generators": [g.to_json() for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AutGroupInfo":
        gens = tuple(IsometryMap(tuple(tuple(int(x) for x in r) for r in g)) for g in data.get("generators", []))
        return cls(int(data["order_O"]), int(data["order_SO"]), gens)


# -- base and vector pools ------------------------------------------------


class _Pools:
    """Vectors of each norm needed by a base, as arrays plus lookup tables."""

    def __init__(self, lattice: Lattice, norms: Iterable[Fraction]):
        self.lattice = lattice
        self.arrays: dict[Fraction, np.ndarray] = {}
        self.weighted: dict[Fraction, np.ndarray] = {}
        self.index: dict[Fraction, dict[bytes, int]] = {}
        for q in sorted(set(norms)):
            arr = lattice.norm_array(q)
            self.arrays[q] = arr
            self.weighted[q] = arr @ lattice.np_gram
            self.index[q] = {row.tobytes(): i for i, row in enumerate(arr)}


@lru_cache(maxsize=64)
def _choose_base(lattice: Lattice) -> tuple[tuple[Vector, ...], int]:
    """Short linearly independent vectors, ordered to keep neighbours paired.

    Returns ``(base, index)`` where ``index`` is the index of the sublattice the
    base spans; the search only needs an integrality check when it is > 1.
    """
    n = lattice.rank
    step = Fraction(1, 2 * lattice.denominator)
    q = lattice.minimum()
    base: list[Vector] = []
    ranker = linalg.ModPRank()
    while True:
        groups = lattice.vectors_up_to(q)
        pool = [v for k in sorted(groups) if k > 0 for v in groups[k]]
        for v in pool:
            if ranker.add(v):
                base.append(v)
                if len(base) == n:
                    break
        if len(base) == n:
            break
        q += step
    index = abs(linalg.det(base))
    # trade base vectors for pool vectors (possibly of the next norm) while the index drops
    for _ in range(2):
        while index > 1:
            swap = _index_reducing_swap(base, pool)
            if swap is None:
                break
            k, v, coeff = swap
            base[k] = v
            index = abs(index * coeff)
        if index == 1:
            break
        groups = lattice.vectors_up_to(max(lattice.vectors_up_to(q)) * 2)
        pool = [v for k in sorted(groups) if k > 0 for v in groups[k]]
        if len(pool) > MAX_POOL:
            break
    base = _connected_order(lattice, base)
    return tuple(base), int(index)


def _index_reducing_swap(base: list[Vector], pool: list[Vector]):
    """Find ``(k, v, c)``: replacing ``base[k]`` by ``v`` scales the index by ``|c| < 1``."""
    adj, den = linalg.int_adjugate(linalg.transpose(base))
    num = np.array(pool, dtype=np.int64) @ np.array(adj, dtype=np.int64).T  # coefficients times det
    frac = num % den != 0
    small = (np.abs(num) < abs(den)) & (num != 0) & frac.any(axis=1)[:, None]
    rows = np.flatnonzero(small.any(axis=1))
    if len(rows) == 0:
        return None
    t = int(rows[0])
    k = int(np.flatnonzero(small[t])[-1])
    return k, pool[t], Fraction(int(num[t, k]), den)


def _connected_order(lattice: Lattice, base: list[Vector]) -> list[Vector]:
    """Order by norm, then greedily so each vector pairs with an earlier one."""
    remaining = sorted(base, key=lambda v: (lattice.norm(v), v))
    out = [remaining.pop(0)]
    while remaining:
        pick = next(
            (v for v in remaining if lattice.norm(v) == lattice.norm(remaining[0])
             and any(lattice.scaled_pairing(v, w) for w in out)),
            remaining[0],
        )
        remaining.remove(pick)
        out.append(pick)
    return out


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = node_budget_from_env() if limit is None else limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise ResourceLimit(f"backtracking exceeded node budget {self.limit}")


class _Search:
    """Backtracking for maps sending ``source`` base vectors into ``target``."""

    def __init__(self, source: Lattice, target: Lattice, budget: _Budget):
        self.base, self.index = _choose_base(source)
        self.n = source.rank
        self.norms = [source.norm(b) for b in self.base]
        self.gram = [[source.scaled_pairing(a, b) for b in self.base] for a in self.base]
        self.pools = _Pools(target, self.norms)
        self.budget = budget
        adj, d = linalg.int_adjugate(linalg.transpose([list(b) for b in self.base]))
        self.base_adj = np.array(adj, dtype=object)
        self.base_det = d

    def candidates(self, k: int, images: Sequence[np.ndarray]) -> np.ndarray:
        q = self.norms[k]
        arr = self.pools.arrays[q]
        w = self.pools.weighted[q]
        mask = np.ones(len(arr), dtype=bool)
        for j, img in enumerate(images):
            mask &= w @ img == self.gram[j][k]
        return arr[mask]

    def to_matrix(self, images: Sequence[np.ndarray]) -> np.ndarray | None:
        """Matrix ``X`` with ``X b_k = images[k]``, or None if not integral."""
        ct = np.array(images, dtype=object).T
        x = ct.dot(self.base_adj)
        if any(v % self.base_det for v in x.flat):
            return None
        return (x // self.base_det).astype(np.int64)

    def extend(self, images: list[np.ndarray]) -> np.ndarray | None:
        """Depth-first completion of a partial image list; first hit wins."""
        self.budget.tick()
        k = len(images)
        if k == self.n:
            return self.to_matrix(images)
        for c in self.candidates(k, images):
            images.append(c)
            found = self.extend(images)
            images.pop()
            if found is not None:
                return found
        return None


# -- invariants -----------------------------------------------------------


def _min_vector_components(lattice: Lattice) -> tuple[int, ...]:
    """Sorted component sizes of the graph on minimal vectors, edges = nonzero pairing."""
    arr = lattice.norm_array(lattice.minimum())
    pair = arr @ lattice.np_gram @ arr.T
    adj = pair != 0
    seen = np.zeros(len(arr), dtype=bool)
    sizes = []
    for s in range(len(arr)):
        if seen[s]:
            continue
        frontier = np.zeros(len(arr), dtype=bool)
        frontier[s] = True
        comp = frontier.copy()
        while frontier.any():
            nxt = adj[frontier].any(axis=0) & ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        sizes.append(int(comp.sum()))
    return tuple(sorted(sizes))


@lru_cache(maxsize=256)
def _cheap_invariants(lattice: Lattice) -> tuple:
    q = lattice.minimum()
    arr = lattice.norm_array(q)
    pair = arr @ lattice.np_gram @ arr.T
    vals = np.unique(pair)
    hist = np.stack([(pair == v).sum(axis=1) for v in vals], axis=1)
    profile = {tuple(zip(vals.tolist(), row)) for row in hist.tolist()}
    return (lattice.rank, lattice.det, lattice.denominator, q, len(arr),
            _min_vector_components(lattice), tuple(sorted(profile)))


@lru_cache(maxsize=64)
def quick_invariants(lattice: Lattice) -> tuple:
    """Cheap isometry invariants compared before any backtracking."""
    base, _ = _choose_base(lattice)
    top = max(lattice.norm(b) for b in base)
    counts = tuple((k, len(v)) for k, v in lattice.vectors_up_to(top).items())
    return _cheap_invariants(lattice) + (counts,)


# -- public operations ----------------------------------------------------


def is_isometric(l1: Lattice, l2: Lattice, node_budget: int | None = None) -> IsometryMap | None:
    """Witness ``U`` with ``U^T G1 U = G2``, or None when no isometry exists."""
    if l1.rank != l2.rank or l1.det != l2.det or l1.denominator != l2.denominator:
        return None
    if l1 == l2:
        return IsometryMap.from_array(np.eye(l1.rank, dtype=np.int64))
    if _cheap_invariants(l1) != _cheap_invariants(l2) or quick_invariants(l1) != quick_invariants(l2):
        return None
    search = _Search(l2, l1, _Budget(node_budget))
    x = search.extend([])
    if x is None:
        return None
    u = IsometryMap.from_array(x)
    assert u.check(l1, l2)
    return u


def _permutation(mat: np.ndarray, arr: np.ndarray, index: dict[bytes, int]) -> np.ndarray:
    images = arr @ mat.T
    return np.array([index[row.tobytes()] for row in images], dtype=np.int64)


def _orbit(start: int, perms: Sequence[np.ndarray]) -> set[int]:
    orbit = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for i in frontier:
            for p in perms:
                j = int(p[i])
                if j not in orbit:
                    orbit.add(j)
                    nxt.append(j)
        frontier = nxt
    return orbit


@lru_cache(maxsize=64)
def _automorphisms(lattice: Lattice, node_budget: int | None) -> AutGroupInfo:
    budget = _Budget(node_budget)
    search = _Search(lattice, lattice, budget)
    n = search.n
    base = [np.array(b, dtype=np.int64) for b in search.base]
    gens: list[tuple[int, np.ndarray]] = []
    orbit_lengths = [0] * n
    for i in range(n - 1, -1, -1):
        cand = search.candidates(i, base[:i])
        index = {row.tobytes(): t for t, row in enumerate(cand)}
        # every generator found at deeper levels fixes base[:i], so permutes cand
        perms = [_permutation(g, cand, index) for lvl, g in gens if lvl >= i]
        start = index[base[i].tobytes()]
        orbit = _orbit(start, perms)
        excluded: set[int] = set()
        for t in range(len(cand)):
            if t in orbit or t in excluded:
                continue
            found = search.extend(base[:i] + [cand[t]])
            if found is None:
                excluded |= _orbit(t, perms)
            else:
                gens.append((i, found))
                perms.append(_permutation(found, cand, index))
                orbit = _orbit(start, perms)
        orbit_lengths[i] = len(orbit)
    order = 1
    for k in orbit_lengths:
        order *= k
    maps = tuple(IsometryMap.from_array(g) for _, g in gens)
    has_odd = any(m.det < 0 for m in maps)
    return AutGroupInfo(order, order // 2 if has_odd else order, maps, tuple(orbit_lengths))


def automorphism_info(lattice: Lattice, node_budget: int | None = None) -> AutGroupInfo:
    """Exact ``|O(L)|``, ``|SO(L)|`` and a generating set of ``O(L)``."""
    return _automorphisms(lattice, node_budget)


def group_closure(gens: Sequence[IsometryMap], limit: int = 100_000) -> set[tuple[tuple[int, ...], ...]]:
    """All elements of the finite group generated by ``gens`` (naive BFS)."""
    if not gens:
        return set()
    n = len(gens[0].matrix)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    mats = [g.array() for g in gens]
    seen = {ident}
    frontier = [np.eye(n, dtype=np.int64)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in mats:
                b = a @ g
                key = tuple(map(tuple, b.tolist()))
                if key not in seen:
                    seen.add(key)
                    if len(seen) > limit:
                        raise ResourceLimit(f"group closure exceeds {limit} elements")
                    nxt.append(b)
        frontier = nxt
    return seen
