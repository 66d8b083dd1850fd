"""Genus enumeration by Kneser p-neighbours.

Classes are deduplicated by exact isometry testing; the mass is the exact sum
of ``1 / |SO(L_j)|``.  Closure of the p-neighbour graph is taken as the genus,
which is correct when the genus and spinor genus agree at ``p`` (true for the
bundled lattices).  When a class has too many isotropic lines to visit them
all, a seeded random sample of lines is used and the metadata says so.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import linalg
from .errors import BadPrime, ResourceLimit
from .isometry import AutGroupInfo, automorphism_info, is_isometric
from .lattice import Lattice, RationalMatrix, cholesky_rational

SPINOR_CAVEAT = (
    "class list is the closure of the p-neighbour graph; it equals the genus "
    "when genus and spinor genus coincide at p"
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _unit_part(x: Fraction, p: int) -> tuple[int, int]:
    """``x = p^a * u`` up to squares, with ``u`` an integer prime to ``p``."""
    a = valuation(x, p)
    u = x / Fraction(p) ** a
    return a, u.numerator * u.denominator


def hilbert_symbol(a, b, p: int) -> int:
    """Hilbert symbol ``(a, b)_p`` of nonzero rationals at a prime ``p``."""
    alpha, u = _unit_part(Fraction(a), p)
    beta, v = _unit_part(Fraction(b), p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    leg = lambda t: 1 if pow(t % p, (p - 1) // 2, p) == 1 else -1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * leg(u) ** (beta % 2) * leg(v) ** (alpha % 2)


def local_invariants(lattice: Lattice, p: int) -> tuple[int, int]:
    """``(v_p(det), Hasse symbol)`` from a rational diagonalization of the Gram matrix."""
    _, d = cholesky_rational(lattice.gram)
    hasse = 1
    for i, j in itertools.combinations(range(len(d)), 2):
        hasse *= hilbert_symbol(d[i], d[j], p)
    return valuation(lattice.det, p), hasse


def greedy_reduce(lattice: Lattice) -> tuple[Lattice, list[list[int]]]:
    """Pairwise size reduction until no basis vector can be shortened by another.

    Returns the reduced lattice and the integer change of basis ``U`` (new
    basis vectors are the columns of ``U``).
    """
    n = lattice.rank
    g = [list(r) for r in lattice.int_gram]
    u = linalg.identity(n)  # rows = new basis vectors in old coordinates
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or 2 * abs(g[i][j]) <= g[j][j]:
                    continue
                r = round(g[i][j] / g[j][j])
                # b_i <- b_i - r b_j
                gii = g[i][i] - 2 * r * g[i][j] + r * r * g[j][j]
                for k in range(n):
                    if k != i:
                        g[i][k] -= r * g[j][k]
                        g[k][i] = g[i][k]
                g[i][i] = gii
                u[i] = [a - r * b for a, b in zip(u[i], u[j])]
                changed = True
    order = sorted(range(n), key=lambda i: (g[i][i], u[i]))
    g = [[g[i][j] for j in order] for i in order]
    u = [u[i] for i in order]
    den = lattice.denominator
    reduced = Lattice(RationalMatrix.from_rows([[Fraction(x, den) for x in r] for r in g]), lattice.name)
    return reduced, linalg.transpose(u)


def _check_prime(lattice: Lattice, p: int):
    if not is_prime(p) or p == 2:
        raise BadPrime(f"{p} is not an odd prime")
    if lattice.denominator % p == 0 or valuation(lattice.det, p) != 0:
        raise BadPrime(f"{p} divides the discriminant")
    if lattice.rank < 2:
        raise BadPrime("rank-1 lattices have no isotropic lines mod p")


def _is_isotropic(g, v, p) -> bool:
    n = len(v)
    return sum(v[i] * g[i][j] * v[j] for i in range(n) for j in range(n)) % p == 0


def isotropic_lines(lattice: Lattice, p: int) -> Iterator[tuple[int, ...]]:
    """Normalized isotropic vectors mod p (first nonzero entry 1), lexicographic."""
    g = lattice.int_gram
    n = lattice.rank
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            v = (0,) * lead + (1,) + tail
            if _is_isotropic(g, v, p):
                yield v


def random_isotropic_lines(lattice: Lattice, p: int, count: int, rng: random.Random) -> list[tuple[int, ...]]:
    g = lattice.int_gram
    n = lattice.rank
    seen: dict[tuple[int, ...], None] = {}
    tries = 0
    while len(seen) < count:
        tries += 1
        if tries > 200 * count + 1000:
            break
        v = [rng.randrange(p) for _ in range(n)]
        lead = next((x for x in v if x), 0)
        if not lead:
            continue
        inv = pow(lead, -1, p)
        v = tuple(x * inv % p for x in v)
        if _is_isotropic(g, v, p):
            seen.setdefault(v)
    return list(seen)


def neighbor(lattice: Lattice, v, p: int) -> Lattice:
    """The p-neighbour ``L_v + Z v/p`` along the isotropic line of ``v`` (integral Gram)."""
    g = lattice.int_gram
    n = lattice.rank
    v = list(v)
    gv = [sum(g[i][j] * v[j] for j in range(n)) for i in range(n)]
    k = next(i for i in range(n) if gv[i] % p)
    norm = sum(v[i] * gv[i] for i in range(n))
    # lift so that (v, v) = 0 mod p^2
    t = (-(norm // p) * pow(2 * gv[k], -1, p)) % p
    v[k] += p * t
    gv = [sum(g[i][j] * v[j] for j in range(n)) for i in range(n)]
    assert sum(v[i] * gv[i] for i in range(n)) % (p * p) == 0
    a = [x % p for x in gv]
    ak_inv = pow(a[k], -1, p)
    gens = []
    for i in range(n):
        e = [0] * n
        if i == k:
            e[k] = p
        else:
            e[i] = 1
            e[k] = -(a[i] * ak_inv) % p
        gens.append([p * x for x in e])  # L_v, scaled by p
    gens.append(v)
    basis = linalg.hnf(gens)
    assert len(basis) == n
    b = np.array(basis, dtype=object)
    big = b.dot(np.array(g, dtype=object)).dot(b.T)
    assert all(x % (p * p) == 0 for x in big.flat)
    return Lattice.from_gram((big // (p * p)).tolist())


def p_neighbors(lattice: Lattice, p: int, limit: int | None = None, seed=0,
                max_lines: int = 20_000) -> list[Lattice]:
    """p-neighbours of an integral lattice, each greedily reduced.

    With ``limit=None`` every isotropic line is used (ResourceLimit if the
    projective space has more than ``max_lines`` points); otherwise ``limit``
    lines are drawn with a seeded RNG.
    """
    _check_prime(lattice, p)
    if not lattice.is_integral():
        raise BadPrime("p-neighbours need an integral Gram; rescale first")
    if limit is None:
        total = (p ** lattice.rank - 1) // (p - 1)
        if total > max_lines:
            raise ResourceLimit(f"{total} lines mod {p}; pass limit= to sample")
        lines = list(isotropic_lines(lattice, p))
    else:
        lines = random_isotropic_lines(lattice, p, limit, random.Random(seed))
    return [greedy_reduce(neighbor(lattice, v, p))[0] for v in lines]


@dataclass(frozen=True)
class GenusLimits:
    max_classes: int = 64
    exhaustive_lines: int = 4000
    sample_per_class: int = 24
    seed: int = 0
    node_budget: int | None = None


@dataclass(frozen=True, eq=False)
class GenusData:
    base: Lattice
    classes: tuple[tuple[Lattice, AutGroupInfo], ...]
    neighbor_prime: int
    mass: Fraction
    metadata: dict = field(default_factory=dict)

    @property
    def lattices(self) -> list[Lattice]:
        return [c for c, _ in self.classes]

    @property
    def weights(self) -> list[Fraction]:
        """``w_j = 1 / |SO(L_j)|``."""
        return [Fraction(1, a.order_SO) for _, a in self.classes]

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def cutoff(self) -> int:
        return self.base.rank - 2

    def __len__(self):
        return len(self.classes)

    def same_as(self, other: "GenusData") -> bool:
        return self is other or (
            [c.gram for c in self.lattices] == [c.gram for c in other.lattices]
        )

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "neighbor_prime": self.neighbor_prime,
            "mass": linalg.fraction_str(self.mass),
            "classes": [
                {"rank": c.rank, "gram": c.gram.to_json(), **a.to_json()} for c, a in self.classes
            ],
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenusData":
        classes = tuple(
            (Lattice.from_gram(c["gram"]), AutGroupInfo.from_json(c)) for c in data["classes"]
        )
        mass = sum((Fraction(1, a.order_SO) for _, a in classes), Fraction(0))
        if "mass" in data and linalg.to_fraction(data["mass"]) != mass:
            raise ValueError("stored mass disagrees with the class automorphism orders")
        base = Lattice.from_json(data["base"]) if "base" in data else classes[0][0]
        return cls(base, classes, int(data.get("neighbor_prime", 0)), mass, dict(data.get("metadata", {})))


def single_class_genus(lattice: Lattice, metadata: dict | None = None) -> GenusData:
    """Genus data for a lattice known to be alone in its genus (no neighbour walk)."""
    aut = automorphism_info(lattice)
    return GenusData(lattice, ((lattice, aut),), 0, Fraction(1, aut.order_SO), metadata or {"closure": "assumed"})


def enumerate_genus(lattice: Lattice, p: int = 3, limits: GenusLimits = GenusLimits()) -> GenusData:
    """Close the p-neighbour graph of ``lattice`` up to isometry."""
    _check_prime(lattice, p)
    scale = lattice.denominator
    work = lattice if scale == 1 else lattice.scaled(scale)
    found = [work]
    exhaustive = True
    for i in itertools.count():
        if i >= len(found):
            break
        current = found[i]
        total = (p ** current.rank - 1) // (p - 1)
        if total <= limits.exhaustive_lines:
            nbrs = p_neighbors(current, p, max_lines=limits.exhaustive_lines)
        else:
            exhaustive = False
            nbrs = p_neighbors(current, p, limit=limits.sample_per_class, seed=f"{limits.seed}:{i}")
        for nb in nbrs:
            if any(is_isometric(nb, c, limits.node_budget) is not None for c in found):
                continue
            found.append(nb)
            if len(found) > limits.max_classes:
                raise ResourceLimit(f"more than {limits.max_classes} classes")
    if scale != 1:
        found = [lattice] + [c.scaled(Fraction(1, scale)) for c in found[1:]]
    classes = tuple((c, automorphism_info(c, limits.node_budget)) for c in found)
    mass = sum((Fraction(1, a.order_SO) for _, a in classes), Fraction(0))
    meta = {
        "closure": "exhaustive" if exhaustive else "sampled",
        "lines_per_class": None if exhaustive else limits.sample_per_class,
        "seed": limits.seed,
        "scale": scale,
        "caveat": SPINOR_CAVEAT,
    }
    return GenusData(lattice, classes, p, mass, meta)
