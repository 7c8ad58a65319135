"""Growth algebra of the tile-completion inflation rule.

After a short transient every layer grown by tile completion consists of two
kinds of cells: single tiles that differ only in how many dangling (perimeter)
edges they carry. Counting cells of each kind per layer gives a vector that is
mapped to the next layer's vector by a 2x2 integer matrix of determinant one.
Its Perron eigenvalue is the growth rate and its Perron eigenvector the growth
vector, which together fix the asymptotic ratio of bulk tiles to boundary
edges (the code rate).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import SchlafliPair, as_pair


class Basis(str, enum.Enum):
    """Cell-type ordering of a growth matrix.

    Each value names the family; the edge vector lists the dangling-edge
    counts of the two cell types in matrix order.
    """

    GENERIC = "generic"  # p > 3 and q > 3
    TRIANGLE = "triangle"  # p == 3
    DUAL_TRIANGLE = "dual-triangle"  # q == 3


def family_of(pq) -> Basis:
    pq = as_pair(pq).require_hyperbolic()
    if pq.p > 3 and pq.q > 3:
        return Basis.GENERIC
    if pq.p == 3 and pq.q > 6:
        return Basis.TRIANGLE
    if pq.q == 3 and pq.p > 6:
        return Basis.DUAL_TRIANGLE
    raise AssertionError(f"hyperbolic pair {pq} matched no growth-matrix family")


@dataclass(frozen=True)
class GrowthMatrix:
    entries: tuple[tuple[int, int], tuple[int, int]]
    basis: Basis

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.entries
        return a * d - b * c

    @property
    def trace(self) -> int:
        return self.entries[0][0] + self.entries[1][1]

    def apply(self, vector):
        (a, b), (c, d) = self.entries
        x, y = vector
        return (a * x + b * y, c * x + d * y)

    def __matmul__(self, vector):
        return self.apply(vector)


def growth_matrix(pq) -> GrowthMatrix:
    pq = as_pair(pq)
    family = family_of(pq)
    p, q = pq.p, pq.q
    if family is Basis.GENERIC:
        entries = ((p - 3, (p - 3) * (q - 3) - 1), (p - 2, (p - 2) * (q - 3) - 1))
    elif family is Basis.TRIANGLE:
        entries = ((0, 1), (-1, q - 4))
    else:
        entries = ((1, p - 6), (1, p - 5))
    return GrowthMatrix(entries, family)


def tile_vector(pq) -> tuple[int, int]:
    return (1, 1)


def edge_vector(pq) -> tuple[int, int]:
    """Dangling edges per cell for the two cell types, in matrix order."""
    pq = as_pair(pq)
    family = family_of(pq)
    if family is Basis.GENERIC:
        return (pq.p - 3, pq.p - 2)
    if family is Basis.TRIANGLE:
        return (0, 1)
    return (pq.p - 4, pq.p - 3)


def gamma(pq) -> Fraction:
    """Half the trace of the growth matrix, exact."""
    pq = as_pair(pq).require_hyperbolic()
    return Fraction((pq.p - 2) * (pq.q - 2) - 2, 2)


def growth_rate(pq) -> float:
    g = gamma(pq)
    if g <= 1:
        raise ArithmeticError(f"gamma={g} <= 1 for {pq}")
    # gamma^2 - 1 = (n^2 - 4)/4 with n = 2 gamma, formed in integers
    n = 2 * g
    return float(g) + math.sqrt(int(n * n - 4)) / 2.0


def growth_rate_is_irrational(pq) -> bool:
    # n^2 - 4 is a perfect square only for n = 2, i.e. the Euclidean boundary
    n = int(2 * gamma(pq))
    disc = n * n - 4
    return math.isqrt(disc) ** 2 != disc


def growth_vector(pq) -> tuple[float, float]:
    pq = as_pair(pq)
    family = family_of(pq)
    lam = growth_rate(pq)
    p, q = pq.p, pq.q
    if family is Basis.DUAL_TRIANGLE:
        return (float(p - 6), lam - 1.0)
    if family is Basis.TRIANGLE:
        return (1.0, lam)
    return (float((p - 3) * (q - 3) - 1), lam - (p - 3))


@dataclass(frozen=True)
class GrowthSystem:
    pq: SchlafliPair
    matrix: GrowthMatrix
    tile_vector: tuple[int, int]
    edge_vector: tuple[int, int]
    growth_rate: float
    growth_vector: tuple[float, float]

    @property
    def gamma(self) -> Fraction:
        return gamma(self.pq)

    @property
    def code_rate(self) -> float:
        lam = self.growth_rate
        u, t, e = self.growth_vector, self.tile_vector, self.edge_vector
        tiles = u[0] * t[0] + u[1] * t[1]
        edges = u[0] * e[0] + u[1] * e[1]
        return lam / (lam - 1.0) * tiles / edges

    def eigen_residual(self) -> float:
        """``|M u - lambda u|`` relative to ``|u|``."""
        (a, b), (c, d) = self.matrix.entries
        u0, u1 = self.growth_vector
        lam = self.growth_rate
        r0 = a * u0 + b * u1 - lam * u0
        r1 = c * u0 + d * u1 - lam * u1
        return math.hypot(r0, r1) / math.hypot(u0, u1)


def growth_system(pq) -> GrowthSystem:
    pq = as_pair(pq).require_hyperbolic()
    return GrowthSystem(
        pq=pq,
        matrix=growth_matrix(pq),
        tile_vector=tile_vector(pq),
        edge_vector=edge_vector(pq),
        growth_rate=growth_rate(pq),
        growth_vector=growth_vector(pq),
    )


def code_rate(pq) -> float:
    """Published closed-form code rate ``lambda/(lambda-1) (u.t)/(u.e)``.

    Outside the triangle family and {7,3} the published matrix maps census
    vectors as row vectors; the simulated patches converge to
    :func:`census_code_rate` instead.
    """
    return growth_system(pq).code_rate


def census_matrix(pq) -> GrowthMatrix:
    """Matrix sending one layer's class counts to the next as column vectors.

    Ordered by :func:`edge_vector`. Equal to :func:`growth_matrix` for the
    triangle family and to its transpose otherwise (the two coincide for
    {7,3}, where the matrix is symmetric).
    """
    m = growth_matrix(pq)
    if m.basis is Basis.TRIANGLE:
        return m
    (a, b), (c, d) = m.entries
    return GrowthMatrix(((a, c), (b, d)), m.basis)


def census_growth_vector(pq) -> tuple[float, float]:
    pq = as_pair(pq)
    family = family_of(pq)
    if family is Basis.TRIANGLE:
        return growth_vector(pq)
    if family is Basis.DUAL_TRIANGLE:
        return (1.0, growth_rate(pq) - 1.0)
    return (float(pq.p - 2), growth_rate(pq) - (pq.p - 3))


def census_system(pq) -> GrowthSystem:
    """Growth system whose matrix and Perron vector match simulated censuses."""
    pq = as_pair(pq).require_hyperbolic()
    return GrowthSystem(
        pq=pq,
        matrix=census_matrix(pq),
        tile_vector=tile_vector(pq),
        edge_vector=edge_vector(pq),
        growth_rate=growth_rate(pq),
        growth_vector=census_growth_vector(pq),
    )


def census_code_rate(pq) -> float:
    """Code rate of the censuses actually produced by tile completion.

    Reduces to ``(lambda + 1) / ((p - 2)(lambda - 1))`` for every family.
    """
    return census_system(pq).code_rate


def triangle_code_rate(q: int) -> float:
    """Closed form ``(lambda + 1)/(lambda - 1)`` for the {3,q} family."""
    if q < 7:
        raise ValueError(f"triangle codes need q >= 7, got {q}")
    lam = growth_rate(SchlafliPair(3, q))
    return (lam + 1.0) / (lam - 1.0)


@dataclass(frozen=True)
class Family:
    """Tilings with one Schlafli entry held fixed: ``Family('p', 5)`` is {5,q}."""

    fixed: str
    value: int

    def __post_init__(self):
        if self.fixed not in ("p", "q"):
            raise ValueError(f"fixed must be 'p' or 'q', got {self.fixed!r}")
        if self.value < 3:
            raise ValueError(f"family value must be >= 3, got {self.value}")

    def pair(self, other: int) -> SchlafliPair:
        if self.fixed == "p":
            return SchlafliPair(self.value, other)
        return SchlafliPair(other, self.value)

    def first_free(self) -> int:
        """Smallest value of the free entry giving a hyperbolic tiling."""
        return 1 + (2 * self.value) // (self.value - 2)

    def members(self, limit: int):
        return [self.pair(k) for k in range(self.first_free(), limit + 1)]

    def __str__(self):
        return f"{self.fixed}={self.value}"


# slowest-growing member of each family, keyed on min(value, 7)
_SLOWEST = {
    3: lambda f: SchlafliPair(3, 7),
    4: lambda f: SchlafliPair(4, 5),
    5: lambda f: SchlafliPair(5, 4),
    6: lambda f: SchlafliPair(6, 4),
    7: lambda f: SchlafliPair(f.value, 3) if f.fixed == "p" else SchlafliPair(3, f.value),
}


def growth_rate_lower_bound(family: Family) -> float:
    return growth_rate(_SLOWEST[min(family.value, 7)](family))
