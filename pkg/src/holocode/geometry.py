"""Closed-form geometry of regular {p,q} tessellations.

Only lengths, areas and counts live here: side length and area of a regular
tile, the code-rate bound they combine into, and the isoperimetric inequality
of the constant-curvature planes.

Curvature sign convention: ``k = +1`` is the hyperbolic plane, ``0`` the
Euclidean plane and ``-1`` the sphere. Most textbooks write the hyperbolic
case with ``k = -1``; the inequality ``A (4 pi + k A) <= L**2`` is stated here
with the opposite sign so that hyperbolic regions carry a ``+A**2`` term.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

ISO_TOLERANCE = 1e-9

# Beyond this argument sqrt((x-1)(x+1)) == x in double precision.
_ACOSH_LARGE = 1e8


class Curvature(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"


class NotHyperbolicError(ValueError):
    """Raised when a metric quantity is requested for a flat or spherical tiling."""

    def __init__(self, pq: "SchlafliPair"):
        self.pq = pq
        self.curvature = classify(pq)
        super().__init__(
            f"{{{pq.p},{pq.q}}} is {self.curvature.value}, not hyperbolic"
        )


@dataclass(frozen=True, order=True)
class SchlafliPair:
    """Regular tessellation with ``p``-gon tiles meeting ``q`` around each vertex."""

    p: int
    q: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q:
            raise ValueError(f"Schlafli symbol entries must be integers, got {self.p}, {self.q}")
        if self.p < 3 or self.q < 3:
            raise ValueError(f"invalid Schlafli symbol {{{self.p},{self.q}}}: need p >= 3 and q >= 3")

    @property
    def curvature(self) -> Curvature:
        return classify(self)

    @property
    def is_hyperbolic(self) -> bool:
        return classify(self) is Curvature.HYPERBOLIC

    def dual(self) -> "SchlafliPair":
        return SchlafliPair(self.q, self.p)

    def require_hyperbolic(self) -> "SchlafliPair":
        if not self.is_hyperbolic:
            raise NotHyperbolicError(self)
        return self

    def __str__(self):
        return f"{{{self.p},{self.q}}}"


def as_pair(pq) -> SchlafliPair:
    if isinstance(pq, SchlafliPair):
        return pq
    p, q = pq
    return SchlafliPair(p, q)


def classify(pq) -> Curvature:
    """Curvature class from the sign of ``1/2 - 1/p - 1/q`` (exact rational arithmetic)."""
    pq = as_pair(pq)
    excess = Fraction(1, 2) - Fraction(1, pq.p) - Fraction(1, pq.q)
    if excess > 0:
        return Curvature.HYPERBOLIC
    if excess == 0:
        return Curvature.EUCLIDEAN
    return Curvature.SPHERICAL


def stable_acosh(x: float) -> float:
    if x < 1.0:
        raise ValueError(f"acosh argument must be >= 1, got {x!r}")
    if x > _ACOSH_LARGE:
        return math.log(2.0) + math.log(x)
    return math.log(x + math.sqrt((x - 1.0) * (x + 1.0)))


@dataclass(frozen=True)
class TileGeometry:
    side_length: float
    area: float
    bound: float


def side_length(pq) -> float:
    pq = as_pair(pq).require_hyperbolic()
    return 2.0 * stable_acosh(math.cos(math.pi / pq.p) / math.sin(math.pi / pq.q))


def tile_area(pq) -> float:
    pq = as_pair(pq).require_hyperbolic()
    # 2 pi p (1/2 - 1/p - 1/q), regrouped to keep the large-q tail accurate
    return math.pi * (pq.p - 2) - 2.0 * math.pi * pq.p / pq.q


def tile_geometry(pq) -> TileGeometry:
    """Side length, area and code-rate bound ``side/area`` of the regular tile.

    Lengths are in units of the curvature radius.
    """
    pq = as_pair(pq).require_hyperbolic()
    ell = side_length(pq)
    area = tile_area(pq)
    if not (ell > 0 and area > 0):
        raise ArithmeticError(f"degenerate tile for {pq}: side={ell}, area={area}")
    return TileGeometry(ell, area, ell / area)


def bound(pq) -> float:
    return tile_geometry(pq).bound


def bound_precise(pq, dps: int = 60) -> mpmath.mpf:
    """Code-rate bound evaluated with ``dps`` decimal digits.

    Used to decide which side of a threshold a value lies on when the double
    precision result is too close to call.
    """
    pq = as_pair(pq).require_hyperbolic()
    with mpmath.workdps(dps):
        p, q = mpmath.mpf(pq.p), mpmath.mpf(pq.q)
        ell = 2 * mpmath.acosh(mpmath.cos(mpmath.pi / p) / mpmath.sin(mpmath.pi / q))
        area = mpmath.pi * (p - 2) - 2 * mpmath.pi * p / q
        return +(ell / area)


def isoperimetric_holds(area: float, length: float, curvature: int) -> bool:
    """Check ``A (4 pi + k A) <= L**2`` up to an absolute slack of ``ISO_TOLERANCE``."""
    if curvature not in (-1, 0, 1):
        raise ValueError(f"curvature must be -1, 0 or +1, got {curvature!r}")
    if area < 0 or length < 0:
        raise ValueError("area and length must be non-negative")
    return area * (4.0 * math.pi + curvature * area) <= length * length + ISO_TOLERANCE


def circle_geometry(radius: float) -> tuple[float, float]:
    """Circumference and area of a hyperbolic circle of geodesic radius ``radius``."""
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius!r}")
    circumference = 2.0 * math.pi * math.sinh(radius)
    area = 4.0 * math.pi * math.sinh(radius / 2.0) ** 2
    return circumference, area


def finite_layer_lhs(pq, n_bulk: int, n_boundary: int) -> float:
    """Left-hand side of the finite-patch code-rate inequality.

    For a simply connected patch of ``n_bulk`` tiles with ``n_boundary``
    perimeter edges this never exceeds ``bound(pq)``.
    """
    pq = as_pair(pq).require_hyperbolic()
    if n_bulk < 1 or n_boundary < 1:
        raise ValueError(f"counts must be positive, got n_bulk={n_bulk}, n_boundary={n_boundary}")
    area = tile_area(pq)
    # counts may exceed float range only absurdly late; ratio first keeps it finite
    ratio = n_bulk / n_boundary
    return ratio * math.sqrt(1.0 + 4.0 * math.pi / (n_bulk * area))
