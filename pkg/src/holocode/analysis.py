"""Integer searches over q at fixed p, and the data behind the published tables and figures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .geometry import SchlafliPair, bound, bound_precise, classify, Curvature
from .inflation import Family, code_rate, growth_rate, growth_rate_lower_bound

# consecutive increases of the bound that end the q_opt scan
UNIMODAL_MARGIN = 8
# double-precision bounds this close to 1 are re-evaluated in high precision
THRESHOLD_BAND = 1e-9

TABLE_I_PAIRS = ((3, 7), (4, 5), (5, 4), (7, 3))
TABLE_II_P = tuple(range(3, 11))
TABLE_III_P = tuple(range(4, 8))


def round3(x: float, places: int = 3) -> float:
    """Round half away from zero, as printed tables do."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(quantum, rounding=ROUND_HALF_UP))


def q_min(p: int) -> int:
    """Fewest tiles per vertex for which {p,q} is hyperbolic."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p}")
    return 1 + 2 + 4 // (p - 2)


def bound_below_one(p: int, q: int) -> bool:
    x = bound(SchlafliPair(p, q))
    if abs(x - 1.0) > THRESHOLD_BAND:
        return x < 1.0
    return bound_precise(SchlafliPair(p, q)) < 1


def q_opt(p: int) -> tuple[int, float]:
    """``q`` minimising the code-rate bound at fixed ``p``, and the minimum.

    Scans upward from ``q_min(p)`` until the bound has risen
    ``UNIMODAL_MARGIN`` times in a row; ties keep the smaller ``q``.
    """
    q = q_min(p)
    best_q, best = q, bound(SchlafliPair(p, q))
    prev, rising = best, 0
    while rising < UNIMODAL_MARGIN:
        q += 1
        x = bound(SchlafliPair(p, q))
        if x < best:
            best_q, best = q, x
        rising = rising + 1 if x > prev else 0
        prev = x
    return best_q, best


def q_max(p: int) -> int | None:
    """Largest ``q`` with bound below one, or None when no ``q`` gets there.

    The bound grows without limit beyond ``q_opt`` (the side length grows
    like ``log q`` while the area saturates), so the crossing is bracketed by
    doubling and then located by integer bisection.
    """
    qo, best = q_opt(p)
    if not bound_below_one(p, qo):
        return None
    lo, hi = qo, 2 * qo
    while bound_below_one(p, hi):
        lo, hi = hi, 2 * hi
    if not (bound_below_one(p, lo) and not bound_below_one(p, hi)):
        raise ArithmeticError(f"invalid q_max bracket [{lo}, {hi}] for p={p}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound_below_one(p, mid):
            lo = mid
        else:
            hi = mid
    return lo


def q1_estimate(p: int) -> float:
    """Large-p estimate ``pi cosh(pi (p-2)/2) / cos(pi/p)`` of ``q_max(p)``."""
    if p < 4:
        raise ValueError(f"q1 estimate needs p >= 4, got {p}")
    return math.pi * math.cosh(math.pi * (p - 2) / 2) / math.cos(math.pi / p)


@dataclass(frozen=True)
class RangeReport:
    p: int
    q_min: int
    q_max: int | None
    q_opt: int
    best_bound: float
    q1_estimate: float | None


def range_report(p: int) -> RangeReport:
    qo, best = q_opt(p)
    return RangeReport(
        p=p,
        q_min=q_min(p),
        q_max=q_max(p),
        q_opt=qo,
        best_bound=best,
        q1_estimate=q1_estimate(p) if p >= 4 else None,
    )


def table_code_rates(pairs=TABLE_I_PAIRS) -> list[dict]:
    rows = []
    for p, q in pairs:
        rate, chi = code_rate((p, q)), bound((p, q))
        rows.append({"p": p, "q": q, "code_rate": rate, "bound": chi, "ratio": rate / chi})
    return rows


def table_best_bounds(ps=TABLE_II_P) -> list[dict]:
    return [{"p": p, "q_opt": r.q_opt, "best_bound": r.best_bound}
            for p in ps for r in [range_report(p)]]


def table_ranges(ps=TABLE_III_P) -> list[dict]:
    return [{"p": p, "q_min": r.q_min, "q_max": r.q_max, "q1_estimate": r.q1_estimate}
            for p in ps for r in [range_report(p)]]


FIGURES = {
    1: ("rate", "p"),
    2: ("rate", "q"),
    3: ("ratio", "p"),
    4: ("ratio", "q"),
}
FIGURE_COLUMNS = ("family", "p", "q", "x", "y")


def figure_series(mode: str, family: Family, limit: int) -> list[dict]:
    """Rows ``(family, p, q, x, y)`` for one family, ordered by the free entry.

    ``x`` is the family's slowest growth rate divided by the pair's growth
    rate; ``y`` is the code rate (``mode='rate'``) or code rate over bound
    (``mode='ratio'``).
    """
    if mode not in ("rate", "ratio"):
        raise ValueError(f"mode must be 'rate' or 'ratio', got {mode!r}")
    members = family.members(limit)
    if not members:
        raise ValueError(f"family {family} has no hyperbolic members up to {limit}")
    slowest = growth_rate_lower_bound(family)
    rows = []
    for pq in members:
        y = code_rate(pq)
        if mode == "ratio":
            y /= bound(pq)
        rows.append({"family": str(family), "p": pq.p, "q": pq.q,
                     "x": slowest / growth_rate(pq), "y": y})
    return rows


def figure_data(fig_id: int, limit: int = 40) -> list[dict]:
    """All series of one figure; rate figures end with the y = 1 threshold line."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id}; choose from {sorted(FIGURES)}")
    mode, fixed = FIGURES[fig_id]
    rows = []
    for value in range(3, 8):
        rows += figure_series(mode, Family(fixed, value), limit)
    if mode == "rate":
        rows += [{"family": "threshold", "p": None, "q": None, "x": x, "y": 1.0} for x in (0.0, 1.0)]
    return rows


@dataclass(frozen=True)
class SupremumReport:
    pair: SchlafliPair
    ratio: float
    pairs_scanned: int
    all_below_one: bool
    dual_triangle_ratio: float
    dual_triangle_gap: float  # |ratio(p_limit, 3) - pi/(3 ln 3)|


DUAL_TRIANGLE_LIMIT = math.pi / (3 * math.log(3))


def ratio_supremum_scan(p_limit: int = 30, q_limit: int | None = None) -> SupremumReport:
    """Largest code-rate/bound ratio over ``p <= p_limit`` and ``q <= q_opt(p)``.

    Since the code rate falls with ``q``, larger ``q`` than ``q_opt`` only
    lower the ratio and need not be scanned.
    """
    if p_limit < 7 or (q_limit is not None and q_limit < 7):
        raise ValueError("limits must be >= 7")
    best_pair, best, count, below = None, -math.inf, 0, True
    for p in range(3, p_limit + 1):
        top = q_opt(p)[0] if q_limit is None else min(q_opt(p)[0], q_limit)
        for q in range(q_min(p), top + 1):
            pq = SchlafliPair(p, q)
            r = code_rate(pq) / bound(pq)
            count += 1
            below &= r < 1
            if r > best:
                best_pair, best = pq, r
    tail = SchlafliPair(p_limit, 3)
    tail_ratio = code_rate(tail) / bound(tail)
    return SupremumReport(best_pair, best, count, below, tail_ratio,
                          abs(tail_ratio - DUAL_TRIANGLE_LIMIT))


def is_hyperbolic(p: int, q: int) -> bool:
    return classify(SchlafliPair(p, q)) is Curvature.HYPERBOLIC
