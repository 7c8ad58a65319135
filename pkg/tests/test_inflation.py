import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holocode.geometry import SchlafliPair, bound
from holocode.inflation import (
    Basis,
    Family,
    census_code_rate,
    census_matrix,
    census_system,
    code_rate,
    edge_vector,
    gamma,
    growth_matrix,
    growth_rate,
    growth_rate_is_irrational,
    growth_rate_lower_bound,
    growth_system,
    growth_vector,
    triangle_code_rate,
)

GRID_100 = [(p, q) for p in range(3, 101) for q in range(3, 101) if SchlafliPair(p, q).is_hyperbolic]
GRID_40 = [(p, q) for p, q in GRID_100 if p <= 40 and q <= 40]
hyperbolic_pairs = st.tuples(st.integers(3, 100), st.integers(3, 100)).filter(
    lambda pq: SchlafliPair(*pq).is_hyperbolic)


@pytest.mark.parametrize("pq, entries, basis", [
    ((5, 4), ((2, 1), (3, 2)), Basis.GENERIC),
    ((3, 7), ((0, 1), (-1, 3)), Basis.TRIANGLE),
    ((7, 3), ((1, 1), (1, 2)), Basis.DUAL_TRIANGLE),
])
def test_growth_matrix_examples(pq, entries, basis):
    m = growth_matrix(pq)
    assert m.entries == entries and m.basis is basis


@pytest.mark.parametrize("pq", [(4, 4), (3, 6), (3, 5)])
def test_growth_matrix_rejects_non_hyperbolic(pq):
    with pytest.raises(ValueError):
        growth_matrix(pq)


def test_determinant_and_trace_grid():
    for p, q in GRID_100:
        m = growth_matrix((p, q))
        assert m.det == 1
        assert m.trace == (p - 2) * (q - 2) - 2 == 2 * gamma((p, q))
        assert m.trace > 2
        assert census_matrix((p, q)).det == 1 and census_matrix((p, q)).trace == m.trace


def test_gamma_is_exact():
    assert gamma((3, 7)) == Fraction(3, 2)
    assert gamma((4, 5)) == 2
    assert gamma((5, 5)) == Fraction(7, 2)


@pytest.mark.parametrize("pq, lam", [
    ((3, 7), (3 + math.sqrt(5)) / 2),
    ((4, 5), 2 + math.sqrt(3)),
    ((5, 4), 2 + math.sqrt(3)),
])
def test_growth_rate_examples(pq, lam):
    assert growth_rate(pq) == pytest.approx(lam, rel=1e-14)


@given(hyperbolic_pairs)
def test_growth_rate_is_perron_eigenvalue(pq):
    # independent route: numerical eigenvalues of the integer matrix
    eig = np.linalg.eigvals(np.array(growth_matrix(pq).entries, dtype=float))
    assert growth_rate(pq) == pytest.approx(max(eig.real), rel=1e-9)


def test_growth_rate_symmetric_and_irrational():
    for p, q in GRID_100:
        assert growth_rate((p, q)) == pytest.approx(growth_rate((q, p)), rel=1e-12)
        assert growth_rate((p, q)) > 1
        assert growth_rate_is_irrational((p, q))


@pytest.mark.parametrize("pq, u", [
    ((3, 7), (1.0, 2.618033988749895)),
    ((7, 3), (1.0, 1.618033988749895)),
    ((5, 4), (1.0, 1.7320508075688772)),
])
def test_growth_vector_examples(pq, u):
    assert growth_vector(pq) == pytest.approx(u, rel=1e-12)


def test_eigen_residual_grid():
    for pq in GRID_100:
        assert growth_system(pq).eigen_residual() <= 1e-9
        assert census_system(pq).eigen_residual() <= 1e-9


def test_growth_vectors_positive():
    # the triangle matrix has a -1 entry but its Perron vector stays positive
    for pq in GRID_100:
        assert min(growth_vector(pq)) > 0
        assert min(edge_vector(pq)) >= 0


@pytest.mark.parametrize("pq, chi", [((7, 3), 0.447), ((4, 5), 0.789), ((3, 7), 2.236), ((5, 4), 0.519)])
def test_code_rate_table_values(pq, chi):
    assert code_rate(pq) == pytest.approx(chi, abs=5e-4)


def test_triangle_code_rate():
    assert triangle_code_rate(7) == pytest.approx(2.236, abs=5e-4)
    # gamma = 2, lambda = 2 + sqrt 3, (3 + sqrt 3)/(1 + sqrt 3) = sqrt 3
    assert triangle_code_rate(8) == pytest.approx(math.sqrt(3), rel=1e-13)
    with pytest.raises(ValueError):
        triangle_code_rate(6)


def test_triangle_closed_form_agrees_with_general_formula():
    previous = math.inf
    for q in range(7, 2000):
        value = triangle_code_rate(q)
        assert value == pytest.approx(code_rate((3, q)), rel=1e-12)
        assert 1 < value < previous
        previous = value
    assert triangle_code_rate(10**9) == pytest.approx(1.0, abs=1e-8)


def test_code_rate_below_bound_grid():
    for pq in GRID_40:
        assert code_rate(pq) <= bound(pq)
        assert census_code_rate(pq) <= bound(pq)


@pytest.mark.parametrize("rate", [code_rate, census_code_rate])
def test_code_rate_strictly_decreasing(rate):
    grid = set(GRID_40)
    for p, q in GRID_40:
        if (p, q + 1) in grid:
            assert rate((p, q + 1)) < rate((p, q))
        if (p + 1, q) in grid:
            assert rate((p + 1, q)) < rate((p, q))


@pytest.mark.parametrize("p", [4, 5, 7, 12, 30])
@pytest.mark.parametrize("q", [10**3, 10**4, 10**6])
def test_large_q_limit(p, q):
    limit = (2 * p - 5) / ((p - 3) ** 2 + (p - 2) ** 2)
    assert abs(code_rate((p, q)) - limit) <= 10 / q


@pytest.mark.parametrize("q", [3, 4, 5, 8])
def test_large_p_falls_like_inverse_p(q):
    scaled = [p * code_rate((p, q)) for p in (10**3, 10**4, 10**5, 10**6)]
    gaps = [abs(b - a) for a, b in zip(scaled, scaled[1:])]
    assert all(0 < s < 10 for s in scaled)
    assert gaps[0] > gaps[1] > gaps[2]


def test_dual_triangle_ratio_limit():
    ratios = [code_rate((p, 3)) / bound((p, 3)) for p in range(7, 2000)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    limit = math.pi / (3 * math.log(3))
    assert abs(code_rate((10**6, 3)) / bound((10**6, 3)) - limit) <= 1e-3


def test_census_algebra():
    # the transpose is what maps simulated class counts; all families share one closed form
    assert census_matrix((5, 4)).entries == ((2, 3), (1, 2))
    assert census_matrix((3, 7)) == growth_matrix((3, 7))
    assert census_matrix((7, 3)) == growth_matrix((7, 3))
    assert census_matrix((9, 3)).entries == ((1, 1), (3, 4))
    for pq in GRID_100:
        lam = growth_rate(pq)
        assert census_code_rate(pq) == pytest.approx((lam + 1) / ((pq[0] - 2) * (lam - 1)), rel=1e-12)
    assert census_code_rate((5, 4)) == pytest.approx(1 / math.sqrt(3), rel=1e-13)
    assert census_code_rate((4, 5)) == pytest.approx(math.sqrt(3) / 2, rel=1e-13)
    assert census_code_rate((3, 7)) == pytest.approx(code_rate((3, 7)), rel=1e-13)
    assert census_code_rate((7, 3)) == pytest.approx(code_rate((7, 3)), rel=1e-13)


@pytest.mark.parametrize("family, slowest", [
    (Family("p", 3), (3, 7)), (Family("q", 3), (7, 3)),
    (Family("p", 4), (4, 5)), (Family("q", 4), (5, 4)),
    (Family("p", 5), (5, 4)), (Family("q", 5), (4, 5)),
    (Family("p", 6), (6, 4)), (Family("q", 6), (4, 6)),
    (Family("p", 9), (9, 3)), (Family("q", 9), (3, 9)),
])
def test_growth_rate_lower_bound(family, slowest):
    assert growth_rate_lower_bound(family) == pytest.approx(growth_rate(slowest), rel=1e-14)
    # it really is the slowest member of the family
    assert all(growth_rate(pq) >= growth_rate_lower_bound(family) * (1 - 1e-14)
               for pq in family.members(60))


def test_family_members_start_at_first_hyperbolic():
    assert Family("p", 3).members(8) == [SchlafliPair(3, 7), SchlafliPair(3, 8)]
    assert Family("q", 4).members(5) == [SchlafliPair(5, 4)]
    assert Family("p", 7).members(3) == [SchlafliPair(7, 3)]
    with pytest.raises(ValueError):
        Family("r", 3)
