import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from disk_oracle import tile_completion_census
from holocode.geometry import SchlafliPair
from holocode.inflation import census_code_rate, census_system, growth_rate, growth_system
from holocode.tiling import (
    CENSUS_COLUMNS,
    LayerCensus,
    SeedKind,
    census_rows,
    empirical_code_rate,
    grow_layer,
    run,
    seed,
    simulate,
    verify_growth_matrix,
    verify_isoperimetric,
)

ACCEPTANCE_PAIRS = [(3, 7), (4, 5), (5, 4), (7, 3), (6, 4)]
SEEDS = list(SeedKind)

small_pairs = st.sampled_from([(3, 7), (3, 8), (4, 5), (5, 4), (7, 3), (8, 3), (4, 6), (6, 4), (5, 5)])


@pytest.fixture(scope="module")
def long_runs():
    # every pair and seed grown until the perimeter passes 1e4
    return {(pq, kind): run(pq, kind, max_layers=40, stop_above=10**4, validate=False)
            for pq in ACCEPTANCE_PAIRS for kind in SEEDS}


def test_seed_kind_parse():
    assert SeedKind.parse("tile") is SeedKind.SINGLE_TILE
    assert SeedKind.parse("single-edge-pair") is SeedKind.SINGLE_EDGE_PAIR
    assert SeedKind.parse(SeedKind.VERTEX_STAR) is SeedKind.VERTEX_STAR
    with pytest.raises(ValueError):
        SeedKind.parse("hexagon")


def test_single_tile_seed_counts():
    patch = seed((5, 4), SeedKind.SINGLE_TILE)
    assert (patch.n_vertices, patch.n_edges, patch.n_tiles, patch.perimeter) == (5, 5, 1, 5)
    patch.validate()


def test_vertex_star_seed_counts():
    patch = seed((5, 4), SeedKind.VERTEX_STAR)
    patch.validate()
    assert patch.n_tiles == 4
    interior = [v for v, d in enumerate(patch.vertex_degree) if v not in set(patch.boundary)]
    assert len(interior) == 1 and patch.vertex_degree[interior[0]] == 4


def test_edge_pair_seed_counts():
    patch = seed((3, 7), SeedKind.SINGLE_EDGE_PAIR)
    patch.validate()
    assert (patch.n_vertices, patch.n_edges, patch.n_tiles, patch.perimeter) == (4, 5, 2, 4)


def test_seed_rejects_non_hyperbolic():
    with pytest.raises(ValueError):
        seed((4, 4))


def test_54_first_layers():
    censuses = run((5, 4), max_layers=2)
    assert censuses[1].new_tiles == 10
    assert censuses[1].class_counts == {2: 5, 3: 5}
    assert censuses[1].perimeter_edges == 25
    assert censuses[2].class_counts == {2: 25, 3: 15}
    assert censuses[2].perimeter_edges == 95


def test_54_empirical_rate_at_761_tiles():
    censuses = run((5, 4), max_layers=4)
    hit = [c for c in censuses if c.cumulative_tiles == 761]
    assert hit and Fraction(hit[0].cumulative_tiles, hit[0].perimeter_edges) == Fraction(761, 1325)


@pytest.mark.parametrize("pq", [(5, 4), (3, 7), (7, 3), (4, 5), (6, 4), (3, 8), (8, 3), (5, 5), (4, 6)])
@pytest.mark.parametrize("kind", ["tile", "edge", "vertex"])
def test_matches_disk_oracle(pq, kind):
    layers = 3 if min(pq) > 3 else 4
    expected = tile_completion_census(*pq, kind, layers)
    got = run(pq, kind, max_layers=layers)
    assert [(c.new_tiles, c.class_counts, c.perimeter_edges, c.cumulative_tiles) for c in got] == expected


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_pairs, st.sampled_from(SEEDS), st.integers(1, 4))
def test_patches_stay_valid_discs(pq, kind, layers):
    patch, censuses = simulate(pq, kind, max_layers=layers, max_boundary=20000, validate=True)
    assert patch.euler_characteristic() == 1
    assert patch.n_tiles == censuses[-1].cumulative_tiles
    assert patch.perimeter == censuses[-1].perimeter_edges


@settings(max_examples=25, deadline=None)
@given(small_pairs, st.sampled_from(SEEDS))
def test_census_invariants(pq, kind):
    p, q = pq
    censuses = run(pq, kind, max_layers=5, max_boundary=20000, validate=False)
    total = 0
    for c in censuses:
        total += c.new_tiles
        assert c.cumulative_tiles == total
        assert sum(c.class_counts.values()) == c.new_tiles
        # every perimeter edge is a dangling edge of exactly one outermost tile
        assert sum(k * v for k, v in c.class_counts.items()) == c.perimeter_edges
        assert all(0 <= k <= p for k in c.class_counts)
    for a, b in zip(censuses, censuses[1:]):
        assert b.perimeter_edges > a.perimeter_edges and b.layer == a.layer + 1


def test_37_log_slope_matches_growth_rate():
    censuses = run((3, 7), max_layers=6)
    slope = math.log(censuses[6].new_tiles / censuses[5].new_tiles)
    assert slope == pytest.approx(math.log(growth_rate((3, 7))), rel=0.05)


def test_73_classes_after_first_layer():
    for kind in SEEDS:
        for c in run((7, 3), kind, max_layers=6)[1:]:
            assert set(c.class_counts) <= {3, 4}


def test_max_boundary_zero_keeps_seed_only():
    censuses = run((5, 4), max_layers=5, max_boundary=0)
    assert len(censuses) == 1 and censuses[0].layer == 0
    assert empirical_code_rate(censuses) == pytest.approx(1 / 5)


def test_stop_above_overshoots_once():
    censuses = run((5, 4), max_layers=40, stop_above=1000)
    assert censuses[-1].perimeter_edges > 1000 >= censuses[-2].perimeter_edges


def test_simulate_argument_checks():
    with pytest.raises(ValueError):
        simulate((5, 4), max_layers=0)
    with pytest.raises(ValueError):
        empirical_code_rate([])


def test_grow_layer_in_place():
    patch = seed((4, 5))
    same, census = grow_layer(patch)
    assert same is patch and census.layer == 1 and patch.n_tiles == 1 + census.new_tiles


@pytest.mark.parametrize("pq", ACCEPTANCE_PAIRS)
@pytest.mark.parametrize("kind", SEEDS)
def test_convergence_to_census_code_rate(long_runs, pq, kind):
    censuses = long_runs[(pq, kind)]
    assert censuses[-1].perimeter_edges > 10**4
    assert empirical_code_rate(censuses) == pytest.approx(census_code_rate(pq), rel=0.01)
    assert censuses[-1].new_tiles / censuses[-2].new_tiles == pytest.approx(growth_rate(pq), rel=0.01)


@pytest.mark.parametrize("pq", ACCEPTANCE_PAIRS)
@pytest.mark.parametrize("kind", SEEDS)
def test_census_matrix_verified(long_runs, pq, kind):
    check = verify_growth_matrix(long_runs[(pq, kind)], census_system(pq))
    assert check.ok, check.message
    assert check.transient <= 3
    assert check.two_class_from is not None and check.two_class_from <= 3


@pytest.mark.parametrize("pq", [(3, 7), (7, 3)])
def test_published_matrix_holds_for_triangle_families(long_runs, pq):
    for kind in SEEDS:
        assert verify_growth_matrix(long_runs[(pq, kind)], growth_system(pq)).ok


@pytest.mark.parametrize("pq", [(4, 5), (6, 4)])
def test_published_matrix_is_transposed_for_generic_pairs(long_runs, pq):
    # documented discrepancy: counts follow the transpose of the published matrix
    for kind in SEEDS:
        assert not verify_growth_matrix(long_runs[(pq, kind)], growth_system(pq)).ok


def test_mismatched_system_rejected(long_runs):
    check = verify_growth_matrix(long_runs[((5, 4), SeedKind.SINGLE_TILE)], census_system((4, 5)))
    assert not check.ok and check.transient is None


def test_verify_growth_matrix_needs_four_layers():
    with pytest.raises(ValueError):
        verify_growth_matrix(run((5, 4), max_layers=2), census_system((5, 4)))


@pytest.mark.parametrize("pq", [(8, 3), (9, 3)])
def test_dual_triangle_counts_follow_transpose(pq):
    censuses = run(pq, max_layers=7, validate=False)
    assert verify_growth_matrix(censuses, census_system(pq)).ok
    assert not verify_growth_matrix(censuses, growth_system(pq)).ok
    assert empirical_code_rate(censuses) == pytest.approx(census_code_rate(pq), rel=0.01)


@pytest.mark.parametrize("pq", ACCEPTANCE_PAIRS)
def test_isoperimetric_every_layer(long_runs, pq):
    for kind in SEEDS:
        assert all(verify_isoperimetric(c, pq) for c in long_runs[(pq, kind)])


def test_isoperimetric_detects_impossible_census():
    fake = LayerCensus(layer=1, new_tiles=10**6, class_counts={}, perimeter_edges=1, cumulative_tiles=10**6)
    assert not verify_isoperimetric(fake, SchlafliPair(5, 4))


def test_census_rows():
    censuses = run((5, 4), max_layers=2)
    rows = census_rows(censuses, (2, 3))
    assert [tuple(r) for r in rows] == [CENSUS_COLUMNS] * 3
    assert rows[2]["class_a"] == 25 and rows[2]["class_b"] == 15
    assert rows[0]["class_a"] == rows[0]["class_b"] == 0
    assert rows[1]["empirical_rate"] == pytest.approx(11 / 25)
