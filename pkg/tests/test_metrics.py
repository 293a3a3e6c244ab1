import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levymoead.metrics import (
    FrontArchive,
    all_metrics,
    archive_from_csv,
    archive_to_csv,
    delta_spread,
    gd,
    hypervolume,
    igd,
    maximum_spread,
    nadir_reference,
    nondominated_filter,
    nondominated_mask,
    spacing,
)
from oracles import brute_nondominated, monte_carlo_hv


def test_filter_examples():
    assert nondominated_filter([(0.2, 0.04), (0.1, 0.01)]).points.tolist() == [[0.1, 0.01], [0.2, 0.04]]
    # higher return and lower risk: the second point is dominated
    assert nondominated_filter([(0.2, 0.01), (0.1, 0.04)]).points.tolist() == [[0.2, 0.01]]
    assert nondominated_filter([(0.2, 0.01), (0.1, 0.02)]).points.tolist() == [[0.2, 0.01]]
    assert nondominated_filter([(0.2, 0.01)] * 3 + [(0.2, 0.02)]).points.tolist() == [[0.2, 0.01]]
    assert len(nondominated_filter(np.empty((0, 2)))) == 0


@pytest.mark.parametrize("seed", range(30))
def test_filter_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 201))
    # coarse grid values force ties and duplicates
    P = rng.integers(0, 15, size=(m, 2)) / 10.0 if seed % 2 else rng.random((m, 2))
    got = [tuple(p) for p in nondominated_filter(P).points]
    assert got == brute_nondominated(P)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=40))
def test_filter_idempotent(pts):
    once = nondominated_filter(np.array(pts, dtype=float)).points
    twice = nondominated_filter(once).points
    assert np.array_equal(once, twice)
    assert nondominated_mask(once).all()


def test_gd_examples():
    P = np.array([[0.0, 0.0], [1.0, 1.0]])
    assert gd(P, P) == 0.0
    assert gd([[0, 1]], [[0, 0]]) == 1.0
    assert gd([[0, 0], [3, 4]], [[0, 0]]) == 2.5


def test_igd_examples():
    assert igd([[0, 0], [1, 0], [5, 5]], [[0, 0], [1, 0]]) == 0.0
    assert igd([[0, 0]], [[0, 0], [1, 0]]) == 0.5
    assert igd([[0.3, 0.4]], [[0, 0]]) == gd([[0.3, 0.4]], [[0, 0]])


def test_gd_zero_iff_on_front():
    P = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]])
    assert gd(P[:2], P) == 0
    assert gd(np.vstack([P[:2], [[1.0, 1.0 + 1e-9]]]), P) > 0


def test_spacing_examples():
    assert spacing([[0, 0], [1, 0], [2, 0], [3, 0]]) == 0.0
    assert spacing([[0, 0], [5, 7]]) == 0.0
    assert spacing([[0, 0], [1, 0], [3, 0]]) == pytest.approx(np.sqrt(2 / 9), rel=1e-14)
    with pytest.raises(ValueError):
        spacing([[0, 0]])


def test_spacing_is_manhattan():
    # nearest neighbours at L1 distance 2 (diagonal) and 1.5 (axis): Euclidean would rank them the other way
    pts = [[0, 0], [1, 1], [2.5, 1]]
    d = np.array([2.0, 1.5, 1.5])
    assert spacing(pts) == pytest.approx(np.sqrt(np.mean((d.mean() - d) ** 2)), rel=1e-14)


def test_maximum_spread_examples():
    assert maximum_spread([[0.3, 0.2]]) == 0.0
    assert maximum_spread([[0, 0], [3, 4]]) == 5.0
    assert maximum_spread([[0, 0], [2, 0]]) == 2.0


def test_delta_examples():
    P = [[0, 0], [3, 0]]
    assert delta_spread([[0, 0], [1, 0], [3, 0]], P) == pytest.approx(1 / 3, rel=1e-14)
    assert delta_spread([[0, 0], [1, 0], [2, 0], [3, 0]], P) == 0.0
    assert delta_spread([[1, 1], [1, 1], [1, 1]], P) == 1.0
    with pytest.raises(ValueError):
        delta_spread([[0, 0]], P)


def test_hv_examples():
    assert hypervolume([[0.5, 0.2]], (0.0, 0.5)) == pytest.approx(0.15, rel=1e-14)
    assert hypervolume([[0.5, 0.2], [0.4, 0.3]], (0.0, 0.5)) == pytest.approx(0.15, rel=1e-14)
    assert hypervolume([[-0.1, 0.2], [0.5, 0.6]], (0.0, 0.5)) == 0.0
    assert hypervolume([[0.5, 0.2], [0.3, 0.1]], (0.0, 0.5)) == pytest.approx(0.5 * 0.3 + 0.3 * 0.1, rel=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_hv_against_monte_carlo(seed):
    rng = np.random.default_rng(seed)
    P = rng.random((int(rng.integers(1, 11)), 2))
    ref = (0.0, 1.0)
    mc = monte_carlo_hv(P, ref, 2_000_000, rng)
    assert hypervolume(P, ref) == pytest.approx(mc, rel=0.01)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=12), st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_hv_monotone_and_permutation_invariant(pts, new):
    P = np.array(pts)
    ref = (0.0, 1.0)
    base = hypervolume(P, ref)
    assert hypervolume(np.vstack([P, [new]]), ref) >= base - 1e-15
    assert hypervolume(P[::-1], ref) == pytest.approx(base, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_metrics_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    A = rng.random((12, 2))
    P = rng.random((20, 2))
    perm = rng.permutation(12)
    for fn in (lambda X: gd(X, P), lambda X: igd(X, P), spacing, maximum_spread, lambda X: delta_spread(X, P)):
        assert fn(A[perm]) == pytest.approx(fn(A), rel=1e-12, abs=1e-15)


def test_all_metrics_handles_single_point():
    m = all_metrics([[0.2, 0.1]], [[0.2, 0.1], [0.3, 0.2]], hv_ref=(0.0, 0.5))
    assert np.isnan(m["S"]) and np.isnan(m["Delta"])
    assert m["GD"] == 0.0 and m["HV"] == pytest.approx(0.08)


def test_nadir_reference():
    assert nadir_reference([[[0.1, 0.2], [0.3, 0.5]], [[0.05, 0.1]]]) == (0.05, 0.5)


def test_archive_csv_round_trip():
    P = np.array([[0.001234567890123, 0.00045], [0.2, 0.3]])
    text = archive_to_csv(P)
    assert text.splitlines()[0] == "return,risk"
    assert text.splitlines()[1] == "0.00123456789012,0.00045"
    np.testing.assert_allclose(archive_from_csv(text), P, rtol=1e-11)
    with pytest.raises(ValueError):
        archive_from_csv("a,b\n1,2\n")


def test_front_archive_len():
    assert len(FrontArchive(np.zeros((3, 2)))) == 3
