import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ustconn.errors import DimensionError, ParameterError, SizeCapError
from ustconn.expanders import random_regular
from ustconn.graph import RotationMap, complete_with_loops, cycle, to_adjacency, validate_rotation_map
from ustconn.operators import (
    BoundReport,
    derand_square,
    dsquare_bound,
    dsquare_loose_bound,
    power,
    zigzag,
    zigzag_bound,
    zigzag_gap_bound,
)
from ustconn.spectral import lambda_abs2

from corpus import small_regular

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 4))
def test_power_adjacency_is_matrix_power(seed, t):
    r = small_regular(seed)
    a = to_adjacency(r)
    assert (to_adjacency(power(r, t)) == np.linalg.matrix_power(a, t)).all()


def test_power_labels_reverse():
    r = cycle(5)
    p = power(r, 2)
    # label (0, 0) walks +2 and returns with (1, 1)
    assert p.rot(0, 0) == (2, 3)
    # label (0, 1) steps forward then back; the reversed word is (0, 1)
    assert p.rot(0, 1) == (0, 1)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_power_spectrum(seed, t):
    r = small_regular(seed)
    assert lambda_abs2(power(r, t)) == pytest.approx(lambda_abs2(r) ** t, abs=1e-7)


def test_power_rejects_zero():
    with pytest.raises(ParameterError):
        power(cycle(3), 0)


def test_table_cap():
    with pytest.raises(SizeCapError):
        power(cycle(8), 10, cap=1000)


def test_zigzag_dimensions():
    with pytest.raises(DimensionError):
        zigzag(cycle(4), cycle(3))
    with pytest.raises(DimensionError):
        derand_square(cycle(4), cycle(3))


def test_zigzag_with_single_vertex_graph_is_h_squared():
    h = random_regular(6, 3, 4)
    g = RotationMap(np.zeros((1, 6), dtype=np.int64), np.arange(6)[None, :])
    z = zigzag(g, h)
    assert validate_rotation_map(z).ok
    a = to_adjacency(h)
    assert (to_adjacency(z) == a @ a).all()


def test_zigzag_shape_and_validity():
    g = random_regular(6, 4, 1)
    z = zigzag(g, cycle(4))
    assert (z.n, z.d) == (24, 4)
    assert validate_rotation_map(z).ok


def test_derand_square_against_complete_graph_is_square():
    g = random_regular(6, 3, 2)
    s = derand_square(g, complete_with_loops(3))
    assert (to_adjacency(s) == to_adjacency(power(g, 2))).all()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_zigzag_bound_holds(seed):
    rng = np.random.default_rng(seed)
    D = int(rng.choice([4, 6]))
    h = random_regular(D, 3, seed)
    g = random_regular(int(rng.integers(1, 6)) * 2, D, seed + 1)
    lam, alpha = lambda_abs2(g), lambda_abs2(h)
    measured = lambda_abs2(zigzag(g, h))
    assert measured <= zigzag_bound(lam, alpha) + 1e-9
    assert 1 - measured >= zigzag_gap_bound(lam, alpha) - 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dsquare_bound_holds(seed):
    rng = np.random.default_rng(seed)
    D = int(rng.choice([4, 6, 8]))
    h = random_regular(D, 2 if D == 4 else 3, seed)
    g = random_regular(int(rng.integers(1, 6)) * 2, D, seed + 1)
    lam, alpha = lambda_abs2(g), lambda_abs2(h)
    measured = lambda_abs2(derand_square(g, h))
    assert measured <= dsquare_bound(lam, alpha) + 1e-9
    assert dsquare_bound(lam, alpha) <= dsquare_loose_bound(lam, alpha) + 1e-9


def test_bound_closed_forms():
    assert zigzag_bound(1.0, 0.5) == pytest.approx(1.0)
    assert zigzag_bound(0.0, 0.5) == pytest.approx(0.5)
    assert zigzag_bound(0.5, 0.0) == pytest.approx(0.5)
    assert dsquare_bound(0.5, 0.5) == pytest.approx(0.625)
    assert dsquare_loose_bound(0.5, 0.5) == pytest.approx(0.75)
    # f(lam, alpha) <= 1 - gap bound
    for lam in np.linspace(0, 1, 11):
        for alpha in np.linspace(0, 1, 11):
            assert zigzag_bound(lam, alpha) <= 1 - zigzag_gap_bound(lam, alpha) + 1e-12


@pytest.mark.parametrize("fn", [zigzag_bound, zigzag_gap_bound, dsquare_bound, dsquare_loose_bound])
def test_bounds_reject_out_of_range(fn):
    with pytest.raises(ParameterError):
        fn(1.5, 0.5)
    with pytest.raises(ParameterError):
        fn(0.5, -0.1)


def test_bound_report_slack():
    rep = BoundReport("zigzag", 0.5, 0.5, 0.8, 0.7)
    assert rep.slack == pytest.approx(0.1)
    assert rep.csv_row().startswith("zigzag,0.5,0.5,0.8,0.7,")
    assert math.isclose(float(rep.csv_row().split(",")[-1]), 0.1)
