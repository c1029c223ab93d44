import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ustconn.connectivity import (
    DEFAULT_BUDGET_C,
    RV_BASE_DEGREE,
    DerandSquareOracle,
    PowerOracle,
    RegularizedOracle,
    build_rv_schedule,
    calibrate_budget_constant,
    log_budget,
    oracle_connect,
    path_enum_connect,
    reingold_connect,
    rv_connect,
    rv_oracle,
)
from ustconn.errors import ParameterError, QueryLimitExceeded
from ustconn.expanders import certified_base, derive_seed, find_expander, random_regular
from ustconn.graph import (
    MultiGraph,
    RotationMap,
    components_oracle,
    path_with_loops,
    rotation_map_from_multigraph,
    to_multigraph,
)
from ustconn.operators import derand_square, dsquare_bound, power
from ustconn.spectral import lambda_abs2
from ustconn.transform import TransformOracle, TransformParams, WorkspaceMeter, regularize

SMALL = TransformParams(2, 2, 1, l=1)
H4 = path_with_loops(4)

K4 = rotation_map_from_multigraph(MultiGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))))
TWO_TRIANGLES = rotation_map_from_multigraph(
    MultiGraph(6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3))))


def same_component(g: MultiGraph, s: int, t: int) -> bool:
    return any(s in c and t in c for c in components_oracle(g))


def materialized(oracle) -> RotationMap:
    rows = [[oracle.rot(v, a) for a in range(oracle.d)] for v in range(oracle.n)]
    return RotationMap(np.array([[w for w, _ in r] for r in rows]),
                       np.array([[b for _, b in r] for r in rows]))


# --- path enumeration ------------------------------------------------------


def test_direct_edge():
    assert path_enum_connect(K4, 0, 3, 1).connected


def test_two_triangles_never_connected():
    for budget in range(6):
        assert not path_enum_connect(TWO_TRIANGLES, 0, 3, budget).connected


def test_zero_budget_only_finds_self():
    assert path_enum_connect(K4, 2, 2, 0).connected
    assert not path_enum_connect(K4, 2, 3, 0).connected


def test_query_count_is_reproducible():
    a = path_enum_connect(TWO_TRIANGLES, 0, 3, 4)
    b = path_enum_connect(TWO_TRIANGLES, 0, 3, 4)
    assert a == b
    # full tree of depth 4 with 2 labels: each node is entered and left once
    assert a.queries == 2 * (2 + 4 + 8 + 16)


def test_query_cap():
    with pytest.raises(QueryLimitExceeded) as err:
        path_enum_connect(TWO_TRIANGLES, 0, 3, 10, max_queries=50)
    assert err.value.queries == 50


def test_bad_arguments():
    with pytest.raises(ParameterError):
        path_enum_connect(K4, 0, 4, 2)
    with pytest.raises(ParameterError):
        path_enum_connect(K4, 0, 1, -1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(1, 4), st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_path_enum_soundness(n, d, seed, budget):
    if n * d % 2:
        return
    r = random_regular(n, d, seed)
    rng = np.random.default_rng(seed)
    s, t = (int(x) for x in rng.integers(n, size=2))
    if path_enum_connect(r, s, t, budget).connected:
        assert same_component(to_multigraph(r), s, t)


def test_path_enum_workspace_affine_in_budget():
    # a single edge: enumeration always reaches full depth
    r = RotationMap(np.array([[1], [0], [3], [2]]), np.zeros((4, 1), dtype=np.int64))
    budgets = list(range(4, 25))
    peaks = [path_enum_connect(r, 0, 2, b).peak_words for b in budgets]
    assert np.allclose(np.diff(peaks), 2)


def test_log_budget():
    assert log_budget(1, 2) == 0
    assert log_budget(1024, 2) == 20
    assert log_budget(4 ** 40, 1.5) == 120


def test_calibrated_constant_is_reproduced():
    sizes = [(8, 7, 40), (16, 10, 40), (32, 12, 40), (64, 14, 40), (128, 16, 20)]
    instances = [find_expander(n, d, 0.5, derive_seed(2026, n, i), 200)[0]
                 for n, d, count in sizes for i in range(count)]
    assert calibrate_budget_constant(instances, 3, 7) <= DEFAULT_BUDGET_C


# --- oracle ----------------------------------------------------------------


def test_oracle_examples():
    g = MultiGraph(3, ((0, 1), (1, 2)))
    assert oracle_connect(g, 0, 2).connected
    assert oracle_connect(g, 0, 0).connected
    assert not oracle_connect(MultiGraph(3, ((0, 1),)), 0, 2).connected
    with pytest.raises(ParameterError):
        oracle_connect(g, 0, 3)


# --- lazy oracles ----------------------------------------------------------


def test_regularized_oracle_matches_table():
    g = MultiGraph(4, ((0, 1), (1, 2), (2, 2), (0, 1)))
    assert materialized(RegularizedOracle(g, 5)) == regularize(g, 5)


def test_power_and_dsquare_oracles_match_tables():
    g = MultiGraph(3, ((0, 1), (1, 2)))
    base = RegularizedOracle(g, 4)
    table = regularize(g, 4)
    assert materialized(PowerOracle(base, 3)) == power(table, 3)
    assert materialized(DerandSquareOracle(base, H4)) == derand_square(table, H4)


# --- pipelines -------------------------------------------------------------


def test_reingold_trivial_cases():
    g = MultiGraph(3, ())
    assert reingold_connect(g, 1, 1, SMALL, H4).connected
    assert not reingold_connect(MultiGraph(2, ()), 0, 1, SMALL, H4).connected


@pytest.mark.parametrize("edges,s,t", [
    (((0, 1),), 0, 1),
    (((0, 1), (1, 2)), 0, 2),
    (((0, 0), (1, 2)), 2, 1),
])
def test_reingold_small_connected(edges, s, t):
    g = MultiGraph(3, edges)
    verdict = reingold_connect(g, s, t, SMALL, H4)
    assert verdict.connected == same_component(g, s, t)
    assert verdict.method == "reingold"


def test_reingold_small_disconnected():
    g = MultiGraph(2, ((0, 0), (1, 1)))
    verdict = reingold_connect(g, 0, 1, SMALL, H4, max_queries=10**6)
    assert not verdict.connected
    assert verdict.path_len_budget == log_budget(16, DEFAULT_BUDGET_C)


def test_reingold_default_level_is_transform_length():
    g = MultiGraph(2, ((0, 1),))
    v = reingold_connect(g, 0, 0, TransformParams(2, 2, 1), H4)
    # transform_length(4, 4) = 2 * ceil(log2 64) = 12 iterations
    assert v.connected and v.queries == 0
    oracle = TransformOracle(regularize(g, 4), H4, TransformParams(2, 2, 1))
    assert oracle.level == 12


def test_reingold_allocates_no_level_sized_block():
    # the largest single allocation is the vertex register pair, linear in l
    g = MultiGraph(2, ((0, 1),))
    blocks = []
    for l in (1, 2, 3, 4):
        oracle = TransformOracle(RegularizedOracle(g, 4), H4, TransformParams(2, 2, 1, l))
        meter = WorkspaceMeter()
        path_enum_connect(oracle, oracle.canonical(0), oracle.canonical(2), 3, meter)
        blocks.append(meter.largest_block)
    assert np.all(np.diff(blocks) == 2 * SMALL.k)


def test_rv_bookkeeping_and_trivial_cases():
    g = MultiGraph(2, ((0, 1),))
    schedule = build_rv_schedule(2, [0.99, 0.999], 0, RV_BASE_DEGREE)
    oracle = rv_oracle(g, schedule)
    assert oracle.d == RV_BASE_DEGREE * 2 * 2
    assert rv_connect(g, 0, 1, 2, [0.99], 1).connected
    assert rv_connect(g, 1, 1, 2, [0.99], 1).connected
    assert not rv_connect(MultiGraph(2, ()), 0, 1, 2, [], 0).connected
    with pytest.raises(ParameterError):
        rv_connect(g, 0, 1, 2, [0.99], 2)


def test_rv_power_base():
    g = MultiGraph(2, ((0, 1),))
    schedule = build_rv_schedule(4, [0.9], 0, RV_BASE_DEGREE ** 2)
    oracle = rv_oracle(g, schedule, q=2)
    assert oracle.d == RV_BASE_DEGREE ** 2 * 4
    assert rv_connect(g, 0, 1, 4, [0.9], 1, q=2, schedule=schedule).connected


def test_rv_iteration_obeys_dsquare_bound():
    g = MultiGraph(3, ((0, 1), (1, 2)))
    g0 = regularize(g, RV_BASE_DEGREE)
    h, spec = certified_base(RV_BASE_DEGREE, 2, 0.99, 0)
    g1 = derand_square(g0, h)
    assert lambda_abs2(g1) <= dsquare_bound(lambda_abs2(g0), spec.alpha) + 1e-7
