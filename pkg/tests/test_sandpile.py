import random

import pytest
from hypothesis import given, settings

from gparking.errors import CapacityError, ValidationError
from gparking.exact import determinant
from gparking.graph import complete_graph, example_graph, spanning_tree_count, truncated_laplacian
from gparking.parking import enumerate_g_parking
from gparking.sandpile import (
    avalanche,
    dual_config,
    graph_toppling,
    is_allowed,
    is_allowed_burning,
    is_recurrent_by_definition,
    is_stable,
    max_stable,
    parking_bijection_check,
    parking_duality,
    potential,
    recurrent_class,
    sandpile_group,
    stabilize,
    stable_configs,
    validate_toppling,
)
from test_graph import digraphs

NEG_COLUMN = [[1, -1], [-2, 3]]


def test_validate_examples():
    k4 = validate_toppling(truncated_laplacian(complete_graph(3)))
    assert k4.row_sums_nonneg and k4.col_sums_nonneg
    assert validate_toppling([[1, -2], [0, 1]]).n == 2
    with pytest.raises(ValidationError, match="minor"):
        validate_toppling([[1, -2], [-2, 1]])
    with pytest.raises(ValidationError, match="off-diagonal"):
        validate_toppling([[1, 1], [0, 1]])
    with pytest.raises(ValidationError):
        validate_toppling([[1, 0]])
    with pytest.raises(CapacityError):
        validate_toppling([[1 if i == j else 0 for j in range(13)] for i in range(13)])


def test_negative_column_matrix_is_valid():
    d = validate_toppling(NEG_COLUMN)
    assert d.row_sums_nonneg and not d.col_sums_nonneg


def test_stabilize_examples():
    d = validate_toppling([[1]])
    assert stabilize(d, (3,)) == ((0,), (3,))
    k4 = graph_toppling(complete_graph(3))
    assert stabilize(k4, (1, 0, 2)) == ((1, 0, 2), (0, 0, 0))
    with pytest.raises(ValidationError):
        stabilize(k4, (1, -1, 0))


def test_potential_is_positive():
    for d in (graph_toppling(example_graph()), validate_toppling(NEG_COLUMN)):
        assert all(h > 0 for h in potential(d))


def test_avalanche_examples():
    d = validate_toppling([[1]])
    assert avalanche(d, (0,), 0) == (0,)
    k4 = graph_toppling(complete_graph(3))
    top = max_stable(k4)
    for i in range(3):
        u = list(top)
        u[i] += 1
        assert stabilize(k4, u)[1][i] >= 1
    with pytest.raises(ValidationError):
        avalanche(k4, (3, 0, 0), 0)


def _random_matrices(rng, count):
    out = [graph_toppling(example_graph()), graph_toppling(complete_graph(3)), validate_toppling(NEG_COLUMN)]
    while len(out) < count:
        n = rng.randint(1, 3)
        m = [[-rng.randint(0, 2) if i != j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            m[i][i] = -sum(m[i]) + rng.randint(0, 2) + (1 if rng.random() < 0.5 else 0)
        try:
            out.append(validate_toppling(m))
        except ValidationError:
            pass
    return out


def test_stabilization_order_independence(rng):
    for d in _random_matrices(rng, 20):
        u = [rng.randint(0, 3 * d.diag(i)) for i in range(d.n)]
        expected = stabilize(d, u)
        for trial in range(5):
            assert stabilize(d, u, random.Random(rng.random())) == expected


def test_avalanches_commute(rng):
    for d in _random_matrices(rng, 8):
        for u in stable_configs(d):
            for i in range(d.n):
                for j in range(i + 1, d.n):
                    assert avalanche(d, avalanche(d, u, i), j) == avalanche(d, avalanche(d, u, j), i)


def test_recurrent_class_sizes(rng):
    assert recurrent_class(validate_toppling([[1]])) == [(0,)]
    assert len(recurrent_class(graph_toppling(example_graph()))) == 8
    assert len(recurrent_class(graph_toppling(complete_graph(3)))) == 16
    for d in _random_matrices(rng, 20):
        rec = recurrent_class(d)
        assert len(rec) == determinant(d.delta) == sandpile_group(d).order


def test_recurrent_configurations_are_allowed(rng):
    for d in _random_matrices(rng, 20):
        rec = set(recurrent_class(d))
        assert all(is_allowed(d, u) for u in rec)
        allowed = {u for u in stable_configs(d) if is_allowed(d, u)}
        assert rec <= allowed
        if d.col_sums_nonneg:
            assert rec == allowed


def test_negative_column_recurrent_subset_allowed():
    d = validate_toppling(NEG_COLUMN)
    rec = set(recurrent_class(d))
    allowed = {u for u in stable_configs(d) if is_allowed(d, u)}
    assert rec <= allowed and len(rec) == determinant(NEG_COLUMN)
    assert rec == {(0, 2)} and allowed == {(0, 1), (0, 2)}


def test_recurrence_by_definition():
    for d in (graph_toppling(example_graph()), validate_toppling(NEG_COLUMN)):
        rec = set(recurrent_class(d))
        for u in stable_configs(d):
            assert is_recurrent_by_definition(d, u) == (u in rec)


def test_dual_config():
    d = graph_toppling(example_graph())
    assert dual_config(d, max_stable(d)) == (0, 0, 0)
    for u in stable_configs(d):
        assert dual_config(d, dual_config(d, u)) == u
    with pytest.raises(ValidationError):
        dual_config(d, (3, 0, 0))


def test_allowed_examples():
    d = graph_toppling(example_graph())
    assert is_allowed(d, max_stable(d))
    assert not is_allowed(d, (0, 0, 0))
    for b in enumerate_g_parking(example_graph()):
        assert is_allowed(d, dual_config(d, b))


def test_allowed_matches_burning(rng):
    for d in _random_matrices(rng, 15):
        for u in stable_configs(d):
            assert is_allowed(d, u) == is_allowed_burning(d, u)


def test_group_invariant_factors():
    assert sandpile_group(graph_toppling(example_graph())).nontrivial == (8,)
    k4 = sandpile_group(graph_toppling(complete_graph(3)))
    assert k4.order == 16 and k4.nontrivial == (4, 4)


def test_parking_duality_named_graphs():
    report = parking_duality(example_graph())
    assert report.match and report.recurrent == report.parking == 8
    k4 = parking_duality(complete_graph(3))
    assert k4.match and k4.parking == 16
    assert is_stable(graph_toppling(example_graph()), (2, 1, 2))


@settings(max_examples=40)
@given(digraphs(max_n=3, max_mult=2))
def test_parking_duality_random_digraphs(g):
    if spanning_tree_count(g) == 0:
        return
    assert parking_bijection_check(g)
