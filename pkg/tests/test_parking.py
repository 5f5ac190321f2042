import pytest
from hypothesis import given
from hypothesis import strategies as st

from gparking.errors import CapacityError, ValidationError
from gparking.exact import QPoly
from gparking.graph import Digraph, complete_graph, example_graph, make_complete_kl, spanning_tree_count
from gparking.parking import (
    burns,
    classical_parking,
    degree_series,
    descent_pattern_count,
    enumerate_almost_parking,
    enumerate_g_parking,
    enumerate_kl_parking,
    enumerate_rho_parking,
    is_g_parking,
    is_rho_parking,
    kl_rho,
    rho_hilbert_product,
)
from oracles import euler_zigzag, subset_parking
from test_graph import digraphs

EXAMPLE_PARKING = {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 2)}

RHO_TABLE = {
    (4, 2, 1): 25,
    (8, 5, 1): 142,
    (6, 4, 3): 153,
    (9, 5, 2): 290,
    (8, 5, 3): 306,
    (8, 6, 3): 351,
    (11, 7, 2): 506,
    (12, 8, 3): 855,
    (6, 4, 3, 2): 632,
    (9, 6, 4, 2): 2512,
    (8, 6, 5, 3): 2643,
    (8, 6, 5, 4): 2832,
    (8, 7, 5, 3): 3021,
    (9, 7, 6, 5): 4925,
    (11, 8, 6, 3): 7587,
    (12, 9, 7, 4): 12480,  # printed as 12460; enumeration, product and chain formulas all give 12480
    (9, 8, 6, 4, 2): 31472,
    (10, 9, 7, 5, 3): 65718,
}


def degree_functions(max_n=4, max_top=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.integers(1, max_top), min_size=n, max_size=n)
    ).map(lambda xs: tuple(sorted(xs, reverse=True)))


def test_example_graph_parking_functions():
    got = enumerate_g_parking(example_graph())
    assert set(got) == EXAMPLE_PARKING and len(got) == 8
    assert got == sorted(got)
    assert degree_series(got) == QPoly([1, 3, 4])


def test_classical_parking_counts():
    for n, expected in [(1, 1), (2, 3), (3, 16), (4, 125)]:
        assert len(enumerate_g_parking(complete_graph(n))) == expected
        assert len(classical_parking(n)) == expected
        assert set(classical_parking(n)) == set(enumerate_g_parking(complete_graph(n)))


def test_kl_parking_counts():
    for n, k, l in [(2, 1, 2), (2, 2, 1), (3, 1, 2), (2, 3, 2)]:
        vectors = enumerate_kl_parking(n, k, l)
        assert len(vectors) == l * (l + k * n) ** (n - 1)
        assert set(vectors) == set(enumerate_rho_parking(kl_rho(n, k, l)))


@given(digraphs(max_n=4, max_mult=2))
def test_parking_count_equals_tree_count(g):
    assert len(enumerate_g_parking(g)) == spanning_tree_count(g)


@given(digraphs(max_n=3, max_mult=2), st.lists(st.integers(0, 5), min_size=4, max_size=4))
def test_burning_equals_subset_definition(g, b):
    b = tuple(b[: g.n])
    adj = [list(r) for r in g.adjacency]
    assert burns(g, b) == is_g_parking(g, b) == subset_parking(adj, b)


def test_is_g_parking_validates_length():
    with pytest.raises(ValidationError):
        is_g_parking(example_graph(), (0, 0))
    with pytest.raises(ValidationError):
        is_g_parking(example_graph(), (0, -1, 0))


def test_rho_table_dimensions_by_product_formula():
    for rho, dim in RHO_TABLE.items():
        assert rho_hilbert_product(rho)(1) == dim


def test_rho_table_dimensions_by_enumeration():
    for rho, dim in RHO_TABLE.items():
        if len(rho) <= 4:
            assert len(enumerate_rho_parking(rho)) == dim


@given(degree_functions())
def test_product_formula_matches_enumeration(rho):
    assert rho_hilbert_product(rho) == degree_series(enumerate_rho_parking(rho))


def test_product_formula_small_cases():
    a, b = 5, 2
    q = QPoly.q_integer
    assert rho_hilbert_product((a, b)) == q(b) ** 2 + 2 * QPoly.monomial(b) * q(a - b) * q(b)


def test_rho_parking_edge_cases():
    assert enumerate_rho_parking((3, 0)) == []
    assert enumerate_rho_parking(()) == [()]
    assert is_rho_parking((2, 1), (1, 0))
    assert not is_rho_parking((2, 1), (1, 1))
    with pytest.raises(ValidationError):
        enumerate_rho_parking((1, 2))


def test_almost_parking_counts():
    assert len(enumerate_almost_parking(1)) == 2
    assert len(enumerate_almost_parking(2)) == 7
    assert len(enumerate_almost_parking(3)) == 38
    with pytest.raises(CapacityError):
        enumerate_almost_parking(7)


@given(degree_functions(max_n=5, max_top=7))
def test_signed_value_at_minus_one_counts_descent_patterns(rho):
    value = rho_hilbert_product(rho)(-1)
    assert (-1) ** (sum(rho) - len(rho)) * value == descent_pattern_count(rho)
    assert (value == 0) == (rho[-1] % 2 == 0)


def test_minus_one_value_for_staircase_is_alternating_count():
    for n in range(1, 7):
        rho = tuple(range(n, 0, -1))
        assert descent_pattern_count(rho) == euler_zigzag(n)
        assert abs(rho_hilbert_product(rho)(-1)) == euler_zigzag(n)


def test_descent_pattern_guard():
    with pytest.raises(CapacityError):
        descent_pattern_count(tuple(range(10, 0, -1)))


def test_subset_guard():
    g = make_complete_kl(13, 1, 1)
    with pytest.raises(CapacityError):
        enumerate_g_parking(g)
    assert isinstance(g, Digraph)
