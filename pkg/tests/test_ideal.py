import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gparking.catalog import res2_family, res3_family, res4_family
from gparking.deformation import random_monotone_family
from gparking.errors import CapacityError, InfiniteDimensionError, PreconditionError, ValidationError
from gparking.exact import QPoly
from gparking.graph import complete_graph, example_graph, make_complete_kl, spanning_tree_count
from gparking.ideal import (
    MonomialFamily,
    OrderIdealFamily,
    chain_lcm,
    chain_lcm_formula,
    check_conditions,
    dimension_chain_formula,
    divides,
    family_from_json,
    format_monomial,
    graph_family,
    hat_family,
    hilbert_numerator,
    kl_family,
    lcm,
    minimal_generators,
    rho_family,
    standard_basis,
    strictly_divides,
    subset_chains,
)
from oracles import brute_standard_monomials
from test_graph import digraphs


def monomials_of(f):
    return {format_monomial(m) for m in f.monomials}


def random_families(max_n=3):
    return st.tuples(st.integers(1, max_n), st.integers(0, 2**32 - 1)).map(
        lambda t: random_monotone_family(t[0], random.Random(t[1]))
    )


def test_monomial_helpers():
    assert format_monomial((2, 0, 1)) == "x1^2*x3"
    assert format_monomial((0, 0)) == "1"
    assert lcm((2, 0, 1), (1, 3, 0)) == (2, 3, 1)
    assert divides((1, 0), (1, 2)) and not divides((2, 0), (1, 2))
    assert strictly_divides((1, 1, 1), (2, 2, 2))
    assert not strictly_divides((1, 1, 1), (1, 2, 1))


def test_example_graph_family():
    f = graph_family(example_graph())
    assert monomials_of(f) == {"x1^3", "x2^2", "x3^3", "x1^2*x2", "x1^2*x3^2", "x2*x3^2", "x1*x3"}
    assert f[(1, 2, 3)] == (1, 0, 1)


def test_complete_graph_family_is_symmetric_power():
    f = graph_family(complete_graph(3))
    assert f == rho_family((3, 2, 1))
    assert f[(1, 2, 3)] == (1, 1, 1)
    assert kl_family(2, 1, 1) == rho_family((2, 1))


def test_one_vertex_family():
    from gparking.graph import Digraph

    f = graph_family(Digraph.from_matrix([[0, 0], [4, 0]]))
    assert f.monomials == [(4,)]


def test_hat_family_uses_minimal_index():
    f = hat_family(2)
    assert f[(1,)] == (3, 0) and f[(2,)] == (0, 3) and f[(1, 2)] == (2, 1)
    assert len(standard_basis(f)) == 7
    assert hat_family(3)[(2, 3)] == (0, 3, 2)


def test_conditions_for_complete_graph():
    report = check_conditions(graph_family(complete_graph(3)))
    assert report.strictly_monotone and report.generic and report.order


def test_example_graph_has_redundant_generator():
    report = check_conditions(graph_family(example_graph()))
    assert report.monotone
    assert not report["SM1"].passed
    assert report["SM1"].witness == ("{1,2,3}", "x1*x3", "{1,3}", "x1^2*x3^2")


def test_res3_is_strictly_monotone_but_not_generic():
    report = check_conditions(res3_family())
    assert report.strictly_monotone
    assert not report.generic
    a, b, var = report["GM"].witness
    assert {a, b} == {"x1^2*x2^2", "x2^2*x3"} and var == "x2"


def test_res4_family_generators():
    assert monomials_of(res4_family()) == {"x1^2", "x2^3", "x3^2", "x1*x2^2", "x2^2*x3", "x1^2*x3^2", "x1*x2*x3"}


def test_failing_conditions_have_witnesses():
    bad = MonomialFamily.from_dict(2, {(1,): (1, 1), (1, 2): (2, 2)})
    report = check_conditions(bad)
    assert not report["MM1"].passed and report["MM1"].witness == ("{1}", "x2")
    assert not report["MM2"].passed
    with pytest.raises(PreconditionError):
        hilbert_numerator(bad)


def test_mm3_failure():
    f = MonomialFamily.from_dict(2, {(1,): (2, 0), (2,): (0, 2)})
    assert not check_conditions(f)["MM3"].passed


def test_standard_basis_example_graph():
    basis = standard_basis(graph_family(example_graph()))
    assert basis.complete
    assert [format_monomial(m) for m in basis.monomials] == [
        "1", "x1", "x2", "x3", "x1^2", "x1*x2", "x2*x3", "x3^2"
    ]


def test_standard_basis_missing_singleton():
    f = MonomialFamily.from_dict(2, {(1,): (2, 0), (1, 2): (1, 1)})
    with pytest.raises(InfiniteDimensionError):
        standard_basis(f)
    basis = standard_basis(f, 5)
    assert not basis.complete
    assert all((0, c) in basis.monomials for c in range(6))
    with pytest.raises(InfiniteDimensionError):
        dimension_chain_formula(f)


def test_standard_basis_single_variable():
    f = MonomialFamily.from_dict(1, {(1,): (1,)})
    assert standard_basis(f).monomials == ((0,),)
    assert hilbert_numerator(MonomialFamily.from_dict(1, {(1,): (5,)})) == QPoly([1, 0, 0, 0, 0, -1])


def test_hilbert_numerators():
    num = hilbert_numerator(graph_family(example_graph()))
    assert num.divide_one_minus_q(3) == QPoly([1, 3, 4])
    k4 = hilbert_numerator(graph_family(complete_graph(3)))
    assert k4 == QPoly([1, 0, 0, -4, -3, 12, -6])


def test_dimension_chain_formula_examples():
    assert dimension_chain_formula(graph_family(example_graph())) == 8
    assert dimension_chain_formula(graph_family(complete_graph(3))) == 16
    assert dimension_chain_formula(rho_family((4, 2, 1))) == 25


def test_chain_lcm_examples():
    k4 = graph_family(complete_graph(3))
    assert chain_lcm(k4, [[1]]) == (3, 0, 0)
    assert chain_lcm(k4, [[1], [1, 2]]) == (3, 2, 0)
    top = chain_lcm(k4, [[1], [1, 2], [1, 2, 3]])
    assert top == (3, 2, 1) and sum(top) == 6
    with pytest.raises(ValidationError):
        chain_lcm(k4, [[1, 2], [1]])
    with pytest.raises(ValidationError):
        chain_lcm(k4, [])


@given(random_families())
def test_dimension_formula_equals_standard_basis(f):
    assert check_conditions(f).monotone
    basis = standard_basis(f)
    assert dimension_chain_formula(f) == len(basis)
    assert hilbert_numerator(f).divide_one_minus_q(f.n) == QPoly(basis.graded_dims())


@given(random_families())
def test_numerator_series_matches_brute_force(f):
    cap = 6
    direct = [0] * (cap + 1)
    for m in brute_standard_monomials(f.n, f.monomials, cap):
        direct[sum(m)] += 1
    assert hilbert_numerator(f).series_over_one_minus_q(f.n, cap) == direct


@given(random_families())
def test_chain_lcm_product_formula(f):
    for chain in subset_chains(f):
        assert chain_lcm_formula(f, chain) == chain_lcm(f, chain)


@given(digraphs(max_n=4, max_mult=3))
def test_graph_family_dimension_is_tree_count(g):
    f = graph_family(g)
    if f.has_all_singletons and all(f[1 << i][i] > 0 for i in range(g.n)):
        assert dimension_chain_formula(f) == spanning_tree_count(g)
    assert len(standard_basis(f)) == spanning_tree_count(g)


def _strict_family(n, rng):
    """Full-Sigma family with exponents strictly decreasing along inclusion."""
    nu = {}
    full = (1 << n) - 1
    for mask in sorted(range(1, full + 1), key=lambda m: -bin(m).count("1")):
        e = [0] * n
        for i in range(n):
            if mask >> i & 1:
                above = [nu[mask | 1 << j][i] for j in range(n) if not mask >> j & 1]
                e[i] = (max(above) if above else 0) + rng.randint(1, 2)
        nu[mask] = e
    return MonomialFamily(n, tuple((m, tuple(e)) for m, e in nu.items()))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_strict_exponent_drop_implies_generic_and_strict(n, seed):
    f = _strict_family(n, random.Random(seed))
    report = check_conditions(f)
    assert report.strictly_monotone and report.generic


def test_order_family_conditions():
    of = res3_family().to_order_family()
    assert isinstance(of, OrderIdealFamily)
    report = check_conditions(of)
    assert report.order and not report.generic and report["MM1"].passed is None
    assert hilbert_numerator(of) == hilbert_numerator(res3_family())


def test_order_family_rejects_cycles():
    with pytest.raises(ValidationError):
        OrderIdealFamily(1, ("a", "b"), ((0, 1), (1, 0)), ((1,), (2,)))


def test_family_json_roundtrip():
    f = res2_family()
    assert family_from_json(json.dumps(f.to_json())) == f
    of = res3_family().to_order_family()
    again = family_from_json(of.to_json())
    assert again.monomials == of.monomials and again.above == of.above
    with pytest.raises(ValidationError):
        family_from_json({"n": 2})


def test_family_validation():
    with pytest.raises(ValidationError):
        MonomialFamily(2, ((0, (1, 1)),))
    with pytest.raises(ValidationError):
        MonomialFamily(2, ((1, (1,)),))
    with pytest.raises(ValidationError):
        MonomialFamily(2, ((1, (1, 0)), (1, (2, 0))))
    with pytest.raises(ValidationError):
        rho_family((1, 2))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        graph_family(make_complete_kl(13, 1, 1))


def test_minimal_generators():
    assert minimal_generators([(1, 0), (2, 0), (1, 0), (0, 1)]) == [(1, 0), (0, 1)]
