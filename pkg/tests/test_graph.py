import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gparking.errors import CapacityError, ValidationError
from gparking.graph import (
    Digraph,
    EdgeList,
    SpanningTree,
    activity_distribution,
    complete_graph,
    contract_edge,
    delete_edge,
    enumerate_slim_subgraphs,
    enumerate_spanning_trees,
    enumerate_subforests,
    example_graph,
    external_activity,
    forest_inversions,
    graph_from_json,
    inversion_distribution,
    make_complete_kl,
    spanning_tree_count,
    truncated_laplacian,
    undirected_spanning_trees,
)
from oracles import count_trees_bruteforce


def digraphs(max_n=4, max_mult=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, max_mult), min_size=n + 1, max_size=n + 1), min_size=n + 1, max_size=n + 1
        )
    ).map(Digraph.from_matrix)


def undirected(max_n=3, max_mult=2):
    def build(n):
        pairs = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
        return st.lists(st.integers(0, max_mult), min_size=len(pairs), max_size=len(pairs)).map(
            lambda ms: Digraph.from_edges(n, [p for p, m in zip(pairs, ms) for _ in range(m)])
        )

    return st.integers(1, max_n).flatmap(build)


def test_example_graph_laplacian_and_trees():
    g = example_graph()
    assert truncated_laplacian(g) == [[3, -1, -1], [-1, 2, -1], [-1, -1, 3]]
    assert spanning_tree_count(g) == 8
    assert len(enumerate_spanning_trees(g)) == 8
    assert activity_distribution(EdgeList.from_digraph(g)) == {0: 4, 1: 3, 2: 1}


def test_complete_graph_counts():
    for n in range(1, 6):
        assert spanning_tree_count(complete_graph(n)) == (n + 1) ** (n - 1)


def test_complete_kl_counts():
    for n, k, l in [(2, 1, 2), (2, 2, 1), (3, 1, 2), (3, 2, 3)]:
        assert spanning_tree_count(make_complete_kl(n, k, l)) == l * (l + k * n) ** (n - 1)


def test_single_vertex_and_rootless():
    assert spanning_tree_count(Digraph.from_matrix([[0, 0], [3, 0]])) == 3
    assert spanning_tree_count(Digraph.from_matrix([[0, 1], [0, 0]])) == 0
    assert enumerate_spanning_trees(Digraph.from_matrix([[0, 1], [0, 0]])) == []


@given(digraphs())
def test_matrix_tree_theorem_against_enumeration(g):
    count = spanning_tree_count(g)
    assert count == len(enumerate_spanning_trees(g, max_edges=None))
    assert count == count_trees_bruteforce([list(r) for r in g.adjacency])


@given(undirected())
def test_undirected_trees_match_oriented_trees(g):
    el = EdgeList.from_digraph(g)
    assert len(undirected_spanning_trees(el)) == spanning_tree_count(g)
    assert sum(activity_distribution(el).values()) == spanning_tree_count(g)


@given(undirected(), st.randoms(use_true_random=False))
def test_activity_distribution_independent_of_edge_order(g, r):
    el = EdgeList.from_digraph(g)
    order = list(range(len(el)))
    r.shuffle(order)
    assert activity_distribution(el.reordered(order)) == activity_distribution(el)


def test_inversions_match_activity_for_complete_graphs():
    for n in range(1, 5):
        g = complete_graph(n)
        el = EdgeList.from_digraph(g)
        assert inversion_distribution(enumerate_spanning_trees(g)) == activity_distribution(el)


def test_tree_inversions_hand_example():
    # 0 <- 2 <- 1 : vertex 2 lies on the path from 1 to the root
    assert inversion_distribution([SpanningTree((-1, 2, 0))]) == {1: 1}


@given(undirected(max_n=3))
def test_deletion_contraction_tree_count(g):
    el = EdgeList.from_digraph(g)
    total = spanning_tree_count(g)
    for k, (i, j, _) in enumerate(el.edges):
        if i == j:
            continue
        parts = spanning_tree_count(delete_edge(el, k).to_digraph()) + spanning_tree_count(
            contract_edge(el, k).to_digraph()
        )
        assert parts == total


def test_external_activity_rejects_non_tree():
    el = EdgeList.from_digraph(example_graph())
    with pytest.raises(ValidationError):
        external_activity(el, [0, 1])


def test_loops_are_always_externally_active():
    el = EdgeList.from_pairs(1, [(0, 1), (1, 1)])
    assert activity_distribution(el) == {1: 1}


def test_slim_subgraphs_of_triangle():
    el = EdgeList.from_digraph(complete_graph(2))
    slim = enumerate_slim_subgraphs(el)
    assert slim == [frozenset(), frozenset({0}), frozenset({1}), frozenset({2})]


def test_slim_subgraphs_leave_a_spanning_tree():
    for g in (example_graph(), complete_graph(3)):
        el = EdgeList.from_digraph(g)
        assert all(len(h) <= len(el) - g.n for h in enumerate_slim_subgraphs(el))


def test_subforest_counts():
    assert len(enumerate_subforests(EdgeList.from_digraph(complete_graph(2)))) == 7
    assert len(enumerate_subforests(EdgeList.from_digraph(complete_graph(3)))) == 38


def test_forest_inversions_of_empty_forest():
    el = EdgeList.from_digraph(complete_graph(3))
    assert forest_inversions(el, []) == 0


def test_graph_json_roundtrip(tmp_path):
    g = example_graph()
    assert graph_from_json(json.dumps(g.to_json())) == g
    assert graph_from_json({"edges": [[0, 1], [0, 3], [1, 2], [1, 3], [2, 3]]}) == g
    with pytest.raises(ValidationError):
        graph_from_json({"nodes": 3})
    with pytest.raises(ValidationError):
        Digraph.from_matrix([[0, -1], [1, 0]])


def test_enumeration_guard():
    big = make_complete_kl(4, 3, 3)
    with pytest.raises(CapacityError):
        enumerate_spanning_trees(big)
    assert len(enumerate_spanning_trees(big, max_edges=None)) == spanning_tree_count(big)


def test_random_graph_edges_sorted(rng):
    g = Digraph.from_edges(3, [(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(6)])
    el = EdgeList.from_digraph(g)
    assert list(el.edges) == sorted(el.edges)
    assert isinstance(rng, random.Random)
