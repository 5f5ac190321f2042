"""Rooted multigraphs, Laplacians and spanning-tree statistics.

Vertices are 0..n with 0 the root.  A digraph is its adjacency matrix;
an undirected graph is a digraph with symmetric adjacency, and for the
statistics that need an edge ordering it is also available as an
:class:`EdgeList`.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, ValidationError
from .exact import determinant

MAX_EDGES = 24


class _DSU:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Digraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if self.n < 0 or len(adj) != self.n + 1 or any(len(r) != self.n + 1 for r in adj):
            raise ValidationError(f"adjacency must be {self.n + 1}x{self.n + 1}")
        if any(x < 0 for r in adj for x in r):
            raise ValidationError("adjacency entries must be non-negative")

    @classmethod
    def from_matrix(cls, adjacency: Sequence[Sequence[int]]) -> "Digraph":
        return cls(len(adjacency) - 1, tuple(map(tuple, adjacency)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Digraph":
        """Undirected multigraph from an edge list; repeated pairs are parallel edges."""
        a = [[0] * (n + 1) for _ in range(n + 1)]
        for i, j in edges:
            if not (0 <= i <= n and 0 <= j <= n):
                raise ValidationError(f"edge ({i},{j}) out of range for n={n}")
            a[i][j] += 1
            if i != j:
                a[j][i] += 1
        return cls.from_matrix(a)

    @property
    def symmetric(self) -> bool:
        a = self.adjacency
        return all(a[i][j] == a[j][i] for i in range(self.n + 1) for j in range(i))

    @property
    def edge_count(self) -> int:
        """Undirected edge count for symmetric graphs, arc count otherwise."""
        a = self.adjacency
        m = self.n + 1
        if self.symmetric:
            return sum(a[i][j] for i in range(m) for j in range(i, m))
        return sum(a[i][j] for i in range(m) for j in range(m))

    def out_degree_outside(self, subset: int, i: int) -> int:
        """d_I(i): edges from i to vertices outside I (I a bitmask over 1..n)."""
        row = self.adjacency[i]
        return sum(row[j] for j in range(self.n + 1) if j == 0 or not subset >> (j - 1) & 1)

    def transpose(self) -> "Digraph":
        return Digraph.from_matrix([list(c) for c in zip(*self.adjacency)])

    def to_json(self) -> dict:
        return {"n": self.n, "adjacency": [list(r) for r in self.adjacency]}


@dataclass(frozen=True)
class EdgeList:
    """Undirected multigraph with a fixed linear order on its edges.

    ``edges[k] = (i, j, idx)`` with ``i <= j``; ``idx`` numbers parallel
    copies of the same pair.  Position in the tuple is the edge order.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_digraph(cls, g: Digraph) -> "EdgeList":
        if not g.symmetric:
            raise ValidationError("edge lists need a symmetric adjacency matrix")
        a = g.adjacency
        edges = [
            (i, j, k)
            for i in range(g.n + 1)
            for j in range(i, g.n + 1)
            for k in range(a[i][j])
        ]
        return cls(g.n, tuple(edges))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "EdgeList":
        """Keep the given order; canonicalise each pair to i <= j."""
        seen: Counter = Counter()
        edges = []
        for i, j in pairs:
            i, j = min(i, j), max(i, j)
            edges.append((i, j, seen[i, j]))
            seen[i, j] += 1
        return cls(n, tuple(edges))

    def reordered(self, order: Sequence[int]) -> "EdgeList":
        if sorted(order) != list(range(len(self.edges))):
            raise ValidationError("not a permutation of the edges")
        return EdgeList(self.n, tuple(self.edges[k] for k in order))

    def to_digraph(self) -> Digraph:
        return Digraph.from_edges(self.n, [(i, j) for i, j, _ in self.edges])

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SpanningTree:
    """Oriented spanning tree.

    ``parent[v]`` is the head of the out-edge of v (``parent[0] == -1``).
    For trees of an :class:`EdgeList`, ``edges`` holds the edge indices;
    for digraph trees ``arcs`` holds the multiplicity index of each out-edge.
    """

    parent: tuple[int, ...]
    edges: frozenset[int] | None = None
    arcs: tuple[int, ...] | None = field(default=None, compare=False)


def _guard(count: int, limit: int | None, what: str) -> None:
    if limit is not None and count > limit:
        raise CapacityError(f"{what}: {count} edges exceeds guard {limit}")


def truncated_laplacian(g: Digraph) -> list[list[int]]:
    a = g.adjacency
    n = g.n
    return [
        [
            sum(a[i][r] for r in range(n + 1) if r != i) if i == j else -a[i][j]
            for j in range(1, n + 1)
        ]
        for i in range(1, n + 1)
    ]


def spanning_tree_count(g: Digraph) -> int:
    return determinant(truncated_laplacian(g))


def enumerate_spanning_trees(g: Digraph, max_edges: int | None = MAX_EDGES) -> list[SpanningTree]:
    """All oriented spanning trees, ordered by their out-edge choices.

    Every non-root vertex picks one out-edge (target, copy); a choice is
    a tree when following out-edges from every vertex reaches the root.
    """
    _guard(g.edge_count, max_edges, "spanning tree enumeration")
    n = g.n
    a = g.adjacency
    options = [
        [(j, k) for j in range(n + 1) if j != v for k in range(a[v][j])]
        for v in range(1, n + 1)
    ]
    trees = []
    for choice in itertools.product(*options):
        parent = (-1,) + tuple(j for j, _ in choice)
        if _reaches_root(parent):
            trees.append(SpanningTree(parent, arcs=tuple(k for _, k in choice)))
    return trees


def _reaches_root(parent: Sequence[int]) -> bool:
    n = len(parent) - 1
    good = [False] * (n + 1)
    good[0] = True
    for v in range(1, n + 1):
        path = []
        w = v
        while not good[w]:
            if w in path:
                return False
            path.append(w)
            w = parent[w]
        for x in path:
            good[x] = True
    return True


def tree_edges(g: EdgeList, max_edges: int | None = MAX_EDGES) -> list[frozenset[int]]:
    """Edge-index sets of all spanning trees of an undirected graph."""
    _guard(len(g.edges), max_edges, "spanning tree enumeration")
    out = []
    for combo in itertools.combinations(range(len(g.edges)), g.n):
        dsu = _DSU(g.n + 1)
        if all(dsu.union(g.edges[k][0], g.edges[k][1]) for k in combo):
            out.append(frozenset(combo))
    return out


def undirected_spanning_trees(g: EdgeList, max_edges: int | None = MAX_EDGES) -> list[SpanningTree]:
    return [SpanningTree(_parents_from_edges(g, es), es) for es in tree_edges(g, max_edges)]


def _parents_from_edges(g: EdgeList, es: Iterable[int]) -> tuple[int, ...]:
    nbrs: list[list[int]] = [[] for _ in range(g.n + 1)]
    for k in es:
        i, j, _ = g.edges[k]
        nbrs[i].append(j)
        nbrs[j].append(i)
    parent = [-2] * (g.n + 1)
    parent[0] = -1
    stack = [0]
    while stack:
        v = stack.pop()
        for w in nbrs[v]:
            if parent[w] == -2:
                parent[w] = v
                stack.append(w)
    return tuple(parent)


def _forest_path_edges(g: EdgeList, es: frozenset[int], u: int, v: int) -> list[int] | None:
    """Edge indices on the path u..v inside the forest ``es``; None if unconnected."""
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(g.n + 1)]
    for k in es:
        i, j, _ = g.edges[k]
        nbrs[i].append((j, k))
        nbrs[j].append((i, k))
    via = {u: None}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y, k in nbrs[x]:
            if y not in via:
                via[y] = (x, k)
                stack.append(y)
    if v not in via:
        return None
    path = []
    x = v
    while via[x] is not None:
        x, k = via[x]
        path.append(k)
    return path


def _is_spanning_tree(g: EdgeList, es: frozenset[int]) -> bool:
    if len(es) != g.n or any(not 0 <= k < len(g.edges) for k in es):
        return False
    dsu = _DSU(g.n + 1)
    return all(dsu.union(g.edges[k][0], g.edges[k][1]) for k in es)


def _activity(g: EdgeList, forest: frozenset[int]) -> int:
    count = 0
    for k, (i, j, _) in enumerate(g.edges):
        if k in forest:
            continue
        if i == j:
            count += 1
            continue
        path = _forest_path_edges(g, forest, i, j)
        if path is not None and all(k < e for e in path):
            count += 1
    return count


def external_activity(g: EdgeList, t: SpanningTree | Iterable[int]) -> int:
    """Number of non-tree edges that are the smallest edge of their fundamental cycle."""
    es = t.edges if isinstance(t, SpanningTree) else frozenset(t)
    if es is None or not _is_spanning_tree(g, frozenset(es)):
        raise ValidationError("not a spanning tree of this edge list")
    return _activity(g, frozenset(es))


def activity_distribution(g: EdgeList, max_edges: int | None = MAX_EDGES) -> dict[int, int]:
    dist = Counter(_activity(g, es) for es in tree_edges(g, max_edges))
    return dict(sorted(dist.items()))


def tree_inversions(t: SpanningTree) -> int:
    """Pairs i > j with i on the path from j to the root."""
    parent = t.parent
    inv = 0
    for j in range(1, len(parent)):
        w = parent[j]
        while w > 0:
            if w > j:
                inv += 1
            w = parent[w]
    return inv


def inversion_distribution(trees: Iterable[SpanningTree]) -> dict[int, int]:
    return dict(sorted(Counter(tree_inversions(t) for t in trees).items()))


def _connected_without(g: EdgeList, removed: int) -> bool:
    dsu = _DSU(g.n + 1)
    comps = g.n + 1
    for k, (i, j, _) in enumerate(g.edges):
        if not removed >> k & 1 and dsu.union(i, j):
            comps -= 1
    return comps == 1


def enumerate_slim_subgraphs(g: EdgeList, max_edges: int | None = MAX_EDGES) -> list[frozenset[int]]:
    """Edge subsets H whose complement is connected on all n+1 vertices.

    Ordered by size, then lexicographically by edge index.
    """
    m = len(g.edges)
    _guard(m, max_edges, "slim subgraph enumeration")
    out = []
    for size in range(m + 1):
        for combo in itertools.combinations(range(m), size):
            mask = sum(1 << k for k in combo)
            if _connected_without(g, mask):
                out.append(frozenset(combo))
    return out


@dataclass(frozen=True)
class Subforest:
    edges: frozenset[int]
    activity: int


def enumerate_subforests(g: EdgeList, max_edges: int | None = MAX_EDGES) -> list[Subforest]:
    """All acyclic edge subsets with their external activity, ordered like slim subgraphs."""
    m = len(g.edges)
    _guard(m, max_edges, "subforest enumeration")
    out = []
    for size in range(min(m, g.n) + 1):
        for combo in itertools.combinations(range(m), size):
            dsu = _DSU(g.n + 1)
            if all(dsu.union(g.edges[k][0], g.edges[k][1]) for k in combo):
                es = frozenset(combo)
                out.append(Subforest(es, _activity(g, es)))
    return out


def forest_inversions(g: EdgeList, forest: Iterable[int]) -> int:
    """Inversions of a forest: i > j with i on the path from j to the minimal vertex of its component."""
    es = frozenset(forest)
    nbrs: list[list[int]] = [[] for _ in range(g.n + 1)]
    for k in es:
        i, j, _ = g.edges[k]
        nbrs[i].append(j)
        nbrs[j].append(i)
    parent = [-2] * (g.n + 1)
    for root in range(g.n + 1):
        if parent[root] != -2:
            continue
        parent[root] = -1
        stack = [root]
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if parent[w] == -2:
                    parent[w] = v
                    stack.append(w)
    inv = 0
    for j in range(g.n + 1):
        w = parent[j]
        while w >= 0:
            if w > j:
                inv += 1
            w = parent[w]
    return inv


def delete_edge(g: EdgeList, k: int) -> EdgeList:
    return EdgeList(g.n, g.edges[:k] + g.edges[k + 1:])


def contract_edge(g: EdgeList, k: int) -> EdgeList:
    """Contract edge k = (i, j), i < j: j merges into i and labels above j shift down.

    Parallel edges become loops; all of them are kept.
    """
    i, j, _ = g.edges[k]
    if i == j:
        raise ValidationError("cannot contract a loop")

    def relabel(v: int) -> int:
        if v == j:
            v = i
        return v - 1 if v > j else v

    pairs = [(relabel(a), relabel(b)) for e, (a, b, _) in enumerate(g.edges) if e != k]
    return EdgeList.from_pairs(g.n - 1, pairs)


def make_complete_kl(n: int, k: int, l: int) -> Digraph:
    """K_{n+1}^{k,l}: multiplicity k between non-root vertices, l to the root."""
    if n < 1 or k < 0 or l < 0:
        raise ValidationError("need n >= 1 and k, l >= 0")
    a = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                a[i][j] = l if 0 in (i, j) else k
    return Digraph.from_matrix(a)


def complete_graph(n: int) -> Digraph:
    """K_{n+1} on vertices 0..n."""
    return make_complete_kl(n, 1, 1)


def example_graph() -> Digraph:
    """The running four-vertex example: K_4 without the edge 0-2."""
    return Digraph.from_edges(3, [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)])


def res4_graph() -> Digraph:
    """K_4 without the edge 1-3."""
    return Digraph.from_edges(3, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])


def graph_from_json(data: dict | str) -> Digraph:
    if isinstance(data, str):
        data = json.loads(data)
    if "adjacency" in data:
        g = Digraph.from_matrix(data["adjacency"])
        if "n" in data and data["n"] != g.n:
            raise ValidationError("n disagrees with the adjacency matrix")
        return g
    if "edges" in data:
        edges = data["edges"]
        n = data.get("n")
        if n is None:
            n = max((max(e) for e in edges), default=0)
        return Digraph.from_edges(n, edges)
    raise ValidationError("graph JSON needs 'adjacency' or 'edges'")
