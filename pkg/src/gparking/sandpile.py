"""Abelian sandpiles driven by a toppling matrix.

Sites are 0-based.  Toppling site i subtracts row i of the matrix from
the configuration; a configuration is stable when u_i < delta_ii for
every i.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .errors import CapacityError, InvariantViolation, ValidationError
from .exact import SmithForm, determinant, smith_normal_form, transpose
from .graph import Digraph, truncated_laplacian
from .parking import enumerate_g_parking

MAX_SITES = 12
MAX_STATES = 1 << 20

Config = tuple[int, ...]


@dataclass(frozen=True)
class TopplingMatrix:
    delta: tuple[tuple[int, ...], ...]
    row_sums_nonneg: bool
    col_sums_nonneg: bool

    @property
    def n(self) -> int:
        return len(self.delta)

    def diag(self, i: int) -> int:
        return self.delta[i][i]

    def to_json(self) -> dict:
        return {
            "delta": [list(r) for r in self.delta],
            "row_sums_nonneg": self.row_sums_nonneg,
            "col_sums_nonneg": self.col_sums_nonneg,
        }


def validate_toppling(delta: Sequence[Sequence[int]]) -> TopplingMatrix:
    """Accept an integer matrix with non-positive off-diagonal entries whose
    principal minors are all positive."""
    n = len(delta)
    if n == 0 or any(len(row) != n for row in delta):
        raise ValidationError("toppling matrix must be square and nonempty")
    if n > MAX_SITES:
        raise CapacityError(f"{n} sites exceeds the {MAX_SITES}-site principal minor guard")
    for i in range(n):
        for j in range(n):
            if i != j and delta[i][j] > 0:
                raise ValidationError(f"positive off-diagonal entry delta[{i}][{j}] = {delta[i][j]}")
    for size in range(1, n + 1):
        for sub in itertools.combinations(range(n), size):
            minor = determinant([[delta[i][j] for j in sub] for i in sub])
            if minor <= 0:
                raise ValidationError(f"principal minor on sites {list(sub)} is {minor} <= 0")
    rows = all(sum(row) >= 0 for row in delta)
    cols = all(sum(delta[i][j] for i in range(n)) >= 0 for j in range(n))
    return TopplingMatrix(tuple(tuple(int(x) for x in row) for row in delta), rows, cols)


def graph_toppling(g: Digraph) -> TopplingMatrix:
    """The transposed truncated Laplacian of g."""
    return validate_toppling(transpose(truncated_laplacian(g)))


def _solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c])
        m[c], m[p] = m[p], m[c]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def potential(d: TopplingMatrix) -> list[Fraction]:
    """h with delta h = (1,...,1); each toppling lowers h.u by exactly 1."""
    return _solve(d.delta, [1] * d.n)


def _check_config(d: TopplingMatrix, u: Sequence[int]) -> Config:
    if len(u) != d.n:
        raise ValidationError(f"configuration has {len(u)} sites, matrix has {d.n}")
    if any(x < 0 for x in u):
        raise ValidationError("particle counts must be non-negative")
    return tuple(int(x) for x in u)


def is_stable(d: TopplingMatrix, u: Sequence[int]) -> bool:
    return all(u[i] < d.diag(i) for i in range(d.n))


def _require_stable(d: TopplingMatrix, u: Sequence[int]) -> Config:
    u = _check_config(d, u)
    if not is_stable(d, u):
        raise ValidationError(f"configuration {u} is not stable")
    return u


def stabilize(
    d: TopplingMatrix, u: Sequence[int], rng: random.Random | None = None
) -> tuple[Config, Config]:
    """Topple until stable; return (stable configuration, topplings per site).

    Without ``rng`` the lowest unstable site is toppled as often as it can
    be at once; with ``rng`` a random unstable site is toppled once per
    step.  The result does not depend on the choice.
    """
    cur = list(_check_config(d, u))
    counts = [0] * d.n
    h = potential(d)
    budget = 10 * int(sum(hi * x for hi, x in zip(h, cur))) + 10
    done = 0
    while True:
        unstable = [i for i in range(d.n) if cur[i] >= d.diag(i)]
        if not unstable:
            return tuple(cur), tuple(counts)
        if rng is None:
            i = unstable[0]
            times = cur[i] // d.diag(i)
        else:
            i = rng.choice(unstable)
            times = 1
        row = d.delta[i]
        for j in range(d.n):
            cur[j] -= times * row[j]
        counts[i] += times
        done += times
        if done > budget:
            raise InvariantViolation(f"stabilization exceeded {budget} topplings")


def avalanche(d: TopplingMatrix, u: Sequence[int], i: int) -> Config:
    """Add one particle at site i and stabilize."""
    u = list(_require_stable(d, u))
    if not 0 <= i < d.n:
        raise ValidationError(f"site {i} out of range")
    u[i] += 1
    return stabilize(d, u)[0]


def is_allowed(d: TopplingMatrix, u: Sequence[int]) -> bool:
    """Every nonempty I has j in I with u_j >= sum_{i in I, i != j} (-delta_ij)."""
    u = _check_config(d, u)
    n = d.n
    for mask in range(1, 1 << n):
        sites = [i for i in range(n) if mask >> i & 1]
        if not any(u[j] >= sum(-d.delta[i][j] for i in sites if i != j) for j in sites):
            return False
    return True


def is_allowed_burning(d: TopplingMatrix, u: Sequence[int]) -> bool:
    """Same as :func:`is_allowed`, by repeatedly removing a site that passes."""
    u = _check_config(d, u)
    left = set(range(d.n))
    while left:
        j = next((j for j in sorted(left) if u[j] >= sum(-d.delta[i][j] for i in left if i != j)), None)
        if j is None:
            return False
        left.remove(j)
    return True


def dual_config(d: TopplingMatrix, u: Sequence[int]) -> Config:
    u = _require_stable(d, u)
    return tuple(d.diag(i) - 1 - u[i] for i in range(d.n))


def max_stable(d: TopplingMatrix) -> Config:
    return tuple(d.diag(i) - 1 for i in range(d.n))


def stable_configs(d: TopplingMatrix) -> list[Config]:
    _guard_states(d)
    return list(itertools.product(*(range(d.diag(i)) for i in range(d.n))))


def _guard_states(d: TopplingMatrix) -> None:
    states = 1
    for i in range(d.n):
        states *= d.diag(i)
    if states > MAX_STATES:
        raise CapacityError(f"{states} stable configurations exceeds the {MAX_STATES} guard")


def recurrent_class(d: TopplingMatrix) -> list[Config]:
    """The closed class of the avalanche dynamics, sorted.

    Explore the avalanche graph from the maximal stable configuration
    and take its terminal strongly connected component, which must be
    unique and have det(delta) elements.
    """
    _guard_states(d)
    start = max_stable(d)
    graph = nx.DiGraph()
    graph.add_node(start)
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for i in range(d.n):
                v = avalanche(d, u, i)
                if v not in graph:
                    nxt.append(v)
                graph.add_edge(u, v)
        frontier = nxt
    terminal = list(nx.attracting_components(graph))
    if len(terminal) != 1:
        raise InvariantViolation(f"{len(terminal)} terminal classes in the avalanche graph")
    rec = sorted(terminal[0])
    det = determinant(d.delta)
    if len(rec) != det:
        raise InvariantViolation(f"{len(rec)} recurrent configurations but det = {det}")
    return rec


def is_recurrent_by_definition(d: TopplingMatrix, u: Sequence[int], bound: int | None = None) -> bool:
    """For every site i some 1 <= c <= bound has A_i^c u = u (bound: det delta)."""
    u = _require_stable(d, u)
    if bound is None:
        bound = determinant(d.delta)
    for i in range(d.n):
        v = u
        for _ in range(bound):
            v = avalanche(d, v, i)
            if v == u:
                break
        else:
            return False
    return True


def sandpile_group(d: TopplingMatrix) -> SmithForm:
    return smith_normal_form(d.delta)


@dataclass(frozen=True)
class DualityReport:
    recurrent: int
    parking: int
    match: bool

    def to_json(self) -> dict:
        return {"recurrent": self.recurrent, "parking": self.parking, "match": self.match}


def parking_duality(g: Digraph) -> DualityReport:
    d = graph_toppling(g)
    duals = {dual_config(d, u) for u in recurrent_class(d)}
    parking = set(enumerate_g_parking(g))
    return DualityReport(len(duals), len(parking), duals == parking)


def parking_bijection_check(g: Digraph) -> bool:
    """Duals of recurrent configurations are exactly the G-parking functions."""
    return parking_duality(g).match
