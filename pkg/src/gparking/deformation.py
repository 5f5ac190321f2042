"""Deformed algebras: quotients by powers of linear forms and the
square-free algebra spanned by products over slim subgraphs.

Every dimension here is a count of monomials minus an exact matrix rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, InvariantViolation, PreconditionError, ValidationError
from .exact import compositions, count_monomials, fast_rank, multinomial
from .graph import (
    Digraph,
    EdgeList,
    activity_distribution,
    complete_graph,
    enumerate_slim_subgraphs,
    enumerate_subforests,
)
from .ideal import (
    Monomial,
    MonomialFamily,
    format_monomial,
    members,
    rho_family,
    standard_basis,
)
from .parking import degree_series, enumerate_almost_parking, kl_rho

MAX_MONOMIALS_PER_DEGREE = 20000


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Integer combination of monomials of one total degree in n variables."""

    n: int
    degree: int
    terms: dict[Monomial, int] = field(hash=False)

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            m = tuple(m)
            if len(m) != self.n or sum(m) != self.degree or any(e < 0 for e in m):
                raise ValidationError(f"monomial {m} does not have degree {self.degree} in {self.n} variables")
            if c:
                clean[m] = clean.get(m, 0) + int(c)
        object.__setattr__(self, "terms", {m: c for m, c in sorted(clean.items(), reverse=True) if c})

    @classmethod
    def from_monomial(cls, m: Monomial, coeff: int = 1) -> "HomogeneousPolynomial":
        return cls(len(m), sum(m), {tuple(m): coeff})

    def __mul__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if self.n != other.n:
            raise ValidationError("variable counts differ")
        out: dict[Monomial, int] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                m = tuple(x + y for x, y in zip(a, b))
                out[m] = out.get(m, 0) + c * d
        return HomogeneousPolynomial(self.n, self.degree + other.degree, out)

    def support(self) -> int:
        """Bitmask of the variables that occur."""
        mask = 0
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    mask |= 1 << i
        return mask

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            body = format_monomial(m)
            if body == "1":
                body = str(abs(c))
            elif abs(c) != 1:
                body = f"{abs(c)}*{body}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def linear_power(coeffs: Sequence[int], d: int) -> HomogeneousPolynomial:
    """(sum_i coeffs[i] x_i)^d by the multinomial expansion."""
    n = len(coeffs)
    live = [i for i in range(n) if coeffs[i]]
    terms = {}
    for comp in compositions(d, len(live)):
        m = [0] * n
        c = multinomial(comp)
        for i, e in zip(live, comp):
            m[i] = e
            c *= coeffs[i] ** e
        terms[tuple(m)] = c
    return HomogeneousPolynomial(n, d, terms)


def subset_power(n: int, mask: int, d: int) -> HomogeneousPolynomial:
    return linear_power([1 if mask >> i & 1 else 0 for i in range(n)], d)


# -- generator families ---------------------------------------------------------


Generators = list[tuple[int, HomogeneousPolynomial]]


def _require_symmetric(g: Digraph) -> None:
    if not g.symmetric:
        raise ValidationError("power-of-linear-form generators need an undirected (symmetric) graph")


def _boundary_size(g: Digraph, mask: int) -> int:
    """D_I: edges between I and its complement (the root counts as outside)."""
    return sum(g.out_degree_outside(mask, i + 1) for i in members(mask))


def power_generators(g: Digraph) -> Generators:
    """p_I = (sum_{i in I} x_i)^{D_I} for every nonempty I."""
    _require_symmetric(g)
    return [(mask, subset_power(g.n, mask, _boundary_size(g, mask))) for mask in range(1, 1 << g.n)]


def hat_power_generators(g: Digraph | int) -> Generators:
    """p_I = (sum_{i in I} x_i)^{D_I + 1}; an integer n means K_{n+1}."""
    if isinstance(g, int):
        g = complete_graph(g)
    _require_symmetric(g)
    return [(mask, subset_power(g.n, mask, _boundary_size(g, mask) + 1)) for mask in range(1, 1 << g.n)]


def rho_power_generators(rho: Sequence[int]) -> Generators:
    """p_I = (sum_{i in I} x_i)^{r rho_r}, r = |I|."""
    n = len(rho)
    return [
        (mask, subset_power(n, mask, len(members(mask)) * rho[len(members(mask)) - 1]))
        for mask in range(1, 1 << n)
    ]


def kl_power_generators(n: int, k: int, l: int) -> Generators:
    return rho_power_generators(kl_rho(n, k, l))


def _polys(gens: Iterable) -> list[HomogeneousPolynomial]:
    return [p[1] if isinstance(p, tuple) else p for p in gens]


# -- graded dimensions ------------------------------------------------------------


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]
    cap: int

    @property
    def total(self) -> int:
        return sum(self.dims)

    def trimmed(self) -> tuple[int, ...]:
        d = list(self.dims)
        while len(d) > 1 and d[-1] == 0:
            d.pop()
        return tuple(d)

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "cap": self.cap, "total": self.total}


def _monomial_index(n: int, k: int, bound: int) -> dict[Monomial, int]:
    count = count_monomials(k, n)
    if count > bound:
        raise CapacityError(f"{count} monomials in degree {k} exceeds the bound {bound}")
    return {m: j for j, m in enumerate(compositions(k, n))}


def quotient_graded_dims(
    gens: Iterable,
    cap: int,
    n: int | None = None,
    bound: int = MAX_MONOMIALS_PER_DEGREE,
) -> GradedDims:
    """Degree-by-degree dimension of K[x]/(gens) up to ``cap``.

    Degree k contributes (#monomials of degree k) - rank of the matrix of
    all x^a p with deg = k.  Once some degree is zero every higher degree
    is zero too, so the remaining entries are filled without computation.
    """
    polys = [p for p in _polys(gens)]
    if n is None:
        if not polys:
            raise ValidationError("need n when there are no generators")
        n = polys[0].n
    if any(p.n != n for p in polys):
        raise ValidationError("generators live in different polynomial rings")
    if cap < 0:
        raise ValidationError("cap must be >= 0")
    dims: list[int] = []
    for k in range(cap + 1):
        if dims and dims[-1] == 0:
            dims.append(0)
            continue
        index = _monomial_index(n, k, bound)
        rows = []
        for p in polys:
            if p.is_zero() or p.degree > k:
                continue
            for a in compositions(k - p.degree, n):
                row = [0] * len(index)
                for m, c in p.terms.items():
                    row[index[tuple(x + y for x, y in zip(a, m))]] = c
                rows.append(row)
        dims.append(len(index) - fast_rank(rows))
    return GradedDims(tuple(dims), cap)


def is_i_deformation(
    m: Monomial,
    p: HomogeneousPolynomial,
    variables: int | None = None,
    cap: int | None = None,
) -> bool:
    """Bounded check that monomials avoiding m plus the multiples of p form a
    basis of K[x_i : i in I] in every degree up to ``cap``.

    Multiples of p in degree k correspond to monomials divisible by m, so
    the combined rows are square; the test is that the block of x^a p on
    the columns divisible by m is nonsingular.  ``variables`` is the
    bitmask I (default: the variables of m and p).  A True answer is a
    verification up to the cap, not a proof for all degrees.
    """
    m = tuple(m)
    if len(m) != p.n:
        raise ValidationError("monomial and polynomial have different variable counts")
    if sum(m) != p.degree:
        raise ValidationError(f"degree mismatch: deg m = {sum(m)}, deg p = {p.degree}")
    support_m = sum(1 << i for i, e in enumerate(m) if e)
    if variables is None:
        variables = support_m | p.support()
    if (support_m | p.support()) & ~variables:
        raise ValidationError("m and p must only use the variables of I")
    idx = members(variables)
    r = len(idx)
    d = sum(m)
    if cap is None:
        cap = 2 * d + r
    if p.is_zero():
        return False
    local = {tuple(mono[i] for i in idx): c for mono, c in p.terms.items()}
    m_local = tuple(m[i] for i in idx)
    for k in range(d, cap + 1):
        shifts = list(compositions(k - d, r))
        cols = {tuple(x + y for x, y in zip(a, m_local)): j for j, a in enumerate(shifts)}
        rows = []
        for a in shifts:
            row = [0] * len(cols)
            for mono, c in local.items():
                prod = tuple(x + y for x, y in zip(a, mono))
                j = cols.get(prod)
                if j is not None:
                    row[j] = c
            rows.append(row)
        if fast_rank(rows) < len(cols):
            return False
    return True


@dataclass(frozen=True)
class Comparison:
    hilb_a: tuple[int, ...]
    hilb_b: tuple[int, ...]
    cap: int
    degenerate: bool = False

    @property
    def equal(self) -> bool:
        return self.hilb_a == self.hilb_b

    @property
    def first_gap_degree(self) -> int | None:
        return next((k for k, (a, b) in enumerate(zip(self.hilb_a, self.hilb_b)) if a != b), None)

    @property
    def dominated(self) -> bool:
        return all(a >= b for a, b in zip(self.hilb_a, self.hilb_b))

    def to_json(self) -> dict:
        out = {
            "hilb_a": list(self.hilb_a),
            "hilb_b": list(self.hilb_b),
            "equal": self.equal,
            "first_gap_degree": self.first_gap_degree,
            "total_a": sum(self.hilb_a),
            "total_b": sum(self.hilb_b),
            "cap": self.cap,
        }
        if self.degenerate:
            out["degenerate"] = True
        return out


def _pad(seq: Sequence[int], length: int) -> tuple[int, ...]:
    return tuple(list(seq[:length]) + [0] * (length - len(seq)))


def verify_span(
    f: MonomialFamily,
    gens: Iterable,
    cap: int | None = None,
    deformation_cap: int | None = None,
) -> Comparison:
    """Compare the graded dimensions of K[x]/(m_I) and K[x]/(p_I).

    Each p_I must pass :func:`is_i_deformation` against m_I.  The B side
    can never exceed the A side; if it does an InvariantViolation is
    raised, since that contradicts the spanning property of standard
    monomials.  The default cap is one past the top degree of A, which
    also checks that B vanishes there.
    """
    pairs = [g if isinstance(g, tuple) else (lab, g) for lab, g in zip(f.labels, gens)]
    by_label = dict(pairs)
    if set(by_label) != set(f.labels):
        raise ValidationError("deformation generators must be indexed by the family's labels")
    for mask in f.labels:
        if not is_i_deformation(f[mask], by_label[mask], mask, deformation_cap):
            raise PreconditionError(f"p_I is not an I-deformation of m_I for I = {mask_label(mask)}")
    basis = standard_basis(f, cap)
    if cap is None:
        if not basis.complete:
            raise PreconditionError("infinite-dimensional A: pass a cap")
        cap = max((sum(m) for m in basis.monomials), default=0) + 1
        basis = standard_basis(f, cap)
    a = _pad(basis.graded_dims(), cap + 1)
    b = quotient_graded_dims([by_label[m] for m in f.labels], cap, f.n).dims
    for k, (x, y) in enumerate(zip(a, b)):
        if y > x:
            raise InvariantViolation(f"deformed quotient is larger than the monomial one in degree {k}: {y} > {x}")
    return Comparison(a, b, cap)


def mask_label(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in members(mask)) + "}"


# -- square-free algebra and forests ------------------------------------------------


def _edge_form(n: int, i: int, j: int) -> HomogeneousPolynomial:
    """y_i - y_j in y_1..y_n with y_0 = 0."""
    terms: dict[Monomial, int] = {}
    for v, c in ((i, 1), (j, -1)):
        if v:
            e = [0] * n
            e[v - 1] = 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return HomogeneousPolynomial(n, 1, terms)


def slim_products(g: EdgeList) -> dict[int, list[HomogeneousPolynomial]]:
    """alpha_H = prod over edges of H of (y_i - y_j), grouped by |H|."""
    out: dict[int, list[HomogeneousPolynomial]] = {}
    one = HomogeneousPolynomial(g.n, 0, {(0,) * g.n: 1})
    for h in enumerate_slim_subgraphs(g):
        p = one
        for k in sorted(h):
            i, j, _ = g.edges[k]
            p = p * _edge_form(g.n, i, j)
        out.setdefault(len(h), []).append(p)
    return out


def cg_graded_dims(g: EdgeList) -> GradedDims:
    """dim of the span of {alpha_H : H slim, |H| = k} for each k."""
    groups = slim_products(g)
    top = max(groups, default=0)
    dims = []
    for k in range(top + 1):
        polys = groups.get(k, [])
        index = {m: j for j, m in enumerate(compositions(k, g.n))}
        rows = []
        for p in polys:
            row = [0] * len(index)
            for m, c in p.terms.items():
                row[index[m]] = c
            rows.append(row)
        dims.append(fast_rank(rows))
    return GradedDims(tuple(dims), top)


def activity_dims(g: EdgeList) -> tuple[int, ...]:
    """N^{|G|-n-k} for k = 0.. : spanning trees by external activity, reversed."""
    dist = activity_distribution(g)
    top = len(g.edges) - g.n
    return tuple(dist.get(top - k, 0) for k in range(top + 1))


def _connected_to_root(g: EdgeList) -> bool:
    seen = {0}
    stack = [0]
    nbrs: dict[int, list[int]] = {}
    for i, j, _ in g.edges:
        nbrs.setdefault(i, []).append(j)
        nbrs.setdefault(j, []).append(i)
    while stack:
        for w in nbrs.get(stack.pop(), []):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n + 1


def subforest_dims(g: EdgeList) -> tuple[int, ...]:
    """Number of subforests F with external activity |G| - |F| - k, by k."""
    counts: dict[int, int] = {}
    m = len(g.edges)
    for forest in enumerate_subforests(g):
        k = m - len(forest.edges) - forest.activity
        counts[k] = counts.get(k, 0) + 1
    return tuple(counts.get(k, 0) for k in range(max(counts) + 1))


@dataclass(frozen=True)
class ForestReport:
    comparison: Comparison
    almost_parking: tuple[int, ...] | None

    @property
    def consistent(self) -> bool:
        ok = self.comparison.equal
        if self.almost_parking is not None:
            ok = ok and self.almost_parking == self.comparison.hilb_b
        return ok

    def to_json(self) -> dict:
        out = self.comparison.to_json()
        out["subforests"] = out.pop("hilb_a")
        out["hilb_hat_b"] = out.pop("hilb_b")
        if self.almost_parking is not None:
            out["almost_parking"] = list(self.almost_parking)
        out["consistent"] = self.consistent
        return out


def forest_check(g: EdgeList, cap: int | None = None) -> ForestReport:
    """Hat quotient dimensions against subforests by activity and, for a
    complete graph, against almost parking functions by degree."""
    d = g.to_digraph()
    forests = subforest_dims(g)
    if cap is None:
        cap = len(forests)
    b = quotient_graded_dims(hat_power_generators(d), cap, g.n).dims
    length = cap + 1
    comparison = Comparison(_pad(forests, length), b, cap, degenerate=not _connected_to_root(g))
    almost = None
    if d == complete_graph(g.n):
        almost = _pad(degree_series(enumerate_almost_parking(g.n)).coeffs, length)
    return ForestReport(comparison, almost)


# -- random families and degree-function search ---------------------------------------


def random_monotone_family(n: int, rng: random.Random, max_step: int = 2) -> MonomialFamily:
    """Full-Sigma family with nu_I(i) weakly decreasing along inclusion and
    every singleton exponent positive."""
    full = (1 << n) - 1
    nu: dict[int, list[int]] = {}
    for mask in sorted(range(1, full + 1), key=lambda m: -bin(m).count("1")):
        e = [0] * n
        for i in members(mask):
            floor = max((nu[mask | 1 << j][i] for j in range(n) if not mask >> j & 1), default=0)
            e[i] = floor + rng.randint(0, max_step)
        if bin(mask).count("1") == 1 and e[members(mask)[0]] == 0:
            e[members(mask)[0]] = 1
        nu[mask] = e
    return MonomialFamily(n, tuple((mask, tuple(e)) for mask, e in nu.items()))


def _nonzero(rng: random.Random, bound: int = 5) -> int:
    return rng.choice([c for c in range(-bound, bound + 1) if c])


def random_power_deformation(f: MonomialFamily, rng: random.Random, attempts: int = 10) -> Generators:
    """p_I = (sum_{i in I} a_i x_i)^{deg m_I} with a_i drawn from [-5,5] minus 0,
    resampled until each passes the bounded deformation check."""
    out = []
    for mask in f.labels:
        m = f[mask]
        for _ in range(attempts):
            coeffs = [_nonzero(rng) if mask >> i & 1 else 0 for i in range(f.n)]
            p = linear_power(coeffs, sum(m))
            if is_i_deformation(m, p, mask):
                break
        else:
            raise InvariantViolation(f"no deformation found for {mask_label(mask)} in {attempts} attempts")
        out.append((mask, p))
    return out


def is_almost_linear(rho: Sequence[int]) -> bool:
    gaps = {rho[i] - rho[i + 1] for i in range(len(rho) - 1)}
    return not gaps or max(gaps) - min(gaps) <= 1


def degree_functions(n: int, top: int) -> Iterable[tuple[int, ...]]:
    """Weakly decreasing rho with top >= rho_1 and rho_n >= 1, lex descending."""
    def rec(prefix, hi, left):
        if not left:
            yield tuple(prefix)
            return
        for v in range(hi, 0, -1):
            yield from rec(prefix + [v], v, left - 1)

    yield from rec([], top, n)


def rho_equality_search(n: int, top: int, only_non_almost_linear: bool = True) -> list[dict]:
    """Record, for each small degree function, whether the two Hilbert series agree."""
    out = []
    for rho in degree_functions(n, top):
        almost = is_almost_linear(rho)
        if only_non_almost_linear and almost:
            continue
        cmp = verify_span(rho_family(rho), rho_power_generators(rho))
        out.append({"rho": list(rho), "almost_linear": almost, **cmp.to_json()})
    return out
