"""Resolutions of order monomial ideals by chains, Scarf complexes, and
homology of the subcomplexes cut out by a monomial."""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from dataclasses import dataclass
from math import factorial

from .errors import CapacityError, PreconditionError, ValidationError
from .exact import QPoly, exact_rank, stirling2
from .ideal import (
    Family,
    Monomial,
    MonomialFamily,
    as_order_family,
    check_conditions,
    divides,
    format_monomial,
    hilbert_numerator,
    lcm,
    minimal_generators,
    poset_chains,
    require_monotone,
    standard_basis,
)

MAX_SCARF_GENERATORS = 20
MAX_FACES = 1 << 16


@dataclass(frozen=True)
class GradedResolution:
    """terms[k-1] lists (internal degree, rank) for homological degree k.

    Term 0 is S itself and is not stored.  ``minimal`` is None when
    minimality was not decided.
    """

    terms: tuple[tuple[tuple[int, int], ...], ...]
    minimal: bool | None = None

    def __post_init__(self):
        for term in self.terms:
            for d, r in term:
                if r <= 0 or d < 0:
                    raise ValidationError(f"bad term S(-{d})^{r}")

    @classmethod
    def from_counts(cls, counts: dict[tuple[int, int], int], minimal: bool | None = None):
        top = max((k for k, _ in counts), default=0)
        terms = tuple(
            tuple(sorted((d, r) for (kk, d), r in counts.items() if kk == k and r))
            for k in range(1, top + 1)
        )
        return cls(terms, minimal)

    @property
    def length(self) -> int:
        return len(self.terms)

    def ranks(self) -> tuple[int, ...]:
        return tuple(sum(r for _, r in term) for term in self.terms)

    def polynomial(self) -> QPoly:
        """sum_k (-1)^k sum r q^d, with k = 0 contributing 1."""
        terms = {0: 1}
        for k, term in enumerate(self.terms, start=1):
            for d, r in term:
                terms[d] = terms.get(d, 0) + (-1) ** k * r
        return QPoly.from_terms(terms)

    def display(self) -> str:
        def module(term):
            return " ⊕ ".join(f"S(-{d})" + (f"^{r}" if r != 1 else "") for d, r in term)

        return " → ".join(["0"] + [module(t) for t in reversed(self.terms)] + ["S"])

    def to_json(self) -> dict:
        return {
            "terms": [[{"d": d, "r": r} for d, r in term] for term in self.terms],
            "minimal": self.minimal,
        }


def _chain_table(f: Family):
    """The order family and [(chain, lcm)] over all strictly increasing chains."""
    of = as_order_family(f)
    out = []
    for chain in poset_chains(of):
        out.append((chain, lcm(*(of.monomials[c] for c in chain))))
    return of, out


def _no_repeat(of, table) -> bool:
    """No chain shares its lcm with a chain obtained by dropping one element."""
    lcms = {chain: m for chain, m in table}
    for chain, m in table:
        if len(chain) == 1:
            if not any(m[i] for i in range(of.n)):
                return False
            continue
        for i in range(len(chain)):
            if lcms[chain[:i] + chain[i + 1:]] == m:
                return False
    return True


def order_complex_resolution(f: Family) -> GradedResolution:
    """Free resolution indexed by strictly increasing chains of the poset.

    The k-th module has one summand S(-deg m_chain) per k-chain.  It is
    minimal exactly when no chain has the same lcm as one of its
    one-element-shorter subchains.
    """
    of = as_order_family(f)
    if not check_conditions(of).order:
        raise PreconditionError("the order condition fails; the chain complex is not a resolution")
    of, table = _chain_table(of)
    counts = Counter((len(chain), sum(m)) for chain, m in table)
    return GradedResolution.from_counts(dict(counts), _no_repeat(of, table))


@dataclass(frozen=True)
class BettiTable:
    graded: dict[tuple[int, int], int]
    minimal: bool

    def totals(self) -> tuple[int, ...]:
        top = max((k for k, _ in self.graded), default=0)
        return tuple(sum(c for (kk, _), c in self.graded.items() if kk == k) for k in range(1, top + 1))

    def to_json(self) -> dict:
        return {
            "graded": [{"k": k, "d": d, "count": c} for (k, d), c in sorted(self.graded.items())],
            "totals": list(self.totals()),
            "minimal": self.minimal,
        }


def betti_numbers(f: MonomialFamily) -> BettiTable:
    """Chain counts by (length, lcm degree); these are the graded Betti numbers
    when the family is strictly monotone, otherwise flagged non-minimal."""
    require_monotone(f)
    _, table = _chain_table(f)
    counts = Counter((len(chain), sum(m)) for chain, m in table)
    return BettiTable(dict(sorted(counts.items())), check_conditions(f).strictly_monotone)


# -- simplicial complexes -----------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    """Nonempty faces over vertex indices 0..len(vertices)-1, closed under subsets."""

    vertices: tuple[str, ...]
    faces: frozenset[frozenset[int]]

    def __post_init__(self):
        for face in self.faces:
            if not face or any(not 0 <= v < len(self.vertices) for v in face):
                raise ValidationError(f"bad face {sorted(face)}")
            for v in face:
                sub = face - {v}
                if sub and sub not in self.faces:
                    raise ValidationError(f"face {sorted(face)} is missing the subface {sorted(sub)}")

    def f_vector(self) -> tuple[int, ...]:
        c = Counter(len(face) for face in self.faces)
        return tuple(c[k] for k in range(1, max(c, default=0) + 1))

    def is_connected(self) -> bool:
        used = sorted({v for face in self.faces for v in face})
        if not used:
            return True
        adj: dict[int, set[int]] = {v: set() for v in used}
        for face in self.faces:
            if len(face) == 2:
                a, b = face
                adj[a].add(b)
                adj[b].add(a)
        seen = {used[0]}
        stack = [used[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(used)

    def labelled_faces(self) -> set[frozenset[str]]:
        return {frozenset(self.vertices[v] for v in face) for face in self.faces}


def scarf_complex(generators: list[Monomial]) -> SimplicialComplex:
    """Subsets of generators whose lcm no other subset attains."""
    gens = [tuple(g) for g in generators]
    if len(gens) > MAX_SCARF_GENERATORS:
        raise CapacityError(f"{len(gens)} generators exceeds the {MAX_SCARF_GENERATORS} guard")
    if len(minimal_generators(gens)) != len(gens):
        raise ValidationError("Scarf complex needs a minimal generating set")
    k = len(gens)
    lcms: list[Monomial] = [tuple(0 for _ in gens[0])] if gens else [()]
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        lcms.append(lcm(lcms[mask & (mask - 1)], gens[low]))
    seen = Counter(lcms[1:])
    faces = frozenset(
        frozenset(i for i in range(k) if mask >> i & 1)
        for mask in range(1, 1 << k)
        if seen[lcms[mask]] == 1
    )
    return SimplicialComplex(tuple(format_monomial(g) for g in gens), faces)


def order_complex(f: Family) -> SimplicialComplex:
    """Chains of the labelling poset, vertices named by their monomials."""
    of = as_order_family(f)
    faces = frozenset(frozenset(chain) for chain in poset_chains(of))
    return SimplicialComplex(tuple(format_monomial(m) for m in of.monomials), faces)


def compare_order_scarf(f: MonomialFamily) -> bool:
    """True when the chain complex of the labels and the Scarf complex of the
    generators have the same faces (compared as sets of monomials)."""
    require_monotone(f)
    monos = f.monomials
    gens = minimal_generators(monos)
    if len(gens) != len(monos):
        return False
    return order_complex(f).labelled_faces() == scarf_complex(gens).labelled_faces()


def euler_check(res: GradedResolution, f: Family, cap: int | None = None) -> bool:
    """The alternating sum of the resolution equals the Hilbert numerator.

    With ``cap`` the series up to that degree is also compared against a
    direct count of standard monomials.
    """
    poly = res.polynomial()
    if poly != hilbert_numerator(f):
        return False
    if cap is not None:
        basis = standard_basis(f, cap)
        direct = [0] * (cap + 1)
        for m in basis.monomials:
            direct[sum(m)] += 1
        if poly.series_over_one_minus_q(f.n, cap) != direct:
            return False
    return True


def reduced_homology(faces) -> list[int]:
    """Reduced rational Betti numbers of a complex given by its nonempty faces
    (each a sorted tuple).  Index 0 is degree -1: the empty complex gives [1]."""
    by_dim: dict[int, list[tuple]] = {-1: [()]}
    for face in faces:
        by_dim.setdefault(len(face) - 1, []).append(tuple(face))
    if sum(len(v) for v in by_dim.values()) > MAX_FACES:
        raise CapacityError(f"complex exceeds {MAX_FACES} faces")
    top = max(by_dim)
    for d in by_dim:
        by_dim[d].sort()
    ranks = {}
    for d in range(0, top + 1):
        index = {face: j for j, face in enumerate(by_dim.get(d - 1, []))}
        mat = []
        for face in by_dim.get(d, []):
            row = [0] * len(index)
            for i in range(len(face)):
                row[index[face[:i] + face[i + 1:]]] = (-1) ** i
            mat.append(row)
        ranks[d] = exact_rank(mat) if mat and index else 0
    return [
        len(by_dim.get(d, [])) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(-1, top + 1)
    ]


def subcomplex_homology(f: Family, m: Monomial) -> list[int]:
    """Reduced rational Betti numbers of the chains whose monomials all divide m.

    Index 0 is degree -1, so the empty complex gives [1] and a point [0, 0].
    """
    of = as_order_family(f)
    if len(m) != of.n:
        raise ValidationError("monomial has the wrong number of variables")
    keep = {u for u in range(len(of)) if divides(of.monomials[u], m)}
    faces = []
    for chain in poset_chains(of):
        if all(c in keep for c in chain):
            faces.append(chain)
            if len(faces) > MAX_FACES:
                raise CapacityError(f"subcomplex exceeds {MAX_FACES} faces")
    return reduced_homology(faces)


def scarf_is_resolution(generators: list[Monomial]) -> bool:
    """Whether the Scarf complex supports a free resolution: for every lcm m
    of generators, the faces whose lcm divides m form an acyclic complex."""
    gens = [tuple(g) for g in generators]
    sc = scarf_complex(gens)
    face_lcms = {face: lcm(*(gens[i] for i in face)) for face in sc.faces}
    targets = {lcm(*(gens[i] for i in range(len(gens)) if mask >> i & 1)) for mask in range(1, 1 << len(gens))}
    for m in targets:
        faces = [tuple(sorted(f)) for f, fl in face_lcms.items() if divides(fl, m)]
        if any(reduced_homology(faces)):
            return False
    return True


def minimal_betti_numbers(generators: list[Monomial]) -> GradedResolution:
    """Graded Betti numbers of S/I computed from upper Koszul complexes.

    For each b in the lcm lattice, K^b is the set of squarefree t with
    x^(b - t) in I; beta_{k,b}(S/I) is the reduced homology of K^b in
    degree k - 2.  Independent of any chain or Scarf construction.
    """
    gens = minimal_generators(generators)
    if len(gens) > MAX_SCARF_GENERATORS:
        raise CapacityError(f"{len(gens)} generators exceeds the {MAX_SCARF_GENERATORS} guard")
    n = len(gens[0]) if gens else 0
    lattice = set()
    for mask in range(1, 1 << len(gens)):
        lattice.add(lcm(*(gens[i] for i in range(len(gens)) if mask >> i & 1)))
    counts: Counter = Counter()
    for b in lattice:
        support = [i for i in range(n) if b[i]]
        faces = []
        for r in range(1, len(support) + 1):
            for t in combinations(support, r):
                c = list(b)
                for i in t:
                    c[i] -= 1
                if any(divides(g, c) for g in gens):
                    faces.append(t)
        for idx, rank in enumerate(reduced_homology(faces)):
            if rank:
                counts[(idx + 1, sum(b))] += rank
    return GradedResolution.from_counts(dict(counts), True)


def chain_counts_by_length(f: Family) -> tuple[int, ...]:
    of = as_order_family(f)
    c = Counter(len(chain) for chain in poset_chains(of))
    return tuple(c[k] for k in range(1, max(c, default=0) + 1))


def stirling_betti(n: int) -> tuple[int, ...]:
    """k! S(n+1, k+1) for k = 1..n."""
    return tuple(factorial(k) * stirling2(n + 1, k + 1) for k in range(1, n + 1))

