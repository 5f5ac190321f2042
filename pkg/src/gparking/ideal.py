"""Monomial ideals labelled by subsets or by posets.

A monomial is a tuple of exponents.  Subset labels are bitmasks over
{1..n}: bit ``i-1`` set means i is in the subset.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, InfiniteDimensionError, PreconditionError, ValidationError
from .exact import QPoly, compositions
from .graph import Digraph

Monomial = tuple[int, ...]

MAX_VARS = 12


# -- monomial helpers --------------------------------------------------------


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def strictly_divides(a: Monomial, b: Monomial) -> bool:
    """a | b and every variable present in b has a strictly larger exponent in b."""
    return all(x <= y and (y == 0 or x < y) for x, y in zip(a, b))


def lcm(*ms: Monomial) -> Monomial:
    return tuple(map(max, *ms)) if len(ms) > 1 else tuple(ms[0])


def mono_degree(m: Monomial) -> int:
    return sum(m)


def format_monomial(m: Monomial) -> str:
    parts = [f"x{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(m) if e]
    return "*".join(parts) if parts else "1"


def mask_of(label: int | Iterable[int]) -> int:
    if isinstance(label, int):
        return label
    mask = 0
    for i in label:
        if i < 1:
            raise ValidationError(f"subset labels are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def members(mask: int) -> list[int]:
    """0-based variable indices of a bitmask."""
    out = []
    i = 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def format_label(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in members(mask)) + "}"


def _label_key(mask: int) -> tuple:
    return (bin(mask).count("1"), members(mask))


# -- families ----------------------------------------------------------------


@dataclass(frozen=True)
class MonomialFamily:
    """Monomials m_I indexed by a set Sigma of nonempty subsets of {1..n}."""

    n: int
    entries: tuple[tuple[int, Monomial], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        entries = tuple(
            sorted(((int(mask), tuple(int(e) for e in m)) for mask, m in self.entries),
                   key=lambda t: _label_key(t[0]))
        )
        object.__setattr__(self, "entries", entries)
        index = {}
        for mask, m in entries:
            if mask <= 0 or mask >> self.n:
                raise ValidationError(f"label {mask:b} is empty or out of range for n={self.n}")
            if len(m) != self.n or any(e < 0 for e in m):
                raise ValidationError(f"bad exponent vector {m}")
            if mask in index:
                raise ValidationError(f"duplicate label {format_label(mask)}")
            index[mask] = m
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_dict(cls, n: int, gens: dict) -> "MonomialFamily":
        return cls(n, tuple((mask_of(k), tuple(v)) for k, v in gens.items()))

    @property
    def labels(self) -> list[int]:
        return [mask for mask, _ in self.entries]

    @property
    def monomials(self) -> list[Monomial]:
        return [m for _, m in self.entries]

    def __contains__(self, label) -> bool:
        return mask_of(label) in self._index

    def __getitem__(self, label) -> Monomial:
        return self._index[mask_of(label)]

    def __len__(self) -> int:
        return len(self.entries)

    def nu(self, label, i: int) -> int:
        """Exponent of x_{i+1} in m_I (i is 0-based)."""
        return self[label][i]

    @property
    def has_all_singletons(self) -> bool:
        return all(1 << i in self._index for i in range(self.n))

    def restrict(self, labels: Iterable) -> "MonomialFamily":
        keep = {mask_of(x) for x in labels}
        return MonomialFamily(self.n, tuple((m, e) for m, e in self.entries if m in keep))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": [
                {"label": [i + 1 for i in members(mask)], "exponents": list(m)}
                for mask, m in self.entries
            ],
        }

    def to_order_family(self) -> "OrderIdealFamily":
        labels = self.labels
        idx = {mask: k for k, mask in enumerate(labels)}
        covers = [
            (idx[a], idx[b]) for a in labels for b in labels if a != b and a & b == a
        ]
        return OrderIdealFamily(
            self.n, tuple(format_label(m) for m in labels), tuple(covers), tuple(self.monomials)
        )


@dataclass(frozen=True)
class OrderIdealFamily:
    """Monomials m_u indexed by a finite poset.

    ``relations`` lists pairs (a, b) of element indices with a < b; any
    generating set (e.g. the Hasse covers) is fine, the strict order is
    its transitive closure.
    """

    n: int
    elements: tuple[str, ...]
    relations: tuple[tuple[int, int], ...]
    monomials: tuple[Monomial, ...]
    above: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = len(self.elements)
        if len(self.monomials) != k:
            raise ValidationError("one monomial per poset element")
        for m in self.monomials:
            if len(m) != self.n or any(e < 0 for e in m):
                raise ValidationError(f"bad exponent vector {m}")
        succ: list[set[int]] = [set() for _ in range(k)]
        for a, b in self.relations:
            if not (0 <= a < k and 0 <= b < k):
                raise ValidationError(f"relation ({a},{b}) out of range")
            succ[a].add(b)
        closure = []
        for start in range(k):
            seen: set[int] = set()
            stack = list(succ[start])
            while stack:
                v = stack.pop()
                if v not in seen:
                    seen.add(v)
                    stack.extend(succ[v])
            if start in seen:
                raise ValidationError(f"relations contain a cycle through {self.elements[start]}")
            closure.append(frozenset(seen))
        object.__setattr__(self, "above", tuple(closure))

    def less(self, a: int, b: int) -> bool:
        return b in self.above[a]

    def leq(self, a: int, b: int) -> bool:
        return a == b or b in self.above[a]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_json(cls, data: dict) -> "OrderIdealFamily":
        names = [e["name"] for e in data["elements"]]
        pos = {name: k for k, name in enumerate(names)}
        rel = tuple((pos[a], pos[b]) for a, b in data.get("relations", []))
        return cls(
            data["n"], tuple(names), rel, tuple(tuple(e["exponents"]) for e in data["elements"])
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "elements": [
                {"name": name, "exponents": list(m)} for name, m in zip(self.elements, self.monomials)
            ],
            "relations": [[self.elements[a], self.elements[b]] for a, b in self.relations],
        }


Family = MonomialFamily | OrderIdealFamily


def as_order_family(f: Family) -> OrderIdealFamily:
    return f.to_order_family() if isinstance(f, MonomialFamily) else f


def family_from_json(data: dict | str) -> Family:
    if isinstance(data, str):
        data = json.loads(data)
    if "elements" in data:
        return OrderIdealFamily.from_json(data)
    if "generators" not in data:
        raise ValidationError("family JSON needs 'generators' or 'elements'")
    return MonomialFamily(
        data["n"],
        tuple((mask_of(g["label"]), tuple(g["exponents"])) for g in data["generators"]),
    )


def _check_vars(n: int) -> None:
    if n > MAX_VARS:
        raise CapacityError(f"2^{n} labels exceeds the n <= {MAX_VARS} guard")


def graph_family(g: Digraph) -> MonomialFamily:
    """m_I = prod_{i in I} x_i^{d_I(i)} over all nonempty I."""
    _check_vars(g.n)
    entries = []
    for mask in range(1, 1 << g.n):
        e = [0] * g.n
        for i in members(mask):
            e[i] = g.out_degree_outside(mask, i + 1)
        entries.append((mask, tuple(e)))
    return MonomialFamily(g.n, tuple(entries))


def _symmetric_family(n: int, exponent, extra_min: int = 0) -> MonomialFamily:
    _check_vars(n)
    entries = []
    for mask in range(1, 1 << n):
        mem = members(mask)
        e = [0] * n
        for i in mem:
            e[i] = exponent(len(mem))
        e[mem[0]] += extra_min
        entries.append((mask, tuple(e)))
    return MonomialFamily(n, tuple(entries))


def rho_family(rho: Sequence[int]) -> MonomialFamily:
    """m_I = (x_{i1} ... x_{ir})^{rho_r}."""
    rho = tuple(rho)
    if any(rho[i] < rho[i + 1] for i in range(len(rho) - 1)) or any(r < 0 for r in rho):
        raise ValidationError(f"degree function must be weakly decreasing and >= 0: {rho}")
    return _symmetric_family(len(rho), lambda r: rho[r - 1])


def kl_family(n: int, k: int, l: int) -> MonomialFamily:
    return _symmetric_family(n, lambda r: l + k * (n - r))


def hat_family(n: int) -> MonomialFamily:
    """m_I = (x_{i1} ... x_{ir})^{n-r+1} x_{i1}, with i1 the least element of I."""
    return _symmetric_family(n, lambda r: n - r + 1, extra_min=1)


# -- conditions --------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    passed: bool | None  # None: not applicable to this kind of family
    witness: tuple = ()

    def to_json(self):
        return {"passed": self.passed, "witness": [str(w) for w in self.witness]}


@dataclass(frozen=True)
class ConditionReport:
    checks: dict[str, Check]

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    @property
    def monotone(self) -> bool:
        return all(self.checks[c].passed for c in ("MM1", "MM2", "MM3"))

    @property
    def strictly_monotone(self) -> bool:
        return self.monotone and all(self.checks[c].passed for c in ("SM1", "SM2"))

    @property
    def generic(self) -> bool:
        return bool(self.checks["GM"].passed)

    @property
    def order(self) -> bool:
        return bool(self.checks["OM"].passed)

    def to_json(self) -> dict:
        return {k: v.to_json() for k, v in self.checks.items()}


def minimal_generators(monomials: Iterable[Monomial]) -> list[Monomial]:
    """Distinct monomials not divisible by a different one, in first-seen order."""
    uniq = list(dict.fromkeys(tuple(m) for m in monomials))
    return [m for m in uniq if not any(o != m and divides(o, m) for o in uniq)]


def _generic_check(monomials: Iterable[Monomial]) -> Check:
    gens = minimal_generators(monomials)
    for a, b in itertools.combinations(gens, 2):
        shared = [i for i in range(len(a)) if a[i] == b[i] > 0]
        if not shared:
            continue
        ab = lcm(a, b)
        if not any(w != a and w != b and strictly_divides(w, ab) for w in gens):
            return Check(False, (format_monomial(a), format_monomial(b), f"x{shared[0] + 1}"))
    return Check(True)


def _sm1_check(labels: Sequence[str], monos: Sequence[Monomial]) -> Check:
    for u, v in itertools.permutations(range(len(monos)), 2):
        if divides(monos[u], monos[v]):
            return Check(False, (labels[u], format_monomial(monos[u]), labels[v], format_monomial(monos[v])))
    return Check(True)


def _om_check(f: OrderIdealFamily) -> Check:
    k = len(f)
    for u, v in itertools.combinations(range(k), 2):
        uv = lcm(f.monomials[u], f.monomials[v])
        if not any(
            f.leq(u, w) and f.leq(v, w) and divides(f.monomials[w], uv) for w in range(k)
        ):
            return Check(False, (f.elements[u], f.elements[v]))
    return Check(True)


def check_conditions(f: Family) -> ConditionReport:
    if isinstance(f, OrderIdealFamily):
        na = Check(None)
        return ConditionReport({
            "MM1": na, "MM2": na, "MM3": na,
            "SM1": _sm1_check(f.elements, f.monomials),
            "SM2": na,
            "OM": _om_check(f),
            "GM": _generic_check(f.monomials),
        })

    labels = f.labels
    checks: dict[str, Check] = {}

    checks["MM1"] = Check(True)
    for mask, m in f.entries:
        outside = [i for i in range(f.n) if m[i] and not mask >> i & 1]
        if outside:
            checks["MM1"] = Check(False, (format_label(mask), f"x{outside[0] + 1}"))
            break

    checks["MM2"] = Check(True)
    for I, J in itertools.permutations(labels, 2):
        if I & J == I:
            bad = [i for i in members(I) if f[I][i] < f[J][i]]
            if bad:
                checks["MM2"] = Check(False, (format_label(I), format_label(J), f"x{bad[0] + 1}"))
                break
        if checks["MM2"].passed is False:
            break

    checks["MM3"] = Check(True)
    for I, J in itertools.combinations(labels, 2):
        ij = lcm(f[I], f[J])
        if not any(K & (I | J) == (I | J) and divides(f[K], ij) for K in labels):
            checks["MM3"] = Check(False, (format_label(I), format_label(J)))
            break

    checks["SM1"] = _sm1_check([format_label(m) for m in labels], f.monomials)

    checks["SM2"] = Check(True)
    for I, J, K in itertools.permutations(labels, 3):
        if I & J == I and J & K == J:
            if not any(f[J][i] > f[K][i] for i in members(J & ~I)):
                checks["SM2"] = Check(False, (format_label(I), format_label(J), format_label(K)))
                break

    checks["OM"] = checks["MM3"]
    checks["GM"] = _generic_check(f.monomials)
    return ConditionReport(checks)


def require_monotone(f: Family) -> None:
    if not isinstance(f, MonomialFamily):
        raise PreconditionError("a subset-labelled (monotone) family is required")
    report = check_conditions(f)
    if not report.monotone:
        failed = [c for c in ("MM1", "MM2", "MM3") if not report[c].passed]
        raise PreconditionError(f"family is not monotone: {failed[0]} fails at {report[failed[0]].witness}")


# -- chains --------------------------------------------------------------------


def subset_chains(f: MonomialFamily) -> Iterator[tuple[int, ...]]:
    """Nonempty strictly increasing chains of labels, depth first."""
    labels = f.labels
    ups = {I: [J for J in labels if J != I and J & I == I] for I in labels}

    def extend(chain):
        yield chain
        for J in ups[chain[-1]]:
            yield from extend(chain + (J,))

    for I in labels:
        yield from extend((I,))


def poset_chains(f: OrderIdealFamily) -> Iterator[tuple[int, ...]]:
    ups = [sorted(a) for a in f.above]

    def extend(chain):
        yield chain
        for v in ups[chain[-1]]:
            yield from extend(chain + (v,))

    for u in range(len(f)):
        yield from extend((u,))


def _validate_chain(f: Family, chain: Sequence) -> tuple:
    if not chain:
        raise ValidationError("empty chain")
    if isinstance(f, MonomialFamily):
        masks = tuple(mask_of(c) for c in chain)
        for m in masks:
            if m not in f:
                raise ValidationError(f"{format_label(m)} is not a label of the family")
        for a, b in zip(masks, masks[1:]):
            if a == b or a & b != a:
                raise ValidationError(f"{format_label(a)} is not strictly below {format_label(b)}")
        return masks
    for a, b in zip(chain, chain[1:]):
        if not f.less(a, b):
            raise ValidationError(f"{f.elements[a]} is not strictly below {f.elements[b]}")
    return tuple(chain)


def chain_lcm(f: Family, chain: Sequence) -> Monomial:
    """Least common multiple of the monomials along a strictly increasing chain."""
    chain = _validate_chain(f, chain)
    monos = [f[c] for c in chain] if isinstance(f, MonomialFamily) else [f.monomials[c] for c in chain]
    return lcm(*monos)


def chain_lcm_formula(f: MonomialFamily, chain: Sequence) -> Monomial:
    """The chain lcm read off monotonicity: x_i takes its exponent from the
    first label in the chain that contains i."""
    chain = _validate_chain(f, chain)
    e = [0] * f.n
    prev = 0
    for I in chain:
        for i in members(I & ~prev):
            e[i] = f[I][i]
        prev = I
    return tuple(e)


def _step_degree(f: MonomialFamily, below: int, J: int) -> int:
    return sum(f[J][i] for i in members(J & ~below))


def hilbert_numerator(f: Family) -> QPoly:
    """K-polynomial: 1 + sum_k (-1)^k sum over k-chains of q^{deg lcm(chain)}.

    For monotone subset families the chain sum is accumulated label by
    label (the degree added by J on top of I depends only on I and J).
    For general order families chains are enumerated with their lcm.
    """
    if isinstance(f, OrderIdealFamily):
        if not check_conditions(f).order:
            raise PreconditionError("the family does not satisfy the order condition")
        terms: dict[int, int] = {0: 1}
        for chain in poset_chains(f):
            d = sum(lcm(*(f.monomials[c] for c in chain)))
            terms[d] = terms.get(d, 0) + (-1) ** len(chain)
        return QPoly.from_terms(terms)

    require_monotone(f)
    _check_vars(f.n)
    labels = f.labels  # sorted by size, so every I below J comes first
    ending: dict[int, dict[int, int]] = {}
    for J in labels:
        acc: dict[int, int] = {}
        d0 = _step_degree(f, 0, J)
        acc[d0] = -1
        for I in labels:
            if I == J or I & J != I or I not in ending:
                continue
            step = _step_degree(f, I, J)
            for d, c in ending[I].items():
                acc[d + step] = acc.get(d + step, 0) - c
        ending[J] = acc
    total: dict[int, int] = {0: 1}
    for acc in ending.values():
        for d, c in acc.items():
            total[d] = total.get(d, 0) + c
    return QPoly.from_terms(total)


def dimension_chain_formula(f: MonomialFamily) -> int:
    """dim A as the alternating chain polynomial in the exponents nu_I(i)."""
    require_monotone(f)
    if not f.has_all_singletons:
        missing = [i + 1 for i in range(f.n) if (1 << i) not in f]
        raise InfiniteDimensionError(f"singletons {missing} missing: the quotient is infinite-dimensional")
    nu = [f[1 << i][i] for i in range(f.n)]
    labels = f.labels

    def step(below: int, J: int) -> int:
        out = 1
        for i in members(J & ~below):
            out *= nu[i] - f[J][i]
        return out

    def tail(J: int) -> int:
        out = 1
        for i in range(f.n):
            if not J >> i & 1:
                out *= nu[i]
        return out

    ending: dict[int, int] = {}
    for J in labels:
        acc = -step(0, J)
        for I in labels:
            if I != J and I & J == I and I in ending:
                acc -= step(I, J) * ending[I]
        ending[J] = acc
    total = tail(0)
    for J, acc in ending.items():
        total += acc * tail(J)
    return total


# -- standard monomials ---------------------------------------------------------


@dataclass(frozen=True)
class StandardBasis:
    monomials: tuple[Monomial, ...]
    complete: bool
    cap: int

    def __len__(self) -> int:
        return len(self.monomials)

    def graded_dims(self) -> list[int]:
        dims = [0] * (self.cap + 1)
        for m in self.monomials:
            dims[sum(m)] += 1
        while len(dims) > 1 and dims[-1] == 0 and self.complete:
            dims.pop()
        return dims


def _generators(f: Family) -> list[Monomial]:
    return list(f.monomials)


def pure_power_bounds(n: int, gens: Iterable[Monomial]) -> list[int | None]:
    """For each variable, the least c with x_i^c among the generators."""
    bound: list[int | None] = [None] * n
    for m in gens:
        support = [i for i in range(n) if m[i]]
        if len(support) == 1:
            i = support[0]
            if bound[i] is None or m[i] < bound[i]:
                bound[i] = m[i]
        elif not support:
            return [0] * n
    return bound


def standard_basis(f: Family, degree_cap: int | None = None) -> StandardBasis:
    """Monomials of degree <= cap outside the ideal, graded and lex-descending within a degree.

    When every variable has a pure-power generator (for subset families:
    every singleton is labelled) the quotient is finite, the cap defaults
    to the top of the box and the result is flagged complete.
    """
    gens = minimal_generators(_generators(f))
    n = f.n
    bound = pure_power_bounds(n, gens)
    finite = all(b is not None for b in bound)
    if finite:
        top = sum(max(b - 1, 0) for b in bound)
        cap = top if degree_cap is None else degree_cap
        cands = (b for b in itertools.product(*(range(x) for x in bound)) if sum(b) <= cap)
    else:
        if degree_cap is None:
            raise InfiniteDimensionError("infinite-dimensional quotient: pass degree_cap")
        cap = degree_cap
        cands = (b for d in range(cap + 1) for b in compositions(d, n))
    basis = [b for b in cands if not any(divides(m, b) for m in gens)]
    basis.sort(key=lambda b: (sum(b), tuple(-x for x in b)))
    return StandardBasis(tuple(basis), finite and cap >= top, cap)
