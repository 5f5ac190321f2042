"""Parking functions: G-parking, rho-parking, (k,l), almost parking.

All enumerations return tuples in lexicographic order.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .errors import CapacityError, ValidationError
from .exact import QPoly
from .graph import Digraph, make_complete_kl

MAX_SUBSET_VARS = 12
MAX_BOX_VARS = 6
MAX_PERMUTATION = 9


def _check_vector(g: Digraph, b: Sequence[int]) -> None:
    if len(b) != g.n:
        raise ValidationError(f"parking vector has length {len(b)}, graph has n={g.n}")
    if any(x < 0 for x in b):
        raise ValidationError("parking vector entries must be non-negative")


def subset_degrees(g: Digraph) -> dict[int, tuple[int, ...]]:
    """Map each nonempty bitmask I to (d_I(i) for i in I, ascending)."""
    if g.n > MAX_SUBSET_VARS:
        raise CapacityError(f"2^{g.n} subsets exceeds the n <= {MAX_SUBSET_VARS} guard")
    out = {}
    for mask in range(1, 1 << g.n):
        out[mask] = tuple(
            g.out_degree_outside(mask, i + 1) for i in range(g.n) if mask >> i & 1
        )
    return out


def is_g_parking(g: Digraph, b: Sequence[int]) -> bool:
    """Every nonempty I has some i in I with b_i < d_I(i)."""
    _check_vector(g, b)
    for mask, degs in subset_degrees(g).items():
        members = [i for i in range(g.n) if mask >> i & 1]
        if not any(b[i] < d for i, d in zip(members, degs)):
            return False
    return True


def burns(g: Digraph, b: Sequence[int]) -> bool:
    """Burning test, equivalent to :func:`is_g_parking` in O(n^2) subset steps.

    Starting from all vertices, repeatedly drop a vertex i of the current
    set S with b_i < d_S(i).  Since d_S(i) only grows as S shrinks, b is
    G-parking exactly when every vertex gets dropped.
    """
    remaining = (1 << g.n) - 1
    while remaining:
        for i in range(g.n):
            if remaining >> i & 1 and b[i] < g.out_degree_outside(remaining, i + 1):
                remaining &= ~(1 << i)
                break
        else:
            return False
    return True


def enumerate_g_parking(g: Digraph) -> list[tuple[int, ...]]:
    if g.n > MAX_SUBSET_VARS:
        raise CapacityError(f"n={g.n} exceeds the n <= {MAX_SUBSET_VARS} guard")
    box = [g.out_degree_outside(1 << i, i + 1) for i in range(g.n)]
    return [b for b in itertools.product(*(range(d) for d in box)) if burns(g, b)]


def is_rho_parking(rho: Sequence[int], b: Sequence[int]) -> bool:
    n = len(rho)
    c = sorted(b)
    return all(c[i] < rho[n - 1 - i] for i in range(n))


def _check_rho(rho: Sequence[int]) -> None:
    if any(x < 0 for x in rho) or any(rho[i] < rho[i + 1] for i in range(len(rho) - 1)):
        raise ValidationError(f"degree function must be weakly decreasing and >= 0: {tuple(rho)}")


def enumerate_rho_parking(rho: Sequence[int]) -> list[tuple[int, ...]]:
    """Sequences whose increasing rearrangement satisfies c_i < rho_{n+1-i}."""
    _check_rho(rho)
    n = len(rho)
    if n == 0:
        return [()]
    if rho[-1] == 0:
        return []
    return [b for b in itertools.product(range(rho[0]), repeat=n) if is_rho_parking(rho, b)]


def kl_rho(n: int, k: int, l: int) -> tuple[int, ...]:
    """Linear degree function rho_r = l + k(n - r)."""
    return tuple(l + k * (n - r) for r in range(1, n + 1))


def classical_parking(n: int) -> list[tuple[int, ...]]:
    return enumerate_rho_parking(tuple(range(n, 0, -1)))


def enumerate_kl_parking(n: int, k: int, l: int) -> list[tuple[int, ...]]:
    return enumerate_g_parking(make_complete_kl(n, k, l))


def enumerate_almost_parking(n: int) -> list[tuple[int, ...]]:
    """b with x^b outside the ideal of (x_{i1}...x_{ir})^{n-r+1} x_{i1}, i1 = min I."""
    if n > MAX_BOX_VARS:
        raise CapacityError(f"n={n} exceeds the n <= {MAX_BOX_VARS} guard")
    gens = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        e = [0] * n
        for i in members:
            e[i] = n - len(members) + 1
        e[members[0]] += 1
        gens.append(e)
    return [
        b
        for b in itertools.product(range(n + 1), repeat=n)
        if not any(all(x >= y for x, y in zip(b, e)) for e in gens)
    ]


def degree_series(vectors) -> QPoly:
    """Sum of q^(b_1+...+b_n)."""
    terms: dict[int, int] = {}
    for b in vectors:
        s = sum(b)
        terms[s] = terms.get(s, 0) + 1
    return QPoly.from_terms(terms)


def rho_hilbert_product(rho: Sequence[int]) -> QPoly:
    """Subtraction-free Hilbert series of A_rho, summed over classical parking functions.

    Each usual parking function a contributes the product over i of
    q^{rho_{n-a_i+1}} [rho_{n-a_i} - rho_{n-a_i+1}], with rho_{n+1} = 0.
    """
    _check_rho(rho)
    n = len(rho)
    r = list(rho) + [0]

    def rho_at(k: int) -> int:  # 1-based
        return r[k - 1]

    total = QPoly()
    for a in classical_parking(n):
        term = QPoly([1])
        for ai in a:
            lo, hi = rho_at(n - ai + 1), rho_at(n - ai)
            term = term * (QPoly.monomial(lo) * QPoly.q_integer(hi - lo))
        total = total + term
    return total


def descent_pattern_count(rho: Sequence[int]) -> int:
    """Permutations with sigma_i < sigma_{i+1} when rho_i is even and > when odd,
    finishing with the same comparison of sigma_n against 0."""
    n = len(rho)
    if n > MAX_PERMUTATION:
        raise CapacityError(f"n={n} exceeds the n <= {MAX_PERMUTATION} permutation guard")
    count = 0
    for perm in itertools.permutations(range(1, n + 1)):
        seq = perm + (0,)
        if all((seq[i] < seq[i + 1]) if rho[i] % 2 == 0 else (seq[i] > seq[i + 1]) for i in range(n)):
            count += 1
    return count
