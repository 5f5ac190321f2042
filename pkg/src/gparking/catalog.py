"""Named graphs and families used by the CLI and the tests."""

from __future__ import annotations

from .graph import Digraph, complete_graph, example_graph, make_complete_kl, res4_graph
from .ideal import MonomialFamily, graph_family, hat_family, kl_family, rho_family


def res2_family() -> MonomialFamily:
    """The running example's family on {1},{2},{3},{1,2},{2,3},{1,2,3}."""
    return graph_family(example_graph()).restrict([[1], [2], [3], [1, 2], [2, 3], [1, 2, 3]])


def res3_family() -> MonomialFamily:
    """x1^2 x2^2, x2^2 x3, x1 x2 x3 on {1,2},{2,3},{1,2,3}: strictly monotone, not generic."""
    return MonomialFamily.from_dict(
        3, {(1, 2): (2, 2, 0), (2, 3): (0, 2, 1), (1, 2, 3): (1, 1, 1)}
    )


def res4_family() -> MonomialFamily:
    return graph_family(res4_graph())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def builtin_graph(name: str) -> Digraph | None:
    """example, res4, complete:N, kl:N,K,L."""
    if name == "example":
        return example_graph()
    if name == "res4":
        return res4_graph()
    if name.startswith("complete:"):
        return complete_graph(int(name.split(":", 1)[1]))
    if name.startswith("kl:"):
        return make_complete_kl(*_ints(name.split(":", 1)[1]))
    return None


def builtin_family(name: str) -> MonomialFamily | None:
    """Graph names plus res2, res3, rho:R1,R2,..., hat:N."""
    if name == "res2":
        return res2_family()
    if name == "res3":
        return res3_family()
    if name.startswith("rho:"):
        return rho_family(_ints(name.split(":", 1)[1]))
    if name.startswith("hat:"):
        return hat_family(int(name.split(":", 1)[1]))
    if name.startswith("kl:"):
        return kl_family(*_ints(name.split(":", 1)[1]))
    g = builtin_graph(name)
    return graph_family(g) if g is not None else None
