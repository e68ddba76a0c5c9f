"""Indistinguishable loops for EMPs whose excited nodes form one unbroken arc.

With excited arc a..b and measured arc b+1..a-1, every map entry is
R * P_ij for a path that crosses the edge b -> b+1 and never the edge
a-1 -> a. Scaling the first edge by lam multiplies every such path product
by lam; scaling the second by mu = (1 - lam + lam*P) / (lam*P) then makes
the new sensitivity R/lam, so the map is unchanged.
"""

from __future__ import annotations

from fractions import Fraction

from .emp import Emp, is_contiguous_invalid
from .errors import DomainError, NonGenericError
from .exactalg import RationalFunction, Scalar
from .loopnet import LoopNetwork, io_map, loop_product, pred, succ

_ONE = RationalFunction.const(1)


def excited_arc(emp: Emp) -> tuple[int, int]:
    """(first, last) node of the single excited arc of a contiguous-invalid EMP."""
    if not is_contiguous_invalid(emp):
        raise DomainError(
            f"EMP {emp.pattern} is not a contiguous-invalid pattern "
            "(needs disjoint, covering, non-empty B and C with B one arc)"
        )
    n = emp.n
    first = next(i for i in emp.excited if pred(i, n) in emp.measured)
    last = next(i for i in emp.excited if succ(i, n) in emp.measured)
    return first, last


def ambiguous_edges(emp: Emp) -> tuple[int, int]:
    """Source nodes of the two undetermined edges: leaving the excited arc, entering it."""
    first, last = excited_arc(emp)
    return last, pred(first, emp.n)


def compensating_gain(P: RationalFunction, lam: Scalar) -> RationalFunction:
    lam = Fraction(lam)
    num = _ONE - RationalFunction.const(lam) + P * lam
    if num.is_zero():
        raise NonGenericError(f"lambda = {lam} makes the compensating gain vanish")
    return num / (P * lam)


def indistinguishable_family(net: LoopNetwork, emp: Emp, lam: Scalar) -> LoopNetwork:
    """Loop with the same map under ``emp``; lam = 1 returns ``net`` itself."""
    lam = Fraction(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    if emp.n != net.n:
        raise DomainError(f"EMP is for {emp.n} nodes but the network has {net.n}")
    out_edge, in_edge = ambiguous_edges(emp)
    mu = compensating_gain(loop_product(net), lam)
    edges = list(net.edges)
    edges[out_edge - 1] = edges[out_edge - 1] * lam
    edges[in_edge - 1] = edges[in_edge - 1] * mu
    return LoopNetwork(tuple(edges))


def verify_counterexample(a: LoopNetwork, b: LoopNetwork, emp: Emp) -> dict:
    if a.n != b.n:
        raise DomainError(f"networks have {a.n} and {b.n} nodes")
    maps_equal = io_map(a, emp) == io_map(b, emp)
    differing = [[i, succ(i, a.n)] for i in range(1, a.n + 1) if a.edges[i - 1] != b.edges[i - 1]]
    return {
        "pattern": emp.pattern,
        "maps_equal": maps_equal,
        "networks_differ": bool(differing),
        "differing_edges": differing,
        "is_counterexample": maps_equal and bool(differing),
    }
