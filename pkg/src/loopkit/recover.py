"""Reconstruction of every edge of a loop from its input-output map.

Pipeline: pick a plan (a both-node, or two measured nodes whose successors
are excited), get the loop product P from the map, express each path
product Q_i = P_{r,i} into a reference measured node r, then read edges
off ratios of consecutive Q's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .emp import Emp, nsc_check
from .errors import DomainError, LoopkitError, NonGenericError, NotIdentifiableError
from .exactalg import RationalFunction
from .loopnet import IoMap, LoopNetwork, io_map, succ

_ONE = RationalFunction.const(1)


@dataclass(frozen=True)
class RecoveryPlan:
    mode: str  # "both" or "pair"
    reference: int
    both_node: Optional[int] = None
    pair: Optional[tuple[int, int]] = None

    def to_dict(self) -> dict:
        d = {"mode": self.mode, "reference": self.reference}
        if self.mode == "both":
            d["both_node"] = self.both_node
        else:
            d["pair"] = list(self.pair)
        return d


def plan(emp: Emp, *, both_node: Optional[int] = None, pair: Optional[tuple[int, int]] = None) -> RecoveryPlan:
    """Default plan: smallest both-node, else the first two measured->excited pairs.

    ``both_node`` or ``pair`` force a specific admissible choice.
    """
    cls = nsc_check(emp)
    if not cls.valid:
        raise NotIdentifiableError(
            f"EMP {emp.pattern} is not identifiable ({cls.reason.rule.value})", cls.reason
        )
    if both_node is not None and pair is not None:
        raise DomainError("force at most one of both_node and pair")
    n = emp.n
    if pair is not None:
        r1, r2 = pair
        for r in (r1, r2):
            if r not in emp.measured or succ(r, n) not in emp.excited:
                raise DomainError(f"node {r} is not a measured node followed by an excited node")
        if r1 == r2 or (succ(r1, n) == r2 and succ(r2, n) == r1):
            raise DomainError(f"pair {pair} does not determine the loop product")
        return RecoveryPlan("pair", reference=r2, pair=(r1, r2))
    if both_node is not None:
        if both_node not in emp.excited or both_node not in emp.measured:
            raise DomainError(f"node {both_node} is not both excited and measured")
        return RecoveryPlan("both", reference=both_node, both_node=both_node)
    if emp.both:
        j = min(emp.both)
        return RecoveryPlan("both", reference=j, both_node=j)
    (r1, _), (r2, _) = emp.measured_excited_pairs()[:2]
    return RecoveryPlan("pair", reference=r2, pair=(r1, r2))


def _entry(m: IoMap, i: int, j: int) -> RationalFunction:
    try:
        f = m[i, j]
    except KeyError as exc:
        raise DomainError(str(exc)) from None
    if f.is_zero():
        raise NonGenericError(f"M[{i},{j}] is identically zero")
    return f


def loop_product_from_map(m: IoMap, p: RecoveryPlan) -> RationalFunction:
    if p.mode == "both":
        j = p.both_node
        return _ONE - _ONE / _entry(m, j, j)
    r1, r2 = p.pair
    s1, s2 = succ(r1, m.n), succ(r2, m.n)
    num = _entry(m, r2, s2) * _entry(m, r1, s1)
    den = _entry(m, r1, s2) * _entry(m, r2, s1)
    return num / den


def reference_products(m: IoMap, p: RecoveryPlan, P: RationalFunction) -> dict[int, RationalFunction]:
    """Q_i = P_{r,i} for every node i other than the reference r."""
    n = m.n
    r = p.reference
    one_minus_p = _ONE - P
    if one_minus_p.is_zero():
        raise NonGenericError("recovered loop product equals 1")
    excited, measured = set(m.excited), set(m.measured)
    q: dict[int, RationalFunction] = {}
    for i in range(1, n + 1):
        if i != r and i in excited:
            q[i] = _entry(m, r, i) * one_minus_p
    if p.mode == "pair":
        s = succ(r, n)
        qs = q[s]
    for i in range(1, n + 1):
        if i == r or i in q:
            continue
        if i not in measured:
            raise DomainError(f"node {i} is neither excited nor measured")
        if p.mode == "both":
            q[i] = P / (_entry(m, i, p.both_node) * one_minus_p)
        else:
            q[i] = qs / (_entry(m, i, s) * one_minus_p)
    return q


def edges_from_products(n: int, r: int, P: RationalFunction, q: dict[int, RationalFunction]) -> list[RationalFunction]:
    edges = []
    for i in range(1, n + 1):
        nxt = succ(i, n)
        if i == r:
            g = P / q[nxt]
        elif nxt == r:
            g = q[i]
        else:
            g = q[i] / q[nxt]
        edges.append(g)
    return edges


def _check_shape(m: IoMap, emp: Emp) -> None:
    if m.n != emp.n:
        raise DomainError(f"map is for {m.n} nodes but the EMP has {emp.n}")
    if list(m.measured) != sorted(emp.measured):
        raise DomainError(f"map rows {list(m.measured)} differ from measured nodes {sorted(emp.measured)}")
    if list(m.excited) != sorted(emp.excited):
        raise DomainError(f"map columns {list(m.excited)} differ from excited nodes {sorted(emp.excited)}")


def recover_edges(m: IoMap, emp: Emp, recovery_plan: Optional[RecoveryPlan] = None) -> LoopNetwork:
    _check_shape(m, emp)
    p = recovery_plan or plan(emp)
    P = loop_product_from_map(m, p)
    q = reference_products(m, p, P)
    edges = edges_from_products(m.n, p.reference, P, q)
    try:
        return LoopNetwork(tuple(edges))
    except LoopkitError as exc:
        raise NonGenericError(f"recovered edges do not form a loop network: {exc}") from exc


def determined_edges(m: IoMap) -> dict[int, RationalFunction]:
    """Edges readable from single ratios of map entries, with no loop product needed.

    Edge i -> i+1 is determined when both ends are excited (ratio along a
    measured row) or both are measured (ratio down an excited column).
    """
    n = m.n
    out = {}
    for i in range(1, n + 1):
        nxt = succ(i, n)
        if i in m.excited and nxt in m.excited and m.measured:
            # T_{j,i} / T_{j,i+1} with j measured and j != i
            j = next((j for j in m.measured if j != i), None)
            if j is not None and not m[j, nxt].is_zero():
                out[i] = m[j, i] / m[j, nxt]
                continue
        if i in m.measured and nxt in m.measured and m.excited:
            # T_{i+1,j} / T_{i,j} with j excited and j != i+1
            j = next((j for j in m.excited if j != nxt), None)
            if j is not None and not m[i, j].is_zero():
                out[i] = m[nxt, j] / m[i, j]
    return out


def verify_roundtrip(net: Union[LoopNetwork, Sequence[RationalFunction]], emp: Emp) -> dict:
    """Simulate the map, recover, and compare edge by edge.

    On an EMP that does not identify the loop, report which edges the
    ratio identities still pin down and which stay undetermined.
    """
    report: dict = {"emp": emp.to_dict(), "pattern": emp.pattern}
    try:
        if not isinstance(net, LoopNetwork):
            net = LoopNetwork(tuple(net))
        m = io_map(net, emp)
    except LoopkitError as exc:
        report.update(ok=False, error=f"{type(exc).__name__}: {exc}")
        return report
    n = net.n
    cls = nsc_check(emp)
    report["verdict"] = cls.verdict.value
    edges = []
    try:
        if cls.valid:
            recovered = dict(enumerate(recover_edges(m, emp).edges, start=1))
        else:
            recovered = determined_edges(m)
    except LoopkitError as exc:
        report.update(ok=False, error=f"{type(exc).__name__}: {exc}")
        return report
    for i in range(1, n + 1):
        g = recovered.get(i)
        edges.append(
            {
                "from": i,
                "to": succ(i, n),
                "recovered": g is not None,
                "equal": g is not None and g == net.edges[i - 1],
            }
        )
    report["edges"] = edges
    report["unrecoverable"] = [[e["from"], e["to"]] for e in edges if not e["recovered"]]
    report["all_equal"] = all(e["equal"] for e in edges)
    report["ok"] = all(e["equal"] for e in edges if e["recovered"]) and (report["all_equal"] or not cls.valid)
    report["error"] = None
    return report
