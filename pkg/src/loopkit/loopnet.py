"""Isolated loop networks and their closed-loop maps.

Nodes are labelled 1..n around the cycle and edge ``i`` carries the
transfer function from node ``i`` to its successor ``i+1`` (node ``n``
wraps to node 1). All closed-loop quantities come from path products;
no matrix is ever inverted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import DegenerateNetworkError, DomainError, LoopkitError, UnsupportedSizeError
from .exactalg import Poly, RationalFunction

if TYPE_CHECKING:
    from .emp import Emp

_ONE = RationalFunction.const(1)


def succ(i: int, n: int) -> int:
    return i % n + 1


def pred(i: int, n: int) -> int:
    return (i - 2) % n + 1


@dataclass(frozen=True)
class LoopNetwork:
    """``edges[i-1]`` is the transfer function from node ``i`` to node ``i+1``."""

    edges: tuple[RationalFunction, ...]

    def __post_init__(self):
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) < 2:
            raise UnsupportedSizeError(f"a loop needs at least 2 nodes, got {len(edges)}")
        for i, g in enumerate(edges, start=1):
            if not isinstance(g, RationalFunction):
                raise TypeError(f"edge {i} is not a RationalFunction")
            if g.is_zero():
                raise DegenerateNetworkError(f"edge {i}->{succ(i, len(edges))} is zero")
        if (_ONE - _product(edges)).is_zero():
            raise DegenerateNetworkError("loop product P equals 1, so 1 - P = 0")

    @property
    def n(self) -> int:
        return len(self.edges)

    def edge(self, i: int) -> RationalFunction:
        """Transfer function G_{i+1,i} leaving node ``i``."""
        _check_node(i, self.n)
        return self.edges[i - 1]

    def gain(self, to: int, frm: int) -> RationalFunction:
        """G_{to,frm}; only cycle edges exist."""
        _check_node(to, self.n)
        _check_node(frm, self.n)
        if to != succ(frm, self.n):
            raise DomainError(f"no edge {frm}->{to} in a loop of {self.n} nodes")
        return self.edges[frm - 1]

    def replace(self, i: int, g: RationalFunction) -> "LoopNetwork":
        _check_node(i, self.n)
        edges = list(self.edges)
        edges[i - 1] = g
        return LoopNetwork(tuple(edges))


def _check_node(i: int, n: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= n:
        raise DomainError(f"node {i!r} outside 1..{n}")


def _product(fs: Sequence[RationalFunction]) -> RationalFunction:
    acc = _ONE
    for f in fs:
        acc = acc * f
    return acc


def loop_product(net: LoopNetwork) -> RationalFunction:
    return _product(net.edges)


def path_product(net: LoopNetwork, i: int, k: int) -> RationalFunction:
    """Product of the edges on the directed path from node ``k`` to node ``i``."""
    n = net.n
    _check_node(i, n)
    _check_node(k, n)
    if i == k:
        raise DomainError("P_ii is undefined; use the loop product or 1")
    acc = _ONE
    node = k
    while node != i:
        acc = acc * net.edges[node - 1]
        node = succ(node, n)
    return acc


def sensitivity(net: LoopNetwork) -> RationalFunction:
    """R = 1/(1 - P)."""
    d = _ONE - loop_product(net)
    if d.is_zero():
        raise DegenerateNetworkError("1 - P = 0")
    return _ONE / d


def closed_loop_entry(net: LoopNetwork, i: int, k: int) -> RationalFunction:
    """T_ik: R on the diagonal, P_ik * R elsewhere."""
    r = sensitivity(net)
    if i == k:
        _check_node(i, net.n)
        return r
    return path_product(net, i, k) * r


def closed_loop_matrix(net: LoopNetwork) -> list[list[RationalFunction]]:
    """Full n x n T, built column by column from cumulative path products."""
    n = net.n
    r = sensitivity(net)
    return _columns(net, r, list(range(1, n + 1)), list(range(1, n + 1)))


def _columns(net, r, rows, cols):
    n = net.n
    wanted = set(rows)
    out = {i: {} for i in rows}
    for k in cols:
        if k in wanted:
            out[k][k] = r
        acc = r
        node = k
        for _ in range(n - 1):
            acc = acc * net.edges[node - 1]
            node = succ(node, n)
            if node in wanted:
                out[node][k] = acc
    return [[out[i][k] for k in cols] for i in rows]


@dataclass(frozen=True)
class IoMap:
    """Input-output map M = C T B, rows by measured node, columns by excited node."""

    n: int
    measured: tuple[int, ...]
    excited: tuple[int, ...]
    entries: tuple[tuple[RationalFunction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "measured", tuple(self.measured))
        object.__setattr__(self, "excited", tuple(self.excited))
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        for name in ("measured", "excited"):
            nodes = getattr(self, name)
            if list(nodes) != sorted(set(nodes)):
                raise DomainError(f"{name} nodes must be strictly ascending, got {list(nodes)}")
            for v in nodes:
                _check_node(v, self.n)
        if len(self.entries) != len(self.measured) or any(
            len(row) != len(self.excited) for row in self.entries
        ):
            raise DomainError(
                f"entries must be {len(self.measured)}x{len(self.excited)} "
                f"(measured x excited)"
            )

    def __getitem__(self, key: tuple[int, int]) -> RationalFunction:
        i, j = key
        try:
            return self.entries[self.measured.index(i)][self.excited.index(j)]
        except ValueError:
            raise KeyError(f"M[{i},{j}] not available: node {i} measured? node {j} excited?") from None

    def has(self, i: int, j: int) -> bool:
        return i in self.measured and j in self.excited


def io_map(net: LoopNetwork, emp: "Emp") -> IoMap:
    if emp.n != net.n:
        raise DomainError(f"EMP is for {emp.n} nodes but the network has {net.n}")
    rows = sorted(emp.measured)
    cols = sorted(emp.excited)
    if not rows or not cols:
        entries = [[] for _ in rows]
    else:
        entries = _columns(net, sensitivity(net), rows, cols)
    return IoMap(net.n, tuple(rows), tuple(cols), tuple(tuple(r) for r in entries))


def random_network(n: int, seed: int, degree_bound: int = 1) -> LoopNetwork:
    """Deterministic random loop with integer coefficients in [-9, 9].

    Numerators have degree at most ``degree_bound``; denominators are monic
    of degree exactly ``degree_bound`` before reduction.
    """
    if n < 2:
        raise UnsupportedSizeError(f"a loop needs at least 2 nodes, got {n}")
    if degree_bound < 0:
        raise DomainError("degree_bound must be non-negative")
    rng = random.Random(seed)
    for _ in range(1000):
        edges = []
        for _ in range(n):
            while True:
                num = Poly([rng.randint(-9, 9) for _ in range(degree_bound + 1)])
                if not num.is_zero():
                    break
            den = Poly([rng.randint(-9, 9) for _ in range(degree_bound)] + [1])
            edges.append(RationalFunction(num, den))
        try:
            return LoopNetwork(tuple(edges))
        except DegenerateNetworkError:
            continue
    raise LoopkitError("could not draw a non-degenerate network in 1000 attempts")
