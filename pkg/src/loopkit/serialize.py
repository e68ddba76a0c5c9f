"""Canonical JSON forms for rationals, polynomials, networks, EMPs and maps.

Rationals are strings ``"p/q"`` (``"p"`` when q = 1); polynomials are
arrays of such strings in ascending degree. Readers raise
:class:`FormatError` naming the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .emp import Emp
from .errors import FormatError, LoopkitError
from .exactalg import Poly, RationalFunction, format_rat, parse_rat
from .loopnet import IoMap, LoopNetwork, succ


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def load_json(path: str | Path, what: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{what}: cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: {path} is not valid JSON (line {exc.lineno}: {exc.msg})") from None


def _int(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise FormatError(f"{where}: missing field '{key}'")
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise FormatError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _obj(x, where: str) -> dict:
    if not isinstance(x, dict):
        raise FormatError(f"{where}: expected a JSON object, got {type(x).__name__}")
    return x


def _list(obj: dict, key: str, where: str) -> list:
    if key not in obj:
        raise FormatError(f"{where}: missing field '{key}'")
    v = obj[key]
    if not isinstance(v, list):
        raise FormatError(f"{where}.{key}: expected an array, got {type(v).__name__}")
    return v


def poly_to_json(p: Poly) -> list[str]:
    return [format_rat(c) for c in p.coeffs]


def poly_from_json(x, where: str) -> Poly:
    if not isinstance(x, list):
        raise FormatError(f"{where}: expected an array of rational strings")
    coeffs = []
    for k, c in enumerate(x):
        if not isinstance(c, (str, int)) or isinstance(c, bool):
            raise FormatError(f"{where}[{k}]: expected a rational string like \"3/4\", got {c!r}")
        try:
            coeffs.append(parse_rat(c))
        except ValueError as exc:
            raise FormatError(f"{where}[{k}]: {exc}") from None
    return Poly(coeffs)


def rf_to_json(f: RationalFunction) -> dict:
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rf_from_json(x, where: str) -> RationalFunction:
    x = _obj(x, where)
    num = poly_from_json(x.get("num"), f"{where}.num")
    den = poly_from_json(x.get("den"), f"{where}.den")
    if den.is_zero():
        raise FormatError(f"{where}.den: zero denominator")
    try:
        return RationalFunction(num, den)
    except LoopkitError as exc:
        raise FormatError(f"{where}: {exc}") from None


def network_to_json(net: LoopNetwork) -> dict:
    return {
        "n": net.n,
        "edges": [
            {"from": i, "to": succ(i, net.n), **rf_to_json(g)} for i, g in enumerate(net.edges, start=1)
        ],
    }


def network_from_json(x, where: str = "network") -> LoopNetwork:
    x = _obj(x, where)
    n = _int(x, "n", where)
    if n < 2:
        raise FormatError(f"{where}.n: a loop needs at least 2 nodes, got {n}")
    raw = _list(x, "edges", where)
    if len(raw) != n:
        raise FormatError(f"{where}.edges: expected {n} edges, got {len(raw)}")
    edges = []
    for k, e in enumerate(raw):
        w = f"{where}.edges[{k}]"
        e = _obj(e, w)
        frm, to = _int(e, "from", w), _int(e, "to", w)
        if frm != k + 1 or to != succ(k + 1, n):
            raise FormatError(
                f"{w}: expected cycle edge from {k + 1} to {succ(k + 1, n)}, got from {frm} to {to}"
            )
        g = rf_from_json(e, w)
        if g.is_zero():
            raise FormatError(f"{w}.num: edge transfer function is zero")
        edges.append(g)
    return LoopNetwork(tuple(edges))


def emp_to_json(emp: Emp) -> dict:
    return emp.to_dict()


def _nodes(x: dict, key: str, n: int, where: str) -> list[int]:
    nodes = _list(x, key, where)
    for k, v in enumerate(nodes):
        if not isinstance(v, int) or isinstance(v, bool):
            raise FormatError(f"{where}.{key}[{k}]: expected an integer node, got {v!r}")
        if not 1 <= v <= n:
            raise FormatError(f"{where}.{key}[{k}]: node {v} outside 1..{n}")
    if len(set(nodes)) != len(nodes):
        raise FormatError(f"{where}.{key}: duplicate nodes")
    return nodes


def emp_from_json(x, where: str = "emp") -> Emp:
    x = _obj(x, where)
    n = _int(x, "n", where)
    if n < 2:
        raise FormatError(f"{where}.n: a loop needs at least 2 nodes, got {n}")
    return Emp(n, _nodes(x, "excited", n, where), _nodes(x, "measured", n, where))


def iomap_to_json(m: IoMap) -> dict:
    return {
        "n": m.n,
        "measured": list(m.measured),
        "excited": list(m.excited),
        "entries": [[rf_to_json(f) for f in row] for row in m.entries],
    }


def iomap_from_json(x, where: str = "map") -> IoMap:
    x = _obj(x, where)
    n = _int(x, "n", where)
    if n < 2:
        raise FormatError(f"{where}.n: a loop needs at least 2 nodes, got {n}")
    measured = _nodes(x, "measured", n, where)
    excited = _nodes(x, "excited", n, where)
    for key, nodes in (("measured", measured), ("excited", excited)):
        if nodes != sorted(nodes):
            raise FormatError(f"{where}.{key}: nodes must be ascending")
    rows = _list(x, "entries", where)
    if len(rows) != len(measured):
        raise FormatError(f"{where}.entries: expected {len(measured)} rows (one per measured node), got {len(rows)}")
    entries = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(excited):
            raise FormatError(f"{where}.entries[{i}]: expected {len(excited)} entries (one per excited node)")
        entries.append(tuple(rf_from_json(f, f"{where}.entries[{i}][{j}]") for j, f in enumerate(row)))
    return IoMap(n, tuple(measured), tuple(excited), tuple(entries))
