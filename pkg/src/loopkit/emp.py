"""Excitation and measurement patterns (EMPs) on a loop: validity test,
classification, exhaustive enumeration and closed-form counts."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Optional

from .errors import DomainError, UnsupportedSizeError

MAX_ENUM_N = 16

# (minimal, valid, invalid) as printed for loops of 2..10 nodes
PUBLISHED_TABLE: dict[int, tuple[int, int, int]] = {
    2: (4, 5, 2),
    3: (12, 19, 8),
    4: (2, 67, 14),
    5: (10, 221, 22),
    6: (32, 697, 32),
    7: (84, 2143, 44),
    8: (198, 6503, 58),
    9: (438, 19609, 74),
    10: (932, 58957, 92),
}

KNOWN_DISCREPANCIES = {
    (2, "invalid"): (
        "exhaustive count over the 9 EMPs with every node excited or measured: "
        "5 valid leaves 4 invalid (EE, MM, EM, ME); the printed table has 2"
    ),
}


def _succ(i: int, n: int) -> int:
    return i % n + 1


@dataclass(frozen=True)
class Emp:
    n: int
    excited: frozenset[int]
    measured: frozenset[int]

    def __init__(self, n: int, excited=(), measured=()):
        if not isinstance(n, int) or isinstance(n, bool):
            raise DomainError(f"n must be an integer, got {n!r}")
        ex = frozenset(excited)
        me = frozenset(measured)
        for name, nodes in (("excited", ex), ("measured", me)):
            bad = sorted(v for v in nodes if not isinstance(v, int) or not 1 <= v <= n)
            if bad:
                raise DomainError(f"{name} nodes {bad} outside 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "excited", ex)
        object.__setattr__(self, "measured", me)

    @classmethod
    def from_pattern(cls, pattern: str) -> "Emp":
        """``E`` excited, ``M`` measured, ``B`` both, one letter per node from node 1."""
        ex, me = [], []
        for i, ch in enumerate(pattern.strip().upper(), start=1):
            if ch not in "EMB":
                raise DomainError(f"pattern character {ch!r} at node {i} is not E, M or B")
            if ch in "EB":
                ex.append(i)
            if ch in "MB":
                me.append(i)
        return cls(len(pattern.strip()), ex, me)

    @property
    def pattern(self) -> str:
        """Letter string; uncovered nodes show as ``-``."""
        out = []
        for i in range(1, self.n + 1):
            e, m = i in self.excited, i in self.measured
            out.append("B" if e and m else "E" if e else "M" if m else "-")
        return "".join(out)

    @property
    def cardinality(self) -> int:
        return len(self.excited) + len(self.measured)

    @property
    def both(self) -> frozenset[int]:
        return self.excited & self.measured

    def rotated(self, shift: int = 1) -> "Emp":
        """Relabel every node ``i`` as ``i + shift`` (cyclically)."""
        n = self.n
        f = lambda v: (v - 1 + shift) % n + 1  # noqa: E731
        return Emp(n, map(f, self.excited), map(f, self.measured))

    def measured_excited_pairs(self) -> list[tuple[int, int]]:
        """Pairs (i, i+1) with i measured and its successor excited, ascending in i."""
        return [
            (i, _succ(i, self.n))
            for i in range(1, self.n + 1)
            if i in self.measured and _succ(i, self.n) in self.excited
        ]

    def to_dict(self) -> dict:
        return {"n": self.n, "excited": sorted(self.excited), "measured": sorted(self.measured)}


class Verdict(str, enum.Enum):
    INVALID = "invalid"
    VALID_MINIMAL = "valid-minimal"
    VALID_NONMINIMAL = "valid-nonminimal"


class Rule(str, enum.Enum):
    BOTH_NODE = "both-node"
    MEASURED_EXCITED_PAIRS = "measured-excited-pairs"
    NO_EXCITATION = "no-excitation"
    NO_MEASUREMENT = "no-measurement"
    UNCOVERED_NODES = "uncovered-nodes"
    CONTIGUOUS_BLOCKS = "contiguous-blocks"


@dataclass(frozen=True)
class Reason:
    rule: Rule
    pairs: tuple[tuple[int, int], ...] = ()
    both_nodes: tuple[int, ...] = ()
    uncovered: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "pairs": [list(p) for p in self.pairs],
            "both_nodes": list(self.both_nodes),
            "uncovered": list(self.uncovered),
        }


@dataclass(frozen=True)
class EmpClass:
    verdict: Verdict
    reason: Reason
    cardinality: int

    @property
    def valid(self) -> bool:
        return self.verdict is not Verdict.INVALID

    @property
    def minimal(self) -> bool:
        return self.verdict is Verdict.VALID_MINIMAL

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "valid": self.valid,
            "minimal": self.minimal,
            "cardinality": self.cardinality,
            "reason": self.reason.to_dict(),
        }


def necessary_check(emp: Emp) -> Optional[Reason]:
    """``None`` when B and C are non-empty and cover every node, else the violation."""
    if not emp.excited:
        return Reason(Rule.NO_EXCITATION)
    if not emp.measured:
        return Reason(Rule.NO_MEASUREMENT)
    uncovered = tuple(i for i in range(1, emp.n + 1) if i not in emp.excited and i not in emp.measured)
    if uncovered:
        return Reason(Rule.UNCOVERED_NODES, uncovered=uncovered)
    return None


def min_cardinality(n: int) -> int:
    """Smallest |B|+|C| over valid EMPs: one both-node is required below 4 nodes."""
    return n + 1 if n <= 3 else n


def nsc_check(emp: Emp) -> EmpClass:
    n = emp.n
    if n < 2:
        raise UnsupportedSizeError(f"loops need at least 2 nodes, got n={n}")
    card = emp.cardinality
    violation = necessary_check(emp)
    if violation is not None:
        return EmpClass(Verdict.INVALID, violation, card)
    pairs = tuple(emp.measured_excited_pairs())
    both = tuple(sorted(emp.both))
    if both:
        reason = Reason(Rule.BOTH_NODE, pairs=pairs, both_nodes=both)
    elif len(pairs) >= 2:
        reason = Reason(Rule.MEASURED_EXCITED_PAIRS, pairs=pairs)
    else:
        return EmpClass(Verdict.INVALID, Reason(Rule.CONTIGUOUS_BLOCKS, pairs=pairs), card)
    verdict = Verdict.VALID_MINIMAL if card == min_cardinality(n) else Verdict.VALID_NONMINIMAL
    return EmpClass(verdict, reason, card)


def is_contiguous_invalid(emp: Emp) -> bool:
    """No both-node, B and C non-empty and covering, excited nodes forming one arc."""
    return nsc_check(emp).reason.rule is Rule.CONTIGUOUS_BLOCKS


_FILTERS = {
    None: lambda c: True,
    "all": lambda c: True,
    "minimal": lambda c: c.minimal,
    "valid": lambda c: c.valid,
    "invalid": lambda c: not c.valid,
}


def _check_enum_size(n: int) -> None:
    if not isinstance(n, int) or not 2 <= n <= MAX_ENUM_N:
        raise UnsupportedSizeError(f"enumeration supports 2 <= n <= {MAX_ENUM_N}, got {n}")


def enumerate_emps(n: int, filter: Optional[str] = None) -> Iterator[tuple[Emp, EmpClass]]:
    """Every assignment of each node to E, M or B, in lexicographic E < M < B order.

    ``filter`` is one of ``minimal``, ``valid``, ``invalid`` or ``None``.
    """
    _check_enum_size(n)
    if isinstance(filter, Verdict):
        keep = lambda c: c.verdict is filter  # noqa: E731
    else:
        try:
            keep = _FILTERS[filter]
        except KeyError:
            raise DomainError(f"unknown filter {filter!r}") from None
    for pattern in itertools.product("EMB", repeat=n):
        ex = [i for i, ch in enumerate(pattern, start=1) if ch != "M"]
        me = [i for i, ch in enumerate(pattern, start=1) if ch != "E"]
        emp = Emp(n, ex, me)
        cls = nsc_check(emp)
        if keep(cls):
            yield emp, cls


def count_by_enumeration(n: int) -> dict[str, int]:
    minimal = valid = total = 0
    for _, cls in enumerate_emps(n):
        total += 1
        valid += cls.valid
        minimal += cls.minimal
    return {"minimal": minimal, "valid": valid, "invalid": total - valid}


def counts_closed_form(n: int) -> dict[str, int]:
    if not isinstance(n, int) or n < 2:
        raise UnsupportedSizeError(f"counts need n >= 2, got {n}")
    with_both = sum(2 ** (n - k) * comb(n, k) for k in range(1, n)) + 1
    no_both_valid = 2**n - n * (n - 1) - 2 if n >= 4 else 0
    minimal = no_both_valid if n >= 4 else n * 2 ** (n - 1)
    valid = with_both + no_both_valid
    return {"minimal": minimal, "valid": valid, "invalid": 3**n - valid}


@dataclass
class TableRow:
    n: int
    enumerated: dict[str, int]
    closed_form: dict[str, int]
    published: Optional[dict[str, int]] = None
    mismatches: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "enumerated": self.enumerated,
            "closed_form": self.closed_form,
            "published": self.published,
            "enumeration_matches_closed_form": self.enumerated == self.closed_form,
            "mismatches": self.mismatches,
        }


def table(max_n: int) -> dict:
    """Compare enumeration, closed forms and the published counts for n = 2..max_n."""
    _check_enum_size(max_n)
    rows = []
    for n in range(2, max_n + 1):
        enum_counts = count_by_enumeration(n)
        closed = counts_closed_form(n)
        row = TableRow(n, enum_counts, closed)
        for col in ("minimal", "valid", "invalid"):
            if enum_counts[col] != closed[col]:
                row.mismatches.append(
                    {"column": col, "against": "closed_form", "computed": enum_counts[col], "expected": closed[col]}
                )
        if n in PUBLISHED_TABLE:
            row.published = dict(zip(("minimal", "valid", "invalid"), PUBLISHED_TABLE[n]))
            for col, printed in row.published.items():
                if enum_counts[col] != printed:
                    m = {"column": col, "against": "published", "computed": enum_counts[col], "expected": printed}
                    note = KNOWN_DISCREPANCIES.get((n, col))
                    if note:
                        m["known"] = True
                        m["note"] = note
                    row.mismatches.append(m)
        rows.append(row)
    unexplained = [
        {"n": r.n, **m} for r in rows for m in r.mismatches if not m.get("known")
    ]
    return {
        "max_n": max_n,
        "rows": [r.to_dict() for r in rows],
        "unexplained_mismatches": unexplained,
        "ok": not unexplained,
    }


def format_table(report: dict) -> str:
    head = f"{'n':>3} {'minimal':>8} {'valid':>8} {'invalid':>8}   {'published (min/valid/inv)':<24} flags"
    lines = [head, "-" * len(head)]
    for r in report["rows"]:
        e = r["enumerated"]
        p = r["published"]
        ptxt = f"{p['minimal']}/{p['valid']}/{p['invalid']}" if p else "-"
        flags = []
        if not r["enumeration_matches_closed_form"]:
            flags.append("ENUM!=FORMULA")
        for m in r["mismatches"]:
            if m["against"] == "published":
                tag = "known" if m.get("known") else "MISMATCH"
                flags.append(f"{m['column']}: {m['computed']} vs printed {m['expected']} ({tag})")
        lines.append(
            f"{r['n']:>3} {e['minimal']:>8} {e['valid']:>8} {e['invalid']:>8}   {ptxt:<24} {'; '.join(flags)}"
        )
    notes = {m["note"] for r in report["rows"] for m in r["mismatches"] if m.get("note")}
    for note in sorted(notes):
        lines.append(f"note: {note}")
    return "\n".join(lines)
