"""Jacobian-rank oracle for generic identifiability.

Each edge is replaced by an independent rational scalar. The selected
closed-loop entries are differentiated exactly with dual numbers and the
Jacobian rank is computed without rounding. Full column rank n at a
sample point means the edges are locally identifiable there.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from typing import Optional, Sequence

from .emp import Emp, Rule, enumerate_emps, nsc_check
from .errors import DegenerateInputError, LoopkitError
from .exactalg import DualRat, Scalar, dual_lift, ffge_rank

MAX_CROSSCHECK_N = 7
SAMPLE_VALUES = [v for v in range(-9, 10) if v]


class DegeneratePointError(DegenerateInputError):
    """The product of the edge scalars equals 1."""


def scalar_io_map(g: Sequence, emp: Emp) -> list:
    """Entries of C (I - G)^-1 B row-major, for Fraction or DualRat edge values."""
    n = emp.n
    if len(g) != n:
        raise DegenerateInputError(f"expected {n} edge values, got {len(g)}")
    if not g:
        return []
    if not isinstance(g[0], DualRat):
        g = [Fraction(x) for x in g]
    prod = g[0]
    for x in g[1:]:
        prod = prod * x
    value = prod.value if isinstance(prod, DualRat) else prod
    if value == 1:
        raise DegeneratePointError("product of edge values is 1")
    r = 1 / (1 - prod)
    rows = sorted(emp.measured)
    cols = sorted(emp.excited)
    wanted = set(rows)
    t = {}
    for k in cols:
        if k in wanted:
            t[k, k] = r
        acc = r
        node = k
        for _ in range(n - 1):
            acc = acc * g[node - 1]
            node = node % n + 1
            if node in wanted:
                t[node, k] = acc
    return [t[i, k] for i in rows for k in cols]


def jacobian(g: Sequence[Scalar], emp: Emp) -> list[list[Fraction]]:
    """(|C|*|B|) x n matrix of partials of scalar_io_map with respect to each edge."""
    return [list(e.derivs) for e in scalar_io_map(dual_lift(g), emp)]


def _draw_point(rng: random.Random, n: int) -> list[Fraction]:
    for _ in range(100):
        g = [Fraction(rng.choice(SAMPLE_VALUES)) for _ in range(n)]
        prod = Fraction(1)
        for x in g:
            prod *= x
        if prod != 1:
            return g
    raise LoopkitError("no non-degenerate sample point in 100 attempts")


def rank_test(emp: Emp, trials: int = 3, seed: int = 0) -> dict:
    """Maximum Jacobian rank over ``trials`` random integer points."""
    if trials < 1:
        raise DegenerateInputError("trials must be >= 1")
    rng = random.Random(seed)
    n = emp.n
    best = 0
    for _ in range(trials):
        g = _draw_point(rng, n)
        jac = jacobian(g, emp)
        rank = ffge_rank(jac, len(jac), n) if jac else 0
        best = max(best, rank)
    return {"rank": best, "identifiable": best == n}


def _emp_seed(seed: int, pattern: str) -> str:
    return f"{seed}:{pattern}"


def crosscheck(n: int, trials: int = 3, seed: int = 0, emps: Optional[Sequence[Emp]] = None) -> dict:
    """Compare the rank oracle with the combinatorial verdict on every covering EMP."""
    if not 2 <= n <= MAX_CROSSCHECK_N:
        raise DegenerateInputError(f"crosscheck supports 2 <= n <= {MAX_CROSSCHECK_N}, got {n}")
    items = enumerate_emps(n) if emps is None else ((e, nsc_check(e)) for e in emps)
    per_emp = []
    histogram: dict[str, Counter] = {}
    disagreements = []
    contiguous_ranks = Counter()
    for emp, cls in items:
        res = rank_test(emp, trials, _emp_seed(seed, emp.pattern))
        agree = res["identifiable"] == cls.valid
        per_emp.append(
            {"pattern": emp.pattern, "verdict": cls.verdict.value, "rank": res["rank"], "agree": agree}
        )
        histogram.setdefault(cls.verdict.value, Counter())[res["rank"]] += 1
        if cls.reason.rule is Rule.CONTIGUOUS_BLOCKS:
            contiguous_ranks[res["rank"]] += 1
        if not agree:
            disagreements.append(per_emp[-1])
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "total": len(per_emp),
        "agreements": len(per_emp) - len(disagreements),
        "disagreements": disagreements,
        "rank_histogram": {
            v: {str(r): c for r, c in sorted(h.items())} for v, h in sorted(histogram.items())
        },
        "contiguous_invalid_ranks": {str(r): c for r, c in sorted(contiguous_ranks.items())},
        "emps": per_emp,
    }
