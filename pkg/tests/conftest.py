import random
from fractions import Fraction
from itertools import permutations

import pytest

from loopkit.exactalg import Poly, RationalFunction


def rand_poly(rng: random.Random, max_deg: int = 3, lo: int = -5, hi: int = 5) -> Poly:
    deg = rng.randint(0, max_deg)
    return Poly([Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(deg + 1)])


def rand_rf(rng: random.Random, max_deg: int = 2, nonzero: bool = False) -> RationalFunction:
    while True:
        num = rand_poly(rng, max_deg)
        den = rand_poly(rng, max_deg)
        if den.is_zero() or (nonzero and num.is_zero()):
            continue
        return RationalFunction(num, den)


def leibniz_det(m):
    """Determinant by summing over permutations; independent of elimination."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inv % 2 else 1)
        for r in range(n):
            term *= m[r][perm[r]]
            if not term:
                break
        total += term
    return total


def rank_by_minors(m, rows, cols):
    from itertools import combinations

    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                if leibniz_det([[m[r][c] for c in cs] for r in rs]):
                    return k
    return 0


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[num])
