from fractions import Fraction as F

import pytest

from loopkit.emp import Emp
from loopkit.exactalg import DualRat, Poly, RationalFunction, rf_eval
from loopkit.loopnet import LoopNetwork, io_map
from loopkit.oracle import DegeneratePointError, crosscheck, jacobian, rank_test, scalar_io_map

FULL2 = Emp(2, [1, 2], [1, 2])


def test_two_node_values():
    assert scalar_io_map([F(2), F(3)], FULL2) == [F(-1, 5), F(-3, 5), F(-2, 5), F(-1, 5)]


def test_zero_edge():
    vals = scalar_io_map([F(0), F(5), F(7)], Emp(3, [1, 2, 3], [1, 2, 3]))
    # edge 1->2 is zero, so every path crossing it vanishes
    t = dict(zip([(i, k) for i in (1, 2, 3) for k in (1, 2, 3)], vals))
    assert t[2, 1] == 0 and t[3, 1] == 0 and t[2, 3] == 0
    assert t[3, 2] == 5 and t[1, 1] == 1


def test_degenerate_point():
    with pytest.raises(DegeneratePointError):
        scalar_io_map([F(2), F(1, 2)], FULL2)


def test_consistent_with_rational_function_map():
    g = [F(2), F(-3), F(1, 2), F(5)]
    emp = Emp.from_pattern("MEBE")
    net = LoopNetwork(tuple(RationalFunction.const(x) for x in g))
    m = io_map(net, emp)
    expected = [rf_eval(f, 0) for row in m.entries for f in row]
    assert scalar_io_map(g, emp) == expected
    # and at a non-constant network evaluated at a point
    z = Poly.z()
    edges = (RationalFunction(z + 1, z + 3), RationalFunction(2, z), RationalFunction(z, z - 5), RationalFunction(3))
    z0 = F(7, 2)
    m = io_map(LoopNetwork(edges), emp)
    assert scalar_io_map([rf_eval(e, z0) for e in edges], emp) == [rf_eval(f, z0) for row in m.entries for f in row]


def test_jacobian_hand_derivative():
    jac = jacobian([F(2), F(3)], FULL2)
    # d/dg1 of 1/(1 - g1 g2) = g2 / (1 - g1 g2)^2
    assert jac[0][0] == F(3, 25)
    assert len(jac) == 4 and all(len(r) == 2 for r in jac)


def test_unseeded_duals_give_zero_jacobian():
    g = [DualRat(x, [0, 0, 0]) for x in (F(2), F(3), F(5))]
    out = scalar_io_map(g, Emp(3, [1, 2, 3], [1, 2, 3]))
    assert all(d == 0 for e in out for d in e.derivs)


def _hand_partials_n3(g, i, k):
    """Partials of T_ik for a 3-loop, written out by hand."""
    g1, g2, g3 = g
    P = g1 * g2 * g3
    D = 1 - P
    dP = [g2 * g3, g1 * g3, g1 * g2]
    # path products P_ik as monomials: exponent vectors over (g1, g2, g3)
    paths = {(2, 1): (1, 0, 0), (3, 2): (0, 1, 0), (1, 3): (0, 0, 1),
             (3, 1): (1, 1, 0), (1, 2): (0, 1, 1), (2, 3): (1, 0, 1)}
    e = paths.get((i, k), (0, 0, 0))
    mono = g1 ** e[0] * g2 ** e[1] * g3 ** e[2]
    out = []
    for v in range(3):
        dmono = F(0) if not e[v] else mono / g[v]
        out.append(dmono / D + mono * dP[v] / D**2)
    return out


def test_jacobian_matches_hand_formulas():
    emp = Emp(3, [1, 2, 3], [1, 2, 3])
    for g in ([F(2), F(3), F(-1)], [F(1, 2), F(-4), F(7, 3)], [F(5), F(1), F(-2)]):
        jac = jacobian(g, emp)
        idx = [(i, k) for i in (1, 2, 3) for k in (1, 2, 3)]
        for row, (i, k) in zip(jac, idx):
            assert row == _hand_partials_n3(g, i, k)


def test_finite_differences():
    import random

    rng = random.Random(3)
    emp = Emp.from_pattern("MEBEM")
    h = F(1, 1000)
    for _ in range(10):
        g = [F(rng.randint(-9, 9) or 1, rng.randint(1, 3)) for _ in range(5)]
        try:
            base = scalar_io_map(g, emp)
        except DegeneratePointError:
            continue
        jac = jacobian(g, emp)
        for v in range(5):
            gp = list(g)
            gp[v] += h
            fd = [(a - b) / h for a, b in zip(scalar_io_map(gp, emp), base)]
            scale = max(1, max(abs(j[v]) for j in jac))
            for row, d in zip(jac, fd):
                # forward difference error is O(h); curvature bounded at these points
                assert abs(row[v] - d) <= 1000 * h * scale


class TestRankTest:
    def test_alternating_four(self):
        assert rank_test(Emp(4, [2, 4], [1, 3]), 3, 0) == {"rank": 4, "identifiable": True}

    def test_contiguous_five(self):
        assert rank_test(Emp(5, [1, 2, 3], [4, 5]), 3, 0) == {"rank": 4, "identifiable": False}

    def test_single_excitation(self):
        res = rank_test(Emp(3, [1], [2, 3]), 3, 0)
        assert res["rank"] <= 2 and not res["identifiable"]

    def test_no_measurement(self):
        assert rank_test(Emp(3, [1, 2, 3], []), 2, 0)["rank"] == 0

    def test_deterministic(self):
        emp = Emp.from_pattern("MEEMEB")
        assert rank_test(emp, 2, 9) == rank_test(emp, 2, 9)

    def test_rotation_invariance(self):
        emp = Emp.from_pattern("MEEMM")
        base = rank_test(emp, 2, 1)["rank"]
        for shift in range(1, 5):
            assert rank_test(emp.rotated(shift), 2, 1)["rank"] == base


def test_rank_invariant_under_relabeling_at_fixed_point():
    from loopkit.exactalg import ffge_rank

    emp = Emp.from_pattern("EMMEB")
    g = [F(2), F(-3), F(4), F(1, 2), F(5)]
    jac = jacobian(g, emp)
    base = ffge_rank(jac, len(jac), 5)
    for s in range(1, 5):
        gs = [g[(i - s) % 5] for i in range(5)]
        js = jacobian(gs, emp.rotated(s))
        assert ffge_rank(js, len(js), 5) == base


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_crosscheck_small(n):
    rep = crosscheck(n, 3, 0)
    assert rep["total"] == 3**n
    assert rep["agreements"] == rep["total"] and rep["disagreements"] == []
    assert rep["contiguous_invalid_ranks"] == {str(n - 1): n * (n - 1)}


def test_crosscheck_two_rank_profile():
    rep = crosscheck(2, 1, 4)
    assert rep["rank_histogram"]["invalid"] == {"0": 2, "1": 2}
    ranks = {e["pattern"]: e["rank"] for e in rep["emps"]}
    assert ranks["EE"] == 0 and ranks["MM"] == 0
