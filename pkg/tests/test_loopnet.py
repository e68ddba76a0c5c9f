import pytest
import sympy as sp

from loopkit.emp import Emp
from loopkit.errors import DegenerateNetworkError, DomainError, UnsupportedSizeError
from loopkit.exactalg import Poly, RationalFunction
from loopkit.loopnet import (
    LoopNetwork,
    closed_loop_entry,
    closed_loop_matrix,
    io_map,
    loop_product,
    path_product,
    random_network,
    sensitivity,
    succ,
)

ONE = RationalFunction.const(1)


def rf(num, den=(1,)):
    return RationalFunction(Poly(num), Poly(den))


# Closed-loop matrices for 2- and 3-node loops as displayed, written with
# sympy symbols; checked against a symbolic inverse below.
G12, G21, G13, G32 = sp.symbols("G12 G21 G13 G32")
D2 = 1 - G12 * G21
T2_DISPLAYED = sp.Matrix([[1 / D2, G12 / D2], [G21 / D2, 1 / D2]])
D3 = 1 - G13 * G21 * G32
T3_DISPLAYED = sp.Matrix(
    [
        [1 / D3, G13 * G32 / D3, G13 / D3],
        [G21 / D3, 1 / D3, G13 * G21 / D3],
        [G21 * G32 / D3, G32 / D3, 1 / D3],
    ]
)


def test_displayed_matrices_are_symbolic_inverses():
    g2 = sp.Matrix([[0, G12], [G21, 0]])
    assert sp.simplify((sp.eye(2) - g2).inv() - T2_DISPLAYED) == sp.zeros(2, 2)
    g3 = sp.Matrix([[0, 0, G13], [G21, 0, 0], [0, G32, 0]])
    assert sp.simplify((sp.eye(3) - g3).inv() - T3_DISPLAYED) == sp.zeros(3, 3)


def _substitute(expr, mapping):
    """Evaluate a sympy expression in the symbols with RationalFunction values."""
    f = sp.lambdify(list(mapping), expr, modules=[{}])
    return f(*mapping.values())


@pytest.mark.parametrize("seed", range(5))
def test_full_io_map_n2_matches_display(seed):
    net = random_network(2, seed)
    vals = {G21: net.edges[0], G12: net.edges[1]}
    m = io_map(net, Emp(2, [1, 2], [1, 2]))
    for i in range(2):
        for k in range(2):
            assert m.entries[i][k] == _substitute(T2_DISPLAYED[i, k], vals)


@pytest.mark.parametrize("seed", range(5))
def test_full_io_map_n3_matches_display(seed):
    net = random_network(3, seed)
    vals = {G21: net.edges[0], G32: net.edges[1], G13: net.edges[2]}
    m = io_map(net, Emp(3, [1, 2, 3], [1, 2, 3]))
    for i in range(3):
        for k in range(3):
            assert m.entries[i][k] == _substitute(T3_DISPLAYED[i, k], vals)


class TestConstruction:
    def test_rejects_small(self):
        with pytest.raises(UnsupportedSizeError):
            LoopNetwork((rf([2]),))

    def test_rejects_zero_edge(self):
        with pytest.raises(DegenerateNetworkError):
            LoopNetwork((rf([2]), rf([])))

    def test_rejects_unit_loop_product(self):
        with pytest.raises(DegenerateNetworkError):
            LoopNetwork((rf([2]), rf([1], [2])))
        with pytest.raises(DegenerateNetworkError):
            LoopNetwork((rf([0, 1]), rf([1], [0, 1])))


class TestProducts:
    def test_loop_product_small(self):
        net = random_network(2, 1)
        assert loop_product(net) == net.edges[0] * net.edges[1]
        net3 = random_network(3, 1)
        g21, g32, g13 = net3.edges
        assert loop_product(net3) == g13 * g21 * g32

    def test_unit_edges(self):
        half = rf([1], [2])
        net = LoopNetwork((ONE, ONE, ONE, ONE, half))
        assert loop_product(net) == half
        # identity edges: loop product of the unit edges alone is 1
        assert ONE * ONE * ONE * ONE * ONE == ONE

    def test_path_products(self):
        net = random_network(4, 3)
        assert path_product(net, 2, 1) == net.gain(2, 1)
        assert path_product(net, 1, 3) == net.gain(1, 4) * net.gain(4, 3)
        with pytest.raises(DomainError):
            path_product(net, 2, 2)

    def test_sensitivity_examples(self):
        net = random_network(2, 4)
        assert sensitivity(net) == ONE / (ONE - net.gain(1, 2) * net.gain(2, 1))
        half = LoopNetwork((rf([1], [2]), ONE))
        assert sensitivity(half) == RationalFunction.const(2)
        net3 = random_network(3, 4)
        assert sensitivity(net3) == closed_loop_entry(net3, 2, 2)

    def test_closed_loop_examples(self):
        net = random_network(2, 8)
        g21, g12 = net.edges
        assert closed_loop_entry(net, 1, 2) == g12 / (ONE - g12 * g21)
        net3 = random_network(3, 8)
        g21, g32, g13 = net3.edges
        assert closed_loop_entry(net3, 3, 1) == g21 * g32 / (ONE - g13 * g21 * g32)

    @pytest.mark.parametrize("seed", range(4))
    def test_closed_loop_ratio(self, seed):
        net = random_network(5, seed)
        for k in range(1, 6):
            for i in range(1, 6):
                for j in range(1, 6):
                    if len({i, j, k}) == 3:
                        lhs = closed_loop_entry(net, i, k) / closed_loop_entry(net, j, k)
                        assert lhs == path_product(net, i, k) / path_product(net, j, k)


@pytest.mark.parametrize("n", range(2, 9))
def test_loop_identities(n):
    for seed in range(20):
        net = random_network(n, 1000 * n + seed)
        P = loop_product(net)
        R = sensitivity(net)
        assert R == ONE / (ONE - P)
        T = closed_loop_matrix(net)
        pp = {(i, k): path_product(net, i, k) for i in range(1, n + 1) for k in range(1, n + 1) if i != k}
        for (i, k), pik in pp.items():
            assert T[i - 1][k - 1] == pik * R
            assert P == pp[k, i] * pik
        for i in range(1, n + 1):
            nxt = succ(i, n)
            g = net.edge(i)
            assert T[i - 1][i - 1] == R
            for j in range(1, n + 1):
                if j not in (i, nxt):
                    assert pp[j, i] / pp[j, nxt] == g
                    assert pp[nxt, j] / pp[i, j] == g
                if j != i:
                    assert T[j - 1][i - 1] / T[j - 1][nxt - 1] == g
                if j != nxt:
                    assert T[nxt - 1][j - 1] / T[i - 1][j - 1] == g


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_closed_loop_matrix_inverts_i_minus_g(n):
    for seed in range(3):
        net = random_network(n, seed)
        T = closed_loop_matrix(net)
        # (I - G)[i][c] = delta - G_{i,c}; G_{i,c} nonzero only for c = pred(i)
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                acc = RationalFunction.const(0)
                for c in range(1, n + 1):
                    a = ONE if c == i else RationalFunction.const(0)
                    if succ(c, n) == i:
                        a = a - net.edge(c)
                    if not a.is_zero():
                        acc = acc + a * T[c - 1][k - 1]
                assert acc == (ONE if i == k else RationalFunction.const(0))


class TestIoMap:
    def test_block_form_of_contiguous_pattern(self):
        n, k = 6, 3
        net = random_network(n, 11)
        m = io_map(net, Emp(n, range(1, k + 1), range(k + 1, n + 1)))
        R = sensitivity(net)
        assert m.measured == (4, 5, 6) and m.excited == (1, 2, 3)
        for a, i in enumerate(range(k + 1, n + 1)):
            for b, j in enumerate(range(1, k + 1)):
                assert m.entries[a][b] == R * path_product(net, i, j)

    def test_empty_excitation(self):
        net = random_network(3, 0)
        m = io_map(net, Emp(3, [], [1, 2]))
        assert m.excited == () and m.entries == ((), ())

    def test_indexing(self):
        net = random_network(4, 2)
        m = io_map(net, Emp(4, [2, 4], [1, 3]))
        assert m[3, 2] == closed_loop_entry(net, 3, 2)
        with pytest.raises(KeyError):
            m[2, 2]

    def test_size_mismatch(self):
        with pytest.raises(DomainError):
            io_map(random_network(4, 0), Emp(3, [1], [2, 3]))


class TestRandomNetwork:
    def test_deterministic(self):
        assert random_network(6, 42) == random_network(6, 42)
        assert random_network(6, 42) != random_network(6, 43)

    def test_non_degenerate(self):
        for seed in range(30):
            net = random_network(5, seed)
            assert not (ONE - loop_product(net)).is_zero()

    def test_shape(self):
        net = random_network(4, 7, degree_bound=1)
        for g in net.edges:
            assert g.num.degree <= 1 and g.den.degree <= 1
            assert g.den.lc == 1
            assert all(c.denominator == 1 for c in g.num.coeffs + g.den.coeffs)

    def test_constant_edges(self):
        net = random_network(3, 5, degree_bound=0)
        assert all(g.den == Poly([1]) and g.num.degree == 0 for g in net.edges)
