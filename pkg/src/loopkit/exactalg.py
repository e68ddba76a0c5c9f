"""Exact arithmetic: rationals, univariate polynomials, rational functions,
dual numbers and fraction-free rank.

Scalars are :class:`fractions.Fraction`. Polynomials in ``z`` hold their
coefficients in ascending degree with no trailing zeros, so the zero
polynomial is ``Poly(())``. Rational functions are kept in canonical form:
numerator and denominator coprime, denominator monic. Canonical form makes
equality of rational functions plain componentwise equality.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import DegenerateInputError, DegreeCapError, PoleError

Rat = Fraction
Scalar = Union[int, Fraction]

DEFAULT_DEGREE_CAP = 64
DEGREE_CAP_ENV = "LOOPKIT_DEGREE_CAP"

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_ZERO = Fraction(0)
_ONE = Fraction(1)


def degree_cap() -> int:
    """Current polynomial degree guard (``LOOPKIT_DEGREE_CAP`` overrides the default)."""
    raw = os.environ.get(DEGREE_CAP_ENV)
    if raw is None:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DegenerateInputError(f"{DEGREE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise DegenerateInputError(f"{DEGREE_CAP_ENV} must be non-negative, got {cap}")
    return cap


def parse_rat(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal and float notation is rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    m = _RAT_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational string: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rat(q: Scalar) -> str:
    return str(Fraction(q))


class Poly:
    """Univariate polynomial over the rationals, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # caller guarantees Fractions and no trailing zero
        p = cls.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def _trim(cls, cs: list) -> "Poly":
        while cs and not cs[-1]:
            cs.pop()
        return cls._raw(tuple(cs))

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = Fraction(c)
        return cls._raw((c,) if c else ())

    @classmethod
    def z(cls) -> "Poly":
        return cls._raw((_ZERO, _ONE))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return _ZERO
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and c == 1:
                t = mono
            elif mono and c == -1:
                t = "-" + mono
            elif mono:
                t = f"({c})*{mono}" if c.denominator != 1 else f"{c}*{mono}"
            else:
                t = f"({c})" if c.denominator != 1 else str(c)
            terms.append(t)
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] += c
        return Poly._trim(cs)

    __radd__ = __add__

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        if len(b) == 1:
            return self.scale(b[0])
        if len(a) == 1:
            return other.scale(a[0])
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly._raw(tuple(out))

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(())
        if c == 1:
            return self
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = 1 / self.coeffs[-1]
        return Poly._raw(tuple(x * inv for x in self.coeffs[:-1]) + (_ONE,))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.coeffs:
            raise DegenerateInputError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.coeffs
        dl = len(d)
        if len(r) < dl:
            return Poly._raw(()), self
        lead = d[-1]
        monic = lead == 1
        q = [_ZERO] * (len(r) - dl + 1)
        for k in range(len(r) - dl, -1, -1):
            c = r[k + dl - 1]
            if not c:
                continue
            if not monic:
                c = c / lead
            q[k] = c
            for i in range(dl - 1):
                r[k + i] -= c * d[i]
            r[k + dl - 1] = _ZERO
        return Poly._trim(q), Poly._trim(r[: dl - 1])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r.coeffs:
            raise DegenerateInputError("inexact polynomial division")
        return q

    def __call__(self, z0: Scalar):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(tuple(k * c for k, c in enumerate(self.coeffs) if k))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over the rationals."""
    if a.is_zero() and b.is_zero():
        raise DegenerateInputError("gcd of two zero polynomials")
    if a.degree < b.degree:
        a, b = b, a
    if b.is_zero():
        return a.monic()
    if b.degree == 0:
        return Poly._raw((_ONE,))
    a, b = a.monic(), b.monic()
    while b.coeffs:
        r = (a % b).monic()
        a, b = b, r
        if b.degree == 0:
            return Poly._raw((_ONE,))
    return a


_POLY_ONE = Poly._raw((_ONE,))
_POLY_ZERO = Poly._raw(())


def _check_degree(num: Poly, den: Poly) -> None:
    cap = degree_cap()
    if num.degree > cap or den.degree > cap:
        raise DegreeCapError(
            f"degree {max(num.degree, den.degree)} exceeds cap {cap} "
            f"(set {DEGREE_CAP_ENV} to raise it)"
        )


class RationalFunction:
    """Canonical ratio ``num/den`` of polynomials in ``z``.

    Construct with ``RationalFunction(num, den)`` (normalizes) or
    :func:`rf_normalize`. Supports ``+ - * /`` with other rational
    functions and with rational scalars.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Poly, Iterable[Scalar], Scalar] = 0, den=None):
        num = _as_poly(num)
        den = _POLY_ONE if den is None else _as_poly(den)
        n, d = _normalize_parts(num, den)
        self.num: Poly = n
        self.den: Poly = d

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RationalFunction":
        f = cls.__new__(cls)
        f.num = num
        f.den = den
        return f

    @classmethod
    def const(cls, c: Scalar) -> "RationalFunction":
        return cls._raw(Poly.const(c), _POLY_ONE)

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs
        if isinstance(other, (int, Fraction)):
            return self.den.coeffs == (_ONE,) and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash(("RF", self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.coeffs == (_ONE,):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __add__(self, other):
        return _binop(self, other, "add")

    def __radd__(self, other):
        return _binop(other, self, "add")

    def __sub__(self, other):
        return _binop(self, other, "sub")

    def __rsub__(self, other):
        return _binop(other, self, "sub")

    def __mul__(self, other):
        return _binop(self, other, "mul")

    def __rmul__(self, other):
        return _binop(other, self, "mul")

    def __truediv__(self, other):
        return _binop(self, other, "div")

    def __rtruediv__(self, other):
        return _binop(other, self, "div")

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __call__(self, z0: Scalar) -> Fraction:
        return rf_eval(self, z0)

    def inverse(self) -> "RationalFunction":
        return rf_arith(RationalFunction.const(1), self, "div")


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return Poly(x)


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")


def _binop(a, b, op):
    try:
        a, b = _as_rf(a), _as_rf(b)
    except TypeError:
        return NotImplemented
    return rf_arith(a, b, op)


def _normalize_parts(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero():
        raise DegenerateInputError("zero denominator")
    if num.is_zero():
        return _POLY_ZERO, _POLY_ONE
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    lead = den.lc
    if lead != 1:
        inv = 1 / lead
        num = num.scale(inv)
        den = den.scale(inv)
    _check_degree(num, den)
    return num, den


def rf_normalize(num: Poly, den: Poly) -> RationalFunction:
    """Reduce ``num/den`` to coprime form with a monic denominator."""
    n, d = _normalize_parts(_as_poly(num), _as_poly(den))
    return RationalFunction._raw(n, d)


def _mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if a.is_zero() or b.is_zero():
        return RationalFunction._raw(_POLY_ZERO, _POLY_ONE)
    # cross-cancel so the product of canonical inputs stays canonical
    g1 = poly_gcd(a.num, b.den)
    g2 = poly_gcd(b.num, a.den)
    an, bd = (a.num.exact_div(g1), b.den.exact_div(g1)) if g1.degree > 0 else (a.num, b.den)
    bn, ad = (b.num.exact_div(g2), a.den.exact_div(g2)) if g2.degree > 0 else (b.num, a.den)
    num, den = an * bn, ad * bd
    _check_degree(num, den)
    return RationalFunction._raw(num, den)


def _add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.den == b.den:
        return rf_normalize(a.num + b.num, a.den)
    g = poly_gcd(a.den, b.den)
    if g.degree == 0:
        num = a.num * b.den + b.num * a.den
        den = a.den * b.den
        if num.is_zero():
            return RationalFunction._raw(_POLY_ZERO, _POLY_ONE)
        _check_degree(num, den)
        return RationalFunction._raw(num, den)
    ad, bd = a.den.exact_div(g), b.den.exact_div(g)
    num = a.num * bd + b.num * ad
    if num.is_zero():
        return RationalFunction._raw(_POLY_ZERO, _POLY_ONE)
    h = poly_gcd(num, g)
    if h.degree > 0:
        num = num.exact_div(h)
        g = g.exact_div(h)
    den = ad * bd * g
    _check_degree(num, den)
    return RationalFunction._raw(num, den)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Exact ``a op b`` for ``op`` in ``add``, ``sub``, ``mul``, ``div``."""
    if op == "add":
        return _add(a, b)
    if op == "sub":
        return _add(a, RationalFunction._raw(-b.num, b.den))
    if op == "mul":
        return _mul(a, b)
    if op == "div":
        if b.is_zero():
            raise DegenerateInputError("division by the zero rational function")
        lead = b.num.lc
        inv = RationalFunction._raw(b.den.scale(1 / lead), b.num.scale(1 / lead))
        return _mul(a, inv)
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(f: RationalFunction, z0: Scalar) -> Fraction:
    z0 = Fraction(z0)
    d = f.den(z0)
    if d == 0:
        raise PoleError(z0)
    return Fraction(f.num(z0)) / d


class DualRat:
    """Rational value carrying exact partial derivatives with respect to n seeds."""

    __slots__ = ("value", "derivs")

    def __init__(self, value: Scalar, derivs: Sequence[Scalar]):
        self.value = Fraction(value)
        self.derivs = tuple(Fraction(d) for d in derivs)

    @classmethod
    def _raw(cls, value, derivs):
        x = cls.__new__(cls)
        x.value = value
        x.derivs = derivs
        return x

    def _lift(self, other) -> "DualRat":
        if isinstance(other, DualRat):
            if len(other.derivs) != len(self.derivs):
                raise DegenerateInputError("dual numbers with different seed counts")
            return other
        if isinstance(other, (int, Fraction)):
            return DualRat._raw(Fraction(other), (_ZERO,) * len(self.derivs))
        raise TypeError(type(other).__name__)

    def __add__(self, other):
        o = self._lift(other)
        return DualRat._raw(self.value + o.value, tuple(x + y for x, y in zip(self.derivs, o.derivs)))

    __radd__ = __add__

    def __neg__(self):
        return DualRat._raw(-self.value, tuple(-x for x in self.derivs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DualRat._raw(self.value * other, tuple(x * other for x in self.derivs))
        o = self._lift(other)
        a, b = self.value, o.value
        return DualRat._raw(a * b, tuple(a * y + b * x for x, y in zip(self.derivs, o.derivs)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.value == 0:
            raise DegenerateInputError("dual division by zero value")
        inv = 1 / o.value
        q = self.value * inv
        return DualRat._raw(q, tuple((x - q * y) * inv for x, y in zip(self.derivs, o.derivs)))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other):
        if isinstance(other, DualRat):
            return self.value == other.value and self.derivs == other.derivs
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.derivs))

    def __repr__(self):
        return f"DualRat({self.value}, {[str(d) for d in self.derivs]})"


def dual_lift(edges: Sequence[Scalar]) -> list[DualRat]:
    """Seed each scalar with the unit vector of its own partial derivative."""
    n = len(edges)
    out = []
    for i, g in enumerate(edges):
        derivs = [_ZERO] * n
        derivs[i] = _ONE
        out.append(DualRat._raw(Fraction(g), tuple(derivs)))
    return out


def ffge_rank(m: Sequence[Sequence[Scalar]], rows: int, cols: int) -> int:
    """Exact rank by fraction-free (Bareiss) elimination with pivot search.

    Each row is first scaled to integers by the lcm of its denominators,
    which does not change the rank; every later division is exact.
    """
    if rows < 1 or cols < 1:
        raise DegenerateInputError("rank needs at least one row and one column")
    a = []
    for r in range(rows):
        row = [Fraction(x) for x in m[r][:cols]]
        mult = lcm(*(x.denominator for x in row))
        a.append([x.numerator * (mult // x.denominator) for x in row])
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((i for i in range(rank, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        p = pr[c]
        for i in range(rank + 1, rows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, cols):
                row[j] = (p * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank
