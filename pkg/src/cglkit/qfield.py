"""Exact arithmetic in the rational function field Q(q).

Elements are kept in lowest terms over Z[q]: the numerator and denominator
are coprime (content included) and the denominator has a positive leading
coefficient, so structural equality is field equality.  Polynomial
arithmetic is delegated to :class:`flint.fmpz_poly`.
"""

from __future__ import annotations

from typing import Union

from flint import fmpz_poly

__all__ = [
    "RatQ",
    "ratq_arith",
    "qint",
    "qfactorial",
    "substitute_power",
    "cauchon_coeff",
    "ONE",
    "ZERO",
    "Q",
]

_ZERO_POLY = fmpz_poly([])
_ONE_POLY = fmpz_poly([1])

Scalar = Union["RatQ", int]


def _poly(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, int):
        return fmpz_poly([x])
    return fmpz_poly(list(x))


class RatQ:
    """An element ``num/den`` of Q(q) in canonical form.

    Instances are immutable.  Integers are accepted wherever a RatQ is
    expected in arithmetic.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _canonical: bool = False):
        num = _poly(num)
        den = _poly(den)
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("RatQ with zero denominator")
            if num.is_zero():
                den = _ONE_POLY
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                if den.leading_coefficient() < 0:
                    num = -num
                    den = -den
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def qpow(cls, k: int) -> "RatQ":
        """Return q**k for any integer k."""
        if k >= 0:
            return cls(fmpz_poly([0] * k + [1]), _ONE_POLY, _canonical=True)
        return cls(_ONE_POLY, fmpz_poly([0] * (-k) + [1]), _canonical=True)

    @classmethod
    def coerce(cls, x: Scalar) -> "RatQ":
        if isinstance(x, RatQ):
            return x
        if isinstance(x, int):
            return cls(fmpz_poly([x]), _ONE_POLY, _canonical=True)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatQ")

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: Scalar) -> "RatQ":
        if not isinstance(other, RatQ):
            if not isinstance(other, int):
                return NotImplemented
            other = RatQ.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatQ(self.num + other.num, _ONE_POLY, _canonical=True)
        if self.den == other.den:
            return RatQ(self.num + other.num, self.den)
        return RatQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatQ":
        return RatQ(-self.num, self.den, _canonical=True)

    def __sub__(self, other: Scalar) -> "RatQ":
        if not isinstance(other, (RatQ, int)):
            return NotImplemented
        return self + (-RatQ.coerce(other))

    def __rsub__(self, other: Scalar) -> "RatQ":
        return RatQ.coerce(other) + (-self)

    def __mul__(self, other: Scalar) -> "RatQ":
        if not isinstance(other, RatQ):
            if not isinstance(other, int):
                return NotImplemented
            other = RatQ.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatQ(self.num * other.num, _ONE_POLY, _canonical=True)
        # cross-cancel keeps intermediate degrees small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n = (self.num // g1) * (other.num // g2)
        d = (self.den // g2) * (other.den // g1)
        if n.is_zero():
            return ZERO
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        return RatQ(n, d, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatQ":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(q)")
        n, d = self.den, self.num
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        return RatQ(n, d, _canonical=True)

    def __truediv__(self, other: Scalar) -> "RatQ":
        if not isinstance(other, (RatQ, int)):
            return NotImplemented
        return self * RatQ.coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "RatQ":
        return RatQ.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatQ":
        if k < 0:
            return self.inverse() ** (-k)
        return RatQ(self.num**k, self.den**k, _canonical=True)

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RatQ.coerce(other)
        if not isinstance(other, RatQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                               tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def __reduce__(self):
        return (_from_coeffs, ([int(c) for c in self.num.coeffs()], [int(c) for c in self.den.coeffs()]))

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        n = _poly_str(self.num)
        if self.den.is_one():
            return n
        return f"({n})/({_poly_str(self.den)})"

    def __repr__(self) -> str:
        return f"RatQ({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "RatQ":
        """Parse a literal such as ``(1-q^2)/(1+q)``."""
        from ._parse import parse_ratq

        return parse_ratq(text)


def _from_coeffs(num: list, den: list) -> RatQ:
    return RatQ(fmpz_poly(num), fmpz_poly(den), _canonical=True)


def _poly_str(p: fmpz_poly) -> str:
    coeffs = [int(c) for c in p.coeffs()]
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mon = "q" if k == 1 else f"q^{k}"
            body = mon if a == 1 else f"{a}*{mon}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


ZERO = RatQ(_ZERO_POLY, _ONE_POLY, _canonical=True)
ONE = RatQ(_ONE_POLY, _ONE_POLY, _canonical=True)
Q = RatQ.qpow(1)


def ratq_arith(a: Scalar, b: Scalar, op: str) -> RatQ:
    """Apply ``op`` in {add, sub, mul, div} to two field elements."""
    a = RatQ.coerce(a)
    b = RatQ.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def qint(k: int) -> RatQ:
    """Return [k]_q with the factorial convention [0]_q = 1.

    For k >= 1 this is 1 + q + ... + q^(k-1).  The value at k = 0 differs
    from the usual q-integer (which is 0); it is only used inside
    :func:`qfactorial`.
    """
    if k < 0:
        raise ValueError("qint requires k >= 0")
    if k == 0:
        return ONE
    return RatQ(fmpz_poly([1] * k), _ONE_POLY, _canonical=True)


def qfactorial(k: int) -> RatQ:
    if k < 0:
        raise ValueError("qfactorial requires k >= 0")
    out = ONE
    for i in range(1, k + 1):
        out = out * qint(i)
    return out


def _inflate(p: fmpz_poly, c: int) -> fmpz_poly:
    coeffs = [int(x) for x in p.coeffs()]
    if not coeffs:
        return _ZERO_POLY
    out = [0] * ((len(coeffs) - 1) * c + 1)
    for i, x in enumerate(coeffs):
        out[i * c] = x
    return fmpz_poly(out)


def substitute_power(a: Scalar, c: int) -> RatQ:
    """Return ``a`` with q replaced by q**c (c a nonzero integer)."""
    if c == 0:
        raise ValueError("substitute_power requires c != 0")
    a = RatQ.coerce(a)
    if c == 1 or a.num.is_constant() and a.den.is_constant():
        return a
    if c > 0:
        return RatQ(_inflate(a.num, c), _inflate(a.den, c))
    k = -c
    dn, dd = a.num.degree(), a.den.degree()
    num = _inflate(fmpz_poly([int(x) for x in reversed(a.num.coeffs())]), k)
    den = _inflate(fmpz_poly([int(x) for x in reversed(a.den.coeffs())]), k)
    shift = k * (dd - dn)
    if shift >= 0:
        num = num * fmpz_poly([0] * shift + [1])
    else:
        den = den * fmpz_poly([0] * (-shift) + [1])
    return RatQ(num, den)


def cauchon_coeff(k: int, c: int) -> RatQ:
    """Return (1 - q^c)^(-k) / [k]!_{q^c}.

    ``c`` must be nonzero so that q^c is not a root of unity.
    """
    if c == 0:
        raise ValueError("cauchon_coeff requires c != 0 (q_j must not be a root of unity)")
    if k < 0:
        raise ValueError("cauchon_coeff requires k >= 0")
    if k == 0:
        return ONE
    base = ONE - RatQ.qpow(c)
    return (base**k * substitute_power(qfactorial(k), c)).inverse()
