"""Q(tau) with tau bound to a transcendental constant (pi by default).

Zero tests are symbolic; signs of nonzero elements are found by refining
rational enclosures of the constant until interval evaluation excludes 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import flint
import mpmath

from .expr import evaluate, format_poly_terms, parse_ast

Interval = tuple[Fraction, Fraction]


class UnknownOracle(KeyError):
    pass


def _raw_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def _mp_enclosure(name: str) -> Callable[[int], Interval]:
    def refine(n: int) -> Interval:
        return _enclose(name, n)

    return refine


@lru_cache(maxsize=4096)
def _enclose(name: str, n: int) -> Interval:
    ctx = mpmath.iv
    old = ctx.prec
    ctx.prec = 24 + 12 * n
    try:
        raw_lo, raw_hi = getattr(ctx, name)._mpi_
    finally:
        ctx.prec = old
    lo, hi = _raw_fraction(raw_lo), _raw_fraction(raw_hi)
    if not lo < hi:
        raise AssertionError("degenerate enclosure of an irrational constant")
    return lo, hi


@dataclass(frozen=True)
class ConstOracle:
    """Nested rational enclosures l_n < c < u_n of a fixed constant."""

    oracle_id: str
    refine: Callable[[int], Interval]

    def __call__(self, n: int) -> Interval:
        return self.refine(n)


ORACLES: dict[str, ConstOracle] = {
    "pi": ConstOracle("pi", _mp_enclosure("pi")),
    "e": ConstOracle("e", _mp_enclosure("e")),
}


def get_oracle(oracle_id: str) -> ConstOracle:
    try:
        return ORACLES[oracle_id]
    except KeyError:
        raise UnknownOracle(oracle_id) from None


def _fmpq(q) -> flint.fmpq:
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _ieval(poly: flint.fmpq_poly, iv: Interval) -> Interval:
    lo, hi = iv
    acc = (Fraction(0), Fraction(0))
    for c in reversed(poly.coeffs()):
        a, b = acc
        prods = (a * lo, a * hi, b * lo, b * hi)
        c = _frac(c)
        acc = (min(prods) + c, max(prods) + c)
    return acc


Scalar = Union[int, Fraction]


class TranscElem:
    """Element num(tau)/den(tau) of Q(tau), reduced with monic denominator."""

    __slots__ = ("num", "den", "oracle_id")

    def __init__(self, num, den=None, oracle_id: str = "pi"):
        num = num if isinstance(num, flint.fmpq_poly) else flint.fmpq_poly([_fmpq(c) for c in num])
        den = flint.fmpq_poly([1]) if den is None else (den if isinstance(den, flint.fmpq_poly) else flint.fmpq_poly([_fmpq(c) for c in den]))
        if den.is_zero():
            raise ZeroDivisionError("division by zero in Q(tau)")
        if num.is_zero():
            den = flint.fmpq_poly([1])
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lc = den[den.degree()]
            num, den = num / lc, den / lc
        self.num, self.den, self.oracle_id = num, den, oracle_id

    @classmethod
    def tau(cls, oracle_id: str = "pi") -> "TranscElem":
        return cls([0, 1], oracle_id=oracle_id)

    @classmethod
    def const(cls, q: Scalar, oracle_id: str = "pi") -> "TranscElem":
        return cls([q], oracle_id=oracle_id)

    @classmethod
    def parse(cls, text: str, oracle_id: str = "pi") -> "TranscElem":
        env = {"tau": cls.tau(oracle_id)}
        out = evaluate(parse_ast(text), env, lambda q: cls.const(q, oracle_id))
        return out if isinstance(out, TranscElem) else cls.const(out, oracle_id)

    def _other(self, other):
        if isinstance(other, TranscElem):
            if other.oracle_id != self.oracle_id:
                raise ValueError(f"oracle mismatch {self.oracle_id} vs {other.oracle_id}")
            return other
        if isinstance(other, (int, Fraction)):
            return TranscElem.const(other, self.oracle_id)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TranscElem(self.num * o.den + o.num * self.den, self.den * o.den, self.oracle_id)

    __radd__ = __add__

    def __neg__(self):
        return TranscElem(-self.num, self.den, self.oracle_id)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TranscElem(self.num * o.num, self.den * o.den, self.oracle_id)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero in Q(tau)")
        return TranscElem(self.num * o.den, self.den * o.num, self.oracle_id)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return (TranscElem.const(1, self.oracle_id) / self) ** (-n)
        return TranscElem(self.num**n, self.den**n, self.oracle_id)

    def __eq__(self, other):
        o = self._other(other) if isinstance(other, (TranscElem, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((tuple(map(str, self.num.coeffs())), tuple(map(str, self.den.coeffs())), self.oracle_id))

    def __bool__(self):
        return not self.num.is_zero()

    def is_rational(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} depends on tau")
        return _frac(self.num[0]) if not self.num.is_zero() else Fraction(0)

    def sign(self) -> int:
        return transc_sign(self)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            t = +getattr(mpmath, self.oracle_id)

            def ev(p):
                return sum((mpmath.mpf(int(c.p)) / int(c.q)) * t**i for i, c in enumerate(p.coeffs()))

            return ev(self.num) / ev(self.den)

    def __str__(self):
        def fmt(p):
            terms = [(_frac(p[i]), [("tau", i)]) for i in range(p.degree(), -1, -1) if p[i] != 0]
            return format_poly_terms(terms)

        num = fmt(self.num)
        if self.den.degree() == 0:
            return num
        if len([c for c in self.num.coeffs() if c != 0]) > 1:
            num = f"({num})"
        return f"{num}/({fmt(self.den)})"

    def __repr__(self):
        return f"TranscElem({str(self)!r}, oracle={self.oracle_id})"


def transc_sign(e: TranscElem, max_refinements: int = 400) -> int:
    if e.num.is_zero():
        return 0
    if e.is_rational():
        q = e.to_fraction()
        return (q > 0) - (q < 0)
    oracle = get_oracle(e.oracle_id)
    for n in range(max_refinements):
        iv = oracle(n)
        nl, nh = _ieval(e.num, iv)
        dl, dh = _ieval(e.den, iv)
        if (nl > 0 or nh < 0) and (dl > 0 or dh < 0):
            return (1 if nl > 0 else -1) * (1 if dl > 0 else -1)
    raise ArithmeticError(f"sign of {e} not resolved after {max_refinements} refinements")
