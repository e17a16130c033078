"""Ladder fields Q(e1, ..., ek): each variable is a positive infinitesimal
relative to the subfield generated by the variables listed before it.

Elements are reduced fractions of ``flint.fmpq_mpoly`` polynomials in the
graded-lex order, with monic denominator.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import flint

from .expr import evaluate, format_poly_terms, parse_ast


class FieldMismatch(ValueError):
    pass


class RepresentationError(ValueError):
    pass


Scalar = Union[int, Fraction]


def _fq(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _mq(q) -> "flint.fmpq":
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def revlex_key(exps: Sequence[int]) -> tuple[int, ...]:
    """Sort key for magnitudes: smaller key means larger magnitude."""
    return tuple(reversed(exps))


class Ladder:
    """An ordered list of variable names, shallowest first."""

    __slots__ = ("names", "ctx", "index", "_one", "_zero")

    def __new__(cls, names: Iterable[str] = ()):
        return _ladder(tuple(names))

    @classmethod
    def standard(cls, k: int) -> "Ladder":
        return cls(f"e{i}" for i in range(1, k + 1))

    @property
    def k(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return "Q(" + ",".join(self.names) + ")" if self.names else "Q"

    def __reduce__(self):
        return (Ladder, (self.names,))

    def zero(self) -> "LadderElem":
        return self._zero

    def one(self) -> "LadderElem":
        return self._one

    def const(self, q: Scalar) -> "LadderElem":
        return LadderElem._raw(self, self.ctx.from_dict({(0,) * self.k: _mq(q)}) if q else self.ctx.from_dict({}), self.ctx.from_dict({(0,) * self.k: 1}))

    def var(self, name: Union[str, int]) -> "LadderElem":
        i = self.index[name] if isinstance(name, str) else name
        exps = [0] * self.k
        exps[i] = 1
        return LadderElem._raw(self, self.ctx.from_dict({tuple(exps): 1}), self.ctx.from_dict({(0,) * self.k: 1}))

    def gens(self) -> tuple["LadderElem", ...]:
        return tuple(self.var(i) for i in range(self.k))

    def monomial(self, exps: Sequence[int], coeff: Scalar = 1) -> "LadderElem":
        num = {tuple(max(e, 0) for e in exps): _mq(coeff)}
        den = {tuple(max(-e, 0) for e in exps): 1}
        return LadderElem._raw(self, self.ctx.from_dict(num), self.ctx.from_dict(den))

    def coerce(self, x) -> "LadderElem":
        if isinstance(x, LadderElem):
            if x.ladder is self:
                return x
            return x.to_ladder(self)
        if isinstance(x, (int, Fraction)):
            return self.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def parse(self, text: str) -> "LadderElem":
        env = {n: self.var(i) for i, n in enumerate(self.names)}
        return self.coerce(evaluate(parse_ast(text), env, self.const))

    def insert(self, name: str, position: int) -> "Ladder":
        if name in self.index:
            raise ValueError(f"variable {name!r} already in {self!r}")
        names = list(self.names)
        names.insert(position, name)
        return Ladder(names)


@lru_cache(maxsize=None)
def _ladder(names: tuple[str, ...]) -> Ladder:
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate ladder variables in {names}")
    self = object.__new__(Ladder)
    self.names = names
    self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
    self.index = {n: i for i, n in enumerate(names)}
    one = self.ctx.from_dict({(0,) * len(names): 1})
    self._one = LadderElem._raw(self, one, one)
    self._zero = LadderElem._raw(self, self.ctx.from_dict({}), one)
    return self


class LadderElem:
    """Exact element of a ladder field. Immutable."""

    __slots__ = ("ladder", "num", "den", "_key")

    @classmethod
    def _raw(cls, ladder: Ladder, num, den) -> "LadderElem":
        self = object.__new__(cls)
        self.ladder = ladder
        self.num = num
        self.den = den
        self._key = None
        return self

    @classmethod
    def make(cls, ladder: Ladder, num, den) -> "LadderElem":
        if den.is_zero():
            raise ZeroDivisionError("division by zero in ladder field")
        if num.is_zero():
            return ladder._zero
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls._raw(ladder, num, den)

    def check(self) -> None:
        """Raise RepresentationError unless the stored fraction is canonical."""
        if self.den.is_zero():
            raise RepresentationError("zero denominator")
        if self.num.is_zero():
            if not self.den.is_one():
                raise RepresentationError("zero must have denominator 1")
            return
        if self.den.leading_coefficient() != 1:
            raise RepresentationError("denominator not monic")
        if not self.num.gcd(self.den).is_one():
            raise RepresentationError("numerator and denominator share a factor")

    # arithmetic ---------------------------------------------------------

    def _other(self, other) -> "LadderElem | None":
        if isinstance(other, LadderElem):
            if other.ladder is not self.ladder:
                raise FieldMismatch(f"{self.ladder!r} vs {other.ladder!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ladder.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            s = self.num + o.num
            return LadderElem._raw(self.ladder, s, self.den) if not s.is_zero() else self.ladder._zero
        if self.den == o.den:
            return LadderElem.make(self.ladder, self.num + o.num, self.den)
        return LadderElem.make(self.ladder, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LadderElem._raw(self.ladder, -self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            p = self.num * o.num
            return LadderElem._raw(self.ladder, p, self.den) if not p.is_zero() else self.ladder._zero
        return LadderElem.make(self.ladder, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "LadderElem":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero in ladder field")
        return LadderElem.make(self.ladder, self.den, self.num)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        try:
            n = operator.index(n)
        except TypeError:
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return LadderElem._raw(self.ladder, self.num ** n, self.den ** n) if n else self.ladder._one

    # order ----------------------------------------------------------------

    def lead(self) -> tuple[Fraction, tuple[int, ...]]:
        """Coefficient and exponent vector of the dominant monomial."""
        if self.num.is_zero():
            raise ValueError("zero has no leading term")
        nc, ne = _dominant(self.num)
        if self.den.is_one():
            return nc, ne
        dc, de = _dominant(self.den)
        return nc / dc, tuple(a - b for a, b in zip(ne, de))

    def valuation(self) -> tuple[int, ...]:
        return self.lead()[1]

    def sign(self) -> int:
        if self.num.is_zero():
            return 0
        return 1 if self.lead()[0] > 0 else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        o = self._other(other)
        if o is None:
            raise TypeError(f"cannot compare LadderElem with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # identity ---------------------------------------------------------------

    def named_key(self):
        """Ladder-independent canonical key (vars named, zero exponents dropped)."""
        if self._key is None:
            names = self.ladder.names

            def side(p):
                return tuple(sorted(
                    (tuple((names[i], e) for i, e in enumerate(m) if e), (int(c.p), int(c.q)))
                    for m, c in zip(p.monoms(), p.coeffs())
                ))

            self._key = (side(self.num), side(self.den))
        return self._key

    def __eq__(self, other):
        if isinstance(other, LadderElem):
            if other.ladder is self.ladder:
                return self.num == other.num and self.den == other.den
            return self.named_key() == other.named_key()
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(self.named_key())

    def __bool__(self):
        return not self.num.is_zero()

    # inspection -------------------------------------------------------------

    def variables(self) -> frozenset[str]:
        names = self.ladder.names
        dn = self.num.degrees()
        dd = self.den.degrees()
        return frozenset(names[i] for i in range(len(names)) if dn[i] > 0 or dd[i] > 0)

    def is_rational(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if self.num.is_zero():
            return Fraction(0)
        return _fq(self.num.leading_coefficient()) / _fq(self.den.leading_coefficient())

    def to_ladder(self, target: Ladder) -> "LadderElem":
        """Re-express in another ladder containing all variables used here."""
        if target is self.ladder:
            return self
        src = self.ladder.names
        pos = []
        used = self.variables()
        for n in used:
            if n not in target.index:
                raise FieldMismatch(f"{self} uses {n}, absent from {target!r}")
        for n in src:
            pos.append(target.index.get(n))

        def move(p):
            out = {}
            for m, c in zip(p.monoms(), p.coeffs()):
                e = [0] * target.k
                for i, x in enumerate(m):
                    if x:
                        e[pos[i]] = x
                out[tuple(e)] = c
            return target.ctx.from_dict(out)

        return LadderElem.make(target, move(self.num), move(self.den))

    def __float__(self):
        return float(self.to_fraction())

    def __str__(self):
        names = self.ladder.names
        num = _format_poly(self.num, names)
        if self.den.is_one():
            return num
        den = _format_poly(self.den, names)
        if len(self.num) > 1:
            num = f"({num})"
        if not _is_var_power(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"LadderElem({str(self)!r} in {self.ladder!r})"


def _is_var_power(p) -> bool:
    if len(p) != 1:
        return False
    (m,) = p.monoms()
    return sum(1 for e in m if e) == 1 and p.coeffs()[0] == 1


def _dominant(p) -> tuple[Fraction, tuple[int, ...]]:
    best = None
    bc = None
    for m, c in zip(p.monoms(), p.coeffs()):
        k = m[::-1]
        if best is None or k < best:
            best, bc = k, c
    return _fq(bc), tuple(int(e) for e in reversed(best))


def _format_poly(p, names) -> str:
    terms = [
        (_fq(c), [(names[i], e) for i, e in enumerate(m)])
        for m, c in zip(p.monoms(), p.coeffs())
    ]
    return format_poly_terms(terms)


def ladder_sign(e: LadderElem) -> int:
    e.check()
    return e.sign()


def laurent_coefficients(x: LadderElem, var: int, upto: int) -> tuple[int, list[LadderElem]]:
    """Expand x as a Laurent series in ladder variable ``var``.

    Returns ``(n0, [c_n0, c_n0+1, ..., c_upto])`` where the c_i are free of
    ``var``; empty list when n0 > upto. ``x`` must be nonzero.
    """
    lad = x.ladder
    P = _split(x.num, var)
    Q = _split(x.den, var)
    p0, q0 = min(P), min(Q)
    n0 = p0 - q0
    one = lad.ctx.from_dict({(0,) * lad.k: 1})
    qlead = Q[q0]
    coeffs: list[LadderElem] = []
    for n in range(0, upto - n0 + 1):
        acc = LadderElem.make(lad, P.get(p0 + n, lad.ctx.from_dict({})), one)
        for j in range(1, n + 1):
            qj = Q.get(q0 + j)
            if qj is not None:
                acc = acc - LadderElem.make(lad, qj, one) * coeffs[n - j]
        coeffs.append(acc / LadderElem.make(lad, qlead, one))
    return n0, coeffs


def laurent_order(x: LadderElem, var: int) -> int:
    """Exponent of the lowest-order term of x in ``var``."""
    return int(min(m[var] for m in x.num.monoms())) - int(min(m[var] for m in x.den.monoms()))


def _split(p, var: int) -> dict:
    """Group terms of p by the exponent of ``var``; remaining polys omit it."""
    groups: dict[int, dict] = {}
    for m, c in zip(p.monoms(), p.coeffs()):
        k = m[var]
        e = list(m)
        e[var] = 0
        groups.setdefault(k, {})[tuple(e)] = c
    ctx = p.context()
    return {k: ctx.from_dict(v) for k, v in groups.items()}
