"""The circle group [0,1) with addition mod 1 over a ladder field.

Circle sets are generalized sets contained in [0,1). A d-definable arc is
the trace of ``Z +_1 b`` for an M-definable Z ⊆ [0,1) and b realizing a cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .cuts import (
    Above,
    Below,
    Cut,
    GenSet,
    Principal,
    UnsupportedCut,
    format_cut,
    join_ladders,
    realize_in,
    trace,
)
from .ordfields import Ladder, LadderElem, SubfieldSpec
from .sets1d import Set1D
from .typedyn import ddef_trace

Value = Union[LadderElem, int, Fraction]


class IdentityViolation(AssertionError):
    pass


class DegenerateArguments(ValueError):
    pass


def _e(x: Value, lad: Ladder) -> LadderElem:
    return lad.coerce(x)


def _check_point(x: LadderElem) -> LadderElem:
    if x.sign() < 0 or (x - 1).sign() >= 0:
        raise ValueError(f"{x} is not in [0,1)")
    return x


def mod1(x: LadderElem) -> LadderElem:
    """Reduce an element with integer part in Q (finite over Q)."""
    while x.sign() < 0:
        x = x + 1
    while (x - 1).sign() >= 0:
        x = x - 1
    return x


def add_mod1(x: Value, y: Value) -> LadderElem:
    lad = _ladder_of(x, y)
    return mod1(_check_point(_e(x, lad)) + _check_point(_e(y, lad)))


def neg_mod1(x: Value) -> LadderElem:
    lad = _ladder_of(x)
    return mod1(-_check_point(_e(x, lad)))


def half(lad: Ladder = Ladder()) -> LadderElem:
    return lad.const(Fraction(1, 2))


def _ladder_of(*xs) -> Ladder:
    lad = Ladder()
    for x in xs:
        if isinstance(x, LadderElem):
            lad = join_ladders(lad, x.ladder)
    return lad


def _pos(y, m: LadderElem) -> int:
    """sign(y - m) for a point or cut y."""
    if isinstance(y, Cut):
        return y.compare(m)
    return (y - m).sign()


def R(x: Value, y, z: Value) -> bool:
    """y strictly inside the forward arc from x to z (y may be a cut)."""
    lad = _ladder_of(x, z, *(() if isinstance(y, Cut) else (y,)))
    if isinstance(y, Cut):
        lad = join_ladders(lad, y.model)
    x, z = _e(x, lad), _e(z, lad)
    if not isinstance(y, Cut):
        y = _e(y, lad)
    if x == z or (not isinstance(y, Cut) and (y == x or y == z)):
        raise DegenerateArguments("R needs pairwise distinct points")
    if isinstance(y, Cut) and (y.compare(x) == 0 or y.compare(z) == 0):
        raise DegenerateArguments("R needs pairwise distinct points")
    if (x - z).sign() < 0:
        return _pos(y, x) > 0 and _pos(y, z) < 0
    return _pos(y, x) > 0 or _pos(y, z) < 0


def unit_interval(model: Ladder) -> GenSet:
    return GenSet.build(model, [(Below(model.zero()), Below(model.one()))])


def circle_trace(Z: Set1D, c: Cut, model: Ladder) -> GenSet:
    """trace(Z +_1 b) on [0,1) for b realizing c in [0,1)."""
    T = ddef_trace(Z, c).without_provenance()
    U = unit_interval(model)
    return (T | T.shift(-1)) & U


def circle_complement(A: GenSet) -> GenSet:
    return unit_interval(A.model) - A


def circle_neg_set(A: GenSet) -> GenSet:
    """{-x mod 1 : x in A} for A ⊆ [0,1)."""
    N = A.neg()
    U = unit_interval(A.model)
    return (N.shift(1) & U) | (N & U)


def circle_neg_template(Z: Set1D) -> Set1D:
    N = Z.neg()
    U = Set1D.interval(Z.field, 0, 1, lo_closed=True)
    return (N.translate(1) & U) | (N & U)


def circle_neg_cut(c: Cut) -> Cut:
    """The cut of -b mod 1 for b realizing c in [0,1)."""
    if isinstance(c, Principal) and not c.value:
        return c
    n = c.neg()
    return n.shift(1) if n.compare(0) < 0 else n


@dataclass(frozen=True)
class CircleDDefPiece:
    """trace(template +_1 b) for b realizing ``shift``; template ⊆ [0,1)."""

    template: Set1D
    shift: Cut
    model: Ladder

    def evaluate(self) -> GenSet:
        return circle_trace(self.template, self.shift, self.model)

    def evaluate_by_realization(self) -> GenSet:
        spec, b = realize_in(self.shift, self.model)
        lad = spec.ambient
        U = Set1D.interval(lad, 0, 1, lo_closed=True)
        W = self.template.to_field(lad).translate(b)
        return trace((W & U) | (W.translate(-1) & U), spec)

    def negated(self) -> "CircleDDefPiece":
        return CircleDDefPiece(circle_neg_template(self.template), circle_neg_cut(self.shift), self.model)

    def complemented(self) -> "CircleDDefPiece":
        U = Set1D.interval(self.template.field, 0, 1, lo_closed=True)
        return CircleDDefPiece(U - self.template, self.shift, self.model)

    def __str__(self):
        t = str(self.template)
        if len(self.template.pieces) != 1 or t.startswith("{"):
            t = f"({t})"
        return f"{t} +1 {format_cut(self.shift)}"


@dataclass(frozen=True)
class CircleDecomposition:
    model: Ladder
    terms: tuple[tuple[CircleDDefPiece, ...], ...]
    branch: str

    def evaluate(self) -> GenSet:
        out = GenSet.empty(self.model)
        for term in self.terms:
            acc = unit_interval(self.model)
            for piece in term:
                acc = acc & piece.evaluate()
            out = out | acc
        return out

    def evaluate_by_realization(self) -> GenSet:
        out = GenSet.empty(self.model)
        for term in self.terms:
            acc = unit_interval(self.model)
            for piece in term:
                acc = acc & piece.evaluate_by_realization()
            out = out | acc
        return out

    def pieces(self) -> list[CircleDDefPiece]:
        return [p for t in self.terms for p in t]

    def __str__(self):
        return " u ".join("(" + " n ".join(str(p) for p in t) + ")" for t in self.terms)


def external_arc(a: Cut, model: Ladder | None = None) -> GenSet:
    """{x in M ∩ [0,1) : R(0, x, a)} = {x : 0 < x < a}."""
    model = join_ladders(model or Ladder(), a.model)
    if isinstance(a, Principal):
        if not a.value:
            raise DegenerateArguments("arc endpoint must differ from 0")
        a = Below(a.value)
    if a.compare(0) <= 0 or a.compare(1) >= 0:
        raise ValueError(f"{a} is not a cut inside (0,1)")
    return GenSet.build(model, [(Above(model.zero()), a)])


def decompose_arc(a: Cut, model: Ladder | None = None) -> CircleDecomposition:
    """Decompose the arc R(0, ., a) into d-definable arcs."""
    model = join_ladders(model or Ladder(), a.model)
    if isinstance(a, Principal):
        raise UnsupportedCut("principal cuts need no decomposition")
    if a.compare(0) <= 0 or a.compare(1) >= 0:
        raise ValueError(f"{a} is not a cut inside (0,1)")
    h = half(model)
    if a.compare(h) < 0:
        return CircleDecomposition(model, (_case_21(a, model),), "2.1")
    # R(0, 1/2, a): go through -a, which lies in (0, 1/2)
    A, B = _case_21(circle_neg_cut(a), model)
    no_zero = CircleDDefPiece(Set1D.interval(model, 0, 1), Principal(model.zero()), model)
    terms = ((A.negated().complemented(), no_zero), (B.negated().complemented(), no_zero))
    return CircleDecomposition(model, terms, "2.2")


def _case_21(a: Cut, model: Ladder) -> tuple[CircleDDefPiece, CircleDDefPiece]:
    h = half(model)
    arc = CircleDDefPiece(Set1D.interval(model, h, 1), a, model)  # R(1/2 + a, ., a)
    base = CircleDDefPiece(Set1D.interval(model, 0, h), Principal(model.zero()), model)  # R(0, ., 1/2)
    return arc, base


def lift_mod1(Z: Set1D, y: Value, M: SubfieldSpec) -> GenSet:
    """Both sides of the mod-1 lift identity in dimension one; they must agree."""
    lad = Z.field
    y = lad.coerce(y)
    U_N = Set1D.interval(lad, 0, 1, lo_closed=True)
    if (Z - U_N).pieces:
        raise ValueError("Z must lie inside [0,1)")
    _check_point(y)
    W = Z.translate(y)
    direct = trace((W & U_N) | (W.translate(-1) & U_N), M)
    T = trace(W, M)
    lifted = (T | T.shift(-1)) & unit_interval(M.model)
    if direct != lifted:
        raise IdentityViolation(f"mod-1 lift mismatch: {direct} vs {lifted}")
    return direct
