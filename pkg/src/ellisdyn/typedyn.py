"""Dynamics of 1-types over (M, +): d_p, the coheir product, decompositions.

For the additive group, ``d_p X = {g in M : X - g in p}``. With b realizing
p this is the trace of ``X - b`` on M, so each piece ``(lo, hi)`` of X is
sent to the generalized interval ``(lo - b, hi - b)``: endpoint cuts are the
shifts of ``-p`` by the endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .cuts import (
    Above,
    Below,
    Cut,
    GenSet,
    NegInf,
    OracleCut,
    PosInf,
    Principal,
    Realized,
    UndecidableOrder,
    UnsupportedCut,
    cut_cmp,
    cut_in_genset,
    cut_in_set,
    cut_of,
    format_cut,
    from_gap_data,
    gap_data,
    is_definable_cut,
    join_ladders,
    realize_in,
    trace,
    twin_layout,
)
from .ordfields import Ladder, LadderElem, SubfieldSpec
from .sets1d import Set1D


class NoExternalLevel(ValueError):
    pass


def _model_of(X: Set1D, *cuts: Cut) -> Ladder:
    model = X.field
    for c in cuts:
        model = join_ladders(model, c.model)
    return model


def _shift_cut(c: Cut, lo: Optional[LadderElem], low: bool, closed: bool) -> Cut:
    """The cut of ``endpoint + b`` where b realizes c (``None`` endpoint = ±inf)."""
    if lo is None:
        return NegInf() if low else PosInf()
    if isinstance(c, Principal):
        v = c.shift(lo).value
        if low:
            return Below(v) if closed else Above(v)
        return Above(v) if closed else Below(v)
    return c.shift(lo)


def d_p(X: Set1D, p: Cut) -> GenSet:
    """d_p X as a generalized set, recording the provenance (X, p)."""
    model = _model_of(X, p)
    q = p.neg()
    comps = [(_shift_cut(q, lo, True, lc), _shift_cut(q, hi, False, hc)) for lo, lc, hi, hc in X.pieces]
    out = GenSet.build(model, comps)
    return GenSet(model, out.components, (X, p))


def ddef_trace(template: Set1D, shift: Cut) -> GenSet:
    """trace(template + b) for b realizing ``shift``: the set d_{-shift}(template)."""
    return d_p(template, shift.neg())


@dataclass(frozen=True)
class DDefPiece:
    """A d-definable set: translate ``template`` by a realization of ``shift``."""

    template: Set1D
    shift: Cut

    def evaluate(self) -> GenSet:
        return ddef_trace(self.template, self.shift).without_provenance()

    def evaluate_by_realization(self) -> GenSet:
        spec, b = realize_in(self.shift, join_ladders(self.template.field, self.shift.model))
        return trace(self.template.to_field(spec.ambient).translate(b), spec)

    def __str__(self):
        t = str(self.template)
        if len(self.template.pieces) != 1 or t.startswith("{"):
            t = f"({t})"
        return f"{t} + {format_cut(self.shift)}"


@dataclass(frozen=True)
class Decomposition1D:
    """Union of intersections of d-definable pieces."""

    model: Ladder
    terms: tuple[tuple[DDefPiece, ...], ...]

    def evaluate(self) -> GenSet:
        out = GenSet.empty(self.model)
        for term in self.terms:
            acc = GenSet.full(self.model)
            for piece in term:
                acc = acc & piece.evaluate()
            out = out | acc
        return out

    def evaluate_by_realization(self) -> GenSet:
        out = GenSet.empty(self.model)
        for term in self.terms:
            acc = GenSet.full(self.model)
            for piece in term:
                acc = acc & piece.evaluate_by_realization()
            out = out | acc
        return out

    def pieces(self) -> list[DDefPiece]:
        return [p for t in self.terms for p in t]

    def __str__(self):
        if not self.terms:
            return "{}"
        return " u ".join("(" + " n ".join(str(p) for p in t) + ")" for t in self.terms)


# --------------------------------------------------------------------------
# coheir product


@dataclass(frozen=True)
class StarResult:
    product: Cut
    witness: tuple[LadderElem, LadderElem]


def _check_star(p: Cut) -> None:
    if isinstance(p, OracleCut):
        raise UnsupportedCut("oracle cuts are excluded from the coheir product")


def star(p: Cut, q: Cut, model: Optional[Ladder] = None) -> StarResult:
    """p * q via realizations: p at the coarser fresh level, q at the finer one."""
    _check_star(p)
    _check_star(q)
    model = join_ladders(join_ladders(model or Ladder(), p.model), q.model)
    lay = twin_layout(model)
    a = lay.realize(p, "a")
    b = lay.realize(q, "b")
    return StarResult(lay.cut(a + b), (a, b))


def star_symbolic(p: Cut, q: Cut, model: Optional[Ladder] = None) -> Cut:
    """p * q from the canonical data alone: the larger scale wins."""
    _check_star(p)
    _check_star(q)
    model = join_ladders(join_ladders(model or Ladder(), p.model), q.model)
    if isinstance(p, Principal):
        return _as_model(q, model).shift(p.value)
    if isinstance(q, Principal):
        return _as_model(p, model).shift(q.value)
    mp, sp, dp, gp = gap_data(p, model)
    mq, sq, dq, gq = gap_data(q, model)
    lay = twin_layout(model)
    # compare scales as ladder elements: a-copy for p, b-copy for q
    c = (lay.scale(dp, gp, "a") - lay.scale(dq, gq, "b")).sign()
    m = mp + mq
    if c > 0:
        return from_gap_data(model, m, sp, dp, gp)
    return from_gap_data(model, m, sq, dq, gq)


def _as_model(p: Cut, model: Ladder) -> Cut:
    if isinstance(p, Principal):
        return Principal(model.coerce(p.value))
    if isinstance(p, (Above, Below)):
        return type(p)(model.coerce(p.value))
    return p


# --------------------------------------------------------------------------
# d on generalized sets


def d_of_genset(Y: GenSet, p: Cut, use_provenance: bool = True) -> GenSet:
    """d_p applied to an externally definable set."""
    if use_provenance and Y.provenance is not None:
        X, q = Y.provenance
        return d_p(X, star(p, q, Y.model).product)
    if isinstance(p, Principal):
        return Y.shift(-p.value)
    model = join_ladders(Y.model, p.model)
    np_ = p.neg()
    comps = [(_star_end(np_, a, model), _star_end(np_, b, model)) for a, b in Y.components]
    return GenSet.build(model, comps)


def _star_end(np_: Cut, e: Cut, model: Ladder) -> Cut:
    return star_symbolic(np_, e, model)


def verify_lmap_limit(p: Cut, q: Cut, X: Set1D) -> bool:
    """X in p*q iff d_q(X) in p (the left-multiplication limit formula)."""
    lhs = cut_in_set(star(p, q, X.field).product, X)
    rhs = cut_in_genset(p, d_p(X, q))
    return lhs == rhs


# --------------------------------------------------------------------------
# decomposition (linearly ordered case)


def decompose_external_1d(Y: GenSet, collapse_definable: bool = False) -> Decomposition1D:
    """Write Y as a union of intersections of d-definable half-lines.

    Each component ``<lo | hi>`` becomes ``((0,+inf) + lo) n ((-inf,0) + hi)``.
    With ``collapse_definable`` an M-definable component is emitted as one
    piece with a principal shift instead.
    """
    model = Y.model
    right = Set1D.interval(model, 0, None)
    left = Set1D.interval(model, None, 0)
    terms = []
    for lo, hi in Y.components:
        if collapse_definable and is_definable_cut(lo) and is_definable_cut(hi):
            comp = GenSet(model, ((lo, hi),)).to_set1d()
            terms.append((DDefPiece(comp, Principal(model.zero())),))
            continue
        term = []
        if not isinstance(lo, NegInf):
            term.append(DDefPiece(right, lo))
        if not isinstance(hi, PosInf):
            term.append(DDefPiece(left, hi))
        if not term:
            term.append(DDefPiece(Set1D.full(model), Principal(model.zero())))
        terms.append(tuple(term))
    return Decomposition1D(model, tuple(terms))


# --------------------------------------------------------------------------
# separating sets and p_id


def _reach(*cuts: Cut) -> int:
    """Monomial exponent bound that reaches past every scale of the given cuts."""
    return 2 + max((abs(e) for c in cuts if isinstance(c, Realized) for e in c.deep), default=0)


def _candidates(p: Cut, model: Ladder, reach: int) -> list[LadderElem]:
    if isinstance(p, (Principal, Above, Below)):
        base = model.coerce(p.value)
    elif isinstance(p, Realized):
        base = p.m0
    elif isinstance(p, OracleCut):
        base = model.coerce(p.offset)
    else:
        base = model.zero()
    steps = [model.monomial(exps) for exps in itertools.product(range(-reach, reach + 1), repeat=model.k)]
    steps.sort(key=lambda m: m.valuation())
    out = [base]
    for s in steps:
        out += [base + s, base - s]
    return out


def separating_set(p1: Cut, p2: Cut) -> tuple[Cut, Set1D]:
    """(q, X) with d_q(X) in p1 and not in p2; q is always Principal(0)."""
    c = cut_cmp(p1, p2)
    if c == 0:
        raise ValueError("cuts are equal")
    model = join_ladders(p1.model, p2.model)
    zero = Principal(model.zero())
    lo, hi = (p2, p1) if c > 0 else (p1, p2)
    if isinstance(lo, Principal) and isinstance(hi, Principal):
        X = Set1D.point(model, hi.value if c > 0 else lo.value)
        return zero, X
    # look for m in M strictly between (or equal to a principal end)
    best = None
    reach = _reach(p1, p2)
    for m in _candidates(lo, model, reach) + _candidates(hi, model, reach):
        a, b = lo.compare(m), hi.compare(m)
        if a <= 0 and b >= 0 and not (a == 0 and b == 0):
            best = m
            break
    if best is None:
        best = _midpoint_search(lo, hi, model)
    closed = p1.compare(best) == 0
    if c > 0:
        X = Set1D.interval(model, best, None, lo_closed=closed)
    else:
        X = Set1D.interval(model, None, best, hi_closed=closed)
    if not (cut_in_set(p1, X) and not cut_in_set(p2, X)):
        raise AssertionError(f"separator {X} failed for {p1}, {p2}")
    return zero, X


def _midpoint_search(lo: Cut, hi: Cut, model: Ladder, rounds: int = 64) -> LadderElem:
    a, b = _finite_probe(lo, model, -1), _finite_probe(hi, model, 1)
    for _ in range(rounds):
        m = (a + b) / 2
        x, y = lo.compare(m), hi.compare(m)
        if x <= 0 and y >= 0:
            return m
        if x > 0:
            a = m
        else:
            b = m
    raise UndecidableOrder(f"no separating point found between {lo} and {hi}")


def _finite_probe(p: Cut, model: Ladder, direction: int, rounds: int = 64) -> LadderElem:
    m = model.const(direction)
    for _ in range(rounds):
        if p.compare(m) * direction <= 0:
            return m
        m = m * 2
    raise UndecidableOrder(f"{p} is not bounded by rationals")


def p_id_cut(M: SubfieldSpec) -> Cut:
    """The cut of the shallowest external variable above M's variables."""
    names = M.ambient.names
    member_idx = [i for i, n in enumerate(names) if n in M.members]
    if not member_idx:
        raise NoExternalLevel(f"{M.model!r} has no variables, so there is no valuational cut")
    ext = [i for i, n in enumerate(names) if n not in M.members and i < member_idx[-1]]
    if not ext:
        raise NoExternalLevel(f"no external variable above the variables of {M.model!r}")
    return cut_of(M.ambient.var(ext[0]), M)


def p_id_formulas_hold(p: Cut, model: Ladder, bound: int = 20) -> bool:
    """p sits above q*s and below 1/n for every generator s, tested q and n."""
    if not model.k:
        return False
    s = model.var(model.k - 1)
    for n in range(1, bound + 1):
        if p.compare(model.const(1) / n) >= 0:
            return False
        if p.compare(s * n) <= 0 or p.compare(s / n) <= 0:
            return False
    return True


def pool(model: Ladder, pid: Cut) -> list[Cut]:
    """The nine-cut pool used for associativity checks."""
    z, one, two = model.zero(), model.one(), model.const(2)
    return [Principal(z), Principal(one), Above(z), Above(one), Below(z), Below(two), PosInf(), NegInf(), pid]


def realization_check(X: Set1D, p: Cut, ambient_pref: Optional[Sequence[str]] = None) -> GenSet:
    """trace(X - b) for a realization b of p: the dual route for d_p."""
    model = _model_of(X, p)
    spec, b = realize_in(p, model)
    Xn = X.to_field(spec.ambient)
    return trace(Xn.translate(-b), spec)
