"""Cuts over a small ladder field M, and generalized sets bounded by cuts.

A non-principal cut over M = Q(s_1, ..., s_r) sits in a gap of M. Every gap
cut we support has the shape ``m0 + side * T`` where ``T`` is a positive
monomial scale not in the value group of M:

* ``Above(m)`` / ``Below(m)``: T below every positive element of M,
* ``PosInf`` / ``NegInf``: T above every element of M,
* ``Realized``: ``T = t^gsign * s_j^deep_j * ...`` with ``t`` an external
  variable lying between two variables of M; ``deep`` lists the exponents of
  the M-variables deeper than ``t``.

The data ``(m0, side, deep, gsign)`` is ladder-independent once ``m0`` is
truncated modulo the scale (``canonical_m0``), which makes equality of cuts
syntactic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Optional, Union

from .ordfields import (
    FieldMismatch,
    Ladder,
    LadderElem,
    ParseError,
    SubfieldSpec,
    TranscElem,
    approximate,
    get_oracle,
    transc_sign,
)
from .ordfields.ladder import laurent_coefficients, laurent_order
from .sets1d import Set1D, parse_set


class UndecidableOrder(ValueError):
    pass


class UnsupportedCut(ValueError):
    pass


Value = Union[LadderElem, int, Fraction]


def _elem(x: Value) -> LadderElem:
    return x if isinstance(x, LadderElem) else Ladder().const(x)


def join_ladders(a: Ladder, b: Ladder) -> Ladder:
    """The larger of two nested ladders (names of one contained in the other)."""
    if a is b:
        return a
    sa, sb = set(a.names), set(b.names)
    if sa <= sb:
        return b
    if sb <= sa:
        return a
    raise FieldMismatch(f"cuts over unrelated fields {a!r} and {b!r}")


def unify(x: LadderElem, y: LadderElem) -> tuple[LadderElem, LadderElem]:
    if x.ladder is y.ladder:
        return x, y
    lad = join_ladders(x.ladder, y.ladder)
    return x.to_ladder(lad), y.to_ladder(lad)


# --------------------------------------------------------------------------
# cut variants


class Cut:
    """Base class; subclasses are frozen dataclasses."""

    kind = "?"

    def neg(self) -> "Cut":
        raise NotImplementedError

    def shift(self, m: Value) -> "Cut":
        raise NotImplementedError

    def compare(self, m: Value) -> int:
        """sign(cut - m) for m in M; 0 only for Principal(m)."""
        raise NotImplementedError

    @property
    def model(self) -> Ladder:
        return Ladder()

    def __str__(self):
        return format_cut(self)


@dataclass(frozen=True)
class Principal(Cut):
    value: LadderElem

    kind = "Principal"

    def __post_init__(self):
        object.__setattr__(self, "value", _elem(self.value))

    @property
    def model(self):
        return self.value.ladder

    def neg(self):
        return Principal(-self.value)

    def shift(self, m):
        v, m = unify(self.value, _elem(m))
        return Principal(v + m)

    def compare(self, m):
        v, m = unify(self.value, _elem(m))
        return (v - m).sign()


@dataclass(frozen=True)
class Above(Cut):
    value: LadderElem

    kind = "OneSided"

    def __post_init__(self):
        object.__setattr__(self, "value", _elem(self.value))

    @property
    def model(self):
        return self.value.ladder

    def neg(self):
        return Below(-self.value)

    def shift(self, m):
        v, m = unify(self.value, _elem(m))
        return Above(v + m)

    def compare(self, m):
        v, m = unify(self.value, _elem(m))
        return 1 if (v - m).sign() >= 0 else -1


@dataclass(frozen=True)
class Below(Cut):
    value: LadderElem

    kind = "OneSided"

    def __post_init__(self):
        object.__setattr__(self, "value", _elem(self.value))

    @property
    def model(self):
        return self.value.ladder

    def neg(self):
        return Above(-self.value)

    def shift(self, m):
        v, m = unify(self.value, _elem(m))
        return Below(v + m)

    def compare(self, m):
        v, m = unify(self.value, _elem(m))
        return 1 if (v - m).sign() > 0 else -1


@dataclass(frozen=True)
class PosInf(Cut):
    kind = "Infinite"

    def neg(self):
        return NegInf()

    def shift(self, m):
        return self

    def compare(self, m):
        return 1


@dataclass(frozen=True)
class NegInf(Cut):
    kind = "Infinite"

    def neg(self):
        return PosInf()

    def shift(self, m):
        return self

    def compare(self, m):
        return -1


@dataclass(frozen=True)
class Realized(Cut):
    """Valuational cut ``m0 + side * t^gsign * prod(s^deep)`` over ``field``.

    ``deep`` is aligned with the last ``len(deep)`` variables of ``field``
    and is never empty. ``witness`` is some realization (display only).
    """

    field: Ladder
    m0: LadderElem
    side: int
    deep: tuple[int, ...]
    gsign: int
    witness: Optional[LadderElem] = field(default=None, compare=False, hash=False)

    kind = "Valuational"

    @property
    def model(self):
        return self.field

    @property
    def gap(self) -> int:
        return self.field.k - len(self.deep)

    def neg(self):
        return Realized(self.field, -self.m0, -self.side, self.deep, self.gsign,
                        None if self.witness is None else -self.witness)

    def shift(self, m):
        m = self.field.coerce(m)
        w = None if self.witness is None else self.witness + m.to_ladder(self.witness.ladder)
        m0 = canonical_m0(self.m0 + m, self.deep, self.gsign)
        return Realized(self.field, m0, self.side, self.deep, self.gsign, w)

    def compare(self, m):
        x = self.field.coerce(m) - self.m0
        if not x:
            return self.side
        xv = x.valuation()
        r = self.field.k
        for j in range(r - 1, self.gap - 1, -1):
            d = self.deep[j - self.gap]
            if xv[j] < d:
                return -x.sign()
            if xv[j] > d:
                return self.side
        return self.side if self.gsign < 0 else -x.sign()


@dataclass(frozen=True)
class OracleCut(Cut):
    """The cut of ``scale * c + offset`` for a named transcendental constant c."""

    oracle_id: str
    scale: int = 1
    offset: LadderElem = 0

    kind = "Oracle"

    def __post_init__(self):
        object.__setattr__(self, "offset", _elem(self.offset))
        if self.scale not in (1, -1):
            raise ValueError("oracle cut scale must be +1 or -1")
        get_oracle(self.oracle_id)

    @property
    def model(self):
        return self.offset.ladder

    def neg(self):
        return OracleCut(self.oracle_id, -self.scale, -self.offset)

    def shift(self, m):
        o, m = unify(self.offset, _elem(m))
        return OracleCut(self.oracle_id, self.scale, o + m)

    def compare(self, m):
        o, m = unify(self.offset, _elem(m))
        y = (m - o) * self.scale
        return self.scale * _const_minus(self.oracle_id, y)


def _const_minus(oracle_id: str, y: LadderElem) -> int:
    """sign(c - y) for the oracle constant c and y in a ladder field."""
    if not y:
        return 1 if transc_sign(TranscElem.tau(oracle_id)) > 0 else -1
    coeff, v = y.lead()
    # every ladder variable is infinitesimal over Q: y is infinite iff its
    # deepest nonzero exponent is negative
    for e in reversed(v):
        if e:
            if e < 0:
                return -1 if coeff > 0 else 1
            return transc_sign(TranscElem.tau(oracle_id))
    return transc_sign(TranscElem.tau(oracle_id) - coeff)


# --------------------------------------------------------------------------
# canonical data


def _laurent(x: LadderElem, var: int, upto: int) -> tuple[int, list[LadderElem]]:
    return laurent_coefficients(x, var, upto)


def canonical_m0(m0: LadderElem, deep: tuple[int, ...], gsign: int) -> LadderElem:
    """Drop the terms of m0 that are negligible against the scale.

    The scale has exponents ``deep`` on the last ``len(deep)`` variables of
    ``m0``'s ladder and an external factor ``t^gsign`` just above them.
    """
    lad = m0.ladder
    first = lad.k - len(deep)
    return _trunc(m0, first, lad.k - 1, deep, gsign)


def _trunc(x: LadderElem, first: int, last: int, deep, gsign) -> LadderElem:
    if not x:
        return x
    if last < first:
        return x if gsign > 0 else x.ladder.zero()
    target = deep[last - first]
    n0 = laurent_order(x, last)
    if n0 > target:
        return x.ladder.zero()
    _, coeffs = _laurent(x, last, target)
    v = x.ladder.var(last)
    acc = x.ladder.zero()
    for i, c in enumerate(coeffs[:-1]):
        if c:
            acc = acc + c * v ** (n0 + i)
    tail = _trunc(coeffs[-1], first, last - 1, deep, gsign)
    if tail:
        acc = acc + tail * v ** target
    return acc


def gap_data(p: Cut, model: Ladder) -> tuple[LadderElem, int, tuple[int, ...], int]:
    """(m0, side, deep, gsign) of a gap cut, with m0 in ``model``."""
    if isinstance(p, Above):
        return model.coerce(p.value), 1, (), 1
    if isinstance(p, Below):
        return model.coerce(p.value), -1, (), 1
    if isinstance(p, PosInf):
        return model.zero(), 1, (), -1
    if isinstance(p, NegInf):
        return model.zero(), -1, (), -1
    if isinstance(p, Realized):
        if p.field is not model:
            raise FieldMismatch(f"{p} is a cut over {p.field!r}, not {model!r}")
        return p.m0, p.side, p.deep, p.gsign
    raise UnsupportedCut(f"{p.kind} cut has no gap data")


def from_gap_data(model: Ladder, m0: LadderElem, side: int, deep: tuple[int, ...], gsign: int,
                  witness: Optional[LadderElem] = None) -> Cut:
    if not deep:
        if gsign > 0:
            return Above(m0) if side > 0 else Below(m0)
        return PosInf() if side > 0 else NegInf()
    return Realized(model, canonical_m0(m0, deep, gsign), side, tuple(deep), gsign, witness)


def tie_up(p: Cut) -> bool:
    """When p coincides with a GenSet endpoint cut, does p lie above it?

    Used for coarse-vs-fine questions: p realized at a coarser level than the
    endpoint's realization sits above it iff its scale pushes upward.
    """
    if isinstance(p, (Above, NegInf)):
        return True
    if isinstance(p, (Below, PosInf)):
        return False
    if isinstance(p, Realized):
        return p.side * p.gsign > 0
    raise UndecidableOrder(f"no tie rule for {p.kind} cut")


# --------------------------------------------------------------------------
# ordering


def cut_cmp(p: Cut, q: Cut) -> int:
    """Total order on supported cuts: -1, 0, +1."""
    if p == q:
        return 0
    if isinstance(p, PosInf) or isinstance(q, NegInf):
        return 1
    if isinstance(p, NegInf) or isinstance(q, PosInf):
        return -1
    pp, qp = _pointlike(p), _pointlike(q)
    if pp and qp:
        a, b = unify(p.value, q.value)
        c = (a - b).sign()
        if c:
            return c
        return (pp > qp) - (pp < qp)
    if qp:
        c = p.compare(q.value)
        return c if c else -qp
    if pp:
        c = q.compare(p.value)
        return -c if c else pp
    if isinstance(p, Realized) and isinstance(q, Realized):
        return _realized_cmp(p, q)
    if isinstance(p, OracleCut) and isinstance(q, OracleCut):
        return _oracle_cmp(p, q)
    raise UndecidableOrder(f"cannot order {p} against {q}")


def _pointlike(p: Cut) -> int:
    """0 for non-pointlike, else 2 + offset (-1 below, 0 at, +1 above)."""
    if isinstance(p, Principal):
        return 2
    if isinstance(p, Above):
        return 3
    if isinstance(p, Below):
        return 1
    return 0


def _realized_cmp(p: Realized, q: Realized) -> int:
    model = join_ladders(p.field, q.field)
    if p.field is not q.field:
        raise FieldMismatch(f"cuts over {p.field!r} and {q.field!r}")
    lay = twin_layout(model)
    return (lay.realize(p, "a") - lay.realize(q, "b")).sign()


def _oracle_cmp(p: OracleCut, q: OracleCut) -> int:
    if p.oracle_id != q.oracle_id:
        raise UndecidableOrder(f"cannot order {p.oracle_id} against {q.oracle_id}")
    op, oq = unify(p.offset, q.offset)
    if p.scale == q.scale:
        return (op - oq).sign()
    # p - q = 2 * p.scale * c + (op - oq)
    y = (oq - op) * Fraction(1, 2) * p.scale
    return p.scale * _const_minus(p.oracle_id, y)


cut_key = cmp_to_key(cut_cmp)


def cut_max(p: Cut, q: Cut) -> Cut:
    return p if cut_cmp(p, q) >= 0 else q


def cut_min(p: Cut, q: Cut) -> Cut:
    return p if cut_cmp(p, q) <= 0 else q


# --------------------------------------------------------------------------
# realizations


class TwinLayout:
    """M's ladder with two fresh variables ``_a{g}`` > ``_b{g}`` in every gap g.

    Gap g < r sits just above the g-th variable of M (0-based), gap r below
    all of them. The ``a`` copy is the coarser one.
    """

    def __init__(self, model: Ladder):
        self.model = model
        names = []
        for g, n in enumerate(model.names):
            names += [f"_a{g}", f"_b{g}", n]
        r = model.k
        names += [f"_a{r}", f"_b{r}"]
        self.ladder = Ladder(names)
        self.spec = SubfieldSpec.of(self.ladder, model.names)

    def t(self, g: int, copy: str) -> LadderElem:
        return self.ladder.var(f"_{copy}{g}")

    def scale(self, deep: tuple[int, ...], gsign: int, copy: str) -> LadderElem:
        r = self.model.k
        g = r - len(deep)
        out = self.t(g, copy) ** gsign
        for name, e in zip(self.model.names[g:], deep):
            if e:
                out = out * self.ladder.var(name) ** e
        return out

    def realize(self, p: Cut, copy: str = "a") -> LadderElem:
        if isinstance(p, Principal):
            return self.ladder.coerce(p.value)
        if isinstance(p, OracleCut):
            raise UnsupportedCut("oracle cuts have no ladder realization")
        m0, side, deep, gsign = gap_data(p, self.model)
        return self.ladder.coerce(m0) + side * self.scale(deep, gsign, copy)

    def cut(self, b: LadderElem) -> Cut:
        return cut_of(b, self.spec)


@lru_cache(maxsize=256)
def twin_layout(model: Ladder) -> TwinLayout:
    return TwinLayout(model)


def realize_in(p: Cut, model: Ladder) -> tuple[SubfieldSpec, LadderElem]:
    """Some realization of p, preferring a stored witness over the layout."""
    if isinstance(p, Realized) and p.witness is not None:
        spec = SubfieldSpec.of(p.witness.ladder, model.names)
        return spec, p.witness
    lay = twin_layout(model)
    return lay.spec, lay.realize(p, "a")


# --------------------------------------------------------------------------
# classification


def cut_of(b: LadderElem, M: SubfieldSpec) -> Cut:
    """The cut of b over M, classified."""
    if b.ladder is not M.ambient:
        b = b.to_ladder(M.ambient)
    model = M.model
    m0 = approximate(b, M.members)
    delta = b - m0
    m0m = m0.to_ladder(model)
    if not delta:
        return Principal(m0m)
    gamma = delta.valuation()
    side = delta.sign()
    names = M.ambient.names
    istar = -1
    for i in range(len(names) - 1, -1, -1):
        if gamma[i] and names[i] not in M.members:
            istar = i
            break
    if istar < 0:
        raise AssertionError(f"approximation of {b} left a residue inside the value group")
    deep = tuple(gamma[i] for i in range(istar + 1, len(names)) if names[i] in M.members)
    gsign = 1 if gamma[istar] > 0 else -1
    return from_gap_data(model, m0m, side, deep, gsign, witness=b if deep else None)


def classify_cut(p: Cut) -> str:
    return p.kind


def is_definable_cut(p: Cut) -> bool:
    return p.kind in ("Principal", "OneSided", "Infinite")


# --------------------------------------------------------------------------
# generalized sets


Component = tuple[Cut, Cut]


def _component_of_piece(lo, lc, hi, hc, to_cut) -> Component:
    if lo is None:
        a = NegInf()
    else:
        c = to_cut(lo)
        a = (Below(c.value) if lc else Above(c.value)) if isinstance(c, Principal) else c
    if hi is None:
        b = PosInf()
    else:
        c = to_cut(hi)
        b = (Above(c.value) if hc else Below(c.value)) if isinstance(c, Principal) else c
    return a, b


@dataclass(frozen=True, eq=False)
class GenSet:
    """Canonical finite union of generalized intervals ``{m in M : lo < m < hi}``.

    Endpoints are gap cuts (never Principal). ``provenance`` optionally records
    ``(X, q)`` when the set was produced as d_q(X); it is ignored by equality.
    """

    model: Ladder
    components: tuple[Component, ...]
    provenance: Optional[tuple[Set1D, Cut]] = None

    @classmethod
    def build(cls, model: Ladder, comps, provenance=None) -> "GenSet":
        live = [(a, b) for a, b in comps if cut_cmp(a, b) < 0]
        live.sort(key=lambda c: cut_key(c[0]))
        out: list[Component] = []
        for a, b in live:
            if out and cut_cmp(a, out[-1][1]) <= 0:
                out[-1] = (out[-1][0], cut_max(out[-1][1], b))
            else:
                out.append((a, b))
        return cls(model, tuple(out), provenance)

    @classmethod
    def empty(cls, model: Ladder) -> "GenSet":
        return cls(model, ())

    @classmethod
    def full(cls, model: Ladder) -> "GenSet":
        return cls(model, ((NegInf(), PosInf()),))

    @classmethod
    def from_set1d(cls, X: Set1D, model: Optional[Ladder] = None) -> "GenSet":
        """An M-definable set viewed as a generalized set."""
        model = model or X.field
        comps = [_component_of_piece(lo, lc, hi, hc, lambda v: Principal(model.coerce(v)))
                 for lo, lc, hi, hc in X.pieces]
        return cls.build(model, comps)

    def without_provenance(self) -> "GenSet":
        return GenSet(self.model, self.components)

    def __eq__(self, other):
        if not isinstance(other, GenSet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def is_empty(self) -> bool:
        return not self.components

    def member(self, m: Value) -> bool:
        m = self.model.coerce(m)
        return any(a.compare(m) < 0 < b.compare(m) for a, b in self.components)

    __contains__ = member

    def _join(self, other: "GenSet") -> Ladder:
        return join_ladders(self.model, other.model)

    def union(self, other: "GenSet") -> "GenSet":
        return GenSet.build(self._join(other), self.components + other.components)

    def intersection(self, other: "GenSet") -> "GenSet":
        model = self._join(other)
        comps = [(cut_max(a, c), cut_min(b, d)) for a, b in self.components for c, d in other.components]
        return GenSet.build(model, comps)

    def complement(self) -> "GenSet":
        out = []
        start: Cut = NegInf()
        for a, b in self.components:
            out.append((start, a))
            start = b
        out.append((start, PosInf()))
        return GenSet.build(self.model, out)

    def difference(self, other: "GenSet") -> "GenSet":
        return self.intersection(other.complement())

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def __invert__(self):
        return self.complement()

    def shift(self, m: Value) -> "GenSet":
        """Translate by an element of M."""
        return GenSet.build(self.model, [(a.shift(m), b.shift(m)) for a, b in self.components])

    def neg(self) -> "GenSet":
        return GenSet.build(self.model, [(b.neg(), a.neg()) for a, b in self.components])

    def is_definable(self) -> bool:
        return all(is_definable_cut(a) and is_definable_cut(b) for a, b in self.components)

    def to_set1d(self) -> Set1D:
        """The same set as an M-definable Set1D; only for definable endpoints."""
        pieces = []
        for a, b in self.components:
            if not (is_definable_cut(a) and is_definable_cut(b)):
                raise UnsupportedCut(f"component <{a} | {b}> is not M-definable")
            lo = None if isinstance(a, NegInf) else a.value
            hi = None if isinstance(b, PosInf) else b.value
            pieces.append((lo, isinstance(a, Below), hi, isinstance(b, Above)))
        return Set1D.normalize(self.model, pieces)

    def __str__(self):
        return format_genset(self)

    def __repr__(self):
        return f"GenSet({format_genset(self)!r})"


def trace(Y: Set1D, M: SubfieldSpec) -> GenSet:
    """Y ∩ M for Y over the ambient field of M."""
    comps = [_component_of_piece(lo, lc, hi, hc, lambda v: cut_of(v, M)) for lo, lc, hi, hc in Y.pieces]
    return GenSet.build(M.model, comps)


def genset_member(Y: GenSet, m: Value) -> bool:
    return Y.member(m)


def cut_in_set(p: Cut, X: Set1D) -> bool:
    """X ∈ p for an M-definable X."""
    if isinstance(p, Principal):
        return X.member(p.value.to_ladder(join_ladders(p.value.ladder, X.field)))
    for lo, lc, hi, hc in X.pieces:
        if lo is not None:
            c = p.compare(lo)
            if c < 0 or (c == 0 and not lc):
                continue
        if hi is not None:
            c = p.compare(hi)
            if c > 0 or (c == 0 and not hc):
                continue
        return True
    return False


def cut_in_genset(p: Cut, Y: GenSet) -> bool:
    """Y ∈ p, where Y's endpoints count as realized at a finer level than p."""
    if isinstance(p, Principal):
        return Y.member(p.value)
    for a, b in Y.components:
        if _above(p, a) and not _above(p, b):
            return True
    return False


def _above(p: Cut, e: Cut) -> bool:
    c = cut_cmp(p, e)
    if c:
        return c > 0
    return tie_up(p)


# --------------------------------------------------------------------------
# text


def _wrap(x: LadderElem) -> str:
    s = str(x)
    if any(ch in s for ch in "+-*/^ ") and not (s.startswith("-") and s[1:].replace("/", "").isdigit()):
        return f"({s})"
    return s


def format_cut(p: Cut) -> str:
    if isinstance(p, Principal):
        return f"[{p.value}]"
    if isinstance(p, Above):
        return f"{_wrap(p.value)}+"
    if isinstance(p, Below):
        return f"{_wrap(p.value)}-"
    if isinstance(p, PosInf):
        return "+inf"
    if isinstance(p, NegInf):
        return "-inf"
    if isinstance(p, Realized):
        w, standard = display_realization(p)
        tail = "" if standard else f" in {w.ladder!r}"
        return f"real({w})@{p.field!r}{tail}"
    if isinstance(p, OracleCut):
        head = p.oracle_id if p.scale > 0 else f"-{p.oracle_id}"
        if not p.offset:
            return head
        s = str(p.offset)
        return f"{head}{s}" if s.startswith("-") else f"{head}+{s}"
    raise TypeError(type(p).__name__)


def display_realization(p: Realized) -> tuple[LadderElem, bool]:
    """A canonical realization of p for printing.

    The external variable is ``e{j}`` when M = Q(e{j+1}, ..., e{k}) and p
    lives in the gap above all of M, otherwise a fresh ``t``. The flag says
    whether the ladder is a standard e1..ek ladder.
    """
    names = list(p.field.names)
    g = p.gap
    j = _suffix_start(names)
    if j is not None and g == 0 and j >= 1:
        lad = Ladder.standard(j + len(names))
        t = lad.var(f"e{j}")
        standard = True
    else:
        lad = Ladder(names[:g] + ["t"] + names[g:])
        t = lad.var("t")
        standard = False
    scale = t ** p.gsign
    for name, e in zip(names[g:], p.deep):
        if e:
            scale = scale * lad.var(name) ** e
    return lad.coerce(p.m0) + p.side * scale, standard


def _suffix_start(names: list[str]) -> Optional[int]:
    """j when names are e{j+1}, ..., e{j+n}; None otherwise."""
    if not names or not all(n.startswith("e") and n[1:].isdigit() for n in names):
        return None
    idx = [int(n[1:]) for n in names]
    if idx != list(range(idx[0], idx[0] + len(idx))):
        return None
    return idx[0] - 1


def parse_cut(text: str, model: Ladder, ambient: Optional[Ladder] = None) -> Cut:
    """Parse the cut grammar; values are read in ``model``.

    ``real(expr)@Q(e2)`` realizes expr over M = Q(e2) inside ``ambient``
    (default: the standard ladder e1..ek covering M);
    ``real(expr)@Q(e2) in Q(t,e2)`` names the ambient field explicitly.
    """
    s = text.strip()
    if s in ("+inf", "inf"):
        return PosInf()
    if s == "-inf":
        return NegInf()
    if s.startswith("real(") and ")@" in s:
        close = s.rindex(")@")
        expr, where = s[5:close], s[close + 2:]
        mod_t, _, amb_t = where.partition(" in ")
        M_names = parse_field(mod_t).names
        if amb_t:
            ambient = parse_field(amb_t)
        elif ambient is None:
            j = _suffix_start(list(M_names))
            if j is None:
                raise ParseError(f"cannot infer the ambient field of {text!r}", 1)
            ambient = Ladder.standard(j + len(M_names)) if j else Ladder.standard(max(1, len(M_names)))
        return cut_of(ambient.parse(expr), SubfieldSpec.of(ambient, M_names))
    for oid in ("pi", "e"):
        for head, scale in ((f"-{oid}", -1), (oid, 1)):
            if s == head:
                return OracleCut(oid, scale, model.zero())
            if s.startswith(head) and s[len(head):len(head) + 1] in "+-" and len(s) > len(head) + 1:
                rest = s[len(head):]
                return OracleCut(oid, scale, model.parse(rest))
    if s.startswith("[") and s.endswith("]"):
        return Principal(model.parse(s[1:-1]))
    if s.endswith("+"):
        return Above(model.parse(s[:-1]))
    if s.endswith("-"):
        return Below(model.parse(s[:-1]))
    raise ParseError(f"unrecognised cut {text!r}", 1)


def parse_field(text: str) -> Ladder:
    s = text.strip()
    if s in ("Q", "Q()"):
        return Ladder()
    if not (s.startswith("Q(") and s.endswith(")")):
        raise ParseError(f"field must look like Q(e1,e2), got {text!r}", 1)
    names = [n.strip() for n in s[2:-1].split(",") if n.strip()]
    return Ladder(names)


def _fmt_lo(a: Cut) -> Optional[str]:
    if isinstance(a, NegInf):
        return "(-inf"
    if isinstance(a, Above):
        return f"({a.value}"
    if isinstance(a, Below):
        return f"[{a.value}"
    return None


def _fmt_hi(b: Cut) -> Optional[str]:
    if isinstance(b, PosInf):
        return "+inf)"
    if isinstance(b, Below):
        return f"{b.value})"
    if isinstance(b, Above):
        return f"{b.value}]"
    return None


def format_genset(Y: GenSet) -> str:
    if not Y.components:
        return "{}"
    out = []
    for a, b in Y.components:
        if isinstance(a, Below) and isinstance(b, Above) and a.value == b.value:
            out.append(f"[{a.value}]")
            continue
        lo, hi = _fmt_lo(a), _fmt_hi(b)
        if lo is not None and hi is not None:
            out.append(f"{lo},{hi}")
        else:
            out.append(f"<{format_cut(a)} | {format_cut(b)}>")
    return " u ".join(out)


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside brackets; a piece never opens with its own closer."""
    out, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch in "(<":
            depth += 1
        elif ch == "[" and not text.startswith("[", i + 1):
            depth += 1
        elif ch in ")]>":
            depth -= 1
        if depth <= 0 and text.startswith(sep, i):
            out.append(text[start:i])
            i += len(sep)
            start = i
            depth = 0
            continue
        i += 1
    out.append(text[start:])
    return out


def parse_genset(text: str, model: Ladder) -> GenSet:
    """Inverse of ``format_genset``: ordinary pieces or ``<lo | hi>``."""
    s = text.strip()
    if s in ("{}", "empty"):
        return GenSet.empty(model)
    comps = []
    for piece in _split_top(s, " u "):
        piece = piece.strip()
        if piece.startswith("<") and piece.endswith(">"):
            ends = _split_top(piece[1:-1], " | ")
            if len(ends) != 2:
                raise ParseError(f"expected <lo | hi>, got {piece!r}", 1)
            lo, hi = (parse_cut(e, model) for e in ends)
            if isinstance(lo, Principal) or isinstance(hi, Principal):
                raise ParseError("generalized endpoints must be gap cuts", 1)
            model = join_ladders(join_ladders(model, lo.model), hi.model)
            comps.append((lo, hi))
        else:
            comps.extend(GenSet.from_set1d(parse_set(piece, model), model).components)
    return GenSet.build(model, comps)
