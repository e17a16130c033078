"""Seeded random sets and cuts for reproducible checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .cuts import Above, Below, Cut, NegInf, PosInf, Principal, cut_of, join_ladders
from .ordfields import Ladder, LadderElem, SubfieldSpec
from .sets1d import Set1D

CUT_CLASSES = ("Principal", "Above", "Below", "PosInf", "NegInf", "Realized")


def rational(rng: random.Random, height: int = 6) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def element(rng: random.Random, model: Ladder, terms: int = 2) -> LadderElem:
    out = model.const(rational(rng))
    for _ in range(rng.randint(0, terms) if model.k else 0):
        exps = [rng.randint(-1, 2) for _ in range(model.k)]
        out = out + model.monomial(exps, rational(rng))
    return out


def set1d(rng: random.Random, model: Ladder, max_pieces: int = 5) -> Set1D:
    k = rng.randint(0, max_pieces)
    pts: list[LadderElem] = []
    while len(pts) < 2 * k:
        x = element(rng, model)
        if all(x != p for p in pts):
            pts.append(x)
    pts.sort(key=lambda v: _Key(v))
    raw = []
    for i in range(k):
        lo, hi = pts[2 * i], pts[2 * i + 1]
        if rng.random() < 0.2:
            raw.append((lo, True, lo, True))
            continue
        if i == 0 and rng.random() < 0.15:
            lo = None
        if i == k - 1 and rng.random() < 0.15:
            hi = None
        raw.append((lo, rng.random() < 0.5, hi, rng.random() < 0.5))
    return Set1D.normalize(model, raw)


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return (self.v - other.v).sign() < 0


def realized(rng: random.Random, model: Ladder, m: LadderElem | None = None) -> Cut:
    """m + side * t^(+-1) * prod(deeper^e), with t inserted above a model variable."""
    if not model.k:
        raise ValueError("valuational cuts need a model variable")
    pos = rng.randint(0, model.k - 1)
    amb = model.insert("t", pos)
    b = (m if m is not None else element(rng, model)).to_ladder(amb)
    scale = amb.var("t") ** rng.choice((1, -1))
    for name in model.names[pos:]:
        scale = scale * amb.var(name) ** rng.randint(-2, 2)
    b = b + rng.choice((1, -1)) * (1 + abs(rational(rng, 3))) * scale
    return cut_of(b, SubfieldSpec.of(amb, model.names))


def cut(rng: random.Random, model: Ladder, classes: Sequence[str] = CUT_CLASSES) -> Cut:
    kind = rng.choice(classes)
    if kind == "Principal":
        return Principal(element(rng, model))
    if kind == "Above":
        return Above(element(rng, model))
    if kind == "Below":
        return Below(element(rng, model))
    if kind == "PosInf":
        return PosInf()
    if kind == "NegInf":
        return NegInf()
    return realized(rng, model)


def circle_cut(rng: random.Random, model: Ladder) -> Cut:
    """A non-principal cut strictly inside (0, 1)."""
    while True:
        m = model.const(Fraction(rng.randint(1, 7), 8))
        kind = rng.choice(("Above", "Below", "Realized", "Realized"))
        if kind == "Realized" and model.k:
            c = realized(rng, model, m)
        else:
            c = Above(m) if kind == "Above" else Below(m)
        if c.compare(0) > 0 and c.compare(1) < 0:
            return c


def circle_set(rng: random.Random, model: Ladder) -> Set1D:
    U = Set1D.interval(model, 0, 1, lo_closed=True)
    raw = set1d(rng, model, 3)
    return raw.scale(Fraction(1, 4)).translate(Fraction(1, 2)) & U


def join(*lads: Ladder) -> Ladder:
    out = Ladder()
    for lad in lads:
        out = join_ladders(out, lad)
    return out
