"""Finite unions of points and intervals over a ladder field.

A piece is ``(lo, lo_closed, hi, hi_closed)``; ``lo is None`` means -inf and
``hi is None`` means +inf (always open). Points are closed degenerate pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Iterator, Optional, Union

from .ordfields import FieldMismatch, Ladder, LadderElem, ParseError

Bound = Optional[LadderElem]
Piece = tuple[Bound, bool, Bound, bool]
Value = Union[LadderElem, int, Fraction]


class InvertedBounds(ValueError):
    pass


def _cmp(a: LadderElem, b: LadderElem) -> int:
    return (a - b).sign()


def _lower_key_cmp(a: Piece, b: Piece) -> int:
    """Order pieces by lower bound; closed before open at equal values."""
    if a[0] is None or b[0] is None:
        return (a[0] is not None) - (b[0] is not None)
    c = _cmp(a[0], b[0])
    if c:
        return c
    return (not a[1]) - (not b[1])


def _upper_max(a: Piece, b: Piece) -> tuple[Bound, bool]:
    if a[2] is None or b[2] is None:
        return None, False
    c = _cmp(a[2], b[2])
    if c > 0:
        return a[2], a[3]
    if c < 0:
        return b[2], b[3]
    return a[2], a[3] or b[3]


def _touches(cur: Piece, nxt: Piece) -> bool:
    """True when nxt starts no later than cur ends, with no gap between them."""
    if cur[2] is None or nxt[0] is None:
        return True
    c = _cmp(nxt[0], cur[2])
    return c < 0 or (c == 0 and (cur[3] or nxt[1]))


def _validate(p: Piece) -> Optional[Piece]:
    lo, lc, hi, hc = p
    if lo is None:
        lc = False
    if hi is None:
        hc = False
    if lo is not None and hi is not None:
        c = _cmp(lo, hi)
        if c > 0:
            raise InvertedBounds(f"inverted bounds ({lo}, {hi})")
        if c == 0 and not (lc and hc):
            return None
    return lo, lc, hi, hc


@dataclass(frozen=True, eq=False)
class Set1D:
    """Canonical union of disjoint, sorted, non-adjacent pieces."""

    field: Ladder
    pieces: tuple[Piece, ...]

    # construction ---------------------------------------------------------

    @classmethod
    def normalize(cls, field: Ladder, raw: Iterable[Piece]) -> "Set1D":
        ps = []
        for p in raw:
            lo, lc, hi, hc = p
            lo = None if lo is None else field.coerce(lo)
            hi = None if hi is None else field.coerce(hi)
            v = _validate((lo, lc, hi, hc))
            if v is not None:
                ps.append(v)
        ps.sort(key=cmp_to_key(_lower_key_cmp))
        out: list[Piece] = []
        for p in ps:
            if out and _touches(out[-1], p):
                cur = out[-1]
                hi, hc = _upper_max(cur, p)
                out[-1] = (cur[0], cur[1], hi, hc)
            else:
                out.append(p)
        return cls(field, tuple(out))

    @classmethod
    def empty(cls, field: Ladder) -> "Set1D":
        return cls(field, ())

    @classmethod
    def full(cls, field: Ladder) -> "Set1D":
        return cls(field, ((None, False, None, False),))

    @classmethod
    def interval(cls, field: Ladder, lo: Optional[Value], hi: Optional[Value],
                 lo_closed: bool = False, hi_closed: bool = False) -> "Set1D":
        return cls.normalize(field, [(lo, lo_closed, hi, hi_closed)])

    @classmethod
    def point(cls, field: Ladder, a: Value) -> "Set1D":
        return cls.normalize(field, [(a, True, a, True)])

    # queries ---------------------------------------------------------------

    def __iter__(self) -> Iterator[Piece]:
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def __eq__(self, other):
        if not isinstance(other, Set1D):
            return NotImplemented
        return self.pieces == other.pieces and (self.field is other.field or not self.pieces)

    def __hash__(self):
        return hash(self.pieces)

    def member(self, x: Value) -> bool:
        x = self.field.coerce(x)
        for lo, lc, hi, hc in self.pieces:
            if lo is not None:
                c = _cmp(x, lo)
                if c < 0 or (c == 0 and not lc):
                    continue
            if hi is not None:
                c = _cmp(x, hi)
                if c > 0 or (c == 0 and not hc):
                    continue
            return True
        return False

    __contains__ = member

    def endpoints(self) -> list[LadderElem]:
        out = []
        for lo, _, hi, _ in self.pieces:
            for b in (lo, hi):
                if b is not None and (not out or out[-1] != b):
                    out.append(b)
        return out

    # boolean algebra ----------------------------------------------------------

    def _same(self, other: "Set1D") -> None:
        if self.field is not other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def union(self, other: "Set1D") -> "Set1D":
        self._same(other)
        return Set1D.normalize(self.field, self.pieces + other.pieces)

    def complement(self) -> "Set1D":
        out: list[Piece] = []
        prev: Bound = None
        prev_closed = False
        started = False
        for lo, lc, hi, hc in self.pieces:
            if lo is not None:
                out.append((prev if started else None, prev_closed, lo, not lc))
            started = True
            prev, prev_closed = hi, not hc
            if hi is None:
                break
        else:
            out.append((prev if started else None, prev_closed, None, False))
        return Set1D.normalize(self.field, out)

    def intersection(self, other: "Set1D") -> "Set1D":
        self._same(other)
        out = []
        for a in self.pieces:
            for b in other.pieces:
                if a[0] is None:
                    lo, lc = b[0], b[1]
                elif b[0] is None:
                    lo, lc = a[0], a[1]
                else:
                    c = _cmp(a[0], b[0])
                    lo, lc = (a[0], a[1]) if c > 0 else (b[0], b[1]) if c < 0 else (a[0], a[1] and b[1])
                if a[2] is None:
                    hi, hc = b[2], b[3]
                elif b[2] is None:
                    hi, hc = a[2], a[3]
                else:
                    c = _cmp(a[2], b[2])
                    hi, hc = (a[2], a[3]) if c < 0 else (b[2], b[3]) if c > 0 else (a[2], a[3] and b[3])
                if lo is not None and hi is not None:
                    c = _cmp(lo, hi)
                    if c > 0 or (c == 0 and not (lc and hc)):
                        continue
                out.append((lo, lc, hi, hc))
        return Set1D.normalize(self.field, out)

    def difference(self, other: "Set1D") -> "Set1D":
        return self.intersection(other.complement())

    def symmetric_difference(self, other: "Set1D") -> "Set1D":
        return self.difference(other).union(other.difference(self))

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def __invert__(self):
        return self.complement()

    # group structure -----------------------------------------------------------

    def translate(self, g: Value) -> "Set1D":
        g = self.field.coerce(g)
        return Set1D(self.field, tuple(
            (None if lo is None else lo + g, lc, None if hi is None else hi + g, hc)
            for lo, lc, hi, hc in self.pieces
        ))

    def neg(self) -> "Set1D":
        return Set1D.normalize(self.field, [
            (None if hi is None else -hi, hc, None if lo is None else -lo, lc)
            for lo, lc, hi, hc in self.pieces
        ])

    def scale(self, r: Union[int, Fraction]) -> "Set1D":
        """Multiply by a rational (the divisible-group structure)."""
        r = Fraction(r)
        if r == 0:
            return Set1D.empty(self.field) if self.is_empty() else Set1D.point(self.field, 0)
        if r < 0:
            return self.neg().scale(-r)
        return Set1D(self.field, tuple(
            (None if lo is None else lo * r, lc, None if hi is None else hi * r, hc)
            for lo, lc, hi, hc in self.pieces
        ))

    def to_field(self, field: Ladder) -> "Set1D":
        return Set1D(field, tuple(
            (None if lo is None else field.coerce(lo), lc, None if hi is None else field.coerce(hi), hc)
            for lo, lc, hi, hc in self.pieces
        ))

    # text ---------------------------------------------------------------

    def __str__(self) -> str:
        return format_set(self)

    def __repr__(self) -> str:
        return f"Set1D({format_set(self)!r} over {self.field!r})"


def _fmt_bound(b: Bound, low: bool) -> str:
    if b is None:
        return "-inf" if low else "+inf"
    return str(b)


def format_set(X: Set1D) -> str:
    if not X.pieces:
        return "{}"
    out = []
    for lo, lc, hi, hc in X.pieces:
        if lo is not None and hi is not None and lc and hc and lo == hi:
            out.append(f"[{lo}]")
        else:
            out.append(("[" if lc else "(") + _fmt_bound(lo, True) + "," + _fmt_bound(hi, False) + ("]" if hc else ")"))
    return " u ".join(out)


def _scan_pieces(text: str) -> list[tuple[str, str, str, bool, bool, int, int]]:
    """Split set text into raw pieces: (lo_text, hi_text|None, ...) with 1-based spans."""
    pieces = []
    i, n = 0, len(text)
    expect_piece = True
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            if expect_piece and pieces:
                raise ParseError("expected piece after 'u'", i + 1)
            break
        if not expect_piece:
            if text[i] == "u" and (i + 1 >= n or not (text[i + 1].isalnum() or text[i + 1] == "_")):
                i += 1
                expect_piece = True
                continue
            raise ParseError(f"expected 'u' between pieces, found {text[i]!r}", i + 1)
        if text[i] not in "([":
            raise ParseError(f"expected '(' or '[', found {text[i]!r}", i + 1)
        start = i
        lc = text[i] == "["
        depth = 0
        parts: list[str] = []
        cur = i + 1
        j = i + 1
        close = None
        while j < n:
            ch = text[j]
            if ch == "(":
                depth += 1
            elif ch == ")" and depth > 0:
                depth -= 1
            elif depth == 0 and ch in ")]":
                close = ch
                break
            elif depth == 0 and ch == ",":
                parts.append(text[cur:j])
                cur = j + 1
            j += 1
        if close is None:
            raise ParseError("unterminated piece", start + 1)
        parts.append(text[cur:j])
        hc = close == "]"
        if len(parts) == 1:
            if not (lc and hc):
                raise ParseError("a point must be written [a]", start + 1)
            pieces.append((parts[0], parts[0], lc, hc, start + 1, j + 1))
        elif len(parts) == 2:
            pieces.append((parts[0], parts[1], lc, hc, start + 1, j + 1))
        else:
            raise ParseError("too many bounds in piece", start + 1)
        i = j + 1
        expect_piece = False
    return pieces


def parse_set(text: str, field: Ladder) -> Set1D:
    text_s = text.strip()
    if text_s in ("{}", "empty"):
        return Set1D.empty(field)
    raw = []
    for lo_t, hi_t, lc, hc, a, b in _scan_pieces(text):
        lo = _parse_bound(lo_t, field, True, a)
        hi = _parse_bound(hi_t, field, False, a)
        if lo is None and lc or hi is None and hc:
            raise ParseError("infinite bounds must be open", a)
        if lo is not None and hi is not None and _cmp(lo, hi) > 0:
            raise InvertedBounds(f"inverted bounds at {a}..{b}")
        raw.append((lo, lc, hi, hc))
    return Set1D.normalize(field, raw)


def _parse_bound(t: str, field: Ladder, low: bool, pos: int) -> Bound:
    s = t.strip()
    if s in ("-inf", "+inf", "inf"):
        if (s == "-inf") != low:
            raise ParseError(f"{s} on the wrong side", pos)
        return None
    try:
        return field.parse(s)
    except ParseError as ex:
        raise ParseError(f"bad bound {s!r}: {ex}", pos) from None
