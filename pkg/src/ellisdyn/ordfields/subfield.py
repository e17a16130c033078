"""Subfields M = Q(e_S) of a ladder field and the relative order notions
(finite, infinitesimal, standard part) between N and M.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .ladder import FieldMismatch, Ladder, LadderElem, laurent_coefficients, laurent_order


class NotFinite(ValueError):
    pass


class NoStandardPart(ValueError):
    pass


@dataclass(frozen=True)
class SubfieldSpec:
    """M generated over Q by a subset of the ambient ladder's variables.

    ``model`` is the ladder of M on its own: the member names in ambient order.
    Cut data lives in ``model`` so it does not depend on the ambient field.
    """

    ambient: Ladder
    members: frozenset[str]

    def __post_init__(self):
        extra = self.members - set(self.ambient.names)
        if extra:
            raise ValueError(f"{sorted(extra)} not in {self.ambient!r}")

    @classmethod
    def depth(cls, ambient: Ladder, j: int) -> "SubfieldSpec":
        """M = Q(e_{j+1}, ..., e_k): the deepest k - j variables."""
        if not 0 <= j <= ambient.k:
            raise ValueError(f"depth {j} outside 0..{ambient.k}")
        return cls(ambient, frozenset(ambient.names[j:]))

    @classmethod
    def of(cls, ambient: Ladder, names: Iterable[str]) -> "SubfieldSpec":
        return cls(ambient, frozenset(names))

    @property
    def model(self) -> Ladder:
        return Ladder(n for n in self.ambient.names if n in self.members)

    @property
    def member_mask(self) -> tuple[bool, ...]:
        return tuple(n in self.members for n in self.ambient.names)

    def contains(self, x: LadderElem) -> bool:
        return x.variables() <= self.members

    def project(self, x: LadderElem) -> LadderElem:
        """View an element of M (given in the ambient ladder) in ``model``."""
        if not self.contains(x):
            raise FieldMismatch(f"{x} is not an element of {self.model!r}")
        return x.to_ladder(self.model)

    def lift(self, m) -> LadderElem:
        return self.ambient.coerce(m)

    def __repr__(self):
        return f"{self.model!r}<{self.ambient!r}"


def approximate(b: LadderElem, members: frozenset[str]) -> LadderElem:
    """Return m0 in M with b = m0 or v(b - m0) outside the value group of M.

    The result is the best M-approximation of b: m0 is expressed in b's
    ladder and uses only ``members``.
    """
    if not b or b.variables() <= members:
        return b
    lad = b.ladder
    x = max(lad.index[n] for n in b.variables())
    name = lad.names[x]
    if name not in members:
        if laurent_order(b, x) != 0:
            return lad.zero()
        _, coeffs = laurent_coefficients(b, x, 0)
        return approximate(coeffs[0], members)
    # x is the deepest variable of b and belongs to M
    bound = int(b.num.degrees()[x]) + int(b.den.degrees()[x]) + 2
    n0 = laurent_order(b, x)
    _, coeffs = laurent_coefficients(b, x, n0 + bound)
    acc = lad.zero()
    xv = lad.var(x)
    for n, c in enumerate(coeffs):
        if not c:
            continue
        if c.variables() <= members:
            acc = acc + c * xv ** (n0 + n)
            continue
        return acc + approximate(c, members) * xv ** (n0 + n)
    raise AssertionError(f"approximation of {b} did not stabilise")


def deepest_nonzero(v: tuple[int, ...]) -> int:
    for i in range(len(v) - 1, -1, -1):
        if v[i]:
            return i
    return -1


def is_infinitesimal_over(e: LadderElem, M: SubfieldSpec) -> bool:
    if not e:
        return True
    v = e.valuation()
    i = deepest_nonzero(v)
    if i < 0:
        return False
    names = e.ladder.names
    if names[i] in M.members:
        return False
    if any(n in M.members for n in names[i + 1:]):
        return False
    return v[i] > 0


def is_finite_over(e: LadderElem, M: SubfieldSpec) -> bool:
    if not e:
        return True
    v = e.valuation()
    i = deepest_nonzero(v)
    if i < 0:
        return True
    names = e.ladder.names
    if names[i] in M.members or any(n in M.members for n in names[i + 1:]):
        return True
    return v[i] > 0


def standard_part(e: LadderElem, M: SubfieldSpec) -> LadderElem:
    """The s in M with e - s infinitesimal over M, in e's ladder."""
    if e.ladder is not M.ambient:
        raise FieldMismatch(f"{e.ladder!r} is not the ambient of {M!r}")
    if not is_finite_over(e, M):
        raise NotFinite(f"{e} is not finite over {M.model!r}")
    m0 = approximate(e, M.members)
    if is_infinitesimal_over(e - m0, M):
        return m0
    raise NoStandardPart(f"{e} has no standard part in {M.model!r}")
