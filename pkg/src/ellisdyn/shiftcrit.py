"""Shift-representability of polynomials over Q(tau), and planar region checks.

Criterion. Write h(x) = a_n x^n + ... + a_0 with a_i in Q(tau). If h(x) =
f(x + c) + d with f over the algebraics, then h and f have the same leading
coefficient and, after removing the x^(n-1) term by a translation, the same
shape up to an additive constant. So for n >= 2 we depress h with
s = -a_{n-1} / (n a_n), D(z) = h(z + s), and require the coefficients of D in
degrees 1..n to be tau-free. The witness is f = D - D(0), c = -s, d = D(0).
For n = 1 the slope must be tau-free and the witness is f = a_1 z, c = 0,
d = a_0.

Only the negative answer is sound: Reject certifies the region below h is
not a Boolean combination of translates by external elements. Pass is
inconclusive for the converse.

The planar part works over M = Q(e2) inside Q(e1, e2), with e = e1
realizing the valuational type just above M's infinitesimals.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .ordfields import Ladder, LadderElem, ParseError, TranscElem
from .ordfields.expr import evaluate, parse_ast

Scalar = Union[int, Fraction]


# --------------------------------------------------------------------------
# polynomials over Q(tau)


@dataclass(frozen=True)
class TPoly:
    """Dense polynomial in x with Q(tau) coefficients, lowest degree first."""

    coeffs: tuple[TranscElem, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, cs: Sequence) -> "TPoly":
        return cls(tuple(c if isinstance(c, TranscElem) else TranscElem.const(c) for c in cs))

    @classmethod
    def x(cls) -> "TPoly":
        return cls.of([0, 1])

    @classmethod
    def parse(cls, text: str) -> "TPoly":
        env = {"x": cls.x(), "tau": cls((TranscElem.tau(),)), "pi": cls((TranscElem.tau(),))}
        out = evaluate(parse_ast(text), env, lambda q: cls.of([q]))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> TranscElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else TranscElem.const(0)

    def _lift(self, other) -> "TPoly":
        if isinstance(other, TPoly):
            return other
        if isinstance(other, TranscElem):
            return TPoly((other,))
        if isinstance(other, (int, Fraction)):
            return TPoly.of([other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return TPoly(tuple(self.coeff(i) + o.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return TPoly(())
        out = [TranscElem.const(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return TPoly(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TPoly):
            if other.degree > 0:
                raise ParseError("division by a non-constant polynomial", 1)
            other = other.coeff(0)
        return TPoly(tuple(c / other for c in self.coeffs))

    def __pow__(self, n: int):
        if n < 0:
            raise ParseError("negative powers are not polynomials", 1)
        out = TPoly.of([1])
        for _ in range(n):
            out = out * self
        return out

    def compose_shift(self, s) -> "TPoly":
        """h(z + s)."""
        out = TPoly(())
        arg = TPoly.x() + s
        for c in reversed(self.coeffs):
            out = out * arg + c
        return out

    def __call__(self, v):
        out = TranscElem.const(0)
        for c in reversed(self.coeffs):
            out = out * v + c
        return out

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = str(c)
            if not mono:
                term = cs
            elif c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                atomic = re.fullmatch(r"-?[\w/^.]+", cs) is not None
                term = f"{cs}*{mono}" if atomic else f"({cs})*{mono}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


def tau_free(c: TranscElem) -> bool:
    return c.is_rational()


@dataclass(frozen=True)
class Witness:
    f: TPoly
    c: TranscElem
    d: TranscElem

    def expand(self) -> TPoly:
        return self.f.compose_shift(self.c) + self.d


@dataclass(frozen=True)
class Verdict:
    kind: str  # "Pass" or "Reject"
    obstruction: Optional[str] = None
    degree: Optional[int] = None
    witness: Optional[Witness] = None

    @property
    def passed(self) -> bool:
        return self.kind == "Pass"

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.kind == "Reject":
            out["obstruction"] = self.obstruction
            out["degree"] = self.degree
        else:
            w = self.witness
            out["witness"] = {"f": str(w.f).replace("x", "z"), "c": str(w.c), "d": str(w.d)}
            out["note"] = "criterion passes; inconclusive for the converse"
        return out


def depressed(h: TPoly) -> tuple[TranscElem, TPoly]:
    n = h.degree
    s = -h.coeff(n - 1) / (n * h.coeff(n))
    return s, h.compose_shift(s)


def shift_representable(h: TPoly) -> Verdict:
    n = h.degree
    zero = TranscElem.const(0)
    if n <= 0:
        return _checked(h, Verdict("Pass", witness=Witness(TPoly(()), zero, h.coeff(0))))
    if n == 1:
        a1 = h.coeff(1)
        if not tau_free(a1):
            return Verdict("Reject", f"slope {a1} is transcendental", 1)
        return _checked(h, Verdict("Pass", witness=Witness(TPoly((zero, a1)), zero, h.coeff(0))))
    s, D = depressed(h)
    for k in range(n, 0, -1):
        if not tau_free(D.coeff(k)):
            what = "leading coefficient" if k == n else f"degree-{k} coefficient of the depressed form"
            return Verdict("Reject", f"{what} {D.coeff(k)} is transcendental", k)
    f = D - D.coeff(0)
    return _checked(h, Verdict("Pass", witness=Witness(f, -s, D.coeff(0))))


def _checked(h: TPoly, v: Verdict) -> Verdict:
    if v.witness.expand() != h:
        raise AssertionError(f"witness does not re-expand to {h}")
    return v


def interpolated_depressed(h: TPoly) -> TPoly:
    """D from n+1 evaluations at rational points (independent of compose_shift)."""
    n = max(h.degree, 0)
    s, _ = depressed(h) if n >= 1 else (TranscElem.const(0), h)
    xs = [Fraction(i) for i in range(n + 1)]
    ys = [h(s + x) for x in xs]
    out = TPoly(())
    for i, xi in enumerate(xs):
        basis = TPoly.of([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * TPoly.of([-xj, 1])
                denom *= xi - xj
        out = out + basis * (ys[i] / denom)
    return out


def piecewise_check(pieces: Sequence[tuple[tuple[Scalar, Scalar], TPoly]]) -> list[Verdict]:
    spans = sorted((Fraction(a), Fraction(b)) for (a, b), _ in pieces)
    for (a, b), (c, _) in zip(spans, spans[1:]):
        if c < b:
            raise ValueError(f"overlapping intervals ({a},{b}) and ({c},...)")
    for a, b in spans:
        if not a < b:
            raise ValueError(f"empty interval ({a},{b})")
    return [shift_representable(h) for _, h in pieces]


# --------------------------------------------------------------------------
# planar predicates over M = Q(e2), e = e1

PLANE = Ladder(("e1", "e2"))


@dataclass(frozen=True)
class PlanarPredicate:
    name: str
    test: Callable[[LadderElem, LadderElem], bool] = field(compare=False)

    def __call__(self, x, y) -> bool:
        return self.test(PLANE.coerce(x), PLANE.coerce(y))


def _e() -> LadderElem:
    return PLANE.var("e1")


def extddef_build() -> tuple[PlanarPredicate, PlanarPredicate, PlanarPredicate, PlanarPredicate]:
    e = _e()
    X = PlanarPredicate("X", lambda x, y: 0 < x < e and 0 < y < e * x)
    X1 = PlanarPredicate("X1", lambda x, y: y <= x * x / 2 + e * x)
    X2 = PlanarPredicate("X2", lambda x, y: x < e)
    Q = PlanarPredicate("Quadrant", lambda x, y: x > 0 and y > 0)
    return X, X1, X2, Q


def random_m_element(rng: random.Random, max_deg: int = 3, height: int = 6) -> LadderElem:
    """A random element of Q(e2) with bounded degree and height."""
    t = PLANE.var("e2")

    def coeff():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    def poly(deg, monic=False):
        out = PLANE.zero()
        for i in range(deg + 1):
            c = Fraction(1) if monic and i == deg else coeff()
            out = out + c * t ** i
        return out

    num = poly(rng.randint(0, max_deg))
    # shift the valuation so that infinitesimal and infinite points both occur
    num = num * t ** rng.randint(0, 3)
    if rng.random() < 0.3:
        den = poly(rng.randint(1, 2), monic=True)
        if den:
            return num / den
    return num


@dataclass(frozen=True)
class ExtddefReport:
    samples: int
    discrepancies: list
    in_X: int

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "in_X": self.in_X,
            "discrepancies": [[str(x), str(y)] for x, y in self.discrepancies],
        }


def extddef_verify(samples: int, seed: int = 0) -> ExtddefReport:
    X, X1, X2, Q = extddef_build()
    rng = random.Random(seed)
    bad = []
    hits = 0
    for i in range(samples):
        x = random_m_element(rng)
        # bias y towards the interesting band below e*x
        y = random_m_element(rng) if i % 2 else x * random_m_element(rng) * PLANE.var("e2") ** rng.randint(0, 2)
        lhs = X(x, y)
        hits += lhs
        if lhs != (X1(x, y) and X2(x, y) and Q(x, y)):
            bad.append((x, y))
    return ExtddefReport(samples, bad, hits)


def propex_region() -> PlanarPredicate:
    e = _e()
    return PlanarPredicate("propex", lambda x, y: x > 0 and 0 < y < e * x)


# --------------------------------------------------------------------------
# candidate falsification


class MalformedCandidate(ValueError):
    pass


_REL = re.compile(r"(<=|>=|!=|<|>|=)")
_OPS = {
    "<": lambda v: v < 0, "<=": lambda v: v <= 0, ">": lambda v: v > 0,
    ">=": lambda v: v >= 0, "=": lambda v: v == 0, "!=": lambda v: v != 0,
}


@dataclass(frozen=True)
class Template:
    """{(x, y) : (x - a, y - b) satisfies every inequality}, inequalities over M."""

    constraints: tuple[tuple[object, str], ...]  # (ast of lhs - rhs, op)
    shift: tuple[LadderElem, LadderElem]
    text: str

    def __call__(self, x: LadderElem, y: LadderElem) -> bool:
        env = {"x": x - self.shift[0], "y": y - self.shift[1], "e2": PLANE.var("e2")}
        for ast, op in self.constraints:
            v = evaluate(ast, env, PLANE.coerce)
            if not _OPS[op](PLANE.coerce(v).sign()):
                return False
        return True


def _template(obj: dict) -> Template:
    if not isinstance(obj, dict) or "template" not in obj:
        raise MalformedCandidate("each piece needs a 'template' list")
    cons = []
    for ineq in obj["template"]:
        parts = _REL.split(ineq)
        if len(parts) != 3:
            raise MalformedCandidate(f"bad inequality {ineq!r}")
        lhs, op, rhs = parts
        try:
            ast = ("-", parse_ast(lhs), parse_ast(rhs))
        except ParseError as ex:
            raise MalformedCandidate(f"{ineq!r}: {ex}") from None
        bad = _vars(ast) - {"x", "y", "e2"}
        if bad:
            raise MalformedCandidate(
                f"template {ineq!r} uses {sorted(bad)}; templates must be defined over M (x, y, e2)"
            )
        cons.append((ast, op))
    shift = obj.get("shift", ["0", "0"])
    if len(shift) != 2:
        raise MalformedCandidate("shift must have two components")
    env = {"e": _e(), "e1": _e(), "e2": PLANE.var("e2")}
    try:
        sh = tuple(PLANE.coerce(evaluate(parse_ast(str(s)), env, PLANE.coerce)) for s in shift)
    except ParseError as ex:
        raise MalformedCandidate(f"bad shift: {ex}") from None
    return Template(tuple(cons), sh, " & ".join(obj["template"]) + f" + ({sh[0]}, {sh[1]})")


def _vars(ast) -> set[str]:
    if ast[0] == "var":
        return {ast[1]}
    if ast[0] == "num":
        return set()
    if ast[0] in ("neg",):
        return _vars(ast[1])
    if ast[0] == "pow":
        return _vars(ast[1])
    return _vars(ast[1]) | _vars(ast[2])


@dataclass(frozen=True)
class Candidate:
    """Union of intersections of shifted templates."""

    terms: tuple[tuple[Template, ...], ...]

    @classmethod
    def from_json(cls, data) -> "Candidate":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or not isinstance(data.get("terms"), list) or not data["terms"]:
            raise MalformedCandidate("candidate needs a non-empty 'terms' list")
        return cls(tuple(tuple(_template(p) for p in term) for term in data["terms"]))

    def __call__(self, x, y) -> bool:
        return any(all(t(x, y) for t in term) for term in self.terms)


def _grid() -> list[LadderElem]:
    t = PLANE.var("e2")
    vals = [PLANE.one(), PLANE.const(Fraction(1, 2)), PLANE.const(2), t, t ** 2, PLANE.zero(),
            PLANE.const(-1), t / 2, 2 * t, t ** 3, PLANE.const(3), -t, 1 / t, t ** 2 / 4,
            PLANE.const(Fraction(1, 3)), 3 * t ** 2 / 2]
    return vals


def candidate_falsifier(X: PlanarPredicate, candidate: Candidate, budget: int = 5000,
                        seed: int = 0) -> Optional[tuple[LadderElem, LadderElem]]:
    """First point where candidate and X disagree, or None (Unknown) on budget exhaustion."""
    vals = _grid()
    tried = 0
    # pairs ordered by the larger grid index, then lexicographically
    for m in range(len(vals)):
        for i in range(m + 1):
            for pt in ((vals[m], vals[i]), (vals[i], vals[m])) if i < m else ((vals[m], vals[m]),):
                tried += 1
                if tried > budget:
                    return None
                if X(*pt) != candidate(*pt):
                    return pt
    rng = random.Random(seed)
    while tried < budget:
        tried += 1
        x = random_m_element(rng)
        y = x * random_m_element(rng)
        if X(x, y) != candidate(x, y):
            return x, y
    return None


# --------------------------------------------------------------------------
# the X_pi verdict

CHAIN_REJECT = (
    "shift criterion: {h} -> Reject ({obstruction})",
    "necessity of the shift form: the region {{y < {h}}} over the real algebraic numbers "
    "is not a Boolean combination of d-semialgebraic sets",
    "external-definability equivalence: Lambda from the external type space onto the "
    "Ellis semigroup is not an isomorphism",
)
CHAIN_PASS = (
    "shift criterion: {h} -> Pass",
    "inconclusive: the criterion is only a necessary condition",
)
CITATIONS = ["P:realalg", "C:Equiv-Ellis-ext", "C:Alg"]


def xpi_report(slope: str = "tau") -> dict:
    h = TPoly.parse(f"({slope})*x")
    v = shift_representable(h)
    if v.passed:
        chain = [s.format(h=h) for s in CHAIN_PASS]
        cites = ["P:realalg"]
    else:
        chain = [s.format(h=h, obstruction=v.obstruction) for s in CHAIN_REJECT]
        cites = list(CITATIONS)
    return {"h": str(h), **v.to_dict(), "chain": chain, "citations": cites}
