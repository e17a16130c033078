"""Finite groups acting on finite Boolean algebras of subsets.

Subsets of G are int bitmasks. A finite Boolean algebra is stored through its
atoms, so an ultrafilter is just an atom index. For a left-invariant algebra
and p the ultrafilter of the atom containing ``a``::

    d_p X = {g : g^-1 X in p} = {g : g a in X} = X a^-1

which does not depend on the chosen ``a``.

Finite Stone spaces are discrete, so the Ellis envelope is exactly the set
of maps l_g; the point here is exhaustive verification of the identities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

MAX_ORDER = 64
LATTICE_MAX_ORDER = 8


class EquivalenceViolation(AssertionError):
    pass


class NotDClosed(ValueError):
    pass


class BudgetExceeded(ValueError):
    pass


class NotInAlgebra(ValueError):
    pass


class UnknownElement(KeyError):
    pass


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        if not 1 <= n <= MAX_ORDER:
            raise ValueError(f"group order {n} outside 1..{MAX_ORDER}")
        t = self.table
        if any(sorted(row) != list(range(n)) for row in t):
            raise ValueError("table rows must be permutations")
        e = self.identity
        if any(t[e][x] != x or t[x][e] != x for x in range(n)):
            raise ValueError("no two-sided identity")
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise ValueError("multiplication is not associative")

    @property
    def n(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int:
        for e in range(len(self.table)):
            if all(self.table[e][x] == x for x in range(len(self.table))):
                return e
        raise ValueError("no identity")

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in range(self.n) if self.table[a][b] == e) for a in range(self.n))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    def left(self, g: int, X: int) -> int:
        """g X."""
        row = self.table[g]
        return mask_of(row[x] for x in bits(X))

    def right(self, X: int, h: int) -> int:
        """X h."""
        t = self.table
        return mask_of(t[x][h] for x in bits(X))

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(a))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownElement(f"{label!r} is not an element of {self.name}") from None

    def fmt(self, X: int) -> str:
        return "{" + ",".join(self.labels[i] for i in bits(X)) + "}"


def _perm_group(name: str, perms: Sequence[tuple[int, ...]]) -> FiniteGroup:
    """Group of permutations; (p*q)(x) = p(q(x))."""
    perms = sorted(perms, key=lambda p: (p != tuple(range(len(p))), _cycle_len_key(p), p))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[tuple(p[q[x]] for x in range(len(p)))] for q in perms) for p in perms)
    return FiniteGroup(name, tuple(_cycles(p) for p in perms), table)


def _cycle_len_key(p) -> int:
    return sum(1 for i, x in enumerate(p) if i != x)


def _cycles(p: tuple[int, ...]) -> str:
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        c, x = [], s
        while x not in seen:
            seen.add(x)
            c.append(str(x + 1))
            x = p[x]
        out.append("(" + "".join(c) + ")")
    return "".join(out) or "e"


def _closure(gens: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(n))
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[x]] for x in range(n))
                if q not in out:
                    out.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(out)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(f"Z{n}", tuple(str(i) for i in range(n)),
                       tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def symmetric(k: int) -> FiniteGroup:
    return _perm_group(f"S{k}", list(itertools.permutations(range(k))))


def dihedral4() -> FiniteGroup:
    # symmetries of the square with vertices 0..3 in cyclic order
    return _perm_group("D4", _closure([(1, 2, 3, 0), (0, 3, 2, 1)]))


def quaternion() -> FiniteGroup:
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basic = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def split(s):
        return (-1, s[1:]) if s.startswith("-") else (1, s)

    def name(sign, u):
        return u if sign > 0 else "-" + u

    table = []
    for a in names:
        sa, ua = split(a)
        row = []
        for b in names:
            sb, ub = split(b)
            s, u = basic[(ua, ub)]
            row.append(names.index(name(sa * sb * s, u)))
        table.append(tuple(row))
    return FiniteGroup("Q8", tuple(names), tuple(table))


def group_by_name(name: str) -> FiniteGroup:
    key = name.strip().upper().replace("_", "")
    if key.startswith("Z") and key[1:].isdigit():
        n = int(key[1:])
        if not 2 <= n <= MAX_ORDER:
            raise ValueError(f"Z_n needs 2 <= n <= {MAX_ORDER}")
        return cyclic(n)
    builders = {"S3": lambda: symmetric(3), "S4": lambda: symmetric(4), "D4": dihedral4, "Q8": quaternion}
    if key not in builders:
        raise UnknownElement(f"unknown group {name!r}; use Z<n>, S3, S4, D4 or Q8")
    return builders[key]()


# --------------------------------------------------------------------------
# algebras


@dataclass(frozen=True)
class SetAlgebra:
    """Finite Boolean algebra of subsets of G, given by its atoms."""

    group: FiniteGroup
    atoms: tuple[int, ...]
    _atom_of: tuple[int, ...] = field(repr=False, compare=False, hash=False, default=())

    @classmethod
    def from_partition(cls, G: FiniteGroup, blocks: Iterable[int]) -> "SetAlgebra":
        atoms = tuple(sorted((b for b in blocks if b), key=lambda b: (b & -b).bit_length()))
        if sum(bin(a).count("1") for a in atoms) != G.n or mask_of_all(atoms) != G.full:
            raise ValueError("atoms must partition G")
        where = [0] * G.n
        for i, a in enumerate(atoms):
            for x in bits(a):
                where[x] = i
        return cls(G, atoms, tuple(where))

    @classmethod
    def generated(cls, G: FiniteGroup, family: Iterable[int]) -> "SetAlgebra":
        """Smallest Boolean algebra containing ``family``: split by membership signature."""
        fam = list(family)
        sig: dict[tuple[bool, ...], int] = {}
        for x in range(G.n):
            key = tuple(bool(S >> x & 1) for S in fam)
            sig[key] = sig.get(key, 0) | (1 << x)
        return cls.from_partition(G, sig.values())

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    def atom_of(self, x: int) -> int:
        return self._atom_of[x]

    def rep(self, i: int) -> int:
        a = self.atoms[i]
        return (a & -a).bit_length() - 1

    def contains(self, X: int) -> bool:
        return all((X & a) in (0, a) for a in self.atoms)

    def members(self) -> Iterator[int]:
        for combo in range(self.size):
            yield mask_of_atoms(self.atoms, combo)

    def subalgebra_of(self, other: "SetAlgebra") -> bool:
        return all(other.contains(a) for a in self.atoms)

    def is_left_invariant(self) -> bool:
        G = self.group
        return all(self.contains(G.left(g, a)) for g in range(G.n) for a in self.atoms)

    def __eq__(self, other):
        return isinstance(other, SetAlgebra) and self.group is other.group and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)


def mask_of_all(ms: Iterable[int]) -> int:
    out = 0
    for m in ms:
        out |= m
    return out


def mask_of_atoms(atoms: Sequence[int], combo: int) -> int:
    out = 0
    i = 0
    while combo:
        if combo & 1:
            out |= atoms[i]
        combo >>= 1
        i += 1
    return out


def generate_left_invariant(G: FiniteGroup, seeds: Iterable[int]) -> SetAlgebra:
    family = {G.left(g, S) for S in seeds for g in range(G.n)}
    return SetAlgebra.generated(G, sorted(family))


def d_p_finite(A: SetAlgebra, X: int, p: int) -> int:
    """d_p X for the ultrafilter of atom ``p``."""
    if not A.contains(X):
        raise NotInAlgebra(f"{A.group.fmt(X)} is not in the algebra")
    G = A.group
    a = A.rep(p)
    return mask_of(g for g in range(G.n) if X >> G.mul(g, a) & 1)


def d_p_by_definition(A: SetAlgebra, X: int, p: int) -> int:
    """{g : g^-1 X in p}, with p the ultrafilter of sets containing atom p."""
    G = A.group
    atom = A.atoms[p]
    return mask_of(g for g in range(G.n) if G.left(G.inverse[g], X) & atom == atom)


def d_closure(A: SetAlgebra, max_rounds: int = 64) -> tuple[SetAlgebra, int]:
    """A^d and the number of rounds until the fixpoint."""
    G = A.group
    cur = A
    for rounds in range(max_rounds):
        fam = list(cur.atoms)
        fam += [d_p_finite(cur, X, p) for p in range(len(cur.atoms)) for X in cur.atoms]
        nxt = generate_left_invariant(G, fam)
        if nxt == cur:
            return cur, rounds
        cur = nxt
    raise BudgetExceeded("d_closure did not stabilise")


def is_d_closed(A: SetAlgebra) -> bool:
    return all(A.contains(d_p_finite(A, X, p)) for p in range(len(A.atoms)) for X in A.atoms)


def left_invariant_algebras(G: FiniteGroup) -> list[SetAlgebra]:
    """All left-invariant subalgebras of P(G), by brute force over identity blocks."""
    if G.n > LATTICE_MAX_ORDER:
        raise BudgetExceeded(f"lattice enumeration limited to |G| <= {LATTICE_MAX_ORDER}")
    e = G.identity
    others = [x for x in range(G.n) if x != e]
    out = []
    seen = set()
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            H0 = mask_of((e, *combo))
            blocks = {G.left(g, H0) for g in range(G.n)}
            if sum(bin(b).count("1") for b in blocks) != G.n:
                continue
            A = SetAlgebra.from_partition(G, blocks)
            if A.is_left_invariant() and A.atoms not in seen:
                seen.add(A.atoms)
                out.append(A)
    return out


def minimality_check(A: SetAlgebra, lattice: Optional[list[SetAlgebra]] = None) -> bool:
    """Every d-closed left-invariant B with A ⊆ B ⊆ A^d contains A^d."""
    Ad, _ = d_closure(A)
    lattice = lattice if lattice is not None else left_invariant_algebras(A.group)
    for B in lattice:
        if A.subalgebra_of(B) and B.subalgebra_of(Ad) and is_d_closed(B) and not Ad.subalgebra_of(B):
            return False
    return True


# --------------------------------------------------------------------------
# semigroup structure


def star_table(A: SetAlgebra) -> tuple[tuple[int, ...], ...]:
    """t[p][q] = atom of l_p(q); checks representative independence."""
    if not is_d_closed(A):
        raise NotDClosed("star table needs a d-closed algebra")
    G = A.group
    k = len(A.atoms)
    rows = []
    for p in range(k):
        row = []
        for q in range(k):
            vals = {A.atom_of(G.mul(a, b)) for a in bits(A.atoms[p]) for b in bits(A.atoms[q])}
            if len(vals) != 1:
                raise EquivalenceViolation(f"p*q not well defined for atoms {p}, {q}")
            row.append(vals.pop())
        rows.append(tuple(row))
    return tuple(rows)


def is_associative(table: Sequence[Sequence[int]]) -> bool:
    k = len(table)
    return all(table[table[a][b]][c] == table[a][table[b][c]] for a in range(k) for b in range(k) for c in range(k))


def l_map(A: SetAlgebra, g: int) -> tuple[int, ...]:
    """l_g on atoms: q -> atom of g b for b in q."""
    G = A.group
    return tuple(A.atom_of(G.mul(g, A.rep(q))) for q in range(len(A.atoms)))


@dataclass(frozen=True)
class EllisEnvelope:
    maps: tuple[tuple[int, ...], ...]
    composition: tuple[tuple[int, ...], ...]
    kernel_size: int

    @property
    def size(self) -> int:
        return len(self.maps)


def ellis_envelope(A: SetAlgebra) -> EllisEnvelope:
    G = A.group
    per_g = [l_map(A, g) for g in range(G.n)]
    maps = tuple(sorted(set(per_g)))
    idx = {m: i for i, m in enumerate(maps)}
    comp = []
    for f in maps:
        row = []
        for h in maps:
            fh = tuple(f[h[x]] for x in range(len(h)))
            if fh not in idx:
                raise EquivalenceViolation("envelope not closed under composition")
            row.append(idx[fh])
        comp.append(tuple(row))
    ident = tuple(range(len(A.atoms)))
    kernel = sum(1 for m in per_g if m == ident)
    if len(maps) * kernel != G.n:
        raise EquivalenceViolation("envelope size differs from |G / K|")
    return EllisEnvelope(maps, tuple(comp), kernel)


def lambda_map(B: SetAlgebra, A: SetAlgebra) -> tuple[tuple[int, ...], ...]:
    """p in S(B) -> l_p^A, as maps on A-atoms; checks representative independence."""
    G = A.group
    out = []
    for p in range(len(B.atoms)):
        images = set()
        for a in bits(B.atoms[p]):
            images.add(tuple(A.atom_of(G.mul(a, A.rep(q))) for q in range(len(A.atoms))))
        if len(images) != 1:
            raise EquivalenceViolation(f"l_p^A depends on the representative of atom {p}")
        out.append(images.pop())
    return tuple(out)


def lambda_check(B: SetAlgebra, A: SetAlgebra) -> str:
    """'Iso', 'Epi' or 'NotWellFormed'; raises if the three criteria disagree."""
    if not A.subalgebra_of(B) or not is_d_closed(B) or not A.is_left_invariant():
        return "NotWellFormed"
    lam = lambda_map(B, A)
    env = set(ellis_envelope(A).maps)
    if set(lam) != env:
        raise EquivalenceViolation("Lambda is not onto the Ellis envelope")
    injective = len(set(lam)) == len(lam)
    Ad, _ = d_closure(A)
    restriction = {Ad.atom_of(B.rep(p)) for p in range(len(B.atoms))}
    homeo = len(restriction) == len(B.atoms)
    equal = B == Ad
    if not (injective == homeo == equal):
        raise EquivalenceViolation(
            f"Lambda injective={injective}, restriction bijective={homeo}, B == A^d: {equal}"
        )
    return "Iso" if injective else "Epi"


# --------------------------------------------------------------------------
# exhaustive identity checks


def check_equation_zero(A: SetAlgebra) -> bool:
    """X h = d_{p(h^-1)} X for all X in A and h in G."""
    G = A.group
    for X in A.members():
        for h in range(G.n):
            p = A.atom_of(G.inverse[h])
            if G.right(X, h) != d_p_finite(A, X, p) or d_p_by_definition(A, X, p) != G.right(X, h):
                return False
    return True


def check_adleft_translation(A: SetAlgebra) -> bool:
    """h d_q Y = d_q (h Y)."""
    G = A.group
    for Y in A.members():
        for q in range(len(A.atoms)):
            dq = d_p_finite(A, Y, q)
            for h in range(G.n):
                if G.left(h, dq) != d_p_finite(A, G.left(h, Y), q):
                    return False
    return True


def check_adleft_minimal(A: SetAlgebra, lattice: Sequence[SetAlgebra]) -> bool:
    """A ⊆ B with B d-closed implies A^d ⊆ B."""
    Ad, _ = d_closure(A)
    return all(Ad.subalgebra_of(B) for B in lattice if A.subalgebra_of(B) and is_d_closed(B))


def check_composition(A: SetAlgebra) -> bool:
    """d_p d_q X = d_{p*q} X on a d-closed algebra."""
    t = star_table(A)
    k = len(A.atoms)
    for X in A.members():
        for q in range(k):
            dq = d_p_finite(A, X, q)
            for p in range(k):
                if d_p_finite(A, dq, p) != d_p_finite(A, X, t[p][q]):
                    return False
    return True


def coset_algebra(G: FiniteGroup, H: Iterable[str]) -> SetAlgebra:
    return generate_left_invariant(G, [mask_of(G.index(h) for h in H)])


def parse_seeds(G: FiniteGroup, text: str) -> list[int]:
    """Seeds as ``{a,b};{c}`` with element labels."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("{") and chunk.endswith("}")):
            raise ValueError(f"seed {chunk!r} must look like {{a,b}}")
        inner = chunk[1:-1].strip()
        out.append(mask_of(G.index(s.strip()) for s in inner.split(",") if s.strip()))
    return out
