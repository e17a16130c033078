from fractions import Fraction

import pytest
from hypothesis import given

from ellisdyn.ordfields import Ladder, ParseError
from ellisdyn.sets1d import InvertedBounds, Set1D, parse_set

from .conftest import L2, elems, sets_over

Q = Ladder()
PROBES = [Fraction(n, 4) for n in range(-16, 17)]


def S(text, lad=Q):
    return parse_set(text, lad)


OPS = {
    "|": (lambda a, b: a | b, lambda x, y: x or y),
    "&": (lambda a, b: a & b, lambda x, y: x and y),
    "-": (lambda a, b: a - b, lambda x, y: x and not y),
}


def probe_oracle(X, Y, sym):
    """Compare a set operation with pointwise membership on rational probes and endpoints."""
    set_op, bool_op = OPS[sym]
    Z = set_op(X, Y)
    for p in PROBES + X.endpoints() + Y.endpoints():
        assert Z.member(p) == bool_op(X.member(p), Y.member(p))


class TestNormalize:
    def test_merges_adjacent(self):
        X = Set1D.normalize(Q, [(0, False, 1, False), (1, False, 2, False), (1, True, 1, True)])
        assert str(X) == "(0,2)"

    def test_empty(self):
        assert Set1D.normalize(Q, []).is_empty()

    def test_sorts(self):
        X = Set1D.normalize(Q, [(2, True, 2, True), (0, False, 1, False)])
        assert str(X) == "(0,1) u [2]"

    def test_degenerate_open_piece_vanishes(self):
        assert Set1D.interval(Q, 1, 1).is_empty()

    def test_inverted_interval(self):
        with pytest.raises(InvertedBounds):
            Set1D.interval(Q, 2, 1)

    @given(sets_over(L2))
    def test_component_count_never_grows(self, X):
        assert len(Set1D.normalize(L2, X.pieces + X.pieces)) == len(X)


class TestBoolean:
    def test_pinned(self):
        assert str(~S("(0,+inf)")) == "(-inf,0]"
        assert str(S("(0,2)") & S("(1,3)")) == "(1,2)"
        assert str(~S("{}")) == "(-inf,+inf)"

    def test_symmetric_difference_against_probes(self):
        X = S("(-inf,0) u [1,2]")
        Y = S("[-1,1) u (3/2,5]")
        D = X ^ Y
        for p in [Fraction(n, 8) for n in range(-40, 41)]:
            assert D.member(p) == (X.member(p) != Y.member(p))

    @given(sets_over(Q), sets_over(Q))
    def test_ops_match_membership(self, X, Y):
        for sym in OPS:
            probe_oracle(X, Y, sym)

    @given(sets_over(L2), sets_over(L2), sets_over(L2))
    def test_laws(self, X, Y, Z):
        assert ~~X == X
        assert ~(X | Y) == ~X & ~Y
        assert ~(X & Y) == ~X | ~Y
        assert X | (X & Y) == X
        assert X & (Y | Z) == (X & Y) | (X & Z)

    def test_field_mismatch(self):
        with pytest.raises(ValueError):
            S("(0,1)") | S("(0,1)", L2)


class TestGroup:
    def test_translate(self):
        assert str(S("(0,1)").translate(1)) == "(1,2)"
        X = S("(0,1] u [3]")
        assert X.translate(0) == X

    @given(sets_over(L2), elems())
    def test_translate_inverse(self, X, g):
        assert X.translate(g).translate(-g) == X

    @given(sets_over(L2), sets_over(L2), elems())
    def test_translate_is_automorphism(self, X, Y, g):
        assert (X | Y).translate(g) == X.translate(g) | Y.translate(g)
        assert (~X).translate(g) == ~X.translate(g)

    def test_rational_scaling(self):
        assert str(S("(0,1]").scale(-2)) == "[-2,0)"
        assert str(S("(0,1]").scale(0)) == "[0]"


class TestMember:
    def test_pinned(self):
        assert S("(0,1)").member(Fraction(1, 2))
        assert S("(0,1)", Ladder(("e1",))).member(Ladder(("e1",)).var(0))
        assert not S("[0,1)").member(1)


class TestText:
    CORPUS = [
        ("(0,1) u [2] u (3,+inf)", "(0,1) u [2] u (3,+inf)"),
        ("[1]", "[1]"),
        ("(0,1) u (1,2)", "(0,1) u (1,2)"),
        ("(0,1] u (1,2)", "(0,2)"),
        ("[2,3] u (0,1)", "(0,1) u [2,3]"),
        ("(-inf,+inf)", "(-inf,+inf)"),
        ("(-inf,0] u [0,+inf)", "(-inf,+inf)"),
        ("{}", "{}"),
        ("[1/2,3/4)", "[1/2,3/4)"),
        ("(0,e1) u [e1]", "(0,e1]"),
        ("(e2,e1)", "(e2,e1)"),
        ("[0,1] u [1/2]", "[0,1]"),
        ("(1,1) u [2]", "[2]"),
        ("(-1, 1)", "(-1,1)"),
        ("(2*e1 - e2, 1/e1)", "(2*e1 - e2,1/e1)"),
    ]

    @pytest.mark.parametrize("text,canon", CORPUS)
    def test_round_trip(self, text, canon):
        X = S(text, L2)
        assert str(X) == canon
        assert S(str(X), L2) == X

    def test_three_pieces(self):
        assert len(S("(0,1) u [2] u (3,+inf)")) == 3

    def test_inverted_bounds_message(self):
        with pytest.raises(InvertedBounds, match="inverted bounds at 1..5"):
            S("(1,0)")

    @pytest.mark.parametrize("bad", ["(0,1", "0,1)", "(0,1) (2,3)", "[+inf,1)", "(0,1) u", "(0,1,2)"])
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            S(bad)

    @given(sets_over(L2))
    def test_round_trip_random(self, X):
        assert S(str(X), L2) == X
