import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ellisdyn import samples
from ellisdyn.cuts import (
    Above,
    Below,
    GenSet,
    NegInf,
    OracleCut,
    PosInf,
    Principal,
    UndecidableOrder,
    classify_cut,
    cut_cmp,
    cut_in_genset,
    cut_in_set,
    cut_of,
    format_cut,
    format_genset,
    genset_member,
    is_definable_cut,
    parse_cut,
    parse_genset,
    realize_in,
    trace,
)
from ellisdyn.ordfields import Ladder, SubfieldSpec
from ellisdyn.sets1d import Set1D, parse_set

from .conftest import L2, M23, elems, sets_over

e1, e2 = L2.gens()
Q = Ladder()
Q_IN_L2 = SubfieldSpec.depth(L2, 2)
Q_E2 = SubfieldSpec.depth(L2, 1)
E2 = Ladder(("e2",))
PID = cut_of(e1, Q_E2)


def tr(text, M=Q_IN_L2):
    return trace(parse_set(text, L2), M)


class TestCutOf:
    def test_pinned(self):
        assert cut_of(e1, Q_IN_L2) == Above(0)
        assert cut_of(1 / e1, Q_IN_L2) == PosInf()
        assert cut_of(-1 / e1, Q_IN_L2) == NegInf()
        assert cut_of(L2.const(3), Q_IN_L2) == Principal(3)
        assert classify_cut(PID) == "Valuational"

    def test_realization_independent(self):
        assert cut_of(e1, Q_IN_L2) == cut_of(5 * e1 ** 3, Q_IN_L2)
        assert cut_of(e1, Q_E2) == cut_of(e1 + e2, Q_E2) == cut_of(2 * e1, Q_E2)
        assert cut_of(e1, Q_E2) != cut_of(e1 * e2, Q_E2)

    @given(st.randoms(use_true_random=False), elems(E2))
    def test_compare_matches_ladder_sign(self, rng, m):
        lad = Ladder.standard(2)
        b = samples.element(rng, lad) + rng.choice((e1, e1 * e2, 1 / e1, e1 / e2, e2 * e2))
        p = cut_of(b, Q_E2)
        assert p.compare(m) == (b - m.to_ladder(lad)).sign()


class TestMembership:
    def test_pinned(self):
        assert cut_in_set(Above(0), parse_set("(0,1)", Q))
        assert not cut_in_set(Above(0), parse_set("(-inf,0]", Q))

    @pytest.mark.parametrize("q", [Fraction(1), Fraction(1, 7), Fraction(50)])
    def test_pid_between_e2_multiples_and_rationals(self, q):
        X = Set1D.interval(E2, q * E2.var(0), Fraction(1, 3))
        assert cut_in_set(PID, X)


class TestTrace:
    def test_pinned(self):
        assert format_genset(tr("(e1,1)")) == "(0,1)"
        assert format_genset(tr("(-e1,e1)")) == "[0]"
        assert format_genset(tr("(0,1)")) == "(0,1)"
        assert tr("(e1,1)") == GenSet.build(Q, [(Above(Q.zero()), Below(Q.one()))])

    def test_empty_intersection(self):
        # 3*e1 is still below every positive rational: the traces are (0,1) and (-1,0]
        assert format_genset(tr("(-1,3*e1)")) == "(-1,0]"
        assert (tr("(e1,1)") & tr("(-1,3*e1)")).is_empty()

    def test_member(self):
        assert genset_member(tr("(e1,1)"), Fraction(1, 2))

    def test_empty_trace_between_scales(self):
        amb = Ladder.standard(3)
        M = SubfieldSpec.depth(amb, 2)  # Q(e3)
        # (e2, 2*e2) contains no element of Q(e3)
        assert trace(parse_set("(e2,2*e2)", amb), M).is_empty()

    @given(st.randoms(use_true_random=False))
    def test_convex_components_do_not_multiply(self, rng):
        amb = Ladder(("e2", "t", "e3"))
        M = SubfieldSpec.of(amb, ["e2", "e3"])
        Y = samples.set1d(rng, amb)
        T = trace(Y, M)
        assert len(T) <= len(Y)
        for (a, b), (c, _) in zip(T.components, T.components[1:]):
            assert cut_cmp(a, b) < 0 and cut_cmp(b, c) < 0


class TestGenSetOps:
    def test_complement(self):
        Y = GenSet.build(Q, [(Above(Q.zero()), PosInf())])
        assert format_genset(~Y) == "(-inf,0]"
        assert ~Y == GenSet.build(Q, [(NegInf(), Above(Q.zero()))])

    @given(st.randoms(use_true_random=False))
    def test_boolean_laws(self, rng):
        amb = Ladder(("e2", "t", "e3"))
        M = SubfieldSpec.of(amb, ["e2", "e3"])
        A, B, C = (trace(samples.set1d(rng, amb), M) for _ in range(3))
        assert ~~A == A
        assert ~(A | B) == ~A & ~B
        assert A & (B | C) == (A & B) | (A & C)
        assert A - B == A & ~B

    @given(sets_over(M23), sets_over(M23))
    def test_definable_sets_embed(self, X, Y):
        GX, GY = GenSet.from_set1d(X), GenSet.from_set1d(Y)
        assert GX | GY == GenSet.from_set1d(X | Y)
        assert ~GX == GenSet.from_set1d(~X)
        assert GX.to_set1d() == X


class TestClassify:
    def test_pinned(self):
        assert classify_cut(Above(3)) == "OneSided"
        assert classify_cut(OracleCut("pi", 1, Q.zero())) == "Oracle"
        assert is_definable_cut(Above(0))
        assert not is_definable_cut(PID)
        assert not is_definable_cut(OracleCut("pi", 1, Q.zero()))


class TestOrder:
    def test_pointlike(self):
        assert cut_cmp(Below(1), Principal(1)) < 0 < cut_cmp(Above(1), Principal(1))
        assert cut_cmp(NegInf(), Below(-100)) < 0
        assert cut_cmp(Above(0), PID) < 0 < cut_cmp(Below(1), PID)

    def test_oracle(self):
        pi = OracleCut("pi", 1, Q.zero())
        assert cut_cmp(pi, Above(3)) > 0 and cut_cmp(pi, Below(Fraction(22, 7))) < 0
        assert pi.compare(Fraction(314, 100)) > 0
        with pytest.raises(UndecidableOrder):
            cut_cmp(pi, PID)

    def test_neg_shift(self):
        assert Above(1).neg() == Below(-1)
        assert PID.neg().neg() == PID
        assert PID.shift(1).shift(-1) == PID


class TestText:
    CUTS = ["0+", "3-", "[3]", "+inf", "-inf", "real(e1)@Q(e2)", "pi", "-pi+1", "e-1/2",
            "real(1/e1)@Q(e2)", "(1/2)+", "real(t)@Q(e1,e3) in Q(e1,t,e3)"]

    @pytest.mark.parametrize("text", CUTS)
    def test_cut_round_trip(self, text):
        p = parse_cut(text, E2)
        assert parse_cut(format_cut(p), E2) == p

    @given(st.randoms(use_true_random=False))
    def test_random_round_trip(self, rng):
        p = samples.cut(rng, M23)
        assert parse_cut(format_cut(p), M23) == p

    def test_genset_round_trip(self):
        for text in ["(0,1] u [2]", "<0+ | real(e1)@Q(e2)>", "<real(-e1)@Q(e2) | 1->", "{}"]:
            Y = parse_genset(text, E2)
            assert parse_genset(format_genset(Y), E2) == Y

    def test_realization_lies_in_cut(self):
        rng = random.Random(3)
        for _ in range(50):
            p = samples.cut(rng, M23)
            spec, b = realize_in(p, M23)
            assert cut_of(b, spec) == p


def test_cut_in_genset_agrees_with_sets():
    rng = random.Random(11)
    for _ in range(100):
        X = samples.set1d(rng, M23)
        p = samples.cut(rng, M23)
        assert cut_in_genset(p, GenSet.from_set1d(X)) == cut_in_set(p, X)

