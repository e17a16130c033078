import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ellisdyn.ordfields import TranscElem
from ellisdyn.shiftcrit import (
    PLANE,
    Candidate,
    MalformedCandidate,
    TPoly,
    Witness,
    candidate_falsifier,
    depressed,
    extddef_build,
    extddef_verify,
    interpolated_depressed,
    piecewise_check,
    propex_region,
    shift_representable,
    xpi_report,
)

from .conftest import rationals

TAU = TranscElem.tau()
e1, e2 = PLANE.var("e1"), PLANE.var("e2")

# elements of Q(tau) of the form a + b*tau
qtau = st.builds(lambda a, b: TranscElem.const(a) + TranscElem.const(b) * TAU, rationals, rationals)
rat_polys = st.lists(rationals, min_size=1, max_size=5).map(TPoly.of)


def P(text):
    return TPoly.parse(text)


class TestTPoly:
    def test_parse_and_print(self):
        assert str(P("(x + tau)^2")) == "x^2 + (2*tau)*x + tau^2"
        assert P("pi*x") == P("tau*x")
        assert P("0").degree == -1

    def test_shift_and_evaluate(self):
        h = P("x^3 - 2*x + tau")
        c = TranscElem.const(Fraction(1, 3))
        for v in range(-3, 4):
            assert h.compose_shift(c)(v) == h(c + v)


class TestCriterion:
    def test_x_pi(self):
        v = shift_representable(P("tau*x"))
        assert v.kind == "Reject" and v.degree == 1

    def test_constant_offset(self):
        v = shift_representable(P("x + tau"))
        assert v.passed
        assert v.witness == Witness(P("x"), TranscElem.const(0), TAU)

    def test_depressible_quadratic(self):
        v = shift_representable(P("x^2 + tau*x + 1"))
        assert v.passed
        assert v.witness.f == P("x^2")
        assert v.witness.c == TAU / 2
        assert v.witness.d == 1 - TAU * TAU / 4
        assert v.witness.expand() == P("x^2 + tau*x + 1")

    def test_transcendental_leading(self):
        v = shift_representable(P("tau*x^2"))
        assert v.kind == "Reject" and v.degree == 2

    def test_cubic_middle_coefficient(self):
        # depressed form z^3 + tau*z keeps tau in degree 1
        v = shift_representable(P("x^3 + tau*x"))
        assert v.kind == "Reject" and v.degree == 1

    def test_constants(self):
        assert shift_representable(P("tau^2 + 1")).passed
        assert shift_representable(P("0")).passed

    def test_to_dict(self):
        d = shift_representable(P("tau*x")).to_dict()
        assert d["verdict"] == "Reject" and d["degree"] == 1
        d = shift_representable(P("x + tau")).to_dict()
        assert d["witness"] == {"f": "z", "c": "0", "d": "tau"}

    @given(rat_polys, qtau, qtau)
    def test_constructed_instances_pass(self, f, c, d):
        # h = f(x + c) + d with f rational must pass, with a witness re-expanding to h
        h = f.compose_shift(c) + d
        v = shift_representable(h)
        assert v.passed and v.witness.expand() == h

    @given(rat_polys, qtau, qtau, st.integers(1, 4), rationals)
    def test_shift_offset_invariance(self, f, c, d, k, b):
        h = f + TPoly.of([0] * k + [TAU + b])
        assert shift_representable(h).kind == shift_representable(h.compose_shift(c) + d).kind

    @given(rat_polys, qtau, st.integers(1, 4))
    def test_tau_leading_rejects(self, f, c, k):
        h = f + TPoly.of([0] * (max(f.degree, 0) + k) + [TAU])
        v = shift_representable(h.compose_shift(c))
        assert v.kind == "Reject"

    @given(st.lists(qtau, min_size=2, max_size=5))
    def test_interpolation_matches_depression(self, cs):
        h = TPoly(tuple(cs))
        if h.degree < 1:
            return
        assert interpolated_depressed(h) == depressed(h)[1]


class TestPiecewise:
    def test_pinned(self):
        kinds = [v.kind for v in piecewise_check([((0, 1), P("tau*x")), ((1, 2), P("x"))])]
        assert kinds == ["Reject", "Pass"]

    def test_constant_piece(self):
        assert [v.kind for v in piecewise_check([((0, 1), P("3"))])] == ["Pass"]

    def test_empty(self):
        assert piecewise_check([]) == []

    def test_overlap(self):
        with pytest.raises(ValueError):
            piecewise_check([((0, 2), P("x")), ((1, 3), P("x"))])
        with pytest.raises(ValueError):
            piecewise_check([((1, 1), P("x"))])


class TestExtddef:
    X, X1, X2, QUAD = extddef_build()

    def test_pinned(self):
        assert self.X(e2, e2 ** 3)
        assert not self.X(e2, e2)
        assert not self.X(Fraction(1, 2), e2)
        assert not self.X(Fraction(1, 2), Fraction(1, 100))

    def test_band_edges(self):
        # y just above and just below the parabola branch x^2/2
        assert self.X(e2, e2 ** 2 / 4)
        assert self.X(e2, 3 * e2 ** 2 / 2)
        assert self.X1(e2, 3 * e2 ** 2 / 2)

    def test_decomposition_agrees(self):
        rep = extddef_verify(1000, seed=7)
        assert rep.discrepancies == [] and rep.samples == 1000 and rep.in_X > 0

    def test_propex_region(self):
        R = propex_region()
        assert R(1, e1 / 2) and not R(1, Fraction(1, 2)) and not R(-1, -e1 / 2)


PARABOLA = {"terms": [[{"template": ["y <= x^2/2"], "shift": ["0", "0"]}, {"template": ["x > 0", "y > 0"]}]]}
HALF_PLANE = {"terms": [[{"template": ["y < x"]}]]}


class TestFalsifier:
    def test_half_plane(self):
        X = propex_region()
        assert candidate_falsifier(X, Candidate.from_json(HALF_PLANE)) == (1, Fraction(1, 2))

    def test_parabola(self):
        X = propex_region()
        pt = candidate_falsifier(X, Candidate.from_json(json.dumps(PARABOLA)))
        assert pt is not None
        assert X(*pt) != Candidate.from_json(PARABOLA)(*pt)

    def test_budget_exhaustion_is_unknown(self):
        X = propex_region()
        same = Candidate.from_json({"terms": [[{"template": ["x > 0", "y > 0", "y < x"]}]]})
        assert candidate_falsifier(X, same, budget=1) is None

    @pytest.mark.parametrize("bad", [
        {"terms": [[{"template": ["y < e*x"]}]]},
        {"terms": [[{"template": ["y < e1*x"]}]]},
        {"terms": []},
        {"terms": [[{"template": ["y x"]}]]},
        {"terms": [[{"shift": ["0", "0"]}]]},
        {"terms": [[{"template": ["y < x"], "shift": ["0"]}]]},
    ])
    def test_malformed(self, bad):
        with pytest.raises(MalformedCandidate):
            Candidate.from_json(bad)

    def test_external_shift_allowed(self):
        cand = Candidate.from_json({"terms": [[{"template": ["x > 0"], "shift": ["e", "0"]}]]})
        assert cand(2 * e1, 0) and not cand(e1 / 2, 0)


class TestXpi:
    def test_default(self):
        r = xpi_report()
        assert r["verdict"] == "Reject" and len(r["chain"]) == 3

    def test_rational_slope(self):
        r = xpi_report("2/3")
        assert r["verdict"] == "Pass"
        assert any("inconclusive" in line for line in r["chain"])

    def test_shifted_tau(self):
        assert xpi_report("tau + 1/2")["verdict"] == "Reject"
