from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ellisdyn import samples
from ellisdyn.ordfields import Ladder

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    if rep.when == "call":
        item.rep_call = rep

L2 = Ladder.standard(2)
M23 = Ladder(("e2", "e3"))

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))


@st.composite
def elems(draw, lad=L2, terms=3):
    out = lad.const(draw(rationals))
    for _ in range(draw(st.integers(0, terms))):
        exps = [draw(st.integers(-1, 3)) for _ in range(lad.k)]
        out = out + lad.monomial(exps, draw(rationals))
    return out


@st.composite
def nonzero_elems(draw, lad=L2):
    x = draw(elems(lad))
    return x if x else lad.one()


def sets_over(lad, max_pieces=5):
    return st.randoms(use_true_random=False).map(lambda r: samples.set1d(r, lad, max_pieces))


def cuts_over(lad, classes=samples.CUT_CLASSES):
    return st.randoms(use_true_random=False).map(lambda r: samples.cut(r, lad, classes))
