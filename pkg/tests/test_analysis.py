import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somoslab.analysis import (
    InsufficientData,
    NotLaurentInput,
    beta_degrees,
    check_laurent,
    degree_table_tsv,
    entropy_closed_form,
    entropy_estimate,
    height,
    height_growth,
    measured_beta_degrees,
    tropical_degrees,
)
from somoslab.engine import iterate_exact, iterate_symbolic
from somoslab.recdsl import catalog

from oracles import (
    ENTROPY_C3,
    GOLDEN_SQUARED,
    SOMOS8_SYMBOLIC_FAILURE,
    TROPICAL_C1,
    TROPICAL_C2,
    TROPICAL_C3,
    VIALLET_TAU_RATE,
)


# -- Laurent certification ----------------------------------------------------

def test_somos4_certified():
    rep = check_laurent(catalog("somos4"), 20)
    assert rep.certified
    assert rep.first_failure is None


@pytest.mark.parametrize("c", [0, 1, 2])
def test_small_family_certified(c):
    assert check_laurent(catalog(f"family({c})"), 14).certified


def test_somos8_failure_has_witness():
    rep = check_laurent(catalog("somos8"), 25)
    assert not rep.certified
    assert rep.first_failure == SOMOS8_SYMBOLIC_FAILURE
    assert rep.witness
    assert rep.flags[-1] is False and all(rep.flags[:-1])


def test_budget_stops_early():
    rep = check_laurent(catalog("family(4)"), 14, budget=0.5)
    assert rep.exhausted
    assert not rep.certified
    assert rep.first_failure is None
    assert all(rep.flags)


# -- degrees -------------------------------------------------------------------

def test_tropical_oracles():
    assert tropical_degrees(3, 11) == TROPICAL_C3[:11]
    assert tropical_degrees(3, 17) == TROPICAL_C3
    assert tropical_degrees(1, 17) == TROPICAL_C1
    assert tropical_degrees(2, 17) == TROPICAL_C2


def test_tropical_needs_seeds():
    with pytest.raises(ValueError):
        tropical_degrees(2, 3)


def test_tropical_c1_linear_and_c2_quadratic():
    d1 = tropical_degrees(1, 200).values
    d2 = tropical_degrees(2, 200).values
    assert d1[199] / 199 == pytest.approx(d1[99] / 99, rel=0.05)
    assert d2[199] / 199 ** 2 == pytest.approx(d2[99] / 99 ** 2, rel=0.05)
    assert d2[199] / 199 > 10 * (d1[199] / 199)


@given(st.integers(3, 12), st.integers(8, 60))
def test_tropical_linear_regime(c, N):
    d = tropical_degrees(c, N).values
    for n in range(6, N - 2):
        assert d[n + 2] + d[n - 2] == c * d[n] + 1


@given(st.integers(1, 8))
def test_tropical_monotone(c):
    d = tropical_degrees(c, 40).values
    assert d[:4] == [0, 0, 0, 0]
    assert all(a <= b for a, b in zip(d, d[1:]))


def test_beta_degree_first_step():
    assert measured_beta_degrees(catalog("family(2)"), 4)[4] == 1


@pytest.mark.parametrize("c", [1, 2, 3])
def test_beta_degrees_match_tropical(c):
    d = measured_beta_degrees(catalog(f"family({c})"), 10)
    assert d == tropical_degrees(c, 11)


def test_beta_degrees_need_laurent_input():
    its = iterate_symbolic(catalog("somos8"), 25)
    with pytest.raises(NotLaurentInput):
        beta_degrees(its)


def test_degree_table():
    tsv = degree_table_tsv([0, 1], [0, 1])
    assert tsv.splitlines()[0] == "n\tmeasured\ttropical"
    assert tsv.splitlines()[2] == "1\t1\t1"


# -- entropy --------------------------------------------------------------------

def test_entropy_closed_form():
    assert entropy_closed_form(0) == entropy_closed_form(1) == entropy_closed_form(2) == 0
    assert entropy_closed_form(3) == pytest.approx(ENTROPY_C3, abs=1e-12)
    assert entropy_closed_form(3) == pytest.approx(0.5 * math.log((3 + math.sqrt(5)) / 2))


def test_entropy_estimate_c3():
    est = entropy_estimate(tropical_degrees(3, 60))
    assert abs(est - ENTROPY_C3) / ENTROPY_C3 < 0.02


def test_entropy_estimate_small_c_is_near_zero():
    assert entropy_estimate(tropical_degrees(2, 60)) < 0.05


def test_entropy_needs_data():
    with pytest.raises(InsufficientData):
        entropy_estimate(tropical_degrees(3, 19))


@pytest.mark.parametrize("c", [4, 5, 6])
def test_entropy_estimate_tracks_closed_form(c):
    est = entropy_estimate(tropical_degrees(c, 60))
    assert est == pytest.approx(entropy_closed_form(c), rel=0.02)


# -- heights ----------------------------------------------------------------------

def test_height_definition():
    assert height(Fraction(29, 20)) == math.log(29)
    assert height(Fraction(-3, 7)) == math.log(7)
    assert height(Fraction(58, 40)) == math.log(29)


def test_viallet_tau_rate():
    rec = iterate_exact(catalog("viallet-tau"), [1] * 6, {}, 13)
    rep = height_growth(rec)
    assert rep.classification == "exponential"
    assert rep.rate == pytest.approx(VIALLET_TAU_RATE, rel=0.02)


def test_hv_rate_is_golden_square():
    rec = iterate_exact(catalog("hv"), [Fraction(1, 2), Fraction(2, 3)], {"a": Fraction(3, 5)}, 13)
    rep = height_growth(rec)
    assert rep.classification == "exponential"
    assert rep.rate == pytest.approx(GOLDEN_SQUARED, rel=0.02)


def test_somos4_heights_are_quadratic():
    rec = iterate_exact(catalog("somos4"), [Fraction(1, 2), 2, Fraction(3, 5), 1], {"alpha": 1, "beta": 1}, 26)
    rep = height_growth(rec)
    assert rep.classification == "polynomial"
    assert rep.degree == pytest.approx(2, abs=0.3)


def test_growth_needs_data():
    with pytest.raises(InsufficientData):
        height_growth([Fraction(2), Fraction(3)])


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["somos4", "somos5", "somos6", "somos7", "dana-scott", "c0", "viallet-tau"]))
def test_integer_orbit_heights(name):
    spec = catalog(name)
    params = {p: 1 for p in spec.params}
    rec = iterate_exact(spec, [1] * spec.order, params, 6)
    rep = height_growth(rec, window=3)
    for h, v in zip(rep.heights, rec.values):
        assert v.denominator == 1
        assert h == math.log(abs(v.numerator)) or (abs(v) == 1 and h == 0)
