import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somoslab import confinement
from somoslab.confinement import (
    ReductionFailure,
    detect_pattern,
    family_base,
    hv_base,
    pattern_string,
    probe,
    verify_substitution,
    viallet_base,
    viallet_tau_base,
)
from somoslab.engine import iterate_series
from somoslab.exact import FracLaurent, LaurentPoly
from somoslab.recdsl import catalog, parse_recurrence

VIALLET = [1, -1, -2, -1, 1]
HV = [1, -2, -2, 1]


def test_viallet_rational_zero():
    rep = detect_pattern(catalog("viallet"), viallet_base(2, gaussian=False))
    assert rep.excursion == VIALLET
    assert rep.post[0] == 0
    assert rep.pattern == "e,e^-1,e^-2,e^-1,e"
    # a rational zero is not reachable from regular data and the orbit does not recover
    assert not rep.confined


def test_viallet_pattern_from_regular_data():
    rep = detect_pattern(catalog("viallet"), viallet_base(2))
    assert rep.orders[:7] == [0, 0] + VIALLET
    assert rep.confined


def test_hv_pattern():
    rep = detect_pattern(catalog("hv"), hv_base(3), {"a": 1})
    assert rep.excursion == HV
    assert rep.post[0] == 0
    assert rep.confined


@pytest.mark.parametrize("kind,pattern", [("viallet", VIALLET), ("hv", HV)])
def test_three_base_points_agree(kind, pattern):
    reports = probe(kind, 3)
    assert len({tuple(r.base) for r in reports}) == 3
    for r in reports:
        assert r.excursion == pattern
        assert r.confined


def test_palindromic_excursion():
    for r in probe("viallet", 3):
        assert r.excursion == r.excursion[::-1]


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_family_confined(c):
    for r in probe(f"family({c})", 3, seed=7):
        assert r.singular == 4
        assert r.confined


def test_family2_orders():
    s = iterate_series(catalog("family(2)"), family_base(2), {"beta": 1}, 5)
    assert s[4].order == 1
    assert all(x.order >= 0 for x in s[5:8])
    assert s[8].order == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), st.tuples(st.integers(2, 9), st.integers(2, 9), st.integers(2, 9)),
       st.integers(1, 4))
def test_family_base_hits_eps(c, comp, beta):
    s = iterate_series(catalog(f"family({c})"), family_base(c, beta, comp), {"beta": beta}, 1)
    assert s[4].order == 1
    assert s[4].coeff(1) == 1 and s[4].coeff(2) == 0


def test_unconfined_control():
    spec = parse_recurrence("u[n+1]*u[n-1] = u[n]^2 + 1/u[n]")
    rep = detect_pattern(spec, [3, {1: 1}])
    assert not rep.confined
    assert min(rep.orders) < -10


def test_tau_form_unfolds_the_pole():
    rep = detect_pattern(catalog("viallet-tau"), viallet_tau_base())
    assert min(rep.orders) == 0
    assert rep.orders.count(1) == 1


def test_pattern_string():
    assert pattern_string([1, -2, 0]) == "e,e^-2,1"


def test_report_json():
    doc = json.loads(detect_pattern(catalog("hv"), hv_base(3), {"a": 1}).dumps())
    assert set(doc) == {"spec", "base", "orders", "excursion", "pattern", "confined"}


@pytest.mark.parametrize("kind", ["viallet_tau", "hv_tau", "s4_to_u"])
def test_substitutions(kind):
    assert verify_substitution(kind)


def test_bad_substitution_reports_remainder(monkeypatch):
    def wrong():
        t = FracLaurent(LaurentPoly.var("t0"))
        return t * t - t
    monkeypatch.setitem(confinement._SUBS, "broken", wrong)
    with pytest.raises(ReductionFailure) as info:
        verify_substitution("broken")
    assert "t0" in info.value.remainder


def test_unknown_substitution():
    with pytest.raises(ValueError):
        verify_substitution("nope")
