from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from somoslab.engine import iterate_exact
from somoslab.exact import eval_rational
from somoslab.geometry import quantity
from somoslab.linearize import (
    DegenerateMultiplier,
    InsufficientLength,
    ZeroCoordinate,
    chebyshev,
    invariant_values,
    linearize_report,
    pell_residual,
    reconstruct,
    verify_linear_relation,
)
from somoslab.recdsl import catalog

from oracles import (
    C0_ONES,
    CHEB_T2_5_2,
    CHEB_T3_9_2,
    CHEB_U2_5_2,
    CHEB_U3_9_2,
    DANA_SCOTT_ONES,
    DS_A,
    DS_B,
)

ONES = [1, 1, 1, 1]
rats = st.fractions(min_value=-6, max_value=6, max_denominator=6).filter(lambda q: q != 0)


# -- Chebyshev -----------------------------------------------------------------

def test_chebyshev_base_case():
    assert chebyshev(0, Fraction(7, 3)) == (1, 1)


def test_chebyshev_values():
    assert chebyshev(2, Fraction(5, 2)) == (CHEB_T2_5_2, CHEB_U2_5_2)
    assert chebyshev(3, Fraction(9, 2)) == (CHEB_T3_9_2, CHEB_U3_9_2)


@given(st.integers(1, 25), st.fractions(min_value=-10, max_value=10, max_denominator=9))
def test_pell_identity(n, q):
    assert pell_residual(n, q) == 0


@given(st.integers(1, 20), st.fractions(min_value=-10, max_value=10, max_denominator=9))
def test_three_term_recurrence(n, q):
    t_prev, u_prev = chebyshev(n - 1, q)
    t, u = chebyshev(n, q)
    t_next, u_next = chebyshev(n + 1, q)
    assert t_next == 2 * q * t - t_prev
    assert u_next == 2 * q * u - u_prev


# -- invariants ------------------------------------------------------------------

def test_J1_on_sample_window():
    assert invariant_values("c1", [1, 2, 3, 5], 1).J1 == 9


def test_c1_invariants_at_ones():
    d = invariant_values("c1", ONES, 1)
    assert d.components == (3, 4, 4)
    assert d.J == (9, 11, 48)
    assert d.A == DS_A
    assert d.B == DS_B


def test_c0_invariants_at_ones():
    d = invariant_values("c0", ONES, 1)
    assert d.components == (2, 2, 3)
    assert d.J == (5, 13, 12)


def test_zero_coordinate():
    with pytest.raises(ZeroCoordinate):
        invariant_values("c1", [1, 0, 1, 1], 1)


@settings(max_examples=30)
@given(st.lists(rats, min_size=4, max_size=4), rats)
def test_values_match_symbolic_quantities(window, beta):
    env = {f"x{i}": v for i, v in enumerate(window)}
    env["beta"] = beta
    d1 = invariant_values("c1", window, beta)
    assert d1.J1 == eval_rational(quantity("J1").expr, env)
    assert d1.J1 == eval_rational(quantity("J1sym").expr, env)
    assert list(d1.components) == [eval_rational(quantity(f"C{j}").expr, env) for j in range(3)]
    d0 = invariant_values("c0", window, beta)
    assert list(d0.components) == [eval_rational(quantity(f"Q{j}").expr, env) for j in range(3)]
    q0, q1, q2 = d0.components
    assert d0.J1 == q0 * q1 * q2 - q0 - q1 - q2
    assert d0.J1 == eval_rational(quantity("Jt1").expr, env)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=4, max_size=4), st.integers(1, 5))
def test_J1_constant_along_orbit(window, beta):
    rec = iterate_exact(catalog("dana-scott"), window, {"beta": beta}, 10)
    xs = rec.values
    first = invariant_values("c1", xs[:4], beta).J1
    for n in range(1, len(xs) - 3):
        assert invariant_values("c1", xs[n:n + 4], beta).J1 == first


# -- linear relations ------------------------------------------------------------

def test_ninth_order_relation():
    rec = iterate_exact(catalog("dana-scott"), ONES, {"beta": 1}, 20)
    assert rec.values[:10] == DANA_SCOTT_ONES
    assert rec.values[9] == 10 * (rec.values[6] - rec.values[3]) + rec.values[0] == 41
    assert verify_linear_relation(rec, "ninth")


def test_inhomogeneous_relation():
    rec = iterate_exact(catalog("dana-scott"), ONES, {"beta": 1}, 20)
    xs = rec.values
    assert xs[6] - 9 * xs[3] + xs[0] + 3 == 0
    check = verify_linear_relation(rec, "inhomogeneous")
    assert check and check.checked == 18


def test_sixth_order_relation():
    rec = iterate_exact(catalog("c0"), ONES, {"beta": 1}, 13)
    assert rec.values[:11] == C0_ONES
    check = verify_linear_relation(rec, "sixth")
    assert check and check.checked == 11


def test_relation_failure_is_reported():
    rec = iterate_exact(catalog("family(2)"), ONES, {"beta": 1}, 14)
    check = verify_linear_relation(rec, "ninth")
    assert not check and check.first_failure is not None


def test_short_orbit():
    rec = iterate_exact(catalog("dana-scott"), ONES, {"beta": 1}, 3)
    with pytest.raises(InsufficientLength):
        verify_linear_relation(rec, "ninth")


# -- reconstruction -----------------------------------------------------------------

def test_reconstruct_examples():
    assert reconstruct("c1", ONES, 1, 2, 0) == 5
    assert reconstruct("c1", ONES, 1, 3, 0) == 41
    assert reconstruct("c0", ONES, 1, 3, 0) == 19


def test_reconstruct_hand_formula():
    T2, U2 = chebyshev(2, Fraction(9, 2))
    assert T2 == Fraction(79, 2) and U2 == 80
    assert DS_A[0] * T2 + DS_B[0] * U2 + Fraction(3, 7) == 5


def test_degenerate_multiplier():
    assert invariant_values("c0", [1, 1, -1, 2], 1).J1 == 2
    with pytest.raises(DegenerateMultiplier):
        reconstruct("c0", [1, 1, -1, 2], 1, 3)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["c0", "c1"]), st.lists(rats, min_size=4, max_size=4), rats)
def test_reconstruction_matches_iteration(case, window, beta):
    try:
        data = invariant_values(case, window, beta)
    except ZeroCoordinate:
        assume(False)
    assume(data.A is not None)
    spec = catalog("dana-scott" if case == "c1" else "c0")
    rec = iterate_exact(spec, window, {"beta": beta}, 27)
    assume(rec.pole_index is None)
    for m, v in enumerate(rec.values):
        assert reconstruct(case, window, beta, m // 3, m % 3) == v


def test_report():
    rep = linearize_report("c1", ONES, 1, upto=30)
    assert rep["verified_up_to"] == 30
    assert rep["J1"] == "9"
    assert rep["C"] == ["3", "4", "4"]
