"""One-command reproduction: the ten acceptance criteria with their tolerances and time limits."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import analysis, confinement, diophantine, geometry, linearize
from .engine import iterate_exact
from .recdsl import catalog

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "summary_table"]

SOMOS4_TERMS = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313]
# first non-Laurent index of generic Somos-8, frozen after the first symbolic run
SOMOS8_FIRST_FAILURE = 16


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    elapsed: float
    limit: float
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.ok and self.elapsed < self.limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bad = [k for k, v in self.checks.items() if not v]
        extra = f" failing: {', '.join(bad)}" if bad else ""
        if self.ok and not self.passed:
            extra = f" over time limit {self.limit:g}s"
        return f"{status} criterion {self.number:>2}: {self.title} ({self.elapsed:.2f}s){extra}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
            "limit": self.limit,
            "checks": self.checks,
            "notes": self.notes,
        }


def _c1(out: CriterionResult) -> None:
    orb = iterate_exact(catalog("somos4"), [1, 1, 1, 1], {"alpha": 1, "beta": 1}, 9)
    out.checks["somos4 terms through 83313"] = orb.values == SOMOS4_TERMS


def _c2(out: CriterionResult) -> None:
    for k in (5, 6, 7):
        spec = catalog(f"somos{k}")
        orb = iterate_exact(spec, [1] * k, None, 51 - k)
        out.checks[f"somos{k} integral to n=50"] = (
            orb.pole_index is None and len(orb.values) == 51 and all(v.denominator == 1 for v in orb.values)
        )
    rep = analysis.check_laurent(catalog("somos8"), 25)
    out.checks["somos8 not Laurent at index <= 25"] = rep.first_failure is not None and rep.first_failure <= 25
    out.checks[f"somos8 first failure is {SOMOS8_FIRST_FAILURE}"] = rep.first_failure == SOMOS8_FIRST_FAILURE
    orb = iterate_exact(catalog("somos8"), [1] * 8, None, 30)
    out.checks["somos8 rational orbit has a non-integer"] = any(v.denominator != 1 for v in orb.ok_values())


def _c3(out: CriterionResult) -> None:
    # the budget keeps the whole criterion inside its limit; running out counts as not certified
    for c in range(6):
        rep = analysis.check_laurent(catalog(f"family({c})"), 14, budget=40)
        out.checks[f"family({c}) Laurent to n=14"] = rep.certified
        if rep.exhausted:
            out.notes.append(rep.exhausted)
    rep = analysis.check_laurent(catalog("somos4"), 20, budget=120)
    out.checks["somos4 (alpha, beta symbolic) Laurent to n=20"] = rep.certified


# specialised initial data used where generic symbolic iteration is out of reach
DEGREE_INITS = {3: [[1, 1, 1, 1], [1, -1, 1, 1]], 4: [[1, 1, 1, 1], [1, -1, 1, 1]]}


def _c4(out: CriterionResult) -> None:
    for c in (1, 2, 3, 4):
        trop = analysis.tropical_degrees(c, 17)
        inits = DEGREE_INITS.get(c, [None])
        ok = True
        for init in inits:
            meas = analysis.measured_beta_degrees(catalog(f"family({c})"), 16, init=init, budget=120)
            ok = ok and meas == trop
        out.checks[f"family({c}) beta-degrees equal tropical, n<=16"] = ok
    est = analysis.entropy_estimate(analysis.tropical_degrees(3, 60))
    target = 0.5 * math.log((3 + math.sqrt(5)) / 2)
    out.checks["entropy estimate c=3 within 2%"] = abs(est - target) / target <= 0.02
    out.notes.append(f"entropy estimate {est:.5f} vs {target:.5f}")
    out.checks["closed form 0 for c<=2"] = all(analysis.entropy_closed_form(c) == 0 for c in (0, 1, 2))


def _structure_checks() -> Dict[str, Callable[[], bool]]:
    g = geometry
    q = g.quantity

    def conserved(name):
        K = q(name)
        return lambda: bool(g.verify_conserved(catalog(K.spec), K))

    def poisson(c):
        return lambda: bool(g.verify_poisson_map(catalog(f"family({c})"), g.PoissonStructure.family(c)))

    def involutions():
        P1, P0 = g.PoissonStructure.family(1), g.PoissonStructure.family(0)
        zero = all(g.verify_involution(P1, q(a), q(b)) for a, b in (("J1", "J2"), ("J1", "J3")))
        zero = zero and all(g.verify_involution(P0, q(a), q(b)) for a, b in (("Jt1", "Jt2"), ("Jt1", "Jt3")))
        witness = not g.verify_involution(P1, q("J2"), q("J3"))
        return zero and witness

    checks = {f"conserved {n}": conserved(n) for n in ("J", "J1", "J2", "J3", "Jt1", "Jt2", "Jt3")}
    checks.update({f"poisson map family({c})": poisson(c) for c in (0, 1, 3, 4)})
    checks["casimirs u1, u2 of S4 bracket"] = lambda: all(
        g.verify_casimir(g.PoissonStructure.s4(), q(n)) for n in ("u1", "u2"))
    checks["involutions with nonzero {J2,J3}"] = involutions
    checks["gauge algebra"] = lambda: bool(g.verify_reduction("gauge_algebra"))
    checks["hamiltonian field"] = lambda: bool(g.verify_reduction("ham_field"))
    checks["lax compatibility and spectral curve"] = lambda: bool(g.verify_lax())
    checks["two-form pullback"] = lambda: bool(g.verify_reduction("two_form_pullback"))
    checks["hirota embedding"] = lambda: bool(g.verify_reduction("hirota_embed"))
    checks["bracket determinant (c-2)^2(c+1)^2"] = lambda: all(
        g.PoissonStructure.family(c).determinant() == (c - 2) ** 2 * (c + 1) ** 2 for c in range(7))
    return checks


def _c5(out: CriterionResult) -> None:
    for name, fn in _structure_checks().items():
        t = time.perf_counter()
        ok = fn()
        dt = time.perf_counter() - t
        out.checks[name] = ok and dt < 10
        if dt >= 10:
            out.notes.append(f"{name} took {dt:.1f}s")


def _random_seed(rng: random.Random) -> List[Fraction]:
    return [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4)) for _ in range(4)]


def chebyshev_seeds(case: str, beta, count: int, seed: int, upto: int = 30):
    """Random rational seeds whose orbit stays finite and nonzero through ``upto``, with J1 nondegenerate."""
    rng = random.Random(seed)
    spec = catalog("dana-scott" if case == "c1" else "c0")
    found = []
    while len(found) < count:
        s = _random_seed(rng)
        try:
            data = linearize.invariant_values(case, s, beta)
        except linearize.ZeroCoordinate:
            continue
        if data.A is None:
            continue
        orb = iterate_exact(spec, s, {"beta": beta}, upto - 3)
        if orb.pole_index is not None or any(v == 0 for v in orb.values):
            continue
        found.append((s, orb))
    return found


def _c6(out: CriterionResult) -> None:
    ds = iterate_exact(catalog("dana-scott"), [1, 1, 1, 1], {"beta": 1}, 36)
    nin = linearize.verify_linear_relation(ds, "ninth", 1)
    inh = linearize.verify_linear_relation(ds, "inhomogeneous", 1)
    out.checks["Dana Scott J1 = 9"] = nin.data.J1 == 9
    out.checks["ninth-order relation n<=30"] = nin.ok and nin.checked >= 31
    out.checks["inhomogeneous relation n<=30"] = inh.ok and inh.checked >= 31
    c0 = iterate_exact(catalog("c0"), [1, 1, 1, 1], {"beta": 1}, 33)
    six = linearize.verify_linear_relation(c0, "sixth", 1)
    out.checks["c0 J1 = 5"] = six.data.J1 == 5
    out.checks["sixth-order relation n<=30"] = six.ok and six.checked >= 31
    for case, beta in (("c1", Fraction(3, 2)), ("c0", Fraction(2, 3))):
        ok = True
        for s, orb in chebyshev_seeds(case, beta, 20, seed=11):
            for m, v in enumerate(orb.values[:31]):
                if linearize.reconstruct(case, s, beta, m // 3, m % 3) != v:
                    ok = False
                    break
        out.checks[f"chebyshev reconstruction {case}, 20 seeds"] = ok


def _c7(out: CriterionResult) -> None:
    for c in (1, 0):
        for beta in (1, 2, 3):
            try:
                batch = diophantine.harvest(c, beta, 50)
                ok = len(batch.solutions) == 50
            except (AssertionError, ArithmeticError, ValueError, RuntimeError):
                ok = False
            out.checks[f"harvest c={c} beta={beta}"] = ok
    orb = iterate_exact(catalog("somos4"), [1, 1, 1, 1], {"alpha": 1, "beta": 1}, 20)
    out.checks["somos4 windows satisfy the quartic with J=4"] = all(
        diophantine.quartic_residual_s4(orb.values[n:n + 4], 1, 1, 4) == 0 for n in range(21))


def _c8(out: CriterionResult) -> None:
    vt = analysis.height_growth(iterate_exact(catalog("viallet-tau"), [1] * 6, None, 13))
    out.checks["viallet-tau exponential, rate in [1.95, 2.25]"] = (
        vt.classification == "exponential" and 1.95 <= vt.rate <= 2.25)
    hv = analysis.height_growth(iterate_exact(catalog("hv"), [Fraction(1, 2), Fraction(2, 3)],
                                              {"a": Fraction(1, 3)}, 13))
    golden = (3 + math.sqrt(5)) / 2
    out.checks["hv rate within 10% of golden ratio squared"] = abs(hv.rate - golden) / golden <= 0.10
    s4 = analysis.height_growth(iterate_exact(
        catalog("somos4"), [Fraction(1, 2), Fraction(2, 3), Fraction(3, 5), Fraction(5, 7)],
        {"alpha": 1, "beta": 1}, 27))
    out.checks["somos4 polynomial, degree 2 +- 0.5"] = (
        s4.classification == "polynomial" and abs(s4.degree - 2) <= 0.5)
    out.notes.append(f"rates: viallet-tau {vt.rate:.4f}, hv {hv.rate:.4f}; somos4 degree {s4.degree:.3f}")


def _c9(out: CriterionResult) -> None:
    vi = confinement.probe("viallet")
    out.checks["viallet pattern (1,-1,-2,-1,1) at 3 base points"] = all(
        r.excursion == [1, -1, -2, -1, 1] for r in vi)
    hv = confinement.probe("hv")
    out.checks["hv pattern (1,-2,-2,1) at 3 base points"] = all(r.excursion == [1, -2, -2, 1] for r in hv)
    for c in (1, 2, 3, 4):
        out.checks[f"family({c}) confined"] = all(r.confined for r in confinement.probe(f"family({c})"))
    for kind in ("viallet_tau", "hv_tau", "s4_to_u"):
        try:
            ok = confinement.verify_substitution(kind)
        except confinement.ReductionFailure:
            ok = False
        out.checks[f"substitution {kind}"] = ok


def eds_seeds(count: int, seed: int, N: int = 40):
    """Random admissible ``(x2, x3, x4)`` whose orbit is integral and zero-free through ``N``."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        x2 = rng.choice([-1, 1]) * rng.randint(1, 4)
        x3 = rng.choice([-1, 1]) * rng.randint(1, 9)
        x4 = x2 * rng.choice([-1, 1]) * rng.randint(1, 5)
        orb = diophantine.eds_generate(x2, x3, x4, N)
        if orb.pole_index is not None or any(v == 0 for v in orb.values):
            continue
        found.append(((x2, x3, x4), orb))
    return found


def _c10(out: CriterionResult) -> None:
    ok = True
    for _, orb in eds_seeds(10, seed=5):
        rep = diophantine.divisibility_check(orb)
        ok = ok and rep.ok and rep.upto == 40
    out.checks["EDS divisibility to n=40, 10 seeds"] = ok
    out.checks["fibonacci identity n=4..12"] = all(diophantine.fibonacci_identity(n) for n in range(4, 13))


CRITERIA: Dict[int, tuple] = {
    1: ("Somos-4 reproduction", 0.1, _c1),
    2: ("Somos-k integrality and Somos-8 failure", 30, _c2),
    3: ("Laurent certification", 300, _c3),
    4: ("Degree agreement and entropy", 300, _c4),
    5: ("Structure checks", 300, _c5),
    6: ("Linearization", 60, _c6),
    7: ("Diophantine", 60, _c7),
    8: ("Heights", 120, _c8),
    9: ("Confinement", 60, _c9),
    10: ("EDS and Fibonacci", 10, _c10),
}


def run_criterion(number: int) -> CriterionResult:
    title, limit, fn = CRITERIA[number]
    out = CriterionResult(number, title, False, 0.0, limit)
    t = time.perf_counter()
    fn(out)
    out.elapsed = time.perf_counter() - t
    out.ok = bool(out.checks) and all(out.checks.values())
    return out


def run_all(numbers: Optional[List[int]] = None) -> List[CriterionResult]:
    return [run_criterion(n) for n in (numbers or sorted(CRITERIA))]


def summary_table(results: List[CriterionResult]) -> str:
    return "\n".join(r.line() for r in results) + "\n"
