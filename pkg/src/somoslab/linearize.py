"""Chebyshev linearization of the superintegrable cases c=1 and c=0."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .engine import OrbitRecord, iterate_exact
from .recdsl import catalog

__all__ = [
    "LinearizationData",
    "LinearCheck",
    "ZeroCoordinate",
    "DegenerateMultiplier",
    "InsufficientLength",
    "chebyshev",
    "pell_residual",
    "invariant_values",
    "verify_linear_relation",
    "reconstruct",
]

CASES = ("c1", "c0")


class ZeroCoordinate(ValueError):
    pass


class DegenerateMultiplier(ArithmeticError):
    pass


class InsufficientLength(ValueError):
    pass


def chebyshev(n: int, q) -> Tuple[Fraction, Fraction]:
    """``(T_n(q), U_n(q))`` with ``T_0 = 1, T_1 = q`` and ``U_0 = 1, U_1 = 2q``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    q = Fraction(q)
    t0, t1 = Fraction(1), q
    u0, u1 = Fraction(1), 2 * q
    for _ in range(n):
        t0, t1 = t1, 2 * q * t1 - t0
        u0, u1 = u1, 2 * q * u1 - u0
    return t0, u0


def pell_residual(n: int, q) -> Fraction:
    """``T_n^2 - (q^2 - 1) * U_{n-1}^2 - 1``, zero for every ``n >= 1``."""
    q = Fraction(q)
    t, _ = chebyshev(n, q)
    _, u = chebyshev(n - 1, q)
    return t * t - (q * q - 1) * u * u - 1


def _case(case) -> str:
    c = str(case).lower()
    if c in ("1", "c1", "dana-scott"):
        return "c1"
    if c in ("0", "c0"):
        return "c0"
    raise ValueError(f"unknown case {case!r}; expected c1 or c0")


@dataclass
class LinearizationData:
    case: str
    beta: Fraction
    window: Tuple[Fraction, ...]
    J: Tuple[Fraction, Fraction, Fraction]
    components: Tuple[Fraction, Fraction, Fraction]
    A: Optional[Tuple[Fraction, ...]] = None
    B: Optional[Tuple[Fraction, ...]] = None

    @property
    def J1(self) -> Fraction:
        return self.J[0]

    def to_json(self, verified_up_to: Optional[int] = None) -> dict:
        s = lambda q: None if q is None else str(q)
        comp = "C" if self.case == "c1" else "Q"
        out = {
            "case": self.case,
            "beta": s(self.beta),
            "J1": s(self.J[0]),
            "J": [s(v) for v in self.J],
            comp: [s(v) for v in self.components],
            "A": None if self.A is None else [s(v) for v in self.A],
            "B": None if self.B is None else [s(v) for v in self.B],
        }
        if verified_up_to is not None:
            out["verified_up_to"] = verified_up_to
        return out


def invariant_values(case, window: Sequence, beta) -> LinearizationData:
    case = _case(case)
    p, q, r, s = (Fraction(v) for v in window)
    b = Fraction(beta)
    if 0 in (p, q, r, s):
        raise ZeroCoordinate("window entries must be nonzero")
    if case == "c1":
        j1 = ((p * p + s * s) * q * r + b * (p + s) * (q * q + r * r + p * s) + b * b * q * r) / (p * q * r * s)
        c0 = (p * s + q * q + r * r) / (q * r)
        c1 = (p * s * s + q * q * s + p * r * r + b * q * r) / (p * r * s)
        c2 = (p * p * s + q * q * s + p * r * r + b * q * r) / (p * q * s)
        comps = (c0, c1, c2)
        J = (j1, c0 + c1 + c2, c0 * c1 * c2)
    else:
        q0 = (p + r) / q
        q1 = (q + s) / r
        q2 = q / p + r / s + b / (p * s)
        comps = (q0, q1, q2)
        J = (q0 * q1 * q2 - q0 - q1 - q2, q0 * q1 + q1 * q2 + q2 * q0 - 3, q0 * q1 * q2)
    data = LinearizationData(case, b, (p, q, r, s), J, comps)
    if J[0] not in (0, 2, -2):
        data.A, data.B = _coefficients(data)
    return data


def _spec(case: str):
    return catalog("dana-scott" if case == "c1" else "c0")


def _first_six(data: LinearizationData) -> List[Fraction]:
    orb = iterate_exact(_spec(data.case), data.window, {"beta": data.beta}, 2)
    if orb.pole_index is not None:
        raise ZeroCoordinate("orbit meets a zero within the first six terms")
    return orb.values


def _coefficients(data: LinearizationData):
    x = _first_six(data)
    J1, b = data.J[0], data.beta
    A, B = [], []
    for j in range(3):
        if data.case == "c1":
            C = data.components[j]
            A.append(2 * x[j] - 2 * x[j + 3] / J1 - 2 * b * C * (J1 - 1) / (J1 * (J1 - 2)))
            B.append(-x[j] + (2 * x[j + 3] + b * C) / J1)
        else:
            A.append(2 * x[j] - 2 * x[j + 3] / J1)
            B.append(-x[j] + 2 * x[j + 3] / J1)
    return tuple(A), tuple(B)


def reconstruct(case, init: Sequence, beta, n: int, j: int = 0) -> Fraction:
    """Closed-form ``x_{3n+j}`` from the Chebyshev solution."""
    if not 0 <= j <= 2:
        raise ValueError("j must be 0, 1 or 2")
    data = invariant_values(case, init, beta)
    J1 = data.J[0]
    if J1 in (0, 2, -2):
        raise DegenerateMultiplier(f"multiplier J1 = {J1} is degenerate")
    T, U = chebyshev(n, J1 / 2)
    val = data.A[j] * T + data.B[j] * U
    if data.case == "c1":
        val += data.beta * data.components[j] / (J1 - 2)
    return val


@dataclass
class LinearCheck:
    relation: str
    ok: bool
    checked: int
    first_failure: Optional[int] = None
    data: Optional[LinearizationData] = None

    def __bool__(self):
        return self.ok


_SPAN = {"ninth": 9, "inhomogeneous": 6, "sixth": 6}


def verify_linear_relation(orbit: OrbitRecord, relation: str, beta=None) -> LinearCheck:
    """Check a linear relation at every admissible index of an exact orbit.

    ``ninth`` and ``inhomogeneous`` belong to case c1, ``sixth`` to case c0.
    """
    if relation not in _SPAN:
        raise ValueError(f"unknown relation {relation!r}")
    xs = orbit.ok_values()
    span = _SPAN[relation]
    if len(xs) <= span:
        raise InsufficientLength(f"{relation} needs more than {span} values, got {len(xs)}")
    b = Fraction(beta if beta is not None else orbit.params.get("beta"))
    data = invariant_values("c0" if relation == "sixth" else "c1", xs[:4], b)
    J1 = data.J[0]
    checked = 0
    for n in range(len(xs) - span):
        if relation == "ninth":
            res = xs[n + 9] - (J1 + 1) * (xs[n + 6] - xs[n + 3]) - xs[n]
        elif relation == "inhomogeneous":
            res = xs[n + 6] - J1 * xs[n + 3] + xs[n] + b * data.components[n % 3]
        else:
            res = xs[n + 6] - J1 * xs[n + 3] + xs[n]
        if res != 0:
            return LinearCheck(relation, False, checked, n, data)
        checked += 1
    return LinearCheck(relation, True, checked, None, data)


def linearize_report(case, init: Sequence, beta, upto: int = 30) -> dict:
    """Invariant data plus the largest index up to which the closed form matched iteration."""
    data = invariant_values(case, init, beta)
    verified = None
    if data.A is not None:
        orb = iterate_exact(_spec(data.case), data.window, {"beta": data.beta}, upto - 3)
        verified = -1
        for m, v in enumerate(orb.ok_values()):
            if reconstruct(data.case, init, beta, m // 3, m % 3) != v:
                break
            verified = m
    return data.to_json(verified)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
