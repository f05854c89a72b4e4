"""Singularity confinement by epsilon-series orbits, and tau-function substitutions."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .engine import I, EpsSeries, GaussianRational, iterate_series
from .exact import FracLaurent, LaurentPoly
from .recdsl import RecurrenceSpec, catalog, evaluate

__all__ = [
    "PatternReport",
    "ReductionFailure",
    "detect_pattern",
    "pattern_string",
    "viallet_base",
    "viallet_tau_base",
    "hv_base",
    "family_base",
    "probe",
    "verify_substitution",
]

POST_WINDOW = 6


class ReductionFailure(AssertionError):
    def __init__(self, kind: str, remainder: str):
        super().__init__(f"{kind}: nonzero remainder {remainder}")
        self.kind = kind
        self.remainder = remainder


@dataclass
class PatternReport:
    spec: str
    base: List[str]
    orders: List[int]
    singular: Optional[int]
    excursion: List[int]
    post: List[int]
    confined: bool
    truncation: int = 12

    @property
    def pattern(self) -> str:
        return pattern_string(self.excursion)

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "base": self.base,
            "orders": self.orders,
            "excursion": self.excursion,
            "pattern": self.pattern,
            "confined": self.confined,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def pattern_string(orders: Sequence[int]) -> str:
    parts = []
    for o in orders:
        if o == 0:
            parts.append("1")
        elif o == 1:
            parts.append("e")
        else:
            parts.append(f"e^{o}")
    return ",".join(parts)


def _describe(x) -> str:
    if isinstance(x, EpsSeries):
        return x.to_text()
    if isinstance(x, Mapping):
        return EpsSeries.from_poly(x, max(1, max(x) - min(x) + 1)).to_text().rsplit(" + O(", 1)[0]
    if isinstance(x, GaussianRational):
        return str(x)
    return str(Fraction(x))


def _split(orders: Sequence[int], nonzero_trunc: Sequence[bool]):
    singular = next((i for i, o in enumerate(orders) if o != 0), None)
    if singular is None:
        return None, [], list(orders)
    end = singular
    while end < len(orders) and orders[end] != 0:
        end += 1
    return singular, list(orders[singular:end]), list(orders[end:])


def detect_pattern(spec: RecurrenceSpec, base: Sequence, params: Optional[Mapping] = None,
                   N: Optional[int] = None, trunc: int = 12) -> PatternReport:
    """Leading epsilon-orders along the orbit of a perturbed base point.

    The excursion is the run of nonzero orders starting at the first one;
    the singularity counts as confined when the ``POST_WINDOW`` iterates
    after it all have order >= 0.  Without ``N`` the orbit is extended until
    that window is available.
    """
    steps = N if N is not None else POST_WINDOW
    while True:
        series = iterate_series(spec, base, params, steps, trunc)
        orders = [s.order for s in series]
        singular, exc, post = _split(orders, [not s.is_zero() for s in series])
        if N is not None or singular is None or len(post) >= POST_WINDOW or steps >= 48:
            break
        # coefficients can grow doubly exponentially, so extend a little at a time
        steps += 2
    confined = singular is not None and len(post) >= POST_WINDOW and all(o >= 0 for o in post[:POST_WINDOW])
    if N is None:
        orders = orders[: (singular or 0) + len(exc) + POST_WINDOW]
        post = post[:POST_WINDOW]
    return PatternReport(spec.name, [_describe(b) for b in base], orders, singular, exc, post, confined, trunc)


def viallet_base(u0=2, gaussian: bool = True) -> list:
    """``(u0, i + eps)``, whose image is ``O(eps)``; ``gaussian=False`` gives ``(u0, eps)``.

    A zero of this map can only come from ``u^2 = -1``, so the singularity
    reached from regular data sits over Q(i).  Starting directly at a rational
    zero shows the same excursion but the orbit does not recover.
    """
    return [u0, {0: I, 1: 1}] if gaussian else [u0, {1: 1}]


def viallet_tau_base() -> list:
    """Tau seed whose u-values are ``(1, i + eps)``, so the next tau is ``O(eps)``."""
    return [1, 1, 1, 1, 1, {0: I, 1: 1}]


def hv_base(u0=3) -> list:
    return [u0, {1: 1}]


def family_base(c: int, beta=1, companions: Sequence = (2, 3, 5)) -> list:
    """Seed ``x0..x3`` with ``x3`` chosen so that ``x4`` equals ``eps`` exactly."""
    x0, x1, x2 = (Fraction(v) for v in companions)
    b = Fraction(beta)
    # x4 = (x3*x1 + b*x2^c)/x0 = eps  =>  x3 = (x0*eps - b*x2^c)/x1
    x3 = {0: -b * x2 ** c / x1, 1: x0 / x1}
    return [x0, x1, x2, x3]


def probe(kind: str, count: int = 3, seed: int = 0) -> List[PatternReport]:
    """``count`` independent base points for ``viallet``, ``hv`` or ``family(c)``."""
    rng = random.Random(seed)
    out = []
    firsts = [2, 3, 5, 7, 11, 13]
    for i in range(count):
        if kind == "viallet":
            out.append(detect_pattern(catalog("viallet"), viallet_base(firsts[i % 6])))
        elif kind == "hv":
            out.append(detect_pattern(catalog("hv"), hv_base(firsts[(i + 1) % 6]), {"a": 1}))
        elif kind.startswith("family"):
            spec = catalog(kind)
            comp = (2, 3, 5) if i == 0 else tuple(rng.randint(2, 9) for _ in range(3))
            out.append(detect_pattern(spec, family_base(spec.exponent_c, 1, comp), {"beta": 1}))
        else:
            raise ValueError(f"unknown probe kind {kind!r}")
    return out


# ---------------------------------------------------------------------------
# tau substitutions
# ---------------------------------------------------------------------------

def _symbols(n: int) -> List[FracLaurent]:
    return [FracLaurent(LaurentPoly.var(f"t{j}")) for j in range(n)]


def _extended(spec: RecurrenceSpec, extra: int, params: Mapping) -> List[FracLaurent]:
    """Symbols for the first ``order`` values, then ``extra`` values from the solved relation."""
    vals = _symbols(spec.order)
    for _ in range(extra):
        vals.append(FracLaurent.coerce(evaluate(spec.update, vals[-spec.order:], params)))
    return vals


def _viallet_tau():
    # state t0..t5 = tau_{n-3}..tau_{n+2}; the relation supplies tau_{n+3}
    t = _extended(catalog("viallet-tau"), 1, {})
    tau = lambda m: t[m + 3]
    u = lambda m: tau(m + 2) * tau(m - 2) / (tau(m + 1) * tau(m) ** 2 * tau(m - 1))
    return u(1) - (u(0) ** 2 + 1) / (u(-1) * u(0))


def _hv_tau():
    a = FracLaurent(LaurentPoly.var("a"))
    t = _extended(catalog("hv-tau"), 1, {"a": a})
    tau = lambda m: t[m + 2]
    u = lambda m: tau(m + 2) * tau(m - 1) / (tau(m + 1) * tau(m)) ** 2
    return u(1) + u(-1) - u(0) - a / u(0) ** 2


def _s4_to_u():
    al = FracLaurent(LaurentPoly.var("alpha"))
    be = FracLaurent(LaurentPoly.var("beta"))
    x = _extended(catalog("somos4"), 1, {"alpha": al, "beta": be})
    u = lambda m: x[m - 1] * x[m + 1] / x[m] ** 2
    return u(3) - (al * u(2) + be) / (u(1) * u(2) ** 2)


_SUBS: Dict[str, Callable[[], FracLaurent]] = {
    "viallet_tau": _viallet_tau,
    "hv_tau": _hv_tau,
    "s4_to_u": _s4_to_u,
}


def verify_substitution(kind: str) -> bool:
    """Substitute the tau form into the u-equation and reduce by the tau relation.

    The highest tau shift is eliminated with the relation solved for it, so
    the remainder is an honest Laurent fraction in the remaining taus; it
    must vanish identically.
    """
    try:
        build = _SUBS[kind]
    except KeyError:
        raise ValueError(f"unknown substitution {kind!r}; choose from {', '.join(sorted(_SUBS))}") from None
    rem = build()
    if not rem.is_zero():
        raise ReductionFailure(kind, rem.to_text())
    return True
