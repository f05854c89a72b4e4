"""Laurent certification, degree growth, entropy and height growth."""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from .engine import BudgetExceeded, OrbitRecord, SymbolicIterate, iterate_symbolic
from .recdsl import RecurrenceSpec

__all__ = [
    "LaurentReport",
    "DegreeSequence",
    "GrowthReport",
    "NotLaurentInput",
    "InsufficientData",
    "check_laurent",
    "beta_degrees",
    "tropical_degrees",
    "measured_beta_degrees",
    "entropy_estimate",
    "entropy_closed_form",
    "height",
    "height_growth",
    "degree_table_tsv",
]


class NotLaurentInput(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass
class LaurentReport:
    spec: str
    N: int
    flags: List[bool]
    first_failure: Optional[int] = None
    witness: Optional[str] = None
    terms: List[int] = field(default_factory=list)
    exhausted: Optional[str] = None

    @property
    def certified(self) -> bool:
        """All indices ``0..N`` were reached and every one is Laurent."""
        return self.exhausted is None and len(self.flags) == self.N + 1 and all(self.flags)

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "N": self.N,
            "flags": self.flags,
            "first_failure": self.first_failure,
            "witness": self.witness,
            "terms": self.terms,
            "exhausted": self.exhausted,
            "certified": self.certified,
        }


def check_laurent(spec: RecurrenceSpec, N: int, params=None, budget: Optional[float] = None) -> LaurentReport:
    exhausted = None
    try:
        its = iterate_symbolic(spec, N, params=params, budget=budget)
    except BudgetExceeded as exc:
        its = exc.partial
        exhausted = str(exc)
    flags = [it.laurent for it in its]
    rep = LaurentReport(spec.name, N, flags, terms=[len(it.value) if it.laurent else 0 for it in its],
                        exhausted=exhausted)
    for it in its:
        if not it.laurent:
            rep.first_failure = it.index
            rep.witness = it.divisor.to_text() if it.divisor is not None else None
            break
    return rep


@dataclass
class DegreeSequence:
    values: List[int]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        if isinstance(other, DegreeSequence):
            return self.values == other.values
        return self.values == list(other)


def beta_degrees(iterates: Sequence[SymbolicIterate], param: str = "beta") -> DegreeSequence:
    out = []
    for it in iterates:
        if not it.laurent:
            raise NotLaurentInput(f"iterate {it.index} is not Laurent")
        out.append(it.value.degree(param) if it.value else 0)
    return DegreeSequence(out)


def measured_beta_degrees(spec: RecurrenceSpec, N: int, init: Optional[Sequence] = None,
                          param: str = "beta", budget: Optional[float] = None) -> DegreeSequence:
    """Degrees in ``param`` of iterates ``0..N``, optionally at specialised initial data."""
    return beta_degrees(iterate_symbolic(spec, N, init=init, budget=budget), param)


def tropical_degrees(c: int, N: int) -> DegreeSequence:
    """First ``N`` terms of ``d[n+2] = max(c*d[n] + 1, d[n+1] + d[n-1]) - d[n-2]`` from 0,0,0,0."""
    if N < 4:
        raise ValueError("N must be at least 4")
    d = [0, 0, 0, 0]
    while len(d) < N:
        n = len(d) - 2
        d.append(max(c * d[n] + 1, d[n + 1] + d[n - 1]) - d[n - 2])
    return DegreeSequence(d)


def _slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    mx = statistics.fmean(xs)
    my = statistics.fmean(ys)
    den = sum((x - mx) ** 2 for x in xs)
    if den == 0:
        raise InsufficientData("degenerate abscissae")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / den


def entropy_estimate(d: Union[DegreeSequence, Sequence[int]]) -> float:
    """Least-squares slope of ``log d_n`` against ``n`` over the top half."""
    vals = list(d)
    if len(vals) < 20:
        raise InsufficientData(f"need at least 20 degrees, got {len(vals)}")
    pts = [(n, math.log(v)) for n, v in enumerate(vals) if n >= len(vals) // 2 and v > 0]
    if len(pts) < 2:
        raise InsufficientData("too few positive degrees in the upper half")
    return _slope([p[0] for p in pts], [p[1] for p in pts])


def entropy_closed_form(c: int) -> float:
    if c <= 2:
        return 0.0
    return 0.5 * math.log((c + math.sqrt(c * c - 4)) / 2)


def height(q) -> float:
    """Logarithmic height ``log max(|p|, |q|)`` of a rational in lowest terms."""
    q = q if isinstance(q, Fraction) else Fraction(q)
    return math.log(max(abs(q.numerator), q.denominator))


@dataclass
class GrowthReport:
    heights: List[float]
    classification: str
    rate: float
    spread: float
    degree: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "rate": self.rate,
            "spread": self.spread,
            "degree": self.degree,
            "heights": [{"n": n, "h": h} for n, h in enumerate(self.heights)],
        }


def height_growth(orbit: Union[OrbitRecord, Sequence], window: int = 5,
                  max_spread: float = 0.15, min_ratio: float = 1.2) -> GrowthReport:
    """Classify height growth as exponential (with rate) or polynomial (with degree)."""
    values = orbit.ok_values() if isinstance(orbit, OrbitRecord) else list(orbit)
    hs = [height(v) for v in values]
    ratios = [hs[n + 1] / hs[n] for n in range(len(hs) - 1) if hs[n] > 0]
    if len(ratios) < window:
        raise InsufficientData(f"need {window} height ratios, got {len(ratios)}")
    last = ratios[-window:]
    rate = statistics.median(last)
    spread = (max(last) - min(last)) / rate
    if spread < max_spread and rate > min_ratio:
        return GrowthReport(hs, "exponential", rate, spread)
    top = [(math.log(n), math.log(h)) for n, h in enumerate(hs) if n >= max(1, len(hs) // 2) and h > 0]
    degree = _slope([p[0] for p in top], [p[1] for p in top]) if len(top) >= 2 else float("nan")
    return GrowthReport(hs, "polynomial", rate, spread, degree)


def degree_table_tsv(measured: Sequence[int], tropical: Sequence[int]) -> str:
    lines = ["n\tmeasured\ttropical"]
    for n in range(max(len(measured), len(tropical))):
        m = measured[n] if n < len(measured) else ""
        t = tropical[n] if n < len(tropical) else ""
        lines.append(f"{n}\t{m}\t{t}")
    return "\n".join(lines) + "\n"


def growth_json(rep: GrowthReport) -> str:
    return json.dumps(rep.to_json(), sort_keys=True, indent=2)
