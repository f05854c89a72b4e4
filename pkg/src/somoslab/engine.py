"""Orbit generation over exact rationals, Laurent polynomials and epsilon-series."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .exact import DoesNotDivide, FracLaurent, LaurentPoly, exact_div
from .recdsl import RecurrenceSpec, compile_update, evaluate

__all__ = [
    "OrbitRecord",
    "SymbolicIterate",
    "EpsSeries",
    "GaussianRational",
    "I",
    "UnsupportedShape",
    "IndeterminateLeadingOrder",
    "BudgetExceeded",
    "make_step",
    "iterate_exact",
    "iterate_symbolic",
    "update_shape",
    "iterate_series",
    "plot_points",
]


class UnsupportedShape(ValueError):
    """The update is not a Laurent polynomial over a monomial in prior iterates."""


class BudgetExceeded(RuntimeError):
    """Symbolic iteration stopped before ``N``; ``partial`` holds the iterates done."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class IndeterminateLeadingOrder(ArithmeticError):
    """Every retained coefficient of a divisor vanished; raise the truncation."""


class GaussianRational:
    """``re + im*i`` with rational parts; just enough field arithmetic for series coefficients."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x) -> Optional["GaussianRational"]:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else (self.re, self.im) == (o.re, o.im)

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}*i"
        if self.re == 0:
            return im
        return f"({self.re}{'' if im.startswith('-') else '+'}{im})"

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)
_SCALARS = (int, Fraction, GaussianRational)


def _rat(x):
    return x if isinstance(x, (Fraction, GaussianRational)) else Fraction(x)


def _fmt(q) -> Optional[str]:
    if q is None:
        return None
    if isinstance(q, GaussianRational):
        return str(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# exact orbits
# ---------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    spec_name: str
    params: Dict[str, Fraction]
    init: List[Fraction]
    values: List[Optional[Fraction]] = field(default_factory=list)
    status: List[str] = field(default_factory=list)

    @property
    def pole_index(self) -> Optional[int]:
        try:
            return self.status.index("pole")
        except ValueError:
            return None

    def ok_values(self) -> List[Fraction]:
        return [v for v, s in zip(self.values, self.status) if s == "ok"]

    def verify(self, spec: RecurrenceSpec) -> bool:
        """Re-check every computed value against the cleared-denominator update."""
        k = spec.order
        num_ast, den_ast = _split_update(spec.update)
        for n in range(k, len(self.values)):
            if self.status[n] != "ok":
                break
            window = self.values[n - k:n]
            num = _rat(evaluate(num_ast, window, self.params))
            den = _rat(evaluate(den_ast, window, self.params))
            if self.values[n] * den != num:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "spec": self.spec_name,
            "params": {k: _fmt(v) for k, v in self.params.items()},
            "init": [_fmt(v) for v in self.init],
            "values": [_fmt(v) for v in self.values],
            "status": list(self.status),
            "pole_index": self.pole_index,
        }

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"n": n, "value": _fmt(v), "status": s}, sort_keys=True)
            for n, (v, s) in enumerate(zip(self.values, self.status))
        ]
        return "\n".join(lines) + "\n"


def _split_update(node):
    from .recdsl import Div, Int

    if isinstance(node, Div):
        return node.left, node.right
    return node, Int(1)


def make_step(spec: RecurrenceSpec, params: Mapping[str, object]):
    """Pure exact step: ``window (len k) -> next value``; raises ZeroDivisionError at a pole."""
    f = compile_update(spec.update)
    p = {k: _rat(v) for k, v in spec.bind(params).items()}

    def step(window: Sequence[Fraction]) -> Fraction:
        return f(window, p)

    return step


def iterate_exact(spec: RecurrenceSpec, init: Sequence, params: Optional[Mapping] = None,
                  N: int = 10) -> OrbitRecord:
    """Values ``0..k+N-1``: the seed followed by ``N`` computed iterates."""
    if N < 0:
        raise ValueError("N must be non-negative")
    k = spec.order
    if len(init) != k:
        raise ValueError(f"{spec.name} needs {k} initial values, got {len(init)}")
    bound = {name: _rat(v) for name, v in spec.bind(params).items()}
    step = make_step(spec, bound)
    values: List[Optional[Fraction]] = [_rat(v) for v in init]
    status = ["ok"] * k
    for _ in range(N):
        try:
            values.append(step(values[-k:]))
            status.append("ok")
        except ZeroDivisionError:
            values.append(None)
            status.append("pole")
            break
    return OrbitRecord(spec.name, bound, [_rat(v) for v in init], values, status)


def plot_points(spec: RecurrenceSpec, seed: Sequence[float], params: Optional[Mapping] = None,
                N: int = 500) -> List[tuple]:
    """Consecutive pairs ``(u_n, u_{n+1})`` in floating point, for phase portraits."""
    if spec.order != 2:
        raise ValueError("phase-portrait pairs need a second-order map")
    f = compile_update(spec.update)
    p = {k: float(v) for k, v in spec.bind(params).items()}
    # compile_update wraps literals in Fraction; floats absorb them
    u0, u1 = float(seed[0]), float(seed[1])
    out = [(u0, u1)]
    for _ in range(N):
        try:
            u2 = float(f((u0, u1), p))
        except ZeroDivisionError:
            break
        if not math.isfinite(u2):
            break
        u0, u1 = u1, u2
        out.append((u0, u1))
    return out


# ---------------------------------------------------------------------------
# symbolic iteration
# ---------------------------------------------------------------------------

@dataclass
class SymbolicIterate:
    index: int
    value: Optional[LaurentPoly]
    divisor: Optional[LaurentPoly] = None

    @property
    def laurent(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class UpdateShape:
    """``update = poly(state) / (const * prod state_j**powers[j])``."""

    poly: LaurentPoly
    const: int
    powers: tuple
    names: tuple


def update_shape(spec: RecurrenceSpec, params: Optional[Mapping] = None) -> UpdateShape:
    names = tuple(spec.state_names())
    clash = set(names) & set(spec.params)
    if clash:
        raise UnsupportedShape(f"parameter names clash with state variables: {sorted(clash)}")
    state = [FracLaurent(LaurentPoly.var(n)) for n in names]
    env: Dict[str, object] = {p: FracLaurent(LaurentPoly.var(p)) for p in spec.params}
    for name, v in (params or {}).items():
        env[name] = FracLaurent.coerce(v) if not isinstance(v, LaurentPoly) else FracLaurent(v)
    val = FracLaurent.coerce(evaluate(spec.update, state, env))
    if not val.den.is_constant():
        raise UnsupportedShape(f"{spec.name}: denominator {val.den} is not a monomial")
    const = val.den.constant_value()
    poly = val.num
    powers = tuple(max(0, -poly.min_degree(n)) for n in names)
    poly = poly.shifted({n: e for n, e in zip(names, powers) if e})
    if const < 0:
        poly, const = -poly, -const
    return UpdateShape(poly, const, powers, names)


def _predict(times: Sequence[float]) -> float:
    """Next step time, extrapolated from the last two with the growth ratio squared."""
    if not times:
        return 0.0
    last = max(times[-1], 1e-3)
    prev = max(times[-2], 1e-3) if len(times) > 1 else last
    ratio = max(last / prev, 1.0)
    return last * ratio * ratio


def iterate_symbolic(spec: RecurrenceSpec, N: int, init: Optional[Sequence] = None,
                     params: Optional[Mapping] = None,
                     budget: Optional[float] = None) -> List[SymbolicIterate]:
    """Iterates ``0..N`` as Laurent polynomials, stopping at the first non-Laurent one.

    ``init`` defaults to fresh symbols ``x0..x{k-1}`` (named after the sequence
    variable); unbound parameters stay symbolic.  Numeric entries in ``init``
    specialise the initial data, which keeps the division test exact but
    makes it a statement about that specialisation only.

    With ``budget`` (seconds) the run stops with :class:`BudgetExceeded` once
    the next step is predicted to overrun, extrapolating the step times so far.
    """
    shape = update_shape(spec, params)
    k = spec.order
    if init is None:
        vals = [LaurentPoly.var(n) for n in shape.names]
    else:
        if len(init) != k:
            raise ValueError(f"{spec.name} needs {k} initial values")
        vals = [LaurentPoly.coerce(v) for v in init]
    out = [SymbolicIterate(i, v) for i, v in enumerate(vals[: N + 1])]
    start = time.perf_counter()
    times: List[float] = []
    for n in range(k, N + 1):
        window = vals[n - k:n]
        t0 = time.perf_counter()
        if budget is not None:
            guess = _predict(times)
            if t0 - start + guess > budget:
                raise BudgetExceeded(
                    f"{spec.name}: x{n} predicted to take ~{guess:.3g}s, over the {budget:g}s budget", out)
        num = shape.poly.substitute(dict(zip(shape.names, window)))
        try:
            if shape.const != 1:
                num = exact_div(num, LaurentPoly(shape.const))
            for w, e in sorted(zip(window, shape.powers), key=lambda t: len(t[0])):
                for _ in range(e):
                    num = exact_div(num, w)
        except DoesNotDivide as exc:
            out.append(SymbolicIterate(n, None, exc.divisor))
            break
        vals.append(num)
        out.append(SymbolicIterate(n, num))
        times.append(time.perf_counter() - t0)
    return out


# ---------------------------------------------------------------------------
# epsilon series
# ---------------------------------------------------------------------------

class EpsSeries:
    """Truncated Laurent series ``sum c_i eps^(order+i) + O(eps^trunc)`` over Q or Q(i)."""

    __slots__ = ("order", "coeffs", "trunc")

    def __init__(self, order: int, coeffs: Sequence, trunc: int):
        coeffs = [_rat(c) for c in coeffs[: max(0, trunc - order)]]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        coeffs = coeffs[i:]
        order += i
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            order = trunc
        self.order = order
        self.coeffs = coeffs
        self.trunc = trunc

    @classmethod
    def from_poly(cls, terms: Union[Mapping[int, object], int, Fraction, GaussianRational], retained: int = 12) -> "EpsSeries":
        """Exact finite Laurent polynomial in eps, known to ``retained`` orders past its lead."""
        if not isinstance(terms, Mapping):
            terms = {0: terms}
        terms = {e: _rat(c) for e, c in terms.items() if c}
        if not terms:
            return cls(0, [], retained)
        lo = min(terms)
        trunc = lo + retained
        return cls(lo, [terms.get(lo + i, Fraction(0)) for i in range(retained)], trunc)

    @classmethod
    def eps(cls, retained: int = 12) -> "EpsSeries":
        return cls.from_poly({1: 1}, retained)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coeff(self, e: int) -> Fraction:
        i = e - self.order
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _lift(self, other) -> "EpsSeries":
        if isinstance(other, EpsSeries):
            return other
        if isinstance(other, _SCALARS):
            # exact scalar: precision never limits the other operand
            big = self.trunc + 1 + max(0, -self.order)
            return EpsSeries(0, [other], max(big, 1))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = min(self.trunc, o.trunc)
        lo = min(self.order, o.order)
        return EpsSeries(lo, [self.coeff(e) + o.coeff(e) for e in range(lo, t)], t)

    __radd__ = __add__

    def __neg__(self):
        return EpsSeries(self.order, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                return EpsSeries(self.trunc, [], self.trunc)
            return EpsSeries(self.order, [c * other for c in self.coeffs], self.trunc)
        if not isinstance(other, EpsSeries):
            return NotImplemented
        t = min(self.order + other.trunc, other.order + self.trunc)
        lo = self.order + other.order
        n = max(0, t - lo)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    out[i + j] += a * b
        return EpsSeries(lo, out, t)

    __rmul__ = __mul__

    def inverse(self) -> "EpsSeries":
        if not self.coeffs:
            raise IndeterminateLeadingOrder(f"series vanishes to O(eps^{self.trunc})")
        r = self.trunc - self.order
        a = self.coeffs + [Fraction(0)] * (r - len(self.coeffs))
        inv = [Fraction(0)] * r
        inv[0] = 1 / a[0]
        for m in range(1, r):
            s = sum((a[j] * inv[m - j] for j in range(1, m + 1)), Fraction(0))
            inv[m] = -s * inv[0]
        return EpsSeries(-self.order, inv, -self.order + r)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                raise ZeroDivisionError("series divided by zero")
            return self * (Fraction(1) / other)
        if not isinstance(other, EpsSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return EpsSeries(0, [1], self.trunc - self.order)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def evaluate(self, eps: Fraction) -> Fraction:
        return sum((c * _rat(eps) ** (self.order + i) for i, c in enumerate(self.coeffs)), Fraction(0))

    def to_text(self) -> str:
        if not self.coeffs:
            return f"O(e^{self.trunc})"
        parts = [f"{_fmt(c)}*e^{self.order + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) + f" + O(e^{self.trunc})"

    def __repr__(self):
        return f"EpsSeries({self.to_text()})"


def _as_series(x, retained: int) -> EpsSeries:
    if isinstance(x, EpsSeries):
        return x
    return EpsSeries.from_poly(x, retained)


def iterate_series(spec: RecurrenceSpec, init: Sequence, params: Optional[Mapping] = None,
                   N: int = 6, trunc: int = 12, retry: bool = True) -> List[EpsSeries]:
    """Series iterates ``0..k+N-1`` from seeds given as numbers, ``{power: coeff}`` dicts or series.

    Seeds that are not already series are expanded with ``trunc`` retained
    orders; if a division meets a series with no known nonzero coefficient
    the run is repeated once at ``2*trunc``.
    """
    bound = {name: _rat(v) for name, v in spec.bind(params).items()}
    try:
        vals = [_as_series(x, trunc) for x in init]
        for _ in range(N):
            vals.append(_as_series(evaluate(spec.update, vals[-spec.order:], bound), trunc))
        return vals
    except IndeterminateLeadingOrder:
        if not retry:
            raise
        return iterate_series(spec, init, params, N, 2 * trunc, retry=False)
