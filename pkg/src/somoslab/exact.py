"""Exact arithmetic: multivariate Laurent polynomials over Z and unreduced fractions.

Monomials are packed into a single Python ``int``: the exponent of the
variable interned in slot ``i`` occupies signed base-``2**WIDTH`` digit ``i``.
Monomial multiplication is integer addition and integer comparison of keys
is a monomial order (lexicographic, latest-interned variable most
significant).  The canonical *printed* order is graded lexicographic by
variable name and does not depend on interning order.

Fractions are never reduced by a gcd; equality is decided by
cross-multiplication.  The only simplification performed is folding a
denominator that is a unit (``+-`` a single monomial) into the numerator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

from . import kernels as K

__all__ = [
    "WIDTH",
    "Monomial",
    "LaurentPoly",
    "FracLaurent",
    "DoesNotDivide",
    "DivisionByZero",
    "PoleError",
    "exact_div",
    "derivative",
    "frac_equal",
    "eval_rational",
    "ring_op",
    "var",
    "variables",
    "parse_rational",
    "name_key",
]

WIDTH = 24
BASE = 1 << WIDTH
HALF = BASE >> 1
MASK = BASE - 1

_names: list = []
_slots: Dict[str, int] = {}


class DoesNotDivide(ArithmeticError):
    """No Laurent polynomial quotient with integer coefficients exists."""

    def __init__(self, numerator=None, divisor=None):
        super().__init__("divisor does not divide numerator in the Laurent ring")
        self.numerator = numerator
        self.divisor = divisor


class DivisionByZero(ZeroDivisionError):
    pass


class PoleError(ZeroDivisionError):
    """A denominator evaluated to zero."""


def intern(name: str) -> int:
    slot = _slots.get(name)
    if slot is None:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"invalid variable name {name!r}")
        slot = len(_names)
        _names.append(name)
        _slots[name] = slot
    return slot


def name_key(name: str):
    """Natural sort key: ``x2 < x10``."""
    m = re.fullmatch(r"(.*?)(\d*)", name)
    head, digits = m.group(1), m.group(2)
    return (head, int(digits) if digits else -1, name)


def pack(exps: Mapping[str, int]) -> int:
    key = 0
    for name, e in exps.items():
        if e:
            if not -HALF < e < HALF:
                raise OverflowError(f"exponent {e} out of range")
            key += e << (WIDTH * intern(name))
    return key


def unpack_slots(key: int) -> Dict[int, int]:
    out = {}
    slot = 0
    while key:
        d = key & MASK
        if d >= HALF:
            d -= BASE
        if d:
            out[slot] = d
        key = (key - d) >> WIDTH
        slot += 1
    return out


def unpack(key: int) -> Dict[str, int]:
    return {_names[s]: e for s, e in unpack_slots(key).items()}


class Monomial:
    """Product of variables to signed integer powers (zero exponents dropped)."""

    __slots__ = ("key",)

    def __init__(self, exponents: Union[Mapping[str, int], int] = ()):
        self.key = exponents if isinstance(exponents, int) else pack(dict(exponents))

    @property
    def exponents(self) -> Dict[str, int]:
        return unpack(self.key)

    @property
    def degree(self) -> int:
        return sum(unpack_slots(self.key).values())

    def __eq__(self, other):
        return isinstance(other, Monomial) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __mul__(self, other):
        return Monomial(self.key + other.key)

    def to_text(self) -> str:
        exps = self.exponents
        parts = []
        for name in sorted(exps, key=name_key):
            e = exps[name]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"Monomial({self.to_text()})"


def _sort_key(exps: Dict[str, int], order):
    vec = tuple(exps.get(n, 0) for n in order)
    return (sum(vec), vec)


class LaurentPoly:
    """Integer-coefficient Laurent polynomial; immutable."""

    __slots__ = ("_t", "_box", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms} if terms else {}
        self._t = terms
        self._box = None
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "LaurentPoly":
        return cls({1 << (WIDTH * intern(name)): 1})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls(int(c))

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: int = 1) -> "LaurentPoly":
        return cls({pack(exps): coeff} if coeff else {})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Mapping[str, int], int]]) -> "LaurentPoly":
        out: Dict[int, int] = {}
        for exps, c in terms:
            k = pack(exps)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return cls(out)

    @staticmethod
    def coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly(x)
        if isinstance(x, Fraction) and x.denominator == 1:
            return LaurentPoly(x.numerator)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection ---------------------------------------------------
    @property
    def raw(self) -> Dict[int, int]:
        return self._t

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._t.get(0, 0)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_unit(self) -> bool:
        if len(self._t) != 1:
            return False
        (c,) = self._t.values()
        return c in (1, -1)

    def _slot_box(self):
        if self._box is None:
            decoded = [unpack_slots(k) for k in self._t]
            slots = set().union(*decoded) if decoded else set()
            lo = {s: min(d.get(s, 0) for d in decoded) for s in slots}
            hi = {s: max(d.get(s, 0) for d in decoded) for s in slots}
            self._box = (lo, hi)
        return self._box

    def variables(self) -> Tuple[str, ...]:
        lo, hi = self._slot_box()
        slots = {s for s, e in lo.items() if e} | {s for s, e in hi.items() if e}
        return tuple(sorted((_names[s] for s in slots), key=name_key))

    def degree(self, v: str) -> int:
        """Largest exponent of ``v`` (0 if absent; ``-inf`` never returned)."""
        if not self._t:
            return 0
        s = _slots.get(v)
        return 0 if s is None else self._slot_box()[1].get(s, 0)

    def min_degree(self, v: str) -> int:
        if not self._t:
            return 0
        s = _slots.get(v)
        return 0 if s is None else self._slot_box()[0].get(s, 0)

    def total_degree(self) -> int:
        return max((sum(unpack_slots(k).values()) for k in self._t), default=0)

    def terms(self) -> Iterator[Tuple[Monomial, int]]:
        """Terms in canonical graded-lex order (descending)."""
        order = self.variables()
        decoded = [(unpack(k), k, c) for k, c in self._t.items()]
        decoded.sort(key=lambda t: _sort_key(t[0], order), reverse=True)
        for _, k, c in decoded:
            yield Monomial(k), c

    def coefficient(self, exps: Mapping[str, int]) -> int:
        return self._t.get(pack(exps), 0)

    def to_text(self) -> str:
        if not self._t:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.terms()):
            mono = m.to_text()
            a = abs(c)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append((" + " if c > 0 else " - ") + body)
        return "".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r})"

    # -- arithmetic ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._t.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(K.add(self._t, other._t))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(K.sub(self._t, other._t))

    def __rsub__(self, other):
        if isinstance(other, int):
            return LaurentPoly(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(K.scale(self._t, other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self._t is other._t:
            return LaurentPoly(K.sqr(self._t))
        return LaurentPoly(K.mul(self._t, other._t))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.unit_inverse() ** (-n)
        if len(self._t) == 1:
            (k, c), = self._t.items()
            return LaurentPoly({k * n: c ** n})
        result = None
        base = self._t
        while n:
            if n & 1:
                result = base if result is None else K.mul(result, base)
            n >>= 1
            if n:
                base = K.sqr(base)
        return LaurentPoly(result if result is not None else {0: 1})

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise DoesNotDivide(LaurentPoly(1), self)
        (k, c), = self._t.items()
        return LaurentPoly({-k: c})

    def shifted(self, exps: Mapping[str, int]) -> "LaurentPoly":
        """Multiply by a monomial."""
        return LaurentPoly(K.shift(self._t, pack(exps)))

    # -- calculus / evaluation ----------------------------------------
    def derivative(self, v: str) -> "LaurentPoly":
        s = _slots.get(v)
        if s is None:
            return LaurentPoly()
        unit = 1 << (WIDTH * s)
        out = {}
        for k, c in self._t.items():
            e = unpack_slots(k).get(s, 0)
            if e:
                out[k - unit] = c * e
        return LaurentPoly(out)

    def evaluate(self, point: Mapping[str, object]):
        """Value at ``point`` (name -> number); unbound variables raise KeyError."""
        cache: Dict[Tuple[int, int], object] = {}
        vals = {}
        total = 0
        for k, c in self._t.items():
            term = c
            for s, e in unpack_slots(k).items():
                if s not in vals:
                    vals[s] = point[_names[s]]
                p = cache.get((s, e))
                if p is None:
                    x = vals[s]
                    if e < 0:
                        if x == 0:
                            raise PoleError(f"{_names[s]} = 0 in a negative power")
                        p = Fraction(1) / x ** (-e) if isinstance(x, int) else 1 / x ** (-e)
                    else:
                        p = x ** e
                    cache[(s, e)] = p
                term = term * p
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Replace variables by Laurent polynomials.

        A variable carrying a negative exponent must map to a unit; otherwise
        :class:`DoesNotDivide` is raised.
        """
        slots = {_slots[n]: LaurentPoly.coerce(v) for n, v in mapping.items() if n in _slots}
        powcache: Dict[Tuple[int, int], Dict[int, int]] = {}

        def power(s, e):
            got = powcache.get((s, e))
            if got is None:
                got = (slots[s] ** e)._t
                powcache[(s, e)] = got
            return got

        acc: Dict[int, int] = {}
        for k, c in self._t.items():
            keep = 0
            factors = []
            for s, e in unpack_slots(k).items():
                if s in slots:
                    factors.append(power(s, e))
                else:
                    keep += e << (WIDTH * s)
            term = {keep: c}
            for f in sorted(factors, key=len):
                term = K.mul(term, f)
            acc = K.add(acc, term)
        return LaurentPoly(acc)


def var(name: str) -> LaurentPoly:
    return LaurentPoly.var(name)


def variables(names: str):
    """``variables("x0 x1 x2")`` -> tuple of variable polynomials."""
    return tuple(LaurentPoly.var(n) for n in names.replace(",", " ").split())


def ring_op(a: LaurentPoly, b, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        if not isinstance(b, int) or b < 0:
            raise ValueError("pow exponent must be a non-negative integer")
        return a ** b
    raise ValueError(f"unknown ring op {op!r}")


def _inbox_factory(a: LaurentPoly, b: LaurentPoly):
    alo, ahi = a._slot_box()
    blo, bhi = b._slot_box()
    lo = {}
    hi = {}
    for s in set(alo) | set(ahi) | set(blo) | set(bhi):
        l = alo.get(s, 0) - blo.get(s, 0)
        h = ahi.get(s, 0) - bhi.get(s, 0)
        if l > h:
            return None
        lo[s] = l
        hi[s] = h
    nslots = max(lo, default=-1) + 1
    los = [lo.get(s, 0) for s in range(nslots)]
    his = [hi.get(s, 0) for s in range(nslots)]

    def inbox(key):
        slot = 0
        while key:
            d = key & MASK
            if d >= HALF:
                d -= BASE
            if slot >= nslots or not los[slot] <= d <= his[slot]:
                return False
            key = (key - d) >> WIDTH
            slot += 1
        for s in range(slot, nslots):
            if not los[s] <= 0 <= his[s]:
                return False
        return True

    return inbox


def exact_div(a: LaurentPoly, b: LaurentPoly, polynomial: bool = False) -> LaurentPoly:
    """Laurent quotient ``a / b``; raises :class:`DoesNotDivide` if none exists.

    With ``polynomial=True`` the quotient must also have no negative
    exponents, i.e. divisibility is decided in the ordinary polynomial ring.
    """
    a = LaurentPoly.coerce(a)
    b = LaurentPoly.coerce(b)
    if not b:
        raise DivisionByZero("exact_div by zero polynomial")
    if not a:
        return LaurentPoly()
    if polynomial:
        q = exact_div(a, b)
        if any(e < 0 for k in q.raw for e in unpack_slots(k).values()):
            raise DoesNotDivide(a, b)
        return q
    if len(b) == 1:
        (k, c), = b._t.items()
        if c in (1, -1):
            return LaurentPoly({ka - k: ca * c for ka, ca in a._t.items()})
        out = {}
        for ka, ca in a._t.items():
            q, r = divmod(ca, c)
            if r:
                raise DoesNotDivide(a, b)
            out[ka - k] = q
        return LaurentPoly(out)
    if len(a) < len(b):
        raise DoesNotDivide(a, b)
    inbox = _inbox_factory(a, b)
    if inbox is None:
        raise DoesNotDivide(a, b)
    q = K.divexact(a._t, b._t, inbox)
    if q is None:
        raise DoesNotDivide(a, b)
    return LaurentPoly(q)


def derivative(a: LaurentPoly, v: str) -> LaurentPoly:
    return LaurentPoly.coerce(a).derivative(v)


# ---------------------------------------------------------------------------
# fractions
# ---------------------------------------------------------------------------

class FracLaurent:
    """Unreduced quotient ``num / den`` of Laurent polynomials."""

    __slots__ = ("num", "den")
    __hash__ = None  # equality is semantic

    def __init__(self, num, den=1):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if not den:
            raise DivisionByZero("zero denominator")
        if len(den) == 1 and not den == 1:
            (k, c), = den.raw.items()
            if c in (1, -1):
                num = LaurentPoly({kn - k: cn * c for kn, cn in num.raw.items()})
                den = LaurentPoly(1)
        self.num = num
        self.den = den

    @staticmethod
    def coerce(x) -> "FracLaurent":
        if isinstance(x, FracLaurent):
            return x
        if isinstance(x, Fraction):
            return FracLaurent(x.numerator, x.denominator)
        return FracLaurent(LaurentPoly.coerce(x))

    def is_zero(self) -> bool:
        return not self.num

    def is_laurent(self) -> bool:
        return self.den == 1

    def as_laurent(self) -> LaurentPoly:
        """The Laurent polynomial equal to this fraction (exact division)."""
        if self.den == 1:
            return self.num
        return exact_div(self.num, self.den)

    def __neg__(self):
        return FracLaurent(-self.num, self.den)

    def __add__(self, other):
        try:
            o = FracLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return FracLaurent(self.num + o.num, self.den)
        return FracLaurent(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = FracLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return FracLaurent.coerce(other) - self

    def __mul__(self, other):
        try:
            o = FracLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return FracLaurent(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = FracLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise DivisionByZero("division by zero fraction")
        return FracLaurent(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return FracLaurent.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            if not self.num:
                raise DivisionByZero("zero to a negative power")
            return FracLaurent(self.den ** (-n), self.num ** (-n))
        return FracLaurent(self.num ** n, self.den ** n)

    def __eq__(self, other):
        try:
            o = FracLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return frac_equal(self, o)

    def derivative(self, v: str) -> "FracLaurent":
        dn = self.num.derivative(v)
        if self.den == 1:
            return FracLaurent(dn)
        dd = self.den.derivative(v)
        if not dd:
            return FracLaurent(dn, self.den)
        return FracLaurent(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleError("denominator vanishes at the evaluation point")
        return Fraction(self.num.evaluate(point)) / Fraction(d)

    def substitute(self, mapping: Mapping[str, "FracLaurent"]) -> "FracLaurent":
        """Compose with a rational substitution ``name -> FracLaurent``."""
        mp = {n: FracLaurent.coerce(v) for n, v in mapping.items()}
        num = _subs_poly(self.num, mp)
        den = _subs_poly(self.den, mp)
        return FracLaurent(num.num * den.den, num.den * den.num)

    def variables(self) -> Tuple[str, ...]:
        return tuple(sorted(set(self.num.variables()) | set(self.den.variables()), key=name_key))

    def to_text(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    __str__ = to_text

    def __repr__(self):
        return f"FracLaurent({self.to_text()!r})"


def _subs_poly(p: LaurentPoly, mp: Mapping[str, FracLaurent]) -> FracLaurent:
    """Substitute fractions into a Laurent polynomial, clearing denominators once.

    With ``lo``/``hi`` the extreme exponents of a variable ``v -> P/Q``, each
    term ``v^e`` is written ``P^(e-lo) Q^(hi-e)`` times the common factor
    ``P^lo Q^-hi``.
    """
    targets = [n for n in p.variables() if n in mp]
    if not targets:
        return FracLaurent(p)
    lo = {n: p.min_degree(n) for n in targets}
    hi = {n: p.degree(n) for n in targets}
    cache: Dict[Tuple[str, str, int], Dict[int, int]] = {}

    def pw(n, which, e):
        key = (n, which, e)
        got = cache.get(key)
        if got is None:
            base = mp[n].num if which == "P" else mp[n].den
            got = (base ** e).raw
            cache[key] = got
        return got

    tslots = {_slots[n]: n for n in targets}
    acc: Dict[int, int] = {}
    for k, c in p.raw.items():
        ex = unpack_slots(k)
        keep = k
        factors = []
        for s, n in tslots.items():
            e = ex.get(s, 0)
            keep -= e << (WIDTH * s)
            if e - lo[n]:
                factors.append(pw(n, "P", e - lo[n]))
            if hi[n] - e and not mp[n].den == 1:
                factors.append(pw(n, "Q", hi[n] - e))
        term = {keep: c}
        for f in sorted(factors, key=len):
            term = K.mul(term, f)
        acc = K.add(acc, term)
    num = LaurentPoly(acc)
    den = LaurentPoly(1)
    for n in targets:
        P, Q = mp[n].num, mp[n].den
        if lo[n] >= 0:
            num = num * P ** lo[n]
        else:
            den = den * P ** (-lo[n])
        if not Q == 1:
            if hi[n] >= 0:
                den = den * Q ** hi[n]
            else:
                num = num * Q ** (-hi[n])
    return FracLaurent(num, den)


def frac_equal(f, g) -> bool:
    f = FracLaurent.coerce(f)
    g = FracLaurent.coerce(g)
    if f.den == g.den:
        return f.num == g.num
    return f.num * g.den == g.num * f.den


def eval_rational(f, point: Mapping[str, object]) -> Fraction:
    """Exact value of ``f`` at ``point``; :class:`PoleError` on the denominator's zero set."""
    f = FracLaurent.coerce(f)
    pt = {k: Fraction(v) for k, v in point.items()}
    return f.evaluate(pt)


_RAT = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer, with optional sign."""
    m = _RAT.fullmatch(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)
