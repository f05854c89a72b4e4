"""A small language for rational recurrences and the built-in catalog.

Grammar of expressions::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := base ('^' ['-'] INT)?
    base   := INT | IDENT | IDENT '[' 'n' (('+' | '-') INT)? ']' | '(' expr ')'

A definition is one equation ``LHS = RHS`` in a single sequence variable
(any letter: ``x``, ``u``, ``tau``).  The left side must contain the
highest shift linearly; it is solved by one division (and one
subtraction, for sum-type left sides such as ``u[n+1] + u[n-1] = ...``).
Shifts are renormalised so the lowest offset is 0; the stored update gives
offset ``k`` in terms of offsets ``0..k-1``.

A recurrence file may add ``name NAME``, ``param a, b=1/2`` and
``inverse EQUATION`` lines; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "Int", "Param", "Shift", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "RecurrenceSpec", "ParseError", "ShiftOutOfRange", "NonIntegerExponent",
    "UnknownName", "parse_expr", "parse_recurrence", "format_expr",
    "format_recurrence", "evaluate", "compile_update", "catalog", "catalog_names",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Shift:
    offset: int


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def _walk(node):
    yield node
    if isinstance(node, (Add, Sub, Mul, Div)):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Neg):
        yield from _walk(node.arg)
    elif isinstance(node, Pow):
        yield from _walk(node.base)


def shifts_in(node) -> set:
    return {n.offset for n in _walk(node) if isinstance(n, Shift)}


def params_in(node) -> List[str]:
    seen: List[str] = []
    for n in _walk(node):
        if isinstance(n, Param) and n.name not in seen:
            seen.append(n.name)
    return seen


def map_shifts(node, f: Callable[[int], int]):
    if isinstance(node, Shift):
        return Shift(f(node.offset))
    if isinstance(node, (Add, Sub, Mul, Div)):
        return type(node)(map_shifts(node.left, f), map_shifts(node.right, f))
    if isinstance(node, Neg):
        return Neg(map_shifts(node.arg, f))
    if isinstance(node, Pow):
        return Pow(map_shifts(node.base, f), node.exp)
    return node


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{detail}")


class ShiftOutOfRange(ParseError):
    pass


class NonIntegerExponent(ParseError):
    pass


class UnknownName(KeyError):
    pass


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<INT>\d+)|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)|(?P<OP>[-+*/^()\[\]=,]))")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col0: int = 0) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
        kind = m.lastgroup
        start = m.start(kind)
        val = m.group(kind)
        toks.append(_Tok(val if kind == "OP" else kind, val, line, col0 + start + 1))
        pos = m.end()
    toks.append(_Tok("EOF", "", line, col0 + len(text) + 1))
    return toks


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0
        self.seq_var: Optional[str] = None

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, expected=(), cls=ParseError):
        t = self.tok
        raise cls(msg, t.line, t.col, expected)

    def expect(self, kind):
        if self.tok.kind != kind:
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", [kind])
        return self.advance()

    def expr(self):
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            right = self.unary()
            node = Mul(node, right) if op == "*" else Div(node, right)
        return node

    def unary(self):
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.base()
        if self.tok.kind == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "INT":
                cls = NonIntegerExponent if self.tok.kind in ("IDENT", "(") else ParseError
                self.fail("exponent must be an integer literal", ["INT"], cls)
            node = Pow(node, sign * int(self.advance().text))
        return node

    def base(self):
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Int(int(t.text))
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "IDENT":
            self.advance()
            if self.tok.kind != "[":
                return Param(t.text)
            if self.seq_var is None:
                self.seq_var = t.text
            elif self.seq_var != t.text:
                raise ParseError(f"second sequence variable {t.text!r} (already using {self.seq_var!r})",
                                 t.line, t.col)
            self.advance()
            idx = self.tok
            if idx.kind != "IDENT" or idx.text != "n":
                self.fail("index must be written in terms of n", ["n"])
            self.advance()
            off = 0
            if self.tok.kind in ("+", "-"):
                sign = 1 if self.advance().kind == "+" else -1
                off = sign * int(self.expect("INT").text)
            self.expect("]")
            return Shift(off)
        self.fail(f"unexpected {t.text or 'end of input'!r}", ["INT", "IDENT", "(", "-"])


def parse_expr(text: str) -> object:
    p = _Parser(_tokenize(text))
    node = p.expr()
    if p.tok.kind != "EOF":
        p.fail(f"unexpected {p.tok.text!r}", ["+", "-", "*", "/", "^", "EOF"])
    return node


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def format_expr(node, var: str = "x", base_offset: int = 0) -> str:
    def prec(n):
        return _PREC.get(type(n), 5)

    def fmt(n):
        if isinstance(n, Int):
            return str(n.value)
        if isinstance(n, Param):
            return n.name
        if isinstance(n, Shift):
            o = n.offset + base_offset
            return f"{var}[n]" if o == 0 else f"{var}[n{o:+d}]"
        if isinstance(n, Neg):
            inner = fmt(n.arg)
            return "-" + (f"({inner})" if prec(n.arg) < 4 else inner)
        if isinstance(n, Pow):
            inner = fmt(n.base)
            if prec(n.base) < 5:
                inner = f"({inner})"
            return f"{inner}^{n.exp}"
        p = _PREC[type(n)]
        left = fmt(n.left)
        if prec(n.left) < p:
            left = f"({left})"
        right = fmt(n.right)
        if prec(n.right) <= p:
            right = f"({right})"
        sym = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}[type(n)]
        return left + sym + right

    return fmt(node)


# ---------------------------------------------------------------------------
# recurrence specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceSpec:
    """Solved recurrence: value at offset ``order`` from offsets ``0..order-1``."""

    name: str
    order: int
    update: object
    params: Tuple[str, ...] = ()
    defaults: Tuple[Tuple[str, Fraction], ...] = ()
    inverse: Optional[object] = None
    var: str = "x"
    exponent_c: Optional[int] = field(default=None, compare=False)
    source: str = field(default="", compare=False)

    @property
    def default_params(self) -> Dict[str, Fraction]:
        return dict(self.defaults)

    def bind(self, params: Optional[Mapping[str, object]] = None) -> Dict[str, object]:
        out: Dict[str, object] = dict(self.defaults)
        if params:
            out.update(params)
        missing = [p for p in self.params if p not in out]
        if missing:
            raise KeyError(f"unbound parameters for {self.name}: {', '.join(missing)}")
        return out

    def state_names(self) -> List[str]:
        return [f"{self.var}{j}" for j in range(self.order)]

    def to_text(self) -> str:
        return format_recurrence(self)


def _split_products(node) -> List[object]:
    if isinstance(node, Mul):
        return _split_products(node.left) + _split_products(node.right)
    return [node]


def _split_sum(node, sign=1) -> List[Tuple[int, object]]:
    if isinstance(node, Add):
        return _split_sum(node.left, sign) + _split_sum(node.right, sign)
    if isinstance(node, Sub):
        return _split_sum(node.left, sign) + _split_sum(node.right, -sign)
    if isinstance(node, Neg):
        return _split_sum(node.arg, -sign)
    return [(sign, node)]


def _product(nodes: Sequence[object]):
    out = nodes[0]
    for n in nodes[1:]:
        out = Mul(out, n)
    return out


def _solve(lhs, rhs, target: int, where: Tuple[int, int]):
    """Solve ``lhs = rhs`` for the shift ``target`` (appearing linearly in ``lhs``)."""
    line, col = where
    if target in shifts_in(rhs):
        raise ParseError("the solved-for shift also appears on the right-hand side", line, col)
    terms = _split_sum(lhs)
    carrying = [(s, t) for s, t in terms if target in shifts_in(t)]
    if len(carrying) != 1:
        raise ParseError("the highest shift must appear in exactly one left-hand term", line, col)
    sign, term = carrying[0]
    factors = _split_products(term)
    hits = [f for f in factors if target in shifts_in(f)]
    if len(hits) != 1 or hits[0] != Shift(target):
        raise ParseError("mixed form: the solved-for shift must appear linearly", line, col)
    i = next(i for i, f in enumerate(factors) if target in shifts_in(f))
    others = factors[:i] + factors[i + 1:]
    num = rhs
    for s, t in terms:
        if t is term:
            continue
        num = Sub(num, t) if s > 0 else Add(num, t)
    if sign < 0:
        num = Neg(num)
    return Div(num, _product(others)) if others else num


def _parse_equation(text: str, line: int, col0: int):
    toks = _tokenize(text, line, col0)
    p = _Parser(toks)
    lhs = p.expr()
    if p.tok.kind != "=":
        p.fail("expected '=' in recurrence definition", ["="])
    eq = p.advance()
    rhs = p.expr()
    if p.tok.kind != "EOF":
        p.fail(f"unexpected {p.tok.text!r}", ["+", "-", "*", "/", "EOF"])
    if p.seq_var is None:
        raise ParseError("no sequence variable such as x[n] found", line, col0 + 1)
    return lhs, rhs, p.seq_var, (eq.line, eq.col)


def _check_params(update, names, var, where):
    from .exact import FracLaurent, LaurentPoly

    order = max(shifts_in(update), default=-1) + 1
    state = [FracLaurent(LaurentPoly.var(f"{var}{j}")) for j in range(max(order, 1))]
    env = {p: FracLaurent(LaurentPoly.var(p)) for p in names}
    try:
        val = evaluate(update, state, env)
    except ZeroDivisionError:
        raise ParseError("update divides by zero identically", *where)
    for p in names:
        if val.num.min_degree(p) < 0 or p in val.den.variables():
            raise ParseError(f"parameter {p!r} must appear polynomially (non-negative exponents)", *where)


def parse_recurrence(text: str, name: str = "custom", check: bool = True) -> RecurrenceSpec:
    """Parse a definition (a single equation or a recurrence file)."""
    main = None
    inverse_src = None
    declared: List[Tuple[str, Optional[Fraction]]] = []
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col0 = len(body) - len(body.lstrip())
        head, _, rest = stripped.partition(" ")
        if head == "name" and "=" not in stripped:
            name = rest.strip()
        elif head == "param" and "[" not in stripped:
            for item in rest.split(","):
                item = item.strip()
                if not item:
                    continue
                pname, eq, value = item.partition("=")
                pname = pname.strip()
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", pname):
                    raise ParseError(f"bad parameter name {pname!r}", lineno, col0 + 1)
                val = None
                if eq:
                    from .exact import parse_rational
                    try:
                        val = parse_rational(value)
                    except ValueError as exc:
                        raise ParseError(str(exc), lineno, col0 + 1)
                declared.append((pname, val))
        elif head == "inverse":
            inverse_src = (rest, lineno, col0 + len("inverse") + 1)
        else:
            if main is not None:
                raise ParseError("only one recurrence definition per file", lineno, col0 + 1)
            main = (stripped, lineno, col0)
    if main is None:
        raise ParseError("empty recurrence definition", 1, 1, ["IDENT"])

    lhs, rhs, var, where = _parse_equation(*main)
    lo = min(shifts_in(lhs) | shifts_in(rhs))
    hi = max(shifts_in(lhs))
    if max(shifts_in(rhs), default=lo) > hi:
        raise ShiftOutOfRange("right-hand side uses a shift above the solved-for one", *where)
    order = hi - lo
    if order < 1:
        raise ShiftOutOfRange("recurrence must have order at least 1", *where)
    update = map_shifts(_solve(lhs, rhs, hi, where), lambda o: o - lo)

    inverse = None
    if inverse_src is not None:
        ilhs, irhs, ivar, iwhere = _parse_equation(*inverse_src)
        if ivar != var:
            raise ParseError("inverse uses a different sequence variable", *iwhere)
        ilo = min(shifts_in(ilhs) | shifts_in(irhs))
        ihi = max(shifts_in(ilhs) | shifts_in(irhs))
        if ihi - ilo != order:
            raise ShiftOutOfRange("inverse spans a different order window", *iwhere)
        inverse = map_shifts(_solve(ilhs, irhs, ilo, iwhere), lambda o: o - ilo)

    used = params_in(update) + (params_in(inverse) if inverse is not None else [])
    names: List[str] = []
    for p, _ in declared:
        if p not in names:
            names.append(p)
    for p in used:
        if p not in names:
            names.append(p)
    defaults = tuple((p, v) for p, v in declared if v is not None)
    if check:
        _check_params(update, names, var, where)
    return RecurrenceSpec(
        name=name, order=order, update=update, params=tuple(names),
        defaults=defaults, inverse=inverse, var=var, source=text,
    )


def format_recurrence(spec: RecurrenceSpec) -> str:
    """Canonical text; ``parse_recurrence(format_recurrence(s))`` reproduces ``s``."""
    lines = [f"name {spec.name}"]
    if spec.params:
        dflt = spec.default_params
        items = [f"{p}={dflt[p]}" if p in dflt else p for p in spec.params]
        lines.append("param " + ", ".join(items))
    lines.append(f"{spec.var}[n{spec.order:+d}] = {format_expr(spec.update, spec.var)}")
    if spec.inverse is not None:
        body = format_expr(map_shifts(spec.inverse, lambda o: o), spec.var)
        lines.append(f"inverse {spec.var}[n] = {body}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(node, state: Sequence[object], params: Mapping[str, object]):
    """Evaluate with any numeric type supporting ``+ - * / **``."""
    if isinstance(node, Shift):
        return state[node.offset]
    if isinstance(node, Int):
        return node.value
    if isinstance(node, Param):
        return params[node.name]
    if isinstance(node, Add):
        return evaluate(node.left, state, params) + evaluate(node.right, state, params)
    if isinstance(node, Sub):
        return evaluate(node.left, state, params) - evaluate(node.right, state, params)
    if isinstance(node, Mul):
        return evaluate(node.left, state, params) * evaluate(node.right, state, params)
    if isinstance(node, Div):
        num = evaluate(node.left, state, params)
        den = evaluate(node.right, state, params)
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den
    if isinstance(node, Neg):
        return -evaluate(node.arg, state, params)
    if isinstance(node, Pow):
        b = evaluate(node.base, state, params)
        if node.exp < 0 and isinstance(b, int):
            b = Fraction(b)
        return b ** node.exp
    raise TypeError(f"unknown node {node!r}")


def _py(node) -> str:
    if isinstance(node, Shift):
        return f"s[{node.offset}]"
    if isinstance(node, Int):
        return f"_F({node.value})"
    if isinstance(node, Param):
        return f"p[{node.name!r}]"
    if isinstance(node, Neg):
        return f"(-{_py(node.arg)})"
    if isinstance(node, Pow):
        return f"({_py(node.base)}**{node.exp})"
    sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    return f"({_py(node.left)}{sym}{_py(node.right)})"


def compile_update(node) -> Callable[[Sequence[Fraction], Mapping[str, Fraction]], Fraction]:
    """Compile an update AST to a fast exact-rational function ``f(state, params)``."""
    code = compile(f"lambda s, p: {_py(node)}", "<update>", "eval")
    return eval(code, {"_F": Fraction})


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _somos_k(k: int) -> str:
    terms = " + ".join(
        f"x[n+{k - j}]*x[n+{j}]" if k - j != j else f"x[n+{j}]^2" for j in range(1, k // 2 + 1)
    )
    return f"x[n+{k}]*x[n] = {terms}\ninverse x[n] = ({terms})/x[n+{k}]"


def _family(c: int) -> RecurrenceSpec:
    rhs = "x[n+3]*x[n+1] + beta" if c == 0 else (
        "x[n+3]*x[n+1] + beta*x[n+2]" if c == 1 else f"x[n+3]*x[n+1] + beta*x[n+2]^{c}")
    text = f"x[n+4]*x[n] = {rhs}\ninverse x[n] = ({rhs})/x[n+4]"
    spec = parse_recurrence(text, name=f"family({c})")
    return replace(spec, exponent_c=c)


_STATIC = {
    "somos4": ("x[n+4]*x[n] = alpha*x[n+3]*x[n+1] + beta*x[n+2]^2\n"
               "inverse x[n] = (alpha*x[n+3]*x[n+1] + beta*x[n+2]^2)/x[n+4]"),
    "eds": ("# Somos-4 with alpha = x2^2, beta = -x1*x3 (bound from the seed)\n"
            "x[n+4]*x[n] = alpha*x[n+3]*x[n+1] + beta*x[n+2]^2\n"
            "inverse x[n] = (alpha*x[n+3]*x[n+1] + beta*x[n+2]^2)/x[n+4]"),
    "u-map": ("u[n+2] = (alpha*u[n+1] + beta)/(u[n]*u[n+1]^2)\n"
              "inverse u[n] = (alpha*u[n+1] + beta)/(u[n+2]*u[n+1]^2)"),
    "viallet": ("u[n+1] = (u[n]^2 + 1)/(u[n-1]*u[n])\n"
                "inverse u[n-1] = (u[n]^2 + 1)/(u[n+1]*u[n])"),
    "viallet-tau": ("tau[n+3]*tau[n-3] = (tau[n+2]*tau[n-2])^2 + tau[n+1]^2*tau[n]^4*tau[n-1]^2\n"
                    "inverse tau[n-3] = ((tau[n+2]*tau[n-2])^2 + tau[n+1]^2*tau[n]^4*tau[n-1]^2)/tau[n+3]"),
    "hv": ("u[n+1] + u[n-1] = u[n] + a/u[n]^2\n"
           "inverse u[n-1] = u[n] + a/u[n]^2 - u[n+1]"),
    "hv-tau": ("tau[n+3]*tau[n]^3*tau[n-1]^2 = tau[n+2]^3*tau[n-1]^3 - tau[n+2]^2*tau[n+1]^3*tau[n-2]"
               " + a*(tau[n+1]*tau[n])^6"),
}

_ALIASES = {"dana-scott": 1, "c0": 0}

_cache: Dict[str, RecurrenceSpec] = {}


def catalog_names() -> List[str]:
    return sorted(list(_STATIC) + [f"somos{k}" for k in range(5, 9)] + list(_ALIASES) + ["family(c)"])


def catalog(name: str) -> RecurrenceSpec:
    """Built-in recurrence by name (``somos4``, ``somos5``..``somos8``, ``family(c)``, ...)."""
    key = name.strip().lower()
    if key in _cache:
        return _cache[key]
    m = re.fullmatch(r"family[-(]?(\d+)\)?", key)
    if m:
        spec = _family(int(m.group(1)))
    elif key in _ALIASES:
        base = _family(_ALIASES[key])
        spec = replace(base, name=key)
    elif key in _STATIC:
        spec = parse_recurrence(_STATIC[key], name=key)
    elif re.fullmatch(r"somos[5-8]", key):
        spec = parse_recurrence(_somos_k(int(key[5:])), name=key)
    else:
        raise UnknownName(name)
    _cache[key] = spec
    return spec
