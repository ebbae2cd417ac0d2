"""A small expression language for series and scalars.

Grammar (LL, loosest first)::

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?
    atom    := INT | NAME | NAME "(" args ")" | "(" sum ")"
    exponent:= "-"? INT | "-"? "(" "-"? INT ("/" INT)? ")"

Exponents must be half-integers.  ``e`` and ``x`` both name the series
variable and ``sqrtx`` is ``x^(1/2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, TateError
from .scalars import (
    NUMBER,
    PIHALF,
    RATIONAL,
    NilpotentRing,
    PiHalf,
    PolyRing,
    Q,
    Ring,
    gamma_value,
    ring_of,
    to_doubled,
)
from .series import (
    LaurentSeries,
    big_o,
    compose,
    constant,
    default_prec,
    derivative,
    galois,
    invert_comp,
    invert_mul,
    log_derivative,
    monomial,
    mul,
    power,
    residue,
    truncate_mt,
)

# ---------------------------------------------------------------------------
# syntax tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: Fraction


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple = field(default=())


# name -> arity
FUNCTIONS = {
    "d": 1,
    "res": 1,
    "comp": 2,
    "inv": 1,
    "cinv": 1,
    "gamma": 1,
    "dp": 1,
    "embed": 1,
    "I": 1,
    "O": 1,
    "symp": 2,
    "pair": 2,
    "angle": 2,
    "bd": 1,
    "galois": 1,
    "mt": 1,
    "logd": 1,
    "witt": 2,
    "act": 2,
}

_SYMBOL = re.compile(r"(e|x|sqrtx|eps|pi|sqrtpi|v|t\d+|CP\d+)\Z")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


@dataclass
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            out.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), start))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", *_linecol(text, start))
            out.append(_Tok("op", ch, start))
        pos = m.end()
    out.append(_Tok("end", "", len(text.rstrip())))
    return out


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(msg, *_linecol(self.text, tok.pos))

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def parse(self):
        node = self.sum()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def sum(self):
        node = self.product()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return Pow(base, self.exponent())
        return base

    def _int(self) -> int:
        if self.tok.kind != "int":
            raise self.error("expected an integer exponent")
        v = int(self.tok.text)
        self.i += 1
        return v

    def exponent(self) -> Fraction:
        start = self.tok
        sign = -1 if self.accept("-") else 1
        if self.accept("("):
            inner = -1 if self.accept("-") else 1
            num = self._int()
            den = 1
            if self.accept("/"):
                den = self._int()
                if den == 0:
                    raise self.error("zero denominator in exponent", start)
            self.expect(")")
            r = Fraction(sign * inner * num, den)
        else:
            r = Fraction(sign * self._int())
        if (2 * r).denominator != 1:
            raise self.error(f"exponent {r} is not a half-integer", start)
        return r

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Num(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self.accept("("):
                if tok.text not in FUNCTIONS:
                    raise self.error(f"unknown function {tok.text!r}", tok)
                args = []
                if not self.accept(")"):
                    args.append(self.sum())
                    while self.accept(","):
                        args.append(self.sum())
                    self.expect(")")
                if len(args) != FUNCTIONS[tok.text]:
                    raise self.error(f"{tok.text} takes {FUNCTIONS[tok.text]} argument(s), got {len(args)}", tok)
                return Call(tok.text, tuple(args))
            if not _SYMBOL.match(tok.text):
                raise self.error(f"unknown symbol {tok.text!r}", tok)
            return Sym(tok.text)
        if self.accept("("):
            node = self.sum()
            self.expect(")")
            return node
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse(text: str):
    """Parse expression text into a syntax tree."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# canonical rendering
# ---------------------------------------------------------------------------

_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2}


def _level(node) -> int:
    if isinstance(node, BinOp):
        return _LEVEL[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node, need: int) -> str:
    s = render(node)
    return f"({s})" if _level(node) < need else s


def render(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if isinstance(node, BinOp):
        lv = _LEVEL[node.op]
        op = f" {node.op} " if lv == 1 else node.op
        return f"{_wrap(node.left, lv)}{op}{_wrap(node.right, lv + 1)}"
    if isinstance(node, Pow):
        r = node.exp
        exp = str(r) if r >= 0 and r.denominator == 1 else f"({r})"
        return f"{_wrap(node.base, 5)}^{exp}"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(render(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class EvalError(TateError, ValueError):
    pass


def ring_from_name(name: str) -> Ring:
    """``rational``, ``pihalf``, ``nil:n``/``nilpotent:n``, ``mu:N`` or ``poly:a,b,...``."""
    if name == "rational":
        return RATIONAL
    if name == "pihalf":
        return PIHALF
    kind, _, arg = name.partition(":")
    try:
        if kind in ("nil", "nilpotent"):
            return NilpotentRing(int(arg))
        if kind == "mu":
            return PolyRing.cobordism(int(arg))
    except ValueError:
        pass
    else:
        if kind == "poly" and arg:
            return PolyRing(tuple(a.strip() for a in arg.split(",")))
    raise EvalError(f"unknown ring {name!r}")


@dataclass
class Context:
    ring: Ring = RATIONAL
    fgl: object = None
    prec: int = field(default_factory=default_prec)

    @classmethod
    def from_name(cls, name: str = "rational", prec: int | None = None) -> Context:
        from .fgl import additive_fgl, mishchenko_fgl

        prec = default_prec() if prec is None else prec
        ring = ring_from_name(name)
        if name.startswith("mu:"):
            fg = mishchenko_fgl(int(name[3:]))
        else:
            fg = additive_fgl(prec)
        return cls(ring, fg, prec)


def _is_series(v) -> bool:
    return isinstance(v, LaurentSeries)


def as_series(v, ring: Ring | None = None) -> LaurentSeries:
    if _is_series(v):
        return v
    return constant(v, ring if ring is not None and _fits(v, ring) else ring_of(v))


def _fits(v, ring: Ring) -> bool:
    try:
        ring.coerce(v)
        return True
    except TateError:
        return False


def as_scalar(v):
    """Collapse an exact constant series to its coefficient."""
    if not _is_series(v):
        return v
    if v.is_exact() and set(v.coeffs2()) <= {0}:
        return v.coeffs2().get(0, v.ring.zero())
    raise EvalError(f"expected a scalar, got the series {v}")


def as_rational(v) -> Fraction:
    s = as_scalar(v)
    if isinstance(s, NUMBER):
        return Fraction(Q(s))
    if isinstance(s, PiHalf) and s.is_rational():
        return Fraction(s.to_rational())
    raise EvalError(f"expected a rational number, got {s}")


def _symbol(name: str, ctx: Context):
    ring = ctx.ring
    if name in ("e", "x"):
        return monomial(1, 1, ring)
    if name == "sqrtx":
        return monomial(Fraction(1, 2), 1, ring)
    if name == "pi":
        return PiHalf.pi_power(2)
    if name == "sqrtpi":
        return PiHalf.pi_power(1)
    if name == "eps":
        if not isinstance(ring, NilpotentRing):
            raise EvalError("eps needs a nilpotent ring (--ring nil:n)")
        return ring.eps()
    if isinstance(ring, PolyRing) and name in ring.names:
        return ring.gen(name)
    raise EvalError(f"symbol {name} is not available in ring {ring}")


def _binary(op: str, a, b, ctx: Context):
    if not _is_series(a) and not _is_series(b):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if isinstance(b, NUMBER):
            if b == 0:
                raise EvalError("division by zero")
            return a * (1 / Q(b))
        return a * ring_of(b).inverse(b)
    fa, fb = as_series(a, ctx.ring), as_series(b, ctx.ring)
    if op == "+":
        return fa + fb
    if op == "-":
        return fa - fb
    if op == "*":
        return mul(fa, fb)
    if not _is_series(b):
        return fa * ring_of(b).inverse(b)
    return mul(fa, invert_mul(fb, ctx.prec))


def _power(v, r: Fraction, ctx: Context):
    if _is_series(v):
        return power(v, r, ctx.prec)
    if r.denominator == 1:
        k = int(r)
        if isinstance(v, NUMBER):
            return Q(v) ** k
        return ring_of(v).power(v, k)
    if isinstance(v, PiHalf) and v.is_monomial() and list(v.terms.values()) == [1]:
        (e2,) = v.terms
        return PiHalf.pi_power(int(e2 * r))
    raise EvalError(f"cannot take {v} to the power {r}")


def evaluate(node, ctx: Context | None = None):
    """Evaluate a syntax tree to a series or a scalar."""
    ctx = ctx or Context.from_name()
    try:
        return _eval(node, ctx)
    except (TypeError, ZeroDivisionError) as exc:
        raise EvalError(str(exc)) from exc


def _eval(node, ctx: Context):
    if isinstance(node, Num):
        return Q(node.value)
    if isinstance(node, Sym):
        return _symbol(node.name, ctx)
    if isinstance(node, Neg):
        return -_eval(node.arg, ctx)
    if isinstance(node, BinOp):
        return _binary(node.op, _eval(node.left, ctx), _eval(node.right, ctx), ctx)
    if isinstance(node, Pow):
        return _power(_eval(node.base, ctx), node.exp, ctx)
    if isinstance(node, Call):
        return _call(node, ctx)
    raise EvalError(f"not an expression node: {node!r}")


def _call(node: Call, ctx: Context):
    from . import autgroup, fgl, symplectic

    name = node.name
    if name in ("gamma", "dp"):
        s = as_rational(_eval(node.args[0], ctx))
        return gamma_value(s) if name == "gamma" else symplectic.dp(s)
    if name == "witt":
        k = as_rational(_eval(node.args[0], ctx))
        if k.denominator != 1:
            raise EvalError("witt index must be an integer")
        return autgroup.witt_apply(int(k), as_series(_eval(node.args[1], ctx), ctx.ring))
    args = [as_series(_eval(a, ctx), ctx.ring) for a in node.args]
    if name == "O":
        (m,) = args
        items = m.items2()
        if not m.is_exact() or len(items) != 1 or items[0][1] != 1:
            raise EvalError("O(...) takes a single monomial such as x^3")
        return big_o(Fraction(items[0][0], 2), ctx.ring)
    if name == "d":
        return derivative(args[0])
    if name == "res":
        return residue(args[0])
    if name == "comp":
        return compose(args[0], args[1], ctx.prec)
    if name == "act":
        return compose(args[1], args[0], ctx.prec)
    if name == "inv":
        return invert_mul(args[0], ctx.prec)
    if name == "cinv":
        return invert_comp(args[0], ctx.prec)
    if name == "logd":
        return log_derivative(args[0], ctx.prec)
    if name == "galois":
        return galois(args[0])
    if name == "mt":
        return truncate_mt(args[0])
    if name == "embed":
        return symplectic.embed_half(args[0])
    if name == "I":
        return symplectic.involution(args[0], ctx.fgl)
    if name == "bd":
        return fgl.boundary(args[0], ctx.fgl)
    if name == "pair":
        return symplectic.kronecker_pair(args[0], args[1], ctx.fgl)
    if name == "symp":
        return symplectic.symp(args[0], args[1], ctx.fgl)
    if name == "angle":
        return symplectic.form_angle(args[0], args[1])
    raise EvalError(f"unknown function {name}")


def eval_text(text: str, ctx: Context | None = None):
    return evaluate(parse(text), ctx)


def render_value(v, var: str = "x") -> str:
    if _is_series(v):
        if v.is_exact() and set(v.coeffs2()) <= {0}:
            return str(as_scalar(v))
        return v.render(var)
    return str(v)


def value_json(v):
    if _is_series(v):
        return {"kind": "series", **v.to_json()}
    return {"kind": "scalar", "ring": str(ring_of(v)), "value": str(v)}
