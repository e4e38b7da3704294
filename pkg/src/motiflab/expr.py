"""Surfer-style implicit equation language.

Equations are polynomials (plus division) in the spatial variables x, y, z
with free single-letter scalar parameters.  The zero set of an expression is
the surface it denotes.  This module owns the AST, the parser, the printer,
evaluation, forward-mode differentiation and the algebraic combinators used
to compose motifs (products, dilation substitution, sum-of-squares
intersection).

Grammar (EBNF, byte-offset error reporting):

    equation   = expr [ "=" "0" ] ;
    expr       = term { ("+" | "-") term } ;
    term       = unary { ("*" | "/") unary | implicit } ;
    implicit   = unary              (* only right after a ")" token *)
    unary      = "-" unary | power ;
    power      = atom [ "^" integer ] ;
    atom       = number | letter | "(" expr ")" ;
    letter     = "a".."z"           (* x, y, z are variables, others params *)
    number     = digits [ "." digits ] | "." digits ;

Implicit multiplication is recognised only between a closing parenthesis and
a following "(" or letter, e.g. ``((x-y)(x+y)-a)``.  Multi-letter identifiers
are rejected.  Exponents are literal integers in 0..64.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VARIABLES = ("x", "y", "z")
MAX_EXPONENT = 64


class ExprError(Exception):
    """Base class for equation-language errors."""


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class EvalError(ExprError):
    """Unbound parameter or division by zero during evaluation."""


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Expr:
    """Base node. Immutable; safe to share across render workers."""

    def __add__(self, other):
        return Add(self, _as_expr(other))

    def __sub__(self, other):
        return Sub(self, _as_expr(other))

    def __mul__(self, other):
        return Mul(self, _as_expr(other))

    def __truediv__(self, other):
        return Div(self, _as_expr(other))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        return Pow(self, n)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str  # "x" | "y" | "z"


@dataclass(frozen=True)
class Param(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise ExprError(f"exponent must be an integer, got {self.exponent!r}")
        if not 0 <= self.exponent <= MAX_EXPONENT:
            raise ExprError(f"exponent out of range 0..{MAX_EXPONENT}: {self.exponent}")


def _as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return Const(float(v))
    raise TypeError(f"cannot coerce {type(v).__name__} to Expr")


# ---------------------------------------------------------------------------
# Tokenizer / parser

_OPS = set("+-*/^()=")


def _tokenize(text: str):
    """Yield (kind, value, offset) triples. kind in NUM, LETTER, or the op char."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            lexeme = text[i:j]
            if lexeme == ".":
                raise ParseError("lone '.' is not a number", i)
            tokens.append(("NUM", lexeme, i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            if j - i > 1:
                raise ParseError(
                    f"multi-letter identifier {text[i:j]!r}; "
                    "write explicit products of single letters", i)
            tokens.append(("LETTER", c, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] == "=":
            self.advance()
            tok = self.expect("NUM")
            if float(tok[1]) != 0.0:
                raise ParseError("only '=0' is accepted after an equation", tok[2])
        tok = self.peek()
        if tok[0] != "EOF":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind = self.peek()[0]
            if kind in ("*", "/"):
                op = self.advance()[0]
                rhs = self.unary()
                node = Mul(node, rhs) if op == "*" else Div(node, rhs)
            elif kind in ("(", "LETTER") and self.tokens[self.pos - 1][0] == ")":
                # implicit multiplication: ")(", ")x"
                node = Mul(node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "-":
            self.advance()
            return Neg(self.unary())
        if tok[0] == "+":
            # dangling operator like "x^2+*y" reports on the '*', not here
            raise ParseError("dangling '+'", tok[2])
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("NUM")
            if "." in tok[1]:
                raise ParseError(f"exponent must be an integer, got {tok[1]!r}", tok[2])
            n = int(tok[1])
            if n > MAX_EXPONENT:
                raise ParseError(f"exponent {n} exceeds maximum {MAX_EXPONENT}", tok[2])
            return Pow(base, n)
        return base

    def atom(self) -> Expr:
        tok = self.advance()
        kind, lexeme, offset = tok
        if kind == "NUM":
            return Const(float(lexeme))
        if kind == "LETTER":
            return Var(lexeme) if lexeme in VARIABLES else Param(lexeme)
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "EOF":
            raise ParseError("unexpected end of input", offset)
        raise ParseError(f"unexpected {lexeme!r}", offset)


def parse(text: str) -> Expr:
    """Parse an infix equation string into an AST.

    A trailing "=0" is accepted and stripped; the zero set is always
    understood as expr = 0.
    """
    if not text or not text.strip():
        raise ParseError("empty equation", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    # positional (no exponent) shortest repr that round-trips; 'e' would lex
    # as an identifier
    return np.format_float_positional(v, unique=True, trim="-")


def _level(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _LEVEL_ADD
    if isinstance(e, (Mul, Div)):
        return _LEVEL_MUL
    if isinstance(e, Neg):
        return _LEVEL_UNARY
    if isinstance(e, Pow):
        return _LEVEL_POW
    return _LEVEL_ATOM  # Const, Var, Param


def _print(e: Expr, min_level: int) -> str:
    lvl = _level(e)
    if isinstance(e, Const):
        s = _fmt_number(e.value)
    elif isinstance(e, (Var, Param)):
        s = e.name
    elif isinstance(e, Add):
        s = _print(e.left, _LEVEL_ADD) + "+" + _print(e.right, _LEVEL_MUL)
    elif isinstance(e, Sub):
        s = _print(e.left, _LEVEL_ADD) + "-" + _print(e.right, _LEVEL_MUL)
    elif isinstance(e, Mul):
        s = _print(e.left, _LEVEL_MUL) + "*" + _print(e.right, _LEVEL_UNARY)
    elif isinstance(e, Div):
        s = _print(e.left, _LEVEL_MUL) + "/" + _print(e.right, _LEVEL_UNARY)
    elif isinstance(e, Neg):
        s = "-" + _print(e.operand, _LEVEL_UNARY)
    elif isinstance(e, Pow):
        s = _print(e.base, _LEVEL_ATOM) + "^" + str(e.exponent)
    else:
        raise TypeError(f"unknown node {type(e).__name__}")
    if lvl < min_level:
        return "(" + s + ")"
    return s


def print_expr(e: Expr) -> str:
    """Render an AST back to equation text; parse(print_expr(e)) == e.

    Never emits "=0".  Negative constants are emitted with a leading minus,
    which re-parses as negation of the positive constant; the parser itself
    never produces negative Const nodes.
    """
    return _print(e, 0)


# ---------------------------------------------------------------------------
# Evaluation and differentiation

def free_params(e: Expr) -> set[str]:
    if isinstance(e, Param):
        return {e.name}
    if isinstance(e, (Const, Var)):
        return set()
    if isinstance(e, Neg):
        return free_params(e.operand)
    if isinstance(e, Pow):
        return free_params(e.base)
    return free_params(e.left) | free_params(e.right)


def evaluate(e: Expr, x: float, y: float, z: float, params: dict[str, float] | None = None) -> float:
    """Evaluate the tree at a point. Pure; raises EvalError on unbound
    parameters or division by zero."""
    params = params or {}
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return {"x": x, "y": y, "z": z}[e.name]
    if isinstance(e, Param):
        try:
            return params[e.name]
        except KeyError:
            raise EvalError(f"unbound parameter {e.name!r}") from None
    if isinstance(e, Add):
        return evaluate(e.left, x, y, z, params) + evaluate(e.right, x, y, z, params)
    if isinstance(e, Sub):
        return evaluate(e.left, x, y, z, params) - evaluate(e.right, x, y, z, params)
    if isinstance(e, Mul):
        return evaluate(e.left, x, y, z, params) * evaluate(e.right, x, y, z, params)
    if isinstance(e, Div):
        denom = evaluate(e.right, x, y, z, params)
        if denom == 0.0:
            raise EvalError("division by zero")
        return evaluate(e.left, x, y, z, params) / denom
    if isinstance(e, Neg):
        return -evaluate(e.operand, x, y, z, params)
    if isinstance(e, Pow):
        return evaluate(e.base, x, y, z, params) ** e.exponent
    raise TypeError(f"unknown node {type(e).__name__}")


def gradient(e: Expr, x: float, y: float, z: float, params: dict[str, float] | None = None) -> tuple[float, float, float]:
    """(df/dx, df/dy, df/dz) by forward-mode differentiation of the tree."""
    _, gx, gy, gz = _eval_dual(e, x, y, z, params or {})
    return (gx, gy, gz)


def _eval_dual(e: Expr, x, y, z, params):
    """Value plus all three partials in one pass."""
    if isinstance(e, Const):
        return (e.value, 0.0, 0.0, 0.0)
    if isinstance(e, Var):
        if e.name == "x":
            return (x, 1.0, 0.0, 0.0)
        if e.name == "y":
            return (y, 0.0, 1.0, 0.0)
        return (z, 0.0, 0.0, 1.0)
    if isinstance(e, Param):
        try:
            return (params[e.name], 0.0, 0.0, 0.0)
        except KeyError:
            raise EvalError(f"unbound parameter {e.name!r}") from None
    if isinstance(e, Neg):
        v, a, b, c = _eval_dual(e.operand, x, y, z, params)
        return (-v, -a, -b, -c)
    if isinstance(e, Pow):
        v, a, b, c = _eval_dual(e.base, x, y, z, params)
        n = e.exponent
        if n == 0:
            return (1.0, 0.0, 0.0, 0.0)
        k = n * v ** (n - 1)
        return (v ** n, k * a, k * b, k * c)
    lv, la, lb, lc = _eval_dual(e.left, x, y, z, params)
    rv, ra, rb, rc = _eval_dual(e.right, x, y, z, params)
    if isinstance(e, Add):
        return (lv + rv, la + ra, lb + rb, lc + rc)
    if isinstance(e, Sub):
        return (lv - rv, la - ra, lb - rb, lc - rc)
    if isinstance(e, Mul):
        return (lv * rv, la * rv + lv * ra, lb * rv + lv * rb, lc * rv + lv * rc)
    if isinstance(e, Div):
        if rv == 0.0:
            raise EvalError("division by zero")
        v = lv / rv
        return (v, (la - v * ra) / rv, (lb - v * rb) / rv, (lc - v * rc) / rv)
    raise TypeError(f"unknown node {type(e).__name__}")


def differentiate(e: Expr, var: str) -> Expr:
    """Symbolic partial derivative with respect to one of x, y, z.

    No simplification beyond dropping obvious zero/one factors; used to
    build shading-normal expressions for the renderer.
    """
    if var not in VARIABLES:
        raise ValueError(f"not a variable: {var!r}")
    d = lambda sub: differentiate(sub, var)
    if isinstance(e, (Const, Param)):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0 if e.name == var else 0.0)
    if isinstance(e, Neg):
        return Neg(d(e.operand))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return Const(0.0)
        db = d(e.base)
        if db == Const(0.0):
            return Const(0.0)
        if e.exponent == 1:
            return db
        return Mul(Mul(Const(float(e.exponent)), Pow(e.base, e.exponent - 1)), db)
    if isinstance(e, Add):
        return Add(d(e.left), d(e.right))
    if isinstance(e, Sub):
        return Sub(d(e.left), d(e.right))
    if isinstance(e, Mul):
        return Add(Mul(d(e.left), e.right), Mul(e.left, d(e.right)))
    if isinstance(e, Div):
        num = Sub(Mul(d(e.left), e.right), Mul(e.left, d(e.right)))
        return Div(num, Pow(e.right, 2))
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Degree

def degree(e: Expr) -> int | None:
    """Total degree max(i+j+k) over the structure of the tree, parameters
    treated as constants.  None when a division by a variable-dependent
    subexpression makes the input non-polynomial.  Structural (no
    cancellation detection): degree(f*g) = degree(f)+degree(g)."""
    if isinstance(e, (Const, Param)):
        return 0
    if isinstance(e, Var):
        return 1
    if isinstance(e, Neg):
        return degree(e.operand)
    if isinstance(e, Pow):
        dbase = degree(e.base)
        return None if dbase is None else dbase * e.exponent
    if isinstance(e, (Add, Sub)):
        dl, dr = degree(e.left), degree(e.right)
        return None if dl is None or dr is None else max(dl, dr)
    if isinstance(e, Mul):
        dl, dr = degree(e.left), degree(e.right)
        return None if dl is None or dr is None else dl + dr
    if isinstance(e, Div):
        dl, dr = degree(e.left), degree(e.right)
        if dl is None or dr is None or dr > 0:
            return None
        return dl
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Combinators

def product(exprs: list[Expr]) -> Expr:
    """Multiply chain: the zero set of the result is the union of the
    factors' zero sets."""
    if not exprs:
        raise ExprError("product of an empty list")
    node = exprs[0]
    for f in exprs[1:]:
        node = Mul(node, f)
    return node


def scale_sub(e: Expr, k: float) -> Expr:
    """Replace every variable v by v/k, dilating the zero set by factor k."""
    if k == 0:
        raise ExprError("scale factor must be nonzero")
    if isinstance(e, Var):
        return Div(Var(e.name), Const(float(k)))
    if isinstance(e, (Const, Param)):
        return e
    if isinstance(e, Neg):
        return Neg(scale_sub(e.operand, k))
    if isinstance(e, Pow):
        return Pow(scale_sub(e.base, k), e.exponent)
    return type(e)(scale_sub(e.left, k), scale_sub(e.right, k))


def intersect_sos(f: Expr, g: Expr, a_param_name: str = "a", epsilon_scale: float = 0.01) -> Expr:
    """f^2 + g^2 - eps*a: a thin shell around the intersection curve
    f = 0 and g = 0.  Any point with value <= 0 has f^2 <= eps*a and
    g^2 <= eps*a."""
    if epsilon_scale < 0:
        raise ExprError("epsilon_scale must be >= 0")
    return Sub(Add(Pow(f, 2), Pow(g, 2)), Mul(Const(float(epsilon_scale)), Param(a_param_name)))
