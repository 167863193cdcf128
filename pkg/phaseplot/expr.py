"""Complex expressions in one variable z.

Text is parsed into an immutable tree (:class:`ExprAst`) which evaluates on
numpy arrays with extended-value semantics, prints back to canonical text,
and differentiates symbolically.
"""
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings
from pydantic import ValidationError

from . import special
from .exceptions import (
    ArityMismatch,
    DerivativeUnavailable,
    ExpressionSyntaxError,
    NonHolomorphicError,
    NonUnimodularC,
    UnknownIdentifier,
    ZeroOutsideDisk,
)
from .special import LatticeSpec
from .values import (
    INFINITY,
    UNDEFINED,
    ExtendedComplex,
    infinite_mask,
    settle,
    undefined_mask,
)

logger = logging.getLogger(__name__)

NON_HOLOMORPHIC = frozenset({'conj', 're', 'im', 'abs'})
_WP_NAME = re.compile(r'^(d*)wp$')


# -- arithmetic on the extended encoding ----------------------------------

def _add(a: np.ndarray, b: np.ndarray, sign: int = 1) -> np.ndarray:
    with np.errstate(all='ignore'):
        out = settle(a + sign * b)
    ia, ib = infinite_mask(a), infinite_mask(b)
    out[ia ^ ib] = INFINITY
    out[ia & ib] = UNDEFINED
    out[undefined_mask(a) | undefined_mask(b)] = UNDEFINED
    return out


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(all='ignore'):
        out = settle(a * b)
    ia, ib = infinite_mask(a), infinite_mask(b)
    out[(ia & (b != 0)) | (ib & (a != 0))] = INFINITY
    out[(ia & (b == 0)) | (ib & (a == 0))] = UNDEFINED
    out[undefined_mask(a) | undefined_mask(b)] = UNDEFINED
    return out


def _div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(all='ignore'):
        out = settle(a / b)
    ia, ib = infinite_mask(a), infinite_mask(b)
    za, zb = a == 0, b == 0
    out[zb & ~za] = INFINITY
    out[za & zb] = UNDEFINED
    out[ib & ~ia] = 0
    out[ia & ~ib] = INFINITY
    out[ia & ib] = UNDEFINED
    out[undefined_mask(a) | undefined_mask(b)] = UNDEFINED
    return out


def _integer_power(a: np.ndarray, n: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a if n >= 0 else 1 / a
    k = abs(n)
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _pow(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    first = complex(b.flat[0]) if b.size else 0j
    integral = (
        first.imag == 0 and np.isfinite(first.real) and first.real == round(first.real)
        and abs(first.real) <= 1024 and bool(np.all(b == first))
    )
    with np.errstate(all='ignore'):
        if integral:
            out = settle(_integer_power(a, int(first.real)))
        else:
            out = settle(np.exp(b * np.log(a + 0j)))
    ia = infinite_mask(a)
    za = a == 0
    positive, negative = b.real > 0, b.real < 0
    neutral = ~positive & ~negative
    out[za & positive] = 0
    out[za & negative] = INFINITY
    out[za & neutral] = UNDEFINED
    out[ia & positive] = INFINITY
    out[ia & negative] = 0
    out[ia & neutral] = UNDEFINED
    out[infinite_mask(b) | undefined_mask(a) | undefined_mask(b)] = UNDEFINED
    return out


def _lift(func: Callable, at_infinity: complex) -> Callable:
    def apply(w: np.ndarray) -> np.ndarray:
        with np.errstate(all='ignore'):
            out = settle(func(w))
        out[infinite_mask(w)] = at_infinity
        out[undefined_mask(w)] = UNDEFINED
        return out
    return apply


# log and sqrt add 0j so a signed zero imaginary part cannot flip the branch
FUNCTIONS = {
    'exp': _lift(np.exp, UNDEFINED),
    'log': _lift(lambda w: np.log(w + 0j), INFINITY),
    'sqrt': _lift(lambda w: np.sqrt(w + 0j), INFINITY),
    'sin': _lift(np.sin, UNDEFINED),
    'cos': _lift(np.cos, UNDEFINED),
    'tan': _lift(np.tan, UNDEFINED),
    'sinh': _lift(np.sinh, UNDEFINED),
    'cosh': _lift(np.cosh, UNDEFINED),
    'gamma': _lift(special.gamma, UNDEFINED),
    'dgamma': _lift(lambda w: special.gamma_derivative(w, 1), UNDEFINED),
    'ddgamma': _lift(lambda w: special.gamma_derivative(w, 2), UNDEFINED),
    'zeta': _lift(special.zeta, UNDEFINED),
    'dzeta': _lift(lambda w: special.zeta_derivative(w, 1), UNDEFINED),
    'ddzeta': _lift(lambda w: special.zeta_derivative(w, 2), UNDEFINED),
    'conj': _lift(np.conj, INFINITY),
    're': _lift(lambda w: w.real + 0j, UNDEFINED),
    'im': _lift(lambda w: w.imag + 0j, UNDEFINED),
    'abs': _lift(lambda w: np.abs(w) + 0j, INFINITY),
}

NEXT_DERIVATIVE = {
    'gamma': 'dgamma',
    'dgamma': 'ddgamma',
    'zeta': 'dzeta',
    'dzeta': 'ddzeta',
}


def is_function_name(name: str) -> bool:
    return name in FUNCTIONS or bool(_WP_NAME.match(name))


# -- tree -----------------------------------------------------------------

class Node:
    precedence = 5

    def children(self) -> tuple:
        return ()

    @cached_property
    def holomorphic(self) -> bool:
        return all(child.holomorphic for child in self.children())

    @cached_property
    def has_variable(self) -> bool:
        return any(child.has_variable for child in self.children())

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative(self) -> 'Node':
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError


def _format_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class Const(Node):
    """A non-negative real number or the imaginary unit."""

    value: complex

    def __post_init__(self):
        value = complex(self.value)
        if not (value == 1j or (value.imag == 0 and value.real >= 0 and np.isfinite(value.real))):
            raise ValueError(f"constant nodes hold non-negative reals or i, got {value}")
        object.__setattr__(self, 'value', value)

    def evaluate(self, z):
        return np.full(z.shape, self.value, dtype=complex)

    def derivative(self):
        return ZERO

    def to_text(self):
        if self.value == 1j:
            return 'i'
        return _format_real(self.value.real)


@dataclass(frozen=True)
class Var(Node):

    @cached_property
    def has_variable(self) -> bool:
        return True

    def evaluate(self, z):
        return z

    def derivative(self):
        return ONE

    def to_text(self):
        return 'z'


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    precedence = 3

    def children(self):
        return (self.operand,)

    def evaluate(self, z):
        w = self.operand.evaluate(z)
        out = settle(-w)
        out[infinite_mask(w)] = INFINITY
        return out

    def derivative(self):
        return negate(self.operand.derivative())

    def to_text(self):
        return '-' + _wrap(self.operand, self.operand.precedence < 3)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    @property
    def precedence(self):
        return {'+': 1, '-': 1, '*': 2, '/': 2, '^': 4}[self.op]

    def children(self):
        return (self.left, self.right)

    def evaluate(self, z):
        a, b = self.left.evaluate(z), self.right.evaluate(z)
        if self.op == '+':
            return _add(a, b)
        if self.op == '-':
            return _add(a, b, -1)
        if self.op == '*':
            return _mul(a, b)
        if self.op == '/':
            return _div(a, b)
        return _pow(a, b)

    def derivative(self):
        u, v = self.left, self.right
        du, dv = u.derivative(), v.derivative()
        if self.op == '+':
            return add(du, dv)
        if self.op == '-':
            return subtract(du, dv)
        if self.op == '*':
            return add(multiply(du, v), multiply(u, dv))
        if self.op == '/':
            if dv == ZERO:
                return divide(du, v)
            cross = divide(multiply(u, dv), power(v, Const(2)))
            if du == ZERO:
                return negate(cross)
            return subtract(divide(du, v), cross)
        if not v.has_variable:
            return multiply(multiply(v, power(u, _decrement(v))), du)
        # u^v = exp(v log u)
        inner = add(multiply(dv, Call('log', (u,))), divide(multiply(v, du), u))
        return multiply(self, inner)

    def to_text(self):
        p = self.precedence
        if self.op == '^':
            left = _wrap(self.left, self.left.precedence < 5)
            right = _wrap(self.right, self.right.precedence < 3)
            return f"{left}^{right}"
        left = _wrap(self.left, self.left.precedence < p)
        right = _wrap(self.right, self.right.precedence <= p)
        if p == 1:
            return f"{left} {self.op} {right}"
        return f"{left}{self.op}{right}"


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: Tuple[Node, ...]
    lattice: Optional[LatticeSpec] = field(default=None)

    @cached_property
    def holomorphic(self) -> bool:
        return self.name not in NON_HOLOMORPHIC and all(a.holomorphic for a in self.args)

    @property
    def wp_order(self) -> Optional[int]:
        match = _WP_NAME.match(self.name)
        return len(match.group(1)) if match else None

    def children(self):
        return self.args

    def evaluate(self, z):
        w = self.args[0].evaluate(z)
        order = self.wp_order
        if order is not None:
            return special.wp(w, self.lattice, order)
        return FUNCTIONS[self.name](w)

    def _outer_derivative(self) -> Node:
        u = self.args[0]
        name = self.name
        if self.wp_order is not None:
            return Call('d' + name, (u,), self.lattice)
        if name in NEXT_DERIVATIVE:
            return Call(NEXT_DERIVATIVE[name], (u,))
        if name == 'exp':
            return self
        if name == 'log':
            return divide(ONE, u)
        if name == 'sqrt':
            return divide(ONE, multiply(Const(2), self))
        if name == 'sin':
            return Call('cos', (u,))
        if name == 'cos':
            return negate(Call('sin', (u,)))
        if name == 'tan':
            return divide(ONE, power(Call('cos', (u,)), Const(2)))
        if name == 'sinh':
            return Call('cosh', (u,))
        if name == 'cosh':
            return Call('sinh', (u,))
        if name in NON_HOLOMORPHIC:
            raise NonHolomorphicError(f"{name} is not complex differentiable")
        raise DerivativeUnavailable(f"no derivative node beyond {name}", name=name)

    def derivative(self):
        return multiply(self._outer_derivative(), self.args[0].derivative())

    def to_text(self):
        parts = [arg.to_text() for arg in self.args]
        if self.lattice is not None:
            parts += [
                complex_literal(self.lattice.omega1).to_text(),
                complex_literal(self.lattice.omega2).to_text(),
                str(self.lattice.shells),
            ]
        return f"{self.name}({', '.join(parts)})"


ZERO = Const(0)
ONE = Const(1)
Z = Var()


def _wrap(node: Node, parenthesize: bool) -> str:
    text = node.to_text()
    return f"({text})" if parenthesize else text


def _decrement(exponent: Node) -> Node:
    if isinstance(exponent, Const) and exponent.value.imag == 0:
        return real_literal(exponent.value.real - 1)
    if isinstance(exponent, Neg) and isinstance(exponent.operand, Const) \
            and exponent.operand.value.imag == 0:
        return real_literal(-exponent.operand.value.real - 1)
    return subtract(exponent, ONE)


# -- builders with identity elision -----------------------------------------

def add(a: Node, b: Node) -> Node:
    if b == ZERO:
        return a
    if a == ZERO:
        return b
    return BinOp('+', a, b)


def subtract(a: Node, b: Node) -> Node:
    if b == ZERO:
        return a
    if a == ZERO:
        return negate(b)
    return BinOp('-', a, b)


def multiply(a: Node, b: Node) -> Node:
    if a == ZERO or b == ZERO:
        return ZERO
    if b == ONE:
        return a
    if a == ONE:
        return b
    return BinOp('*', a, b)


def divide(a: Node, b: Node) -> Node:
    if b == ONE:
        return a
    return BinOp('/', a, b)


def power(a: Node, b: Node) -> Node:
    if b == ONE:
        return a
    if b == ZERO:
        return ONE
    return BinOp('^', a, b)


def negate(a: Node) -> Node:
    if a == ZERO:
        return ZERO
    return Neg(a)


def real_literal(x: float) -> Node:
    x = float(x)
    return Neg(Const(-x)) if x < 0 else Const(x)


def complex_literal(w: complex) -> Node:
    """Literal tree of non-negative constants, i, negation, + and -."""
    w = complex(w)
    re_part, im_part = w.real, w.imag
    if im_part == 0:
        return real_literal(re_part)
    imaginary = Const(1j) if abs(im_part) == 1 else BinOp('*', Const(abs(im_part)), Const(1j))
    if re_part == 0:
        return imaginary if im_part > 0 else Neg(imaginary)
    return BinOp('+' if im_part > 0 else '-', real_literal(re_part), imaginary)


def sum_of(terms: Iterable[Node]) -> Node:
    result = None
    for term in terms:
        if result is None:
            result = term
        elif isinstance(term, Neg):
            result = BinOp('-', result, term.operand)
        else:
            result = BinOp('+', result, term)
    return ZERO if result is None else result


def polynomial(coefficients: Sequence[complex]) -> Node:
    """Sum of c_k z^k in ascending powers, skipping zero coefficients."""
    terms = []
    for k, c in enumerate(coefficients):
        c = complex(c)
        if c == 0:
            continue
        monomial = ONE if k == 0 else power(Z, Const(k))
        if k == 0:
            terms.append(complex_literal(c))
        elif c == 1:
            terms.append(monomial)
        elif c == -1:
            terms.append(Neg(monomial))
        elif c.imag == 0 and c.real < 0:
            terms.append(Neg(BinOp('*', Const(-c.real), monomial)))
        else:
            terms.append(multiply(complex_literal(c), monomial))
    return sum_of(terms)


# -- public surface ---------------------------------------------------------

@dataclass(frozen=True)
class ExprAst:
    root: Node

    @cached_property
    def holomorphic(self) -> bool:
        return self.root.holomorphic

    def __str__(self):
        return self.root.to_text()

    def __call__(self, z) -> np.ndarray:
        return evaluate_array(self, z)


def print_expr(ast: ExprAst) -> str:
    return ast.root.to_text()


def evaluate_array(ast: Union[ExprAst, Node], z) -> np.ndarray:
    root = ast.root if isinstance(ast, ExprAst) else ast
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = root.evaluate(z)
    if out is z:
        out = settle(z)
    return out


def evaluate(ast: ExprAst, z: complex) -> ExtendedComplex:
    return ExtendedComplex.from_raw(evaluate_array(ast, [z])[0])


def differentiate(ast: ExprAst) -> ExprAst:
    if not ast.holomorphic:
        raise NonHolomorphicError(f"cannot differentiate non-holomorphic expression {ast}")
    return ExprAst(ast.root.derivative())


def blaschke(zeros: Sequence[Tuple[complex, int]], c: complex = 1) -> ExprAst:
    """Finite Blaschke product c * prod(((z - a) / (1 - conj(a) z))^k)."""
    c = complex(c)
    if abs(abs(c) - 1) > 1e-12:
        raise NonUnimodularC(f"|c| must be 1, got {abs(c):.12g}", c=c)
    factors = []
    for location, multiplicity in zeros:
        location = complex(location)
        if abs(location) >= 1:
            raise ZeroOutsideDisk(f"zero {location} lies outside the unit disk", location=location)
        if multiplicity < 1:
            raise ZeroOutsideDisk(f"multiplicity must be positive, got {multiplicity}")
        if location == 0:
            factor = Z
        else:
            numerator = BinOp('-', Z, complex_literal(location))
            denominator = BinOp('-', ONE, BinOp('*', complex_literal(location.conjugate()), Z))
            factor = BinOp('/', numerator, denominator)
        factors.append(power(factor, Const(multiplicity)))
    product = None
    for factor in factors:
        product = factor if product is None else BinOp('*', product, factor)
    if product is None:
        product = ONE
    if c != 1:
        product = multiply(complex_literal(c), product)
    return ExprAst(product)


# -- parser -----------------------------------------------------------------

class Token(NamedTuple):
    kind: str
    text: str
    offset: int


_NUMBER = re.compile(rb'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')
_IDENT = re.compile(rb'[A-Za-z_][A-Za-z0-9_]*')
_SPACE = re.compile(rb'\s+')
_OPERATORS = b'+-*/^(),'


def tokenize(source: str) -> list:
    """Tokens with 1-based byte offsets; the end token sits one past the input."""
    data = source.encode('utf-8')
    tokens = []
    position = 0
    while position < len(data):
        space = _SPACE.match(data, position)
        if space:
            position = space.end()
            continue
        number = _NUMBER.match(data, position)
        if number:
            tokens.append(Token('number', number.group().decode(), position + 1))
            position = number.end()
            continue
        ident = _IDENT.match(data, position)
        if ident:
            tokens.append(Token('ident', ident.group().decode(), position + 1))
            position = ident.end()
            continue
        if data[position] in _OPERATORS:
            tokens.append(Token(chr(data[position]), chr(data[position]), position + 1))
            position += 1
            continue
        raise ExpressionSyntaxError(f"unexpected byte 0x{data[position]:02x}", position + 1)
    tokens.append(Token('end', '', len(data) + 1))
    return tokens


class _Parser:

    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            found = 'end of input' if self.current.kind == 'end' else f"'{self.current.text}'"
            raise ExpressionSyntaxError(f"expected '{kind}' but found {found}", self.current.offset)
        return self.advance()

    def parse(self) -> Node:
        node = self.expression()
        if self.current.kind != 'end':
            raise ExpressionSyntaxError(f"unexpected '{self.current.text}'", self.current.offset)
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.current.kind in ('+', '-'):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind in ('*', '/'):
            op = self.advance().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.current.kind == '-':
            self.advance()
            return Neg(self.factor())
        node = self.base()
        if self.current.kind == '^':
            self.advance()
            node = BinOp('^', node, self.factor())
        return node

    def base(self) -> Node:
        token = self.current
        if token.kind == 'number':
            self.advance()
            value = float(token.text)
            if not np.isfinite(value):
                raise ExpressionSyntaxError(f"number {token.text} is out of range", token.offset)
            return Const(value)
        if token.kind == '(':
            self.advance()
            node = self.expression()
            self.expect(')')
            return node
        if token.kind == 'ident':
            self.advance()
            if token.text == 'z':
                return Z
            if token.text == 'i':
                return Const(1j)
            if not is_function_name(token.text):
                raise UnknownIdentifier(f"unknown identifier '{token.text}'", token.offset)
            return self.call(token)
        found = 'end of input' if token.kind == 'end' else f"'{token.text}'"
        raise ExpressionSyntaxError(f"unexpected {found}", token.offset)

    def call(self, name: Token) -> Node:
        self.expect('(')
        args = [self.expression()]
        while self.current.kind == ',':
            self.advance()
            args.append(self.expression())
        self.expect(')')
        if _WP_NAME.match(name.text):
            if len(args) not in (3, 4):
                raise ArityMismatch(
                    f"{name.text} takes 3 or 4 arguments, got {len(args)}", name.offset)
            return Call(name.text, (args[0],), self.lattice(args[1:], name.offset))
        if len(args) != 1:
            raise ArityMismatch(f"{name.text} takes 1 argument, got {len(args)}", name.offset)
        return Call(name.text, (args[0],))

    def lattice(self, args: list, offset: int) -> LatticeSpec:
        values = []
        for arg in args:
            if arg.has_variable:
                raise ExpressionSyntaxError("lattice arguments must be constant", offset)
            value = complex(evaluate_array(arg, [0])[0])
            if not np.isfinite(value.real) or not np.isfinite(value.imag):
                raise ExpressionSyntaxError("lattice arguments must be finite", offset)
            values.append(value)
        shells = settings.PHASEPLOT_WP_SHELLS
        if len(values) == 3:
            if values[2].imag != 0 or values[2].real != round(values[2].real):
                raise ExpressionSyntaxError("lattice shells must be an integer", offset)
            shells = int(values[2].real)
        try:
            return LatticeSpec(omega1=values[0], omega2=values[1], shells=shells)
        except ValidationError as exc:
            raise ExpressionSyntaxError(
                f"invalid lattice ({exc.errors()[0]['msg']})", offset) from exc


def parse(source: str) -> ExprAst:
    ast = ExprAst(_Parser(source).parse())
    logger.debug(f"parsed {source!r} as {ast}")
    return ast
