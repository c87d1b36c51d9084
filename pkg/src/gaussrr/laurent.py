"""Sparse Laurent polynomials in n variables with complex coefficients.

A polynomial is an immutable map from integer exponent vectors (negative
entries allowed) to complex coefficients. Terms are kept in graded
lexicographic order so formatting and hashing are deterministic.

    >>> f = parse("1 + x*y^-2", 2)
    >>> f.terms
    {(0, 0): (1+0j), (1, -2): (1+0j)}
    >>> str(log_derivative(parse("1+x+y", 2), 1))
    'x'
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Sequence

from . import _intmath

Exponent = tuple[int, ...]

PRUNE_RELATIVE = 1e-14
UNDERFLOW = 1e-300
NAMED_VARS = "xyzw"


class ParseError(ValueError):
    """Syntax or vocabulary error in a polynomial string."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


def _grlex_key(a: Exponent):
    return (sum(a), tuple(-e for e in a))


class LaurentPolynomial:
    __slots__ = ("dimension", "_terms", "_hash")

    def __init__(self, dimension: int, terms: Mapping[Sequence[int], complex] | Iterable = ()):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, complex] = {}
        for a, c in items:
            a = tuple(int(e) for e in a)
            if len(a) != dimension:
                raise ValueError(f"exponent {a} does not have length {dimension}")
            acc[a] = acc.get(a, 0j) + complex(c)
        scale = max((abs(c) for c in acc.values()), default=0.0)
        cut = PRUNE_RELATIVE * scale
        kept = {a: c for a, c in acc.items() if abs(c) > cut and c != 0}
        self.dimension = dimension
        self._terms = dict(sorted(kept.items(), key=lambda kv: _grlex_key(kv[0])))
        self._hash = None

    @classmethod
    def constant(cls, dimension: int, c: complex) -> "LaurentPolynomial":
        return cls(dimension, {(0,) * dimension: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c: complex = 1.0) -> "LaurentPolynomial":
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def variable(cls, dimension: int, axis: int) -> "LaurentPolynomial":
        return cls.monomial(tuple(int(i == axis) for i in range(dimension)))

    @property
    def terms(self) -> dict[Exponent, complex]:
        return dict(self._terms)

    @property
    def support(self) -> list[Exponent]:
        return list(self._terms)

    @property
    def coefficients(self) -> list[complex]:
        return list(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> int:
        """Total degree (max exponent sum); only meaningful for ordinary polynomials."""
        return max((sum(a) for a in self._terms), default=0)

    def is_polynomial(self) -> bool:
        return all(min(a) >= 0 for a in self._terms)

    def coefficient_norm(self) -> float:
        return sum(abs(c) for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dimension, tuple(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.dimension != self.dimension:
                raise ValueError("dimension mismatch")
            return other
        return LaurentPolynomial.constant(self.dimension, complex(other))

    def __add__(self, other):
        other = self._coerce(other)
        return LaurentPolynomial(self.dimension, list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.dimension, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = []
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                out.append((tuple(x + y for x, y in zip(a, b)), c * d))
        return LaurentPolynomial(self.dimension, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            ((a, c),) = self._terms.items()
            return LaurentPolynomial.monomial(tuple(k * e for e in a), c**k)
        out = LaurentPolynomial.constant(self.dimension, 1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial z^exponent."""
        return LaurentPolynomial(
            self.dimension, {tuple(x + y for x, y in zip(a, exponent)): c for a, c in self._terms.items()}
        )

    def __call__(self, point):
        return evaluate(self, point)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"LaurentPolynomial({self.dimension}, {format_polynomial(self)!r})"


# ---------------------------------------------------------------------------
# formatting


def _format_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _format_coefficient(c: complex) -> tuple[str, str]:
    """Return (sign, magnitude text); magnitude text is '' for a unit coefficient."""
    if c.imag == 0:
        sign = "-" if c.real < 0 else "+"
        mag = abs(c.real)
        return sign, ("" if mag == 1 else _format_real(mag))
    if c.real == 0:
        sign = "-" if c.imag < 0 else "+"
        return sign, _format_real(abs(c.imag)) + "i"
    im = c.imag
    body = f"({_format_real(c.real)}{'-' if im < 0 else '+'}{_format_real(abs(im))}i)"
    return "+", body


def variable_names(dimension: int) -> list[str]:
    if dimension == 1:
        return ["x"]
    if dimension <= len(NAMED_VARS):
        return list(NAMED_VARS[:dimension])
    return [f"x{i + 1}" for i in range(dimension)]


def format_polynomial(f: LaurentPolynomial) -> str:
    if f.is_zero():
        return "0"
    names = variable_names(f.dimension)
    pieces = []
    for a, c in f._terms.items():
        sign, coeff = _format_coefficient(c)
        mono = "*".join(
            (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(a) if e != 0
        )
        if coeff and mono:
            body = f"{coeff}*{mono}"
        elif mono:
            body = mono
        else:
            body = coeff or "1"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<ivar>x\d+)
  | (?P<var>[A-Za-z])
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.text = text
        self.n = dimension
        self.tokens = _tokenize(text)
        self.i = 0
        self.letters: set[str] = set()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> LaurentPolynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        out = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", pos)
        return out

    def expr(self) -> LaurentPolynomial:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self, tok) -> bool:
        kind, text, _ = tok
        return kind in ("num", "var", "ivar") or text == "("

    def term(self) -> LaurentPolynomial:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[1] == "*" and tok[0] == "op":
                self.take()
                acc = acc * self.factor()
            elif self._starts_factor(tok):
                acc = acc * self.factor()
            else:
                return acc

    def _axis(self, kind: str, text: str, pos: int) -> int:
        if kind == "ivar":
            axis = int(text[1:]) - 1
            if axis < 0:
                raise ParseError(f"unknown variable {text!r}", pos)
        else:
            if text not in NAMED_VARS:
                raise ParseError(f"unknown variable {text!r}", pos)
            if self.n == 1:
                self.letters.add(text)
                if len(self.letters) > 1:
                    raise ParseError(
                        f"dimension mismatch: variable {text!r} in a 1-variable polynomial", pos
                    )
                return 0
            axis = NAMED_VARS.index(text)
        if axis >= self.n:
            raise ParseError(f"dimension mismatch: variable {text!r} needs n > {self.n}", pos)
        return axis

    def _int_exponent(self) -> int:
        kind, text, pos = self.peek()
        paren = False
        if text == "(":
            self.take()
            paren = True
            kind, text, pos = self.peek()
        sign = 1
        if kind == "op" and text in "+-":
            self.take()
            sign = -1 if text == "-" else 1
            kind, text, pos = self.peek()
        if kind != "num" or not text.isdigit():
            raise ParseError("expected integer exponent", pos)
        self.take()
        if paren:
            self.expect(")")
        return sign * int(text)

    def factor(self) -> LaurentPolynomial:
        kind, text, pos = self.take()
        if kind == "num":
            val = complex(0, float(text[:-1])) if text.endswith("i") else complex(float(text))
            return LaurentPolynomial.constant(self.n, val)
        if kind in ("var", "ivar"):
            axis = self._axis(kind, text, pos)
            e = 1
            if self.peek()[1] == "^":
                self.take()
                e = self._int_exponent()
            return LaurentPolynomial.monomial(tuple(e if i == axis else 0 for i in range(self.n)))
        if text == "(":
            inner = self.expr()
            self.expect(")")
            if self.peek()[1] == "^":
                self.take()
                e = self._int_exponent()
                if e < 0 and not inner.is_monomial():
                    raise ParseError("negative power of a non-monomial", pos)
                inner = inner**e
            return inner
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", pos)


def parse(text: str, dimension: int) -> LaurentPolynomial:
    """Parse a polynomial string in ``dimension`` variables."""
    if dimension < 1:
        raise ValueError("dimension must be positive")
    return _Parser(text, dimension).parse()


# ---------------------------------------------------------------------------
# calculus


def evaluate(f: LaurentPolynomial, point: Sequence[complex]) -> complex:
    p = [complex(x) for x in point]
    if len(p) != f.dimension:
        raise ValueError(f"point has length {len(p)}, expected {f.dimension}")
    for x in p:
        if abs(x) < UNDERFLOW:
            raise ValueError("torus point has a coordinate too close to zero")
    total = 0j
    for a, c in f._terms.items():
        term = c
        for x, e in zip(p, a):
            if e:
                term *= x**e
        total += term
    return total


def log_derivative(f: LaurentPolynomial, axis: int) -> LaurentPolynomial:
    """z_i * df/dz_i with a 1-based axis index."""
    if not 1 <= axis <= f.dimension:
        raise ValueError(f"axis must be in 1..{f.dimension}")
    i = axis - 1
    return LaurentPolynomial(f.dimension, {a: a[i] * c for a, c in f._terms.items()})


def min_exponents(f: LaurentPolynomial) -> Exponent:
    return tuple(min(a[i] for a in f._terms) for i in range(f.dimension))


def clear_denominators(f: LaurentPolynomial) -> tuple[LaurentPolynomial, Exponent]:
    """Return (g, shift) with g = z^shift * f an ordinary polynomial touching every coordinate hyperplane."""
    if f.is_zero():
        raise ValueError("cannot clear denominators of the zero polynomial")
    shift = tuple(-m for m in min_exponents(f))
    return f.shift(shift), shift


def substitute(f: LaurentPolynomial, matrix: Sequence[Sequence[int]], translation: Sequence[complex] | None = None) -> LaurentPolynomial:
    """Compose f with the torus automorphism z_i -> c_i * z^(column i of M).

    The exponent a becomes M @ a and the coefficient picks up prod c_i^a_i.
    """
    n = f.dimension
    m = [[int(x) for x in row] for row in matrix]
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"matrix must be {n}x{n}")
    if abs(_intmath.det(m)) != 1:
        raise ValueError("substitution matrix is not unimodular")
    c = [1.0 + 0j] * n if translation is None else [complex(x) for x in translation]
    if len(c) != n:
        raise ValueError("translation has wrong length")
    out = []
    for a, coeff in f._terms.items():
        scale = coeff
        for ci, e in zip(c, a):
            if e:
                scale *= ci**e
        out.append((_intmath.matvec(m, a), scale))
    return LaurentPolynomial(n, out)


def allclose(f: LaurentPolynomial, g: LaurentPolynomial, tol: float = 1e-9) -> bool:
    if f.dimension != g.dimension:
        return False
    keys = set(f._terms) | set(g._terms)
    scale = max([1.0] + [abs(c) for c in f._terms.values()])
    return all(abs(f._terms.get(k, 0) - g._terms.get(k, 0)) <= tol * scale for k in keys)


def newton_support(f: LaurentPolynomial) -> list[Exponent]:
    return f.support


def restrict(f: LaurentPolynomial, exponents: Iterable[Sequence[int]]) -> LaurentPolynomial:
    """Keep only the terms whose exponents lie in ``exponents``."""
    keep = {tuple(e) for e in exponents}
    return LaurentPolynomial(f.dimension, {a: c for a, c in f._terms.items() if a in keep})


def is_finite(f: LaurentPolynomial) -> bool:
    return all(math.isfinite(c.real) and math.isfinite(c.imag) for c in f._terms.values())
