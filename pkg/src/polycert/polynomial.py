"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a finite map from exponent tuples to nonzero ``Fraction``
coefficients.  All arithmetic is exact; floating-point views are produced
only at evaluation time.  Values are immutable after construction, so they
may be shared freely between threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

NEG_INFINITY = float("-inf")


class PolynomialError(ValueError):
    """Raised for malformed polynomial data or out-of-range arguments."""


class ParseError(PolynomialError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    raise PolynomialError(f"cannot use {value!r} as an exact coefficient")


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples of length ``num_vars`` to nonzero
    coefficients; the empty map is the zero polynomial.
    """

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Mapping[Exponent, Scalar] | None = None):
        if num_vars < 1:
            raise PolynomialError("a polynomial needs at least one variable")
        cleaned: dict[Exponent, Fraction] = {}
        for expo, coeff in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != num_vars:
                raise PolynomialError(
                    f"exponent {expo} has length {len(expo)}, expected {num_vars}"
                )
            if any(e < 0 for e in expo):
                raise PolynomialError(f"negative exponent in {expo}")
            c = _as_fraction(coeff)
            if c != 0:
                acc = cleaned.get(expo)
                cleaned[expo] = c if acc is None else acc + c
                if cleaned[expo] == 0:
                    del cleaned[expo]
        self.num_vars = num_vars
        self._terms = cleaned

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Polynomial":
        """The monomial x_index (1-based index)."""
        if not 1 <= index <= num_vars:
            raise PolynomialError(f"variable index {index} out of range 1..{num_vars}")
        expo = tuple(1 if i == index - 1 else 0 for i in range(num_vars))
        return cls(num_vars, {expo: 1})

    @classmethod
    def monomial(cls, num_vars: int, expo: Exponent, coeff: Scalar = 1) -> "Polynomial":
        return cls(num_vars, {tuple(expo): coeff})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def coefficient(self, expo: Exponent) -> Fraction:
        return self._terms.get(tuple(expo), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def degree(self) -> float:
        """Total degree; the zero polynomial has degree -inf."""
        if not self._terms:
            return NEG_INFINITY
        return max(sum(e) for e in self._terms)

    def support(self) -> frozenset[Exponent]:
        return frozenset(self._terms)

    # -- arithmetic --------------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.num_vars != other.num_vars:
            raise PolynomialError(
                f"mixed ambient dimensions {self.num_vars} and {other.num_vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        acc = dict(self._terms)
        for expo, coeff in other._terms.items():
            acc[expo] = acc.get(expo, Fraction(0)) + coeff
        return Polynomial(self.num_vars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return Polynomial.zero(self.num_vars)
            return Polynomial(self.num_vars, {e: k * c for e, k in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        acc: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                acc[expo] = acc.get(expo, Fraction(0)) + c1 * c2
        return Polynomial(self.num_vars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self._terms.items())))

    # -- evaluation and calculus -------------------------------------------

    def evaluate(self, point: Sequence[float]) -> float:
        """Floating-point value at ``point``."""
        if len(point) != self.num_vars:
            raise PolynomialError(
                f"point has length {len(point)}, expected {self.num_vars}"
            )
        total = 0.0
        for expo, coeff in self._terms.items():
            term = float(coeff)
            for x, e in zip(point, expo):
                if e:
                    term *= float(x) ** e
            total += term
        return total

    def evaluate_exact(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.num_vars:
            raise PolynomialError(
                f"point has length {len(point)}, expected {self.num_vars}"
            )
        total = Fraction(0)
        for expo, coeff in self._terms.items():
            term = coeff
            for x, e in zip(point, expo):
                if e:
                    term *= _as_fraction(x) ** e
            total += term
        return total

    def differentiate(self, index: int) -> "Polynomial":
        """Exact partial derivative with respect to x_index (1-based)."""
        if not 1 <= index <= self.num_vars:
            raise PolynomialError(
                f"variable index {index} out of range 1..{self.num_vars}"
            )
        i = index - 1
        acc: dict[Exponent, Fraction] = {}
        for expo, coeff in self._terms.items():
            if expo[i] == 0:
                continue
            new = list(expo)
            new[i] -= 1
            acc[tuple(new)] = coeff * expo[i]
        return Polynomial(self.num_vars, acc)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.differentiate(i) for i in range(1, self.num_vars + 1))

    def hessian(self) -> tuple[tuple["Polynomial", ...], ...]:
        """Exact Hessian; mixed partials are computed once and mirrored."""
        n = self.num_vars
        grad = self.gradient()
        rows: list[list[Polynomial]] = [[None] * n for _ in range(n)]  # type: ignore
        for i in range(n):
            for j in range(i, n):
                entry = grad[i].differentiate(j + 1)
                rows[i][j] = entry
                rows[j][i] = entry
        return tuple(tuple(r) for r in rows)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.num_vars}, {self._terms!r})"


class PolynomialSystem:
    """A nonempty tuple of polynomials sharing one ambient dimension."""

    __slots__ = ("num_vars", "components")

    def __init__(self, components: Iterable[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise PolynomialError("a polynomial system needs at least one component")
        n = comps[0].num_vars
        for p in comps:
            if p.num_vars != n:
                raise PolynomialError("system components disagree on ambient dimension")
        self.num_vars = n
        self.components = comps

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        if not isinstance(other, PolynomialSystem):
            return NotImplemented
        return self.components == other.components

    def degree(self) -> float:
        return max(p.degree() for p in self.components)

    def __repr__(self):
        return f"PolynomialSystem({list(self.components)!r})"


# -- free functions mirroring the operation surface ------------------------


def differentiate(f: Polynomial, index: int) -> Polynomial:
    return f.differentiate(index)


def evaluate(f: Polynomial, point: Sequence[float]) -> float:
    return f.evaluate(point)


def support(f: Polynomial) -> frozenset[Exponent]:
    return f.support()


def graded_lex_key(expo: Exponent):
    """Sort key for the canonical graded lexicographic term order.

    Degree blocks come first; within a block x_1-heavy monomials lead,
    matching the layout (1, x1, ..., xn, x1^2, x1*x2, ...).
    """
    return (sum(expo), tuple(-e for e in expo))


# -- text grammar -----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+/\d+|\d+\.\d+|\.\d+|\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup == "number":
            tokens.append(("number", m.group("number"), m.start("number")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        elif m.group("op"):
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse the term grammar: terms joined by +/-, factors joined by '*'.

    A factor is a rational number (``p/q`` or decimal) or ``name^k`` with
    integer k >= 0 (k omitted means 1).  Whitespace is insignificant.
    """
    variables = list(variables)
    if not variables:
        raise PolynomialError("need at least one variable name")
    if len(set(variables)) != len(variables):
        raise PolynomialError("variable names must be distinct")
    index = {name: i for i, name in enumerate(variables)}
    n = len(variables)

    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text", 0)

    terms: dict[Exponent, Fraction] = {}
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    while pos < len(tokens):
        sign = Fraction(1)
        kind, val, at = peek()
        while kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            pos += 1
            kind, val, at = peek()
        if kind is None:
            raise ParseError("dangling sign", at)

        coeff = sign
        expo = [0] * n
        expect_factor = True
        while expect_factor:
            kind, val, at = peek()
            if kind == "number":
                coeff *= Fraction(val)
                pos += 1
            elif kind == "name":
                if val not in index:
                    raise ParseError(f"unknown variable {val!r}", at)
                power = 1
                pos += 1
                kind2, val2, at2 = peek()
                if kind2 == "op" and val2 == "^":
                    pos += 1
                    kind3, val3, at3 = peek()
                    if kind3 == "op" and val3 == "-":
                        raise ParseError("negative exponent", at3)
                    if kind3 != "number" or not val3.isdigit():
                        raise ParseError("expected integer exponent after '^'", at3)
                    power = int(val3)
                    pos += 1
                expo[index[val]] += power
            else:
                raise ParseError("expected a coefficient or variable", at)
            kind, val, at = peek()
            if kind == "op" and val == "*":
                pos += 1
                expect_factor = True
            else:
                expect_factor = False

        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + coeff

        kind, val, at = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            continue
        raise ParseError(f"unexpected token {val!r}", at)

    return Polynomial(n, terms)


def _format_coeff(c: Fraction) -> str:
    return str(c) if c.denominator != 1 else str(c.numerator)


def format_polynomial(f: Polynomial, variables: Sequence[str] | None = None) -> str:
    """Canonical text form: descending graded lex, explicit '*' and '^'."""
    if variables is None:
        variables = [f"x{i}" for i in range(1, f.num_vars + 1)]
    if len(variables) != f.num_vars:
        raise PolynomialError("variable name list has the wrong length")
    if f.is_zero():
        return "0"
    # descending graded lex with x1 heaviest, so x1^2 prints before x2^2
    ordered = sorted(f._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
    pieces: list[str] = []
    for k, (expo, coeff) in enumerate(ordered):
        mag = abs(coeff)
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(variables, expo)
            if e > 0
        ]
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if k == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
