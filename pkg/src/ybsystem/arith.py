"""Exact scalars: rationals, prime fields, sparse polynomials, rational functions.

Rationals are plain :class:`fractions.Fraction` values.  Every field is
described by a small immutable descriptor (:data:`QQ`, :class:`PrimeField`,
:class:`FunctionField`) which knows how to coerce integers, parse entry
strings and print elements back in the same grammar.

Grammar accepted by :func:`parse_scalar` and emitted by :func:`format_scalar`::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ['-'] atom ['^' uint]
    atom   := int | ident | '(' expr ')'

A leading minus binds looser than ``^``: ``-a^2`` is ``-(a^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence, Union

Rational = Fraction


class ParseError(ValueError):
    pass


class UnboundVariableError(KeyError):
    pass


# ---------------------------------------------------------------------------
# prime fields

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FpElement:
    """Element of Z/pZ."""

    __slots__ = ("value", "p")

    def __init__(self, value, p: int):
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            value = value.numerator * pow(value.denominator, -1, p)
        self.value = int(value) % p
        self.p = p

    def _other(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return FpElement(other, self.p).value
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElement(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return FpElement(1, self.p) / FpElement(pow(self.value, -n, self.p), self.p)
        return FpElement(pow(self.value, n, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return False
        return self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# polynomials

Exponent = tuple


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class Polynomial:
    """Sparse multivariate polynomial over a commutative coefficient ring.

    ``terms`` maps exponent tuples (one slot per entry of ``variables``) to
    nonzero coefficients.  Coefficients are usually Fractions; F_p elements
    and rational functions also work for everything except content
    normalization.  Polynomials only combine with polynomials over the same
    variable tuple.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            if c:
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def constant(cls, value, variables: Sequence[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ValueError(f"{name!r} is not one of {variables}")
        return cls(variables, {exp: Fraction(1)})

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """Value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self):
        """Terms in decreasing graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def used_variables(self) -> set[str]:
        return {v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms)}

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a superset (or reordering) of the variable tuple."""
        variables = tuple(variables)
        missing = self.used_variables() - set(variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in {variables}")
        idx = [self.variables.index(v) if v in self.variables else None for v in variables]
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return Polynomial(variables, terms)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction, FpElement)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction, FpElement)):
                return Polynomial(self.variables, {e: c * other for e, c in self.terms.items()})
            return NotImplemented
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent on a polynomial")
        result = Polynomial.constant(Fraction(1), self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.variables, {e: v * c for e, v in self.terms.items()})

    def exact_div(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient ``self / other`` if ``other`` divides ``self``, else None."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        lexp, lc = other.leading_term()
        rem = self
        quot: dict = {}
        while rem.terms:
            rexp, rc = rem.leading_term()
            if any(a < b for a, b in zip(rexp, lexp)):
                return None
            qexp = tuple(a - b for a, b in zip(rexp, lexp))
            qc = rc / lc
            quot[qexp] = qc
            rem = rem - Polynomial(self.variables, {qexp: qc}) * other
        return Polynomial(self.variables, quot)

    def monomial_gcd(self) -> Exponent:
        if not self.terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self.terms))

    def shift_down(self, exp: Exponent) -> "Polynomial":
        return Polynomial(self.variables, {tuple(a - b for a, b in zip(e, exp)): c
                                           for e, c in self.terms.items()})

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        cs = [Fraction(c) for c in self.terms.values()]
        num = reduce(math.gcd, (c.numerator for c in cs))
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in cs))
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Integer coefficients, gcd 1, positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return Polynomial(self.variables, {e: v / c for e, v in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_term()[1]
        return Polynomial(self.variables, {e: v / lc for e, v in self.terms.items()})

    def evaluate(self, bindings: Mapping[str, object], one=None):
        """Evaluate with every used variable bound.  Unused ones may be omitted."""
        for v in self.used_variables():
            if v not in bindings:
                raise UnboundVariableError(v)
        total = Fraction(0) if one is None else one * 0
        for e, c in self.terms.items():
            term = c if one is None else one * c
            for v, k in zip(self.variables, e):
                if k:
                    term = term * bindings[v] ** k
            total = total + term
        return total

    def substitute(self, values: Mapping[str, object], target):
        """Evaluate by replacing variables with elements of another ring.

        ``target`` supplies the additive identity and the coercion of
        coefficients (``target(c)``).
        """
        total = target(0)
        for e, c in self.terms.items():
            term = target(c)
            for v, k in zip(self.variables, e):
                if k:
                    term = term * values[v] ** k
            total = total + term
        return total

    # -- comparison / printing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                return self.used_variables() == other.used_variables() and \
                    self.with_variables(sorted(self.used_variables())).terms == \
                    other.with_variables(sorted(other.used_variables())).terms
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, FpElement)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        used = sorted(self.used_variables())
        return hash(frozenset(self.with_variables(used).terms.items()))

    def to_expr(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            neg, cstr = _coefficient_text(c)
            if mono:
                if cstr == "1":
                    body = mono
                else:
                    body = f"{cstr}*{mono}"
            else:
                body = cstr
            if i == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"Polynomial({self.to_expr()!r}, {self.variables})"


def _coefficient_text(c):
    """(is_negative, text of |c|) for a coefficient."""
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        neg = c < 0
        a = abs(c)
        return neg, (str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}")
    if isinstance(c, FpElement):
        return False, str(c.value)
    return False, f"({format_scalar(c)})"


# ---------------------------------------------------------------------------
# rational functions

class RationalFunction:
    """Quotient of two polynomials over Q in a fixed variable tuple.

    Kept lightly normalized: exact polynomial quotients collapse, common
    monomial factors cancel, the denominator is primitive with positive
    leading coefficient.  No multivariate gcd is taken, so equality is
    decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, normalize: bool = True):
        if den is None:
            den = Polynomial.constant(Fraction(1), num.variables)
        if num.variables != den.variables:
            raise ValueError("numerator/denominator variable mismatch")
        if not den.terms:
            raise ZeroDivisionError("rational function with zero denominator")
        if normalize:
            num, den = _normalize_rf(num, den)
        self.num = num
        self.den = den

    @property
    def variables(self):
        return self.num.variables

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.den.is_constant():
            q = self.num.exact_div(self.den)
            if q is None:
                raise ValueError("rational function is not a polynomial")
            return q
        return self.num.scale(1 / self.den.constant_value())

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other.with_variables(self.variables))
        if isinstance(other, (int, Fraction)):
            return RationalFunction(Polynomial.constant(Fraction(other), self.variables), normalize=False)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num.terms or not o.num.terms:
            return RationalFunction(Polynomial(self.variables), normalize=False)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __bool__(self):
        return bool(self.num.terms)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return rf_equal(self, o)

    __hash__ = None  # equality is by cross-multiplication; no canonical form

    def evaluate(self, bindings: Mapping[str, object]):
        d = self.den.evaluate(bindings)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the given bindings")
        return self.num.evaluate(bindings) / d

    def to_expr(self) -> str:
        if self.den.is_constant():
            return self.as_polynomial().to_expr()
        num = self.num.to_expr()
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den.to_expr()})"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"RationalFunction({self.to_expr()!r})"


def _normalize_rf(num: Polynomial, den: Polynomial):
    one = Polynomial.constant(Fraction(1), num.variables)
    if not num.terms:
        return num, one
    if not den.is_constant():
        mg = tuple(min(a, b) for a, b in zip(num.monomial_gcd(), den.monomial_gcd()))
        if any(mg):
            num, den = num.shift_down(mg), den.shift_down(mg)
    if not den.is_constant():
        q = num.exact_div(den)
        if q is not None:
            return q, one
    c = den.content()
    if den.leading_term()[1] < 0:
        c = -c
    if c != 1:
        num = num.scale(1 / c)
        den = den.scale(1 / c)
    return num, den


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """a == b as rational functions, by cross-multiplication."""
    if a.variables != b.variables:
        raise ValueError(f"variable mismatch {a.variables} vs {b.variables}")
    if a.den == b.den:
        return a.num == b.num
    return (a.num * b.den - b.num * a.den).is_zero()


def poly_substitute(p: Polynomial, bindings: Mapping[str, object]) -> Fraction:
    """Exact value of ``p`` with every variable bound to a rational."""
    missing = [v for v in p.variables if v not in bindings]
    if missing:
        raise UnboundVariableError(missing[0])
    return Fraction(p.evaluate({k: Fraction(v) for k, v in bindings.items()}))


# ---------------------------------------------------------------------------
# field descriptors

Scalar = Union[Fraction, FpElement, RationalFunction]


@dataclass(frozen=True)
class RationalField:
    variables: tuple = ()

    def __call__(self, x) -> Fraction:
        if isinstance(x, FpElement):
            raise TypeError("cannot coerce an F_p element into Q")
        if isinstance(x, RationalFunction):
            return Fraction(x.as_polynomial().constant_value())
        if isinstance(x, Polynomial):
            return Fraction(x.constant_value())
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def contains(self, x) -> bool:
        return isinstance(x, (Fraction, int)) and not isinstance(x, bool)

    def __str__(self):
        return "QQ"


QQ = RationalField()


@dataclass(frozen=True)
class PrimeField:
    p: int
    variables: tuple = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise ValueError(f"element of F_{x.p} used in F_{self.p}")
            return x
        if isinstance(x, RationalFunction):
            x = x.as_polynomial().constant_value()
        if isinstance(x, Polynomial):
            x = x.constant_value()
        return FpElement(x if isinstance(x, Fraction) else int(x), self.p)

    @property
    def zero(self):
        return FpElement(0, self.p)

    @property
    def one(self):
        return FpElement(1, self.p)

    def contains(self, x) -> bool:
        return isinstance(x, FpElement) and x.p == self.p

    def elements(self):
        return [FpElement(i, self.p) for i in range(self.p)]

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class FunctionField:
    """Q(v1, ..., vk) with a fixed variable order."""

    variables: tuple

    def __init__(self, variables: Sequence[str]):
        object.__setattr__(self, "variables", tuple(variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables in {self.variables}")

    def __call__(self, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            if x.variables == self.variables:
                return x
            return RationalFunction(x.num.with_variables(self.variables),
                                    x.den.with_variables(self.variables))
        if isinstance(x, Polynomial):
            return RationalFunction(x.with_variables(self.variables))
        if isinstance(x, FpElement):
            raise TypeError("cannot coerce an F_p element into a function field")
        return RationalFunction(Polynomial.constant(Fraction(x), self.variables), normalize=False)

    def var(self, name: str) -> RationalFunction:
        return RationalFunction(Polynomial.variable(name, self.variables), normalize=False)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        return isinstance(x, RationalFunction) and x.variables == self.variables

    def __str__(self):
        return "QQ(" + ",".join(self.variables) + ")"


Field = Union[RationalField, PrimeField, FunctionField]


def field_of(x) -> Field:
    if isinstance(x, FpElement):
        return PrimeField(x.p)
    if isinstance(x, RationalFunction):
        return FunctionField(x.variables)
    return QQ


def field_inverse(a):
    """Multiplicative inverse in the element's own field."""
    if not a:
        raise ZeroDivisionError("zero has no inverse")
    if isinstance(a, RationalFunction):
        return a.inverse()
    if isinstance(a, FpElement):
        return FpElement(pow(a.value, -1, a.p), a.p)
    return 1 / Fraction(a)


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(\d+)|([^\W\d]\w*)|(\S))")


def _tokenize(expr: str):
    tokens = []
    pos = 0
    expr = expr.rstrip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {expr!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, expr, field, bindings):
        self.expr = expr
        self.tokens = _tokenize(expr)
        self.i = 0
        self.field = field
        self.bindings = bindings or {}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(f"{msg} in {self.expr!r}")

    def parse(self):
        if not self.tokens:
            self.fail("empty expression")
        value = self.expr_()
        if self.i != len(self.tokens):
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr_(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ZeroDivisionError(f"division by zero in {self.expr!r}")
                value = value / rhs
        return value

    def factor(self):
        neg = False
        if self.peek() == ("op", "-"):
            self.take()
            neg = True
        value = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, tok = self.take()
            if kind != "int":
                self.fail("exponent must be a nonnegative integer")
            value = value ** int(tok)
        return -value if neg else value

    def atom(self):
        kind, tok = self.take()
        if kind == "int":
            return self.field(int(tok))
        if kind == "id":
            if tok in self.bindings:
                b = self.bindings[tok]
                if isinstance(b, str):
                    b = parse_scalar(b, QQ if not isinstance(self.field, PrimeField) else self.field)
                return self.field(b)
            if tok in self.field.variables:
                return self.field.var(tok)
            self.fail(f"unknown identifier {tok!r}")
        if (kind, tok) == ("op", "("):
            value = self.expr_()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return value
        if kind is None:
            self.fail("unexpected end of expression")
        self.fail(f"unexpected token {tok!r}")


def parse_scalar(expr: str, field: Field = QQ, bindings: Mapping[str, object] | None = None):
    """Parse an entry expression into an element of ``field``.

    ``bindings`` substitutes identifiers by rationals (or expression strings)
    before evaluation; remaining identifiers must be variables of the field.
    """
    return _Parser(expr, field, bindings).parse()


def identifiers(expr: str) -> list[str]:
    """Identifiers in ``expr`` in order of first appearance."""
    seen = []
    for kind, tok in _tokenize(expr):
        if kind == "id" and tok not in seen:
            seen.append(tok)
    return seen


def format_scalar(x) -> str:
    """Serialize a scalar in the parse grammar."""
    if isinstance(x, (RationalFunction, Polynomial)):
        return x.to_expr()
    if isinstance(x, FpElement):
        return str(x.value)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
