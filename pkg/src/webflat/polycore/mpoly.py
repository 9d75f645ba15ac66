"""Sparse multivariate polynomials over Q(i).

Terms are kept in a dict ``exponent tuple -> GaussRat`` with no zero
coefficients.  Printing uses graded-lex order over the declared variable list
and is canonical: ``parse_poly(str(f), f.variables) == f`` and printing the
parsed polynomial reproduces the text byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .gaussrat import ONE, ZERO, GaussRat, format_gauss


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class UndeclaredVariable(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Exact division left a nonzero remainder."""


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[tuple[int, ...], GaussRat] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match variables {self.variables}")
                c = GaussRat.coerce(c)
                if c:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, variables: tuple[str, ...], terms: dict) -> "MPoly":
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._hash = None
        return obj

    # ----- constructors -----
    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "MPoly":
        n = len(variables)
        return cls(variables, {(0,) * n: c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if name not in variables:
            raise UndeclaredVariable(name)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._from_clean(variables, {exp: ONE})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MPoly":
        return cls._from_clean(tuple(variables), {})

    # ----- basic queries -----
    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> GaussRat:
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str) -> int:
        if not self.terms:
            return -1
        k = self._index(var)
        return max(e[k] for e in self.terms)

    def min_degree(self, var: str) -> int:
        k = self._index(var)
        return min(e[k] for e in self.terms) if self.terms else 0

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def free_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for k, ek in enumerate(e):
                if ek:
                    used[k] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UndeclaredVariable(var) from None

    def leading_term(self) -> tuple[tuple[int, ...], GaussRat]:
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def leading_coefficient(self) -> GaussRat:
        return self.leading_term()[1]

    def sorted_terms(self) -> list[tuple[tuple[int, ...], GaussRat]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def height(self) -> int:
        return max((c.height for c in self.terms.values()), default=0)

    # ----- variable management -----
    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = []
        for v in variables:
            pos.append(self.variables.index(v) if v in self.variables else None)
        for k, v in enumerate(self.variables):
            if v not in variables and any(e[k] for e in self.terms):
                raise UndeclaredVariable(f"variable {v} is used but absent from {variables}")
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[p] if p is not None else 0 for p in pos)] = c
        return MPoly._from_clean(variables, terms)

    def _unify(self, other: "MPoly") -> tuple["MPoly", "MPoly"]:
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(merged), other.with_variables(merged)

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        return MPoly.const(other, self.variables)

    # ----- arithmetic -----
    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction, GaussRat)):
                return self.is_constant and self.constant_value() == other
            return NotImplemented
        a, b = self._unify(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self) -> "MPoly":
        return MPoly._from_clean(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        a, b = self._unify(self._lift(other))
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MPoly._from_clean(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MPoly":
        return self._lift(other) - self

    def scale(self, c) -> "MPoly":
        c = GaussRat.coerce(c)
        if not c:
            return MPoly.zero(self.variables)
        return MPoly._from_clean(self.variables, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            return self.scale(other)
        a, b = self._unify(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms: dict[tuple, GaussRat] = {}
        bitems = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bitems:
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                s = terms.get(e)
                terms[e] = prod if s is None else s + prod
        return MPoly._from_clean(a.variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, exp: tuple[int, ...], c=ONE) -> "MPoly":
        c = GaussRat.coerce(c)
        return MPoly._from_clean(
            self.variables,
            {tuple(x + y for x, y in zip(e, exp)): v * c for e, v in self.terms.items()},
        )

    def divmod_exact(self, divisor: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Multivariate division by ``divisor`` under graded-lex order.

        Returns (quotient, remainder); the remainder is zero exactly when the
        division is exact.
        """
        f, g = self._unify(divisor)
        if g.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = g.leading_term()
        inv = lt_c.inverse()
        rem = dict(f.terms)
        quot: dict[tuple, GaussRat] = {}
        remainder: dict[tuple, GaussRat] = {}
        gitems = list(g.terms.items())
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            if all(x >= y for x, y in zip(e, lt_e)):
                qe = tuple(x - y for x, y in zip(e, lt_e))
                qc = c * inv
                quot[qe] = qc
                for ge, gc in gitems:
                    te = tuple(x + y for x, y in zip(qe, ge))
                    s = rem.get(te)
                    v = -(qc * gc) if s is None else s - qc * gc
                    if v:
                        rem[te] = v
                    else:
                        rem.pop(te, None)
            else:
                remainder[e] = c
                del rem[e]
        return MPoly._from_clean(f.variables, quot), MPoly._from_clean(f.variables, remainder)

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        if not isinstance(divisor, MPoly):
            c = GaussRat.coerce(divisor)
            return self.scale(c.inverse())
        if divisor.is_constant:
            return self.scale(divisor.constant_value().inverse())
        q, r = self.divmod_exact(divisor)
        if r:
            raise NotDivisible(f"remainder nonzero dividing by {divisor}: {r}")
        return q

    def divides(self, other: "MPoly") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        if self.is_zero:
            return other.is_zero
        return other.divmod_exact(self)[1].is_zero

    # ----- calculus and substitution -----
    def diff(self, var: str, order: int = 1) -> "MPoly":
        k = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[k] < order:
                continue
            m = 1
            for j in range(order):
                m *= e[k] - j
            ne = e[:k] + (e[k] - order,) + e[k + 1:]
            terms[ne] = c * m
        return MPoly._from_clean(self.variables, terms)

    def coeffs_in(self, var: str) -> dict[int, "MPoly"]:
        """Split into ``{k: coefficient of var^k}``; coefficients keep all variables."""
        k = self._index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[k], {})[e[:k] + (0,) + e[k + 1:]] = c
        return {d: MPoly._from_clean(self.variables, t) for d, t in out.items()}

    def coeff_list(self, var: str) -> list["MPoly"]:
        """Dense coefficient list in ``var``, index = degree."""
        parts = self.coeffs_in(var)
        n = max(parts) if parts else -1
        zero = MPoly.zero(self.variables)
        return [parts.get(d, zero) for d in range(n + 1)]

    @classmethod
    def from_coeff_list(cls, coeffs: Sequence["MPoly"], var: str, variables: Sequence[str]) -> "MPoly":
        x = cls.var(var, variables)
        result = cls.zero(variables)
        for c in reversed(coeffs):
            result = result * x + c
        return result

    def substitute(self, var: str, value) -> "MPoly":
        """Replace ``var`` by a polynomial (or scalar) by exact expansion."""
        if not isinstance(value, MPoly):
            return self.substitute_values({var: value})
        base, val = self._unify(value)
        parts = base.coeffs_in(var)
        if not parts:
            return base
        top = max(parts)
        zero = MPoly.zero(base.variables)
        result = zero
        for d in range(top, -1, -1):
            result = result * val + parts.get(d, zero)
        return result

    def substitute_values(self, values: Mapping[str, object]) -> "MPoly":
        """Plug in exact scalars for some variables (their slots remain, unused)."""
        idx = {self._index(v): GaussRat.coerce(c) for v, c in values.items()}
        pow_cache: dict[tuple[int, int], GaussRat] = {}
        terms: dict[tuple, GaussRat] = {}
        for e, c in self.terms.items():
            coef = c
            ne = list(e)
            for k, val in idx.items():
                if e[k]:
                    key = (k, e[k])
                    p = pow_cache.get(key)
                    if p is None:
                        p = val ** e[k]
                        pow_cache[key] = p
                    coef = coef * p
                    ne[k] = 0
            ne = tuple(ne)
            s = terms.get(ne)
            terms[ne] = coef if s is None else s + coef
        return MPoly._from_clean(self.variables, {e: c for e, c in terms.items() if c})

    def evaluate(self, values: Mapping[str, object]) -> GaussRat:
        """Exact evaluation at a point given for every variable that occurs."""
        reduced = self.substitute_values(values)
        if not reduced.is_constant:
            raise ValueError(f"variables left unevaluated: {reduced.free_variables()}")
        return reduced.constant_value()

    def linear_change(self, images: Mapping[str, "MPoly"]) -> "MPoly":
        """Simultaneous substitution ``v -> images[v]``."""
        variables = self.variables
        for img in images.values():
            variables = variables + tuple(v for v in img.variables if v not in variables)
        result = MPoly.zero(variables)
        powers: dict[tuple[str, int], MPoly] = {}
        for e, c in self.terms.items():
            term = MPoly.const(c, variables)
            for v, k in zip(self.variables, e):
                if not k:
                    continue
                if v in images:
                    key = (v, k)
                    p = powers.get(key)
                    if p is None:
                        p = images[v].with_variables(variables) ** k
                        powers[key] = p
                    term = term * p
                else:
                    term = term * MPoly.var(v, variables) ** k
            result = result + term
        return result

    # ----- homogeneous coordinates -----
    def homogenize(self, var: str, degree: int | None = None) -> "MPoly":
        f = self if var in self.variables else self.with_variables(self.variables + (var,))
        k = f._index(var)
        if any(e[k] for e in f.terms):
            raise ValueError(f"{var} already occurs in the polynomial")
        td = f.total_degree()
        if degree is None:
            degree = max(td, 0)
        if td > degree:
            raise ValueError(f"target degree {degree} below total degree {td}")
        terms = {}
        for e, c in f.terms.items():
            ne = list(e)
            ne[k] = degree - sum(e)
            terms[tuple(ne)] = c
        return MPoly._from_clean(f.variables, terms)

    def dehomogenize(self, var: str) -> "MPoly":
        return self.substitute_values({var: 1})

    def homogeneous_part(self, degree: int) -> "MPoly":
        return MPoly._from_clean(self.variables, {e: c for e, c in self.terms.items() if sum(e) == degree})

    # ----- normalization -----
    def monic(self) -> "MPoly":
        """Scale so that the graded-lex leading coefficient is 1."""
        if self.is_zero:
            return self
        return self.scale(self.leading_coefficient().inverse())

    def same_up_to_unit(self, other: "MPoly") -> bool:
        a, b = self._unify(other)
        return a.monic() == b.monic()

    def to_complex_terms(self) -> list[tuple[tuple[int, ...], complex]]:
        return [(e, complex(c)) for e, c in self.terms.items()]

    # ----- text -----
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({list(self.variables)!r}, {format_poly(self)!r})"


# ---------------------------------------------------------------------------
# printing


def _monomial_text(exp: tuple[int, ...], variables: tuple[str, ...]) -> str:
    parts = []
    for v, k in zip(variables, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def _split_sign(c: GaussRat) -> tuple[str, str]:
    re_, im_ = c.re, c.im
    if im_ == 0:
        return ("-" if re_ < 0 else "+"), format_gauss(c if re_ >= 0 else -c)
    if re_ == 0:
        return ("-" if im_ < 0 else "+"), format_gauss(c if im_ > 0 else -c)
    return "+", format_gauss(c)


def format_poly(f: MPoly) -> str:
    if f.is_zero:
        return "0"
    pieces = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        sign, mag = _split_sign(c)
        mono = _monomial_text(e, f.variables)
        if mono:
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(message, self.text, tok[2])

    def expr(self) -> MPoly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self) -> MPoly:
        result = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MPoly:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected unsigned integer exponent", tok)
            base = base ** int(tok[1])
        return base

    def base(self) -> MPoly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            num = int(val)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den_tok = self.take()
                if den_tok[0] != "int":
                    self.fail("expected integer denominator", den_tok)
                den = int(den_tok[1])
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return MPoly.const(Fraction(num, den), self.variables)
            return MPoly.const(num, self.variables)
        if kind == "name":
            if val in self.variables:
                return MPoly.var(val, self.variables)
            if val == "i":
                return MPoly.const(GaussRat(0, 1), self.variables)
            raise UndeclaredVariable(f"undeclared variable {val!r} at position {tok[2]} in {self.text!r}")
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                self.fail("expected ')'", close)
            return inner
        self.fail("unexpected token", tok)


def parse_poly(text: str, variables: Iterable[str]) -> MPoly:
    """Parse ``text`` in the polynomial grammar over the declared variables.

    >>> str(parse_poly("(x+y)^2 - x^2 - 2*x*y", ["x", "y"]))
    'y^2'
    """
    variables = tuple(variables)
    if "i" in variables:
        raise ValueError("'i' is reserved for the imaginary unit")
    p = _Parser(text, variables)
    result = p.expr()
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return result


@dataclass(frozen=True)
class CPoint:
    coordinates: tuple[complex, ...]
    precision: int = 53

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(complex(c) for c in self.coordinates))
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        for c in self.coordinates:
            if c != c or abs(c) == float("inf"):
                raise ValueError("point coordinates must be finite")
