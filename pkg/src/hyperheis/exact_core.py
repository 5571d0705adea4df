"""Exact arithmetic kernels: rationals, parameter polynomials, Laurent polynomials.

Rationals are :class:`fractions.Fraction`. Parameter polynomials live in
Q[a1^{+-1}, a2, ..., ar]; only a1 may carry a negative exponent.
Laurent polynomials in t accept either Fraction or ParamScalar coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParseError, SpecializationError

def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ParseError(f"bad rational literal: {text!r}")
    value = Fraction(text)
    return value


def fmt_rational(q: Fraction) -> str:
    """'p/q' string; integers print without a denominator."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _strip(exps: tuple[int, ...]) -> tuple[int, ...]:
    n = len(exps)
    while n and exps[n - 1] == 0:
        n -= 1
    return tuple(exps[:n])


def _lex_key(item):
    # compare as if every exponent vector were zero-padded to a common length
    e = item[0]
    return e + (0,) * (_PAD - len(e))


_PAD = 64


def _add_exps(e: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    if len(e) < len(f):
        e, f = f, e
    out = list(e)
    for i, x in enumerate(f):
        out[i] += x
    return _strip(tuple(out))


class ParamScalar:
    """Sparse polynomial over Q in the curve parameters a1..ar.

    Exponent vectors are stored with trailing zeros stripped, so ``(1,)`` is a1
    and ``()`` the constant monomial. Terms are kept sorted lexicographically on
    the exponent vector, which makes equality a comparison of representations.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        acc: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = _strip(tuple(int(x) for x in e))
            if any(x < 0 for x in e[1:]):
                raise ValueError("only a1 may carry a negative exponent")
            acc[e] = acc.get(e, Fraction(0)) + as_rational(c)
        self._terms = tuple(sorted(((e, c) for e, c in acc.items() if c), key=_lex_key))
        self._hash = None

    @classmethod
    def _raw(cls, acc: dict) -> ParamScalar:
        obj = cls.__new__(cls)
        obj._terms = tuple(sorted(((e, c) for e, c in acc.items() if c), key=_lex_key))
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> ParamScalar:
        return cls({(): c})

    @classmethod
    def var(cls, i: int, power: int = 1) -> ParamScalar:
        """The parameter a_i (1-based) raised to ``power``."""
        if i < 1:
            raise ValueError("parameters are numbered from 1")
        e = [0] * i
        e[i - 1] = power
        return cls({tuple(e): 1})

    @property
    def terms(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        return self._terms

    def is_constant(self) -> bool:
        return all(e == () for e, _ in self._terms)

    def constant_value(self) -> Fraction:
        for e, c in self._terms:
            if e == ():
                return c
        return Fraction(0)

    def nvars(self) -> int:
        return max((len(e) for e, _ in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(self._terms)
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ParamScalar.const(other)._terms
        return NotImplemented

    @staticmethod
    def _coerce(other) -> ParamScalar | None:
        if isinstance(other, ParamScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamScalar.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in o._terms:
            acc[e] = acc.get(e, 0) + c
        return ParamScalar._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> ParamScalar:
        return ParamScalar._raw({e: -c for e, c in self._terms})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ParamScalar()
            return ParamScalar._raw({e: c * other for e, c in self._terms})
        if not isinstance(other, ParamScalar):
            return NotImplemented
        acc: dict[tuple[int, ...], Fraction] = {}
        for e, c in self._terms:
            for f, d in other._terms:
                g = _add_exps(e, f)
                acc[g] = acc.get(g, 0) + c * d
        return ParamScalar._raw(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by nonzero rationals and by monomials in a1 only
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("ParamScalar division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, ParamScalar) and len(other._terms) == 1:
            (e, c), = other._terms
            if all(x == 0 for x in e[1:]):
                inv = ParamScalar({(-e[0],) if e else (): 1 / c})
                return self * inv
        return NotImplemented

    def __pow__(self, n: int) -> ParamScalar:
        if n < 0:
            return ParamScalar.const(1) / (self ** -n)
        out = ParamScalar.const(1)
        for _ in range(n):
            out = out * self
        return out

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        return self._terms[-1]

    def __repr__(self) -> str:
        return f"ParamScalar({self})"

    def __str__(self) -> str:
        return fmt_scalar(self)

    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coeff": fmt_rational(c)} for e, c in self._terms]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> ParamScalar:
        return cls({tuple(item["exp"]): parse_rational(item["coeff"]) for item in data})


def _fmt_monomial(e: tuple[int, ...]) -> str:
    parts = []
    for i, x in enumerate(e, start=1):
        if x == 0:
            continue
        parts.append(f"a{i}" if x == 1 else f"a{i}^{x}")
    return "*".join(parts)


def fmt_scalar(s) -> str:
    """Render a Fraction or ParamScalar, highest monomial first."""
    if not isinstance(s, ParamScalar):
        return fmt_rational(s)
    if not s:
        return "0"
    pieces = []
    for e, c in reversed(s.terms):
        mono = _fmt_monomial(e)
        if not mono:
            body = fmt_rational(c)
        elif c == 1:
            body = mono
        elif c == -1:
            body = "-" + mono
        else:
            body = f"{fmt_rational(c)}*{mono}"
        pieces.append(body)
    out = pieces[0]
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def split_signed_terms(text: str) -> list[tuple[int, str]]:
    """Split at top-level + and - signs; signs inside brackets or after '^', '*', '/' stay put."""
    terms: list[tuple[int, str]] = []
    depth = 0
    sign = 1
    buf: list[str] = []
    prev = ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in "+-" and depth == 0 and prev not in ("^", "*", "/"):
            chunk = "".join(buf).strip()
            if chunk:
                terms.append((sign, chunk))
                sign = 1
            if ch == "-":
                sign = -sign
            buf = []
        else:
            buf.append(ch)
        if not ch.isspace():
            prev = ch
    tail = "".join(buf).strip()
    if not tail:
        raise ParseError(f"dangling sign or empty expression in {text!r}")
    terms.append((sign, tail))
    return terms


def parse_scalar(text: str):
    """Parse the output of :func:`fmt_scalar`; plain rationals come back as Fraction."""
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    acc: dict[tuple[int, ...], Fraction] = {}
    symbolic = False
    for sign, term in split_signed_terms(text):
        coeff = Fraction(sign)
        exps: list[int] = []
        for factor in term.split("*"):
            factor = factor.strip()
            m = re.fullmatch(r"a(\d+)(?:\^(-?\d+))?", factor)
            if m:
                symbolic = True
                i, p = int(m.group(1)), int(m.group(2) or 1)
                if i < 1:
                    raise ParseError(f"bad parameter {factor!r}")
                while len(exps) < i:
                    exps.append(0)
                exps[i - 1] += p
            else:
                coeff *= parse_rational(factor)
        e = _strip(tuple(exps))
        acc[e] = acc.get(e, 0) + coeff
    if not symbolic:
        return acc.get((), Fraction(0))
    return ParamScalar(acc)


def specialize(s, values: Iterable) -> Fraction:
    """Evaluate a ParamScalar at rational values for a1..ar."""
    if not isinstance(s, ParamScalar):
        return Fraction(s)
    vals = [as_rational(v) for v in values]
    total = Fraction(0)
    for e, c in s.terms:
        term = c
        for i, x in enumerate(e):
            if x == 0:
                continue
            if i >= len(vals):
                raise SpecializationError(f"no value supplied for a{i + 1}")
            if vals[i] == 0 and x < 0:
                raise SpecializationError("a1 = 0 meets a negative power of a1")
            term *= vals[i] ** x
        total += term
    return total


def scalar_ratio(num, den) -> Fraction | None:
    """Rational q with num == q * den, or None when none exists (den must be nonzero)."""
    if not den:
        raise ZeroDivisionError("ratio against zero")
    if not isinstance(num, ParamScalar) and not isinstance(den, ParamScalar):
        return Fraction(num) / Fraction(den)
    n = num if isinstance(num, ParamScalar) else ParamScalar.const(num)
    d = den if isinstance(den, ParamScalar) else ParamScalar.const(den)
    if not n:
        return Fraction(0)
    (e1, c1), (e2, c2) = n.leading(), d.leading()
    if e1 != e2:
        return None
    q = c1 / c2
    return q if n == d * q else None


class LaurentPoly:
    """Finitely supported map exponent -> coefficient in Q[t, 1/t] or Q[a][t, 1/t]."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self._c = {int(k): v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, k: int, c=Fraction(1)) -> LaurentPoly:
        return cls({k: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def coeff(self, k: int):
        return self._c.get(k, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        out: dict[int, object] = {}
        for i, x in self._c.items():
            for j, y in other._c.items():
                out[i + j] = out.get(i + j, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> LaurentPoly:
        return LaurentPoly({k - 1: v * k for k, v in self._c.items() if k})

    def shift(self, n: int) -> LaurentPoly:
        return LaurentPoly({k + n: v for k, v in self._c.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "LaurentPoly(0)"
        return "LaurentPoly(" + " + ".join(f"({fmt_scalar(v)})*t^{k}" for k, v in self.items()) + ")"


def poly_arith(lhs: LaurentPoly, rhs: LaurentPoly | None, op: str) -> LaurentPoly:
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    if op == "derivative":
        return lhs.derivative()
    raise ValueError(f"unknown op {op!r}")


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0} by exact Gauss-Jordan elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        m[row] = [x / p for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][free]
        basis.append(v)
    return basis
