"""The coordinate ring R = Q[t, 1/t, u]/(u^2 - p(t)) and Kahler differentials modulo exact forms.

Every class in Omega^1_R / dR is written in the basis

    w0 = [t^-1 dt],   wk = [t^-k u dt]   (1 <= k <= r).

Reduction rules, for p(t) = sum_{j=1}^{r+1} a_j t^j with a_{r+1} = 1:

    g u du   ->  (1/2) g p'(t) dt                     (from d(u^2) = d(p))
    q du     -> -q'(t) u dt                           (d(q u) is exact)
    F(t) dt  ->  [t^-1] F * w0                         (d(t^n) is exact)
    sum_j (2n + 3j) a_j t^(n+j-1) u dt  ~  0           (d(t^n p u) rewritten with the first rule)

The last family eliminates u-exponents above -1 (pivot on j = r+1, divisor 2k + r + 3)
and below -r (pivot on j = 1, divisor (2k + 3) a1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import SpecializationError
from .exact_core import LaurentPoly, ParamScalar, as_rational, fmt_scalar


@dataclass(frozen=True)
class CurveSpec:
    """u^2 = a1 t + a2 t^2 + ... + ar t^r + t^(r+1).

    ``a`` holds ParamScalar indeterminates (symbolic mode) or Fractions
    (specialized mode). a1 = 0 is tolerated on construction; anything that
    needs 1/a1 raises SpecializationError.
    """

    r: int
    a: tuple

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")
        if len(self.a) != self.r:
            raise ValueError(f"expected {self.r} coefficients, got {len(self.a)}")

    @classmethod
    def symbolic(cls, r: int) -> CurveSpec:
        return cls(r, tuple(ParamScalar.var(i) for i in range(1, r + 1)))

    @classmethod
    def specialized(cls, values: Sequence) -> CurveSpec:
        a = tuple(as_rational(v) for v in values)
        if not a:
            raise ValueError("at least one coefficient is required")
        if a[0] == 0:
            raise SpecializationError("a1 must be nonzero")
        return cls(len(a), a)

    @property
    def is_symbolic(self) -> bool:
        return any(isinstance(x, ParamScalar) for x in self.a)

    def coeff(self, k: int):
        """a_k with a_{r+1} = 1 and a_k = 0 outside [1, r+1]."""
        if 1 <= k <= self.r:
            return self.a[k - 1]
        if k == self.r + 1:
            return Fraction(1)
        return Fraction(0)

    @property
    def inv_a1(self):
        a1 = self.a[0]
        if isinstance(a1, ParamScalar):
            if a1 == ParamScalar.var(1):
                return ParamScalar.var(1, -1)
            raise SpecializationError("a1 must be the indeterminate or a nonzero rational")
        if a1 == 0:
            raise SpecializationError("a1 = 0 but the reduction needs 1/a1")
        return 1 / a1

    def p(self) -> LaurentPoly:
        return LaurentPoly({k: self.coeff(k) for k in range(1, self.r + 2)})

    def describe(self) -> str:
        terms = [f"({fmt_scalar(self.coeff(k))})*t^{k}" for k in range(1, self.r + 1)]
        return "u^2 = " + " + ".join(terms + [f"t^{self.r + 1}"])


@dataclass(frozen=True)
class RingElem:
    """f0(t) + f1(t) u."""

    f0: LaurentPoly = LaurentPoly()
    f1: LaurentPoly = LaurentPoly()

    @classmethod
    def monomial(cls, i: int, uflag: int, c=Fraction(1)) -> RingElem:
        m = LaurentPoly.monomial(i, c)
        return cls(m, LaurentPoly()) if uflag == 0 else cls(LaurentPoly(), m)

    def __add__(self, other: RingElem) -> RingElem:
        return RingElem(self.f0 + other.f0, self.f1 + other.f1)

    def __neg__(self) -> RingElem:
        return RingElem(-self.f0, -self.f1)

    def __sub__(self, other: RingElem) -> RingElem:
        return self + (-other)

    def scale(self, c) -> RingElem:
        return RingElem(self.f0 * c, self.f1 * c)

    def __bool__(self) -> bool:
        return bool(self.f0) or bool(self.f1)

    def terms(self):
        """(exponent, uflag, coefficient) triples in a fixed order."""
        return [(k, 0, c) for k, c in self.f0.items()] + [(k, 1, c) for k, c in self.f1.items()]


def ring_mul(x: RingElem, y: RingElem, curve: CurveSpec) -> RingElem:
    uu = x.f1 * y.f1
    return RingElem(x.f0 * y.f0 + uu * curve.p(), x.f0 * y.f1 + x.f1 * y.f0)


@dataclass(frozen=True)
class OneForm:
    """cdt dt + cdu du."""

    cdt: RingElem = RingElem()
    cdu: RingElem = RingElem()

    def __add__(self, other: OneForm) -> OneForm:
        return OneForm(self.cdt + other.cdt, self.cdu + other.cdu)

    def scale(self, c) -> OneForm:
        return OneForm(self.cdt.scale(c), self.cdu.scale(c))


def differential(f: RingElem) -> OneForm:
    return OneForm(RingElem(f.f0.derivative(), f.f1.derivative()), RingElem(f.f1, LaurentPoly()))


def times_form(f: RingElem, w: OneForm, curve: CurveSpec) -> OneForm:
    return OneForm(ring_mul(f, w.cdt, curve), ring_mul(f, w.cdu, curve))


@dataclass(frozen=True)
class OmegaClass:
    """Coordinates on (w0, w1, ..., wr)."""

    c: tuple

    @classmethod
    def zero(cls, r: int) -> OmegaClass:
        return cls((Fraction(0),) * (r + 1))

    @classmethod
    def basis(cls, r: int, k: int, coeff=Fraction(1)) -> OmegaClass:
        c = [Fraction(0)] * (r + 1)
        c[k] = coeff
        return cls(tuple(c))

    @property
    def r(self) -> int:
        return len(self.c) - 1

    def __add__(self, other: OmegaClass) -> OmegaClass:
        if len(self.c) != len(other.c):
            raise ValueError("classes over different curves")
        return OmegaClass(tuple(x + y for x, y in zip(self.c, other.c)))

    def __neg__(self) -> OmegaClass:
        return OmegaClass(tuple(-x for x in self.c))

    def __sub__(self, other: OmegaClass) -> OmegaClass:
        return self + (-other)

    def scale(self, s) -> OmegaClass:
        return OmegaClass(tuple(x * s for x in self.c))

    def __bool__(self) -> bool:
        return any(bool(x) for x in self.c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OmegaClass):
            return NotImplemented
        return len(self.c) == len(other.c) and all(x == y for x, y in zip(self.c, other.c))

    def __hash__(self) -> int:
        return hash(self.c)

    def __str__(self) -> str:
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            s = fmt_scalar(x)
            if " " in s:
                s = f"({s})"
            if s in ("1", "-1"):
                parts.append(f"{s[:-1]}w{k}")
            else:
                parts.append(f"{s}*w{k}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> list[str]:
        return [fmt_scalar(x) for x in self.c]


def _eliminate_u_part(coeffs: dict, curve: CurveSpec, rng: random.Random | None = None) -> dict:
    """Bring a u dt coefficient map onto exponents [-r, -1].

    Without ``rng`` exponents below -r are swept upward first, then exponents
    above -1 downward. With ``rng`` the next exponent is picked at random, which
    must yield the same result.
    """
    r = curve.r
    f = {k: v for k, v in coeffs.items() if v}

    def low_step(k):
        c = f.pop(k)
        factor = -c * curve.inv_a1 * Fraction(1, 2 * k + 3)
        for j in range(2, r + 2):
            w = 2 * k + 3 * j
            aj = curve.coeff(j)
            if w and aj:
                e = k + j - 1
                f[e] = f.get(e, 0) + factor * w * aj
                if not f[e]:
                    del f[e]

    def high_step(k):
        c = f.pop(k)
        n = k - r
        factor = -c * Fraction(1, 2 * k + r + 3)
        for j in range(1, r + 1):
            w = 2 * n + 3 * j
            aj = curve.coeff(j)
            if w and aj:
                e = n + j - 1
                f[e] = f.get(e, 0) + factor * w * aj
                if not f[e]:
                    del f[e]

    if rng is None:
        while f and min(f) < -r:
            low_step(min(f))
        while f and max(f) > -1:
            high_step(max(f))
        return f
    while True:
        pending = sorted(k for k in f if k < -r or k > -1)
        if not pending:
            return f
        k = rng.choice(pending)
        if k < -r:
            low_step(k)
        else:
            high_step(k)


def reduce(w: OneForm, curve: CurveSpec, rng: random.Random | None = None) -> OmegaClass:
    """Coordinates of the class of ``w`` in Omega^1_R / dR."""
    r = curve.r
    # g1 u du -> (1/2) g1 p' dt ; g0 du -> -g0' u dt
    plain = w.cdt.f0 + w.cdu.f1 * curve.p().derivative() * Fraction(1, 2)
    upart = w.cdt.f1 - w.cdu.f0.derivative()
    reduced = _eliminate_u_part(upart.coeffs, curve, rng)
    coords = [plain.coeff(-1)] + [reduced.get(-k, Fraction(0)) for k in range(1, r + 1)]
    return OmegaClass(tuple(coords))


def cocycle(f: RingElem, g: RingElem, curve: CurveSpec) -> OmegaClass:
    """Class of f dg."""
    return reduce(times_form(f, differential(g), curve), curve)


@lru_cache(maxsize=None)
def monomial_cocycle(curve: CurveSpec, i: int, ui: int, j: int, uj: int) -> OmegaClass:
    return cocycle(RingElem.monomial(i, ui), RingElem.monomial(j, uj), curve)


@lru_cache(maxsize=None)
def monomial_product(curve: CurveSpec, i: int, ui: int, j: int, uj: int) -> RingElem:
    return ring_mul(RingElem.monomial(i, ui), RingElem.monomial(j, uj), curve)


def u_dt_class(k: int, curve: CurveSpec) -> OmegaClass:
    """Class of t^k u dt."""
    return reduce(OneForm(RingElem.monomial(k, 1), RingElem()), curve)


def ring_from_terms(terms: Iterable[tuple[int, int, object]]) -> RingElem:
    f0: dict = {}
    f1: dict = {}
    for k, uflag, c in terms:
        tgt = f1 if uflag else f0
        tgt[k] = tgt.get(k, 0) + c
    return RingElem(LaurentPoly(f0), LaurentPoly(f1))
