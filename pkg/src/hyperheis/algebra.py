"""Bracket engines for sl2 (x) R + Omega^1_R/dR and for its Heisenberg subalgebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .exact_core import fmt_scalar, scalar_ratio
from .kahler import OmegaClass, monomial_cocycle, monomial_product
from .pq_tables import PQTable

SL2 = ("e", "h", "f")

# [x, y] in sl2 as {z: coefficient}
_SL2_BRACKET = {
    ("h", "e"): {"e": 2},
    ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2},
    ("f", "h"): {"f": 2},
    ("e", "f"): {"h": 1},
    ("f", "e"): {"h": -1},
}

_TRACE = {("h", "h"): 2, ("e", "f"): 1, ("f", "e"): 1}


class FormChoice(Enum):
    """Invariant form on sl2: trace form (h,h)=2, (e,f)=1, or the Killing form (4x trace)."""

    TRACE = "trace"
    KILLING = "killing"

    @property
    def multiplier(self) -> int:
        return 1 if self is FormChoice.TRACE else 4

    def __call__(self, x: str, y: str) -> int:
        return _TRACE.get((x, y), 0) * self.multiplier


def sl2_bracket(x: str, y: str) -> dict[str, int]:
    return _SL2_BRACKET.get((x, y), {})


def _clean(d: Mapping) -> dict:
    return {k: v for k, v in d.items() if v}


def _add_central(a: OmegaClass | None, b: OmegaClass | None) -> OmegaClass | None:
    if a is None:
        return b
    if b is None:
        return a
    return a + b


@dataclass(frozen=True, eq=False)
class GElem:
    """sum c * (x (x) t^i u^uflag) + central class."""

    terms: Mapping[tuple[str, int, int], object] = field(default_factory=dict)
    central: OmegaClass | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", _clean(self.terms))

    @classmethod
    def basis(cls, x: str, i: int, uflag: int = 0, c=Fraction(1)) -> GElem:
        if x not in SL2:
            raise ValueError(f"unknown sl2 generator {x!r}")
        return cls({(x, i, uflag): c})

    def __add__(self, other: GElem) -> GElem:
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return GElem(terms, _add_central(self.central, other.central))

    def scale(self, c) -> GElem:
        return GElem({k: v * c for k, v in self.terms.items()},
                     None if self.central is None else self.central.scale(c))

    def __neg__(self) -> GElem:
        return self.scale(-1)

    def __sub__(self, other: GElem) -> GElem:
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def __eq__(self, other) -> bool:
        if not isinstance(other, GElem):
            return NotImplemented
        return (self - other).is_zero()

    def lie_part(self) -> GElem:
        return GElem(self.terms)

    def __str__(self) -> str:
        parts = []
        for (x, i, uf), c in sorted(self.terms.items(), key=lambda kv: (SL2.index(kv[0][0]), kv[0][2], kv[0][1])):
            parts.append(_with_coeff(c, f"{x}({_ring_monomial(i, uf)})"))
        if self.central:
            for k, c in enumerate(self.central.c):
                if c:
                    parts.append(_with_coeff(c, f"w{k}"))
        return _join(parts)

    def to_json(self) -> dict:
        return {
            "terms": [{"x": x, "i": i, "u": uf, "coeff": fmt_scalar(c)}
                      for (x, i, uf), c in sorted(self.terms.items(), key=lambda kv: (SL2.index(kv[0][0]), kv[0][2], kv[0][1]))],
            "central": self.central.to_json() if self.central is not None else None,
        }


def _ring_monomial(i: int, uf: int) -> str:
    t = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
    if uf:
        return f"{t} u".strip()
    return t or "1"


def _with_coeff(c, sym: str) -> str:
    s = fmt_scalar(c)
    if s == "1":
        return sym
    if s == "-1":
        return "-" + sym
    if " " in s:
        s = f"({s})"
    return f"{s}*{sym}"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def bracket_canonical(x: GElem, y: GElem, curve, form: FormChoice = FormChoice.TRACE) -> GElem:
    """[x (x) f, y (x) g] = [x, y] (x) fg + (x, y) [f dg]; central elements bracket to zero."""
    terms: dict = {}
    central = OmegaClass.zero(curve.r)
    for (a, i, ua), c1 in x.terms.items():
        for (b, j, ub), c2 in y.terms.items():
            coef = c1 * c2
            lie = sl2_bracket(a, b)
            if lie:
                prod = monomial_product(curve, i, ua, j, ub)
                for k, uf, pc in prod.terms():
                    for z, s in lie.items():
                        key = (z, k, uf)
                        terms[key] = terms.get(key, 0) + coef * pc * s
            fv = form(a, b)
            if fv:
                cc = monomial_cocycle(curve, i, ua, j, ub)
                if cc:
                    central = central + cc.scale(coef * fv)
    return GElem(terms, central)


def bracket_paper(x: GElem, y: GElem, table: PQTable, form: FormChoice = FormChoice.TRACE,
                  strict: bool = False) -> GElem:
    """Closed-form brackets of the hyperelliptic current algebra, built from psi and a_k.

    With ``strict=False`` two corrections are applied: the (x, y) factor is
    inserted in the central term of the odd-odd bracket, and the odd-even Lie
    part is read as [x, y] (x) t^(i+j) u. ``strict=True`` uses the formulas as
    written, where the stray u turns the odd-even Lie part into [x, y] (x) t^(i+j) p(t).
    """
    curve = table.curve
    r = curve.r
    p = curve.p()
    terms: dict = {}
    central = OmegaClass.zero(r)

    def add_lie(z_map, poly_terms, coef):
        for k, uf, pc in poly_terms:
            for z, s in z_map.items():
                key = (z, k, uf)
                terms[key] = terms.get(key, 0) + coef * pc * s

    def odd_even(a, i, b, j, coef):
        # [a (x) t^i u, b (x) t^j]
        nonlocal central
        lie = sl2_bracket(a, b)
        if strict:
            add_lie(lie, [(k + i + j, 0, c) for k, c in p.items()], coef)
        else:
            add_lie(lie, [(i + j, 1, Fraction(1))], coef)
        fv = form(a, b)
        if fv and j:
            central = central + table.psi(i, j).scale(coef * fv * j)

    for (a, i, ua), c1 in x.terms.items():
        for (b, j, ub), c2 in y.terms.items():
            coef = c1 * c2
            fv = form(a, b)
            if ua == 0 and ub == 0:
                add_lie(sl2_bracket(a, b), [(i + j, 0, Fraction(1))], coef)
                if fv and i + j == 0 and j:
                    central = central + OmegaClass.basis(r, 0, coef * fv * j)
            elif ua == 1 and ub == 1:
                add_lie(sl2_bracket(a, b), [(k + i + j, 0, c) for k, c in p.items()], coef)
                k = -(i + j)
                if 1 <= k <= r + 1:
                    val = (j + Fraction(k, 2)) * curve.coeff(k)
                    mult = 1 if strict else fv
                    if val and mult:
                        central = central + OmegaClass.basis(r, 0, coef * val * mult)
            elif ua == 1:
                odd_even(a, i, b, j, coef)
            else:
                odd_even(b, j, a, i, -coef)
    return GElem(terms, central)


@dataclass(frozen=True, eq=False)
class HElem:
    """sum c_m b_m + sum d_m b1_m + sum z_i 1_i."""

    b: Mapping[int, object] = field(default_factory=dict)
    b1: Mapping[int, object] = field(default_factory=dict)
    central: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("b", "b1", "central"):
            object.__setattr__(self, name, _clean(getattr(self, name)))

    @classmethod
    def gen(cls, kind: str, index: int, c=Fraction(1)) -> HElem:
        if kind == "b":
            return cls(b={index: c})
        if kind == "b1":
            return cls(b1={index: c})
        if kind == "1":
            return cls(central={index: c})
        raise ValueError(f"unknown generator kind {kind!r}")

    def __add__(self, other: HElem) -> HElem:
        def merge(p, q):
            out = dict(p)
            for k, v in q.items():
                out[k] = out.get(k, 0) + v
            return out
        return HElem(merge(self.b, other.b), merge(self.b1, other.b1), merge(self.central, other.central))

    def scale(self, c) -> HElem:
        return HElem({k: v * c for k, v in self.b.items()}, {k: v * c for k, v in self.b1.items()},
                     {k: v * c for k, v in self.central.items()})

    def __neg__(self) -> HElem:
        return self.scale(-1)

    def __sub__(self, other: HElem) -> HElem:
        return self + (-other)

    def is_zero(self) -> bool:
        return not (self.b or self.b1 or self.central)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HElem):
            return NotImplemented
        return (self - other).is_zero()

    def __str__(self) -> str:
        parts = [_with_coeff(c, f"b[{m}]") for m, c in sorted(self.b.items())]
        parts += [_with_coeff(c, f"b1[{m}]") for m, c in sorted(self.b1.items())]
        parts += [_with_coeff(c, f"1_{i}") for i, c in sorted(self.central.items())]
        return _join(parts)

    def to_json(self) -> dict:
        return {
            "b": {str(m): fmt_scalar(c) for m, c in sorted(self.b.items())},
            "b1": {str(m): fmt_scalar(c) for m, c in sorted(self.b1.items())},
            "central": {str(i): fmt_scalar(c) for i, c in sorted(self.central.items())},
        }


def h_pair(kind1: str, m: int, kind2: str, n: int, table: PQTable) -> dict[int, object]:
    """Central value of [kind1_m, kind2_n] as {i: coefficient of 1_i}."""
    curve = table.curve
    if kind1 == "b" and kind2 == "b":
        return {0: Fraction(2 * n)} if m + n == 0 and n else {}
    if kind1 == "b1" and kind2 == "b1":
        val = Fraction(n - m, 2) * curve.coeff(-(m + n))
        return {0: val} if val else {}
    if kind1 == "b1" and kind2 == "b":
        if n == 0:
            return {}
        coords = table.u_coords(m + n - 1)
        return {k: c * (2 * n) for k, c in enumerate(coords, start=1) if c}
    if kind1 == "b" and kind2 == "b1":
        return {k: -c for k, c in h_pair("b1", n, "b", m, table).items()}
    return {}


def h_bracket(x: HElem, y: HElem, table: PQTable) -> HElem:
    central: dict[int, object] = {}
    xs = [("b", m, c) for m, c in x.b.items()] + [("b1", m, c) for m, c in x.b1.items()]
    ys = [("b", m, c) for m, c in y.b.items()] + [("b1", m, c) for m, c in y.b1.items()]
    for k1, m, c1 in xs:
        for k2, n, c2 in ys:
            for i, v in h_pair(k1, m, k2, n, table).items():
                central[i] = central.get(i, 0) + c1 * c2 * v
    return HElem(central=central)


def jacobi_residual(x: GElem, y: GElem, z: GElem, table: PQTable, engine: str = "canonical",
                    form: FormChoice = FormChoice.TRACE, strict: bool = False) -> GElem:
    if engine == "canonical":
        def br(a, b):
            return bracket_canonical(a, b, table.curve, form)
    elif engine == "paper":
        def br(a, b):
            return bracket_paper(a, b, table, form, strict)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    # the outer bracket ignores central parts, so only Lie parts feed it
    return (br(x, br(y, z).lie_part()) + br(y, br(z, x).lie_part()) + br(z, br(x, y).lie_part()))


def embed(kind: str, m: int) -> GElem:
    """b_m -> h (x) t^m, b1_m -> h (x) t^m u."""
    return GElem.basis("h", m, 1 if kind == "b1" else 0)


_FAMILIES = {"H1": ("b", "b"), "H2": ("b1", "b1"), "H3": ("b1", "b")}


def compare_normalization(window: range, table: PQTable, form: FormChoice = FormChoice.TRACE) -> dict:
    """Ratio canonical/defining-relation per Heisenberg relation family over ``window`` x ``window``.

    Verdicts: "match" (every ratio 1), "constant ratio" (one ratio c != 1), "mismatch".
    Pairs where both sides vanish are counted but carry no ratio.
    """
    curve = table.curve
    report: dict = {}
    for name, (k1, k2) in _FAMILIES.items():
        ratios: set[Fraction] = set()
        mismatches = []
        compared = 0
        for m in window:
            for n in window:
                rel = h_pair(k1, m, k2, n, table)
                canon = bracket_canonical(embed(k1, m), embed(k2, n), curve, form).central
                compared += 1
                for i in range(curve.r + 1):
                    pv = rel.get(i, Fraction(0))
                    cv = canon.c[i]
                    if not pv and not cv:
                        continue
                    q = scalar_ratio(cv, pv) if pv else None
                    if q is None:
                        mismatches.append({"m": m, "n": n, "coord": i,
                                           "relation": fmt_scalar(pv), "canonical": fmt_scalar(cv)})
                    else:
                        ratios.add(q)
        if mismatches or len(ratios) > 1:
            verdict, ratio = "mismatch", None
        elif not ratios or ratios == {Fraction(1)}:
            verdict, ratio = "match", Fraction(1)
        else:
            verdict, ratio = "constant ratio", next(iter(ratios))
        report[name] = {
            "verdict": verdict,
            "ratio": None if ratio is None else fmt_scalar(ratio),
            "pairs": compared,
            "distinct_ratios": sorted(fmt_scalar(q) for q in ratios),
            "mismatches": mismatches[:10],
        }
    return report
