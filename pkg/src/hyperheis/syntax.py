"""Text syntax for forms, algebra elements, module vectors and generator words.

    form     "t^-2*u dt + 3 du"
    GElem    "h(t^2 u) + 3*e(t^-1) - 1/2*w0"
    HElem    "b1[-2] + 2*b[3] + 1_0"
    vector   "2*b[-1]^2 b1[-3] v - 1/2*v"   (trailing v optional)
    word     "b[1] b1[2]^2"                  (leftmost acts last)
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .algebra import SL2, GElem, HElem
from .errors import ParseError
from .exact_core import LaurentPoly, ParamScalar, parse_rational, split_signed_terms
from .kahler import OmegaClass, OneForm, RingElem
from .verma import Gen, ModuleVector, PBWMonomial

_RAT = re.compile(r"\d+(?:/\d+)?")
_PARAM = re.compile(r"a(\d+)(?:\^(-?\d+))?")
_TPOW = re.compile(r"t(?:\^(-?\d+))?")
_GEN = re.compile(r"(b1|b)\[\s*(-?\d+)\s*\](?:\^(\d+))?|1_(\d+)")


def _coefficient(tok: str, coeff):
    if _RAT.fullmatch(tok):
        return coeff * parse_rational(tok)
    m = _PARAM.fullmatch(tok)
    if m:
        return ParamScalar.var(int(m.group(1)), int(m.group(2) or 1)) * coeff
    return None


def _tokens(term: str) -> list[str]:
    return [t for t in re.split(r"[\s*]+", term.strip()) if t]


def _ring_factor(tok: str, state: dict) -> bool:
    if tok == "u":
        state["u"] += 1
        return True
    m = _TPOW.fullmatch(tok)
    if m:
        state["t"] += int(m.group(1) or 1)
        return True
    return False


def parse_form(text: str) -> OneForm:
    dt: dict[tuple[int, int], object] = {}
    du: dict[tuple[int, int], object] = {}
    for sign, term in split_signed_terms(text):
        toks = _tokens(term)
        if not toks or toks[-1] not in ("dt", "du"):
            raise ParseError(f"term {term!r} must end in dt or du")
        target = dt if toks[-1] == "dt" else du
        coeff = Fraction(sign)
        state = {"t": 0, "u": 0}
        for tok in toks[:-1]:
            c = _coefficient(tok, coeff)
            if c is not None:
                coeff = c
            elif not _ring_factor(tok, state):
                raise ParseError(f"cannot read {tok!r} in {term!r}")
        if state["u"] > 1:
            raise ParseError("write u^2 as p(t) explicitly; at most one u per term")
        key = (state["t"], state["u"])
        target[key] = target.get(key, 0) + coeff

    def ring(d):
        return RingElem(LaurentPoly({k: c for (k, u), c in d.items() if u == 0}),
                        LaurentPoly({k: c for (k, u), c in d.items() if u == 1}))
    return OneForm(ring(dt), ring(du))


def parse_ring(text: str) -> RingElem:
    """'t^2 u', '1', 'u', 't^-1' (a single monomial)."""
    state = {"t": 0, "u": 0}
    for tok in _tokens(text):
        if tok == "1":
            continue
        if not _ring_factor(tok, state):
            raise ParseError(f"cannot read ring factor {tok!r}")
    if state["u"] > 1:
        raise ParseError("at most one u per monomial")
    return RingElem.monomial(state["t"], state["u"])


def parse_gelem(text: str, r: int) -> GElem:
    out = GElem()
    for sign, term in split_signed_terms(text):
        m = re.fullmatch(r"(?:(.*?)\s*\*\s*)?([ehf])\((.*)\)", term.strip())
        coeff = Fraction(sign)
        if m:
            coeff = _scalar_prefix(m.group(1), coeff, term)
            ring = parse_ring(m.group(3))
            x = m.group(2)
            (k, uf, _), = ring.terms()
            out = out + GElem.basis(x, k, uf, coeff)
            continue
        m = re.fullmatch(r"(?:(.*?)\s*\*\s*)?w(\d+)", term.strip())
        if m:
            coeff = _scalar_prefix(m.group(1), coeff, term)
            k = int(m.group(2))
            if k > r:
                raise ParseError(f"w{k} needs r >= {k}")
            out = out + GElem({}, OmegaClass.basis(r, k, coeff))
            continue
        raise ParseError(f"cannot read algebra term {term!r}; expected x(ring) with x in {SL2}")
    return out


def _scalar_prefix(prefix: str | None, coeff, term: str):
    if not prefix:
        return coeff
    for tok in _tokens(prefix):
        c = _coefficient(tok, coeff)
        if c is None:
            raise ParseError(f"bad coefficient {tok!r} in {term!r}")
        coeff = c
    return coeff


def _gens_with_powers(text: str) -> list[tuple[Gen, int]]:
    pos = 0
    out = []
    s = text.strip()
    while pos < len(s):
        if s[pos] in " *\t":
            pos += 1
            continue
        m = _GEN.match(s, pos)
        if not m:
            raise ParseError(f"cannot read generator at {s[pos:]!r}")
        if m.group(4) is not None:
            out.append((Gen("1", int(m.group(4))), 1))
        else:
            out.append((Gen(m.group(1), int(m.group(2))), int(m.group(3) or 1)))
        pos = m.end()
    return out


def _split_coeff(term: str, sign: int):
    coeff = Fraction(sign)
    toks = term.strip()
    m = re.match(r"(\d+(?:/\d+)?)\s*\*\s*", toks)
    if m:
        coeff *= parse_rational(m.group(1))
        toks = toks[m.end():]
    elif _RAT.fullmatch(toks):
        return coeff * parse_rational(toks), ""
    return coeff, toks


def parse_helem(text: str) -> HElem:
    out = HElem()
    for sign, term in split_signed_terms(text):
        coeff, rest = _split_coeff(term, sign)
        gens = _gens_with_powers(rest)
        if len(gens) != 1 or gens[0][1] != 1:
            raise ParseError(f"Heisenberg terms are single generators, got {term!r}")
        g = gens[0][0]
        out = out + HElem.gen(g.kind, g.index, coeff)
    return out


def parse_word(text: str) -> list[Gen]:
    word = []
    for g, e in _gens_with_powers(text):
        word.extend([g] * e)
    return word


def parse_vector(text: str) -> ModuleVector:
    """JSON list schema or text syntax.

    A text monomial names a PBW basis element by its exponent record, so the
    order in which factors are written is ignored.
    """
    s = text.strip()
    if s.startswith("["):
        try:
            return ModuleVector.from_json(json.loads(s))
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad vector JSON: {exc}") from exc
    acc = ModuleVector()
    for sign, term in split_signed_terms(s):
        coeff, rest = _split_coeff(term, sign)
        rest = rest.strip()
        if rest.endswith("v"):
            rest = rest[:-1]
        alpha: dict[int, int] = {}
        beta: dict[int, int] = {}
        for g, e in _gens_with_powers(rest):
            if g.kind == "1":
                raise ParseError("central generators are not PBW factors")
            tgt = alpha if g.kind == "b" else beta
            tgt[g.index] = tgt.get(g.index, 0) + e
        acc = acc + ModuleVector.monomial(PBWMonomial.from_exponents(alpha, beta), coeff)
    return acc
