"""phi-Verma modules over the hyperelliptic Heisenberg algebra.

Elements are finite combinations of ordered monomials in lowering generators
applied to the highest-weight vector v. Because every bracket of two
generators is central, moving a generator past a factor f^e costs
e * [g, f] * (monomial with f decremented), with 1_0 -> kappa0 and 1_k -> chi_k.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .algebra import h_pair
from .errors import UnclassifiedIndex, ZeroIndexError
from .exact_core import as_rational, fmt_rational, nullspace, parse_rational
from .pq_tables import PQTable

_KIND_ORDER = {"b": 0, "b1": 1}


class Gen(NamedTuple):
    """A Heisenberg generator: kind "b", "b1" or "1" (central 1_i) and its index."""

    kind: str
    index: int

    def __str__(self) -> str:
        if self.kind == "1":
            return f"1_{self.index}"
        return f"{self.kind}[{self.index}]"

    def sort_key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], self.index)


class Side(Enum):
    RAISING = "raising"
    LOWERING = "lowering"


@dataclass(frozen=True)
class PhiSpec:
    """phi(m) = - exactly for m in ``flips`` (m > 0); phi(-m) = -phi(m)."""

    flips: frozenset = frozenset()

    def __post_init__(self):
        flips = frozenset(int(x) for x in self.flips)
        if any(x <= 0 for x in flips):
            raise ValueError("phi flips must be positive integers")
        object.__setattr__(self, "flips", flips)

    def phi(self, n: int) -> int:
        if n == 0:
            raise ZeroIndexError("phi is not defined at 0")
        s = -1 if abs(n) in self.flips else 1
        return s if n > 0 else -s

    def to_json(self) -> dict:
        return {"flips": sorted(self.flips)}


CLASSICAL = PhiSpec()


def classify_index(k: int, phi: PhiSpec) -> Side:
    """Raising iff phi(|k|) = sgn(k)."""
    if k == 0:
        raise ZeroIndexError("index 0 belongs to the Cartan part")
    sign = 1 if k > 0 else -1
    phi_abs = -1 if abs(k) in phi.flips else 1
    return Side.RAISING if phi_abs == sign else Side.LOWERING


def is_lowering(g: Gen, phi: PhiSpec) -> bool:
    return g.kind in _KIND_ORDER and g.index != 0 and classify_index(g.index, phi) is Side.LOWERING


@dataclass(frozen=True)
class HighestWeightData:
    lam: Fraction
    mu: Fraction
    kappa0: Fraction
    chi: tuple
    rank2: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "mu", as_rational(self.mu))
        object.__setattr__(self, "kappa0", as_rational(self.kappa0))
        object.__setattr__(self, "chi", tuple(as_rational(c) for c in self.chi))
        if self.rank2 is not None:
            object.__setattr__(self, "rank2", tuple(as_rational(c) for c in self.rank2))

    @property
    def r(self) -> int:
        return len(self.chi)

    def central_value(self, i: int) -> Fraction:
        return self.kappa0 if i == 0 else self.chi[i - 1]

    @classmethod
    def from_json(cls, data: Mapping) -> HighestWeightData:
        rank2 = None
        if "nu" in data or "gamma" in data:
            rank2 = (parse_rational(str(data.get("nu", "0"))), parse_rational(str(data.get("gamma", "0"))))
        return cls(
            parse_rational(str(data.get("lambda", "0"))),
            parse_rational(str(data.get("mu", "0"))),
            parse_rational(str(data.get("kappa0", "1"))),
            tuple(parse_rational(str(c)) for c in data.get("chi", [])),
            rank2,
        )

    def to_json(self) -> dict:
        out = {"lambda": fmt_rational(self.lam), "mu": fmt_rational(self.mu),
               "kappa0": fmt_rational(self.kappa0), "chi": [fmt_rational(c) for c in self.chi]}
        if self.rank2 is not None:
            out["nu"], out["gamma"] = (fmt_rational(c) for c in self.rank2)
        return out


@dataclass(frozen=True)
class PBWMonomial:
    """Ordered product of lowering generators: b's by ascending index, then b1's."""

    factors: tuple = ()

    @classmethod
    def from_exponents(cls, alpha: Mapping[int, int] | None = None,
                       beta: Mapping[int, int] | None = None) -> PBWMonomial:
        items = [(Gen("b", int(i)), int(e)) for i, e in (alpha or {}).items() if e]
        items += [(Gen("b1", int(i)), int(e)) for i, e in (beta or {}).items() if e]
        if any(e < 0 for _, e in items):
            raise ValueError("negative exponent")
        return cls(tuple(sorted(items, key=lambda ge: ge[0].sort_key())))

    @property
    def alpha(self) -> dict[int, int]:
        return {g.index: e for g, e in self.factors if g.kind == "b"}

    @property
    def beta(self) -> dict[int, int]:
        return {g.index: e for g, e in self.factors if g.kind == "b1"}

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def sort_key(self):
        return (self.degree, tuple((g.sort_key(), e) for g, e in self.factors))

    def decrement(self, pos: int) -> PBWMonomial:
        g, e = self.factors[pos]
        if e == 1:
            return PBWMonomial(self.factors[:pos] + self.factors[pos + 1:])
        return PBWMonomial(self.factors[:pos] + ((g, e - 1),) + self.factors[pos + 1:])

    def __str__(self) -> str:
        if not self.factors:
            return "v"
        return " ".join(str(g) if e == 1 else f"{g}^{e}" for g, e in self.factors) + " v"


ONE = PBWMonomial()


class ModuleVector:
    """Finitely supported map PBWMonomial -> Fraction."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[PBWMonomial, object] | None = None):
        self._c = {m: Fraction(c) for m, c in (coeffs or {}).items() if c}

    @classmethod
    def highest(cls, c=1) -> ModuleVector:
        return cls({ONE: c})

    @classmethod
    def monomial(cls, m: PBWMonomial, c=1) -> ModuleVector:
        return cls({m: c})

    def items(self):
        return sorted(self._c.items(), key=lambda kv: kv[0].sort_key())

    def coeff(self, m: PBWMonomial) -> Fraction:
        return self._c.get(m, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: ModuleVector) -> ModuleVector:
        out = dict(self._c)
        for m, c in other._c.items():
            out[m] = out.get(m, 0) + c
        return ModuleVector(out)

    def scale(self, c) -> ModuleVector:
        return ModuleVector({m: v * c for m, v in self._c.items()})

    def __neg__(self) -> ModuleVector:
        return self.scale(-1)

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        return self + (-other)

    @property
    def degree(self) -> int:
        """Largest total exponent among monomials present; -1 for the zero vector."""
        return max((m.degree for m in self._c), default=-1)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for m, c in self.items():
            s = fmt_rational(c)
            body = str(m)
            parts.append(body if s == "1" else ("-" + body if s == "-1" else f"{s}*{body}"))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> list[dict]:
        return [{"alpha": {str(i): e for i, e in sorted(m.alpha.items())},
                 "beta": {str(i): e for i, e in sorted(m.beta.items())},
                 "coeff": fmt_rational(c)} for m, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> ModuleVector:
        acc: dict[PBWMonomial, Fraction] = {}
        for item in data:
            m = PBWMonomial.from_exponents({int(k): int(v) for k, v in item.get("alpha", {}).items()},
                                           {int(k): int(v) for k, v in item.get("beta", {}).items()})
            acc[m] = acc.get(m, 0) + parse_rational(str(item["coeff"]))
        return cls(acc)


class VermaModule:
    """The induced module for fixed weights, phi and a specialized curve.

    Central scalars of generator pairs are memoized per instance.
    """

    def __init__(self, hw: HighestWeightData, phi: PhiSpec, table: PQTable):
        if table.curve.is_symbolic:
            raise ValueError("module computations need a specialized curve")
        if hw.r != table.r:
            raise ValueError(f"weights carry {hw.r} chi values, curve has r = {table.r}")
        self.hw = hw
        self.phi = phi
        self.table = table
        self._scalar: dict[tuple[Gen, Gen], Fraction] = {}

    def central_scalar(self, g: Gen, h: Gen) -> Fraction:
        """Scalar by which [g, h] acts."""
        if g.kind == "1" or h.kind == "1":
            return Fraction(0)
        key = (g, h)
        val = self._scalar.get(key)
        if val is None:
            val = Fraction(0)
            for i, c in h_pair(g.kind, g.index, h.kind, h.index, self.table).items():
                val += c * self.hw.central_value(i)
            self._scalar[key] = val
        return val

    def is_lowering(self, g: Gen) -> bool:
        return is_lowering(g, self.phi)

    def top_action(self, g: Gen) -> Fraction:
        """g v = (this) v for g in the Borel part."""
        if g.kind == "1":
            return self.hw.central_value(g.index)
        if g.index == 0:
            return self.hw.lam if g.kind == "b" else self.hw.mu
        return Fraction(0)

    def act_monomial(self, g: Gen, mono: PBWMonomial) -> dict[PBWMonomial, Fraction]:
        out: dict[PBWMonomial, Fraction] = {}

        def add(m, c):
            if c:
                out[m] = out.get(m, 0) + c

        if g.kind == "1":
            add(mono, self.hw.central_value(g.index))
            return out
        if g.kind not in _KIND_ORDER:
            raise UnclassifiedIndex(f"unknown generator {g!r}")
        factors = mono.factors
        if self.is_lowering(g):
            key = g.sort_key()
            pos = 0
            # g f^e = f^e g + e [g, f] f^(e-1) for every factor ordered before g
            while pos < len(factors) and factors[pos][0].sort_key() < key:
                f, e = factors[pos]
                add(mono.decrement(pos), e * self.central_scalar(g, f))
                pos += 1
            if pos < len(factors) and factors[pos][0] == g:
                new = factors[:pos] + ((g, factors[pos][1] + 1),) + factors[pos + 1:]
            else:
                new = factors[:pos] + ((g, 1),) + factors[pos:]
            add(PBWMonomial(new), Fraction(1))
            return out
        # Borel generator: commute all the way to v
        for pos, (f, e) in enumerate(factors):
            add(mono.decrement(pos), e * self.central_scalar(g, f))
        add(mono, self.top_action(g))
        return out

    def act(self, g: Gen, w: ModuleVector) -> ModuleVector:
        acc: dict[PBWMonomial, Fraction] = {}
        for mono, c in w.items():
            for m, v in self.act_monomial(g, mono).items():
                acc[m] = acc.get(m, 0) + c * v
        return ModuleVector(acc)

    def act_word(self, word: Sequence[Gen], w: ModuleVector) -> ModuleVector:
        """Apply ``word`` as a product, rightmost generator first."""
        for g in reversed(list(word)):
            w = self.act(g, w)
        return w


def act_word(word: Sequence[Gen], w: ModuleVector, hw: HighestWeightData, phi: PhiSpec,
             table: PQTable, check: bool = True) -> ModuleVector:
    if check:
        report = validate_weights(hw, phi, table, window=max([abs(g.index) for g in word] + [1]))
        if not report.consistent:
            warnings.warn("highest-weight data violates the Borel constraints", stacklevel=2)
    return VermaModule(hw, phi, table).act_word(word, w)


def graded_basis(n: int, window: Iterable[int], phi: PhiSpec) -> list[PBWMonomial]:
    """All ordered monomials of total degree n in the lowering generators indexed by ``window``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    idx = sorted({k for k in window if k != 0 and classify_index(k, phi) is Side.LOWERING})
    gens = [Gen("b", k) for k in idx] + [Gen("b1", k) for k in idx]
    out = []
    for combo in itertools.combinations_with_replacement(gens, n):
        counts: dict[Gen, int] = {}
        for g in combo:
            counts[g] = counts.get(g, 0) + 1
        out.append(PBWMonomial(tuple(sorted(counts.items(), key=lambda ge: ge[0].sort_key()))))
    return out


@dataclass
class Violation:
    kind: str  # "chi" (b1/b pair) or "kappa0" (b/b or b1/b1 pair)
    m: int
    n: int
    coefficients: list
    value: Fraction

    def describe(self) -> str:
        if self.kind == "chi":
            lhs = " + ".join(f"({fmt_rational(c)})*chi{k}" for k, c in enumerate(self.coefficients, 1))
            return f"[b1[{self.m}], b[{self.n}]]: {lhs} = {fmt_rational(self.value)} != 0"
        return (f"[{self.coefficients[0]}[{self.m}], {self.coefficients[1]}[{self.n}]] acts by "
                f"{fmt_rational(self.value)} != 0 on v")

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": self.m, "n": self.n,
                "coefficients": [c if isinstance(c, str) else fmt_rational(c) for c in self.coefficients],
                "value": fmt_rational(self.value), "text": self.describe()}


@dataclass
class WeightReport:
    """``valid`` refers to the chi system; ``kappa0_conflicts`` lists Borel pairs
    whose bracket is a nonzero multiple of 1_0 (possible for nonclassical phi)."""

    valid: bool
    violations: list[Violation] = field(default_factory=list)
    kappa0_conflicts: list[Violation] = field(default_factory=list)
    admissible_chi: list[list[Fraction]] = field(default_factory=list)
    all_pairs_chi: list[list[Fraction]] = field(default_factory=list)
    constraints: int = 0

    @property
    def consistent(self) -> bool:
        return self.valid and not self.kappa0_conflicts

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "consistent": self.consistent,
            "constraints": self.constraints,
            "violations": [v.to_json() for v in self.violations],
            "kappa0_conflicts": [v.to_json() for v in self.kappa0_conflicts],
            "admissible_chi_basis": [[fmt_rational(x) for x in v] for v in self.admissible_chi],
            "admissible_chi_dimension": len(self.admissible_chi),
            "all_pairs_chi_basis": [[fmt_rational(x) for x in v] for v in self.all_pairs_chi],
            "all_pairs_chi_dimension": len(self.all_pairs_chi),
        }


def _in_borel(k: int, phi: PhiSpec) -> bool:
    return k == 0 or classify_index(k, phi) is Side.RAISING


def validate_weights(hw: HighestWeightData, phi: PhiSpec, table: PQTable, window: int) -> WeightReport:
    """Check that v spans a one-dimensional Borel module for indices |m|, |n| <= window.

    The chi rows come from [b1_m, b_n] with both generators in the Borel part
    (the factor 2n is dropped). Pairs [b_m, b_n] and [b1_m, b1_n] inside the Borel
    part must also act by zero; they only involve kappa0.
    """
    r = table.r
    if table.curve.is_symbolic:
        raise ValueError("weight validation needs a specialized curve")
    idx = range(-window, window + 1)
    rows, all_rows, violations, conflicts = [], [], [], []
    for m in idx:
        for n in idx:
            if n == 0:
                continue
            row = list(table.u_coords(m + n - 1))
            all_rows.append(row)
            if _in_borel(m, phi) and _in_borel(n, phi):
                rows.append(row)
                value = sum((c * x for c, x in zip(row, hw.chi)), Fraction(0))
                if value:
                    violations.append(Violation("chi", m, n, row, value))
    for kind in ("b", "b1"):
        for m in idx:
            for n in idx:
                if m >= n or not (_in_borel(m, phi) and _in_borel(n, phi)):
                    continue
                value = sum((c * hw.central_value(i) for i, c in h_pair(kind, m, kind, n, table).items()),
                            Fraction(0))
                if value:
                    conflicts.append(Violation("kappa0", m, n, [kind, kind], value))
    return WeightReport(
        valid=not violations,
        violations=violations,
        kappa0_conflicts=conflicts,
        admissible_chi=nullspace(rows, r),
        all_pairs_chi=nullspace(all_rows, r),
        constraints=len(rows),
    )
