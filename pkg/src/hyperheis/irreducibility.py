"""Descent to the highest-weight line, and the kappa0 = 0 submodule check.

For a nonzero w of positive degree we look for a Borel generator x with
x.w != 0 and deg(x.w) < deg(w). Index-0 generators act on v by lambda or mu,
so they are used shifted: (b1_0 - mu) and (b_0 - lambda).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError, StepBudgetExceeded
from .exact_core import fmt_rational
from .pq_tables import PQTable
from .verma import (
    ONE,
    Gen,
    HighestWeightData,
    ModuleVector,
    PhiSpec,
    Side,
    VermaModule,
    classify_index,
    graded_basis,
    validate_weights,
)


def criterion(hw: HighestWeightData) -> bool:
    return hw.kappa0 != 0


@dataclass(frozen=True)
class Step:
    generator: Gen
    shift: Fraction
    degree: int

    def to_json(self) -> dict:
        return {"generator": str(self.generator), "shift": fmt_rational(self.shift), "degree": self.degree}


@dataclass
class Certificate:
    start: ModuleVector
    steps: list[Step]
    final_scalar: Fraction

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "final_scalar": fmt_rational(self.final_scalar),
        }


@dataclass
class Failure:
    start: ModuleVector
    steps: list[Step]
    stuck: ModuleVector

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "stuck": self.stuck.to_json(),
            "stuck_degree": self.stuck.degree,
        }


def apply_step(module: VermaModule, g: Gen, shift: Fraction, w: ModuleVector) -> ModuleVector:
    out = module.act(g, w)
    return out - w.scale(shift) if shift else out


def _candidates(w: ModuleVector, module: VermaModule, bound: int):
    phi = module.phi
    seen = set()
    # b_{-k} against b-factors, greatest index first
    b_idx = sorted({g.index for m, _ in w.items() for g, _ in m.factors if g.kind == "b"}, reverse=True)
    for k in b_idx:
        g = Gen("b", -k)
        if classify_index(-k, phi) is Side.RAISING and g not in seen:
            seen.add(g)
            yield g
    raising = [k for k in sorted(range(-bound, bound + 1), key=lambda k: (abs(k), k))
               if k == 0 or classify_index(k, phi) is Side.RAISING]
    for kind in ("b1", "b"):
        for k in raising:
            g = Gen(kind, k)
            if g not in seen:
                seen.add(g)
                yield g


def default_bound(w: ModuleVector, r: int) -> int:
    top = max((abs(g.index) for m, _ in w.items() for g, _ in m.factors), default=0)
    return top + r + 2


def find_raising_witness(w: ModuleVector, hw: HighestWeightData, phi: PhiSpec, table: PQTable,
                         search_window: int | None = None, module: VermaModule | None = None):
    """(generator, shift, x.w) lowering the degree of w, or None if the window has none."""
    module = module or VermaModule(hw, phi, table)
    if not w or w.degree < 1:
        raise PreconditionError("a witness is only sought for nonzero vectors of positive degree")
    bound = default_bound(w, table.r) if search_window is None else search_window
    deg = w.degree
    for g in _candidates(w, module, bound):
        shift = module.top_action(g) if g.index == 0 else Fraction(0)
        out = apply_step(module, g, shift, w)
        if out and out.degree < deg:
            return g, shift, out
    return None


def descent_certificate(w: ModuleVector, hw: HighestWeightData, phi: PhiSpec, table: PQTable,
                        search_window: int | None = None, max_steps: int | None = None,
                        module: VermaModule | None = None) -> Certificate | Failure:
    if not w:
        raise PreconditionError("cannot certify the zero vector")
    module = module or VermaModule(hw, phi, table)
    budget = w.degree if max_steps is None else max_steps
    cur = w
    steps: list[Step] = []
    while cur.degree > 0:
        if len(steps) >= budget:
            raise StepBudgetExceeded(f"no descent within {budget} steps")
        found = find_raising_witness(cur, hw, phi, table, search_window, module)
        if found is None:
            return Failure(w, steps, cur)
        g, shift, cur = found
        steps.append(Step(g, shift, cur.degree))
    return Certificate(w, steps, cur.coeff(ONE))


def replay(cert: Certificate, module: VermaModule) -> bool:
    """Re-execute every step and check degrees and the final multiple of v."""
    cur = cert.start
    for s in cert.steps:
        nxt = apply_step(module, s.generator, s.shift, cur)
        if nxt.degree != s.degree or not nxt or nxt.degree >= cur.degree:
            return False
        cur = nxt
    return cur == ModuleVector.highest(cert.final_scalar) and cert.final_scalar != 0


@dataclass
class ProbeReport:
    verdict: str
    per_degree: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict in ("AllWitnessed", "ProperSubmoduleConfirmed")

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "per_degree": self.per_degree,
                "failures": self.failures, "warnings": self.warnings}


MAX_RECORDED_FAILURES = 20


def _record(report: ProbeReport, entry: dict) -> None:
    if len(report.failures) < MAX_RECORDED_FAILURES:
        report.failures.append(entry)


def random_combination(basis: list, rng: random.Random, max_terms: int = 5) -> ModuleVector:
    k = rng.randint(1, min(max_terms, len(basis)))
    acc = {}
    for mono in rng.sample(basis, k):
        num = rng.choice([x for x in range(-9, 10) if x])
        den = rng.randint(1, 9)
        acc[mono] = Fraction(num, den)
    return ModuleVector(acc)


def _weight_warnings(hw, phi, table, window) -> list[str]:
    rep = validate_weights(hw, phi, table, window)
    return [v.describe() for v in (rep.violations + rep.kappa0_conflicts)[:5]]


def probe_irreducibility(hw: HighestWeightData, phi: PhiSpec, table: PQTable, max_degree: int,
                         index_window: Iterable[int], n_random: int = 20, seed: int = 0,
                         search_window: int | None = None) -> ProbeReport:
    """Certify every basis monomial and ``n_random`` random combinations per degree.

    Stops at the first degree containing a failure; certificates are replayed.
    """
    window = sorted(set(index_window))
    module = VermaModule(hw, phi, table)
    rng = random.Random(seed)
    report = ProbeReport("AllWitnessed", warnings=_weight_warnings(hw, phi, table, max(map(abs, window), default=1)))
    for d in range(1, max_degree + 1):
        basis = graded_basis(d, window, phi)
        vectors = [ModuleVector.monomial(m) for m in basis]
        if basis:
            vectors += [random_combination(basis, rng) for _ in range(n_random)]
        witnessed = replayed = failed = 0
        for vec in vectors:
            res = descent_certificate(vec, hw, phi, table, search_window, module=module)
            if isinstance(res, Certificate):
                witnessed += 1
                if replay(res, module):
                    replayed += 1
                else:
                    failed += 1
                    _record(report, {"degree": d, "kind": "ReplayMismatch", "certificate": res.to_json()})
            else:
                failed += 1
                _record(report, {"degree": d, "kind": "WitnessFailure", "vector": vec.to_json(),
                                 "stuck": res.stuck.to_json()})
        report.per_degree.append({"degree": d, "tested": len(vectors), "witnessed": witnessed,
                                  "replayed": replayed})
        if failed:
            kinds = {f["kind"] for f in report.failures}
            report.verdict = "WitnessFailure" if "WitnessFailure" in kinds else "ReplayMismatch"
            break
    return report


def verify_proper_submodule(hw: HighestWeightData, phi: PhiSpec, table: PQTable, max_degree: int,
                            index_window: Iterable[int]) -> ProbeReport:
    """With kappa0 = 0, check no generator sends a positive-degree basis vector onto v."""
    if hw.kappa0 != 0:
        raise PreconditionError("the positive-degree part is only a submodule when kappa0 = 0")
    window = sorted(set(index_window))
    module = VermaModule(hw, phi, table)
    bound = max(map(abs, window), default=0)
    gens = [Gen(kind, k) for kind in ("b", "b1") for k in range(-bound, bound + 1)]
    gens += [Gen("1", i) for i in range(table.r + 1)]
    report = ProbeReport("ProperSubmoduleConfirmed", warnings=_weight_warnings(hw, phi, table, max(bound, 1)))
    for d in range(1, max_degree + 1):
        basis = graded_basis(d, window, phi)
        leaks = 0
        for mono in basis:
            for g in gens:
                c = module.act_monomial(g, mono).get(ONE, Fraction(0))
                if c:
                    leaks += 1
                    _record(report, {"degree": d, "kind": "SubmoduleLeak",
                                     "vector": ModuleVector.monomial(mono).to_json(),
                                     "generator": str(g), "coefficient_on_v": fmt_rational(c)})
        report.per_degree.append({"degree": d, "tested": len(basis) * len(gens), "leaks": leaks})
    if any(row["leaks"] for row in report.per_degree):
        report.verdict = "SubmoduleLeak"
    return report
