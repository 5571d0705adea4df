"""Command-line front end.

Exit codes: 0 success or affirmative finding, 1 negative finding (violation,
leak, witness failure), 2 invalid input.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import algebra, irreducibility, verma
from .errors import HyperHeisError
from .exact_core import fmt_scalar, parse_rational
from .kahler import CurveSpec, reduce
from .pq_tables import PQTable
from .syntax import parse_form, parse_gelem, parse_helem, parse_vector, parse_word

DEFAULTS = {"window": 5, "max_degree": 4, "seed": 42, "format": "text", "phi_flips": [], "n_random": 20}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    r: int | None = None
    a: list[str] | None = None
    symbolic: bool = False
    phi_flips: list[int] = field(default_factory=list)
    weights: dict | None = None
    window: int = 5
    max_degree: int = 4
    seed: int = 42
    format: str = "text"
    strict: bool = False
    n_random: int = 20

    def curve(self) -> CurveSpec:
        if self.symbolic or self.a is None:
            r = self.r if self.r is not None else (len(self.a) if self.a else 1)
            if r < 1:
                raise UsageError("--r must be positive")
            return CurveSpec.symbolic(r)
        values = [parse_rational(str(x)) for x in self.a]
        if self.r is not None and self.r != len(values):
            raise UsageError(f"--r {self.r} disagrees with {len(values)} values in --a")
        return CurveSpec.specialized(values)

    def specialized_curve(self) -> CurveSpec:
        curve = self.curve()
        if curve.is_symbolic:
            raise UsageError("this command needs a specialized curve; pass --a a1,...,ar")
        return curve

    def phi(self) -> verma.PhiSpec:
        return verma.PhiSpec(frozenset(self.phi_flips))

    def highest_weight(self, r: int) -> verma.HighestWeightData:
        data = {"lambda": "0", "mu": "0", "kappa0": "1", "chi": ["0"] * r}
        data.update(self.weights or {})
        hw = verma.HighestWeightData.from_json(data)
        if hw.r != r:
            raise UsageError(f"weights carry {hw.r} chi values but r = {r}")
        return hw


def _csv(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def build_config(ns: argparse.Namespace) -> RunConfig:
    """Merge defaults < config file < flags."""
    merged = dict(DEFAULTS)
    file_cfg = _load_config(ns.config)
    for key in ("r", "a", "phi_flips", "weights", "window", "max_degree", "seed", "format", "n_random"):
        if key in file_cfg:
            merged[key] = file_cfg[key]
    if file_cfg.get("a") == "symbolic":
        merged["a"] = None
        merged["symbolic"] = True
    if ns.r is not None:
        merged["r"] = ns.r
    if ns.a is not None:
        merged["a"] = _csv(ns.a)
    if ns.symbolic:
        merged["symbolic"] = True
    if ns.phi_flips is not None:
        merged["phi_flips"] = [int(x) for x in _csv(ns.phi_flips)]
    if ns.weights is not None:
        try:
            merged["weights"] = json.loads(ns.weights)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--weights is not JSON: {exc}") from exc
    for key in ("window", "max_degree", "seed", "format", "n_random"):
        val = getattr(ns, key, None)
        if val is not None:
            merged[key] = val
    cfg = RunConfig(
        r=merged.get("r"),
        a=[str(x) for x in merged["a"]] if merged.get("a") else None,
        symbolic=bool(merged.get("symbolic", False)),
        phi_flips=[int(x) for x in merged.get("phi_flips") or []],
        weights=merged.get("weights"),
        window=int(merged["window"]),
        max_degree=int(merged["max_degree"]),
        seed=int(merged["seed"]),
        format=str(merged["format"]),
        strict=bool(ns.strict_paper_formulas),
        n_random=int(merged["n_random"]),
    )
    if cfg.window < 1:
        raise UsageError("window must be positive")
    if cfg.format not in ("text", "json"):
        raise UsageError("format must be text or json")
    if cfg.weights is not None and not isinstance(cfg.weights, dict):
        raise UsageError("weights must be a JSON object")
    return cfg


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _is_heisenberg(text: str) -> bool:
    return bool(re.search(r"b1?\[|1_\d", text))


def cmd_pq(cfg, ns) -> int:
    table = PQTable(cfg.curve())
    r = table.r
    P = {f"{k},{i}": fmt_scalar(table.p_poly(k, i)) for k in range(-r, ns.k_max + 1) for i in range(-r, 0)}
    Q = {f"{m},{i}": fmt_scalar(table.q_poly(m, i)) for m in range(1, ns.m_max + 1) for i in range(-r, 0)}
    lines = [f"P[{key}] = {val}" for key, val in P.items()] + [f"Q[{key}] = {val}" for key, val in Q.items()]
    _emit(cfg, {"P": P, "Q": Q}, "\n".join(lines))
    return 0


def cmd_reduce(cfg, ns) -> int:
    curve = cfg.curve()
    cls = reduce(parse_form(ns.form), curve)
    _emit(cfg, {"coefficients": cls.to_json(), "text": str(cls)}, str(cls))
    return 0


def cmd_bracket(cfg, ns) -> int:
    curve = cfg.curve()
    table = PQTable(curve)
    form = algebra.FormChoice(ns.form)
    if _is_heisenberg(ns.x) or _is_heisenberg(ns.y):
        out = algebra.h_bracket(parse_helem(ns.x), parse_helem(ns.y), table)
    else:
        x, y = parse_gelem(ns.x, curve.r), parse_gelem(ns.y, curve.r)
        if ns.engine == "paper":
            out = algebra.bracket_paper(x, y, table, form, strict=cfg.strict)
        else:
            out = algebra.bracket_canonical(x, y, curve, form)
    _emit(cfg, {"result": out.to_json(), "text": str(out)}, str(out))
    return 0


def cmd_jacobi(cfg, ns) -> int:
    curve = cfg.curve()
    table = PQTable(curve)
    x, y, z = (parse_gelem(s, curve.r) for s in (ns.x, ns.y, ns.z))
    res = algebra.jacobi_residual(x, y, z, table, ns.engine, algebra.FormChoice(ns.form), cfg.strict)
    _emit(cfg, {"residual": res.to_json(), "zero": res.is_zero(), "text": str(res)}, str(res))
    return 0 if res.is_zero() else 1


def cmd_audit(cfg, ns) -> int:
    table = PQTable(cfg.curve())
    rep = algebra.compare_normalization(range(-cfg.window, cfg.window + 1), table, algebra.FormChoice(ns.form))
    text = "\n".join(f"{k}: {v['verdict']}" + (f" (canonical/relation = {v['ratio']})" if v["ratio"] else "")
                     for k, v in rep.items())
    _emit(cfg, rep, text)
    return 0


def _module_context(cfg):
    curve = cfg.specialized_curve()
    table = PQTable(curve)
    return table, cfg.highest_weight(curve.r), cfg.phi()


def cmd_validate(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    rep = verma.validate_weights(hw, phi, table, cfg.window)
    lines = ["valid" if rep.valid else "INVALID"]
    lines += [v.describe() for v in rep.violations[:20]]
    if rep.kappa0_conflicts:
        lines.append("kappa0 conflicts inside the Borel part:")
        lines += [v.describe() for v in rep.kappa0_conflicts[:20]]
    lines.append(f"admissible chi space dimension: {len(rep.admissible_chi)}")
    _emit(cfg, rep.to_json(), "\n".join(lines))
    return 0 if rep.consistent else 1


def cmd_act(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    word, w = parse_word(ns.word), parse_vector(ns.vector)
    out = verma.VermaModule(hw, phi, table).act_word(word, w)
    _emit(cfg, {"vector": out.to_json(), "degree": out.degree, "text": str(out)}, str(out))
    return 0


def cmd_witness(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    w = parse_vector(ns.vector)
    found = irreducibility.find_raising_witness(w, hw, phi, table, ns.search_window)
    if found is None:
        _emit(cfg, {"found": False}, "no witness in the search window")
        return 1
    g, shift, out = found
    label = str(g) if not shift else f"({g} - {fmt_scalar(shift)})"
    _emit(cfg, {"found": True, "generator": str(g), "shift": fmt_scalar(shift), "result": out.to_json()},
          f"{label}: {out}")
    return 0


def cmd_certify(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    w = parse_vector(ns.vector)
    res = irreducibility.descent_certificate(w, hw, phi, table, ns.search_window, ns.max_steps)
    if isinstance(res, irreducibility.Certificate):
        module = verma.VermaModule(hw, phi, table)
        ok = irreducibility.replay(res, module)
        payload = {"certificate": res.to_json(), "replayed": ok}
        text = "\n".join([f"start: {w}"] + [f"apply {s.generator}" + (f" - {fmt_scalar(s.shift)}" if s.shift else "")
                                             + f" -> degree {s.degree}" for s in res.steps]
                         + [f"final: {fmt_scalar(res.final_scalar)} v", f"replayed: {ok}"])
        _emit(cfg, payload, text)
        return 0 if ok else 1
    _emit(cfg, {"failure": res.to_json()}, f"stuck at degree {res.stuck.degree}: {res.stuck}")
    return 1


def _window(cfg) -> range:
    return range(-cfg.window, cfg.window + 1)


def _report_text(rep) -> str:
    lines = [rep.verdict]
    for row in rep.per_degree:
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in row.items()))
    for f in rep.failures[:5]:
        lines.append("  failure: " + json.dumps(f, sort_keys=True))
    return "\n".join(lines)


def cmd_probe(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    rep = irreducibility.probe_irreducibility(hw, phi, table, cfg.max_degree, _window(cfg),
                                              cfg.n_random, cfg.seed)
    payload = rep.to_json()
    payload["criterion"] = irreducibility.criterion(hw)
    _emit(cfg, payload, _report_text(rep) + f"\ncriterion (kappa0 != 0): {irreducibility.criterion(hw)}")
    return 0 if rep.ok else 1


def cmd_submodule(cfg, ns) -> int:
    table, hw, phi = _module_context(cfg)
    rep = irreducibility.verify_proper_submodule(hw, phi, table, cfg.max_degree, _window(cfg))
    _emit(cfg, rep.to_json(), _report_text(rep))
    return 0 if rep.ok else 1


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--r", type=int, help="curve degree parameter r")
    common.add_argument("--a", help="comma-separated rationals a1,...,ar")
    common.add_argument("--symbolic", action="store_true", help="keep a1..ar as indeterminates")
    common.add_argument("--phi-flips", dest="phi_flips", help="comma-separated positive integers m with phi(m) = -")
    common.add_argument("--weights", help='JSON, e.g. {"lambda":"1","mu":"0","kappa0":"1","chi":["0"]}')
    common.add_argument("--window", type=int)
    common.add_argument("--max-degree", dest="max_degree", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--n-random", dest="n_random", type=int)
    common.add_argument("--format", choices=["text", "json"])
    common.add_argument("--strict-paper-formulas", dest="strict_paper_formulas", action="store_true",
                        help="use the closed-form bracket formulas without corrections")

    parser = argparse.ArgumentParser(prog="hyperheis", description="Hyperelliptic Heisenberg algebra engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pq", parents=[common], help="P/Q recursion tables")
    p.add_argument("--k-max", dest="k_max", type=int, default=5)
    p.add_argument("--m-max", dest="m_max", type=int, default=5)
    p.set_defaults(func=cmd_pq)

    p = sub.add_parser("reduce", parents=[common], help="reduce a 1-form to the w0..wr basis")
    p.add_argument("form")
    p.set_defaults(func=cmd_reduce)

    for name, nargs, func in (("bracket", ("x", "y"), cmd_bracket), ("jacobi", ("x", "y", "z"), cmd_jacobi)):
        p = sub.add_parser(name, parents=[common])
        for a in nargs:
            p.add_argument(a)
        p.add_argument("--engine", choices=["canonical", "paper"], default="canonical")
        p.add_argument("--form", choices=["trace", "killing"], default="trace")
        p.set_defaults(func=func)

    p = sub.add_parser("audit", parents=[common], help="compare Heisenberg relations with the full bracket")
    p.add_argument("--form", choices=["trace", "killing"], default="trace")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("validate-weights", parents=[common])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("act", parents=[common], help="apply a generator word to a module vector")
    p.add_argument("word")
    p.add_argument("vector")
    p.set_defaults(func=cmd_act)

    for name, func in (("witness", cmd_witness), ("certify", cmd_certify)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("vector")
        p.add_argument("--search-window", dest="search_window", type=int)
        if name == "certify":
            p.add_argument("--max-steps", dest="max_steps", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("probe", parents=[common])
    p.set_defaults(func=cmd_probe)
    p = sub.add_parser("submodule-check", parents=[common])
    p.set_defaults(func=cmd_submodule)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = build_config(ns)
        return ns.func(cfg, ns)
    except (UsageError, HyperHeisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def execute(argv: list[str]) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
