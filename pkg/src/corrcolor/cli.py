"""Command-line interface: parsing, dispatch, and report emission.

Exit codes: 0 success, 1 negative mathematical outcome (e.g. "not
colorable", a failed verification), 2 usage error, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import bounds, io as cio
from .assignment import random_full_exact
from .configs import ConfigurationKind, verify_configuration
from .coloring import is_valid_coloring, solve
from .dpdecide import chi, chi_dp
from .errors import BudgetExceededError, CorrColorError, InputError
from .fixtures import FIXTURE_NAMES, generate_fixture
from .graph import Graph
from .params import PRESETS
from .pipeline import (
    build_setting,
    f_invariant_resample,
    lll_pipeline,
    sample_transversal,
    transversal_check,
)
from .structure import max_disjoint_benefactors, sparse_dense_decomposition

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    """One parsed invocation: where inputs come from, where output goes."""

    subcommand: str
    args: argparse.Namespace
    json_out: bool = False
    seed: int = 0
    output: Optional[str] = None
    overrides: dict = field(default_factory=dict)


def _emit(config: RunConfig, payload: dict, text_lines: list[str]):
    if config.json_out:
        print(json.dumps(payload, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def _load_graph(path: str) -> Graph:
    return cio.parse_graph(Path(path).read_text())


def _write(path: Optional[str], content: str):
    if path:
        Path(path).write_text(content)
    else:
        sys.stdout.write(content)


def _parse_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise InputError(f"override {pair!r} is not key=value")
        key, val = pair.split("=", 1)
        out[key] = val
    return out


# -- subcommand handlers -----------------------------------------------------------


def _cmd_solve(config: RunConfig) -> int:
    ns = config.args
    g = _load_graph(ns.graph)
    if ns.assignment == "random":
        ca = random_full_exact(g, ns.k, config.seed)
    else:
        ca = cio.parse_assignment(Path(ns.assignment).read_text(), g)
    phi = solve(ca)
    if phi is None:
        _emit(config, {"colorable": False}, ["not colorable"])
        return NEGATIVE
    _emit(config, {"colorable": True, "coloring": phi}, ["colorable"])
    _write(config.output, cio.serialize_coloring(phi))
    return OK


def _cmd_chi(config: RunConfig) -> int:
    g = _load_graph(config.args.graph)
    value = chi(g)
    _emit(config, {"chi": value}, [f"chi = {value}"])
    return OK


def _cmd_chidp(config: RunConfig) -> int:
    g = _load_graph(config.args.graph)
    value = chi_dp(g, method=config.args.method)
    _emit(config, {"chi_dp": value}, [f"chi_dp = {value}"])
    return OK


def _cmd_verify_config(config: RunConfig) -> int:
    ns = config.args
    kind = ConfigurationKind(ns.kind)
    report = verify_configuration(
        kind, t=ns.t, a=ns.a, mode=ns.mode, trials=ns.trials, seed=config.seed
    )
    lines = [
        f"kind: {report.kind}",
        f"mode: {report.mode}",
        f"trials: {report.trials}",
        f"successes: {report.successes}",
    ]
    for f_ in report.failures[:3]:
        lines.append("counterexample assignment:")
        lines.append(f_)
    _emit(config, report.as_dict(), lines)
    return OK if report.ok else NEGATIVE


def _cmd_decompose(config: RunConfig) -> int:
    ns = config.args
    g = _load_graph(ns.graph)
    delta = ns.delta
    sigma = ns.sigma if ns.sigma is not None else delta * delta / 120
    rho = ns.rho if ns.rho is not None else delta / 28
    decomposition = sparse_dense_decomposition(g, delta, sigma, rho)
    payload = {
        "dense_parts": [
            {"vertices": nc.vertices, "core": nc.core}
            for nc in decomposition.near_cliques
        ],
        "sparse": decomposition.sparse,
        "violations": decomposition.report.all_violations(),
        "ok": decomposition.report.ok,
    }
    lines = [f"dense parts: {len(decomposition.near_cliques)}"]
    for nc in decomposition.near_cliques:
        lines.append(f"  part size {len(nc.vertices)}, core size {len(nc.core)}")
    lines.append(f"sparse vertices: {len(decomposition.sparse)}")
    lines.append(f"validation: {'ok' if decomposition.report.ok else 'violations'}")
    lines += [f"  {v}" for v in decomposition.report.all_violations()]
    _emit(config, payload, lines)
    return OK if decomposition.report.ok else NEGATIVE


def _cmd_benefactors(config: RunConfig) -> int:
    ns = config.args
    g = _load_graph(ns.graph)
    core = [int(tok) - 1 for tok in Path(ns.core).read_text().split()]
    fam = max_disjoint_benefactors(g, core, ns.delta, ns.m)
    payload = {
        "benefactors": [
            {"anchor": x.anchor + 1, "outside": [u + 1 for u in x.outside()]}
            for x in fam
        ]
    }
    lines = [f"{len(fam)} pairwise disjoint benefactors"]
    for x in fam:
        lines.append(f"  anchor {x.anchor + 1} + {[u + 1 for u in x.outside()]}")
    _emit(config, payload, lines)
    return OK


def _cmd_transversal(config: RunConfig) -> int:
    ns = config.args
    g = _load_graph(ns.graph)
    params = PRESETS[ns.preset]
    setting = build_setting(g, ns.delta, params)
    p = None
    if ns.p:
        p = float(Fraction(ns.p))
    tv, rounds = sample_transversal(
        setting, p, config.seed, ns.policy, ns.max_rounds, ns.max_rounds
    )
    if tv is None:
        _emit(config, {"found": False, "rounds": rounds}, [f"no transversal within {rounds} rounds"])
        return NEGATIVE
    payload = {
        "found": True,
        "rounds": rounds,
        "size": len(tv.vertices),
        "checklist": tv.checklist,
        "vertices": sorted(v + 1 for v in tv.vertices),
    }
    _emit(
        config,
        payload,
        [f"transversal of size {len(tv.vertices)} after {rounds} resampling rounds"],
    )
    return OK


def _cmd_pipeline(config: RunConfig) -> int:
    ns = config.args
    g = _load_graph(ns.graph)
    params = PRESETS[ns.preset]
    ca = None
    if ns.assignment != "random":
        ca = cio.parse_assignment(Path(ns.assignment).read_text(), g)
    result = lll_pipeline(
        g, ns.delta, params, config.seed, ca, max_rounds=ns.max_rounds
    )
    lines = [f"success: {result.success}"]
    for key in ("rounds", "events_fired", "transversal_size", "failure"):
        if key in result.report:
            lines.append(f"{key}: {result.report[key]}")
    _emit(config, {"success": result.success, "report": result.report}, lines)
    if result.success:
        _write(config.output, cio.serialize_coloring(result.coloring))
        return OK
    return NEGATIVE


def _cmd_audit(config: RunConfig) -> int:
    rows = bounds.inequality_audit(config.args.delta)
    payload = {
        "delta": config.args.delta,
        "rows": [
            {
                "name": r.name,
                "holds": r.holds,
                "margin": r.margin,
                "minimal_delta": r.minimal_delta,
            }
            for r in rows
        ],
        "beta_p": str(bounds.beta_p_constant(config.args.delta)),
    }
    lines = [f"{'inequality':28} {'holds':6} minimal delta"]
    for r in rows:
        lines.append(f"{r.name:28} {str(r.holds):6} {r.minimal_delta}")
    _emit(config, payload, lines)
    return OK if all(r.holds for r in rows) else NEGATIVE


def _cmd_uniformity_test(config: RunConfig) -> int:
    from fractions import Fraction as F

    from .assignment import identity_assignment, uniform_lists
    from .coloring import brute_force_colorings
    from .graph import cycle_graph, path_graph

    ns = config.args
    g = path_graph(3) if ns.fixture == "path3" else cycle_graph(4)
    ca = identity_assignment(g, uniform_lists(g, 2 if ns.fixture == "cycle4" else 3))
    selectors = {
        "empty": lambda phi: frozenset(),
        "all": lambda phi: frozenset(range(g.n)),
        "low-color": lambda phi: frozenset(v for v in range(g.n) if phi[v] == 0),
    }
    selector = selectors[ns.selector]
    colorings = brute_force_colorings(ca)
    n = len(colorings)
    push: dict = {}
    for phi in colorings:
        invariant = [
            psi
            for psi in colorings
            if frozenset(selector(psi)) == frozenset(selector(phi))
            and all(psi[v] == phi[v] for v in phi if v not in selector(phi))
        ]
        for psi in invariant:
            key = tuple(sorted(psi.items()))
            push[key] = push.get(key, F(0)) + F(1, n) * F(1, len(invariant))
    uniform = all(p == F(1, n) for p in push.values()) and len(push) == n
    _emit(
        config,
        {"fixture": ns.fixture, "selector": ns.selector, "exactly_uniform": uniform},
        [f"pushforward uniform: {uniform}"],
    )
    return OK if uniform else NEGATIVE


def _cmd_fixture(config: RunConfig) -> int:
    ns = config.args
    params = {}
    for key, val in config.overrides.items():
        try:
            params[key] = int(val)
        except ValueError:
            try:
                params[key] = float(val)
            except ValueError:
                params[key] = val
    g, ca = generate_fixture(ns.name, params, config.seed)
    _write(config.output, cio.serialize_graph(g))
    if ca is not None and ns.assignment_out:
        Path(ns.assignment_out).write_text(cio.serialize_assignment(ca))
    if config.output:
        print(f"wrote {ns.name}: {g.n} vertices, {g.m} edges")
    return OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrcolor",
        description="correspondence-coloring toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="DIMACS-like edge list")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")
        p.add_argument("--out", default=None)

    p = sub.add_parser("solve", help="find an (L,Pi)-coloring")
    common(p)
    p.add_argument("--assignment", default="random", help="'random' or a file")
    p.add_argument("--k", type=int, default=3, help="list size for random assignments")

    p = sub.add_parser("chi", help="exact chromatic number")
    common(p)

    p = sub.add_parser("chidp", help="exact correspondence chromatic number")
    common(p)
    p.add_argument("--method", default="auto", choices=["auto", "enumerate", "search"])

    p = sub.add_parser("verify-config", help="exercise a configuration colorer")
    common(p, graph=False)
    p.add_argument("--kind", required=True, choices=[k.value for k in ConfigurationKind])
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--mode", default="sampled", choices=["sampled", "exhaustive"])
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("decompose", help="sparse-dense decomposition + validation")
    common(p)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)

    p = sub.add_parser("benefactors", help="disjoint benefactors for a core")
    common(p)
    p.add_argument("--core", required=True, help="file of 1-based core vertices")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--m", type=int, default=85)

    p = sub.add_parser("transversal", help="sample a transversal for the setting")
    common(p)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--preset", default="scaled", choices=list(PRESETS))
    p.add_argument("--p", default=None, help="inclusion probability (fraction ok)")
    p.add_argument("--policy", default="mt_resample", choices=["mt_resample", "reject"])
    p.add_argument("--max-rounds", type=int, default=50)

    p = sub.add_parser("pipeline", help="end-to-end probabilistic colorer")
    common(p)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--preset", default="scaled", choices=list(PRESETS))
    p.add_argument("--assignment", default="random")
    p.add_argument("--max-rounds", type=int, default=1000)

    p = sub.add_parser("audit", help="numeric inequality audit")
    common(p, graph=False)
    p.add_argument("--delta", type=int, required=True)

    p = sub.add_parser("uniformity-test", help="exact resampling uniformity check")
    common(p, graph=False)
    p.add_argument("--fixture", default="path3", choices=["path3", "cycle4"])
    p.add_argument("--selector", default="low-color", choices=["empty", "all", "low-color"])

    p = sub.add_parser("fixture", help="emit a catalogued fixture")
    common(p, graph=False)
    p.add_argument("--name", required=True, choices=FIXTURE_NAMES)
    p.add_argument("--assignment-out", default=None)
    p.add_argument("--params", nargs="*", default=[], help="key=value overrides")

    return parser


HANDLERS = {
    "solve": _cmd_solve,
    "chi": _cmd_chi,
    "chidp": _cmd_chidp,
    "verify-config": _cmd_verify_config,
    "decompose": _cmd_decompose,
    "benefactors": _cmd_benefactors,
    "transversal": _cmd_transversal,
    "pipeline": _cmd_pipeline,
    "audit": _cmd_audit,
    "uniformity-test": _cmd_uniformity_test,
    "fixture": _cmd_fixture,
}


def dispatch(config: RunConfig) -> int:
    handler = HANDLERS[config.subcommand]
    try:
        return handler(config)
    except BudgetExceededError as ex:
        print(f"budget exhausted: {ex}", file=sys.stderr)
        return BUDGET
    except (CorrColorError, FileNotFoundError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return USAGE


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as ex:
        return USAGE if ex.code not in (0, None) else 0
    config = RunConfig(
        subcommand=ns.subcommand,
        args=ns,
        json_out=ns.json,
        seed=ns.seed,
        output=ns.out,
        overrides=_parse_overrides(getattr(ns, "params", [])),
    )
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
