"""Command-line front end.  Every command prints one JSON document.

Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage
errors (bad arguments, malformed JSON, invalid weights or points).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from ..weylalg import build_descriptor, coinvariants_laurent
from ..weylmod import (
    default_depth,
    default_truncation,
    local_weyl_module,
    min_annihilator_exponent,
    simple_quotient,
    stability_check,
    tensor,
    twisting_comparison,
)
from . import scenarios
from .suites import SUITES, run_suite, weylalg_suite


class UsageError(Exception):
    pass


def _character_json(char: dict) -> list:
    return [[[int(a) for a in w], m] for w, m in sorted(char.items())]


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def _psi(sc: scenarios.Scenario, text: str | None):
    if text is None:
        given, psi = sc.psi()
    else:
        raw = _load_json(text, "--psi")
        if not isinstance(raw, dict) or not raw:
            raise UsageError("--psi must be a nonempty JSON object")
        try:
            values = {sc.field.parse(k): tuple(v) for k, v in raw.items()}
            given, psi = sc.psi(values)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"invalid --psi: {exc}") from None
    added = [x for x in psi.points if x not in given.points]
    return psi, {
        "psi": psi.to_json(),
        "completion_added": [sc.field.encode(x) for x in added],
    }


def _module(sc, args, text=None):
    psi, report = _psi(sc, args.psi if text is None else text)
    fd = sc.folded()
    W = local_weyl_module(fd, psi, args.N, args.D)
    return fd, psi, W, report


# ---------------------------------------------------------------------------
# commands


def cmd_fold(sc, args) -> dict:
    fd = sc.folded()
    out = fd.to_json()
    out["folded_type"] = fd.folded_type
    return out


def cmd_local_weyl(sc, args) -> dict:
    fd, psi, W, report = _module(sc, args)
    N = W.diagnostics.get("N")
    lam = tuple(int(a) for a in fd.restrict_weight(psi.total_weight()))
    D = default_depth(fd, lam) if args.D is None else args.D
    out = dict(report)
    out.update({
        "lambda": list(lam),
        "truncation": N,
        "depth": D,
        "dimension": W.dim,
        "character": _character_json(W.character()),
        "zero_module": W.dim == 0,
        "annihilator_exponent": min_annihilator_exponent(W) if W.dim else 0,
        "stability": None if args.no_stability else stability_check(fd, psi, N, D),
    })
    return out


def cmd_simple(sc, args) -> dict:
    fd, psi, W, report = _module(sc, args)
    V = simple_quotient(W)
    out = dict(report)
    out.update({
        "weyl_dimension": W.dim,
        "dimension": V.dim,
        "character": _character_json(V.character()),
    })
    return out


def cmd_char(sc, args) -> dict:
    psi, report = _psi(sc, args.psi)
    twisted, untwisted = twisting_comparison(sc.folded(), psi, args.N)
    out = dict(report)
    out.update({
        "character": _character_json(twisted),
        "untwisted_restricted": _character_json(untwisted),
        "equal": twisted == untwisted,
    })
    return out


def cmd_tensor(sc, args) -> dict:
    fd, _, W1, r1 = _module(sc, args)
    _, _, W2, r2 = _module(sc, args, args.psi2)
    T = tensor(W1, W2)
    return {
        "psi": r1["psi"],
        "psi2": r2["psi"],
        "dimensions": [W1.dim, W2.dim],
        "dimension": T.dim,
        "character": _character_json(T.character()),
    }


def cmd_annihilator(sc, args) -> dict:
    fd, psi, W, report = _module(sc, args)
    exponent = min_annihilator_exponent(W) if W.dim else 0
    bound = default_truncation(fd, psi)
    out = dict(report)
    out.update({"annihilator_exponent": exponent, "bound": bound, "within_bound": exponent <= bound})
    return out


def cmd_bba(sc, args) -> dict:
    fd = sc.folded()
    lam = _load_json(args.lam, "--lambda")
    if not isinstance(lam, list) or len(lam) != len(fd.orbits) or not all(isinstance(a, int) for a in lam):
        raise UsageError(f"--lambda must be a list of {len(fd.orbits)} integers")
    try:
        desc = build_descriptor(lam, fd, sc.ring())
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = desc.to_json()
    out["coinvariants"] = [
        coinvariants_laurent(f.isotropy, r=f.r).to_json() for f in desc.factors if f.isotropy > 1
    ]
    return out


def cmd_bba_check(sc, args) -> dict:
    results = weylalg_suite(sc, args.samples, args.seed, args.degree_bound)
    return {"results": [{"property": p, "passed": ok} for p, ok in results]}


def _verify_job(job):
    suite, name = job
    return suite, name, run_suite(suite, scenarios.get(name))


def cmd_verify(sc_names, args) -> dict:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    jobs = [(s, n) for n in sc_names for s in suites]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_verify_job, jobs))
    else:
        results = [_verify_job(j) for j in jobs]
    rows = [
        {"scenario": name, "suite": suite, "property": prop, "passed": ok}
        for suite, name, res in results
        for prop, ok in res
    ]
    return {"results": rows, "passed": all(r["passed"] for r in rows)}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emaweyl", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="worker processes for verify")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario(p, allow_all=False):
        choices = list(scenarios.SCENARIOS) + (["all"] if allow_all else [])
        p.add_argument("--scenario", required=True, choices=choices)

    def module_args(p):
        p.add_argument("--psi", help='JSON object, e.g. \'{"1": [2]}\'; orbits are completed')
        p.add_argument("--N", type=int, help="truncation exponent (default: annihilator bound)")
        p.add_argument("--D", "--depth", dest="D", type=int, help="depth window (default: depth of the lowest weight)")

    p = sub.add_parser("fold", help="fold the scenario's Lie algebra")
    scenario(p)
    p = sub.add_parser("local-weyl", help="local Weyl module of a weight function")
    scenario(p)
    module_args(p)
    p.add_argument("--no-stability", action="store_true", help="skip the enlarged re-run")
    for name, text in [("simple", "simple quotient"), ("char", "character and twisting comparison"),
                       ("annihilator", "minimal annihilating power of the point ideal")]:
        p = sub.add_parser(name, help=text)
        scenario(p)
        module_args(p)
    p = sub.add_parser("tensor", help="tensor product of two local Weyl modules")
    scenario(p)
    module_args(p)
    p.add_argument("--psi2", required=True, help="second weight function")
    p = sub.add_parser("bba", help="symmetric-power model for a folded weight")
    scenario(p)
    p.add_argument("--lambda", dest="lam", required=True, help="JSON list of folded weight coefficients")
    p = sub.add_parser("bba-check", help="bijection, evaluation and coinvariant checks")
    scenario(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree-bound", type=int, default=8)
    p = sub.add_parser("verify", help="run invariant suites")
    scenario(p, allow_all=True)
    p.add_argument("--suite", default="all", choices=["all", *SUITES])
    return parser


COMMANDS = {
    "fold": cmd_fold,
    "local-weyl": cmd_local_weyl,
    "simple": cmd_simple,
    "char": cmd_char,
    "tensor": cmd_tensor,
    "annihilator": cmd_annihilator,
    "bba": cmd_bba,
    "bba-check": cmd_bba_check,
}


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            names = list(scenarios.SCENARIOS) if args.scenario == "all" else [args.scenario]
            body = cmd_verify(names, args)
            header = {"scenarios": [scenarios.get(n).header() for n in names]}
            code = 0 if body["passed"] else 1
        else:
            sc = scenarios.get(args.scenario)
            body = COMMANDS[args.command](sc, args)
            header = sc.header()
            code = 0
            if args.command == "bba-check" and not all(r["passed"] for r in body["results"]):
                code = 1
    except (UsageError, ValueError) as exc:
        print(f"emaweyl: error: {exc}", file=sys.stderr)
        return 2
    doc = {"command": args.command, **header, **body}
    stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return code


def main() -> None:
    sys.exit(run())
