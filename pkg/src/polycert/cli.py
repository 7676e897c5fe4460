"""Command-line interface: analyze, certify, probe, minimize, export.

Every subcommand prints one JSON document to stdout (keys sorted, no
timestamps) so repeated runs are byte-identical.  Exit codes: 0 success,
2 problem/parse errors, 3 infeasible or degenerate verdicts, 4 solver
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from polycert.morse import MorseConfig, critical_points, morse_verdict, zeros_on_set
from polycert.nondegen import (
    SearchConfig,
    VerdictStatus,
    compactness_certificate,
    khovanskii_nondegenerate,
)
from polycert.polynomial import (
    ParseError,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    format_polynomial,
    parse_polynomial,
)
from polycert.polytope import PolytopeError, global_newton_polytope
from polycert.relax import (
    ProbeOutcome,
    RelaxError,
    gradient_relaxation,
    gradient_sos_lmi,
    kkt_relaxation,
    lasserre_relaxation,
    membership_probe,
    relaxation_to_lmi,
    solve_relaxation,
)
from polycert.sdp import (
    SdpError,
    SolverConfig,
    SolverStatus,
    eliminate_equalities,
    export_sdpa,
    solve_lmi,
)
from polycert.search import halton_grid

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERDICT = 3
EXIT_SOLVER = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


def jsonable(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and (obj != obj or obj in (float("inf"), float("-inf"))):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=repr)
        return items
    return obj


@dataclasses.dataclass
class ProblemFile:
    variables: list[str]
    objective: Polynomial
    inequalities: list[Polynomial]
    equalities: list[Polynomial]
    box: list[tuple[float, float]]
    raw: dict


_CONSTRAINT_RE = re.compile(r"^(.*?)(>=|=)\s*0$")


def _parse_constraint(text: str, variables) -> tuple[Polynomial, str]:
    cleaned = text.replace("≥", ">=").strip()
    m = _CONSTRAINT_RE.match(cleaned)
    if not m:
        raise CliError(f"constraint {text!r} must end with '>= 0' or '= 0'")
    poly = parse_polynomial(m.group(1), variables)
    return poly, ">=0" if m.group(2) == ">=" else "=0"


def load_problem(args) -> ProblemFile:
    if args.problem:
        try:
            raw = json.loads(Path(args.problem).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise CliError(f"cannot read problem file: {err}") from err
        variables = raw.get("variables")
        if not variables:
            raise CliError("problem file needs a 'variables' list")
        objective = parse_polynomial(raw.get("objective", "0"), variables)
        ineqs, eqs = [], []
        for entry in raw.get("constraints", []):
            sense = entry.get("sense", ">=0").replace("≥", ">=").replace(" ", "")
            poly = parse_polynomial(entry["poly"], variables)
            if sense in (">=0", ">="):
                ineqs.append(poly)
            elif sense in ("=0", "=", "==0"):
                eqs.append(poly)
            else:
                raise CliError(f"unknown constraint sense {entry.get('sense')!r}")
        options = raw.get("options", {})
        box = [tuple(map(float, b)) for b in options.get("box", [])]
    elif args.objective_text:
        variables = [v.strip() for v in (args.variables or "x").split(",")]
        objective = parse_polynomial(args.objective_text, variables)
        ineqs, eqs = [], []
        for text in args.constraint or []:
            poly, sense = _parse_constraint(text, variables)
            (ineqs if sense == ">=0" else eqs).append(poly)
        box = []
        raw = {}
    else:
        raise CliError("give --problem FILE or --objective TEXT")
    if not box:
        box = [(-10.0, 10.0)] * len(variables)
    if len(box) != len(variables):
        raise CliError("box must list one interval per variable")
    if args.problem:
        raw = raw
    return ProblemFile(list(variables), objective, ineqs, eqs, box, raw)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        gap_tolerance=args.tol_gap,
        feas_tolerance=args.tol_feas,
        psd_tolerance=args.tol_psd,
        cert_tolerance=args.tol_cert,
        max_iterations=args.max_iterations,
    )


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        starts_per_orthant=args.starts,
        witness_tolerance=args.tol_witness,
        residual_tolerance=args.tol_residual,
    )


def _morse_config(args) -> MorseConfig:
    return MorseConfig(
        gradient_tolerance=args.tol_gradient,
        hessian_tolerance=args.tol_hessian,
        zero_tolerance=args.tol_zero,
        interior_tolerance=args.tol_interior,
        dedup_radius=args.dedup_radius,
    )


def _parse_orders(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        orders = list(range(int(lo), int(hi) + 1))
    else:
        orders = [int(text)]
    if not orders:
        raise CliError("empty order range")
    return orders


# -- subcommands ----------------------------------------------------------------


def cmd_analyze(args) -> tuple[dict, int]:
    prob = load_problem(args)
    f = prob.objective
    gamma = global_newton_polytope(f)
    verdict = khovanskii_nondegenerate(f, _search_config(args))
    code = EXIT_VERDICT if verdict.status is VerdictStatus.DEGENERATE else EXIT_OK
    return (
        {
            "polytope": {
                "vertices": sorted(gamma.vertices),
                "facet_inequalities": [
                    {"normal": list(w), "offset": c} for w, c in gamma.facet_inequalities
                ],
                "convenient": gamma.convenient,
                "max_total_degree": gamma.max_total_degree,
            },
            "khovanskii": jsonable(verdict),
        },
        code,
    )


def cmd_compactness(args) -> tuple[dict, int]:
    prob = load_problem(args)
    comps = prob.equalities + prob.inequalities
    system = PolynomialSystem(comps if comps else [prob.objective])
    cert = compactness_certificate(system, _search_config(args))
    degenerate = any(
        v.status is VerdictStatus.DEGENERATE for v in cert.sub_verdicts.values()
    )
    code = EXIT_VERDICT if degenerate else EXIT_OK
    return {"certificate": jsonable(cert)}, code


def cmd_morse(args) -> tuple[dict, int]:
    prob = load_problem(args)
    cfg = _morse_config(args)
    pts = critical_points(prob.objective, prob.box, cfg)
    report = morse_verdict(prob.objective, pts, prob.box, cfg)
    return {"morse": jsonable(report)}, EXIT_OK


def cmd_zeros(args) -> tuple[dict, int]:
    prob = load_problem(args)
    system = PolynomialSystem(prob.inequalities) if prob.inequalities else None
    report = zeros_on_set(prob.objective, system, prob.box, _morse_config(args))
    return {"zeros": jsonable(report)}, EXIT_OK


def _sampled_minimum(f: Polynomial, box, count: int = 400) -> float:
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    pts = halton_grid(count, f.num_vars) * (hi - lo) + lo
    return min(f.evaluate(p) for p in pts)


def _build_relaxation(
    prob: ProblemFile, mode: str, order: int, kkt_mode: str = "quadratic_module"
):
    f = prob.objective
    if mode == "gradient":
        return gradient_relaxation(f, order)
    if mode == "lasserre":
        ineqs = prob.inequalities
        if not ineqs and not prob.equalities:
            raise CliError("lasserre mode needs at least one constraint")
        system = PolynomialSystem(ineqs) if ineqs else PolynomialSystem(
            [Polynomial.constant(f.num_vars, 1)]
        )
        eq = PolynomialSystem(prob.equalities) if prob.equalities else None
        return lasserre_relaxation(f, system, order, equality_constraints=eq)
    if mode == "kkt":
        polys = list(prob.inequalities)
        for g in prob.equalities:
            polys.extend([g, -g])  # equality as a multiplier pair
        if not polys:
            raise CliError("kkt mode needs at least one constraint")
        return kkt_relaxation(f, PolynomialSystem(polys), order, mode=kkt_mode)
    raise CliError(f"unknown minimize mode {mode!r}")


def cmd_minimize(args) -> tuple[dict, int]:
    prob = load_problem(args)
    orders = _parse_orders(args.order)
    config = _solver_config(args)
    ladder = []
    warnings = []
    failed = False
    verify = (
        PolynomialSystem(prob.inequalities) if prob.inequalities else None
    )
    last_result = None
    for order in orders:
        try:
            problem = _build_relaxation(prob, args.mode, order, args.kkt_mode)
        except RelaxError as err:
            raise CliError(str(err)) from err
        result = solve_relaxation(
            problem, config, rank_tolerance=args.tol_rank, verify_constraints=verify
        )
        last_result = result
        entry = {
            "order": order,
            "status": result.status.value,
            "bound": result.lower_bound,
            "gap": result.gap,
        }
        if args.both_sides and args.mode == "gradient":
            sos_lmi, _ = gradient_sos_lmi(prob.objective, order)
            sos_sol = solve_lmi(sos_lmi, config)
            entry["sos_bound"] = (
                sos_sol.objective if sos_sol.status is SolverStatus.OPTIMAL else None
            )
            entry["sos_status"] = sos_sol.status.value
        ladder.append(entry)
        if result.status in (SolverStatus.MAX_ITERATIONS, SolverStatus.NUMERICAL_FAILURE):
            failed = True
    bounds = [e["bound"] for e in ladder if isinstance(e["bound"], float)]
    finite = [b for b in bounds if b == b and abs(b) != float("inf")]
    if finite:
        sampled = _sampled_minimum(prob.objective, prob.box)
        if sampled < max(finite) - 1e-6:
            warnings.append(
                "minimum not attained on searched region: sampled values fall "
                f"below the relaxation bound ({sampled:.6g} < {max(finite):.6g})"
            )
    result_block = {
        "mode": args.mode,
        "ladder": ladder,
        "warnings": warnings,
    }
    if last_result is not None:
        result_block["extraction"] = jsonable(last_result.extraction)
        result_block["minimizers"] = jsonable(last_result.candidates)
        result_block["metadata"] = jsonable(last_result.metadata)
    if args.mode == "gradient":
        cfg = _morse_config(args)
        try:
            pts = critical_points(prob.objective, prob.box, cfg)
            result_block["morse"] = jsonable(
                morse_verdict(prob.objective, pts, prob.box, cfg)
            )
        except Exception as err:  # morse side-report never blocks the bound
            result_block["morse"] = {"error": str(err)}
    code = EXIT_SOLVER if failed else EXIT_OK
    if last_result is not None and last_result.status is SolverStatus.INFEASIBLE:
        code = EXIT_VERDICT
    return result_block, code


_PROBE_MODES = {
    "sos": "sos",
    "qm": "quadratic_module",
    "quadratic_module": "quadratic_module",
    "preordering": "preordering",
}


def cmd_probe(args) -> tuple[dict, int]:
    prob = load_problem(args)
    mode = _PROBE_MODES.get(args.mode)
    if mode is None:
        raise CliError(f"unknown probe mode {args.mode!r}")
    system = PolynomialSystem(prob.inequalities) if prob.inequalities else None
    try:
        result = membership_probe(
            prob.objective, system, int(args.order), mode, _solver_config(args)
        )
    except RelaxError as err:
        raise CliError(str(err)) from err
    payload = {
        "outcome": result.outcome.value,
        "mode": result.mode,
        "order": result.order,
        "residual": jsonable(result.residual),
        "solver_status": result.solver_status.value if result.solver_status else None,
    }
    if result.gram_matrices is not None:
        payload["gram_matrices"] = [jsonable(q) for q in result.gram_matrices]
        payload["multipliers"] = [format_polynomial(p, prob.variables) for p in result.multipliers]
    if result.certificate is not None:
        payload["certificate"] = {
            "kind": result.certificate.kind,
            "residual": result.certificate.residual,
            "margin": result.certificate.margin,
        }
    code = {
        ProbeOutcome.FEASIBLE: EXIT_OK,
        ProbeOutcome.INFEASIBLE: EXIT_VERDICT,
        ProbeOutcome.INCONCLUSIVE: EXIT_SOLVER,
    }[result.outcome]
    return {"probe": payload}, code


def cmd_export_sdpa(args) -> tuple[dict | str, int]:
    prob = load_problem(args)
    orders = _parse_orders(args.order)
    problem = _build_relaxation(prob, args.mode, orders[0], args.kkt_mode)
    if args.debug_json:
        Path(args.debug_json).write_text(
            json.dumps(problem.debug_dump(), indent=2, sort_keys=True)
        )
    lmi, _ = relaxation_to_lmi(problem)
    reduced, _, _ = eliminate_equalities(lmi)
    text = export_sdpa(reduced)
    if args.output:
        Path(args.output).write_text(text)
        payload = {"written": args.output, "variables": reduced.num_vars,
                   "blocks": [b.size for b in reduced.blocks]}
        if args.external_result:
            value = _read_external_objective(args.external_result)
            internal = solve_lmi(reduced, _solver_config(args))
            payload["external_objective"] = value
            payload["internal_objective"] = jsonable(internal.objective)
            if value is not None and internal.status is SolverStatus.OPTIMAL:
                payload["cross_check_gap"] = abs(abs(value) - abs(internal.objective))
        return payload, EXIT_OK
    return text, EXIT_OK


def _read_external_objective(path: str):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise CliError(f"cannot read external result: {err}") from err
    for token in re.findall(r"[-+]?\d*\.?\d+(?:[eE][-+]?\d+)?", text):
        try:
            return float(token)
        except ValueError:
            continue
    return None


# -- argument surface -----------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--problem", help="problem file (JSON)")
    parser.add_argument("--objective", dest="objective_text", help="inline objective text")
    parser.add_argument("--variables", help="comma-separated variable names")
    parser.add_argument(
        "--constraint",
        action="append",
        help="inline constraint 'POLY >= 0' or 'POLY = 0' (repeatable)",
    )
    parser.add_argument("--tol-gap", type=float, default=1e-8)
    parser.add_argument("--tol-feas", type=float, default=1e-8)
    parser.add_argument("--tol-psd", type=float, default=1e-8)
    parser.add_argument("--tol-cert", type=float, default=1e-7)
    parser.add_argument("--tol-witness", type=float, default=1e-6)
    parser.add_argument("--tol-residual", type=float, default=1e-9)
    parser.add_argument("--tol-gradient", type=float, default=1e-8)
    parser.add_argument("--tol-hessian", type=float, default=1e-6)
    parser.add_argument("--tol-zero", type=float, default=1e-8)
    parser.add_argument("--tol-interior", type=float, default=1e-7)
    parser.add_argument("--tol-rank", type=float, default=1e-5)
    parser.add_argument("--dedup-radius", type=float, default=1e-5)
    parser.add_argument("--starts", type=int, default=64)
    parser.add_argument("--max-iterations", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycert",
        description="Polynomial optimization with compactness certificates "
        "and SOS/moment relaxations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Newton polytope and non-degeneracy verdict")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compactness", help="compactness certificate routes")
    _add_common(p)
    p.set_defaults(func=cmd_compactness)

    p = sub.add_parser("morse", help="critical points and Morse verdict")
    _add_common(p)
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("zeros", help="zeros of the objective on the constraint set")
    _add_common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("minimize", help="moment relaxation ladder")
    _add_common(p)
    p.add_argument("--mode", choices=["gradient", "lasserre", "kkt"], required=True)
    p.add_argument("--order", required=True, help="N or N1..N2")
    p.add_argument("--both-sides", action="store_true", help="also solve the SOS side")
    p.add_argument(
        "--kkt-mode",
        choices=["quadratic_module", "preordering"],
        default="quadratic_module",
    )
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("probe", help="membership in SOS cone / module / preordering")
    _add_common(p)
    p.add_argument("--mode", choices=sorted(_PROBE_MODES), required=True)
    p.add_argument("--order", required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("export-sdpa", help="write the relaxation in SDPA sparse format")
    _add_common(p)
    p.add_argument("--mode", choices=["gradient", "lasserre", "kkt"], required=True)
    p.add_argument("--order", required=True)
    p.add_argument(
        "--kkt-mode",
        choices=["quadratic_module", "preordering"],
        default="quadratic_module",
    )
    p.add_argument("--output", help="target path; omit to print the raw file")
    p.add_argument("--external-result", help="file with an external solver objective")
    p.add_argument("--debug-json", help="also write the relaxation debug dump here")
    p.set_defaults(func=cmd_export_sdpa)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = args.func(args)
    except CliError as err:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(err)},
                         indent=2, sort_keys=True))
        return err.code
    except (ParseError, PolynomialError, PolytopeError, RelaxError, SdpError) as err:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(err)},
                         indent=2, sort_keys=True))
        return EXIT_PARSE
    if isinstance(result, str):
        sys.stdout.write(result)
        return code
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "result": jsonable(result),
    }
    print(json.dumps(document, indent=2, sort_keys=True))
    return code


# alias for the documented operation surface
run_command = main


if __name__ == "__main__":
    raise SystemExit(main())
