"""``nflin`` command line.

Exit codes: 0 success, 1 input error, 2 a requested check failed,
3 truncation not closed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .io import SchemaError, dumps, parse_system
from .normal_form import (
    NonResonantCoefficient,
    check_full_normal_form,
    check_seminormal,
    normal_form_residual,
    rhs,
    seminormal_residual,
)
from .parent import (
    NotClosed,
    StructureViolation,
    build_parent,
    closure_analysis,
    structure_report,
    verify_constraint_invariance,
)
from .resonance import NonPoincareUnbounded, enumerate_resonances
from .solver import project, restrict, solve_parent, verify_solution_symbolic
from .spectrum import check_poincare, find_master_resonance, resonance_degree_bound, validate_jordan

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_NOT_CLOSED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _table(nf, args):
    return enumerate_resonances(nf.jordan, getattr(args, "max_degree", None))


def cmd_resonances(nf, args):
    return enumerate_resonances(nf.jordan, args.max_degree).to_json(), EXIT_OK


def cmd_check(nf, args):
    cert = check_poincare(nf.spectrum)
    poincare = {"ok": cert is not None}
    if cert is not None:
        poincare["certificate"] = cert.to_json()
        poincare["resonance_degree_bound"] = resonance_degree_bound(nf.spectrum, cert)
    else:
        master = find_master_resonance(nf.spectrum)
        poincare["master_resonance"] = list(master) if master else None
        poincare["note"] = "origin in the closed convex hull of the spectrum (boundary counts as failure)"
    semi = check_seminormal(nf)
    full = check_full_normal_form(nf)
    out = {
        "poincare": poincare,
        "jordan_violations": validate_jordan(nf.jordan),
        "seminormal": semi,
        "full_normal_form": full,
    }
    if args.verbose:
        out["seminormal_residual"] = seminormal_residual(nf).to_json()
        out["normal_form_residual"] = normal_form_residual(nf).to_json()
    verdicts = {"poincare": poincare["ok"], "seminormal": semi, "full": full}
    failed = [name for name in args.require or () if not verdicts[name]]
    if failed:
        out["failed_requirements"] = failed
    return out, EXIT_CHECK if failed else EXIT_OK


def cmd_parent(nf, args):
    ps = build_parent(nf, _table(nf, args))
    out = ps.to_json()
    out["structure"] = structure_report(ps).to_json(ps.labels)
    out["constraint_invariance"] = verify_constraint_invariance(ps)
    return out, EXIT_OK


def cmd_solve(nf, args):
    ps = build_parent(nf, _table(nf, args))
    sol = solve_parent(ps)
    if args.restricted or args.projected:
        sol = restrict(sol, ps)
    if args.projected:
        sol = project(sol, ps.n)
    out = sol.to_json()
    out["text"] = {label: str(f) for label, f in sol.components}
    return out, EXIT_OK


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None


def _bindings(nf, args) -> dict:
    out = {p: complex(args.param_default) for p in nf.parameters}
    for item in args.bind or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--bind expects name=value, got {item!r}")
        out[name.strip()] = _parse_complex(value)
    return out


def cmd_verify(nf, args):
    if args.time_reverse:
        nf = nf.time_reversed()
    ps = build_parent(nf, _table(nf, args))
    sol = project(restrict(solve_parent(ps), ps), ps.n)
    symbolic = verify_solution_symbolic(sol, rhs(nf))
    invariant = verify_constraint_invariance(ps)
    params = _bindings(nf, args)
    if args.x0:
        x0 = [_parse_complex(v) for v in args.x0.split(",")]
    else:
        x0 = [0.1] * nf.n
    if len(x0) != nf.n:
        raise InputError(f"--x0 needs {nf.n} values")
    out = {"symbolic": symbolic, "constraint_invariance": invariant,
           "t_end": args.t_end, "step": args.step, "tolerance": args.tol,
           "time_reverse": args.time_reverse}
    try:
        traj = oracle.integrate_numeric(nf, x0, args.t_end, args.step, params)
        err = oracle.compare(traj, sol, oracle.solution_bindings(sol, x0, params))
        drift = oracle.manifold_drift(ps, x0, args.t_end, args.step, params)
    except oracle.NonFinite as exc:
        out["non_finite_at"] = exc.time
        return out, EXIT_CHECK
    except oracle.UnboundSymbol as exc:
        raise InputError(str(exc)) from None
    out["max_abs_error"] = err
    out["manifold_drift"] = drift
    ok = symbolic and invariant and err <= args.tol and drift <= args.tol
    out["ok"] = ok
    if args.trajectory:
        Path(args.trajectory).write_text(dumps(traj.to_json()))
    return out, EXIT_OK if ok else EXIT_CHECK


def cmd_truncate(nf, args):
    report = closure_analysis(nf, args.N)
    return report.to_json(), EXIT_OK if report.closed else EXIT_NOT_CLOSED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nflin", description="Resonant normal forms as constrained linear systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, max_degree=True):
        sp.add_argument("-i", "--input", required=True, help="system definition (JSON)")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        if max_degree:
            sp.add_argument("--max-degree", type=int, default=None,
                            help="cap the resonance search (required for non-Poincare spectra)")

    sp = sub.add_parser("resonances", help="enumerate resonant monomials")
    common(sp)
    sp.set_defaults(func=cmd_resonances)

    sp = sub.add_parser("check", help="Poincare / seminormal / normal form verdicts")
    common(sp, max_degree=False)
    sp.add_argument("-v", "--verbose", action="store_true", help="include residual brackets")
    sp.add_argument("--require", action="append", choices=("poincare", "seminormal", "full"),
                    help="exit 2 unless this verdict holds (repeatable)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("parent", help="build the parent linear system")
    common(sp)
    sp.set_defaults(func=cmd_parent)

    sp = sub.add_parser("solve", help="closed-form general solution")
    common(sp)
    sp.add_argument("--restricted", action="store_true", help="restrict to the constraint manifold")
    sp.add_argument("--projected", action="store_true", help="restrict and keep only the original coordinates")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="symbolic and numeric verification of the closed form")
    common(sp)
    sp.add_argument("--x0", help="comma separated initial point (default 0.1 each)")
    sp.add_argument("--bind", action="append", help="parameter value, name=value (repeatable)")
    sp.add_argument("--param-default", type=float, default=1.0, help="value for unbound parameters")
    sp.add_argument("--t-end", type=float, default=1.0)
    sp.add_argument("--step", type=float, default=oracle.DEFAULT_STEP)
    sp.add_argument("--tol", type=float, default=oracle.DEFAULT_TOL)
    sp.add_argument("--time-reverse", action="store_true", help="verify x' = -f(x) instead")
    sp.add_argument("--trajectory", help="also write the RK4 trajectory JSON here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("truncate", help="closure of the parent system of a truncated normal form")
    common(sp, max_degree=False)
    sp.add_argument("-N", type=int, required=True, help="truncation order")
    sp.set_defaults(func=cmd_truncate)
    return p


def run_command(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        nf = parse_system(args.input)
        out, code = args.func(nf, args)
    except FileNotFoundError as exc:
        out, code = {"error": "FileNotFound", "message": str(exc)}, EXIT_INPUT
    except SchemaError as exc:
        out, code = {"error": "SchemaError", "path": exc.path, "message": str(exc)}, EXIT_INPUT
    except NonResonantCoefficient as exc:
        out, code = {"error": "NonResonantCoefficient", "mu": list(exc.mu), "alpha": exc.alpha,
                     "message": str(exc)}, EXIT_INPUT
    except NonPoincareUnbounded as exc:
        out, code = {"error": "NonPoincareUnbounded", "message": str(exc)}, EXIT_INPUT
    except InputError as exc:
        out, code = {"error": "InputError", "message": str(exc)}, EXIT_INPUT
    except NotClosed as exc:
        out, code = {"error": "NotClosed", "witness": list(exc.witness),
                     "witness_degree": sum(exc.witness)}, EXIT_NOT_CLOSED
    except StructureViolation as exc:
        out, code = {"error": "StructureViolation", "property": exc.property, "message": str(exc)}, EXIT_CHECK
    text = dumps(out)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return code


def main():
    np.seterr(all="ignore")
    sys.exit(run_command())


if __name__ == "__main__":
    main()
