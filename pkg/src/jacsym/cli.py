"""Command-line front end.

Exit codes: 0 success, 2 bad arguments or unreadable input, 3 inconsistent
construction, 4 verification failure, 5 integration failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import reference
from .construct import ConstructionError, ConstructionParams, solve_alpha, symplectic_residual
from .integrator import SYSTEMS, IntegrationError, integrate, measured_order
from .polybasis import JacobiBasis
from .quadrature import make_rule
from .tableau import ButcherTableau, classical_order, check_symplectic, discretize, listing_order, verify

EXIT_OK, EXIT_ARGS, EXIT_CONSTRUCT, EXIT_VERIFY, EXIT_INTEGRATE = 0, 2, 3, 4, 5
OUTPUT_ENV = "JACSYM_OUTPUT_DIR"


class InputError(ValueError):
    pass


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, default=_jsonable) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_free(items) -> list[float]:
    values: dict[int, float] = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--free expects k=v, got {item!r}")
        try:
            values[int(key)] = float(val)
        except ValueError as exc:
            raise InputError(f"bad --free entry {item!r}") from exc
    if not values:
        return []
    out = [0.0] * (max(values) + 1)
    for k, v in values.items():
        if k < 0:
            raise InputError("free parameter index must be nonnegative")
        out[k] = v
    return out


def _add_construct_flags(p, required=True):
    p.add_argument("--alpha", type=float, required=required)
    p.add_argument("--beta", type=float, required=required)
    p.add_argument("--xi", type=int, required=required)
    p.add_argument("--eta", type=int, required=required)
    p.add_argument("--rho", type=int, required=required)
    p.add_argument("--free", nargs="*", metavar="K=V", help="values of the free coordinates")


def _coeffs_from_flags(args):
    if args.alpha is None or args.beta is None or args.xi is None or args.eta is None or args.rho is None:
        raise InputError("need --alpha --beta --xi --eta --rho (or an input file)")
    params = ConstructionParams(JacobiBasis(args.alpha, args.beta), args.xi, args.eta, args.rho)
    sol = solve_alpha(params, getattr(args, "test", "jacobi"))
    return sol, sol.member(_parse_free(args.free))


def _coeffs_payload(sol, coeffs) -> dict:
    out = coeffs.to_dict()
    out["free_entries"] = [list(e) for e in sol.free_entries]
    out["residual"] = sol.residual
    out["symplectic_residual"] = symplectic_residual(coeffs)
    if sol.free_dim:
        out["null_basis"] = [n.tolist() for n in sol.null_basis]
    return out


def _tableau_from_args(args) -> ButcherTableau:
    if getattr(args, "tableau", None):
        try:
            return ButcherTableau.from_dict(load_json(args.tableau))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"malformed tableau file {args.tableau}: {exc}") from exc
    if getattr(args, "coeffs", None):
        from .construct import CsRKCoefficients

        try:
            coeffs = CsRKCoefficients.from_dict(load_json(args.coeffs))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"malformed coefficient file {args.coeffs}: {exc}") from exc
    else:
        _, coeffs = _coeffs_from_flags(args)
    s = args.stages if args.stages else coeffs.params.xi
    t = discretize(coeffs, make_rule(coeffs.basis, s, args.rule))
    if getattr(args, "paper_order", False):
        t = listing_order(t)
    return t


def output_dir(default: str) -> Path:
    return Path(os.environ.get(OUTPUT_ENV, default))


# -- commands ---------------------------------------------------------------


def cmd_construct(args) -> int:
    sol, coeffs = _coeffs_from_flags(args)
    text = dump_json(_coeffs_payload(sol, coeffs), args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_tableau(args) -> int:
    """JSON goes to --output (or stdout); the Butcher array goes next to it as .txt (or stderr)."""
    t = _tableau_from_args(args)
    payload = t.to_dict()
    payload["checks"] = verify(t)
    text = t.pretty()
    if args.output is None:
        sys.stdout.write(dump_json(payload))
        print(text, file=sys.stderr)
    else:
        dump_json(payload, args.output)
        Path(args.output).with_suffix(".txt").write_text(text + "\n")
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = _tableau_from_args(args)
    report = verify(t, args.max_order)
    text = dump_json(report, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def cmd_integrate(args) -> int:
    t = _tableau_from_args(args)
    system = SYSTEMS[args.system]()
    z0 = np.array(args.z0, dtype=float) if args.z0 else system.z0
    traj = integrate(t, system, z0, 0.0, args.h, args.steps)
    traj.to_csv(args.output)
    return EXIT_OK


def cmd_order_study(args) -> int:
    t = _tableau_from_args(args)
    system = SYSTEMS[args.system]()
    est = measured_order(t, system, args.h, args.T)
    payload = {
        "slope": est.slope,
        "h": list(est.hs),
        "errors": list(est.errors),
        "flagged": est.flagged,
        "classical_order": classical_order(t),
    }
    text = dump_json(payload, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK


# -- reproduction -----------------------------------------------------------

COEFF_TOL = 1e-12
TABLE3_TOL = 1e-12
TABLE5_TOL = 1e-11


def _example_cases(alpha: float, beta: float):
    """Expected alpha entries for the three constructions of one Chebyshev kind."""
    sign = 1.0 if (alpha, beta) == (-0.5, 0.5) else -1.0
    pi = math.pi
    return [
        ("i", (2, 1, 1), {(0, 1): -pi / 8}, None),
        # family member at mu = 0, plus the direction of the family
        ("ii", (3, 1, 2), {(0, 1): -pi / 8, (0, 2): 0.0, (1, 2): 0.0}, {(0, 1): 1 / 3, (0, 2): sign, (1, 2): 1.0}),
        (
            "iii",
            (5, 2, 2),
            {(0, 1): -9 * pi / 64, (0, 2): -sign * 3 * pi / 64, (1, 2): -3 * pi / 64, (0, 3): 0.0},
            None,
        ),
    ]


def reproduce_example(alpha: float, beta: float) -> dict:
    basis = JacobiBasis(alpha, beta)
    cases = {}
    worst = 0.0
    for label, (xi, eta, rho), expected, direction in _example_cases(alpha, beta):
        sol = solve_alpha(ConstructionParams(basis, xi, eta, rho))
        coeffs = sol.particular
        devs = [abs(coeffs.alpha_mat[i, j] - v) for (i, j), v in expected.items()]
        if direction is not None:
            if sol.free_dim != 1:
                devs.append(float("inf"))
            else:
                devs += [abs(sol.null_basis[0][i, j] - v) for (i, j), v in direction.items()]
        elif sol.free_dim != 0:
            devs.append(float("inf"))
        dev = max(devs)
        worst = max(worst, dev)
        cases[label] = {
            "xi": xi,
            "eta": eta,
            "rho": rho,
            "free_dim": sol.free_dim,
            "alpha_mat": coeffs.alpha_mat.tolist(),
            "expected": {f"{i},{j}": v for (i, j), v in expected.items()},
            "max_deviation": dev,
        }
    return {"alpha": alpha, "beta": beta, "cases": cases, "max_deviation": worst, "pass": worst <= COEFF_TOL}


def generated_tables() -> dict:
    """The four Chebyshev III/IV tableaux produced by the pipeline, in listing order."""
    out = {}
    for name, ab, (xi, eta, rho), s in [
        ("chebyshev3_order3", (-0.5, 0.5), (3, 1, 2), 3),
        ("chebyshev4_order3", (0.5, -0.5), (3, 1, 2), 3),
        ("chebyshev3_order5", (-0.5, 0.5), (5, 2, 2), 5),
        ("chebyshev4_order5", (0.5, -0.5), (5, 2, 2), 5),
    ]:
        sol = solve_alpha(ConstructionParams(JacobiBasis(*ab), xi, eta, rho))
        t = discretize(sol.particular, make_rule(sol.particular.basis, s, "closed"))
        out[name] = listing_order(t)
    return out


def reproduce_tables(outdir: Path) -> dict:
    results = {}
    for name, t in generated_tables().items():
        ref = getattr(reference, name)()
        tol = TABLE3_TOL if t.s == 3 else TABLE5_TOL
        dev = reference.max_deviation(t, ref)
        dump_json(t.to_dict(), outdir / f"{name}.json")
        (outdir / f"{name}.txt").write_text(t.pretty() + "\n")
        results[name] = {
            "max_deviation": dev,
            "tolerance": tol,
            "symplectic_residual": check_symplectic(t),
            "classical_order": classical_order(t),
            "declared_order": t.declared_order,
            "pass": dev <= tol,
        }
    for family in ("chebyshev1_family", "chebyshev2_family"):
        for gamma in (-0.3, 0.0, 0.1):
            t = getattr(reference, family)(gamma)
            res, order = check_symplectic(t), classical_order(t)
            results[f"{family}[{gamma}]"] = {
                "symplectic_residual": res,
                "classical_order": order,
                "pass": res <= 1e-13 and order == 4,
            }
    return results


def kepler_methods() -> dict:
    """Order-3 and order-5 methods compared on Kepler, Legendre ones as the baseline."""
    methods = {}
    for label, ab in [("chebyshev3", (-0.5, 0.5)), ("chebyshev4", (0.5, -0.5)), ("legendre", (0.0, 0.0))]:
        for order, (xi, eta, rho), s in [(3, (3, 1, 2), 3), (5, (5, 2, 2), 5)]:
            sol = solve_alpha(ConstructionParams(JacobiBasis(*ab), xi, eta, rho))
            methods[f"{label}_order{order}"] = discretize(
                sol.particular, make_rule(sol.particular.basis, s, "eigen")
            )
    return methods


def reproduce_kepler(outdir: Path, h: float = 0.1, steps: int = 10_000) -> dict:
    system = SYSTEMS["kepler"]()
    results = {}
    for name, t in kepler_methods().items():
        traj = integrate(t, system, system.z0, 0.0, h, steps)
        traj.to_csv(outdir / f"kepler_{name}.csv")
        results[name] = {
            "max_energy_error": float(traj.energy_error.max()),
            "final_solution_error": float(traj.solution_error[-1]),
            "pass": bool(np.all(np.isfinite(traj.states))),
        }
    return results


def cmd_reproduce(args) -> int:
    outdir = Path(args.outdir) if args.outdir else output_dir("results")
    outdir.mkdir(parents=True, exist_ok=True)
    targets = ["ex3", "ex4", "tables", "kepler"] if args.target == "all" else [args.target]
    summary = {}
    for target in targets:
        if target == "ex3":
            summary["ex3"] = reproduce_example(-0.5, 0.5)
            dump_json(summary["ex3"], outdir / "ex3.json")
        elif target == "ex4":
            summary["ex4"] = reproduce_example(0.5, -0.5)
            dump_json(summary["ex4"], outdir / "ex4.json")
        elif target == "tables":
            summary["tables"] = reproduce_tables(outdir)
        elif target == "kepler":
            summary["kepler"] = reproduce_kepler(outdir, args.h, args.steps)
    dump_json(summary, outdir / "summary.json")
    failures = _failures(summary)
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print(f"wrote {outdir}")
    return EXIT_VERIFY if failures else EXIT_OK


def _failures(summary: dict, prefix: str = "") -> list[str]:
    out = []
    for key, val in summary.items():
        if isinstance(val, dict):
            if val.get("pass") is False:
                out.append(prefix + key)
            out += _failures({k: v for k, v in val.items() if isinstance(v, dict)}, prefix + key + ".")
    return sorted(set(out))


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="solve for the coefficients of a symplectic csRK method")
    _add_construct_flags(p)
    p.add_argument("--test", choices=["jacobi", "monomial"], default="jacobi")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_construct)

    def tableau_inputs(p, allow_tableau=False):
        if allow_tableau:
            p.add_argument("--tableau", help="tableau JSON file")
        p.add_argument("--coeffs", help="coefficient JSON file from `construct`")
        _add_construct_flags(p, required=False)
        p.add_argument("--stages", "-s", type=int)
        p.add_argument("--rule", choices=["closed", "eigen"], default="closed")
        p.add_argument("--paper-order", action="store_true", help="list stages in formula order")

    p = sub.add_parser("tableau", help="discretize to a Butcher tableau")
    tableau_inputs(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("verify", help="check symplecticity and order of a tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--max-order", type=int, default=5)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="integrate a Hamiltonian system, write CSV")
    tableau_inputs(p, allow_tableau=True)
    p.add_argument("--system", choices=sorted(SYSTEMS), default="kepler")
    p.add_argument("--z0", type=float, nargs="+")
    p.add_argument("--h", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("order-study", help="measure the convergence order")
    tableau_inputs(p, allow_tableau=True)
    p.add_argument("--system", choices=sorted(SYSTEMS), default="kepler")
    p.add_argument("--h", type=float, nargs="+", default=[0.1, 0.05, 0.025, 0.0125])
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_order_study)

    p = sub.add_parser("reproduce", help="regenerate coefficient tables and Kepler runs")
    p.add_argument("--target", choices=["ex3", "ex4", "tables", "kepler", "all"], default="all")
    p.add_argument("--outdir")
    p.add_argument("--h", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=10_000)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except IntegrationError as exc:
        print(f"integration failed at step {exc.index}: {exc}", file=sys.stderr)
        return EXIT_INTEGRATE


if __name__ == "__main__":
    sys.exit(main())
