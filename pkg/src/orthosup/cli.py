"""``orthosup`` command-line front end.

Every command prints (or writes) a run record with top-level keys
``config``, ``results``, ``timing_ms`` and ``version``.  JSON and CSV are
the stable formats; TEXT is for people.

Exit codes: 0 success, 1 usage or input error, 2 a legitimate
zero-probability outcome (the machine produced no output state).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from . import __version__, analysis, circuit, machines, qcore
from .errors import OrthosupError
from .machines import MachineCoeffs
from .qcore import Convention, QubitState

EXIT_OK, EXIT_INPUT, EXIT_ZERO_PROB = 0, 1, 2
TOLERANCE_ENV = "ORTHOSUP_TOLERANCE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- encoding ------------------------------------------------------------------

def encode(obj: Any) -> Any:
    """Convert results to JSON-safe values; complex numbers become ``[re, im]``."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, QubitState):
        return encode(obj.vec)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def _num(x) -> Optional[float]:
    x = float(x)
    # JSON has no NaN/Inf; emit null (NaN) or a string sentinel (Inf)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def dumps(record: Dict[str, Any]) -> str:
    return json.dumps(record, indent=2, ensure_ascii=False) + "\n"


def _csv_cell(v: Any) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def to_csv(results: Dict[str, Any]) -> str:
    rows = results.get("rows")
    if rows is None:
        rows = [{k: v for k, v in results.items()}]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys()) if rows else []
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(r.get(h)) for h in header])
    return buf.getvalue()


def to_text(record: Dict[str, Any]) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}{k}.", x)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, x in enumerate(v):
                walk(f"{prefix}{i}.", x)
        else:
            lines.append(f"{prefix[:-1]}: {v}")

    walk("", record["results"])
    return "\n".join(lines) + "\n"


# -- argument resolution -------------------------------------------------------

def resolve_tolerance(args) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get(TOLERANCE_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{TOLERANCE_ENV}={env!r} is not a number")
    return qcore.DEFAULT_TOL


def resolve_coeffs(args) -> MachineCoeffs:
    if args.balanced:
        if args.alpha is not None or args.beta is not None:
            raise UsageError("--balanced excludes --alpha/--beta")
        return MachineCoeffs.balanced()
    if args.alpha is None and args.beta is None:
        return MachineCoeffs.balanced()
    if args.alpha is None:
        raise UsageError("--beta requires --alpha")
    a = args.alpha
    if not 0.0 <= a <= 1.0:
        raise UsageError(f"--alpha {a} must be a modulus in [0, 1]")
    if args.beta is None:
        return MachineCoeffs.from_polar(a, args.arg_alpha, args.arg_beta)
    b = args.beta
    n = math.hypot(a, b)
    # rounded user input such as 0.7071 is accepted and renormalized
    if b < 0 or abs(n - 1.0) > 1e-3:
        raise UsageError(f"|alpha|={a}, |beta|={b} are not normalized")
    return MachineCoeffs(a / n * np.exp(1j * args.arg_alpha), b / n * np.exp(1j * args.arg_beta))


def resolve_state(args):
    """Return ``(psi, psi_perp)``; the partner's phase follows ``--convention``
    for Bloch-angle input and :func:`qcore.orthogonal_complement` otherwise."""
    given = [args.state is not None, args.theta is not None or args.phi is not None,
             args.amps is not None]
    if sum(given) > 1:
        raise UsageError("give exactly one of --state, --theta/--phi, --amps")
    if args.theta is not None or args.phi is not None:
        theta = args.theta if args.theta is not None else 0.0
        phi = args.phi if args.phi is not None else 0.0
        if not 0.0 <= theta <= math.pi:
            raise UsageError(f"--theta {theta} outside [0, pi]")
        return qcore.bloch_pair(theta, phi, Convention(args.convention))
    if args.amps is not None:
        r0, i0, r1, i1 = args.amps
        psi = QubitState(complex(r0, i0), complex(r1, i1))
    else:
        name = args.state or "plus"
        if name not in qcore.NAMED_STATES:
            raise UsageError(f"unknown state {name!r}; choose from {sorted(qcore.NAMED_STATES)}")
        psi = qcore.NAMED_STATES[name]
    return psi, qcore.orthogonal_complement(psi)


# -- commands --------------------------------------------------------------------

def cmd_superpose(args, tol):
    coeffs = resolve_coeffs(args)
    psi, perp = resolve_state(args)
    m = machines.build_pure_machine(args.machine, coeffs)
    out = machines.superpose_pure(m, psi, perp)
    res = {
        "machine": m.kind.value,
        "c_norm": m.c_norm,
        "psi": psi, "psi_perp": perp,
        "raw": out.raw,
        "success_probability": out.success_prob,
        "state": out.state,
        "eta": out.eta,
    }
    if out.state is not None:
        res["modulus_alpha"] = abs(qcore.inner_product(psi.vec, out.state.vec))
        res["modulus_beta"] = abs(qcore.inner_product(perp.vec, out.state.vec))
        res["moduli_ok"] = bool(
            abs(res["modulus_alpha"] - abs(coeffs.alpha)) <= max(tol, 1e-10)
            and abs(res["modulus_beta"] - abs(coeffs.beta)) <= max(tol, 1e-10)
        )
    return res, (EXIT_OK if out.state is not None else EXIT_ZERO_PROB)


def _circuit_row(r: circuit.CircuitResult):
    return {
        "mu": r.outcome.mu, "n": r.outcome.n,
        "probability": r.probability,
        "state": r.post_state,
        "eta": r.eta,
    }


def cmd_circuit(args, tol):
    coeffs = resolve_coeffs(args)
    psi, perp = resolve_state(args)
    m = circuit.build_circuit(coeffs)
    if args.mode == "enumerate":
        results = circuit.run_circuit_enumerate(m, psi, perp)
        total = sum(r.probability for r in results)
        res = {
            "rows": [_circuit_row(r) for r in results],
            "probability_sum": total,
            "probability_sum_ok": bool(abs(total - 1.0) <= tol),
            "completeness_deviation": circuit.verify_completeness(m),
        }
        return res, EXIT_OK
    if args.seed is None:
        raise UsageError("--mode sample requires --seed")
    draws = circuit.sample_circuit_many(m, psi, args.seed, args.draws, perp)
    return {"rows": [_circuit_row(r) for r in draws]}, EXIT_OK


def _spec(args) -> analysis.IntegrationSpec:
    return analysis.IntegrationSpec(
        method=args.method, n_theta=args.n_theta, n_phi=args.n_phi,
        n_samples=args.n_samples, seed=args.seed if args.seed is not None else 0,
    )


def _s_vector(args) -> qcore.BlochVector:
    return qcore.BlochVector.from_angles(args.s_theta, args.s_phi)


def _report(rep: analysis.AverageReport, tol: float):
    d = {
        "machine_id": rep.machine_id,
        "numeric_average": rep.numeric_average,
        "closed_form": rep.closed_form,
        "abs_error": rep.abs_error,
        "std_error": rep.std_error,
    }
    if rep.std_error is not None:
        d["within_5_sigma"] = bool(rep.abs_error <= 5 * rep.std_error)
    return d


def cmd_average(args, tol):
    spec = _spec(args)
    if args.machine == "general":
        rep = analysis.average_general_orthogonal(_s_vector(args), spec)
    else:
        rep = analysis.average_pure_machine(args.machine, resolve_coeffs(args), spec)
    return _report(rep, tol), EXIT_OK


def cmd_compare(args, tol):
    spec = _spec(args)
    kind = args.machine if args.machine != "general" else "k1"
    pure = analysis.average_pure_machine(kind, resolve_coeffs(args), spec)
    gen = analysis.average_general_orthogonal(_s_vector(args), spec)
    return {
        "pure": _report(pure, tol),
        "general": _report(gen, tol),
        "ratio": pure.closed_form / gen.closed_form,
        "numeric_ratio": pure.numeric_average / gen.numeric_average,
    }, EXIT_OK


def cmd_solve_kraus(args, tol):
    coeffs = resolve_coeffs(args)
    branch = analysis.Branch(args.branch)
    sol = analysis.solve_kraus(coeffs, branch)
    kind = "k1" if branch is analysis.Branch.ETA_EQ_PHI else "k2"
    ref = machines.build_pure_machine(kind, coeffs).kraus
    var = analysis.proportionality_variance(sol.kraus, ref)
    return {
        "branch": branch.value,
        "kraus": sol.kraus,
        "c_max": sol.c_max,
        "residual": sol.residual,
        "residual_ok": bool(sol.residual <= 1e-10),
        "reference_machine": kind,
        "proportionality_variance": var,
        "proportional": bool(var <= 1e-20),
        "c_max_sq_times_norm": sol.c_max**2 * (1 + abs(coeffs.alpha * coeffs.beta)),
    }, EXIT_OK


def cmd_clone_delete(args, tol):
    coeffs = resolve_coeffs(args)
    phi = qcore.KET0
    psi = analysis.state_with_overlap(args.overlap, args.relative_phase)
    rep = analysis.clone_delete_demo(phi, psi, coeffs, args.n, args.machine_overlap)
    return {
        "n_copies": rep.n_copies,
        "overlap": args.overlap,
        "overlap_decay": rep.overlap_decay,
        "mixed_output": rep.mixed_output,
        "target": rep.target,
        "fidelity": rep.fidelity,
    }, EXIT_OK


SWEEP_COLUMNS = ("theta", "phi", "abs_alpha", "p_k1", "p_k2", "p_k1_plus_k2",
                 "circuit_total", "max_modulus_error")


def sweep_rows(thetas, phis, abs_alphas, convention=Convention.MAIN) -> Iterable[Dict[str, float]]:
    """Grid evaluation in (|alpha|, theta, phi) order, one row per point."""
    for aa in abs_alphas:
        coeffs = MachineCoeffs.from_polar(float(aa))
        k1 = machines.build_pure_machine("k1", coeffs)
        k2 = machines.build_pure_machine("k2", coeffs)
        circ = circuit.build_circuit(coeffs)
        for t in thetas:
            for p in phis:
                psi, perp = qcore.bloch_pair(float(t), float(p), convention)
                worst = 0.0
                outs = [machines.superpose_pure(k, psi, perp) for k in (k1, k2)]
                states = [o.state for o in outs if o.success_prob > 1e-6]
                branches = circuit.run_circuit_enumerate(circ, psi, perp)
                states += [r.post_state for r in branches if r.probability > 1e-10]
                for s in states:
                    worst = max(
                        worst,
                        abs(abs(qcore.inner_product(psi.vec, s.vec)) - abs(coeffs.alpha)),
                        abs(abs(qcore.inner_product(perp.vec, s.vec)) - abs(coeffs.beta)),
                    )
                yield {
                    "theta": float(t), "phi": float(p), "abs_alpha": float(aa),
                    "p_k1": outs[0].success_prob, "p_k2": outs[1].success_prob,
                    "p_k1_plus_k2": outs[0].success_prob + outs[1].success_prob,
                    "circuit_total": sum(r.probability for r in branches),
                    "max_modulus_error": worst,
                }


def cmd_sweep(args, tol):
    if args.output is None:
        raise UsageError("sweep requires --output")
    thetas = np.linspace(0.0, np.pi, args.n_theta)
    phis = 2 * np.pi * np.arange(args.n_phi) / args.n_phi
    if args.n_alpha > 1:
        alphas = np.linspace(0.0, 1.0, args.n_alpha)
    else:
        alphas = [abs(resolve_coeffs(args).alpha)]
    n_rows = 0
    try:
        fh = open(args.output, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}")
    with fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in sweep_rows(thetas, phis, alphas, Convention(args.convention)):
            w.writerow([repr(float(row[c])) for c in SWEEP_COLUMNS])
            n_rows += 1
    return {"output": args.output, "rows_written": n_rows, "columns": list(SWEEP_COLUMNS)}, EXIT_OK


COMMANDS = {
    "superpose": cmd_superpose,
    "circuit": cmd_circuit,
    "average": cmd_average,
    "compare": cmd_compare,
    "solve-kraus": cmd_solve_kraus,
    "clone-delete": cmd_clone_delete,
    "sweep": cmd_sweep,
}


# -- parser ----------------------------------------------------------------------

def _common(with_state=True, with_coeffs=True):
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv", "text"), default="json")
    g.add_argument("--output", help="write the record here instead of stdout")
    g.add_argument("--tolerance", type=float, default=None,
                   help=f"check tolerance (default 1e-12, or ${TOLERANCE_ENV})")
    g.add_argument("--timing", action="store_true",
                   help="record wall-clock time (makes output non-reproducible)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--convention", choices=("main", "appendix"), default="main")
    if with_coeffs:
        c = p.add_argument_group("coefficients")
        c.add_argument("--alpha", type=float, help="|alpha|")
        c.add_argument("--beta", type=float, help="|beta| (checked against --alpha)")
        c.add_argument("--arg-alpha", type=float, default=0.0)
        c.add_argument("--arg-beta", type=float, default=0.0)
        c.add_argument("--balanced", action="store_true", help="alpha = beta = 1/sqrt(2)")
    if with_state:
        s = p.add_argument_group("input state")
        s.add_argument("--state", help=f"one of {', '.join(sorted(qcore.NAMED_STATES))}")
        s.add_argument("--theta", type=float)
        s.add_argument("--phi", type=float)
        s.add_argument("--amps", type=float, nargs=4, metavar=("RE0", "IM0", "RE1", "IM1"))
    return p


def _integration(p):
    p.add_argument("--method", choices=("quadrature", "monte-carlo"), default="quadrature")
    p.add_argument("--n-theta", type=int, default=64)
    p.add_argument("--n-phi", type=int, default=64)
    p.add_argument("--n-samples", type=int, default=1_000_000)
    p.add_argument("--s-theta", type=float, default=0.0, help="reference state Bloch polar angle")
    p.add_argument("--s-phi", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthosup", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("superpose", parents=[_common()], help="run a pure machine K1/K2")
    p.add_argument("--machine", choices=("k1", "k2"), default="k1")

    p = sub.add_parser("circuit", parents=[_common()], help="three-qubit unit-probability machine")
    p.add_argument("--mode", choices=("enumerate", "sample"), default="enumerate")
    p.add_argument("--draws", type=int, default=1)

    for name, hlp in (("average", "sphere-averaged success probability"),
                      ("compare", "pure machine vs reference machine")):
        p = sub.add_parser(name, parents=[_common(with_state=False)], help=hlp)
        p.add_argument("--machine", choices=("k1", "k2", "general"), default="k1")
        _integration(p)

    p = sub.add_parser("solve-kraus", parents=[_common(with_state=False)],
                       help="reconstruct the Kraus operator for an eta branch")
    p.add_argument("--branch", choices=[b.value for b in analysis.Branch], default="eta-eq-phi")

    p = sub.add_parser("clone-delete", parents=[_common(with_state=False)],
                       help="clone/superpose/delete pipeline on |0> and a tilted state")
    p.add_argument("--overlap", type=float, default=0.9, help="|<phi|psi>|")
    p.add_argument("--n", type=int, default=1, help="number of copies")
    p.add_argument("--relative-phase", type=float, default=0.0)
    p.add_argument("--machine-overlap", type=float, default=0.0)

    p = sub.add_parser("sweep", parents=[_common(with_state=False)],
                       help="grid over theta, phi, |alpha| written as CSV")
    p.add_argument("--n-theta", type=int, default=64)
    p.add_argument("--n-phi", type=int, default=1)
    p.add_argument("--n-alpha", type=int, default=1)
    return parser


_NON_CONFIG = {"func", "format", "output", "timing"}


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        tol = resolve_tolerance(args)
        results, code = COMMANDS[args.command](args, tol)
    except (UsageError, OrthosupError, ValueError) as exc:
        print(f"orthosup {args.command}: error: {exc}", file=stderr)
        return EXIT_INPUT
    elapsed = (time.perf_counter() - t0) * 1e3
    config = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    config["tolerance"] = tol
    if args.command == "sweep":
        config["output"] = args.output
    record = {
        "config": encode(config),
        "results": encode(results),
        "timing_ms": elapsed if args.timing else None,
        "version": __version__,
    }
    if args.format == "json":
        text = dumps(record)
    elif args.format == "csv":
        text = to_csv(record["results"])
    else:
        text = to_text(record)
    if args.output and args.command != "sweep":
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"orthosup {args.command}: error: cannot write {args.output}: {exc}", file=stderr)
            return EXIT_INPUT
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
