"""Batch front door: load inputs, run the pipeline, emit a report.

Exit codes: 0 success with the global certificate holding, 1 success with
the certificate failing, 2 malformed input, 3 numerical failure.
"""

import argparse
import sys

from . import __version__
from .errors import InputError, NumericalError, OracleMismatch, ShapeMismatch
from .fixtures import (
    H2_ANSATZ_TEXT,
    H2_HAMILTONIAN_TEXT,
    h2_ansatz,
    h2_hamiltonian,
    instance_texts,
    random_instance,
)
from .circuits import build_overlap_matrices, build_overlap_matrices_sampled, parse_ansatz
from .pauli import parse_hamiltonian
from .pipeline import run_pipeline, solve_overlap_pair
from .relax import make_bound_report
from .report import (
    Report,
    bounds_payload,
    matrices_payload,
    matrix_payload,
    report_to_text,
    sha256_text,
    solution_payload,
)
from .solver import SolveOptions, load_matrix_pair, oracle_min

ORACLE_TOL = 1e-8


def _solve_options(args):
    return SolveOptions(
        kkt_tol=getattr(args, "tol_kkt", None) or 1e-8,
        psd_tol=getattr(args, "tol_psd", None) or 1e-9,
    )


def _load_problem(args):
    if getattr(args, "matrices", None):
        if args.shots is not None:
            raise InputError("--shots applies to circuit inputs, not --matrices")
        with open(args.matrices, encoding="utf-8") as fh:
            text = fh.read()
        D, E = load_matrix_pair(text)
        inputs = {
            "mode": "matrices",
            "matrices_sha256": sha256_text(text),
            "seed": args.seed,
            "shots": None,
        }
        return None, None, (D, E), inputs
    if not (getattr(args, "hamiltonian", None) and getattr(args, "ansatz", None)):
        raise InputError("provide --hamiltonian and --ansatz, or --matrices")
    with open(args.hamiltonian, encoding="utf-8") as fh:
        h_text = fh.read()
    with open(args.ansatz, encoding="utf-8") as fh:
        a_text = fh.read()
    hamiltonian = parse_hamiltonian(h_text)
    # the gate-list format carries no qubit count; infer it and insist it
    # matches the Hamiltonian instead of silently padding circuits
    ansatz = parse_ansatz(a_text)
    if ansatz.num_qubits != hamiltonian.num_qubits:
        raise ShapeMismatch(
            f"Hamiltonian acts on {hamiltonian.num_qubits} qubits but the "
            f"ansatz file uses {ansatz.num_qubits}"
        )
    inputs = {
        "mode": "exact" if args.shots is None else "sampled",
        "hamiltonian_sha256": sha256_text(h_text),
        "ansatz_sha256": sha256_text(a_text),
        "shots": args.shots,
        "seed": args.seed,
    }
    return hamiltonian, ansatz, None, inputs


def _pipeline_report(command, hamiltonian, ansatz, inputs, args,
                     with_solution=True, with_bounds=True):
    if not with_solution:
        if args.shots is None:
            pair = build_overlap_matrices(hamiltonian, ansatz)
        else:
            pair = build_overlap_matrices_sampled(
                hamiltonian, ansatz, shots=args.shots, seed=args.seed
            )
        report = Report(
            command=command,
            version=__version__,
            inputs=inputs,
            matrices=matrices_payload(pair),
        )
        return report, 0

    result = run_pipeline(
        hamiltonian, ansatz,
        shots=args.shots, seed=args.seed,
        opts=_solve_options(args),
        with_bounds=with_bounds,
    )
    report = Report(
        command=command,
        version=__version__,
        inputs=inputs,
        matrices=matrices_payload(result.overlap),
        solution=solution_payload(
            result.solution, result.alpha_complex, result.realified
        ),
        timings=result.timings,
    )
    if with_bounds and result.bounds is not None:
        report.bounds = bounds_payload(result.bounds)
    exit_code = 0 if result.solution.global_certificate else 1
    return report, exit_code


def _matrix_report(command, D, E, inputs, args, with_bounds):
    d_solve, e_solve, solution, alpha_complex, realified = solve_overlap_pair(
        D, E, _solve_options(args)
    )
    report = Report(
        command=command,
        version=__version__,
        inputs=inputs,
        matrices={"d": matrix_payload(D), "e": matrix_payload(E), "shot_meta": None},
        solution=solution_payload(solution, alpha_complex, realified),
    )
    if with_bounds:
        bounds = make_bound_report(d_solve, e_solve, solution.energy, seed=args.seed)
        report.bounds = bounds_payload(bounds)
    return report, (0 if solution.global_certificate else 1)


def cmd_demo_h2(args):
    """Built-in two-qubit regression fixture."""
    inputs = {
        "mode": "exact" if args.shots is None else "sampled",
        "hamiltonian_sha256": sha256_text(H2_HAMILTONIAN_TEXT),
        "ansatz_sha256": sha256_text(H2_ANSATZ_TEXT),
        "shots": args.shots,
        "seed": args.seed,
    }
    return _pipeline_report(
        "demo-h2", h2_hamiltonian(), h2_ansatz(), inputs, args,
        with_solution=True, with_bounds=True,
    )


def cmd_overlaps(args):
    hamiltonian, ansatz, matrices, inputs = _load_problem(args)
    if matrices is not None:
        raise InputError("overlaps needs circuit inputs, not --matrices")
    return _pipeline_report(
        "overlaps", hamiltonian, ansatz, inputs, args,
        with_solution=False, with_bounds=False,
    )


def cmd_solve(args, with_bounds=False, command="solve"):
    hamiltonian, ansatz, matrices, inputs = _load_problem(args)
    if matrices is not None:
        return _matrix_report(command, *matrices, inputs, args, with_bounds)
    return _pipeline_report(
        command, hamiltonian, ansatz, inputs, args,
        with_solution=True, with_bounds=with_bounds,
    )


def cmd_bounds(args):
    return cmd_solve(args, with_bounds=True, command="bounds")


def cmd_certify(args):
    return cmd_solve(args, with_bounds=False, command="certify")


def cmd_random(args):
    hamiltonian, ansatz = random_instance(args.m, args.qubits, args.seed)
    h_text, a_text = instance_texts(hamiltonian, ansatz)
    inputs = {
        "mode": "exact",
        "m": args.m,
        "qubits": args.qubits,
        "seed": args.seed,
        "shots": None,
        "hamiltonian_sha256": sha256_text(h_text),
        "ansatz_sha256": sha256_text(a_text),
    }
    result = run_pipeline(
        hamiltonian, ansatz, shots=None, seed=args.seed,
        opts=_solve_options(args), with_bounds=True,
    )
    reference = oracle_min(result.d_solve, result.e_solve)
    gap = abs(result.solution.energy - reference)
    if gap > ORACLE_TOL:
        raise OracleMismatch(
            f"solver energy {result.solution.energy!r} deviates from the "
            f"independent oracle {reference!r} by {gap:.3e}"
        )
    report = Report(
        command="random",
        version=__version__,
        inputs=inputs,
        matrices=matrices_payload(result.overlap),
        solution=solution_payload(
            result.solution, result.alpha_complex, result.realified
        ),
        bounds=bounds_payload(result.bounds),
        timings=result.timings,
    )
    report.solution["oracle_energy"] = float(reference)
    return report, (0 if result.solution.global_certificate else 1)


def _add_common(parser, files=True):
    parser.add_argument("--shots", type=int, default=None,
                        help="per-element shot budget; omit for exact overlaps")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="write the report here")
    parser.add_argument("--tol-kkt", type=float, default=None, dest="tol_kkt")
    parser.add_argument("--tol-psd", type=float, default=None, dest="tol_psd")
    if files:
        parser.add_argument("--hamiltonian", help="Hamiltonian term file")
        parser.add_argument("--ansatz", help="gate-list ansatz file")
        parser.add_argument("--matrices", help="standalone D/E matrix pair file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qae",
        description="Overlap-matrix ground-state pipeline with certificates and bounds",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo-h2", help="run the built-in two-qubit fixture")
    _add_common(p, files=False)
    p.set_defaults(func=cmd_demo_h2)

    for name, func, doc in (
        ("solve", cmd_solve, "solve the constrained program"),
        ("overlaps", cmd_overlaps, "build the overlap matrices only"),
        ("bounds", cmd_bounds, "solve plus convex lower bounds and rounding"),
        ("certify", cmd_certify, "solve and report the optimality certificate"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("random", help="random instance with oracle cross-check")
    p.add_argument("--m", type=int, required=True, help="ansatz size (<= 8)")
    p.add_argument("--qubits", type=int, required=True)
    _add_common(p, files=False)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, exit_code = args.func(args)
    except InputError as exc:
        print(f"qae: input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"qae: input error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"qae: numerical failure: {exc}", file=sys.stderr)
        return 3

    text = report_to_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for stage, seconds in report.timings.items():
        print(f"[timing] {stage}: {seconds:.4f}s", file=sys.stderr)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
