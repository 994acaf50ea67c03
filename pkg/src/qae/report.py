"""Machine-readable run reports.

A report is a single JSON document with sorted keys, so equal runs produce
byte-identical files.  Wall-clock timings are kept on the in-memory object
(and logged) but never serialized, since they would break reproducibility.
All matrices are embedded, which makes reports self-contained: the solve can
be reproduced from the report alone.
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ParseError
from .pipeline import solve_overlap_pair
from .solver import SolveOptions


@dataclass
class Report:
    command: str
    version: str
    inputs: dict
    matrices: dict = None
    solution: dict = None
    bounds: dict = None
    timings: dict = field(default_factory=dict, compare=False)


def sha256_text(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def matrix_payload(M):
    M = np.asarray(M, dtype=complex)
    return {
        "real": [[float(x) for x in row] for row in M.real],
        "imag": [[float(x) for x in row] for row in M.imag],
    }


def payload_matrix(payload):
    M = np.array(payload["real"], dtype=float) + 1j * np.array(
        payload["imag"], dtype=float
    )
    return M


def vector_payload(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return {
            "real": [float(x) for x in v.real],
            "imag": [float(x) for x in v.imag],
        }
    return {"real": [float(x) for x in v], "imag": [0.0] * v.shape[0]}


def matrices_payload(pair):
    meta = None
    if pair.shot_meta is not None:
        meta = {"shots": pair.shot_meta.shots, "seed": pair.shot_meta.seed}
    return {
        "d": matrix_payload(pair.D),
        "e": matrix_payload(pair.E),
        "shot_meta": meta,
    }


def solution_payload(solution, alpha_complex, realified):
    return {
        "energy": float(solution.energy),
        "lambda": float(solution.lam),
        "alpha_solve_space": [float(x) for x in solution.alpha],
        "alpha": vector_payload(alpha_complex),
        "kkt_stationarity": float(solution.kkt_stationarity),
        "kkt_feasibility": float(solution.kkt_feasibility),
        "second_order_ok": bool(solution.second_order_ok),
        "global_certificate": bool(solution.global_certificate),
        "degenerate": bool(solution.degenerate),
        "realified": bool(realified),
    }


def bounds_payload(bounds):
    return {
        "dual_bound": float(bounds.dual_bound),
        "sdp_bound": float(bounds.sdp_bound),
        "primal_energy": float(bounds.primal_energy),
        "rounded_alpha": [float(x) for x in bounds.rounded_alpha],
        "rounded_energy": float(bounds.rounded_energy),
        "dual_iterations": int(bounds.dual_iterations),
        "sdp_iterations": int(bounds.sdp_iterations),
        "sdp_converged": bool(bounds.sdp_converged),
        "multiplier_flipped": float(bounds.multiplier_flipped),
    }


def report_to_text(report):
    doc = {
        "command": report.command,
        "version": report.version,
        "inputs": report.inputs,
        "matrices": report.matrices,
        "solution": report.solution,
        "bounds": report.bounds,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_report(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from None
    for key in ("command", "version", "inputs"):
        if key not in doc:
            raise ParseError(f"report is missing the {key!r} field")
    return Report(
        command=doc["command"],
        version=doc["version"],
        inputs=doc["inputs"],
        matrices=doc.get("matrices"),
        solution=doc.get("solution"),
        bounds=doc.get("bounds"),
    )


def resolve_report(report, opts=None):
    """Re-run the solve on the matrices embedded in a report.

    Returns the fresh QcqpSolution; reports are self-contained, so this must
    reproduce the embedded solution.
    """
    if report.matrices is None:
        raise ParseError("report contains no matrices to re-solve")
    D = payload_matrix(report.matrices["d"])
    E = payload_matrix(report.matrices["e"])
    _, _, solution, _, _ = solve_overlap_pair(D, E, opts or SolveOptions())
    return solution
