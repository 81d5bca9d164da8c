"""Command-line front end: problem-file parsing, the vqge / fqge /
reference / decompose subcommands, JSON summaries on stdout, optional CSV
traces, and a single-line JSON error contract on stderr."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .fqge import FqgeConfig, run_fqge
from .measurement import shot_allocation
from .pauli import PauliSum, decompose
from .reference import count_distinct, distinct_values, generalized_eig
from .statevector import basis_state
from .vqge import OptConfig, Pencil, SolveConfig, solve_spectrum

_DEFAULT_ORACLE_CAP = 10


def bundled_problem_path() -> Path:
    """Filesystem path of the packaged two-qubit demonstration pencil."""
    return Path(str(resources.files("geig").joinpath("problems", "demo_2q.json")))


def _oracle_cap() -> int:
    raw = os.environ.get("GEIG_DENSE_CAP", "")
    if not raw:
        return _DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"GEIG_DENSE_CAP must be an integer, got {raw!r}") from None


def _parse_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValueError("dense matrix must be a non-empty list of rows")
    try:
        return np.array(
            [[complex(c[0], c[1]) for c in row] for row in rows], dtype=complex
        )
    except (TypeError, IndexError):
        raise ValueError(
            "dense matrix entries must be [re, im] pairs in row-major order"
        ) from None


def _parse_terms(entries, n: int, side: str) -> PauliSum:
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"{side!r} must be a non-empty list of terms")
    terms = []
    for entry in entries:
        if not isinstance(entry, dict) or set(entry) != {"coeff", "ops"}:
            raise ValueError(
                f"each {side!r} term needs exactly the keys 'coeff' and 'ops'"
            )
        terms.append((float(entry["coeff"]), str(entry["ops"])))
    return PauliSum(n, terms)


def parse_problem(obj) -> Pencil:
    """Build a pencil from a problem dict: qubit count ``n`` plus, for each
    side, either a term list ("A") or a dense matrix ("A_dense")."""
    if not isinstance(obj, dict):
        raise ValueError("problem file must contain a JSON object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"'n' must be a positive integer, got {n!r}")
    sides = []
    for side in ("A", "B"):
        has_terms = side in obj
        has_dense = f"{side}_dense" in obj
        if has_terms == has_dense:
            raise ValueError(
                f"problem must supply exactly one of {side!r} or '{side}_dense'"
            )
        if has_terms:
            sides.append(_parse_terms(obj[side], n, side))
        else:
            m = _parse_matrix(obj[f"{side}_dense"])
            if m.shape != (2**n, 2**n):
                raise ValueError(
                    f"'{side}_dense' has shape {m.shape}, expected {(2**n, 2**n)}"
                )
            sides.append(decompose(m))
    return Pencil(sides[0], sides[1])


def serialize_problem(pencil: Pencil) -> dict:
    """Problem dict in canonical term order; parsing it back reproduces the
    pencil exactly."""
    return {
        "n": pencil.n,
        "A": [{"coeff": c, "ops": p.ops} for c, p in pencil.A.terms],
        "B": [{"coeff": c, "ops": p.ops} for c, p in pencil.B.terms],
    }


def _load_problem(args) -> Pencil:
    path = Path(args.problem) if args.problem else bundled_problem_path()
    return parse_problem(json.loads(path.read_text()))


def _reference_or_none(pencil: Pencil):
    cap = _oracle_cap()
    if pencil.n > cap:
        return None
    return generalized_eig(pencil, max_qubits=cap)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_vqge_trace(path: str, levels) -> None:
    lines = ["level,restart,step,loss,grad_norm"]
    for idx, level in enumerate(levels, start=1):
        for restart, trace in enumerate(level.traces):
            for step in trace.steps:
                lines.append(
                    f"{idx},{restart},{step.step},{_fmt(step.loss)},{_fmt(step.grad_norm)}"
                )
    Path(path).write_text("\n".join(lines) + "\n")


def _write_fqge_trace(path: str, rows) -> None:
    lines = ["s,value,residual,delta_re,delta_im,success_prob,C,d"]
    for row in rows:
        d = complex(row.delta_used)
        lines.append(
            f"{row.s},{_fmt(row.value)},{_fmt(row.residual)},"
            f"{_fmt(d.real)},{_fmt(d.imag)},{_fmt(row.success_prob)},"
            f"{_fmt(row.lcu_norm_c)},{row.lcu_terms}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_vqge(args) -> dict:
    pencil = _load_problem(args)
    ref = _reference_or_none(pencil)
    r = args.r
    if r is None:
        if ref is None:
            raise ValueError(
                "--r is required when the problem exceeds the dense reference cap"
            )
        r = count_distinct(ref.eigenvalues)
    config = SolveConfig(
        layers=args.layers,
        restarts=args.restarts,
        seed=args.seed,
        entangler=args.entangler,
        opt=OptConfig(lr=args.lr, iters=args.iters, method=args.method),
        shots=args.shots,
    )
    levels = solve_spectrum(pencil, r, config)
    summary = {
        "command": "vqge",
        "n": pencil.n,
        "r": r,
        "layers": args.layers,
        "restarts": args.restarts,
        "iters": args.iters,
        "seed": args.seed,
        "eigenvalues": [level.eigenvalue for level in levels],
        "levels": [
            {
                "eigenvalue": level.eigenvalue,
                "objective": level.objective,
                "best_restart": level.best_restart,
            }
            for level in levels
        ],
    }
    if ref is not None:
        found = [level.eigenvalue for level in levels]
        distinct = distinct_values(ref.eigenvalues)
        if len(found) == len(distinct):
            errors = [abs(f - lam) for f, lam in zip(found, distinct)]
        else:
            errors = [min(abs(f - lam) for lam in ref.eigenvalues) for f in found]
        summary["reference"] = {
            "eigenvalues": list(ref.eigenvalues),
            "distinct": distinct,
            "abs_errors": errors,
            "max_abs_error": max(errors),
        }
    if args.target_eps is not None:
        alphas = [abs(c) for c in pencil.A.coeffs]
        betas = [abs(c) for c in pencil.B.coeffs]
        gammas = [abs(c) for c in pencil.B.coeffs]
        plan = shot_allocation(alphas, betas, gammas, args.target_eps)
        terms = [
            {"label": f"A[{k}]", "coeff": c, "sigma": 1.0, "shots": m}
            for k, (c, m) in enumerate(zip(alphas, plan.m_a))
        ]
        terms += [
            {"label": f"B[{l}]", "coeff": c, "sigma": 1.0, "shots": m}
            for l, (c, m) in enumerate(zip(betas, plan.m_b))
        ]
        terms += [
            {"label": f"O[{i}]", "coeff": c, "sigma": 1.0, "shots": m}
            for i, (c, m) in enumerate(zip(gammas, plan.m_o))
        ]
        summary["shot_allocation"] = {
            "terms": terms,
            "total": plan.total,
            "eps": plan.eps,
        }
    if args.trace:
        _write_vqge_trace(args.trace, levels)
        summary["trace_path"] = args.trace
    return summary


def cmd_fqge(args) -> dict:
    pencil = _load_problem(args)
    cfg = FqgeConfig(
        delta=args.delta,
        line_search=args.line_search,
        epsilon=args.epsilon,
        max_iters=args.max_iters,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
    )
    initial = basis_state(pencil.n, args.initial)
    result = run_fqge(pencil, initial, cfg)
    rows = result.iterates
    d_max = max(row.lcu_terms for row in rows)
    ancillas = int(np.ceil(np.log2(d_max))) if d_max > 1 else 0
    cost = d_max * ancillas * (pencil.n + 1)
    summary = {
        "command": "fqge",
        "n": pencil.n,
        "delta": args.delta,
        "line_search": args.line_search,
        "epsilon": args.epsilon,
        "max_iters": args.max_iters,
        "noise_sigma": args.noise_sigma,
        "seed": args.seed,
        "initial": args.initial,
        "status": result.status,
        "iterations": len(rows) - 1,
        "eigenvalue": result.eigenvalue,
        "residual": rows[-1].residual,
        "success_prob_min": min(row.success_prob for row in rows),
        "lcu_terms_max": d_max,
        "gate_cost_estimate": (
            f"~{cost} elementary gates per iteration "
            f"(d={d_max} unitaries, {ancillas} ancilla qubits)"
        ),
    }
    ref = _reference_or_none(pencil)
    if ref is not None:
        nearest = min(ref.eigenvalues, key=lambda lam: abs(result.eigenvalue - lam))
        ground = ref.eigenvectors[:, 0]
        ground = ground / np.linalg.norm(ground)
        summary["reference"] = {
            "nearest_eigenvalue": float(nearest),
            "abs_error": abs(result.eigenvalue - float(nearest)),
            "fidelity_ground": float(abs(np.vdot(ground, result.state.amps)) ** 2),
        }
    if args.trace:
        _write_fqge_trace(args.trace, rows)
        summary["trace_path"] = args.trace
    return summary


def cmd_reference(args) -> dict:
    pencil = _load_problem(args)
    cap = _oracle_cap()
    if pencil.n > cap:
        raise ValueError(
            f"problem has n={pencil.n} qubits, above the dense reference cap {cap}"
        )
    ref = generalized_eig(pencil, max_qubits=cap)
    return {
        "command": "reference",
        "n": pencil.n,
        "eigenvalues": list(ref.eigenvalues),
        "eta1": ref.eta1,
        "distinct": count_distinct(ref.eigenvalues),
    }


def cmd_decompose(args) -> dict:
    obj = json.loads(Path(args.matrix).read_text())
    if isinstance(obj, dict):
        if "matrix" not in obj:
            raise ValueError("decompose input object needs a 'matrix' key")
        obj = obj["matrix"]
    m = _parse_matrix(obj)
    s = decompose(m, tol=args.tol)
    return {
        "command": "decompose",
        "n": s.n,
        "terms": [{"coeff": c, "ops": p.ops} for c, p in s.terms],
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="geig",
        description="Generalized eigensolvers for Pauli-sum operator pencils.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("vqge", help="variational spectrum recovery")
    pv.add_argument(
        "problem",
        nargs="?",
        help="problem JSON path (default: the bundled two-qubit pencil)",
    )
    pv.add_argument("--r", type=int, default=None, help="number of levels to recover")
    pv.add_argument("--layers", type=int, default=2)
    pv.add_argument("--restarts", type=int, default=5)
    pv.add_argument("--iters", type=int, default=200)
    pv.add_argument("--lr", type=float, default=0.1)
    pv.add_argument("--method", choices=("adam", "gd"), default="adam")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--entangler", default="linear")
    pv.add_argument("--shots", type=int, default=0)
    pv.add_argument("--trace", metavar="PATH", help="write a per-step CSV trace")
    pv.add_argument("--target-eps", type=float, default=None, dest="target_eps")
    pv.set_defaults(func=cmd_vqge)

    pf = sub.add_parser("fqge", help="iterative LCU descent")
    pf.add_argument(
        "problem",
        nargs="?",
        help="problem JSON path (default: the bundled two-qubit pencil)",
    )
    pf.add_argument("--delta", type=float, default=0.1)
    pf.add_argument("--line-search", action="store_true", dest="line_search")
    pf.add_argument("--epsilon", type=float, default=1e-8)
    pf.add_argument("--max-iters", type=int, default=200, dest="max_iters")
    pf.add_argument("--noise-sigma", type=float, default=0.0, dest="noise_sigma")
    pf.add_argument("--seed", type=int, default=None)
    pf.add_argument(
        "--initial", type=int, default=0, help="basis index of the start state"
    )
    pf.add_argument("--trace", metavar="PATH", help="write a per-step CSV trace")
    pf.set_defaults(func=cmd_fqge)

    pr = sub.add_parser("reference", help="dense reference eigendecomposition")
    pr.add_argument(
        "problem",
        nargs="?",
        help="problem JSON path (default: the bundled two-qubit pencil)",
    )
    pr.set_defaults(func=cmd_reference)

    pd = sub.add_parser("decompose", help="Pauli decomposition of a dense matrix")
    pd.add_argument("matrix", help="JSON file with a row-major [re, im] matrix")
    pd.add_argument("--tol", type=float, default=1e-10)
    pd.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = args.func(args)
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
