"""Batch command-line front end.

Subcommands: gradient, reproduce-table1, qgld, lanczos, kernel-demo.
Matrices come from JSON files ({"dim", "re", "im"}) or built-in presets
(sigma-x, sigma-z, hadamard, identity[:N], random-spd:N:SEED).  Identical
configuration and seeds produce byte-identical output.  Exit codes: 0 on
success, 2 on validation or I/O failure, 3 on numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as qio
from .errors import (
    DegenerateEigenvalue,
    FlatDistribution,
    IllConditioned,
    NearZeroEigenvalue,
    NotPositiveSemidefinite,
    QgldError,
    SingularMatrix,
)
from .expectation import (
    DenseSource,
    InverseExpectationRequest,
    RqblSource,
    classical_reference_expectation,
    eigenvalue_gradient_probe,
    qgld_expectation,
    sampled_qgld,
    sigma_qgld_expectation,
)
from .kernel import kernel_fit, kernel_predict
from .lanczos import build_factorization, dump_factorization, run_rqbl
from .linalg import directional_eigen_derivative, eig_hermitian
from .qgpe import GradientEncoding, PerturbationDirection, build_delta, qgpe_run

NUMERIC_ERRORS = (
    SingularMatrix,
    NearZeroEigenvalue,
    NotPositiveSemidefinite,
    DegenerateEigenvalue,
    FlatDistribution,
    IllConditioned,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def random_spd(n: int, seed: int) -> np.ndarray:
    """Seeded SPD test matrix with guaranteed eigenvalue separation."""
    rng = np.random.default_rng(seed)
    gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(gauss)
    values = 0.5 + 0.4 * np.arange(n) + rng.uniform(0.0, 0.25, size=n)
    return (q * values) @ q.conj().T


def resolve_matrix(source: str) -> np.ndarray:
    if source == "sigma-x":
        return SIGMA_X.copy()
    if source == "sigma-z":
        return SIGMA_Z.copy()
    if source == "hadamard":
        return HADAMARD.copy()
    if source == "identity":
        return np.eye(2, dtype=complex)
    if source.startswith("identity:"):
        return np.eye(int(source.split(":")[1]), dtype=complex)
    if source.startswith("random-spd:"):
        _, n, seed = source.split(":")
        return random_spd(int(n), int(seed))
    return qio.load_matrix(source)


def resolve_phi(source: str, n: int) -> np.ndarray:
    if source == "uniform":
        return np.ones(n, dtype=complex) / np.sqrt(n)
    if source == "basis0":
        phi = np.zeros(n, dtype=complex)
        phi[0] = 1.0
        return phi
    phi = qio.load_vector(source)
    return phi / np.linalg.norm(phi)


def resolve_delta(source: str, x: np.ndarray, phi: np.ndarray | None) -> PerturbationDirection:
    n = x.shape[0]
    if source.startswith("element:"):
        i, j = (int(v) for v in source.split(":")[1].split(","))
        return build_delta("element", n, i=i, j=j)
    if source == "all-ones":
        return build_delta("all_ones", n)
    if source == "outer":
        if phi is None:
            raise ValueError("outer direction needs --phi")
        return build_delta("outer", n, phi=phi)
    if source == "identity":
        return build_delta("custom", n, matrix=np.eye(n, dtype=complex))
    if source == "matrix":
        return build_delta("custom", n, matrix=x)
    raise ValueError(f"unknown delta source {source!r}")


def encoding_from_args(args) -> GradientEncoding:
    return GradientEncoding(L=args.L, W=args.W, m=args.m)


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get("QGLD_THREADS")
    if cap is not None:
        return max(1, min(int(cap), n_tasks))
    return max(1, min(os.cpu_count() or 1, n_tasks))


# ---------------------------------------------------------------------------
# subcommands

def cmd_gradient(args) -> str:
    x = resolve_matrix(args.matrix)
    phi = resolve_phi(args.phi, x.shape[0]) if args.phi else None
    delta = resolve_delta(args.delta, x, phi)
    enc = encoding_from_args(args)
    dec = eig_hermitian(x)
    order = np.argsort(-np.abs(dec.values), kind="stable")
    k = args.k if args.k else len(order)
    shift = float(np.linalg.norm(delta.matrix, ord=2))
    rows = []
    for p in order[:k]:
        grad = eigenvalue_gradient_probe(x, dec.vectors[:, p], delta, enc, identity_shift=shift)
        oracle = directional_eigen_derivative(x, delta.matrix, int(p))
        rows.append([int(p), float(dec.values[p]), args.delta, enc.L, enc.m,
                     grad, oracle, abs(grad - oracle)])
    return qio.render_csv(
        ["p", "E_p", "delta_kind", "L", "m", "gradient_quantum", "gradient_oracle", "abs_error"],
        rows,
    )


def cmd_reproduce_table1(args) -> str:
    enc = GradientEncoding(L=1e-6, W=1.0, m=1)
    dec = eig_hermitian(SIGMA_X)
    states = {"+": dec.vectors[:, 1], "-": dec.vectors[:, 0]}
    directions = [
        ("X", build_delta("custom", 2, matrix=SIGMA_X)),
        ("|0><0|", build_delta("element", 2, i=0, j=0)),
        ("|1><1|", build_delta("element", 2, i=1, j=1)),
        ("I", build_delta("custom", 2, matrix=np.eye(2, dtype=complex))),
    ]
    rows = []
    for name, delta in directions:
        for label in ("+", "-"):
            outcome = qgpe_run(SIGMA_X, states[label], delta, enc)
            rows.append(["sigma-x", name, label, enc.L, enc.m, outcome.amplitude_gradient])
    hdec = eig_hermitian(HADAMARD)
    outcome = qgpe_run(HADAMARD, hdec.vectors[:, 1], build_delta("custom", 2, matrix=SIGMA_X), enc)
    rows.append(["hadamard", "X", "H+", enc.L, enc.m, outcome.amplitude_gradient])
    return qio.render_csv(["matrix", "delta", "eigenstate", "L", "m", "gradient"], rows)


def _eigensource(args):
    if args.b:
        return RqblSource(b=args.b, seed=args.seed, steps=args.lanczos_steps)
    return DenseSource()


def cmd_qgld(args) -> str:
    x = resolve_matrix(args.matrix)
    phi = resolve_phi(args.phi or "uniform", x.shape[0])
    enc = encoding_from_args(args)
    k = args.k if args.k else x.shape[0]

    if args.sweep_L:
        l_values = [float(v) for v in args.sweep_L.split(",")]

        def run_one(l_value: float):
            enc_l = GradientEncoding(L=l_value, W=enc.W, m=enc.m)
            request = InverseExpectationRequest(x=x, phi=phi, k=k, enc=enc_l,
                                                eigensource=_eigensource(args))
            report = qgld_expectation(request, with_classical_reference=True)
            return [l_value, report.total, report.classical_reference,
                    abs(report.total - report.classical_reference)]

        with ThreadPoolExecutor(max_workers=worker_count(len(l_values))) as pool:
            rows = list(pool.map(run_one, l_values))
        return qio.render_csv(["L", "total", "classical_reference", "abs_error"], rows)

    if args.mode == "per-eigenvector":
        request = InverseExpectationRequest(x=x, phi=phi, k=k, enc=enc,
                                            eigensource=_eigensource(args))
        report = qgld_expectation(request, with_classical_reference=True)
        payload = report.to_dict()
    elif args.mode == "sigma":
        total = sigma_qgld_expectation(x, phi, enc)
        payload = {
            "mode": "sigma",
            "total": total,
            "classical_reference": classical_reference_expectation(x, phi),
        }
    elif args.mode == "sampled":
        estimate, spread = sampled_qgld(x, phi, args.shots, args.seed, enc)
        payload = {
            "mode": "sampled",
            "n_samples": args.shots,
            "seed": args.seed,
            "estimate": estimate,
            "spread": spread,
            "classical_reference": classical_reference_expectation(x, phi),
        }
    else:
        raise ValueError(f"unknown mode {args.mode!r}")
    payload["L"] = enc.L
    payload["W"] = enc.W
    payload["m"] = enc.m
    payload["k"] = k
    return qio.render_json(payload)


def cmd_lanczos(args) -> str:
    x = resolve_matrix(args.matrix)
    b = args.b or 1
    k = args.k or x.shape[0] // b
    fact = build_factorization(x, b, k, args.seed)
    sol = run_rqbl(x, b, k, args.seed)
    payload = {
        "ritz_values": sol.values.tolist(),
        "residuals": sol.residuals.tolist(),
        "orthonormality_defect": fact.orthonormality_defect(),
        "breakdown": fact.breakdown,
        "steps": fact.steps,
    }
    if args.dump_blocks:
        payload["factorization"] = dump_factorization(fact)
    return qio.render_json(payload)


def cmd_kernel_demo(args) -> str:
    points = np.linspace(0.0, 2 * np.pi, 16)
    targets = np.sin(points)
    sigma, ridge = 1.0, 1e-6
    enc = GradientEncoding(L=args.L, W=args.W, m=args.m)
    classical = kernel_fit(points, targets, sigma, ridge, solver="classical")
    probe = kernel_fit(points, targets, sigma, ridge, solver="qgld",
                       k=args.k or len(points), enc=enc)
    holdout = np.linspace(0.0, 2 * np.pi, 50)
    pred_c = kernel_predict(classical, holdout)
    pred_q = kernel_predict(probe, holdout)
    truth = np.sin(holdout)
    if args.format == "json":
        return qio.render_json({
            "alpha_classical": classical.alpha.tolist(),
            "alpha_qgld": probe.alpha.tolist(),
            "max_alpha_diff": float(np.max(np.abs(classical.alpha - probe.alpha))),
            "holdout_max_err_classical": float(np.max(np.abs(pred_c - truth))),
            "holdout_max_err_qgld": float(np.max(np.abs(pred_q - truth))),
        })
    rows = [
        [i, points[i], targets[i], classical.alpha[i], probe.alpha[i],
         abs(classical.alpha[i] - probe.alpha[i])]
        for i in range(len(points))
    ]
    return qio.render_csv(
        ["i", "x", "target", "alpha_classical", "alpha_qgld", "alpha_absdiff"], rows
    )


# ---------------------------------------------------------------------------
# parser / entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgld",
                                     description="log-determinant gradient pipelines")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_delta=False):
        p.add_argument("--matrix", default="sigma-x",
                       help="matrix JSON path or preset (sigma-x, sigma-z, hadamard, "
                            "identity[:N], random-spd:N:SEED)")
        p.add_argument("--phi", default=None,
                       help="weight vector: uniform, basis0, or JSON path")
        if with_delta:
            p.add_argument("--delta", default="matrix",
                           help="element:i,j (zero-based) | all-ones | outer | identity | matrix")
        p.add_argument("--L", type=float, default=1e-6)
        p.add_argument("--W", type=float, default=1.0)
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--k", type=int, default=0, help="rank cutoff (0 = full)")
        p.add_argument("--b", type=int, default=0, help="Lanczos block size (0 = dense source)")
        p.add_argument("--lanczos-steps", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--shots", type=int, default=64)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_grad = sub.add_parser("gradient", help="per-eigenpair gradient probe vs oracle")
    common(p_grad, with_delta=True)
    p_grad.set_defaults(handler=cmd_gradient)

    p_tab = sub.add_parser("reproduce-table1",
                           help="single-qubit gradient benchmark table")
    common(p_tab)
    p_tab.set_defaults(handler=cmd_reproduce_table1)

    p_qgld = sub.add_parser("qgld", help="inverse expectation value pipelines")
    common(p_qgld)
    p_qgld.add_argument("--mode", choices=("per-eigenvector", "sigma", "sampled"),
                        default="per-eigenvector")
    p_qgld.add_argument("--sweep-L", default=None,
                        help="comma-separated L values; emits error-vs-L CSV")
    p_qgld.set_defaults(handler=cmd_qgld)

    p_lan = sub.add_parser("lanczos", help="randomized block Lanczos eigenpairs")
    common(p_lan)
    p_lan.add_argument("--dump-blocks", action="store_true")
    p_lan.set_defaults(handler=cmd_lanczos)

    p_ker = sub.add_parser("kernel-demo", help="kernel ridge fit of sin(x), both solvers")
    common(p_ker)
    p_ker.set_defaults(handler=cmd_kernel_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        output = args.handler(args)
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (QgldError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
