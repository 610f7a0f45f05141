"""Gaussian-kernel ridge regression with a classical or probe-based solver.

The weights alpha = (K + lambda*I)^-1 f either come from the LU inverse or
are recovered entry by entry from inverse-expectation probes: each alpha_i is
a bilinear form e_i^dag (K + lambda*I)^-1 f, reconstructed by polarization
from four quadratic forms with phi proportional to e_i +- f_hat and
e_i +- i*f_hat.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned
from .expectation import DenseSource, InverseExpectationRequest, qgld_expectation
from .linalg import inverse
from .qgpe import GradientEncoding

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class KernelModel:
    training_points: np.ndarray
    targets: np.ndarray
    sigma: float
    ridge: float
    alpha: np.ndarray
    solver: str


def gaussian_kernel_matrix(points: np.ndarray, sigma: float, other: np.ndarray | None = None) -> np.ndarray:
    """K_ij = exp(-||x_i - x_j||^2 / sigma^2)."""
    a = np.atleast_2d(np.asarray(points, dtype=float).T).T
    b = a if other is None else np.atleast_2d(np.asarray(other, dtype=float).T).T
    sq = np.sum((a[:, None, :] - b[None, :, :]) ** 2, axis=-1)
    return np.exp(-sq / sigma**2)


def _quadratic_form(system: np.ndarray, w: np.ndarray, k: int, enc: GradientEncoding) -> float:
    """w^dag (system)^-1 w via the probe pipeline, for unnormalized w."""
    norm = np.linalg.norm(w)
    if norm < 1e-14:
        return 0.0
    request = InverseExpectationRequest(
        x=system, phi=w / norm, k=k, enc=enc, eigensource=DenseSource()
    )
    report = qgld_expectation(request, symmetric=True)
    return float(norm**2 * report.total)


def kernel_fit(points, targets, sigma: float, ridge: float, solver: str = "classical",
               k: int | None = None, enc: GradientEncoding = GradientEncoding()) -> KernelModel:
    """Fit alpha = (K + ridge*I)^-1 f with the chosen solver."""
    points = np.asarray(points, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if ridge <= 0:
        raise ValueError("ridge regularizer must be positive")
    if len(points) != len(targets):
        raise ValueError("points and targets differ in length")
    n = len(targets)
    system = gaussian_kernel_matrix(points, sigma) + ridge * np.eye(n)
    cond = float(np.linalg.cond(system))
    if cond > CONDITION_LIMIT:
        raise IllConditioned(f"condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")

    if solver == "classical":
        alpha = (inverse(system) @ targets).real
    elif solver == "qgld":
        k = n if k is None else k
        f_norm = float(np.linalg.norm(targets))
        f_hat = targets / f_norm
        alpha = np.zeros(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            q_plus = _quadratic_form(system, e + f_hat, k, enc)
            q_minus = _quadratic_form(system, e - f_hat, k, enc)
            q_iplus = _quadratic_form(system, e + 1j * f_hat, k, enc)
            q_iminus = _quadratic_form(system, e - 1j * f_hat, k, enc)
            bilinear = ((q_plus - q_minus) + 1j * (q_iminus - q_iplus)) / 4.0
            alpha[i] = f_norm * bilinear.real
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return KernelModel(
        training_points=points,
        targets=targets,
        sigma=sigma,
        ridge=ridge,
        alpha=alpha,
        solver=solver,
    )


def kernel_predict(model: KernelModel, x) -> np.ndarray | float:
    """f(x) = sum_j alpha_j kappa(x, x_j)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    grid = np.atleast_1d(x)
    weights = gaussian_kernel_matrix(grid, model.sigma, other=model.training_points)
    out = weights @ model.alpha
    return float(out[0]) if scalar else out
