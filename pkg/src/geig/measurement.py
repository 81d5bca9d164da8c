"""Hadamard-test emulation with optional binomial shot noise, the loss
error bound, and Lagrange-optimal measurement-shot allocation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliString, apply_string
from .statevector import StateVector, inner


@dataclass(frozen=True)
class ErrorBudget:
    """Per-component estimation error budget for the Rayleigh quotient.

    eps_a / eps_b are the numerator / denominator expectation errors, eps_o
    the overlap-penalty error; eta1 is the smallest eigenvalue of B and
    lambda_r the largest generalized eigenvalue.
    """

    eps_a: float
    eps_b: float
    eps_o: float
    eta1: float
    lambda_r: float

    def __post_init__(self):
        if min(self.eps_a, self.eps_b, self.eps_o) < 0.0:
            raise ValueError("error components must be >= 0")


@dataclass(frozen=True)
class ShotPlan:
    """Integral per-term shot counts for the A, B and overlap estimators."""

    m_a: tuple
    m_b: tuple
    m_o: tuple
    total: int
    eps: float


def hadamard_test(
    u: StateVector, term: PauliString, w: StateVector, shots: int = 0, rng=None
) -> tuple[float, float]:
    """(Re, Im) of <u|P|w>, exactly (shots=0) or as unbiased binomial
    estimates with the given shot count per part."""
    value = inner(u, apply_string(term, w))
    if shots == 0:
        return value.real, value.imag
    if shots < 0:
        raise ValueError(f"shot count must be >= 0, got {shots}")
    rng = np.random.default_rng(rng)
    parts = []
    for exact in (value.real, value.imag):
        p = min(1.0, max(0.0, (1.0 + exact) / 2.0))
        k = rng.binomial(shots, p)
        parts.append(2.0 * k / shots - 1.0)
    return parts[0], parts[1]


def error_bound(budget: ErrorBudget) -> float:
    """Worst-case loss error (eps_a + |lambda_r|*eps_b)/eta1 + eps_o."""
    if budget.eta1 <= 0.0:
        raise ValueError(f"eta1 must be > 0, got {budget.eta1}")
    return (budget.eps_a + abs(budget.lambda_r) * budget.eps_b) / budget.eta1 + budget.eps_o


def _family(coeffs, sigmas, name: str) -> tuple[np.ndarray, np.ndarray]:
    coeffs = np.asarray(list(coeffs), dtype=float)
    if np.any(coeffs < 0.0):
        raise ValueError(f"{name} coefficients must be >= 0")
    if sigmas is None:
        sigmas = np.ones_like(coeffs)
    else:
        sigmas = np.asarray(list(sigmas), dtype=float)
        if sigmas.shape != coeffs.shape:
            raise ValueError(f"{name}: {coeffs.size} coefficients, {sigmas.size} variances")
        if np.any(sigmas <= 0.0):
            raise ValueError(f"{name} variances must be > 0")
    return coeffs, sigmas


def shot_allocation(
    alphas: Sequence[float],
    betas: Sequence[float],
    gammas: Sequence[float],
    eps: float,
    sigmas_a=None,
    sigmas_b=None,
    sigmas_o=None,
) -> ShotPlan:
    """Minimal-total shot counts meeting pseudo-error eps.

    Lagrange closed form: M_term = (Lam_a + Lam_b + Lam_o)/eps^2 *
    coeff*sqrt(sigma), with Lam = sum coeff*sqrt(sigma) per family; counts
    are ceil-rounded with a floor of one shot.  Variances default to 1.
    """
    if eps <= 0.0:
        raise ValueError(f"target pseudo-error must be > 0, got {eps}")
    fam_a = _family(alphas, sigmas_a, "A")
    fam_b = _family(betas, sigmas_b, "B")
    fam_o = _family(gammas, sigmas_o, "overlap")
    lam = sum(float(np.sum(c * np.sqrt(s))) for c, s in (fam_a, fam_b, fam_o))
    if lam <= 0.0:
        raise ValueError("all coefficients are zero; nothing to allocate")
    mu_root = lam / eps**2

    def counts(coeffs, sigmas):
        return tuple(
            max(1, math.ceil(mu_root * c * math.sqrt(s)))
            for c, s in zip(coeffs, sigmas)
        )

    m_a = counts(*fam_a)
    m_b = counts(*fam_b)
    m_o = counts(*fam_o)
    return ShotPlan(m_a, m_b, m_o, sum(m_a) + sum(m_b) + sum(m_o), eps)


def pseudo_error_sq(
    alphas, betas, gammas, m_a, m_b, m_o, sigmas_a=None, sigmas_b=None, sigmas_o=None
) -> float:
    """Pseudo-error eps^2 = sum coeff^2*sigma/M over all allocated terms."""
    total = 0.0
    for (coeffs, sigmas), counts in zip(
        (
            _family(alphas, sigmas_a, "A"),
            _family(betas, sigmas_b, "B"),
            _family(gammas, sigmas_o, "overlap"),
        ),
        (m_a, m_b, m_o),
    ):
        counts = np.asarray(list(counts), dtype=float)
        if counts.shape != coeffs.shape:
            raise ValueError("shot counts do not match coefficient count")
        if np.any(counts < 1):
            raise ValueError("shot counts must be >= 1")
        total += float(np.sum(coeffs**2 * sigmas / counts))
    return total


def per_term_precision(coeffs: Sequence[float], eps_total: float) -> np.ndarray:
    """Split a target precision across weighted terms.

    Term i gets eps_i = sqrt(|a_i| / sum_j |a_j|) * eps_total, so the
    implied estimator variances add back to eps_total^2.
    """
    if eps_total <= 0.0:
        raise ValueError(f"target precision must be > 0, got {eps_total}")
    mags = np.abs(np.asarray(list(coeffs), dtype=float))
    weight = float(np.sum(mags))
    if weight <= 0.0:
        raise ValueError("all coefficients are zero")
    return np.sqrt(mags / weight) * eps_total
