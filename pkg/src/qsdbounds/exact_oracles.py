"""Exact small-n error computations serving as ground truth for every bound.

All quantities here are computed without asymptotics: trace norms of the
weighted difference operator, spectral projections of likelihood-ratio type
tests, the dual form of the minimal type-II error at fixed type-I budget,
and the randomized classical Neyman-Pearson value via type enumeration.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._search import golden_max
from .errors import ConvergenceError, ResourceLimitError, ValidationError
from .linalg import (
    DIM_CAP,
    DensityMatrix,
    HermitianMatrix,
    positive_part_trace,
    tensor_power,
    trace_norm,
)
from .ns_mapping import MAX_TYPES, _check_type_budget, iter_types

_KERNEL_TOL = 1e-12


def _tensor_pair(
    rho: DensityMatrix, sigma: DensityMatrix, n: int, dim_cap: int
) -> tuple[np.ndarray, np.ndarray]:
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    if rho.dim**n > dim_cap:
        raise ResourceLimitError(f"product dimension {rho.dim}^{n} exceeds cap {dim_cap}")
    return tensor_power(rho.matrix, n, dim_cap).array, tensor_power(sigma.matrix, n, dim_cap).array


def quantum_mixed_error_exact(
    rho: DensityMatrix, sigma: DensityMatrix, n: int, a: float, dim_cap: int = DIM_CAP
) -> float:
    """Optimal mixed error e_n(a) = (1 + exp(-n a))/2 - ||exp(-n a) rho_n - sigma_n||_1 / 2."""
    rn, sn = _tensor_pair(rho, sigma, n, dim_cap)
    kappa = math.exp(-n * a)
    diff = HermitianMatrix(kappa * rn - sn)
    return (kappa + 1.0) / 2.0 - trace_norm(diff) / 2.0


class NPTestErrors(NamedTuple):
    alpha: float
    beta: float
    degenerate_kernel: bool


def np_test_errors(
    rho: DensityMatrix, sigma: DensityMatrix, n: int, a: float, dim_cap: int = DIM_CAP
) -> NPTestErrors:
    """Errors of the projector test onto the strictly positive part of exp(-n a) rho_n - sigma_n.

    alpha = Tr rho_n (I - T), beta = Tr sigma_n T. Eigenvalues within 1e-12 of
    zero are excluded from T and flagged, since any split of the kernel is
    optimal and the reported pair is then one choice among several.
    """
    rn, sn = _tensor_pair(rho, sigma, n, dim_cap)
    kappa = math.exp(-n * a)
    diff = HermitianMatrix(kappa * rn - sn)
    w, v = np.linalg.eigh(diff.array)
    pos = w > _KERNEL_TOL
    degenerate = bool(np.any(np.abs(w) <= _KERNEL_TOL))
    cols = v[:, pos]
    alpha = 1.0 - math.fsum(np.einsum("ij,jk,ki->i", cols.conj().T, rn, cols).real)
    beta = math.fsum(np.einsum("ij,jk,ki->i", cols.conj().T, sn, cols).real)
    alpha = min(max(alpha, 0.0), 1.0)
    beta = min(max(beta, 0.0), 1.0)
    return NPTestErrors(alpha=alpha, beta=beta, degenerate_kernel=degenerate)


def beta_eps_exact(
    rho: DensityMatrix, sigma: DensityMatrix, n: int, eps: float, dim_cap: int = DIM_CAP
) -> float:
    """Minimal type-II error at type-I budget eps over all operator tests.

    Computed through the concave dual

        beta = sup over lam >= 0 of (1 - eps) lam - Tr(lam rho_n - sigma_n)_+ ,

    a piecewise linear objective maximized by bracketing doubling plus
    golden-section refinement. The result is clamped to [0, 1].
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    rn, sn = _tensor_pair(rho, sigma, n, dim_cap)

    def objective(lam: float) -> float:
        return (1.0 - eps) * lam - positive_part_trace(HermitianMatrix(lam * rn - sn))

    lam_hi = 1.0
    for _ in range(200):
        if objective(2.0 * lam_hi) <= objective(lam_hi):
            break
        lam_hi *= 2.0
    else:
        raise ConvergenceError("failed to bracket the dual maximizer")
    lam_hi *= 2.0
    _, value = golden_max(objective, 0.0, lam_hi, 1e-10 * max(1.0, lam_hi))
    return min(max(value, 0.0), 1.0)


def classical_beta_eps_exact(
    p, q, n: int, eps: float, max_types: int = MAX_TYPES
) -> float:
    """Randomized Neyman-Pearson type-II error for classical distributions.

    Outcome types are sorted by likelihood ratio descending and accepted
    greedily until the retained p-mass reaches 1 - eps exactly, randomizing
    the boundary type; returns the q-mass of the acceptance region.
    """
    pa = np.asarray(p, dtype=np.float64)
    qa = np.asarray(q, dtype=np.float64)
    if pa.shape != qa.shape or pa.ndim != 1 or pa.size == 0:
        raise ValidationError("p and q must be nonempty vectors of equal length")
    if np.any(pa < 0.0) or np.any(qa < 0.0) or np.any((pa == 0.0) & (qa == 0.0)):
        raise ValidationError("p and q must be nonnegative with p + q > 0 per letter")
    if abs(math.fsum(pa) - 1.0) > 1e-9 or abs(math.fsum(qa) - 1.0) > 1e-9:
        raise ValidationError("p and q must each sum to 1 within 1e-9")
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [0, 1], got {eps}")
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    k = pa.size
    _check_type_budget(n, k, max_types)
    with np.errstate(divide="ignore"):
        log_p = np.log(pa)
        log_q = np.log(qa)
    lg = [math.lgamma(i + 1) for i in range(n + 1)]
    classes: list[tuple[float, float, float]] = []
    for counts in iter_types(n, k):
        log_coef = lg[n] - math.fsum(lg[ci] for ci in counts if ci)
        s_p = math.fsum(ci * lp for ci, lp in zip(counts, log_p) if ci)
        s_q = math.fsum(ci * lq for ci, lq in zip(counts, log_q) if ci)
        mass_p = math.exp(log_coef + s_p) if math.isfinite(s_p) else 0.0
        mass_q = math.exp(log_coef + s_q) if math.isfinite(s_q) else 0.0
        if mass_p == 0.0 and mass_q == 0.0:
            continue
        if mass_q == 0.0:
            key = math.inf
        elif mass_p == 0.0:
            key = -math.inf
        else:
            key = s_p - s_q
        classes.append((key, mass_p, mass_q))
    classes.sort(key=lambda row: -row[0])
    remaining = 1.0 - eps
    beta = 0.0
    for _, mass_p, mass_q in classes:
        if remaining <= 1e-15:
            break
        if mass_p <= 0.0:
            continue
        if mass_p <= remaining:
            beta += mass_q
            remaining -= mass_p
        else:
            beta += (remaining / mass_p) * mass_q
            remaining = 0.0
    return min(max(beta, 0.0), 1.0)
