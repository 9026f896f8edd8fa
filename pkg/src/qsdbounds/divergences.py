"""Divergence-type quantities for a pair of positive semidefinite operators (A, B).

Everything is driven by the log-moment curve

    psi(t) = log Tr A^t B^(1-t),

evaluated through the joint-support representation: psi equals the classical
log-moment curve of the pair of weighted measures p(i,j) = a_i Tr P_i Q_j,
q(i,j) = b_j Tr P_i Q_j built from the spectral decompositions. Derived
quantities: Renyi divergences, relative entropy and its variance, Chernoff
and Hoeffding distances, the Legendre-type transforms phi / phi_hat, and the
cutoff parameter solving r = (t-1) psi'(t) - psi(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import bisect_decreasing, golden_max, grid_golden_max
from .errors import ConvergenceError, DegeneracyError, ValidationError
from .linalg import (
    DensityMatrix,
    SpectralDecomposition,
    support_overlap_table,
    trace_norm,
)

WEIGHT_CUTOFF = 1e-12
_CONTAINMENT_TOL = 1e-10
_BOUNDARY_TOL = 1e-13


@dataclass(frozen=True)
class PsiCurve:
    """Joint-support data defining psi(t) for one operator pair.

    support_weights[k] = Tr P_i Q_j for the k-th retained pair, log_ratios[k]
    = log a_i - log b_j, and log_p / log_q are the logs of the weighted
    measures. Empty arrays mean orthogonal supports (psi = -inf everywhere).
    """

    support_weights: np.ndarray
    log_ratios: np.ndarray
    log_p: np.ndarray
    log_q: np.ndarray
    trace_a: float
    trace_b: float
    a_support_contained: bool
    b_support_contained: bool

    @property
    def size(self) -> int:
        return int(self.log_p.size)

    @property
    def orthogonal_supports(self) -> bool:
        return self.size == 0


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def build_psi(
    a_dec: SpectralDecomposition,
    b_dec: SpectralDecomposition,
    weight_cutoff: float = WEIGHT_CUTOFF,
) -> PsiCurve:
    """PsiCurve of a pair of PSD operators given by spectral decompositions."""
    rows = support_overlap_table(a_dec, b_dec, weight_cutoff)
    trace_a = math.fsum(v * r for v, r in zip(a_dec.eigenvalues, a_dec.ranks()))
    trace_b = math.fsum(v * r for v, r in zip(b_dec.eigenvalues, b_dec.ranks()))
    weights = np.array([w for (_, _, _, _, w) in rows], dtype=np.float64)
    log_a = np.array([math.log(a) for (_, _, a, _, _) in rows], dtype=np.float64)
    log_b = np.array([math.log(b) for (_, _, _, b, _) in rows], dtype=np.float64)
    log_w = np.log(weights) if weights.size else weights
    sum_p = math.fsum(a * w for (_, _, a, _, w) in rows)
    sum_q = math.fsum(b * w for (_, _, _, b, w) in rows)
    return PsiCurve(
        support_weights=_freeze(weights),
        log_ratios=_freeze(log_a - log_b),
        log_p=_freeze(log_a + log_w),
        log_q=_freeze(log_b + log_w),
        trace_a=trace_a,
        trace_b=trace_b,
        a_support_contained=sum_p >= trace_a - _CONTAINMENT_TOL * max(1.0, trace_a),
        b_support_contained=sum_q >= trace_b - _CONTAINMENT_TOL * max(1.0, trace_b),
    )


def psi_curve_from_probabilities(p, q) -> PsiCurve:
    """PsiCurve of two positive weight vectors on a shared finite alphabet."""
    pa = np.asarray(p, dtype=np.float64)
    qa = np.asarray(q, dtype=np.float64)
    if pa.shape != qa.shape or pa.ndim != 1 or pa.size == 0:
        raise ValidationError("p and q must be nonempty vectors of equal length")
    if np.any(pa <= 0.0) or np.any(qa <= 0.0):
        raise ValidationError("p and q must be strictly positive (shared support)")
    log_p = np.log(pa)
    log_q = np.log(qa)
    return PsiCurve(
        support_weights=_freeze(np.ones_like(pa)),
        log_ratios=_freeze(log_p - log_q),
        log_p=_freeze(log_p),
        log_q=_freeze(log_q),
        trace_a=math.fsum(pa),
        trace_b=math.fsum(qa),
        a_support_contained=True,
        b_support_contained=True,
    )


def _logsumexp(values: np.ndarray) -> float:
    m = float(np.max(values))
    if not math.isfinite(m):
        return m
    return m + math.log(math.fsum(np.exp(values - m)))


def _require_joint_support(curve: PsiCurve) -> None:
    if curve.orthogonal_supports:
        raise ValidationError("orthogonal supports: psi is -inf everywhere")


def psi(curve: PsiCurve, t: float) -> float:
    """psi(t) = log sum p^t q^(1-t); -inf for orthogonal supports."""
    if curve.orthogonal_supports:
        return -math.inf
    return _logsumexp(curve.log_q + t * curve.log_ratios)


def _tilted_weights(curve: PsiCurve, t: float) -> np.ndarray:
    logw = curve.log_q + t * curve.log_ratios
    w = np.exp(logw - logw.max())
    return w / math.fsum(w)


def psi_prime(curve: PsiCurve, t: float) -> float:
    """psi'(t): mean of the log-ratio statistic under the tilted measure at t."""
    _require_joint_support(curve)
    mu = _tilted_weights(curve, t)
    return math.fsum(mu * curve.log_ratios)


def psi_second(curve: PsiCurve, t: float) -> float:
    """psi''(t): variance of the log-ratio statistic under the tilted measure at t."""
    _require_joint_support(curve)
    mu = _tilted_weights(curve, t)
    mean = math.fsum(mu * curve.log_ratios)
    dev = curve.log_ratios - mean
    return math.fsum(mu * dev * dev)


def _is_degenerate(curve: PsiCurve) -> bool:
    # q proportional to p: the log-ratio statistic is constant and psi is affine
    return curve.size > 0 and float(np.ptp(curve.log_ratios)) <= 1e-12


def renyi(curve: PsiCurve, t: float) -> float:
    """Renyi divergence D_t = psi(t) / (t - 1) for t >= 0, t != 1.

    +inf when the supports are orthogonal and t is in [0, 1), and when the
    support of A is not contained in the support of B and t > 1.
    """
    if t < 0.0:
        raise ValidationError(f"renyi order must be >= 0, got {t}")
    if t == 1.0:
        raise ValidationError("renyi order t = 1 is the relative entropy; use relative_entropy")
    if t > 1.0 and not curve.a_support_contained:
        return math.inf
    if curve.orthogonal_supports:
        return math.inf
    return psi(curve, t) / (t - 1.0)


def relative_entropy(curve: PsiCurve) -> float:
    """D(A||B) = sum p (log p - log q) over the joint support; +inf without support containment."""
    if not curve.a_support_contained:
        return math.inf
    return math.fsum(np.exp(curve.log_p) * curve.log_ratios)


def relative_entropy_variance(curve: PsiCurve) -> float:
    """Second-order coefficient V = psi''(1); requires support containment."""
    if not curve.a_support_contained:
        raise ValidationError("variance needs the support of A contained in the support of B")
    return psi_second(curve, 1.0)


def chernoff_distance(curve: PsiCurve) -> tuple[float, float]:
    """(-min over [0,1] of psi, leftmost argmin). Orthogonal supports give +inf."""
    if curve.orthogonal_supports:
        return math.inf, 0.0
    t_star, value = grid_golden_max(lambda t: -psi(curve, t), 0.0, 1.0)
    return value, t_star


def hoeffding_distance(curve: PsiCurve, r: float) -> float:
    """H_r = sup over 0 <= t < 1 of (-t r - psi(t)) / (1 - t) for r >= 0.

    Computed through the substitution s = t / (1 - t), maximizing the concave
    map s -> -s r - (1 + s) psi(s / (1 + s)) over s >= 0. Equals -psi(0) once
    r >= -psi(0) - psi'(0); +inf below -psi(1).
    """
    if r < 0.0:
        raise ValidationError(f"rate r must be >= 0, got {r}")
    if curve.orthogonal_supports:
        return math.inf
    psi0 = psi(curve, 0.0)
    psi1 = psi(curve, 1.0)
    if r < -psi1 - _BOUNDARY_TOL:
        return math.inf
    if r <= -psi1 + _BOUNDARY_TOL:
        # boundary value: the supremum is approached as t -> 1
        return r + psi_prime(curve, 1.0)
    if r >= -psi0 - psi_prime(curve, 0.0):
        return -psi0

    def gain(s: float) -> float:
        t = s / (1.0 + s)
        return -s * r - (1.0 + s) * psi(curve, t)

    s_hi = 1.0
    for _ in range(200):
        if gain(2.0 * s_hi) <= gain(s_hi):
            break
        s_hi *= 2.0
    else:
        raise ConvergenceError("failed to bracket the Hoeffding maximizer")
    s_hi *= 2.0
    _, best = golden_max(gain, 0.0, s_hi, 1e-12 * (1.0 + s_hi))
    return max(best, -psi0)


def phi(curve: PsiCurve, a: float) -> float:
    """phi(a) = max over t in [0,1] of (a t - psi(t)); concave conjugate on the unit interval."""
    _require_joint_support(curve)
    _, value = grid_golden_max(lambda t: a * t - psi(curve, t), 0.0, 1.0)
    return value


def phi_hat(curve: PsiCurve, a: float) -> float:
    """phi_hat(a) = phi(a) - a."""
    return phi(curve, a) - a


def solve_t_r(curve: PsiCurve, r: float) -> float:
    """Unique t in (0, 1) with (t - 1) psi'(t) - psi(t) = r.

    Defined for -psi(1) < r < -psi(0) - psi'(0); the left side is strictly
    decreasing in t (its derivative is (t - 1) psi''(t)), so bisection applies.
    Proportional measures are rejected as degenerate.
    """
    _require_joint_support(curve)
    if _is_degenerate(curve):
        raise DegeneracyError("measures are proportional: psi is affine and t_r is undefined")
    lo_end = -psi(curve, 1.0)
    hi_end = -psi(curve, 0.0) - psi_prime(curve, 0.0)
    if not (lo_end < r < hi_end):
        raise ValidationError(
            f"r = {r!r} outside the open interval ({lo_end!r}, {hi_end!r})"
        )

    def g(t: float) -> float:
        return (t - 1.0) * psi_prime(curve, t) - psi(curve, t)

    return bisect_decreasing(g, 0.0, 1.0, r, 1e-12)


def a_r(curve: PsiCurve, r: float) -> float:
    """Threshold a_r = H_r - r; satisfies phi(a_r) = H_r and phi_hat(a_r) = r."""
    if r <= -psi(curve, 1.0):
        raise ValidationError(f"a_r needs r > {-psi(curve, 1.0)!r}")
    return hoeffding_distance(curve, r) - r


def eta(curve: PsiCurve) -> float:
    """eta = 1 + exp(D_{3/2} / 2) + exp(-D_{1/2} / 2); +inf without support containment."""
    d32 = renyi(curve, 1.5)
    if math.isinf(d32):
        return math.inf
    d12 = renyi(curve, 0.5)
    return 1.0 + math.exp(0.5 * d32) + math.exp(-0.5 * d12)


def binary_entropy(x: float) -> float:
    """h2(x) = -x log x - (1-x) log(1-x) on [0, 1], with 0 log 0 = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"binary entropy argument must lie in [0, 1], got {x}")
    acc = 0.0
    if x > 0.0:
        acc -= x * math.log(x)
    if x < 1.0:
        acc -= (1.0 - x) * math.log(1.0 - x)
    return acc


def von_neumann_entropy(state: DensityMatrix) -> float:
    """S(rho) = -sum lam log lam over the positive eigenvalues."""
    w = np.linalg.eigvalsh(state.array)
    return -math.fsum(v * math.log(v) for v in w if v > 0.0)


def entropy_difference_bound(a: DensityMatrix, b: DensityMatrix) -> float:
    """Upper bound on |S(A) - S(B)| in terms of the trace distance.

    Returns (T/2) log(d-1) + h2(T/2) with T = ||A - B||_1, checking that the
    actual entropy difference respects it.
    """
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.dim == 1:
        return 0.0
    t_half = min(trace_norm(a.matrix - b.matrix) / 2.0, 1.0)
    bound = t_half * math.log(a.dim - 1) if a.dim > 1 else 0.0
    bound += binary_entropy(t_half)
    gap = abs(von_neumann_entropy(a) - von_neumann_entropy(b))
    if gap > bound + 1e-9:
        raise ArithmeticError(
            f"entropy difference {gap!r} exceeds its bound {bound!r}; numerical inconsistency"
        )
    return bound


@dataclass(frozen=True)
class DivergenceProfile:
    """Summary divergences for one state pair, all in nats."""

    relative_entropy: float
    chernoff: float
    chernoff_argmin_t: float
    eta: float
    variance: float


def profile_from_curve(curve: PsiCurve) -> DivergenceProfile:
    """DivergenceProfile computed from an already-built PsiCurve."""
    chern, t_star = chernoff_distance(curve)
    variance = (
        relative_entropy_variance(curve) if curve.a_support_contained else math.inf
    )
    return DivergenceProfile(
        relative_entropy=relative_entropy(curve),
        chernoff=chern,
        chernoff_argmin_t=t_star,
        eta=eta(curve),
        variance=variance,
    )


def divergence_profile(
    rho: DensityMatrix, sigma: DensityMatrix, group_tol: float = 1e-8
) -> DivergenceProfile:
    """DivergenceProfile of two states, built from one shared PsiCurve."""
    return profile_from_curve(build_psi(rho.spectral(group_tol), sigma.spectral(group_tol)))
