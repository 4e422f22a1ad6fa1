"""Special functions and regret-budget evaluators for the oracle inequalities.

Covers the drift functions U and U* of the maximal inequalities and their
inverses, Shannon entropy with its geometric-tail bound, the remainder
function Psi defined through a one-dimensional minimization, and the
right-hand-side budgets of the three oracle inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .estimators import WeightVector
from .risk import OracleReport
from .sequence_model import ModelIndexSet, NoiseLevel

__all__ = [
    "PsiEvaluation",
    "u_alpha",
    "u_star_alpha",
    "u_inverse",
    "u_star_inverse",
    "entropy",
    "r_rho",
    "lemma4_bound",
    "psi",
    "theorem_bounds",
    "PSI_EPSILON_LO",
    "PSI_EPSILON_HI",
]

# Search domain for the Psi minimizer.  Below the lower edge the exponential
# term exp(2/(e*eps)) overflows float64 for every representable r, so no
# admissible minimizer is lost; the upper edge is the domain boundary 1/7.
PSI_EPSILON_LO = 1e-6
PSI_EPSILON_HI = 1.0 / 7.0


def u_alpha(alpha: float) -> float:
    """Upward drift rate U(alpha) = -(alpha + log(1 - 2 alpha)/2) / alpha.

    Defined for 0 < alpha < 1/2; strictly increasing, U(0+) = 0, U(1/2-) = inf.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"u_alpha needs 0 < alpha < 1/2, got {alpha}")
    return -(alpha + math.log1p(-2.0 * alpha) / 2.0) / alpha


def u_star_alpha(alpha: float) -> float:
    """Downward drift rate U*(alpha) = (alpha - log(1 + 2 alpha)/2) / alpha.

    Defined for alpha > 0; strictly increasing with range (0, 1).
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise ValueError(f"u_star_alpha needs alpha > 0, got {alpha}")
    return (alpha - math.log1p(2.0 * alpha) / 2.0) / alpha


def _bisect_increasing(func, lo: float, hi: float, target: float) -> float:
    # Strict monotonicity makes the root unique; iterate until the bracket
    # collapses to adjacent floats (well past the 1e-12 contract).
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if func(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def u_inverse(y: float) -> float:
    """Inverse of U on (0, 1/2), solved by bisection to float resolution."""
    y = float(y)
    if not (math.isfinite(y) and y > 0.0):
        raise ValueError(f"u_inverse needs y > 0, got {y}")
    lo = 1e-300
    hi = 0.25
    while u_alpha(hi) < y:
        hi = 0.5 * (hi + 0.5)  # approach the pole at 1/2 geometrically
    return _bisect_increasing(u_alpha, lo, hi, y)


def u_star_inverse(y: float) -> float:
    """Inverse of U* on (0, inf); the bracket grows geometrically before bisection."""
    y = float(y)
    if not 0.0 < y < 1.0:
        raise ValueError(f"u_star_inverse needs 0 < y < 1, got {y}")
    lo = 1e-300
    hi = 1.0
    while u_star_alpha(hi) < y:
        hi *= 2.0
    return _bisect_increasing(u_star_alpha, lo, hi, y)


def entropy(w: WeightVector) -> float:
    """Shannon entropy (natural log) of a weight vector; zero weights contribute 0."""
    values = w.weights
    positive = values[values > 0.0]
    return float(-np.dot(positive, np.log(positive)))


def r_rho(rho: float) -> float:
    """Tail-entropy control function with a seam at e * rho = 1.

    Equals 2/(e rho) on the steep-decay side and
    (1 + 1/(rho e)) * exp((1 - rho e)/(1 + rho e)) beyond; both branches
    meet at the value 2.
    """
    rho = float(rho)
    if not rho > 0.0:
        raise ValueError(f"r_rho needs rho > 0, got {rho}")
    x = math.e * rho
    if x < 1.0:
        return 2.0 / x
    return (1.0 + 1.0 / x) * math.exp((1.0 - x) / (1.0 + x))


def lemma4_bound(K: int, rho: float) -> float:
    """Entropy budget log(K - 1 + exp(R(rho))) for a K-head plus geometric tail."""
    K = int(K)
    if K < 1:
        raise ValueError(f"lemma4_bound needs K >= 1, got {K}")
    r_val = r_rho(rho)
    if K == 1:
        return r_val
    return float(np.logaddexp(math.log(K - 1.0), r_val))


@dataclass(frozen=True)
class PsiEvaluation:
    """Result of the Psi minimization at one argument r in [0, 1]."""

    r: float
    psi: float
    epsilon_star: float
    objective_at_star: float


def _psi_objective(eps: np.ndarray | float, r: float):
    with np.errstate(over="ignore"):
        return 49.0 * eps + r * (105.0 / eps + np.exp(2.0 / (math.e * eps)))


def psi(r: float, grid_points: int = 20_000) -> PsiEvaluation:
    """Minimize 49 eps + r (105/eps + exp(2/(e eps))) over eps in (0, 1/7].

    The objective has extreme curvature near zero, so no unimodality is
    assumed: a dense logarithmic grid locates the basin and a ternary search
    refines it.  psi(0) is the infimum 0, reported at the grid's lower edge.
    """
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"psi needs r in [0, 1], got {r}")
    if grid_points < 10_000:
        raise ValueError("grid_points must be at least 10000")
    if r == 0.0:
        return PsiEvaluation(r=0.0, psi=0.0, epsilon_star=PSI_EPSILON_LO, objective_at_star=0.0)

    grid = np.geomspace(PSI_EPSILON_LO, PSI_EPSILON_HI, grid_points)
    values = _psi_objective(grid, r)
    best = int(np.argmin(values))

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid_points - 1)]
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if not lo < m1 < m2 < hi:
            break
        if _psi_objective(m1, r) <= _psi_objective(m2, r):
            hi = m2
        else:
            lo = m1
    eps_star = 0.5 * (lo + hi)
    refined = float(_psi_objective(eps_star, r))
    if refined > values[best]:
        eps_star = float(grid[best])
        refined = float(values[best])
    return PsiEvaluation(r=r, psi=refined, epsilon_star=float(eps_star), objective_at_star=refined)


def theorem_bounds(oracle: OracleReport, sigma: NoiseLevel, M: ModelIndexSet) -> OracleReport:
    """Fill the three regret budgets for an oracle report.

    t2 is 4 sigma^2 log(#M); t3 is 4 sigma^2 log{(r/sigma^2)[1 + Psi(sigma^2/r)]};
    t1 is the unit-constant shape sigma^2 sqrt(r/sigma^2), whose universal
    multiplier is left to the Monte Carlo harness to back-solve empirically.
    """
    variance = sigma.variance
    r = oracle.oracle_risk
    ratio = variance / r
    if ratio > 1.0:
        if ratio > 1.0 + 1e-12:
            raise ValueError(
                f"oracle risk {r} is below sigma^2 = {variance}; "
                "the ratio sigma^2/r must not exceed 1"
            )
        ratio = 1.0  # guard against rounding at the r = sigma^2 boundary
    t1 = variance * math.sqrt(r / variance)
    t2 = 4.0 * variance * math.log(len(M))
    t3 = 4.0 * variance * math.log((r / variance) * (1.0 + psi(ratio).psi))
    return replace(
        oracle,
        regret_budget_t1=t1,
        regret_budget_t2=t2,
        regret_budget_t3=t3,
    )
