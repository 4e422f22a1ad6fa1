"""Reproducible Monte Carlo engine for risk estimation and bound verification.

Every replicate draws its observation from its own substream keyed by
(base seed, scenario, replicate index), so results are independent of
execution order, and losses are accumulated in fixed index order, so a
given configuration always reproduces bit-identical estimates.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .bounds import theorem_bounds, u_alpha, u_star_alpha
from .estimators import (
    aggregate,
    exponential_weights,
    m_epsilon,
    risk_profile,
    unbiased_risk,
    ure_weights,
)
from .risk import OracleReport, oracle_risk, regret
from .sequence_model import (
    MeanVector,
    ModelIndexSet,
    NoiseLevel,
    _seed_entropy,
    generate_observation,
    mean_vector_from_spec,
    squared_loss,
    true_projection_risk,
)

__all__ = [
    "EstimatorKind",
    "ScenarioConfig",
    "RiskEstimate",
    "ComparisonRow",
    "MEpsilonReport",
    "mc_risk",
    "verify_oracle_inequalities",
    "lemma2_empirical",
    "unbiasedness_check",
    "m_epsilon_study",
    "m_epsilon_budget",
    "PASS_TOLERANCE_SE",
]

# Pass tolerance for every Monte Carlo bound check: estimate <= bound + 4 SE.
# Four standard errors keep the two-sided false-alarm rate near 6e-5 per check.
PASS_TOLERANCE_SE = 4.0

LEMMA2_VARIANTS = ("chi2_upper", "linear", "chi2_lower")


class EstimatorKind(str, enum.Enum):
    URE = "URE"
    EW = "EW"
    BOTH = "BOTH"


def _stable_key(label: str) -> int:
    """Platform-independent 64-bit key for substream derivation."""
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


def _substream(parts) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_seed_entropy(list(parts))))


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment."""

    scenario_id: str
    mu_spec: str
    sigma: NoiseLevel
    models: ModelIndexSet
    replicates: int
    base_seed: int
    estimator: EstimatorKind = EstimatorKind.BOTH

    def __post_init__(self):
        if int(self.replicates) < 1:
            raise ValueError("replicates must be >= 1")
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "base_seed", int(self.base_seed))
        object.__setattr__(self, "estimator", EstimatorKind(self.estimator))
        # Fails fast when the mean family cannot support the model set.
        self.mean_vector()

    def mean_vector(self) -> MeanVector:
        mu = mean_vector_from_spec(self.mu_spec, default_length=self.models.max_index)
        if mu.declared_length < self.models.max_index:
            raise ValueError(
                f"mean spec {self.mu_spec!r} has length {mu.declared_length}, "
                f"below the max model index {self.models.max_index}"
            )
        return mu


@dataclass(frozen=True)
class RiskEstimate:
    """Monte Carlo mean with its standard error and replicate count."""

    mean: float
    std_error: float
    replicates: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "RiskEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        mean = float(samples.mean())
        std_error = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean=mean, std_error=std_error, replicates=n)


@dataclass(frozen=True)
class ComparisonRow:
    """One scenario's oracle risk, Monte Carlo risks, budgets, and pass flags."""

    scenario_id: str
    oracle_risk: float
    oracle_index: int
    ure_risk: RiskEstimate
    ew_risk: RiskEstimate
    budget_t1: float
    budget_t2: float
    budget_t3: float
    empirical_k: float
    t2_pass: bool
    t3_pass: bool

    @property
    def combined_pass(self) -> bool:
        """Whether at least one exponential-weighting budget is respected."""
        return self.t2_pass or self.t3_pass


def _observations(config: ScenarioConfig):
    mu = config.mean_vector()
    key = _stable_key(config.scenario_id)
    for rep in range(config.replicates):
        yield rep, generate_observation(mu, config.sigma, (config.base_seed, key, rep))


def _replicate_losses(config: ScenarioConfig) -> dict[str, np.ndarray]:
    """Per-replicate squared losses for the requested estimators, in index order."""
    mu = config.mean_vector()
    models = config.models
    need_ure = config.estimator in (EstimatorKind.URE, EstimatorKind.BOTH)
    need_ew = config.estimator in (EstimatorKind.EW, EstimatorKind.BOTH)
    ure_losses = np.empty(config.replicates) if need_ure else None
    ew_losses = np.empty(config.replicates) if need_ew else None
    for rep, obs in _observations(config):
        profile = risk_profile(obs, models)
        if need_ure:
            estimate = aggregate(obs, models, ure_weights(profile))
            ure_losses[rep] = squared_loss(estimate, mu)
        if need_ew:
            estimate = aggregate(obs, models, exponential_weights(profile, config.sigma))
            ew_losses[rep] = squared_loss(estimate, mu)
    out: dict[str, np.ndarray] = {}
    if need_ure:
        out["URE"] = ure_losses
    if need_ew:
        out["EW"] = ew_losses
    return out


def mc_risk(config: ScenarioConfig) -> dict[str, RiskEstimate]:
    """Monte Carlo risk of the selected estimator(s), keyed "URE" / "EW"."""
    return {
        name: RiskEstimate.from_samples(losses)
        for name, losses in _replicate_losses(config).items()
    }


def verify_oracle_inequalities(config: ScenarioConfig) -> ComparisonRow:
    """Run both estimators and check their risks against the regret budgets."""
    if config.estimator is not EstimatorKind.BOTH:
        raise ValueError("verify_oracle_inequalities needs estimator BOTH")
    mu = config.mean_vector()
    report = theorem_bounds(
        oracle_risk(mu, config.sigma, config.models), config.sigma, config.models
    )
    risks = mc_risk(config)
    ure_est, ew_est = risks["URE"], risks["EW"]
    empirical_k = regret(ure_est.mean, report) / report.regret_budget_t1
    slack = PASS_TOLERANCE_SE * ew_est.std_error
    return ComparisonRow(
        scenario_id=config.scenario_id,
        oracle_risk=report.oracle_risk,
        oracle_index=report.oracle_index,
        ure_risk=ure_est,
        ew_risk=ew_est,
        budget_t1=report.regret_budget_t1,
        budget_t2=report.regret_budget_t2,
        budget_t3=report.regret_budget_t3,
        empirical_k=empirical_k,
        t2_pass=ew_est.mean <= report.oracle_risk + report.regret_budget_t2 + slack,
        t3_pass=ew_est.mean <= report.oracle_risk + report.regret_budget_t3 + slack,
    )


def lemma2_empirical(
    alpha: float,
    which: str,
    mu: MeanVector | None = None,
    k_max: int = 10_000,
    replicates: int = 10_000,
    seed: int = 0,
) -> RiskEstimate:
    """Monte Carlo mean of one maximal statistic of a drift-compensated walk.

    chi2_upper:  max_k { sum_{i<=k} (xi_i^2 - 1) - U(alpha) k },   0 < alpha < 1/2
    chi2_lower:  max_k { sum_{i<=k} (1 - xi_i^2) - U*(alpha) k },  alpha > 0
    linear:      max_k { sum_{i>=k} mu_i xi_i - (alpha/2) sum_{i>=k} mu_i^2 }

    The chi-square walks are truncated at k_max, which can only lower the
    maximum, so comparing the mean against 1/alpha stays conservative.  The
    linear statistic is exact: the finite support of mu makes suffixes beyond
    it empty, contributing the value 0 to the maximum.
    """
    alpha = float(alpha)
    if which not in LEMMA2_VARIANTS:
        raise ValueError(f"which must be one of {LEMMA2_VARIANTS}, got {which!r}")
    if which == "chi2_upper":
        drift = u_alpha(alpha)  # validates 0 < alpha < 1/2
    elif which == "chi2_lower":
        drift = u_star_alpha(alpha)  # validates alpha > 0
    else:
        if mu is None:
            raise ValueError("the linear variant needs a mean vector")
        if not alpha > 0.0:
            raise ValueError(f"the linear variant needs alpha > 0, got {alpha}")
    if k_max < 1 or replicates < 1:
        raise ValueError("k_max and replicates must be >= 1")

    key = _stable_key(f"lemma2:{which}:{alpha!r}")
    stats = np.empty(replicates)

    if which == "linear":
        coeffs = mu.coefficients
        suffix_mu2 = np.cumsum((coeffs * coeffs)[::-1])[::-1]
        for rep in range(replicates):
            rng = _substream((seed, key, rep))
            xi = rng.standard_normal(coeffs.size)
            suffix_dot = np.cumsum((coeffs * xi)[::-1])[::-1]
            walk = suffix_dot - 0.5 * alpha * suffix_mu2
            stats[rep] = max(float(walk.max()), 0.0)  # empty suffixes contribute 0
    else:
        steps = np.arange(1, k_max + 1, dtype=float)
        for rep in range(replicates):
            rng = _substream((seed, key, rep))
            xi = rng.standard_normal(k_max)
            if which == "chi2_upper":
                walk = np.cumsum(xi * xi - 1.0) - drift * steps
            else:
                walk = np.cumsum(1.0 - xi * xi) - drift * steps
            stats[rep] = float(walk.max())

    return RiskEstimate.from_samples(stats)


def unbiasedness_check(
    mu: MeanVector,
    sigma: NoiseLevel,
    m_values,
    replicates: int,
    base_seed: int,
) -> dict[int, RiskEstimate]:
    """MC estimate of rbar(Y, m) + ||mu||^2 - true risk, per m; all means should be ~0."""
    m_values = [int(m) for m in m_values]
    key = _stable_key("unbiasedness")
    norm2 = mu.squared_norm
    offsets = {
        m: norm2 - true_projection_risk(mu, sigma, m) for m in m_values
    }
    stats = {m: np.empty(replicates) for m in m_values}
    for rep in range(replicates):
        obs = generate_observation(mu, sigma, (base_seed, key, rep))
        for m in m_values:
            stats[m][rep] = unbiased_risk(obs, m) + offsets[m]
    return {m: RiskEstimate.from_samples(stats[m]) for m in m_values}


@dataclass(frozen=True)
class MEpsilonReport:
    """Diagnostic study of the random envelope index.

    The scan is reported under both centerings (the profile minimum and the
    externally computed oracle risk), together with the analytic budget for
    its expectation.
    """

    epsilon: float
    profile_centered: RiskEstimate
    oracle_centered: RiskEstimate
    analytic_budget: float
    oracle: OracleReport


def m_epsilon_budget(oracle_value: float, sigma: NoiseLevel, epsilon: float) -> float:
    """Analytic budget r/sigma^2 + 7 eps r / ((1-6 eps) sigma^2) + 15 / ((1-6 eps) eps)."""
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0 / 7.0:
        raise ValueError("epsilon must lie in (0, 1/7]")
    ratio = oracle_value / sigma.variance
    shrink = 1.0 - 6.0 * epsilon
    return ratio + 7.0 * epsilon * ratio / shrink + 15.0 / (shrink * epsilon)


def m_epsilon_study(config: ScenarioConfig, epsilon: float) -> MEpsilonReport:
    """MC estimate of the expected envelope index under both centerings."""
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0 / 7.0:
        raise ValueError("epsilon must lie in (0, 1/7]")
    mu = config.mean_vector()
    report = oracle_risk(mu, config.sigma, config.models)
    by_profile = np.empty(config.replicates)
    by_oracle = np.empty(config.replicates)
    for rep, obs in _observations(config):
        profile = risk_profile(obs, config.models)
        by_profile[rep] = m_epsilon(profile, config.sigma, epsilon)
        by_oracle[rep] = m_epsilon(
            profile, config.sigma, epsilon, center=report.oracle_risk
        )
    return MEpsilonReport(
        epsilon=epsilon,
        profile_centered=RiskEstimate.from_samples(by_profile),
        oracle_centered=RiskEstimate.from_samples(by_oracle),
        analytic_budget=m_epsilon_budget(report.oracle_risk, config.sigma, epsilon),
        oracle=report,
    )
