"""Oracle risk over a model family, and regret relative to it."""

from __future__ import annotations

from dataclasses import dataclass

from .sequence_model import MeanVector, ModelIndexSet, NoiseLevel, true_projection_risk

__all__ = ["OracleReport", "oracle_risk", "regret"]


@dataclass(frozen=True)
class OracleReport:
    """Best exact projection risk over the family, plus regret budgets.

    The budget fields stay None until the bound evaluators fill them in.
    """

    oracle_risk: float
    oracle_index: int
    regret_budget_t1: float | None = None
    regret_budget_t2: float | None = None
    regret_budget_t3: float | None = None

    @property
    def combined_budget(self) -> float | None:
        """Minimum of the two exponential-weighting budgets, once filled."""
        if self.regret_budget_t2 is None or self.regret_budget_t3 is None:
            return None
        return min(self.regret_budget_t2, self.regret_budget_t3)


def oracle_risk(mu: MeanVector, sigma: NoiseLevel, M: ModelIndexSet) -> OracleReport:
    """Exact minimum of the projection risk over M by full scan, ties to smallest m."""
    if M.max_index > mu.declared_length:
        raise ValueError(
            f"max model index {M.max_index} exceeds the mean vector length "
            f"{mu.declared_length}"
        )
    best_value = None
    best_index = None
    for m in M:
        value = true_projection_risk(mu, sigma, m)
        if best_value is None or value < best_value:
            best_value = value
            best_index = m
    return OracleReport(oracle_risk=best_value, oracle_index=best_index)


def regret(mc_risk: float, oracle: OracleReport) -> float:
    """Excess of an estimated risk over the oracle risk (may be negative within MC error)."""
    return float(mc_risk) - oracle.oracle_risk
