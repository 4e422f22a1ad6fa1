"""Command-line front end: scenario configs, experiment runs, machine-readable output.

Commands
--------
simulate     run a scenario grid and emit a CSV plus a JSON mirror
bounds       evaluate the regret budgets at a given risk-to-noise ratio
psi          evaluate the remainder function at one or more arguments
lemma-check  run one empirical maximal-inequality check

Exit codes: 0 success, 1 bound violation, 2 configuration or domain error.
The environment variable EWAGG_SEED supplies a default base seed wherever a
scenario or command omits one.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import psi, theorem_bounds
from .montecarlo import (
    LEMMA2_VARIANTS,
    PASS_TOLERANCE_SE,
    EstimatorKind,
    ScenarioConfig,
    lemma2_empirical,
    verify_oracle_inequalities,
)
from .risk import OracleReport
from .sequence_model import MeanVector, ModelIndexSet, NoiseLevel, mean_vector_from_spec

__all__ = ["main", "ConfigError", "RunManifest", "parse_scenarios", "parse_model_set_text"]

SEED_ENV = "EWAGG_SEED"

CSV_HEADER = [
    "scenario_id",
    "oracle_risk",
    "oracle_index",
    "ure_mean",
    "ure_se",
    "ew_mean",
    "ew_se",
    "t1_shape",
    "t2_budget",
    "t3_budget",
    "empirical_K",
    "t2_pass",
    "t3_pass",
]

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_CONFIG_ERROR = 2


class ConfigError(Exception):
    """Raised for malformed configuration files or out-of-domain arguments."""


@dataclass
class RunManifest:
    """Provenance record for one invocation; timing excluded from reproducibility."""

    tool_version: str
    config_digest: str
    base_seeds: dict[str, int]
    timings_seconds: dict[str, float] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)


def _fmt(x: float) -> str:
    # 17 significant digits round-trip float64 exactly.
    return format(float(x), ".17g")


def parse_model_set_text(text: str) -> ModelIndexSet:
    """Parse "1..100" / "1,2,5" / "1..10,20" into a model index set."""
    values: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ".." in item:
            lo_text, _, hi_text = item.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ConfigError(f"empty model range {item!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(item))
    if not values:
        raise ConfigError(f"model set {text!r} lists no indices")
    return ModelIndexSet(np.unique(np.asarray(values, dtype=np.int64)))


def _default_seed() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def _scenario_from_section(name: str, options: dict[str, str]) -> ScenarioConfig:
    required = {"mu", "sigma", "models"}
    missing = sorted(required - options.keys())
    if missing:
        raise ConfigError(f"scenario [{name}] is missing keys: {', '.join(missing)}")
    if "replicates" not in options:
        raise ConfigError(f"scenario [{name}] is missing keys: replicates")
    if "base_seed" in options:
        base_seed = int(options["base_seed"])
    else:
        base_seed = _default_seed()
        if base_seed is None:
            raise ConfigError(
                f"scenario [{name}] has no base_seed and {SEED_ENV} is not set"
            )
    known = required | {"replicates", "base_seed", "estimator"}
    unknown = sorted(options.keys() - known)
    if unknown:
        raise ConfigError(f"scenario [{name}] has unknown keys: {', '.join(unknown)}")
    try:
        return ScenarioConfig(
            scenario_id=name,
            mu_spec=options["mu"],
            sigma=NoiseLevel(float(options["sigma"])),
            models=parse_model_set_text(options["models"]),
            replicates=int(options["replicates"]),
            base_seed=base_seed,
            estimator=EstimatorKind(options.get("estimator", "BOTH").upper()),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"scenario [{name}]: {exc}") from exc


def parse_scenarios(text: str) -> list[ScenarioConfig]:
    """Parse the flat key-value scenario file ([DEFAULT] supplies shared keys)."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if not parser.sections():
        raise ConfigError("config defines no scenarios")
    return [
        _scenario_from_section(name, dict(parser.items(name)))
        for name in parser.sections()
    ]


def config_digest(scenarios: list[ScenarioConfig]) -> str:
    """Stable hash of the canonicalized (fully resolved) scenario grid."""
    lines = []
    for cfg in scenarios:
        lines.append(f"[{cfg.scenario_id}]")
        lines.append(f"base_seed = {cfg.base_seed}")
        lines.append(f"estimator = {cfg.estimator.value}")
        lines.append(f"models = {','.join(str(m) for m in cfg.models)}")
        lines.append(f"mu = {cfg.mu_spec}")
        lines.append(f"replicates = {cfg.replicates}")
        lines.append(f"sigma = {_fmt(cfg.sigma.sigma)}")
    canonical = "\n".join(lines) + "\n"
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _row_record(row) -> dict:
    return {
        "scenario_id": row.scenario_id,
        "oracle_risk": row.oracle_risk,
        "oracle_index": row.oracle_index,
        "ure_mean": row.ure_risk.mean,
        "ure_se": row.ure_risk.std_error,
        "ew_mean": row.ew_risk.mean,
        "ew_se": row.ew_risk.std_error,
        "t1_shape": row.budget_t1,
        "t2_budget": row.budget_t2,
        "t3_budget": row.budget_t3,
        "empirical_K": row.empirical_k,
        "t2_pass": row.t2_pass,
        "t3_pass": row.t3_pass,
    }


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def cmd_simulate(config_path: str, out_dir: str) -> int:
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {config_path!r}: {exc}") from exc
    scenarios = parse_scenarios(text)

    started = time.perf_counter()
    rows = [verify_oracle_inequalities(cfg) for cfg in scenarios]
    elapsed = time.perf_counter() - started

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "results.csv")
    json_path = os.path.join(out_dir, "results.json")
    manifest_path = os.path.join(out_dir, "run_manifest.json")

    records = [_row_record(row) for row in rows]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow([_csv_cell(record[key]) for key in CSV_HEADER])
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")

    manifest = RunManifest(
        tool_version=__version__,
        config_digest=config_digest(scenarios),
        base_seeds={cfg.scenario_id: cfg.base_seed for cfg in scenarios},
        timings_seconds={"simulate": elapsed},
        outputs=[csv_path, json_path],
    )
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest.__dict__, fh, indent=2)
        fh.write("\n")

    all_pass = all(row.t2_pass and row.t3_pass for row in rows)
    return EXIT_OK if all_pass else EXIT_BOUND_VIOLATION


def cmd_bounds(r_over_sigma2: float, count_m: int) -> int:
    if not r_over_sigma2 >= 1.0:
        raise ConfigError(f"--r must be >= 1 (oracle risk is at least sigma^2), got {r_over_sigma2}")
    if count_m < 1:
        raise ConfigError(f"--m must be >= 1, got {count_m}")
    sigma = NoiseLevel(1.0)
    models = ModelIndexSet.from_range(1, count_m)
    report = theorem_bounds(
        OracleReport(oracle_risk=float(r_over_sigma2), oracle_index=1), sigma, models
    )
    evaluation = psi(min(1.0, 1.0 / float(r_over_sigma2)))
    payload = {
        "r_over_sigma2": float(r_over_sigma2),
        "count_m": int(count_m),
        "t1_shape": report.regret_budget_t1,
        "t2_budget": report.regret_budget_t2,
        "t3_budget": report.regret_budget_t3,
        "combined_budget": report.combined_budget,
        "psi": {
            "r": evaluation.r,
            "psi": evaluation.psi,
            "epsilon_star": evaluation.epsilon_star,
        },
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_psi(r_values: list[float]) -> int:
    for r in r_values:
        if not 0.0 <= r <= 1.0:
            raise ConfigError(f"psi arguments must lie in [0, 1], got {r}")
    print("r,psi,epsilon_star")
    for r in r_values:
        evaluation = psi(r)
        print(f"{_fmt(evaluation.r)},{_fmt(evaluation.psi)},{_fmt(evaluation.epsilon_star)}")
    return EXIT_OK


def cmd_lemma_check(
    which: str,
    alpha: float,
    mu_spec: str | None,
    k_max: int,
    replicates: int,
    seed: int,
) -> int:
    mu: MeanVector | None = None
    if which == "linear":
        if mu_spec is None:
            raise ConfigError("the linear variant needs --mu <spec>")
        try:
            mu = mean_vector_from_spec(mu_spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        estimate = lemma2_empirical(
            alpha, which, mu=mu, k_max=k_max, replicates=replicates, seed=seed
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    budget = 1.0 / alpha
    tolerance = PASS_TOLERANCE_SE * estimate.std_error
    passed = estimate.mean <= budget + tolerance
    payload = {
        "which": which,
        "alpha": alpha,
        "mean": estimate.mean,
        "std_error": estimate.std_error,
        "replicates": estimate.replicates,
        "k_max": k_max,
        "budget": budget,
        "tolerance": tolerance,
        "passed": passed,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK if passed else EXIT_BOUND_VIOLATION


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ewagg",
        description="Projection estimation, risk-based model selection, and "
        "exponentially weighted aggregation with Monte Carlo bound checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario grid from a config file")
    p_sim.add_argument("--config", required=True, help="path to the scenario config")
    p_sim.add_argument("--out", required=True, help="output directory")

    p_bounds = sub.add_parser("bounds", help="evaluate the regret budgets")
    p_bounds.add_argument("--r", type=float, required=True, help="oracle risk over sigma^2 (>= 1)")
    p_bounds.add_argument("--m", type=int, required=True, help="number of candidate models")

    p_psi = sub.add_parser("psi", help="evaluate the remainder function")
    p_psi.add_argument("r_values", type=float, nargs="+", metavar="r")

    p_lemma = sub.add_parser("lemma-check", help="run one maximal-inequality check")
    p_lemma.add_argument("--which", required=True, choices=LEMMA2_VARIANTS)
    p_lemma.add_argument("--alpha", type=float, required=True)
    p_lemma.add_argument("--mu", default=None, help="mean spec for the linear variant")
    p_lemma.add_argument("--kmax", type=int, default=10_000)
    p_lemma.add_argument("--reps", type=int, default=10_000)
    p_lemma.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"base seed (default: ${SEED_ENV} or 0)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out)
        if args.command == "bounds":
            return cmd_bounds(args.r, args.m)
        if args.command == "psi":
            return cmd_psi(args.r_values)
        if args.command == "lemma-check":
            seed = args.seed
            if seed is None:
                seed = _default_seed()
                if seed is None:
                    seed = 0
            return cmd_lemma_check(
                args.which, args.alpha, args.mu, args.kmax, args.reps, seed
            )
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
