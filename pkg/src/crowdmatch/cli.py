"""Command-line front end: run scenarios, figure presets and self-verification.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
The environment variable ``MCS_SEED`` overrides the configured master seed;
an explicit ``--seed`` flag overrides both.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, ScenarioConfig, load_config
from .presets import Preset, build_preset, preset_ids, preset_metric
from .simulator import (
    CSV_COLUMNS,
    MetricsSeries,
    STRATEGIES,
    run_campaign,
)
from .verify import run_all_checks

SCHEMA_VERSION = 1
SUMMARY_WINDOW = 100  # trailing rounds aggregated in summary.json

_ATTR_BY_COLUMN = {
    "social_welfare": "social_welfare",
    "avg_completion_time_s": "avg_completion_time_s",
    "energy_eff_J_per_Mbit": "energy_eff_j_per_mbit",
    "blocked_mu_count": "blocked_mu_count",
    "mean_cumulative_regret": "mean_cumulative_regret",
    "free_offers_cumulative": "free_offers_cumulative",
    "acceptance_rate": "acceptance_rate",
}


def _fmt(value: float) -> str:
    """Nine significant digits, so repeated runs diff cleanly."""
    return format(float(value), ".9g")


def write_metrics_csv(path: Path, series_list: list[MetricsSeries]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for series in series_list:
            for i in range(series.horizon):
                writer.writerow(
                    [
                        series.strategy,
                        series.replication,
                        i + 1,
                        _fmt(series.social_welfare[i]),
                        _fmt(series.avg_completion_time_s[i]),
                        _fmt(series.energy_eff_j_per_mbit[i]),
                        int(series.blocked_mu_count[i]),
                        _fmt(series.mean_cumulative_regret[i]),
                        int(series.free_offers_cumulative[i]),
                        _fmt(series.acceptance_rate[i]),
                    ]
                )


def _json_number(value) -> float | str | None:
    if value is None:
        return None
    value = float(value)
    if math.isfinite(value):
        return value
    return str(value)  # "inf"/"nan" markers keep the JSON valid


def _aggregate(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return {"mean": None, "std": None}
    with np.errstate(all="ignore"):  # infinite bound values are expected
        return {
            "mean": _json_number(np.nanmean(arr)),
            "std": _json_number(np.nanstd(arr)),
        }


def build_summary(series_list: list[MetricsSeries]) -> dict:
    """Per-label end-of-horizon aggregates plus oracle values and bound values."""
    labels = sorted({s.strategy for s in series_list})
    per_label = {}
    for label in labels:
        group = [s for s in series_list if s.strategy == label]
        horizon = group[0].horizon
        window = slice(max(0, horizon - SUMMARY_WINDOW), horizon)
        entry = {
            "replications": len(group),
            "rounds": horizon,
            "final": {},
            "window": {},
            "oracle_welfare": _aggregate([s.oracle_welfare for s in group]),
            "stable_welfare": _aggregate([s.stable_welfare for s in group]),
            "mean_mu_utility_window": _aggregate(
                [float(np.nanmean(s.mean_mu_utility[window])) for s in group]
            ),
            "mean_mcsp_utility_window": _aggregate(
                [float(np.nanmean(s.mean_mcsp_utility[window])) for s in group]
            ),
            "regret_bound": _aggregate(
                [s.regret_bound_value for s in group if s.regret_bound_value is not None]
            ),
            "instability_bound": _aggregate(
                [
                    s.instability_bound_value
                    for s in group
                    if s.instability_bound_value is not None
                ]
            ),
        }
        for column, attr in _ATTR_BY_COLUMN.items():
            entry["final"][column] = _aggregate([float(getattr(s, attr)[-1]) for s in group])
            entry["window"][column] = _aggregate(
                [float(np.nanmean(getattr(s, attr)[window])) for s in group]
            )
        per_label[label] = entry
    return {
        "schema_version": SCHEMA_VERSION,
        "summary_window_rounds": SUMMARY_WINDOW,
        "strategies": per_label,
    }


def write_outputs(out_dir: Path, series_list: list[MetricsSeries]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(out_dir / "metrics.csv", series_list)
    summary = build_summary(series_list)
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8",
    )


def _resolve_seed(cli_seed: int | None) -> int | None:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get("MCS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"MCS_SEED must be an integer, got {env!r}") from exc
    return None


def _apply_overrides(
    config: ScenarioConfig,
    seed: int | None,
    replications: int | None,
    rounds: int | None,
) -> ScenarioConfig:
    changes = {}
    if seed is not None:
        changes["master_seed"] = seed
    if replications is not None:
        changes["replications"] = replications
    if rounds is not None:
        changes["horizon"] = rounds
    return config.replace(**changes) if changes else config


def _run_preset(preset: Preset) -> list[MetricsSeries]:
    """Execute a preset's runs, sharing realizations across runs with equal configs."""
    by_config: dict[ScenarioConfig, list] = {}
    for run_spec in preset.runs:
        by_config.setdefault(run_spec.config, []).append(run_spec)
    collected = []
    for config, run_specs in by_config.items():
        strategies = []
        for spec in run_specs:
            if spec.strategy not in strategies:
                strategies.append(spec.strategy)
        result = run_campaign(config, strategies)
        for spec in run_specs:
            for series in result.by_strategy(spec.strategy):
                if spec.label == spec.strategy:
                    collected.append(series)
                else:
                    collected.append(
                        MetricsSeries(
                            **{
                                **{f: getattr(series, f) for f in series.__dataclass_fields__},
                                "strategy": spec.label,
                            }
                        )
                    )
    return collected


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    config = _apply_overrides(
        config, _resolve_seed(args.seed), args.replications, args.rounds
    )
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    if not strategies:
        raise ConfigError("--strategies must name at least one strategy")
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy '{strategy}'; expected one of {STRATEGIES}")
    result = run_campaign(config, strategies)
    write_outputs(Path(args.out), list(result.series))
    print(f"wrote {Path(args.out) / 'metrics.csv'} and summary.json")
    return 0


def cmd_preset(args: argparse.Namespace) -> int:
    preset = build_preset(
        args.figure,
        rounds=args.rounds,
        replications=args.replications,
        seed=_resolve_seed(args.seed),
    )
    series_list = _run_preset(preset)
    out_dir = Path(args.out)
    write_outputs(out_dir, series_list)
    metric = preset_metric(preset.figure_id)
    attr = _ATTR_BY_COLUMN[metric]
    print(f"{preset.figure_id}: {preset.description}")
    print(f"headline metric: {metric} (mean over the last {SUMMARY_WINDOW} rounds)")
    for label in sorted({s.strategy for s in series_list}):
        group = [s for s in series_list if s.strategy == label]
        horizon = group[0].horizon
        window = slice(max(0, horizon - SUMMARY_WINDOW), horizon)
        value = float(np.nanmean([np.nanmean(getattr(s, attr)[window]) for s in group]))
        print(f"  {label:30s} {value:.6g}")
    print(f"wrote {out_dir / 'metrics.csv'} and summary.json")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_all_checks(small=args.small)
    failed = False
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        failed = failed or not result.passed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crowdmatch",
        description="Simulate decentralized task assignment in mobile crowdsensing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a campaign from a scenario config file")
    p_run.add_argument("config", help="path to a key/value scenario file")
    p_run.add_argument(
        "--strategies",
        default=",".join(STRATEGIES),
        help=f"comma-separated subset of {STRATEGIES}",
    )
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override the master seed")
    p_run.add_argument("--replications", type=int, default=None)
    p_run.add_argument("--rounds", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_preset = sub.add_parser("preset", help="run a named figure preset at desk scale")
    p_preset.add_argument("figure", help=f"one of {', '.join(preset_ids())}")
    p_preset.add_argument("--out", default="out", help="output directory")
    p_preset.add_argument("--seed", type=int, default=None)
    p_preset.add_argument("--replications", type=int, default=None)
    p_preset.add_argument("--rounds", type=int, default=None)
    p_preset.set_defaults(func=cmd_preset)

    p_verify = sub.add_parser("verify", help="run the oracle self-checks")
    p_verify.add_argument("--small", action="store_true",
                          help="restrict instances to at most 6x6")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
