"""Render metrics.csv series into figures: load, average replications, smooth, plot."""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .specs import FigureSpec, figure_ids, get_spec  # noqa: E402


class RenderError(Exception):
    """Unusable input: missing file, missing columns or no data rows."""


def load_metrics(csv_path: str | Path) -> dict[str, list]:
    """Read metrics.csv into columns, converting numeric fields."""
    path = Path(csv_path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise RenderError(f"{path}: empty file, no header row")
            rows = list(reader)
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise RenderError(f"{path}: no data rows")
    columns: dict[str, list] = {name: [] for name in reader.fieldnames}
    for row in rows:
        for name in reader.fieldnames:
            value = row[name]
            if name == "strategy":
                columns[name].append(value)
            elif name in ("replication", "round"):
                columns[name].append(int(value))
            else:
                columns[name].append(float(value))
    return columns


def trailing_mean(values: np.ndarray, window: int) -> np.ndarray:
    """Trailing mean with a growing head window; window 1 is the identity."""
    values = np.asarray(values, dtype=np.float64)
    if window <= 1:
        return values.copy()
    out = np.empty_like(values)
    for i in range(values.size):
        lo = max(0, i - window + 1)
        out[i] = np.nanmean(values[lo : i + 1])
    return out


def prepare_series(
    spec: FigureSpec, columns: dict[str, list]
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Per strategy label: rounds and the replication-averaged, smoothed metric."""
    for required in ("strategy", "round", spec.metric):
        if required not in columns:
            raise RenderError(f"metrics.csv is missing the column '{required}'")
    strategies = sorted(set(columns["strategy"]))
    out = {}
    for label in strategies:
        per_round: dict[int, list[float]] = {}
        for strat, rnd, value in zip(columns["strategy"], columns["round"],
                                     columns[spec.metric]):
            if strat == label:
                per_round.setdefault(rnd, []).append(value)
        rounds = np.array(sorted(per_round), dtype=np.int64)
        with np.errstate(all="ignore"):
            means = np.array([np.nanmean(per_round[r]) for r in rounds])
        out[label] = (rounds, trailing_mean(means, spec.smoothing_window))
    return out


def render(spec: FigureSpec, csv_path: str | Path, out_path: str | Path) -> Path:
    """Write one figure; returns the output path."""
    columns = load_metrics(csv_path)
    series = prepare_series(spec, columns)
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, (rounds, values) in series.items():
        ax.plot(rounds, values, label=label, linewidth=1.4)
    ax.set_xlabel("round")
    ax.set_ylabel(spec.ylabel)
    caption = spec.title
    if spec.smoothing_window > 1:
        caption += f" (trailing mean, window {spec.smoothing_window})"
    ax.set_title(caption)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="crowdmatch-render",
        description="Render a metrics.csv produced by crowdmatch into a figure.",
    )
    parser.add_argument("--figure", required=True, help=f"one of {', '.join(figure_ids())}")
    parser.add_argument("--csv", required=True, help="path to metrics.csv")
    parser.add_argument("--out", required=True, help="output image path (png/svg/pdf)")
    args = parser.parse_args(argv)
    try:
        spec = get_spec(args.figure)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        out = render(spec, args.csv, args.out)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
