import csv
import math

import numpy as np
import pytest

from crowdmatch_figures import (
    CSV_COLUMNS,
    RenderError,
    figure_ids,
    get_spec,
    load_metrics,
    prepare_series,
    render,
    trailing_mean,
)

ROUNDS = 60
STRATEGIES = ("ca-mab-sfs", "eps-greedy@variant=a")


def golden_value(strategy, replication, rnd, column):
    """Deterministic synthetic metric values."""
    base = hash((strategy, column)) % 7
    return base + 0.25 * replication + math.sin(rnd / 9.0) + 0.01 * rnd


@pytest.fixture(scope="module")
def golden_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "metrics.csv"
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for strategy in STRATEGIES:
            for rep in range(2):
                for rnd in range(1, ROUNDS + 1):
                    row = [strategy, rep, rnd]
                    for column in CSV_COLUMNS[3:]:
                        value = golden_value(strategy, rep, rnd, column)
                        if column in ("blocked_mu_count", "free_offers_cumulative"):
                            value = abs(int(value))
                        row.append(value)
                    writer.writerow(row)
    return path


def test_every_preset_figure_renders(golden_csv, tmp_path):
    for figure_id in figure_ids():
        out = render(get_spec(figure_id), golden_csv, tmp_path / f"{figure_id}.png")
        assert out.exists() and out.stat().st_size > 0


def test_plotted_series_match_csv_after_smoothing(golden_csv):
    """Spot-check ten points per figure against an independent recomputation."""
    columns = load_metrics(golden_csv)
    for figure_id in figure_ids():
        spec = get_spec(figure_id)
        series = prepare_series(spec, columns)
        assert set(series) == set(STRATEGIES)
        for strategy in STRATEGIES:
            rounds, values = series[strategy]
            raw = np.array([
                np.mean([golden_value(strategy, rep, r, spec.metric)
                         if spec.metric not in ("blocked_mu_count", "free_offers_cumulative")
                         else abs(int(golden_value(strategy, rep, r, spec.metric)))
                         for rep in range(2)])
                for r in rounds
            ])
            expected = trailing_mean(raw, spec.smoothing_window)
            for i in np.linspace(0, ROUNDS - 1, 10, dtype=int):
                assert values[i] == pytest.approx(expected[i], rel=1e-12)


def test_window_one_plots_raw_values(golden_csv):
    columns = load_metrics(golden_csv)
    spec = get_spec("fig10")  # declared window 1
    assert spec.smoothing_window == 1
    series = prepare_series(spec, columns)
    rounds, values = series[STRATEGIES[0]]
    raw = [np.mean([abs(int(golden_value(STRATEGIES[0], rep, r, spec.metric)))
                    for rep in range(2)]) for r in rounds]
    assert values == pytest.approx(raw)


def test_figure_lines_carry_prepared_series(golden_csv, tmp_path, monkeypatch):
    """The drawn artists contain exactly the prepared series."""
    import matplotlib.pyplot as plt

    captured = {}
    original = plt.subplots

    def capture(*args, **kwargs):
        fig, ax = original(*args, **kwargs)
        captured["ax"] = ax
        return fig, ax

    monkeypatch.setattr(plt, "subplots", capture)
    spec = get_spec("fig8")
    render(spec, golden_csv, tmp_path / "fig8.png")
    series = prepare_series(spec, load_metrics(golden_csv))
    lines = {line.get_label(): line for line in captured["ax"].lines}
    assert set(lines) == set(series)
    for label, (rounds, values) in series.items():
        assert np.array_equal(lines[label].get_xdata(), rounds)
        assert np.array_equal(lines[label].get_ydata(), values)


def test_empty_csv_is_an_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(RenderError):
        load_metrics(empty)
    header_only = tmp_path / "header.csv"
    header_only.write_text(",".join(CSV_COLUMNS) + "\n")
    with pytest.raises(RenderError, match="no data rows"):
        load_metrics(header_only)


def test_missing_column_is_an_error_naming_it(tmp_path):
    path = tmp_path / "partial.csv"
    path.write_text("strategy,round\nca,1\n")
    with pytest.raises(RenderError, match="social_welfare"):
        prepare_series(get_spec("fig4"), load_metrics(path))


def test_cli_round_trip(golden_csv, tmp_path, capsys):
    from crowdmatch_figures.render import main

    out = tmp_path / "fig2.png"
    assert main(["--figure", "fig2", "--csv", str(golden_csv), "--out", str(out)]) == 0
    assert out.exists()
    assert main(["--figure", "fig99", "--csv", str(golden_csv), "--out", str(out)]) == 2
    assert main(["--figure", "fig2", "--csv", str(tmp_path / "nope.csv"),
                 "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert "nope.csv" in err


def test_render_deterministic(golden_csv, tmp_path):
    a = render(get_spec("fig4"), golden_csv, tmp_path / "a.png")
    b = render(get_spec("fig4"), golden_csv, tmp_path / "b.png")
    assert a.read_bytes() == b.read_bytes()
