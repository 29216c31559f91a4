"""Tests for the CSV-to-figure renderer.

The fixture CSV under data/ was produced by the pilotdecon harness CLI
(fig1 preset, 6 estimators x 4 antenna counts) and is consumed here purely
through the documented CSV schema.
"""

import pathlib

import pytest

from deconplot import (
    EXPECTED_COLUMNS,
    PlotSpec,
    SchemaError,
    build_figure,
    read_rows,
    render,
)
from deconplot.cli import main

DATA = pathlib.Path(__file__).parent / "data"
FIG1_CSV = str(DATA / "fig1_sample.csv")


def spec_for(tmp_path, metric="err_db", name="out.svg", inputs=(FIG1_CSV,), **kw):
    return PlotSpec(inputs=tuple(inputs), metric=metric,
                    output=str(tmp_path / name), **kw)


# ============================================================================
# CSV PARSING
# ============================================================================


class TestReadRows:
    def test_reads_fixture(self):
        rows = read_rows(FIG1_CSV)
        assert len(rows) == 24
        assert {r["estimator"] for r in rows} == {"ls", "mmse", "am", "ca", "sa", "ma"}

    def test_missing_column_schema_diff(self, tmp_path):
        bad = tmp_path / "bad.csv"
        header = ",".join(c for c in EXPECTED_COLUMNS if c != "mean_rate")
        bad.write_text(header + "\nfig1,ls,10,1,2,500,4,0,0,0,1,1,1\n")
        with pytest.raises(SchemaError, match="mean_rate"):
            read_rows(str(bad))

    def test_empty_body_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(",".join(EXPECTED_COLUMNS) + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            read_rows(str(empty))


# ============================================================================
# FIGURE STRUCTURE
# ============================================================================


class TestBuildFigure:
    def test_fig1_polyline_and_point_counts(self, tmp_path):
        """6 estimators x 4 antenna counts: 6 polylines of 4 points each."""
        fig = build_figure(spec_for(tmp_path))
        ax = fig.axes[0]
        assert len(ax.lines) == 6
        for line in ax.lines:
            assert len(line.get_xdata()) == 4
            assert list(line.get_xdata()) == sorted(line.get_xdata())

    def test_error_axis_is_db(self, tmp_path):
        fig = build_figure(spec_for(tmp_path))
        assert "dB" in fig.axes[0].get_ylabel()

    def test_rate_axis_is_linear_units(self, tmp_path):
        fig = build_figure(spec_for(tmp_path, metric="rate"))
        assert "bit/s/Hz" in fig.axes[0].get_ylabel()
        assert "dB" not in fig.axes[0].get_ylabel()

    def test_legend_uses_estimator_labels(self, tmp_path):
        fig = build_figure(spec_for(tmp_path))
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        assert "LS" in labels
        assert "Covariance-aided amplitude" in labels

    def test_values_are_pure_view_of_csv(self, tmp_path):
        """No recomputation: plotted y-values match the CSV column."""
        rows = read_rows(FIG1_CSV)
        expected = sorted(
            float(r["mean_err_db"]) for r in rows if r["estimator"] == "ca"
        )
        fig = build_figure(spec_for(tmp_path))
        ax = fig.axes[0]
        ca_line = [
            line for line, text in zip(ax.lines, ax.get_legend().get_texts())
            if text.get_text() == "Covariance-aided amplitude"
        ]
        assert len(ca_line) == 1
        assert sorted(ca_line[0].get_ydata()) == pytest.approx(expected)

    def test_unknown_metric_rejected(self, tmp_path):
        with pytest.raises(SchemaError):
            build_figure(spec_for(tmp_path, metric="both"))


# ============================================================================
# RENDERING AND CLI
# ============================================================================


class TestRender:
    def test_writes_svg(self, tmp_path):
        spec = spec_for(tmp_path)
        path = render(spec)
        content = pathlib.Path(path).read_text()
        assert content.startswith("<?xml")

    def test_deterministic_svg(self, tmp_path):
        a = render(spec_for(tmp_path, name="a.svg"))
        b = render(spec_for(tmp_path, name="b.svg"))
        assert pathlib.Path(a).read_bytes() == pathlib.Path(b).read_bytes()

    def test_no_file_written_on_schema_error(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(",".join(EXPECTED_COLUMNS) + "\n")
        out = tmp_path / "out.svg"
        with pytest.raises(SchemaError):
            render(spec_for(tmp_path, inputs=(str(empty),)))
        assert not out.exists()


class TestCli:
    def test_smoke(self, tmp_path, capsys):
        out = tmp_path / "fig.svg"
        code = main(["--input", FIG1_CSV, "--metric", "err_db", "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_rate_metric(self, tmp_path):
        out = tmp_path / "rate.svg"
        assert main(["--input", FIG1_CSV, "--metric", "rate", "--out", str(out)]) == 0
        assert out.exists()

    def test_schema_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        out = tmp_path / "never.svg"
        code = main(["--input", str(bad), "--metric", "err_db", "--out", str(out)])
        assert code == 2
        assert not out.exists()
        assert "missing columns" in capsys.readouterr().err

    def test_median_stat(self, tmp_path):
        out = tmp_path / "med.svg"
        code = main([
            "--input", FIG1_CSV, "--metric", "err_db",
            "--stat", "median", "--out", str(out),
        ])
        assert code == 0
