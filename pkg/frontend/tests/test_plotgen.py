import json
import os
import shutil

import pytest

from plotgen import PlotgenError, available_figures, load_recipe, render
from plotgen import cli
from plotgen.csvio import read_csv

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

ALL_FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7")
EXPECTED_PANELS = {"fig3": 4, "fig4": 2, "fig5": 1, "fig6": 3, "fig7": 1}


class TestRecipes:
    def test_available(self):
        assert available_figures() == sorted(ALL_FIGURES)

    @pytest.mark.parametrize("fid", ALL_FIGURES)
    def test_panel_counts(self, fid):
        recipe = load_recipe(fid)
        assert len(recipe.panels) == EXPECTED_PANELS[fid]
        rows, cols = recipe.layout
        assert rows * cols == len(recipe.panels)

    def test_log_scales(self):
        # error-budget and bunching panels must be log-y
        fig4 = load_recipe("fig4")
        assert fig4.panels[1]["yscale"] == "log"
        fig5 = load_recipe("fig5")
        assert fig5.panels[0]["yscale"] == "log"

    def test_unknown_figure(self):
        with pytest.raises(PlotgenError, match="fig99"):
            load_recipe("fig99")

    @pytest.mark.parametrize("fid", ALL_FIGURES)
    def test_columns_exist_in_goldens(self, fid):
        recipe = load_recipe(fid)
        _, data = read_csv(os.path.join(GOLDEN, recipe.input))
        for column in recipe.columns:
            assert column in data

    def test_segment_markers(self):
        assert "t1" in load_recipe("fig3").vlines_meta
        assert "t1" in load_recipe("fig7").vlines_meta


class TestCsvReader:
    def test_metadata_and_columns(self):
        meta, data = read_csv(os.path.join(GOLDEN, "dynamics.csv"))
        assert meta["preset"] == "fig3"
        assert "t1" in meta
        assert len(data["t"]) > 100

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(PlotgenError, match="empty"):
            read_csv(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text('# {"a": 1}\nt,y\n')
        with pytest.raises(PlotgenError, match="no data rows"):
            read_csv(path)

    def test_bad_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,y\n0,oops\n")
        with pytest.raises(PlotgenError, match="oops"):
            read_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(PlotgenError, match="not found"):
            read_csv(tmp_path / "nope.csv")


class TestRender:
    @pytest.mark.parametrize("fid", ALL_FIGURES)
    def test_renders_from_goldens(self, fid, tmp_path):
        path = render(load_recipe(fid), GOLDEN, tmp_path)
        assert os.path.exists(path)
        assert os.path.getsize(path) > 10_000

    def test_pixel_identical_reruns(self, tmp_path):
        recipe = load_recipe("fig3")
        a = render(recipe, GOLDEN, tmp_path / "a")
        b = render(recipe, GOLDEN, tmp_path / "b")
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()

    def test_missing_column_names_column_and_file(self, tmp_path):
        src = tmp_path / "in"
        src.mkdir()
        # strip one required column out of the golden file
        meta, _ = read_csv(os.path.join(GOLDEN, "convergence.csv"))
        with open(os.path.join(GOLDEN, "convergence.csv")) as fh:
            lines = fh.readlines()
        header = lines[1].strip().split(",")
        drop = header.index("leakage_diag8")
        out_lines = [lines[0]]
        for line in lines[1:]:
            toks = line.strip().split(",")
            del toks[drop]
            out_lines.append(",".join(toks) + "\n")
        (src / "convergence.csv").write_text("".join(out_lines))
        with pytest.raises(PlotgenError) as exc:
            render(load_recipe("fig7"), src, tmp_path / "out")
        assert "leakage_diag8" in str(exc.value)
        assert "convergence.csv" in str(exc.value)

    def test_empty_csv_is_explicit_error(self, tmp_path):
        src = tmp_path / "in"
        src.mkdir()
        (src / "dynamics.csv").write_text("")
        out = tmp_path / "out"
        with pytest.raises(PlotgenError, match="empty"):
            render(load_recipe("fig3"), src, out)
        assert not (out / "fig3.png").exists()


class TestCLI:
    def test_all_figures(self, tmp_path, capsys):
        assert cli.main(["--figure", "all", "--in", GOLDEN, "--out", str(tmp_path)]) == 0
        produced = sorted(os.listdir(tmp_path))
        assert produced == [f"{fid}.png" for fid in sorted(ALL_FIGURES)]

    def test_unknown_figure_exit_2(self, tmp_path):
        assert cli.main(["--figure", "fig99", "--in", GOLDEN, "--out", str(tmp_path)]) == 2

    def test_bad_input_exit_3(self, tmp_path):
        empty = tmp_path / "in"
        empty.mkdir()
        assert cli.main(["--figure", "fig3", "--in", str(empty), "--out", str(tmp_path)]) == 3
