import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import assert_phases_match
from qwbilliards import cli
from qwbilliards.operators import UnitaryOperator
from qwbilliards.spectral import wrap_phase

PI = math.pi


def read_rows(path):
    lines = [l for l in path.read_text().splitlines() if l and not l.startswith("#")]
    return lines[0], lines[1:]


class TestParseConfig:
    def test_spectrum_flags(self):
        config = cli.parse_config(["spectrum", "--kind", "1", "--n", "5", "--theta", "0.7854"])
        assert config.command == "spectrum"
        assert config.options["n"] == 5
        assert config.payload["spec"].grid.size == 5

    def test_billiard2d_factors(self):
        config = cli.parse_config(
            ["billiard2d", "--left", "sin:1", "--right", "line:1",
             "--theta1", "0.7854", "--theta2", "0.7854"]
        )
        assert config.payload["left"].kind == 1
        assert config.payload["left"].path.path.tag.value == "sin"
        assert config.payload["right"].path.path.tag.value == "line"

    def test_negative_gaps_rejected(self):
        assert cli.main(["spacing", "--gaps", "-1"]) == 2

    def test_kind2_odd_sites_rejected(self):
        assert cli.main(["spectrum", "--kind", "2", "--n", "7"]) == 2

    def test_unknown_flag_exits_2(self):
        assert cli.main(["spectrum", "--bogus", "1"]) == 2

    def test_bad_choice_exits_2(self):
        assert cli.main(["spectrum", "--kind", "3"]) == 2

    def test_partial_alpha_range_rejected(self):
        assert cli.main(["spectrum", "--alpha-left", "0.0"]) == 2

    def test_help_exits_zero(self):
        assert cli.main(["spectrum", "--help"]) == 0

    def test_config_file_merge(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("theta = 0.25\nn = 6\n# comment\n")
        config = cli.parse_config(
            ["spectrum", "--config", str(conf), "--n", "8"]
        )
        assert config.options["theta"] == 0.25  # from file
        assert config.options["n"] == 8  # flag wins

    def test_config_file_unknown_key(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("bogus = 1\n")
        assert cli.main(["spectrum", "--config", str(conf)]) == 2

    def test_config_file_bool(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("svg = true\ncircular = false\n")
        config = cli.parse_config(["spacing", "--config", str(conf), "--n", "8"])
        assert config.options["svg"] is True
        assert config.options["circular"] is False


class TestEvolve:
    def test_row_count_and_header(self, tmp_path):
        out = tmp_path / "evo.csv"
        code = cli.main(
            ["evolve", "--n", "9", "--steps", "70", "--output", str(out)]
        )
        assert code == 0
        header, rows = read_rows(out)
        assert header == "t,site,probability"
        assert len(rows) == 71 * 9
        comments = [l for l in out.read_text().splitlines() if l.startswith("#")]
        assert any("qwbilliards" in c for c in comments)
        assert any("steps=70" in c for c in comments)
        assert any("initial-state" in c and "weights" in c for c in comments)

    def test_frames_sum_to_one(self, tmp_path):
        out = tmp_path / "evo.csv"
        cli.main(["evolve", "--n", "7", "--steps", "10", "--output", str(out)])
        _, rows = read_rows(out)
        values = np.array([float(r.split(",")[2]) for r in rows]).reshape(11, 7)
        np.testing.assert_allclose(values.sum(axis=1), 1.0, atol=1e-12)

    def test_start_site_flag(self, tmp_path):
        out = tmp_path / "evo.csv"
        assert cli.main(
            ["evolve", "--n", "5", "--steps", "0", "--start-site", "3",
             "--output", str(out)]
        ) == 0
        _, rows = read_rows(out)
        assert float(rows[3].split(",")[2]) == pytest.approx(1.0)
        assert cli.main(["evolve", "--n", "5", "--start-site", "99"]) == 2


class TestSpectrum:
    def test_theta_zero_roots_of_unity(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = cli.main(
            ["spectrum", "--kind", "1", "--n", "5", "--theta", "0", "--output", str(out)]
        )
        assert code == 0
        header, rows = read_rows(out)
        assert header == "index,re,im,phase"
        phases = np.array([float(r.split(",")[3]) for r in rows])
        expected = wrap_phase(2 * PI * np.arange(10) / 10)
        assert_phases_match(phases, expected, tol=1e-10)


class TestDispersion:
    def test_shape_and_determinism(self, tmp_path):
        out = tmp_path / "bands.csv"
        args = ["dispersion", "--n", "5", "--samples", "20", "--threads", "3",
                "--svg", "--output", str(out)]
        assert cli.main(args) == 0
        first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        assert cli.main(args) == 0
        second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        assert first == second
        header, rows = read_rows(out)
        assert header == "k,band_index,phase"
        assert len(rows) == 20 * 10
        assert out.with_suffix(".svg").name in first

    def test_curved_scan(self, tmp_path):
        out = tmp_path / "d.csv"
        code = cli.main(
            ["dispersion", "--path", "cos", "--kind", "2", "--n", "6",
             "--samples", "5", "--variant", "planewave", "--k-alpha", "0.3",
             "--threads", "1", "--output", str(out)]
        )
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 5 * 12

    def test_env_thread_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QWB_THREADS", "2")
        config = cli.parse_config(["dispersion", "--n", "4", "--samples", "3"])
        assert config.payload["threads"] == 2


class TestBilliard2D:
    def test_sin_line_product(self, tmp_path):
        out = tmp_path / "b2d.csv"
        code = cli.main(
            ["billiard2d", "--left", "sin:1", "--right", "line:1",
             "--theta1", "0.7854", "--theta2", "0.7854",
             "--n1", "5", "--n2", "6", "--output", str(out)]
        )
        assert code == 0
        header, rows = read_rows(out)
        assert header == "index,re,im,phase"
        assert len(rows) == 10 * 12

    def test_bloch_mode(self, tmp_path):
        out = tmp_path / "b2d.csv"
        code = cli.main(
            ["billiard2d", "--left", "cos:2", "--right", "cos:2",
             "--n1", "6", "--n2", "6", "--bloch",
             "--kf1", "0.5", "--kf2", "-0.5", "--ka1", "0.1", "--ka2", "0.2",
             "--output", str(out)]
        )
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 144

    def test_kf_grid_scan(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = cli.main(
            ["billiard2d", "--left", "cos:1", "--right", "cos:1",
             "--n1", "3", "--n2", "3", "--bloch", "--kf-steps", "3",
             "--output", str(out)]
        )
        assert code == 0
        header, rows = read_rows(out)
        assert header == "kf1,kf2,index,re,im,phase"
        assert len(rows) == 3 * 3 * 36

    def test_kf_steps_requires_bloch(self):
        assert cli.main(["billiard2d", "--kf-steps", "3"]) == 2


class TestSpacingAndClassify:
    def test_tensor_pipeline(self, tmp_path):
        out = tmp_path / "sp.csv"
        code = cli.main(
            ["spacing", "--left", "cosh:2", "--right", "cosh:2",
             "--n1", "6", "--n2", "6", "--gaps", "2", "--svg", "--output", str(out)]
        )
        assert code == 0
        header, rows = read_rows(out)
        assert header == "index,spacing"
        spacings = np.array([float(r.split(",")[1]) for r in rows])
        assert spacings.mean() == pytest.approx(1.0, abs=1e-12)

        hist_header, hist_rows = read_rows(tmp_path / "sp_hist.csv")
        assert hist_header == "bin_left,bin_right,density"
        assert len(hist_rows) == 20

        doc = json.loads((tmp_path / "sp_classify.json").read_text())
        assert set(doc) >= {"ks_wigner", "ks_poisson", "verdict", "n_spacings", "gaps_excluded"}
        assert doc["gaps_excluded"] == 2
        assert doc["n_spacings"] == len(rows)
        assert (tmp_path / "sp.svg").exists()

    def test_spacing_from_spectrum_file(self, tmp_path):
        spec_csv = tmp_path / "spec.csv"
        cli.main(["spectrum", "--n", "8", "--theta", "1.0", "--output", str(spec_csv)])
        out = tmp_path / "sp.csv"
        code = cli.main(
            ["spacing", "--input", str(spec_csv), "--gaps", "1", "--output", str(out)]
        )
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 16 - 1  # circular spacings minus one excluded gap

    def test_classify_from_spacings_file(self, tmp_path, capsys):
        sp = tmp_path / "sp.csv"
        cli.main(
            ["spacing", "--n", "12", "--theta", "0.9", "--gaps", "2", "--output", str(sp)]
        )
        out = tmp_path / "cls.json"
        code = cli.main(["classify", "--input", str(sp), "--output", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["verdict"] in ("WignerLike", "PoissonLike", "Inconclusive")
        assert json.loads(capsys.readouterr().out)["verdict"] == doc["verdict"]

    def test_small_spectrum_skips_only_classification(self, tmp_path, capsys):
        # 10 phases -> 8 spacings after excluding 2 gaps: spacing/histogram
        # outputs are written, the verdict needs more samples and is skipped
        out = tmp_path / "sp.csv"
        code = cli.main(
            ["spacing", "--n", "5", "--theta", "0", "--gaps", "2", "--output", str(out)]
        )
        assert code == 0
        assert out.exists()
        assert (tmp_path / "sp_hist.csv").exists()
        assert not (tmp_path / "sp_classify.json").exists()
        assert "classification skipped" in capsys.readouterr().err

    def test_classify_builds_2d_spectrum(self, tmp_path):
        out = tmp_path / "cls.json"
        code = cli.main(
            ["classify", "--left", "line:1", "--right", "line:1",
             "--n1", "12", "--n2", "12", "--phi1", "1.0", "--phi2", "1.0",
             "--gaps", "2", "--output", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["n_spacings"] == 24 * 24 - 2


class TestSvg:
    def test_heatmap_document(self, tmp_path):
        out = tmp_path / "evo.csv"
        cli.main(["evolve", "--n", "6", "--steps", "4", "--svg", "--output", str(out)])
        svg = out.with_suffix(".svg")
        root = ET.parse(svg).getroot()
        assert root.attrib["width"] == "800"
        assert root.attrib["height"] == "600"
        rects = [e for e in root.iter() if e.tag.endswith("rect")]
        assert len(rects) >= 5 * 6

    def test_histogram_has_reference_curves(self, tmp_path):
        out = tmp_path / "sp.csv"
        cli.main(
            ["spacing", "--n", "10", "--theta", "0.9", "--svg", "--output", str(out)]
        )
        root = ET.parse(out.with_suffix(".svg")).getroot()
        polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
        assert len(polylines) == 2


class TestErrorPaths:
    def test_numerical_failure_exits_3(self, tmp_path, monkeypatch):
        broken = UnitaryOperator(np.eye(10, dtype=complex) * 0.5, label="broken")
        monkeypatch.setattr(cli, "compose_step", lambda spec: broken)
        code = cli.main(
            ["spectrum", "--n", "5", "--output", str(tmp_path / "x.csv")]
        )
        assert code == 3

    def test_io_failure_exits_4(self, tmp_path):
        target = tmp_path / "dir.csv"
        target.mkdir()
        code = cli.main(["spectrum", "--n", "5", "--output", str(target)])
        assert code == 4

    def test_missing_input_exits_2(self, tmp_path):
        code = cli.main(["spacing", "--input", str(tmp_path / "nope.csv")])
        assert code == 2

    def test_no_tmp_leftovers(self, tmp_path):
        out = tmp_path / "spec.csv"
        cli.main(["spectrum", "--n", "5", "--output", str(out)])
        assert [p.name for p in tmp_path.iterdir()] == ["spec.csv"]
