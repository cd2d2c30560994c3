"""
Tests for the command-line front end.
"""

import cmath
import csv
import json

import pytest

from kgprop import __version__, cli
from kgprop.cli import EXIT_FAILED, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, format_value, main, parse_range
from kgprop.errors import KgpropValidationError, SolverDiverged
from kgprop.models.scenario import SCHEMA, Scenario

DS_GRID = {"tau": [-1.2, 1.2, 10], "theta": [0.15, 2.95, 10]}


def write_scenario(path, geometry, parameters, grid=None, **extra):
    data = {"schema": SCHEMA, "geometry": geometry, "parameters": parameters, "grid": grid or {}}
    data.update(extra)
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[0], list(csv.reader(lines[1:]))


class TestFormatting:
    """Tests for CSV cells and ranges."""

    def test_format_value(self):
        assert format_value(True) == "true"
        assert format_value(3) == "3"
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value("S") == "S"

    def test_parse_range(self):
        assert parse_range("0.5:2.5:0.5") == [0.5, 1.0, 1.5, 2.0, 2.5]
        assert parse_range("1") == [1.0]
        assert parse_range("1,3") == [1.0, 3.0]

    @pytest.mark.parametrize("text", ["a:b:c", "1:0:0.5", "0:1:0", "one"])
    def test_parse_range_errors(self, text):
        with pytest.raises(KgpropValidationError):
            parse_range(text)


class TestEval:
    """Tests for `kgprop eval`."""

    def test_ds_grid(self, tmp_path):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0}, DS_GRID)
        out = tmp_path / "k.csv"
        assert main(["eval", "--scenario", str(scenario), "--kind", "F", "--out", str(out)]) == EXIT_OK
        meta, rows = read_csv(out)
        digest = Scenario.load(scenario).digest
        assert meta == f"# kgprop {__version__} scenario={digest}"
        assert rows[0] == ["tau", "tau_prime", "theta", "Z", "region", "re", "im"]
        assert len(rows) == 101

    def test_free_line_kernel(self, tmp_path):
        scenario = write_scenario(
            tmp_path / "line.json",
            "line1d",
            {"potential": {"kind": "zero"}, "m": 1},
            {"t": [1, 1, 1], "s": [0, 0, 1]},
        )
        out = tmp_path / "k.csv"
        assert main(["eval", "--scenario", str(scenario), "--kind", "F", "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert rows[0] == ["t", "s", "re", "im"]
        value = complex(float(rows[1][2]), float(rows[1][3]))
        assert value == pytest.approx(cmath.exp(-1j) / 2j, rel=1e-10)

    def test_repeated_runs_identical(self, tmp_path):
        scenario = write_scenario(tmp_path / "ads.json", "ads", {"d": 3, "m2": 1.25}, {"tau": [-0.3, 0.3, 3], "u": [0.1, 0.9, 3]})
        outputs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            assert main(["eval", "--scenario", str(scenario), "--kind", "Pos", "--out", str(out)]) == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_invalid_vacuum(self, tmp_path, capsys):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0, "alpha": 1.2}, DS_GRID)
        code = main(["eval", "--scenario", str(scenario), "--kind", "F", "--out", str(tmp_path / "k.csv")])
        assert code == EXIT_VALIDATION
        assert "|alpha| < 1" in capsys.readouterr().err
        assert not (tmp_path / "k.csv").exists()

    def test_unknown_field(self, tmp_path, capsys):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0}, DS_GRID, colour="red")
        code = main(["eval", "--scenario", str(scenario), "--kind", "F", "--out", str(tmp_path / "k.csv")])
        assert code == EXIT_VALIDATION
        assert "colour" in capsys.readouterr().err

    def test_unknown_kind(self, tmp_path):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0}, DS_GRID)
        code = main(["eval", "--scenario", str(scenario), "--kind", "Xyz", "--out", str(tmp_path / "k.csv")])
        assert code == EXIT_VALIDATION

    def test_numerical_failure(self, tmp_path, monkeypatch, capsys):
        def diverge(*args):
            raise SolverDiverged("step size underflow")

        monkeypatch.setattr(cli, "runner_for", diverge)
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0}, DS_GRID)
        code = main(["eval", "--scenario", str(scenario), "--kind", "F", "--out", str(tmp_path / "k.csv")])
        assert code == EXIT_NUMERICAL
        assert "step size underflow" in capsys.readouterr().err

    def test_missing_scenario(self, tmp_path):
        code = main(["eval", "--scenario", str(tmp_path / "none.json"), "--kind", "F", "--out", str(tmp_path / "k.csv")])
        assert code == EXIT_VALIDATION


class TestSuite:
    """Tests for `kgprop suite`."""

    def run(self, tmp_path, scenario, suite, *extra):
        out = tmp_path / f"{suite}.json"
        code = main([*extra, "suite", "--scenario", str(scenario), "--suite", suite, "--out", str(out)])
        return code, out

    def test_ds_identities_pass(self, tmp_path):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0}, DS_GRID)
        code, out = self.run(tmp_path, scenario, "identities")
        report = json.loads(out.read_text(encoding="utf-8"))
        assert code == EXIT_OK
        assert report["pass"] is True
        assert report["kgprop"] == __version__
        assert report["suite"] == "identities"
        for check in report["checks"]:
            assert set(check) == {"check", "max_residual", "tolerance", "pass"}
            assert check["pass"] is True

    def test_flrw_even_dimension_fails(self, tmp_path):
        scenario = write_scenario(
            tmp_path / "flrw.json",
            "flrw",
            {"a": "cosh", "d": 4, "l_max": 1, "m": 1.8},
            {"t": [-1, 1, 2], "s": [0, 0, 1]},
        )
        code, out = self.run(tmp_path, scenario, "specialty")
        report = json.loads(out.read_text(encoding="utf-8"))
        assert code == EXIT_FAILED
        assert report["pass"] is False
        assert [c["check"] for c in report["checks"]] == ["mode l=0", "mode l=1"]
        for check in report["checks"]:
            assert check["max_residual"] > 1e-4

    def test_krein_deterministic(self, tmp_path):
        scenario = write_scenario(tmp_path / "static.json", "static", {"L": [[1.0, 0.2], [0.2, 3.0]]}, seed=9)
        first_code, first = self.run(tmp_path, scenario, "krein")
        first_bytes = first.read_bytes()
        second_code, second = self.run(tmp_path, scenario, "krein")
        assert first_code == second_code
        assert second.read_bytes() == first_bytes
        assert json.loads(first_bytes)["seed"] == 9

    def test_seed_option_overrides_scenario(self, tmp_path):
        scenario = write_scenario(tmp_path / "static.json", "static", {"L": [[2.0]]}, seed=9)
        _, out = self.run(tmp_path, scenario, "krein", "--seed", "21")
        assert json.loads(out.read_text(encoding="utf-8"))["seed"] == 21

    def test_trailing_newline(self, tmp_path):
        scenario = write_scenario(tmp_path / "ds.json", "ds", {"d": 3, "nu": 1.0})
        code, out = self.run(tmp_path, scenario, "connection")
        assert code == EXIT_OK
        assert out.read_text(encoding="utf-8").endswith("}\n")


class TestScan:
    """Tests for `kgprop scan`."""

    def test_scarf_family(self, tmp_path):
        out = tmp_path / "s.csv"
        code = main(["scan", "--family", "scarf", "--mu", "0.5:2.5:0.5", "--m", "1", "--out", str(out)])
        assert code == EXIT_OK
        _, rows = read_csv(out)
        assert rows[0] == ["parameter", "m", "abs_b_plus", "abs_b_minus", "special"]
        mus = [float(r[0]) for r in rows[1:]]
        assert mus == sorted(mus) == [0.5, 1.0, 1.5, 2.0, 2.5]
        assert [r[4] for r in rows[1:]] == ["true", "false", "true", "false", "true"]
        for row in rows[1:]:
            if float(row[0]) in (0.5, 1.5):
                assert max(float(row[2]), float(row[3])) < 1e-8

    def test_zero_family_all_special(self, tmp_path):
        out = tmp_path / "z.csv"
        assert main(["scan", "--family", "zero", "--m", "0.5:2:0.5", "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 5
        assert all(r[4] == "true" for r in rows[1:])
        masses = [float(r[1]) for r in rows[1:]]
        assert masses == sorted(masses)

    def test_metadata_tracks_request(self, tmp_path):
        metas = []
        for m in ("1", "2"):
            out = tmp_path / f"{m}.csv"
            main(["scan", "--family", "zero", "--m", m, "--out", str(out)])
            metas.append(read_csv(out)[0])
        assert metas[0] != metas[1]
        assert all(meta.startswith(f"# kgprop {__version__} scenario=") for meta in metas)

    def test_bad_mass(self, tmp_path):
        code = main(["scan", "--family", "zero", "--m", "-1", "--out", str(tmp_path / "z.csv")])
        assert code == EXIT_VALIDATION
