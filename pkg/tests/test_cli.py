import json
import shutil

import pytest

from archuncert import example_path
from archuncert.cli import main


@pytest.fixture
def end_to_end(tmp_path):
    dst = tmp_path / "end-to-end.arch"
    shutil.copy(example_path("end-to-end.arch"), dst)
    return str(dst)


@pytest.fixture
def component_based(tmp_path):
    dst = tmp_path / "component-based.arch"
    shutil.copy(example_path("component-based.arch"), dst)
    return str(dst)


@pytest.fixture
def samples_csv(tmp_path):
    dst = tmp_path / "depth-samples.csv"
    shutil.copy(example_path("depth-samples.csv"), dst)
    return str(dst)


class TestValidate:
    def test_ok_text(self, end_to_end, capsys):
        assert main(["validate", end_to_end]) == 0
        assert capsys.readouterr().out.strip() == "OK"

    def test_ok_json(self, end_to_end, capsys):
        assert main(["validate", end_to_end, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"ok": True, "findings": []}

    def test_cyclic_architecture_exits_1_with_named_cycle(self, tmp_path,
                                                          capsys):
        path = tmp_path / "cyclic.arch"
        path.write_text(
            'name: "cyclic"\n'
            'components:\n'
            '- {"id": "a", "kind": "classical"}\n'
            '- {"id": "b", "kind": "classical"}\n'
            'edges:\n'
            '- {"from": "a", "to": "b"}\n'
            '- {"from": "b", "to": "a"}\n')
        assert main(["validate", str(path)]) == 1
        out = capsys.readouterr().out
        assert "cycle" in out
        assert "a" in out and "b" in out

    def test_parse_error_exits_1(self, tmp_path, capsys):
        path = tmp_path / "broken.arch"
        path.write_text("name: [unclosed")
        assert main(["validate", str(path)]) == 1
        assert "error" in capsys.readouterr().out


class TestEval:
    def test_prints_probability(self, end_to_end, capsys):
        assert main(["eval", end_to_end, "--target", "Planning",
                     "--evidence", "SU_DE=H"]) == 0
        value = float(capsys.readouterr().out.strip())
        assert 0.0 <= value <= 1.0

    def test_bad_evidence_syntax_exits_2(self, end_to_end, capsys):
        assert main(["eval", end_to_end, "--target", "Planning",
                     "--evidence", "SU_DE:H"]) == 2

    def test_unknown_target_exits_2(self, end_to_end):
        assert main(["eval", end_to_end, "--target", "nope"]) == 2

    def test_deterministic_output(self, end_to_end, capsys):
        main(["eval", end_to_end, "--target", "Planning"])
        first = capsys.readouterr().out
        main(["eval", end_to_end, "--target", "Planning"])
        assert capsys.readouterr().out == first


class TestSweep:
    def test_101_data_rows(self, end_to_end, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", end_to_end, "--target", "Planning",
                     "--vary", "DE@all", "--evidence", "SU_DE=H",
                     "--from", "0", "--to", "1", "--step", "0.01",
                     "-o", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,p_high"
        assert len(lines) == 102

    def test_row_selector(self, end_to_end, capsys):
        assert main(["sweep", end_to_end, "--target", "Planning",
                     "--vary", "Planning@H", "--step", "0.5"]) == 0
        assert len(capsys.readouterr().out.strip().split("\n")) == 4

    def test_byte_identical_runs(self, end_to_end, tmp_path):
        args = ["sweep", end_to_end, "--target", "Planning",
                "--vary", "EU@all", "--step", "0.1"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["-o", str(out1)]) == 0
        assert main(args + ["-o", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestCompare:
    def test_compare_bundled_examples(self, end_to_end, component_based,
                                      tmp_path):
        out = tmp_path / "cmp.csv"
        assert main(["compare", end_to_end, component_based,
                     "--target", "Planning", "--vary", "DE@all",
                     "--evidence", "SU_DE=H", "-o", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,p_high_a,p_high_b,delta"
        data = [l for l in lines if not l.startswith("#")]
        assert len(data) == 102
        assert any(l.startswith("#") for l in lines)  # crossings or none


class TestApplyPattern:
    def test_transform_and_reload(self, end_to_end, tmp_path, capsys):
        out = tmp_path / "out.arch"
        assert main(["apply-pattern", "n-version", end_to_end,
                     "--component", "DE", "--monitor", "lidar",
                     "--monitor-p-high", "0.1", "--weight", "0.9",
                     "-o", str(out)]) == 0
        text = out.read_text()
        assert '"lidar"' in text and '"voter_DE"' in text
        assert '"H,L": 0.09999999999999998' in text or '"H,L": 0.1' in text
        assert main(["validate", str(out)]) == 0

    def test_unknown_pattern_exits_2(self, end_to_end):
        with pytest.raises(SystemExit) as exc:
            main(["apply-pattern", "recovery-block", end_to_end,
                  "--component", "DE", "--monitor", "lidar",
                  "--monitor-p-high", "0.1", "--weight", "0.9"])
        assert exc.value.code == 2


class TestCalibrate:
    def test_prints_threshold_and_p_high(self, samples_csv, capsys):
        assert main(["calibrate", samples_csv]) == 0
        out = capsys.readouterr().out
        assert "threshold: 0.45" in out
        assert "p_high:" in out
        assert "p_high[H]" in out  # EU column present in the bundled file

    def test_emit_cpt_block(self, samples_csv, capsys):
        assert main(["calibrate", samples_csv, "--parents", "EU",
                     "--emit-cpt", "DE"]) == 0
        out = capsys.readouterr().out
        assert 'cpts:' in out and '"DE":' in out
        assert 'parents: ["EU"]' in out

    def test_data_error_exits_1(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("sample_id,uncertainty,correct\ns1,abc,true\n")
        assert main(["calibrate", str(path)]) == 1


class TestImpact:
    def test_end_to_end(self, end_to_end, capsys):
        assert main(["impact", end_to_end, "--change", "DE"]) == 0
        assert capsys.readouterr().out.split() == ["SS", "Planning"]

    def test_component_based(self, component_based, capsys):
        assert main(["impact", component_based, "--change", "DE"]) == 0
        assert capsys.readouterr().out.split() == ["Planning"]

    def test_unknown_component_exits_2(self, end_to_end):
        assert main(["impact", end_to_end, "--change", "nope"]) == 2


class TestUsage:
    def test_unknown_flag_exits_2(self, end_to_end):
        with pytest.raises(SystemExit) as exc:
            main(["eval", end_to_end, "--target", "Planning", "--bogus"])
        assert exc.value.code == 2

    def test_every_subcommand_has_help(self, capsys):
        for cmd in ("validate", "eval", "sweep", "compare", "apply-pattern",
                    "calibrate", "impact"):
            with pytest.raises(SystemExit) as exc:
                main([cmd, "--help"])
            assert exc.value.code == 0
            assert "usage" in capsys.readouterr().out
