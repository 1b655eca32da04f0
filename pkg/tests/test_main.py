"""Tests for the command-line interface."""

import json
import math
import sys
from unittest.mock import patch

import jsonschema
import pytest

from src.config import load_schema
from src.main import main
from src.sphere_quotient import HomotopyClass


def run_cli(tmp_path, *argv):
    """Run main() with the given arguments and a config file that does not exist."""
    config = str(tmp_path / "absent.yaml")
    command, rest = argv[0], list(argv[1:])
    with patch.object(sys, "argv", ["src.main", command, "--config", config, *rest]):
        main()


def exit_code(tmp_path, *argv):
    with pytest.raises(SystemExit) as excinfo:
        run_cli(tmp_path, *argv)
    return excinfo.value.code


def write_json(tmp_path, name, document):
    path = tmp_path / name
    path.write_text(json.dumps(document))
    return str(path)


FULL_TURN = {"format": "segments", "segments": [{"axis": [0, 0, 1], "angle": 6.283185307179586}]}
DOUBLE_TURN = {"format": "segments", "segments": [{"axis": [0, 0, 1], "angle": 12.566370614359172}]}


class TestClassifyCommand:
    """Tests for the classify subcommand."""

    def test_full_turn(self, tmp_path, capsys):
        """Verify that a full turn is reported nontrivial with a schema-valid report."""
        run_cli(tmp_path, "classify", "--input", write_json(tmp_path, "full_turn.json", FULL_TURN))
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        jsonschema.validate(instance=report, schema=load_schema("report"))
        assert report["class"] == "nontrivial"
        assert report["agreement"] is True
        assert "Phase 2" in captured.err

    def test_double_turn(self, tmp_path, capsys):
        """Verify that a double turn is reported trivial."""
        run_cli(tmp_path, "classify", "--input", write_json(tmp_path, "double_turn.json", DOUBLE_TURN))
        assert json.loads(capsys.readouterr().out)["class"] == "trivial"

    def test_several_inputs(self, tmp_path, capsys):
        """Verify that several inputs give a list of reports in order."""
        first = write_json(tmp_path, "a.json", FULL_TURN)
        second = write_json(tmp_path, "b.json", DOUBLE_TURN)
        run_cli(tmp_path, "classify", "--input", first, "--input", second, "--theta-max", "0.1")
        reports = json.loads(capsys.readouterr().out)
        assert [r["class"] for r in reports] == ["nontrivial", "trivial"]
        assert [r["input"] for r in reports] == [first, second]

    def test_samples_input(self, tmp_path, capsys):
        """Verify that orientation samples are accepted."""
        quats = [[math.cos(math.pi * k / 8), 0.0, 0.0, math.sin(math.pi * k / 8)] for k in range(9)]
        document = {"format": "samples", "quaternions": quats}
        run_cli(tmp_path, "classify", "--input", write_json(tmp_path, "samples.json", document))
        assert json.loads(capsys.readouterr().out)["class"] == "nontrivial"

    def test_malformed_json(self, tmp_path, capsys):
        """Verify that malformed JSON exits with code 2."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert exit_code(tmp_path, "classify", "--input", str(path)) == 2
        assert "ERROR:" in capsys.readouterr().err

    def test_schema_violation(self, tmp_path):
        """Verify that a path without segments exits with code 2."""
        assert exit_code(tmp_path, "classify", "--input", write_json(tmp_path, "p.json", {"format": "segments"})) == 2

    def test_open_path(self, tmp_path):
        """Verify that an open path exits with code 2."""
        half = {"format": "segments", "segments": [{"axis": [0, 0, 1], "angle": 3.14}]}
        assert exit_code(tmp_path, "classify", "--input", write_json(tmp_path, "half.json", half)) == 2

    def test_disagreement(self, tmp_path, capsys):
        """Verify that disagreeing routes exit with code 3 and print diagnostics."""
        with patch("src.classifier.lift_class", return_value=HomotopyClass.TRIVIAL):
            code = exit_code(tmp_path, "classify", "--input", write_json(tmp_path, "full.json", FULL_TURN))
        assert code == 3
        assert '"agreement": false' in capsys.readouterr().err


class TestExtractCommand:
    """Tests for the extract subcommand."""

    def test_word_output(self, tmp_path, capsys):
        """Verify that extract prints a schema-valid pure word."""
        run_cli(tmp_path, "extract", "--input", write_json(tmp_path, "full.json", FULL_TURN))
        document = json.loads(capsys.readouterr().out)
        jsonschema.validate(instance=document, schema=load_schema("word"))
        assert document["n"] == 3
        assert sum(1 if v > 0 else -1 for v in document["word"]) % 4 == 2

    def test_debug_planar(self, tmp_path, capsys):
        """Verify that --debug-planar dumps the projected strands on stderr."""
        run_cli(tmp_path, "extract", "--input", write_json(tmp_path, "full.json", FULL_TURN), "--debug-planar")
        assert '"uv"' in capsys.readouterr().err


class TestReduceCommand:
    """Tests for the reduce subcommand."""

    def test_fourth_power(self, tmp_path, capsys):
        """Verify that s1^4 reduces to the empty word in the trivial class."""
        run_cli(tmp_path, "reduce", "1 1 1 1")
        output = json.loads(capsys.readouterr().out)
        assert output["canonical"] == {"n": 3, "word": []}
        assert output["class"] == "trivial"

    def test_transposition_class(self, tmp_path, capsys):
        """Verify that a non-pure word has no homotopy class entry."""
        run_cli(tmp_path, "reduce", "-1")
        output = json.loads(capsys.readouterr().out)
        assert output["sphere_class"] == {"perm": [2, 1, 3], "esum_mod4": 3}
        assert "class" not in output

    def test_certificate(self, tmp_path, capsys):
        """Verify that --certificate prints a schema-valid certificate to the canonical word."""
        run_cli(tmp_path, "reduce", "2 2 1", "--certificate")
        output = json.loads(capsys.readouterr().out)
        jsonschema.validate(instance=output["certificate"], schema=load_schema("certificate"))
        assert output["certificate"]["end"] == output["canonical"]

    def test_exhausted_budget(self, tmp_path):
        """Verify that an exhausted search budget exits with code 4."""
        assert exit_code(tmp_path, "reduce", "1 1 1 1", "--certificate", "--budget", "3") == 4

    def test_bad_word(self, tmp_path):
        """Verify that a malformed word exits with code 2."""
        assert exit_code(tmp_path, "reduce", "1 x") == 2


class TestVerifyCommand:
    """Tests for the verify subcommand."""

    def test_lemma1(self, tmp_path, capsys):
        """Verify that all ten conjugation identities pass."""
        run_cli(tmp_path, "verify", "lemma1")
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["passed"] == report["total"] == 10
        assert report["ok"]
        assert "10/10 identities verified" in captured.err

    def test_lemma1p(self, tmp_path, capsys):
        """Verify the general families for five strands."""
        run_cli(tmp_path, "verify", "lemma1p", "--n", "5")
        assert json.loads(capsys.readouterr().out)["ok"]

    def test_lemma1p_unsupported(self, tmp_path):
        """Verify that n = 9 exits with code 2."""
        assert exit_code(tmp_path, "verify", "lemma1p", "--n", "9") == 2

    def test_prop1(self, tmp_path, capsys):
        """Verify that the identity chain is certified."""
        run_cli(tmp_path, "verify", "prop1")
        assert json.loads(capsys.readouterr().out)["ok"]

    def test_prop1p(self, tmp_path, capsys):
        """Verify that d^2 is certified for three strands."""
        run_cli(tmp_path, "verify", "prop1p", "--n", "3")
        assert json.loads(capsys.readouterr().out)["identities"][0]["status"] == "certified"

    def test_prop1_inconclusive(self, tmp_path):
        """Verify that a tiny budget exits with code 4."""
        assert exit_code(tmp_path, "verify", "prop1", "--budget", "5") == 4


class TestVerifyCertCommand:
    """Tests for the verify-cert subcommand."""

    def test_valid_certificate(self, tmp_path, capsys):
        """Verify that a certificate printed by reduce replays."""
        run_cli(tmp_path, "reduce", "2 2", "--certificate")
        certificate = json.loads(capsys.readouterr().out)["certificate"]
        run_cli(tmp_path, "verify-cert", "--input", write_json(tmp_path, "cert.json", certificate))
        assert json.loads(capsys.readouterr().out)["valid"] is True

    def test_tampered_certificate(self, tmp_path, capsys):
        """Verify that a certificate with a wrong end exits with code 2."""
        document = {
            "start": {"n": 3, "word": [1, 2, 2, 1]},
            "moves": [{"op": "FlipDelete", "pos": 0, "flip": 1, "sign": 1}],
            "end": {"n": 3, "word": [1, 1]},
        }
        assert exit_code(tmp_path, "verify-cert", "--input", write_json(tmp_path, "bad.json", document)) == 2
        assert "Replay ends" in capsys.readouterr().err


class TestGenCommand:
    """Tests for the gen subcommand."""

    def test_fixed_axis(self, tmp_path, capsys):
        """Verify that --axis writes one full-turn segment."""
        run_cli(tmp_path, "gen", "--turns", "1", "--axis", "0,0,1")
        document = json.loads(capsys.readouterr().out)
        jsonschema.validate(instance=document, schema=load_schema("path"))
        assert document["segments"] == FULL_TURN["segments"]

    def test_output_file_round_trip(self, tmp_path, capsys):
        """Verify that a generated path file classifies as expected."""
        output = str(tmp_path / "three.json")
        run_cli(tmp_path, "gen", "--turns", "3", "--wiggle", "--seed", "4", "--output", output)
        capsys.readouterr()
        run_cli(tmp_path, "classify", "--input", output, "--theta-max", "0.1")
        assert json.loads(capsys.readouterr().out)["class"] == "nontrivial"

    def test_seeded(self, tmp_path, capsys):
        """Verify that the same seed generates the same path."""
        run_cli(tmp_path, "gen", "--turns", "2", "--seed", "8")
        first = capsys.readouterr().out
        run_cli(tmp_path, "gen", "--turns", "2", "--seed", "8")
        assert capsys.readouterr().out == first

    def test_negative_turns(self, tmp_path):
        """Verify that negative turns exit with code 2."""
        assert exit_code(tmp_path, "gen", "--turns", "-1") == 2

    def test_bad_axis(self, tmp_path):
        """Verify that a zero axis exits with code 2."""
        assert exit_code(tmp_path, "gen", "--turns", "1", "--axis", "0,0,0") == 2


class TestDiagramCommand:
    """Tests for the diagram subcommand."""

    def test_ascii(self, tmp_path, capsys):
        """Verify the ASCII diagram of r1."""
        run_cli(tmp_path, "diagram", "1 2 2 1", "--format", "ascii")
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "1 2 3"
        assert len(lines) == 13

    def test_svg_file(self, tmp_path):
        """Verify that --format svg writes an SVG file."""
        output = tmp_path / "r1.svg"
        run_cli(tmp_path, "diagram", "1 2 2 1", "--format", "svg", "--output", str(output))
        assert output.read_text().startswith("<svg")


class TestMain:
    """Tests for argument handling and configuration errors."""

    def test_no_command(self):
        """Verify that running without a subcommand prints help and exits with code 2."""
        with patch.object(sys, "argv", ["src.main"]):
            with pytest.raises(SystemExit) as excinfo:
                main()
        assert excinfo.value.code == 2

    def test_invalid_config_file(self, tmp_path):
        """Verify that a bad value in the config file exits with code 2."""
        config = tmp_path / "config.yaml"
        config.write_text("theta_max: -1\n")
        with patch.object(sys, "argv", ["src.main", "reduce", "1 1", "--config", str(config)]):
            with pytest.raises(SystemExit) as excinfo:
                main()
        assert excinfo.value.code == 2

    def test_config_file_used(self, tmp_path, capsys):
        """Verify that the search budget is read from the config file."""
        config = tmp_path / "config.yaml"
        config.write_text("search:\n  max_states: 3\n")
        with patch.object(sys, "argv", ["src.main", "reduce", "1 1 1 1", "--certificate", "--config", str(config)]):
            with pytest.raises(SystemExit) as excinfo:
                main()
        assert excinfo.value.code == 4
