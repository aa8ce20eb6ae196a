import json
from importlib import resources

import jsonschema
import pytest

from parking.cli import main

SCHEMA = json.loads(resources.files("parking").joinpath("schema/report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["tool"]["name"] == "parking"
    assert doc["config"]["command"] == argv[0]
    return code, doc


class TestCheck:
    def test_worked_example(self, capsys):
        code, doc = run_json(capsys, "check", "9 12 : 6 1 4 1 8 3 6 11 8")
        assert code == 0 and doc["result"]["valid"]
        assert doc["result"]["holes"] == [5, 10, 12]

    def test_invalid(self, capsys):
        code, doc = run_json(capsys, "check", "2 2 : 2 2")
        assert code == 1
        assert doc["result"]["failingCar"] == 2 and doc["passed"] is False

    def test_displacement(self, capsys):
        code, doc = run_json(capsys, "check", "5 5 : 1 3 5 1 3")
        assert doc["result"]["disp"] == "2"

    def test_text(self, capsys):
        code, out, _ = run(capsys, "check", "5 5 : 1 3 5 1 3", "--format", "text")
        assert "disp 2" in out.splitlines()

    @pytest.mark.parametrize("text", ["2 2 : x", "2 2 1 1", "3 2 : 1 1 1", "2 2 : 1"])
    def test_parse_errors(self, capsys, text):
        code, out, err = run(capsys, "check", text)
        assert code == 2 and "error" in err


class TestConvert:
    FIG2 = "4 9 : 1->4 2->01 3->04 4->01 5->3 6->03 7->4 8->5 9->3"

    def test_fig2(self, capsys):
        code, doc = run_json(capsys, "convert", "9 12 : 6 1 4 1 8 3 6 11 8", "--bijection", "bfs1")
        assert doc["result"]["output"] == self.FIG2

    def test_roundtrip_flag(self, capsys):
        for b in ("bfs1", "bfs2", "knuth"):
            code, doc = run_json(capsys, "convert", self.FIG2, "--bijection", b, "--roundtrip")
            assert code == 0 and doc["result"]["roundtrip"] is True

    def test_knuth(self, capsys):
        code, doc = run_json(capsys, "convert", "9 12 : 3 1 9 1 10 7 3 11 10", "--bijection", "knuth")
        assert doc["result"]["inversions"] == 4

    def test_dot(self, capsys):
        code, out, _ = run(capsys, "convert", "2 2 : 1 1", "--dot", "--format", "text")
        assert out.startswith("digraph")

    def test_invalid_pf(self, capsys):
        code, _, _ = run(capsys, "convert", "2 2 : 2 2")
        assert code == 1


class TestCount:
    def test_count(self, capsys):
        code, doc = run_json(capsys, "count", "3", "5")
        assert doc["result"]["count"] == "108"

    def test_first_cross_check(self, capsys):
        code, doc = run_json(capsys, "count", "3", "5", "--first", "2", "--cross-check")
        assert code == 0 and doc["result"]["count"] == doc["result"]["bruteForce"]

    def test_holes_cross_check(self, capsys):
        code, doc = run_json(capsys, "count", "3", "5", "--holes", "2", "4", "--cross-check")
        assert doc["result"]["count"] == "6" and doc["passed"]

    def test_zero(self, capsys):
        code, out, _ = run(capsys, "count", "0", "7", "--format", "text")
        assert out.strip() == "1"

    def test_big_counts_are_strings(self, capsys):
        code, doc = run_json(capsys, "count", "40", "50")
        assert doc["result"]["count"] == str(11 * 51**39)

    def test_cap_exit_code(self, capsys):
        code, _, err = run(capsys, "count", "9", "9", "--cross-check", "--cap", "1000")
        assert code == 3 and "cap" in err

    def test_enumerate(self, capsys):
        code, doc = run_json(capsys, "enumerate", "2", "2")
        assert doc["result"]["items"] == ["2 2 : 1 1", "2 2 : 1 2", "2 2 : 2 1"]
        code, out, _ = run(capsys, "enumerate", "2", "3", "--first", "3", "--format", "csv")
        assert out.splitlines() == ["pf", "2 3 : 3 1", "2 3 : 3 2"]


class TestSample:
    def test_chi2(self, capsys):
        code, doc = run_json(capsys, "sample", "3", "5", "--trials", "100000", "--seed", "7", "--report", "chi2")
        assert code == 0 and doc["passed"] is True
        assert doc["result"]["config"]["trials"] == 100000

    def test_empty_pfs(self, capsys):
        code, out, _ = run(capsys, "sample", "0", "3", "--trials", "5", "--format", "csv")
        assert out.splitlines() == ["index,pf"] + [f"{i},0 3 :" for i in range(5)]

    def test_deterministic(self, capsys):
        a = run(capsys, "sample", "4", "6", "--trials", "50", "--seed", "9")[1]
        b = run(capsys, "sample", "4", "6", "--trials", "50", "--seed", "9")[1]
        c = run(capsys, "sample", "4", "6", "--trials", "50", "--seed", "10")[1]
        assert a == b != c

    @pytest.mark.parametrize("report", ["holes", "repeats", "lucky"])
    def test_reports(self, capsys, report):
        code, doc = run_json(capsys, "sample", "10", "20", "--trials", "2000", "--report", report)
        assert doc["result"]["sampleCount"] == 2000

    def test_covariance_needs_square(self, capsys):
        code, _, err = run(capsys, "sample", "3", "5", "--report", "covariance")
        assert code == 2

    def test_report_csv_and_file(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        code, out, _ = run(capsys, "sample", "2", "2", "--trials", "100", "--report", "chi2",
                           "--format", "csv", "--output", str(path))
        assert out == "" and path.read_text().startswith("value,count,frequency,reference")

    def test_bad_sizes(self, capsys):
        assert run(capsys, "sample", "3", "2")[0] == 2


class TestVerify:
    def test_disp_inv(self, capsys):
        code, doc = run_json(capsys, "verify", "disp-inv", "--max-size", "6")
        assert code == 0 and doc["passed"]

    def test_tutte(self, capsys):
        code, doc = run_json(capsys, "verify", "tutte", "--n", "4")
        assert code == 0

    def test_abel(self, capsys):
        code, doc = run_json(capsys, "verify", "abel", "--n", "12", "--seed", "3")
        assert code == 0 and doc["result"]["suites"]["abel"]["count"] == 200 * 6

    def test_failure_reports_counterexample(self, capsys, monkeypatch):
        from parking import verify
        from parking.verify import Assertion

        def broken(o):
            yield Assertion("ok", True)
            yield Assertion("bad", False, "1 != 2", "2 2 : 1 1")

        monkeypatch.setitem(verify.SUITES, "tutte", broken)
        code, doc = run_json(capsys, "verify", "tutte")
        assert code == 1
        assert doc["result"]["firstFailure"]["counterexample"] == "2 2 : 1 1"

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "nope")[0] == 2


def test_version(capsys):
    assert main(["--version"]) == 0
