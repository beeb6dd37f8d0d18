import csv
import io
import json
from fractions import Fraction as F

import pytest

from newtonhodge import cli
from newtonhodge.polygon import ConvexPolygon


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def square(tmp_path):
    return write(tmp_path, "square.json", {"n": 2, "basis": [[1, 0], [0, 1]], "segments": [{"d": 2, "dp": 0}, {"d": 2, "dp": 0}]})


@pytest.fixture
def seg11(tmp_path):
    return write(tmp_path, "seg.json", {"n": 1, "basis": [[1]], "segments": [{"d": 1, "dp": 1}]})


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv)
    return code, (json.loads(out) if out else None), err


class TestHodge:
    def test_square(self, capsys, square):
        code, rep, _ = run_json(capsys, ["hodge", "--polytope", square])
        assert code == 0
        assert rep["results"]["poincare"]["coeffs"][:3] == [1, 2, 1]
        assert ConvexPolygon.from_json(rep["results"]["polygon"]) == ConvexPolygon.from_slopes(F(x) for x in ["0", "1/2", "1/2", "1"])

    def test_twist_length(self, capsys, square):
        code, _, err = run(capsys, ["hodge", "--polytope", square, "--twist", "1/2"])
        assert code == 2 and "twist" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ["hodge", "--polytope", str(tmp_path / "nope.json")])
        assert code == 2

    def test_malformed(self, capsys, tmp_path):
        bad = write(tmp_path, "bad.json", {"segments": [{"d": 0, "dp": 0}]})
        code, _, _ = run(capsys, ["hodge", "--polytope", bad])
        assert code == 2

    def test_csv(self, capsys, square):
        code, out, _ = run(capsys, ["hodge", "--polytope", square, "--format", "csv"])
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["section", "key", "value"]
        assert ["check", "poincare-consistency", "pass"] in rows


class TestHS:
    def test_closed_form_check(self, capsys, seg11):
        code, rep, _ = run_json(capsys, ["hs", "--polytope", seg11, "--rs", "1/2", "--nu", "1"])
        assert code == 0
        assert ConvexPolygon.from_json(rep["results"]["polygon"]) == ConvexPolygon.from_slopes([F(1, 2), F(1, 2)])
        assert rep["checks"][0]["name"] == "closed-form"

    def test_bad_nu_is_math_error(self, capsys, seg11):
        code, _, err = run(capsys, ["hs", "--polytope", seg11, "--rs", "1/4", "--nu", "2"])
        assert code == 3 and "math error" in err

    def test_bad_fraction(self, capsys, seg11):
        code, _, _ = run(capsys, ["hs", "--polytope", seg11, "--rs", "x", "--nu", "1"])
        assert code == 2


class TestGNP:
    def test_single(self, capsys):
        code, rep, _ = run_json(capsys, ["gnp", "--d", "3", "--p", "5"])
        assert code == 0
        assert rep["results"]["Y"] == [0, 2, 4]
        assert rep["results"]["coincides_with_hp"] is False
        assert rep["results"]["max_deviation"] == "1/6"

    def test_product(self, capsys):
        code, rep, _ = run_json(capsys, ["gnp", "--product", "1,1;1,1", "--p", "7"])
        assert code == 0 and rep["results"]["coincides_with_hp"] is True

    @pytest.mark.parametrize("p", ["2", "9", "3"])
    def test_rejected_primes(self, capsys, p):
        code, _, _ = run(capsys, ["gnp", "--d", "3", "--p", p])
        assert code == 2

    def test_bad_product(self, capsys):
        code, _, _ = run(capsys, ["gnp", "--product", "1;2", "--p", "5"])
        assert code == 2


class TestNP:
    def test_kloosterman(self, capsys, tmp_path):
        f = write(tmp_path, "f.json", {"p": 5, "n": 1, "terms": [{"exp": [1], "coeff": 1}, {"exp": [-1], "coeff": 1}]})
        code, rep, _ = run_json(capsys, ["np", "--poly", f])
        assert code == 0
        assert rep["results"]["equals_hp"] and rep["results"]["equals_gnp"]
        assert rep["results"]["valuations"] == ["0", "0", "1"]

    def test_separable_product_identity(self, capsys, tmp_path):
        terms = [{"exp": [1, 0], "coeff": 1}, {"exp": [-1, 0], "coeff": 2}, {"exp": [0, 1], "coeff": 1}]
        f = write(tmp_path, "f.json", {"p": 3, "n": 2, "terms": terms})
        code, rep, _ = run_json(capsys, ["np", "--poly", f, "--chi", "0", "1/2"])
        assert code == 0
        assert {c["name"] for c in rep["checks"]} >= {"product-identity", "dominates-hp"}

    def test_budget(self, capsys, tmp_path):
        f = write(tmp_path, "f.json", {"p": 7, "n": 1, "terms": [{"exp": [3], "coeff": 1}, {"exp": [-3], "coeff": 1}]})
        code, _, err = run(capsys, ["np", "--poly", f, "--budget", "100"])
        assert code == 2 and "budget" in err

    def test_degenerate(self, capsys, tmp_path):
        f = write(tmp_path, "f.json", {"p": 5, "n": 1, "terms": [{"exp": [5], "coeff": 1}]})
        code, _, _ = run(capsys, ["np", "--poly", f])
        assert code == 4

    def test_character_order(self, capsys, tmp_path):
        f = write(tmp_path, "f.json", {"p": 5, "n": 1, "terms": [{"exp": [1], "coeff": 1}]})
        code, _, _ = run(capsys, ["np", "--poly", f, "--chi", "1/3"])
        assert code == 2


class TestDecompose:
    def test_scaled_segment(self, capsys, tmp_path):
        P = write(tmp_path, "p.json", {"n": 1, "basis": [[2]], "segments": [{"d": 1, "dp": 1}]})
        code, rep, _ = run_json(capsys, ["decompose", "--polytope", P])
        assert code == 0, rep


class TestLimitTable:
    def test_gnp_rows(self, capsys):
        code, out, _ = run(capsys, ["limit-table", "--d", "3", "--pmax", "13", "--format", "csv"])
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        by_p = {r[0]: r for r in rows[1:]}
        assert by_p["5"][1] == "1/6" and by_p["7"][1] == "0"

    def test_hs_mode(self, capsys):
        code, rep, _ = run_json(capsys, ["limit-table", "--d", "1", "--dp", "1", "--pmax", "13", "--s", "2", "--samples", "2"])
        assert code == 0
        assert rep["table"]["rows"]


class TestVerify:
    @pytest.mark.parametrize("suite", sorted(cli.SUITES))
    def test_suites_pass(self, capsys, suite):
        code, rep, _ = run_json(capsys, ["verify", "--suite", suite])
        assert code == 0, rep["results"].get("counterexamples")
        assert rep["results"]["failed"] == 0

    def test_unknown_suite(self, capsys):
        code, _, _ = run(capsys, ["verify", "--suite", "nope"])
        assert code == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setitem(cli.SUITES, "broken", lambda rep, rng: rep.check("always", False, "forced"))
        code, rep, _ = run_json(capsys, ["verify", "--suite", "broken"])
        assert code == 1 and rep["results"]["failed"] == 1

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, ["verify", "--suite", "gnp-matching", "--seed", "3"])
        _, b, _ = run(capsys, ["verify", "--suite", "gnp-matching", "--seed", "3"])
        assert a == b
