import json
from fractions import Fraction

import pytest

import jetforge.io as jio
from jetforge.cli import run
from jetforge.examples import legendre_chart


@pytest.fixture
def circle_file(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps({
        "n": 2, "variables": ["x", "y"],
        "generators": ["x^2 + y^2 - 1"]}))
    return str(path)


@pytest.fixture
def legendre_file(tmp_path):
    path = tmp_path / "legendre.json"
    path.write_text(jio.canonical_dumps(jio.chart_to_json(legendre_chart())))
    return str(path)


def out_json(capsys):
    captured = capsys.readouterr()
    return json.loads(captured.out)


class TestJetspace:
    def test_circle(self, circle_file, capsys):
        assert run(["jetspace", "--scheme", circle_file, "-d", "1",
                    "-r", "1"]) == 0
        data = out_json(capsys)
        assert data["variables"] == ["a_x_0", "a_x_1", "a_y_0", "a_y_1"]
        assert data["equations"] == [
            "-1 + 1*a_x_0^2 + 1*a_y_0^2",
            "2*a_x_0^1*a_x_1^1 + 2*a_y_0^1*a_y_1^1"]

    def test_universal_route_matches(self, circle_file, capsys):
        assert run(["jetspace", "--scheme", circle_file, "-d", "2",
                    "-r", "2"]) == 0
        direct = out_json(capsys)
        assert run(["jetspace", "--scheme", circle_file, "-d", "2", "-r", "2",
                    "--universal"]) == 0
        universal = out_json(capsys)
        assert direct == universal


class TestProlong:
    def test_squaring(self, tmp_path, capsys):
        path = tmp_path / "square.json"
        path.write_text(json.dumps({"n": 1, "m": 1, "variables": ["x"],
                                    "components": ["x^2"]}))
        assert run(["prolong", "--map", str(path), "-d", "1", "-r", "1"]) == 0
        data = out_json(capsys)
        assert data["components"] == ["1*u1^2", "2*u1^1*u2^1"]


class TestBooleanCommands:
    def test_membership_expected_true(self, circle_file, capsys):
        jet = json.dumps({"d": 1, "r": 3,
                          "series": ["1 + -1/2 * t1^2",
                                     "1 * t1^1 + -1/6 * t1^3"]})
        assert run(["membership", "--scheme", circle_file, "--jet", jet,
                    "--expect", "true"]) == 0
        assert out_json(capsys) == {"member": True}

    def test_jet_from_file_reference(self, circle_file, tmp_path, capsys):
        jet_path = tmp_path / "jet.json"
        jet_path.write_text(json.dumps({
            "d": 1, "r": 3,
            "series": ["1 + -1/2 * t1^2", "1 * t1^1 + -1/6 * t1^3"]}))
        assert run(["membership", "--scheme", circle_file,
                    "--jet", "@" + str(jet_path)]) == 0
        assert out_json(capsys) == {"member": True}

    def test_membership_expect_mismatch_exits_one(self, circle_file, capsys):
        jet = json.dumps({"d": 1, "r": 1, "series": ["2", "0"]})
        assert run(["membership", "--scheme", circle_file, "--jet", jet,
                    "--expect", "true"]) == 1
        assert out_json(capsys) == {"member": False}

    def test_nondeg(self, capsys):
        jet = json.dumps({"d": 2, "r": 1,
                          "series": ["1 * t1^1 + 1 * t2^1",
                                     "2 * t1^1 + 2 * t2^1"]})
        assert run(["nondeg", "--jet", jet, "--expect", "false"]) == 0
        assert out_json(capsys) == {"nondegenerate": False}

    def test_fv(self, legendre_file, capsys):
        matrix = json.dumps([["1", "0"], ["0", "1/4"]])
        assert run(["fv", "--connection", legendre_file, "--point", "1/2",
                    "--matrix", matrix, "--expect", "true"]) == 0
        assert out_json(capsys) == {"fv": True}


class TestFrameCommands:
    def test_beta_matches_library(self, legendre_file, capsys):
        jet = json.dumps({"d": 1, "r": 3, "series": ["1/2 + 1 * t1^1"]})
        assert run(["beta", "--connection", legendre_file, "--jet", jet,
                    "--init", "identity"]) == 0
        data = out_json(capsys)
        from jetforge.connection import beta as lib_beta
        import jetforge.linalg as la
        from jetforge.series import JetPoint, TruncatedSeries
        sigma = JetPoint([TruncatedSeries(1, 3, {(0,): Fraction(1, 2),
                                                 (1,): 1})])
        expected = lib_beta(legendre_chart(), sigma, la.identity(2))
        assert data == jio.matrixjet_to_json(expected)

    def test_alpha_then_hr1(self, legendre_file, capsys):
        jet = json.dumps({"d": 1, "r": 2, "series": ["1/2 + 1 * t1^1"]})
        matrix = json.dumps([["1", "0"], ["0", "1/4"]])
        assert run(["alpha", "--connection", legendre_file, "--jet", jet,
                    "--init", matrix]) == 0
        flag = capsys.readouterr().out
        assert run(["hr1", "--connection", legendre_file, "--flag",
                    flag.strip(), "--expect", "true"]) == 0
        assert out_json(capsys) == {"hr1": True}

    def test_singular_point_exit_three(self, legendre_file, capsys):
        jet = json.dumps({"d": 1, "r": 2, "series": ["1 * t1^1"]})
        assert run(["beta", "--connection", legendre_file, "--jet", jet]) == 3

    def test_order_restriction_flag(self, legendre_file, capsys):
        jet = json.dumps({"d": 1, "r": 3, "series": ["1/2 + 1 * t1^1"]})
        assert run(["beta", "--connection", legendre_file, "--jet", jet,
                    "-r", "1"]) == 0
        assert out_json(capsys)["r"] == 1


class TestVerify:
    def test_verify_legendre(self, legendre_file, capsys):
        assert run(["verify", "--connection", legendre_file, "--max-order",
                    "3", "--cases", "5", "--seed", "7"]) == 0
        data = out_json(capsys)
        assert data["ok"] is True
        assert {s["suite"] for s in data["suites"]} == {
            "dual_route", "right_equivariance", "flatness", "hr1_containment"}

    def test_verify_is_seed_deterministic(self, legendre_file, capsys):
        run(["verify", "--connection", legendre_file, "--cases", "4",
             "--seed", "5"])
        first = capsys.readouterr().out
        run(["verify", "--connection", legendre_file, "--cases", "4",
             "--seed", "5"])
        second = capsys.readouterr().out
        assert first == second

    def test_verify_builtin_examples(self, tmp_path, capsys):
        for name in ("exponential", "nilpotent"):
            assert run(["example", "--name", name]) == 0
            path = tmp_path / f"{name}.json"
            path.write_text(capsys.readouterr().out)
            assert run(["verify", "--connection", str(path), "--cases", "4",
                        "--max-order", "3"]) == 0
            assert out_json(capsys)["ok"] is True

    def test_env_seed_override(self, legendre_file, capsys, monkeypatch):
        monkeypatch.setenv("JETFORGE_SEED", "5")
        run(["verify", "--connection", legendre_file, "--cases", "4",
             "--seed", "99"])
        env_run = capsys.readouterr().out
        monkeypatch.delenv("JETFORGE_SEED")
        run(["verify", "--connection", legendre_file, "--cases", "4",
             "--seed", "5"])
        plain = capsys.readouterr().out
        assert env_run == plain


class TestExampleExport:
    def test_list(self, capsys):
        assert run(["example", "--list"]) == 0
        data = out_json(capsys)
        assert "legendre" in data["examples"]

    def test_export_round_trips(self, capsys):
        assert run(["example", "--name", "legendre"]) == 0
        data = out_json(capsys)
        chart = jio.chart_from_json(data)
        assert chart.m == 2
        points = jio.chart_examples_from_json(data)
        assert (Fraction(1, 2),) in points.values()

    def test_unknown_example_is_input_error(self, capsys):
        assert run(["example", "--name", "nope"]) == 2

    def test_export_is_byte_stable(self, capsys):
        import pathlib
        golden = pathlib.Path(__file__).parent / "golden" / "legendre.json"
        assert run(["example", "--name", "legendre"]) == 0
        assert capsys.readouterr().out == golden.read_text()


class TestInputErrors:
    def test_missing_file(self, capsys):
        assert run(["jetspace", "--scheme", "/nonexistent.json", "-d", "1",
                    "-r", "1"]) == 2

    def test_bad_inline_json(self, circle_file, capsys):
        assert run(["membership", "--scheme", circle_file,
                    "--jet", "{bad"]) == 2

    def test_bad_subcommand(self, capsys):
        assert run(["frobnicate"]) == 2
