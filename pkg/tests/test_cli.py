import contextlib
import io
import json
import random
import shutil
import subprocess

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_sparse_poly
from igusa.cli import SCHEMA, AnalysisRequest, ParseError, main, parse_polynomial, run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, out.getvalue(), err.getvalue()


class TestParse:
    def test_juxtaposition_multiplies(self):
        assert str(parse_polynomial("3x")) == "3*x"
        assert str(parse_polynomial("x y")) == "x*y"

    def test_names_are_words(self):
        f = parse_polynomial("xy")
        assert f.variables == ("xy",)
        assert f.nvars == 1

    def test_constants_and_signs(self):
        f = parse_polynomial("x^2 - 5")
        assert f.evaluate((3,)) == 4
        assert str(f) == "x^2 - 5"

    @pytest.mark.parametrize(
        "text,position",
        [
            ("x^^2", 1),
            ("x^10000001", 2),
            ("", 0),
            ("x$", 1),
            ("3*", 2),
            ("x^", 1),
        ],
    )
    def test_error_positions(self, text, position):
        with pytest.raises(ParseError) as exc:
            parse_polynomial(text)
        assert exc.value.position == position
        assert f"position {position}" in str(exc.value)

    @settings(max_examples=60)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_roundtrip_through_str(self, seed):
        rng = random.Random(seed)
        f = random_sparse_poly(rng, rng.choice([1, 2, 3]), origin_vanishing=False)
        g = parse_polynomial(str(f))
        # canonical text is a fixed point, and reparsing it is stable at
        # the object level (the parser only sees variables that occur)
        assert str(g) == str(f)
        assert parse_polynomial(str(g)) == g


class TestRunPayloads:
    def test_poles(self):
        payload, code = run("poles", AnalysisRequest(f_text="x^2", g_text="y^3", prime=5))
        assert code == 0
        assert payload == {"schema": SCHEMA, "poles": ["-1", "-5/6"]}

    def test_count(self):
        payload, code = run("count", AnalysisRequest(f_text="x^2", prime=5, depth=4))
        assert code == 0
        assert payload["counts"] == [1, 5, 5, 25]
        assert payload["series"] == ["4/5", "0", "4/25", "0"]
        assert payload["truncated"] is False
        assert payload["domain"] is None

    def test_spf_with_trace(self):
        payload, code = run("spf", AnalysisRequest(f_text="x^2 - 5", prime=5, trace=True))
        assert code == 0
        assert payload["zeta"] == {
            "q": 5,
            "numerator": ["4/5", "1/25", "-1/25"],
            "denominator_factors": [[1, 1]],
        }
        assert payload["text"] == "(4/5 + 1/25*t - 1/25*t^2) / (1 - q^-1 t)  [q=5]"
        assert payload["trace"]["children"][0]["path"] == [[0]]

    def test_spf_without_trace(self):
        payload, _ = run("spf", AnalysisRequest(f_text="x", prime=5))
        assert payload["text"] == "(4/5) / (1 - q^-1 t)  [q=5]"
        assert "trace" not in payload

    def test_verify_pass(self):
        payload, code = run(
            "verify", AnalysisRequest(f_text="x^2", g_text="y^2", prime=5, depth=8)
        )
        assert code == 0
        assert payload["ok"] is True
        assert payload["poles_surviving"] == ["-1"]

    def test_verify_falsification_exits_2(self):
        payload, code = run(
            "verify",
            AnalysisRequest(f_text="x^2", g_text="y^3", prime=5, depth=6, max_deg=0),
        )
        assert code == 2
        assert payload["ok"] is False
        assert payload["residuals"] == [[1, "-4/125"], [2, "4/125"], [5, "-4/15625"]]

    def test_analyze_single(self):
        payload, code = run("analyze", AnalysisRequest(f_text="x^2 + y^3", prime=3))
        assert code == 0
        assert [f["normal"] for f in payload["polyhedron"]["facets"]] == [
            [0, 1],
            [1, 0],
            [3, 2],
        ]
        assert payload["noncritical"]["verdict"] == "non_critical"
        assert "denominator" not in payload

    def test_analyze_pair(self):
        payload, code = run("analyze", AnalysisRequest(f_text="x^2", g_text="y^3", prime=5))
        assert code == 0
        den = payload["denominator"]
        assert den["universal"] == {"qpow": 1, "tpow": 1}
        assert den["factors"] == [
            {"a": [1], "b": [1], "qpow": 5, "tpow": 6, "inert": False}
        ]
        assert den["poles"] == ["-1", "-5/6"]

    def test_phi(self):
        payload, code = run("phi", AnalysisRequest(c=2, d=3, c_weight=1, d_weight=1))
        assert code == 0
        assert payload["period"] == 4
        assert payload["states"] == [[2, 3], [2, 1], [1, 3], [2, 2], [2, 3]]
        assert payload["mins"] == [1, 1, 2, 2]
        assert payload["picks"] == [1, 1, 2, 1]
        assert (payload["min_sum"], payload["pick_sum"]) == (6, 5)


class TestMain:
    def test_json_to_stdout(self):
        rc, out, err = invoke(["poles", "-f", "x^2", "-g", "y^3"])
        assert rc == 0
        assert err == ""
        assert json.loads(out) == {"schema": SCHEMA, "poles": ["-1", "-5/6"]}

    def test_parse_error_json_on_stderr(self):
        rc, out, err = invoke(["poles", "-f", "x^$", "-g", "y^3"])
        assert rc == 1
        assert out == ""
        report = json.loads(err)
        assert report["error"]["type"] == "ParseError"
        assert report["error"]["position"] == 2

    def test_bad_prime_reports_value_error(self):
        rc, out, err = invoke(["count", "-f", "x^2", "-p", "0", "--depth", "2"])
        assert rc == 1
        assert json.loads(err)["error"]["type"] == "ValueError"

    def test_falsification_exit_code(self):
        rc, out, err = invoke(
            ["verify", "-f", "x^2", "-g", "y^3", "-p", "5", "--depth", "6", "--max-deg", "0"]
        )
        assert rc == 2
        assert json.loads(out)["ok"] is False

    def test_phi_tsv_table(self):
        rc, out, err = invoke(["phi", "-c", "2", "-d", "3", "--cw", "1", "--dw", "1", "--tsv"])
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0].split("\t") == ["step", "state_c", "state_d", "min", "pick"]
        assert lines[1].split("\t") == ["1", "2", "1", "1", "1"]
        assert lines[-2:] == ["min_sum\t6", "pick_sum\t5"]

    def test_count_tsv_table(self):
        rc, out, err = invoke(["count", "-f", "x^2", "-p", "5", "--depth", "4", "--tsv"])
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "m\tN_m"
        assert [l.split("\t")[1] for l in lines[1:]] == ["1", "5", "5", "25"]

    def test_poles_tsv(self):
        rc, out, err = invoke(["poles", "-f", "x^2", "-g", "y^3", "--tsv"])
        assert rc == 0
        assert out.strip().splitlines() == ["pole", "-1", "-5/6"]

    def test_tsv_not_available_for_spf(self):
        rc, out, err = invoke(["spf", "-f", "x", "-p", "5", "--tsv"])
        assert rc == 1
        assert json.loads(err)["error"]["type"] == "ValueError"
        assert "--tsv" in json.loads(err)["error"]["message"]

    def test_missing_required_poly(self):
        rc, out, err = invoke(["poles", "-f", "x^2"])
        assert rc == 1
        assert "requires" in json.loads(err)["error"]["message"]


@pytest.mark.skipif(shutil.which("igusa") is None, reason="console script not on PATH")
def test_console_script_end_to_end():
    proc = subprocess.run(
        ["igusa", "poles", "-f", "x^2", "-g", "y^3"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"schema": SCHEMA, "poles": ["-1", "-5/6"]}
