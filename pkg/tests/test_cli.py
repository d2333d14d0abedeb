import json
import subprocess
import sys
from pathlib import Path

import pytest

from shiftflow import paper_example
from shiftflow.cli import main, pair_json, parse_fn_obj, parse_pair_obj, parse_point_obj, point_json, run

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


def cli(*args):
    report, code, message, fmt = run(list(args))
    return report, code, message


@pytest.fixture
def pair_file(tmp_path):
    p = tmp_path / "pair.json"
    p.write_text(json.dumps(pair_json(paper_example())))
    return str(p)


class TestCheck:
    def test_valid(self):
        rep, code, _ = cli("check", d("golden-mean.json"))
        assert code == 0 and rep["valid"]

    def test_permutation(self):
        rep, code, _ = cli("check", d("permutation.json"))
        assert code == 1 and "condition (I) fails" in rep["diagnostic"]

    def test_malformed(self):
        rep, code, msg = cli("check", d("malformed.json"))
        assert code == 2 and rep is None and "malformed" in msg

    def test_missing_file(self):
        assert cli("check", d("nope.json"))[1] == 2

    def test_argparse_errors_are_parse_errors(self):
        assert cli("frobnicate")[1] == 2
        assert cli("zeta", d("full2.json"), "1", "--max-order", "x")[1] == 2

    def test_bad_bounds(self):
        assert cli("coe", "--example", "full2-goldenmean", "verify", "--depth", "0")[1] == 2


class TestInvariants:
    @pytest.mark.parametrize("name,desc,det,torsion", [
        ("full2.json", "0", "-1", []),
        ("full3.json", "Z/2", "-2", ["1"]),
        ("golden-mean.json", "0", "-1", []),
    ])
    def test_examples(self, name, desc, det, torsion):
        rep, code, _ = cli("invariants", d(name))
        assert code == 0
        assert rep["group"]["description"] == desc and rep["det"] == det
        assert rep["group"]["marked"]["torsion"] == torsion


class TestFloweq:
    def test_equivalent(self):
        rep, code, _ = cli("floweq", d("full2.json"), d("golden-mean.json"))
        assert code == 0 and rep["equivalent"]

    def test_not_equivalent(self):
        rep, code, _ = cli("floweq", d("full2.json"), d("full3.json"))
        assert code == 3 and rep["obstruction"].startswith("group mismatch")

    def test_reflexive_and_example(self):
        assert cli("floweq", d("full3.json"), d("full3.json"))[1] == 0
        assert cli("floweq", "--example", "full2-goldenmean")[1] == 0

    def test_orbit_bound(self, tmp_path):
        # both cokernels are Z/3, marked by 1 and 2; the search needs two elements
        p, q = tmp_path / "a.json", tmp_path / "b.json"
        p.write_text(json.dumps({"n": 3, "matrix": [[0, 1, 0], [1, 1, 1], [1, 1, 0]]}))
        q.write_text(json.dumps({"n": 3, "matrix": [[0, 0, 1], [1, 0, 1], [1, 1, 1]]}))
        rep, code, msg = cli("floweq", str(p), str(q), "--orbit-bound", "1")
        assert code == 4 and "OrbitBoundExceeded" in msg
        rep, code, _ = cli("floweq", str(p), str(q))
        assert code == 0 and rep["isomorphism"] == [{"prime": 3, "op": "scale", "coord": 0, "unit": 2}]


class TestZeta:
    def test_both(self):
        rep, code, _ = cli("zeta", d("golden-mean.json"), d("c2.json"), "--max-order", "6", "--method", "both")
        assert code == 0
        assert rep["series"]["coeffs"] == ["1", "2", "4", "8", "16", "32", "64"]
        assert rep["denominator"]["text"] == "1 - 2*t" and rep["match"] is True

    def test_constant(self):
        rep, code, _ = cli("zeta", d("full2.json"), "1", "--max-order", "4")
        assert rep["series"]["coeffs"] == ["1", "2", "4", "8", "16"]

    def test_not_order_unit(self):
        rep, code, msg = cli("zeta", d("golden-mean.json"), d("negative-cycle.json"))
        assert code == 5 and "NotOrderUnit" in msg


class TestCoe:
    def test_verify(self, pair_file):
        rep, code, _ = cli("coe", pair_file, "verify")
        assert code == 0 and rep["passed"] and rep["depth"] == 10 and rep["max_period"] == 8

    def test_verify_counterexample(self, tmp_path):
        obj = pair_json(paper_example())
        obj["l1"]["table"]["2"] = "1"
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(obj))
        rep, code, _ = cli("coe", str(p), "verify", "--depth", "3", "--max-period", "3")
        assert code == 6 and rep["counterexample"]["point"] == "(2)^inf"

    def test_psi(self):
        rep, code, _ = cli("coe", "--example", "full2-goldenmean", "psi", "1")
        assert code == 0 and rep["psi"]["table"] == {"1": "1", "2": "2"}

    def test_orbits(self):
        rep, code, _ = cli("coe", "--example", "full2-goldenmean", "orbits", "--max-period", "2")
        rows = {r["orbit"]["period"]: r for r in rep["rows"]}
        row = rows["2"]
        assert row["image"] == {"preperiod": "", "period": "1 2"}
        assert row["beta_psi_f"] == row["beta_f"] == "2"

    def test_unknown_action(self):
        assert cli("coe", "--example", "full2-goldenmean", "dance")[1] == 2


class TestSuspension:
    def test_eval(self):
        rep, code, _ = cli("suspension", d("golden-mean.json"), d("triplet-l2k2.json"), "eval", d("sp-21-0.json"), "1")
        assert code == 0
        assert rep["base"] == {"preperiod": "", "period": "2 1"} and rep["height"] == "0"
        rep, _, _ = cli("suspension", d("full2.json"), "standard", "eval", d("sp-1-0.json"), "5/2")
        assert rep["base"]["period"] == "1" and rep["height"] == "1/2" and rep["steps_n"] == 2

    def test_length(self):
        rep, code, _ = cli("suspension", d("golden-mean.json"), d("triplet-l2k2.json"), "length", d("orbit-12.json"))
        assert code == 0 and rep["length"] == "1"

    def test_equiv(self):
        rep, code, _ = cli("suspension", d("golden-mean.json"), d("triplet-l2k2.json"), "equiv",
                           '{"point": {"preperiod": "", "period": "2 1"}, "height": "1"}', d("sp-21-0.json"))
        assert code == 0 and rep["equivalent"] is True

    def test_retime(self):
        rep, code, _ = cli("suspension", d("full2.json"), "standard", "retime", "1")
        assert code == 0 and set(rep["triplet"]["b"]["table"].values()) == {"1"}

    def test_below_base(self):
        tri = '{"l": "2", "k": "1", "b": "1"}'
        rep, code, msg = cli("suspension", d("full2.json"), tri, "eval",
                             '{"point": {"preperiod": "", "period": "1"}, "height": "1/2"}', "0")
        assert code == 7 and "BelowBase" in msg


class TestOutput:
    def test_deterministic_bytes(self):
        args = [sys.executable, "-m", "shiftflow.cli", "coe", "--example", "full2-goldenmean", "orbits",
                "--max-period", "4"]
        a = subprocess.run(args, capture_output=True, text=True)
        b = subprocess.run(args, capture_output=True, text=True)
        assert a.returncode == 0 and a.stdout == b.stdout and a.stderr == "" and b.stderr == ""

    def test_no_stderr_on_success(self, capsys):
        assert main(["invariants", d("full3.json")]) == 0
        out = capsys.readouterr()
        assert out.err == "" and json.loads(out.out)["det"] == "-2"

    def test_text_format(self, capsys):
        assert main(["--format", "text", "invariants", d("full3.json")]) == 0
        assert "det: -2" in capsys.readouterr().out
        assert main(["invariants", d("full3.json"), "--format", "text"]) == 0
        assert "group.description: Z/2" in capsys.readouterr().out

    def test_keys_sorted_and_no_floats(self, capsys):
        main(["zeta", d("golden-mean.json"), d("c2.json"), "--method", "both"])
        text = capsys.readouterr().out
        obj = json.loads(text)
        assert json.dumps(obj, sort_keys=True, indent=2) == text.strip()

        def walk(v):
            assert not isinstance(v, float)
            if isinstance(v, dict):
                for x in v.values():
                    walk(x)
            elif isinstance(v, list):
                for x in v:
                    walk(x)
        walk(obj)

    def test_round_trips(self):
        P = paper_example()
        P2 = parse_pair_obj(json.loads(json.dumps(pair_json(P))))
        assert P2 == P
        assert (P2.k1, P2.l1, P2.k2, P2.l2) == (P.k1, P.l1, P.k2, P.l2)
        rep, _, _ = cli("coe", "--example", "full2-goldenmean", "psi", "1")
        f = parse_fn_obj(P.A, rep["psi"])
        assert f == P.c1
        rep, _, _ = cli("suspension", d("golden-mean.json"), d("triplet-l2k2.json"), "eval", d("sp-21-0.json"), "3/2")
        x = parse_point_obj(P.B, rep["base"])
        assert point_json(x) == rep["base"]
