from __future__ import annotations

import json

from drwitt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_drw_eval(capsys):
    code, out = run(capsys, "drw", "eval", "-p", "2", "-r", "1", "--depth", "1", "-m", "2", "d(T(t))")
    data = json.loads(out)
    assert code == 0
    (comp,) = data["form"]["components"]
    assert comp["n"] == 2 and comp["s"] == 0 and comp["a"] is None
    assert comp["b"]["coords"] == [[1], [0]]
    assert data["context"] == {"p": 2, "r": 1, "depth": 1, "m": 2, "vars": ["t"]}


def test_swan(capsys):
    code, out = run(capsys, "swan", "-p", "2", "-m", "1", "--depth", "1", "--expr", "T(t^-3)")
    data = json.loads(out)
    assert code == 0 and data["sw"] == 3 and data["rsw_modulus"] == 2


def test_rsw_of_tame_input_is_rejection(capsys):
    code, out = run(capsys, "rsw", "-p", "3", "-m", "1", "--expr", "T(t^3)")
    assert code == 1 and json.loads(out)["error"] == "TameInput"


def test_exit_codes(capsys):
    code, out = run(capsys, "cartier", "apply", "-p", "3", "-m", "2", "T(t)")
    assert code == 1 and json.loads(out)["error"] == "NotInZ1"
    code, out = run(capsys, "drw", "eval", "-p", "3", "-m", "2", "T(t")
    data = json.loads(out)
    assert code == 2 and data["error"] == "SyntaxError" and data["column"] == 4
    code, out = run(capsys, "drw", "eval", "-m", "2", "T(t)")
    assert code == 2
    code, out = run(capsys, "frobnicate")
    assert code == 2
    code, out = run(capsys, "verify", "--suite", "no-such")
    assert code == 2 and json.loads(out)["error"] == "UnknownSuite"


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "ctx.cfg"
    cfg.write_text("# context\np = 5\nm = 2\ndepth = 1\n")
    code, out = run(capsys, "fil", "level", "--config", str(cfg), "T(t^-1)")
    data = json.loads(out)
    assert code == 0 and data["level"] == 5 and data["context"]["p"] == 5
    code, out = run(capsys, "fil", "level", "--config", str(cfg), "-p", "3", "T(t^-1)")
    assert json.loads(out)["level"] == 3
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    code, _ = run(capsys, "fil", "level", "--config", str(bad), "T(t)")
    assert code == 2


def test_json_input_roundtrip(tmp_path, capsys):
    code, out = run(capsys, "drw", "eval", "-p", "3", "-m", "2", "--depth", "2", "T(u*t^-2)*dlog(u) + d(V(T(t^-1)))")
    form = json.loads(out)["form"]
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"form": form}))
    code, out = run(capsys, "drw", "eval", "-p", "3", "-m", "2", "--depth", "2", "--input", str(path))
    assert code == 0 and json.loads(out)["form"] == form


def test_other_commands(capsys):
    code, out = run(capsys, "witt", "add", "-p", "2", "-m", "2", "--a", "t^-1, 0", "--b", "t^-1, 0")
    coords = json.loads(out)["result"]["coords"]
    assert code == 0 and coords[0]["terms"] == [] and coords[1]["terms"] == [[-2, [1]]]
    code, out = run(capsys, "witt", "best-form", "-p", "2", "-m", "1", "--a", "t^-2")
    assert code == 0 and json.loads(out)["level"] == 1
    code, out = run(capsys, "fil", "gr", "-p", "2", "-m", "2", "-n", "1")
    assert code == 0 and json.loads(out)["s"] == 1
    code, out = run(capsys, "fil", "member", "-p", "2", "-m", "2", "--witt", "t^-1, 0", "-n", "1")
    assert code == 0 and json.loads(out)["member"] is False
    code, out = run(capsys, "cartier", "z1", "-p", "3", "-m", "2", "dlog(t)")
    assert code == 0 and json.loads(out)["z1"] is True
    code, out = run(capsys, "cartier", "zb", "-p", "3", "-m", "1", "-i", "1", "d(T(t^-1))")
    assert code == 0 and json.loads(out)["B"] is True
    code, out = run(capsys, "gen-polys", "-p", "2", "-m", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ghost_check"] is True
    code, out = run(capsys, "drw", "eval", "-p", "3", "-m", "1", "--pretty", "T(t^-1)*dlog(t)")
    assert code == 0 and out.strip() == "t^-1*dlog(t)"


def test_verify_reports_are_reproducible(capsys, tmp_path):
    args = ["verify", "--suite", "goodness", "--seed", "7", "--samples", "5"]
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["passed"] is True
    code, out = run(capsys, "verify", "--suite", "cartier", "--samples", "5", "--mutation", "flip-C",
                    "--lengths", "1", "--primes", "3")
    data = json.loads(out)
    assert code == 1 and not data["passed"]
    assert any(e["counterexample"] for e in data["laws"])
    code, out = run(capsys, "verify", "--suite", "witt-ring", "--primes", "2", "--samples", "2")
    assert code == 2
    code, out = run(capsys, "verify", "--suite", "witt-ring", "--experimental-p2", "--primes", "2",
                    "--samples", "2", "--lengths", "1,2")
    assert code == 0
