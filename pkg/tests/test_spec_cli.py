import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from prismlab import cli
from prismlab.runner import run
from prismlab.spec_parser import SpecError, parse_spec, render

ROOT = Path(__file__).resolve().parent.parent
DEMO = ROOT / "demos" / "node.prism"
SCHEMA = json.loads((ROOT / "docs" / "report_schema.json").read_text())


def parse_error(text):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    return info.value


def test_demo_parses():
    s = parse_spec(DEMO.read_text())
    assert set(s.rings) == {"N", "A"}
    assert s.ideals["I"].gens == ("x*y",)
    assert s.crystals["C"].rank == 2
    assert len(s.tasks) == 15
    assert s.e == 2 and s.W == 3


def test_undeclared_ring_points_at_reference():
    err = parse_error('ring N { vars = [x:1] }\nideal I in M { gens = ["x"] }\n')
    assert (err.kind, err.line, err.col) == ("resolution", 2, 12)


def test_expression_error_has_column_inside_string():
    err = parse_error('ring N { vars = [x:1] }\nideal I in N { gens = ["x*"] }\n')
    assert (err.kind, err.line, err.col) == ("syntax", 2, 27)
    assert str(err).startswith("2:27: syntax error")


@pytest.mark.parametrize("text", [
    'ring N { vars = [x:1] }\ntask bogus { input = N }\n',
    'ring N { vars = [x:1] }\ntask envelope { e = 2 }\n',
    'ring N { vars = [x:1] ',
    'ring N { vars = [x:1] }\nring N { vars = [y:1] }\n',
    'ring N { vars = [x:1] }\ntask envelope { input = N, e = "2" }\n',
])
def test_malformed_specs_are_rejected(text):
    parse_error(text)


def test_demo_render_round_trip():
    s = parse_spec(DEMO.read_text())
    assert parse_spec(render(s)) == s
    assert render(parse_spec(render(s))) == render(s)


monos = st.lists(st.sampled_from(["x", "y", "x*y", "x^2", "2*y", "1/3*x*y^2"]), min_size=0, max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 6), st.lists(monos, max_size=3),
       st.sampled_from(["envelope", "hodge_tate", "split", "psi_check"]))
def test_round_trip_random_specs(e, W, gens, kind):
    lines = [f"base {{ trunc = {e}, weight_max = {W} }}", "ring R { vars = [x:1, y:2] }"]
    for n, g in enumerate(gens):
        body = ", ".join(f'"{m}"' for m in g)
        lines.append(f"ideal I{n} in R {{ gens = [{body}] }}")
        lines.append(f"task {kind} {{ input = I{n} }}")
    s = parse_spec("\n".join(lines) + "\n")
    assert parse_spec(render(s)) == s


def test_empty_task_list_echoes_spec():
    s = parse_spec("ring R { vars = [x:1] }\n")
    rep = run(s)
    st_ = rep.stable()
    assert st_["tasks"] == [] and st_["summary"]["exit_code"] == 0
    assert st_["spec"]["rings"] == [{"name": "R", "vars": [["x", 1]]}]


def test_hodge_tate_task_on_line():
    s = parse_spec("ring R { vars = [x:1] }\ntask hodge_tate { input = R, e = 2, W = 3 }\n")
    o = run(s).outcomes[0]
    assert o.status == "ok" and o.verdict == "pass"


def _cli(tmp_path, text, *extra, env=None):
    spec = tmp_path / "s.prism"
    spec.write_text(text)
    out = tmp_path / "r.json"
    code = cli.main(["run", str(spec), "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_exit_codes(tmp_path):
    code, rep = _cli(tmp_path, "ring R { vars = [x:1] }\ntask hodge_tate { input = R }\n")
    assert code == 0 and rep["stable"]["summary"]["failed"] == 0
    code, rep = _cli(tmp_path, "ring R { vars = [x:1] \n")
    assert code == 2
    # decalage on a singular input without demonstrate is refused -> task error -> exit 3
    text = 'ring N { vars = [x:1, y:1] }\nideal I in N { gens = ["x*y"] }\ntask decalage { input = I }\n'
    code, rep = _cli(tmp_path, text)
    assert code == 3
    assert rep["stable"]["tasks"][0]["status"] == "error"


def test_parse_error_message_format(tmp_path, capsys):
    spec = tmp_path / "bad.prism"
    spec.write_text('ring N { vars = [x:1] }\nideal I in N { gens = ["x*"] }\n')
    assert cli.main(["run", str(spec), "--out", "-"]) == 2
    assert f"{spec}:2:27: syntax error" in capsys.readouterr().err


def test_pair_budget(tmp_path, monkeypatch):
    text = 'ring N { vars = [x:1, y:1] }\nideal I in N { gens = ["x*y"] }\ntask envelope { input = I, e = 3, W = 5 }\n'
    monkeypatch.setenv("PRISMLAB_PAIR_BUDGET", "1")
    code, rep = _cli(tmp_path, text)
    assert rep["stable"]["tasks"][0]["status"] == "budget-exceeded"
    assert rep["stable"]["options"]["pair_budget"] == 1
    assert code == 0
    monkeypatch.setenv("PRISMLAB_PAIR_BUDGET", "lots")
    code, _ = _cli(tmp_path, text)
    assert code == 2


def test_overrides_are_recorded(tmp_path):
    code, rep = _cli(tmp_path, "ring R { vars = [x:1] }\ntask hodge_tate { input = R }\n",
                     "--trunc", "3", "--weight-max", "2")
    assert code == 0
    assert rep["stable"]["spec"]["base"]["trunc"] == 3
    assert rep["stable"]["tasks"][0]["params"]["e"] == 3


def test_demo_report_matches_schema_and_is_deterministic(tmp_path):
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"r{threads}.json"
        assert cli.main(["run", str(DEMO), "--out", str(out), "--verify", "--threads", threads]) == 0
        rep = json.loads(out.read_text())
        jsonschema.validate(rep, SCHEMA)
        outs.append(json.dumps(rep["stable"], sort_keys=True))
    assert outs[0] == outs[1]


def test_console_script_subprocess(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "prismlab.cli", "run", str(DEMO), "--out", str(out),
                           "--stable-only"], capture_output=True, text=True, env=dict(os.environ))
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["tool"] == "prismlab"
    assert "[0] envelope:" in proc.stderr
