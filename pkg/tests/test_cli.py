import json
import os
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cisupport.cimodule import is_free
from cisupport.cli.audit import audit_all
from cisupport.cli.config import RunConfig
from cisupport.cli.lang import (
    BinOp,
    Command,
    Context,
    Num,
    Pow,
    Var,
    _Parser,
    parse,
    parse_polynomial,
    print_poly,
    print_script,
)
from cisupport.cli.main import main
from cisupport.cli.randmod import random_module
from cisupport.cli.session import run, to_json
from cisupport.errors import ParseError, ScriptNameError
from cisupport.resolution import complexity

from conftest import make_ring

HEADER = "field 32003; ring Q[x, y]; ci (x^2, y^2);\n"


def _run_text(text, **kw):
    return run(parse(text), RunConfig(**kw))


def _write(tmp_path, text, name="s.cis"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# parsing ------------------------------------------------------------------------

def test_parse_valid_session():
    s = parse("field 101; ring Q[x,y]; ci (x^2, y^2); module M = coker [[x]];")
    assert len(s.statements) == 4 and s.commands == []


def test_parse_error_points_at_unclosed_bracket():
    with pytest.raises(ParseError) as err:
        parse("module M = coker [[x]")
    e = err.value
    assert e.line == 1 and e.col == 18
    assert "']'" in e.expected


def test_parse_error_reports_line_and_column():
    with pytest.raises(ParseError) as err:
        parse(HEADER + "module M = coker [[x]];\nbetti M M;")
    assert err.value.line == 3 and err.value.col == 9


def test_parse_command_ast():
    s = parse(HEADER + "module M = coker [[x]]; set X = V(t2); support M mod X;")
    assert s.commands == [Command("support", ("M",), Context("mod", "X"))]


@pytest.mark.parametrize("text", [
    HEADER + "betti M;",
    HEADER + "module M = k; module M = k;",
    HEADER + "module t1 = k;",
    HEADER + "module M = k; set X = empty; audit gar X mod M;",
])
def test_name_errors(text):
    with pytest.raises(ScriptNameError):
        parse(text)


def test_parse_polynomial_matches_ring_arithmetic():
    R = make_ring(2).Q
    x, y = R.gens()
    assert parse_polynomial("3*x^2*y - (x - y)^2", R) == 3 * x ** 2 * y - (x - y) ** 2
    with pytest.raises(ParseError):
        parse_polynomial("x +", R)


# round trip ---------------------------------------------------------------------

def _poly_ast():
    leaf = st.one_of(st.integers(0, 50).map(Num), st.sampled_from(["x", "y"]).map(Var))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(st.sampled_from("+-*"), sub, sub).map(lambda t: BinOp(*t)),
            st.tuples(sub, st.integers(1, 4)).map(lambda t: Pow(*t))),
        max_leaves=8)


@settings(max_examples=150, deadline=None)
@given(_poly_ast())
def test_poly_printer_round_trip(e):
    text = print_poly(e)
    parsed = _Parser(text).poly()
    assert print_poly(parsed) == text
    R = make_ring(2, 101).Q
    assert parse_polynomial(text, R) == parse_polynomial(print_poly(parsed), R)


MODS = ["k", "coker [[x]]", "coker [[x, y]] gens (1)", "free (0, -1)", "indicator (1, 1)",
        "random (1, 2, 1, 7)", "coker [[x*y], [y^2 - 3*x]]"]
DERIVED = ["sum({a}, {b})", "syz({a})", "syz({a}, 2)", "cosyz({a}, 1)"]
SETS = ["empty", "all", "V(t1)", "V(t1*t2, t1 - 2*t2)", "point (1, -1)"]
CMDS = ["betti {a}", "complexity {a}", "support {a}", "support {a} mod {X}", "pair {a} {b}",
        "topv {a}", "action {a}", "ext {a} {b}", "thick {a} mod {X}", "thick {a} level 1",
        "hom {a} {b} mod {X} shift 2", "reduce {a}", "audit gar {a} level 1",
        "audit murthy {a} {b} mod {X} from 2 alt ({b})", "audit symmetry {a} {b} mod {X}",
        "audit hw {a} {b}"]


@st.composite
def scripts(draw):
    lines = [HEADER.strip()]
    mods, sets = [], []
    for i in range(draw(st.integers(1, 4))):
        name = f"M{i}"
        if mods and draw(st.booleans()):
            body = draw(st.sampled_from(DERIVED)).format(a=draw(st.sampled_from(mods)),
                                                         b=draw(st.sampled_from(mods)))
        else:
            body = draw(st.sampled_from(MODS))
        lines.append(f"module {name} = {body};")
        mods.append(name)
    for i in range(draw(st.integers(1, 2))):
        lines.append(f"set X{i} = {draw(st.sampled_from(SETS))};")
        sets.append(f"X{i}")
    for _ in range(draw(st.integers(0, 5))):
        c = draw(st.sampled_from(CMDS))
        lines.append(c.format(a=draw(st.sampled_from(mods)), b=draw(st.sampled_from(mods)),
                              X=draw(st.sampled_from(sets))) + ";")
    return "\n".join(lines)


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(scripts())
def test_script_round_trip(text):
    s = parse(text)
    assert parse(print_script(s)) == s


def test_fixture_scripts_round_trip():
    from cisupport.cli.audit import fixture_text
    for name in ("F1", "F2", "F3"):
        s = parse(fixture_text(name))
        assert parse(print_script(s)) == s


# running ------------------------------------------------------------------------

def test_betti_report():
    reps, code = _run_text(HEADER + "module res = k; betti res;", window=6)
    assert code == 0
    assert reps[0]["result"]["betti"] == [1, 2, 3, 4, 5, 6, 7]
    assert list(reps[0]) == ["command", "inputs", "window", "seed", "result", "evidence", "flags"]


def test_audit_gar_report():
    reps, code = _run_text(HEADER + "module M = coker [[x]]; set X = V(t2); audit gar M mod X;")
    assert code == 0 and reps[0]["verdict"] == "PASS"


def test_module_error_is_serialized_with_exit_1():
    text = HEADER + "module Ax = coker [[x]]; module Ay = coker [[y]]; module S = sum(Ax, Ay);" \
                    "set X = V(t2); splitting Bad of S = Ay + Ax mod X; check Bad;"
    reps, code = _run_text(text)
    assert code == 1
    assert reps[-1]["error"]["type"] == "InvalidSplitting"


def test_inhomogeneous_declaration_stops_the_run():
    reps, code = _run_text(HEADER + "module M = coker [[x + y^2]]; betti M;")
    assert code == 1 and len(reps) == 1 and "error" in reps[0]


def test_window_below_minimum_is_usage_error(tmp_path, capsys):
    path = _write(tmp_path, HEADER + "module res = k; betti res;")
    assert main(["run", path, "--window", "5"]) == 2


def test_exit_codes_via_main(tmp_path, capsys):
    ok = _write(tmp_path, HEADER + "module res = k; betti res;", "ok.cis")
    assert main(["run", ok]) == 0
    undeclared = _write(tmp_path, HEADER + "betti M;", "undeclared.cis")
    assert main(["run", undeclared]) == 2
    assert "NameError" in capsys.readouterr().err
    broken = _write(tmp_path, "module M = coker [[x]", "broken.cis")
    assert main(["parse", "--check", broken]) == 2
    assert main(["parse", "--check", ok]) == 0
    assert main(["run", ok, "--budget", "3", "--window", "14"]) == 3
    assert main(["audit-all", "--fixtures", "F1", "--random", "0", "--mutate", "support-empty"]) == 1


def test_table_format_and_color(tmp_path, capsys, monkeypatch):
    path = _write(tmp_path, HEADER + "module M = coker [[x]]; set X = V(t2); audit gar M mod X;")
    monkeypatch.setenv("CISUPPORT_COLOR", "1")
    assert main(["run", path, "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "\x1b[32m" in out


def test_field_override():
    reps, _ = run(parse("field 101; ring Q[x]; ci (x^2); module res = k; betti res;"),
                  RunConfig(p=7, window=4))
    assert reps[-1]["result"]["betti"] == [1] * 5


def test_output_is_deterministic_across_processes(tmp_path):
    path = _write(tmp_path, HEADER + "module R = random (1, 2, 1, 11); module res = k; set E = empty;"
                                     "support R; audit murthy R res mod E;")
    outs = []
    for hashseed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        outs.append(subprocess.run([sys.executable, "-m", "cisupport.cli.main", "run", path, "--seed", "4"],
                                   capture_output=True, env=env, check=True).stdout)
    assert outs[0] == outs[1] and outs[0]
    for line in outs[0].decode().splitlines():
        json.loads(line)


# random modules -------------------------------------------------------------------

def test_random_module_is_deterministic(F2):
    a = random_module(F2, (1, 1, 1), 42)
    b = random_module(F2, (1, 1, 1), 42)
    assert a.pres == b.pres and a.gens == b.gens
    # a single linear relation a*x + b*y
    assert a.pres.shape == (1, 1) and a.pres.cols == (1,)


def test_random_module_with_no_columns_is_free(F2):
    assert is_free(random_module(F2, (2, 0, 1), 3))


@pytest.mark.parametrize("name", ["F1", "F2"])
def test_random_modules_respect_complexity_bound(fixtures, name):
    R = fixtures[name]
    for seed in range(10):
        assert complexity(random_module(R, ((seed % 2) + 1, 2, 1), seed)).cx <= R.c


# audit harness --------------------------------------------------------------------

def test_audit_all_mutation_yields_replayable_fail():
    reps, code = audit_all(RunConfig(random_per_ring=0), ("F2",), "support-empty")
    assert code == 1
    fails = [r for r in reps if r.get("verdict") == "FAIL"]
    assert fails and all(any("witness" in ev for ev in r["evidence"]) for r in fails)
    again, _ = audit_all(RunConfig(random_per_ring=0), ("F2",), "support-empty")
    assert [to_json(r) for r in again] == [to_json(r) for r in reps]


def test_audit_all_minimum_window_is_window_limited():
    reps, code = audit_all(RunConfig(window=8, random_per_ring=0))
    counts = reps[-1]["result"]["counts"]
    assert code == 0 and counts["FAIL"] == 0 and counts["WINDOW-LIMITED"] > 0
