import csv
import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import equivalent
from automata.io import load_automaton, save_automaton
from main import AppConfig, bound_table, main
from theorems import prelude_environment


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("RTM_OUTPUT_DIR", str(tmp_path / "out"))
    monkeypatch.setenv("RTM_LOG_LEVEL", "WARNING")
    return tmp_path / "out"


# -----------------------------
# sum
# -----------------------------

@pytest.mark.parametrize(
    "argv, expected",
    [
        (["sum", "f", "3", "0", "8"], "6"),
        (["sum", "f", "3", "0", "0"], "0"),
        (["sum", "g", "3", "0", "2"], "2"),
        (["sum", "f", "5", "1", "7"], "-5"),
    ],
)
def test_sum(argv, expected, capsys, out_dir):
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == expected


def test_sum_rejects_bad_residue(capsys, out_dir):
    assert main(["sum", "f", "3", "5", "8"]) == 1
    assert "error" in capsys.readouterr().err


# -----------------------------
# config
# -----------------------------

def test_config_from_environment(monkeypatch):
    monkeypatch.setenv("RTM_SEED", "7")
    monkeypatch.setenv("RTM_INFER_START", "256")
    config = AppConfig()
    assert config.seed == 7
    assert config.inference().start == 256
    assert config.inference().learner.seed == 7


def test_config_rejects_nonpositive_limits(monkeypatch):
    monkeypatch.setenv("RTM_SWEEP_BASE4", "0")
    with pytest.raises(ValueError):
        AppConfig()


# -----------------------------
# verify / query
# -----------------------------

def test_verify_unknown_theorem(out_dir):
    with pytest.raises(SystemExit) as info:
        main(["verify", "thm99"])
    assert info.value.code == 2


def test_verify_numeric_theorem(capsys, out_dir, monkeypatch):
    monkeypatch.setenv("RTM_BND_N_MAX", "2000")
    assert main(["verify", "thm2"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("PASS")
    assert (out_dir / "reports" / "thm2.txt").exists()
    assert (out_dir / "reports" / "thm2.json").exists()


def test_query_empty_file(tmp_path, capsys, out_dir):
    script = tmp_path / "empty.txt"
    script.write_text("")
    assert main(["query", str(script)]) == 0
    assert capsys.readouterr().out == ""


def test_query_verdicts(tmp_path, capsys, out_dir):
    script = tmp_path / "q.txt"
    script.write_text('eval yes "?msd_4 An n>=0":\neval pow "?msd_4 Ex $pow4(x) & x=16":\n')
    assert main(["query", str(script)]) == 0
    assert capsys.readouterr().out.splitlines() == ["yes: TRUE", "pow: TRUE"]


def test_query_false_verdict_fails(tmp_path, capsys, out_dir):
    script = tmp_path / "q.txt"
    script.write_text('eval no "?msd_4 En n<0":\n')
    assert main(["query", str(script)]) == 1
    assert capsys.readouterr().out.strip() == "no: FALSE"


def test_query_induction_script(capsys, out_dir, store):
    save_automaton(store.get("f30"), out_dir / "automata" / "f30.txt")
    script = Path(__file__).parent.parent / "scripts" / "f30_induction.txt"
    assert main(["query", str(script)]) == 0
    assert capsys.readouterr().out.splitlines() == [f"test30_{k}: TRUE" for k in range(1, 7)]


def test_query_def_holding_a_morphism(tmp_path, capsys, out_dir):
    script = tmp_path / "tm.txt"
    script.write_text('def tm4 "0->0110 1->1001":\npromote T4 tm4:\neval odd "?msd_4 T4[7]=@1":\n')
    assert main(["query", str(script)]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "odd: TRUE"


def test_query_parse_error(tmp_path, capsys, out_dir):
    script = tmp_path / "bad.txt"
    script.write_text('eval broken "An (n>=0":\n')
    assert main(["query", str(script)]) == 1
    assert "line 1" in capsys.readouterr().err


# -----------------------------
# export / table / infer
# -----------------------------

def test_export_text_round_trip(capsys, out_dir):
    assert main(["export", "p34", "--format", "txt"]) == 0
    path = Path(capsys.readouterr().out.strip())
    assert path == out_dir / "p34.txt"
    assert equivalent(load_automaton(path), prelude_environment().automaton("p34"))


def test_export_dot(tmp_path, capsys, out_dir):
    target = tmp_path / "tm4.dot"
    assert main(["export", "TM4", "--output", str(target)]) == 0
    assert target.read_text().lstrip().startswith("digraph")


def test_export_missing_name(capsys, out_dir):
    assert main(["export", "nothing_here"]) == 1
    assert "unbound" in capsys.readouterr().err


def test_table(capsys, out_dir):
    assert main(["table", "f30", "--n-max", "100"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["n", "h", "pseudopower", "lower", "upper", "ratio"]
    assert rows[1][5] == ""
    assert rows[2][5] == "1.0"
    assert rows[88][:2] == ["87", "55"]
    assert len(rows) == 102


def test_bound_table_pseudopower_column():
    rows = bound_table("f30", 3)
    assert [r[2] for r in rows] == ["0", "1", "2", "4"]


def test_infer_zero_self_test(capsys, out_dir, monkeypatch):
    monkeypatch.setenv("RTM_INFER_START", "64")
    assert main(["infer", "zero"]) == 0
    assert capsys.readouterr().out.strip() == "zero: 1 states"
    assert (out_dir / "automata" / "zero.txt").exists()
