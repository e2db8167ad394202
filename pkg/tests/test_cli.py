import io
import json
import subprocess
import sys

import pytest

from minparadox.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


FIG4_CSV = """\
model,DNE,EFQ,LEM,DGP,PP,WLEM,WT,DGPimp
W1,1,1,1,1,1,1,1,1
W1_bot,0,0,1,1,1,1,1,1
W2,0,1,0,1,0,1,1,1
W2_bot,0,0,1,1,0,1,1,1
W2',0,0,1,1,0,1,0,1
W3,0,1,0,0,0,0,1,1
W3_bot,0,0,1,0,0,1,1,1
W3',0,0,1,0,0,1,0,0
W4,0,1,0,0,0,1,1,1
W4_bot,0,0,1,0,0,1,1,1
"""


def test_table_csv_golden():
    code, out, _ = call("table", "--models", "catalog", "--principles", "fig1", "--format", "csv")
    assert code == 0
    assert out == FIG4_CSV


def test_table_is_byte_identical_across_runs_and_jobs():
    a = call("table", "--models", "enumerate:3", "--format", "json")[1]
    b = call("table", "--models", "enumerate:3", "--format", "json", "--jobs", "2")[1]
    assert a == b
    data = json.loads(a)
    assert len(data["rows"]) == 37


def test_format_from_environment(monkeypatch):
    monkeypatch.setenv("MINPARADOX_FORMAT", "csv")
    assert call("table")[1] == FIG4_CSV


def test_prove_exit_codes():
    assert call("prove", "--goal", "p -> p")[0] == 0
    assert call("prove", "--goal", "bot -> p")[0] == 1
    assert call("prove", "--goal", "bot -> p", "--mode", "intuitionistic")[0] == 0
    code, out, _ = call("prove", "--assume", "p | ~p", "--assume", "bot -> p", "--goal", "~~p -> p")
    assert (code, out) == (0, "derivable\n")
    code, _, err = call("prove", "--goal", "p ->")
    assert code == 2 and "syntax error" in err


def test_prove_json():
    out = json.loads(call("prove", "--goal", "bot -> p", "--format", "json")[1])
    assert out == {"assumptions": [], "derivable": False, "goal": "bot -> p", "mode": "minimal"}


def test_eval_model_file(tmp_path):
    path = tmp_path / "w2.json"
    path.write_text(json.dumps({"worlds": ["1", "2"], "leq": [["1", "2"]], "Q": [], "valuation": {"P": ["2"]}}))
    assert call("eval", "--model", str(path), "--world", "1", "--formula", "~~P") == (0, "true\n", "")
    assert call("eval", "--model", str(path), "--world", "1", "--formula", "P")[:2] == (1, "false\n")


def test_eval_catalog_key_with_extent():
    code, out, _ = call("eval", "--model", "key:W2'", "--set", "P=2", "--world", "1", "--formula", "~P")
    assert (code, out) == (0, "true\n")
    code, _, err = call("eval", "--model", "key:W2", "--set", "P=1", "--formula", "P")
    assert code == 2 and "upward closed" in err


def test_eval_errors():
    assert call("eval", "--model", "key:W9", "--formula", "p")[0] == 2
    assert call("eval", "--model", "/no/such/file.json", "--formula", "p")[0] == 2
    assert call("eval", "--model", "W2", "--world", "7", "--formula", "p")[0] == 2


def test_classify_witness():
    code, out, _ = call("classify", "--model", "key:W3'", "--principles", "DGPimp,LEM")
    assert code == 0
    assert out.splitlines()[0].startswith("DGPimp     ✗  phi={1} psi={2}")
    assert out.splitlines()[1] == "LEM        ✓"
    data = json.loads(call("classify", "--model", "W2", "--principles", "LEM", "--format", "json")[1])
    assert data["verdicts"]["LEM"] == {"countermodel": {"phi": ["2"]}, "valid": False}


def test_separate():
    code, out, _ = call("separate", "--hold", "EFQ", "--fail", "WLEM")
    assert code == 0 and out == "Structure(worlds=['0', '1', '2'], order=['0<1', '0<2'], Q=[])\n"
    assert call("separate", "--hold", "DNE", "--fail", "EFQ") == (1, "none within 4 worlds\n", "")
    assert call("separate", "--hold", "LEM", "--fail", "LEM")[0] == 2
    assert call("separate", "--hold", "NOPE")[0] == 2
    code, out, _ = call("separate", "--hold", "EFQ", "--fail", "WLEM", "--dot")
    assert out.startswith('digraph "witness"')


def test_ledger_and_audit():
    code, out, _ = call("ledger")
    assert code == 0 and "PASS  PP⊢DGP" in out and "FAIL" not in out
    code, out, _ = call("audit-fig1")
    assert code == 0 and out.endswith("56/56 pairs settled\n")
    assert "PASS  LEM ⇒ WT: separated (W2')" in out


def test_experiments_report():
    code, out, _ = call("experiments")
    lines = out.splitlines()
    assert "PASS  Scott valid on all catalog models" in out
    assert "PASS  SmL valid on W2" in lines
    assert "PASS  SmL fails on W5" in lines
    # LEM holds on W3' and implies SmL, so the claimed refutation cannot be found
    assert "FAIL  SmL fails on W3'" in lines
    assert code == 1


def test_characterize():
    code, out, _ = call("characterize", "--max-worlds", "3")
    assert code == 1  # the diamond only appears with four worlds
    assert out.startswith("structures checked: 37")
    assert call("characterize", "--max-worlds", "9")[0] == 2


def test_catalog_listing():
    code, out, _ = call("catalog", "principles")
    assert code == 0 and "PP         ((φ ⟹ ψ) ⟹ φ) ⟹ φ" in out
    data = json.loads(call("catalog", "models", "--format", "json")[1])
    assert [m["key"] for m in data["models"]][:3] == ["W1", "W1_bot", "W2"]
    assert call("catalog", "--dot", "W4")[1].count("->") == 4


def test_usage_errors():
    assert call()[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("table", "--bogus")[0] == 2
    assert call("table", "--models", "enumerate:x")[0] == 2
    assert call("table", "--principles", "NOPE")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minparadox", "prove", "--goal", "p -> p"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "derivable\n"
