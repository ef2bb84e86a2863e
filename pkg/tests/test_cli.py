import json
import subprocess
import sys

import pytest

from cglkit.catalog import builtin, save
from cglkit.cli import EXIT_CAP, EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_VALIDATION, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text, prefix="# "):
    return [line for line in text.splitlines() if not line.startswith(prefix)]


@pytest.mark.parametrize("command", ["validate", "dda", "hspec", "tauvel", "center"])
def test_weyl_commands_succeed(capsys, command):
    code, out, _ = call(capsys, command, "--catalog", "weyl_q")
    assert code == EXIT_OK
    assert out.startswith("# tool: cglkit")


def test_jordan_fails_validation(capsys):
    code, out, _ = call(capsys, "validate", "--catalog", "jordan")
    assert code == EXIT_VALIDATION
    assert "FAIL" in out
    code, _, err = call(capsys, "hspec", "--catalog", "jordan")
    assert code == EXIT_VALIDATION and "validation" in err


def test_unknown_catalog(capsys):
    code, _, err = call(capsys, "hspec", "--catalog", "nope")
    assert code == EXIT_USAGE and "unknown catalog" in err


def test_bad_flags_exit_with_usage_code():
    with pytest.raises(SystemExit) as info:
        run(["hspec", "--catalog", "weyl_q", "--jobs", "0"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit):
        run(["hspec"])


def test_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.cgl"
    path.write_text("n = 2\nlambda_exp = 0, -1; 1, 0\ndelta.2.1 = 1 +\nq_exp = 1, -1\ntorus_rank = 0\n")
    code, _, err = call(capsys, "validate", "--input", str(path))
    assert code == EXIT_PARSE
    assert "line 3" in err


def test_missing_input_file(capsys, tmp_path):
    code, _, _ = call(capsys, "validate", "--input", str(tmp_path / "missing.cgl"))
    assert code == EXIT_USAGE


def test_pair_cap(capsys):
    code, _, err = call(capsys, "hspec", "--catalog", "quantum_matrices_2", "--pair-cap", "1")
    assert code == EXIT_CAP and "pair cap" in err


def test_input_file_matches_catalog(capsys, tmp_path):
    path = tmp_path / "m.cgl"
    save(builtin("quantum_matrices_2x2"), path)
    _, from_file, _ = call(capsys, "hspec", "--input", str(path), "--format", "csv")
    _, from_catalog, _ = call(capsys, "hspec", "--catalog", "quantum_matrices_2x2", "--format", "csv")
    assert body(from_file) == body(from_catalog)


def test_hspec_csv(capsys):
    code, out, _ = call(capsys, "hspec", "--catalog", "weyl_q", "--format", "csv")
    assert code == EXIT_OK
    assert "# column stratum_dim: computed" in out
    assert body(out) == [
        "diagram,black,white,height,gk,stratum_dim,admissible,saturation_flag",
        "WW,0,2,0,2,0,true,false",
        "BW,1,1,1,1,1,true,false",
        "WB,1,1,,,,false,false",
        "BB,2,0,,,,false,false",
    ]


def test_hspec_json(capsys):
    code, out, _ = call(capsys, "hspec", "--catalog", "quantum_matrices_2", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["ok"]
    assert data["meta"]["n"] == 4
    assert sum(r["admissible"] for r in data["records"]) == 14
    assert data["poset"]["graded"]


def test_hspec_dot(capsys):
    code, out, _ = call(capsys, "hspec", "--catalog", "quantum_affine_2", "--format", "dot")
    assert code == EXIT_OK
    lines = body(out, "// ")
    assert lines[0].startswith("digraph quantum_affine_2")
    assert sum("->" in line for line in lines) == 4


def test_chain(capsys):
    code, out, _ = call(capsys, "chain", "--catalog", "quantum_matrices_2", "--diagram", "BBBB", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["length"] == 4


def test_chain_needs_diagram(capsys):
    code, _, _ = call(capsys, "chain", "--catalog", "weyl_q")
    assert code == EXIT_USAGE
    code, _, _ = call(capsys, "chain", "--catalog", "weyl_q", "--diagram", "BBB")
    assert code == EXIT_USAGE


def test_chain_of_rejected_diagram(capsys):
    code, out, _ = call(capsys, "chain", "--catalog", "weyl_q", "--diagram", "WB")
    assert code == 1 and "not admissible" in out


def test_tauvel_csv(capsys):
    code, out, _ = call(capsys, "tauvel", "--catalog", "weyl_q", "--format", "csv")
    rows = body(out)
    assert code == EXIT_OK
    assert rows[0].startswith("diagram,black,white,chain_length")
    assert len(rows) == 3


def test_center(capsys):
    code, out, _ = call(capsys, "center", "--catalog", "quantum_matrices_2", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["stratum_dim"] == 2


def test_dda_json(capsys):
    code, out, _ = call(capsys, "dda", "--catalog", "quantum_matrices_2", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["ok"]


def test_out_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = call(capsys, "hspec", "--catalog", "weyl_q", "--format", "csv", "--out", str(path))
    assert code == EXIT_OK and out == ""
    assert "WW,0,2" in path.read_text()


def test_jobs_do_not_change_output(capsys):
    outs = []
    for jobs in ("1", "2"):
        code, out, _ = call(capsys, "hspec", "--catalog", "quantum_matrices_2", "--format", "json", "--jobs", jobs)
        assert code == EXIT_OK
        outs.append(out)
    assert outs[0] == outs[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cglkit.cli", "validate", "--catalog", "jordan"], capture_output=True)
    assert proc.returncode == EXIT_VALIDATION
