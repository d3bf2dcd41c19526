import json
import subprocess
import sys

import pytest

from nmindep.cli import EXIT_FOUND, EXIT_OK, EXIT_USAGE, main
from nmindep.lang import Language, all_models
from nmindep.revision import Distance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_check_ranked_holds(capsys):
    code, data = run_json(capsys, "check", "--rule", "RatM", "--structure", "ranked3.json")
    assert code == EXIT_OK
    assert data["verdicts"][0]["holds"] and "|~" in data["verdicts"][0]["note"]


def test_check_nonranked_fails_with_witness(capsys):
    code, out, _ = run(capsys, "check", "--rule", "RatM", "--structure", "smooth_nonranked.json")
    assert code == EXIT_FOUND
    assert "witness" in out


def test_check_several_rules_and_size_rule(capsys):
    code, data = run_json(capsys, "check", "--rule", "CUM", "--rule", "M++(3)", "--structure", "ranked3.json")
    assert code == EXIT_OK
    assert [v["rule"] for v in data["verdicts"]] == ["CUM", "M++(3)"]


def test_check_unknown_rule(capsys):
    code, _, err = run(capsys, "check", "--rule", "NoSuchRule", "--structure", "ranked3.json")
    assert code == EXIT_USAGE and "NoSuchRule" in err


def test_check_bad_file(capsys, tmp_path):
    code, _, _ = run(capsys, "check", "--rule", "CUM", "--structure", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "check", "--rule", "CUM", "--structure", str(bad))
    assert code == EXIT_USAGE
    bad.write_text(json.dumps({"edges": []}))
    code, _, _ = run(capsys, "check", "--rule", "CUM", "--structure", str(bad))
    assert code == EXIT_USAGE


def test_missing_subcommand(capsys):
    code, _, _ = run(capsys)
    assert code == EXIT_USAGE


@pytest.mark.parametrize("name", ["mulmu1", "mulmu2", "mulmu3", "ranked-suite", "ghd-suite"])
def test_fixtures_pass(capsys, name):
    code, data = run_json(capsys, "fixtures", name)
    assert code == EXIT_OK
    assert data["claims"] and all(c["pass"] for c in data["claims"])


def test_fixture_mulmu3_claims(capsys):
    _, data = run_json(capsys, "fixtures", "mulmu3")
    claims = {c["claim"]: c["observed"] for c in data["claims"]}
    assert claims["interpolant over {q} exists"] and not claims["mu*1 supset holds"]


def test_unknown_fixture(capsys):
    code, _, _ = run(capsys, "fixtures", "mulmu9")
    assert code == EXIT_USAGE


@pytest.mark.parametrize("oracle", ["gh-rep", "big-small"])
def test_oracle_bound_two(capsys, oracle):
    code, out, _ = run(capsys, "oracle", oracle, "--bound", "2")
    assert code == EXIT_OK
    assert "0 divergences" in out


def test_oracle_guard(capsys):
    code, _, err = run(capsys, "oracle", "gh-rep", "--bound", "99")
    assert code == EXIT_USAGE and err


def test_oracle_records_stream(capsys):
    code, out, _ = run(capsys, "oracle", "gh-rep", "--bound", "1", "--records", "--json")
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    assert code == EXIT_OK
    assert any("structure" in r for r in lines)
    assert lines[-1]["divergences"] == 0


def test_oracle_ghd(capsys):
    code, data = run_json(capsys, "oracle", "ghd")
    assert code == EXIT_OK


def test_json_output_is_deterministic(capsys):
    argv = ("oracle", "gh-rep", "--bound", "2", "--json", "--records")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run(capsys, "fixtures", "mulmu1", "--json", "--output", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text())["fixture"] == "mulmu1"


def test_mu(capsys):
    code, data = run_json(capsys, "mu", "--structure", "ranked3.json", "--formula", "true")
    assert code == EXIT_OK
    assert data["mu"]["models"] == [[0, 0]]


def test_parse(capsys):
    code, data = run_json(capsys, "parse", "a | b", "--vars", "a,b")
    assert code == EXIT_OK
    assert data["models"]["models"] == [[0, 1], [1, 0], [1, 1]]


def test_parse_errors(capsys):
    code, _, err = run(capsys, "parse", "a &")
    assert code == EXIT_USAGE and "position 3" in err
    code, _, err = run(capsys, "parse", "c", "--vars", "a,b")
    assert code == EXIT_USAGE and "c" in err


def test_revise(capsys, tmp_path):
    kb = tmp_path / "kb.json"
    kb.write_text(json.dumps({"vars": ["a", "b"], "models": [[0, 0]]}))
    code, data = run_json(capsys, "revise", "--kb", str(kb), "--phi", "b")
    assert code == EXIT_OK
    assert data == {"models": {"vars": ["a", "b"], "models": [[0, 1]]}, "theory": "!a & b"}


def test_revise_with_distance_file(capsys, tmp_path):
    lang = Language(("a", "b"))
    # moving a is cheap, moving b is expensive
    d = Distance.from_callable(lang, lambda x, y: (x[0] != y[0]) + 5 * (x[1] != y[1]))
    (tmp_path / "d.json").write_text(json.dumps(d.to_json()))
    (tmp_path / "kb.json").write_text(json.dumps({"vars": ["a", "b"], "models": [[0, 0]]}))
    code, data = run_json(capsys, "revise", "--kb", str(tmp_path / "kb.json"), "--phi", "a | b",
                          "--distance", str(tmp_path / "d.json"))
    assert code == EXIT_OK and data["models"]["models"] == [[1, 0]]


def test_revise_unsatisfiable(capsys, tmp_path):
    kb = tmp_path / "kb.json"
    kb.write_text(json.dumps({"vars": ["a"], "models": [[0]]}))
    code, _, _ = run(capsys, "revise", "--kb", str(kb), "--phi", "a & !a")
    assert code == EXIT_USAGE


def problem(tmp_path, structure, phi="!q & !r", psi="!p & !q"):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({"blocks": {"J": ["p"], "J'": ["q"], "J''": ["r"]},
                                "phi": phi, "psi": psi, "structure": structure}))
    return str(path)


def test_interpolate_refuses_mulmu1(capsys, tmp_path):
    code, data = run_json(capsys, "interpolate", "--problem", problem(tmp_path, "mulmu1"))
    assert code == EXIT_FOUND
    assert data["interpolants by search"] == [] and "split" in data["witness"]


def test_interpolate_set_variant(capsys, tmp_path):
    comps = [{"carrier": [[0], [1]], "edges": [[[0], [1]]], "vars": [v]} for v in "pqr"]
    code, data = run_json(capsys, "interpolate", "--problem",
                          problem(tmp_path, {"set_variant": comps}, phi="!r", psi="!p"))
    assert code == EXIT_OK
    assert data["phi |~ theta"] and data["theta |~ psi"]


def test_interpolate_bad_problem(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"phi": "q"}))
    code, _, _ = run(capsys, "interpolate", "--problem", str(path))
    assert code == EXIT_USAGE


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nmindep", "parse", "p", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["formula"] == "p"
