import json
import subprocess
import sys

import pytest

from levikit import fixtures
from levikit.cli import main


def path(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_equal_not_equal(capsys):
    code, out, _ = run(capsys, "equal", path("hnn"), "[1] x", "x [1]")
    assert (code, out.strip()) == (1, "not-equal")


def test_equal_equal(capsys):
    code, out, _ = run(capsys, "equal", path("hnn"), "[2] x", "x [2]")
    assert (code, out.strip()) == (0, "equal")


def test_normal_form_two_edges(capsys):
    code, out, _ = run(capsys, "--json", "normal-form", path("hnn"), "x^-1 [1] x")
    assert code == 0
    data = json.loads(out)
    assert data["edge_count"] == 2
    assert data["text"] == "x^-1 [a] x"


def test_normal_form_category(capsys):
    code, out, _ = run(capsys, "normal-form", "--category", path("hnn"), "[a2] x [a] x")
    assert code == 0 and out.strip() == "x [a] x [a2]"
    code, _, err = run(capsys, "normal-form", "--category", path("hnn"), "x^-1")
    assert code == 3 and "x^-1" in err


def test_presentation(capsys):
    code, out, _ = run(capsys, "presentation", path("hnn"), "--shape", "hnn")
    assert (code, out.strip()) == (0, "⟨a, t | a^4, t^-1 a^2 t = a^2⟩")


def test_presentation_wrong_shape(capsys):
    code, _, err = run(capsys, "presentation", path("hnn"), "--shape", "amalgam")
    assert code == 3 and "WrongShape" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", path("amalgam"), "--base", "u", "--edges", "2")
    assert code == 0 and out.strip().splitlines()[-1] == "count: 10"
    code, out, _ = run(capsys, "--json", "enumerate", path("hnn"), "--base", "v", "--edges", "1")
    assert json.loads(out)["count"] == 20


def test_enumerate_unknown_base(capsys):
    code, _, err = run(capsys, "enumerate", path("hnn"), "--base", "nope", "--edges", "1")
    assert code == 3 and "nope" in err


@pytest.mark.parametrize("name", fixtures.NAMES)
def test_validate_and_classify(capsys, name):
    code, out, _ = run(capsys, "--json", "validate", path(name))
    data = json.loads(out)
    assert code == 0 and data["valid"]
    code, out, _ = run(capsys, "classify", path(name))
    assert out.strip() == data["class"]


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", path("collapse"), "--max-len", "2")
    assert code == 0
    assert "SS7: pass" in out and "LF1: pass" in out


def test_axioms_default_bound_from_env(capsys, monkeypatch):
    monkeypatch.setenv("LEVIKIT_MAX_LEN", "2")
    code, out, _ = run(capsys, "--json", "axioms", path("hnn"))
    data = json.loads(out)
    assert code == 0 and data["max_len"] == 2 and data["ok"]


def test_bad_env(capsys, monkeypatch):
    monkeypatch.setenv("LEVIKIT_MAX_LEN", "four")
    code, _, err = run(capsys, "embed-check", path("hnn"))
    assert code == 2 and "LEVIKIT_MAX_LEN" in err


def test_embed_check(capsys):
    code, out, _ = run(capsys, "embed-check", path("amalgam"), "--max-len", "3")
    assert code == 0 and "injective: pass" in out
    code, _, err = run(capsys, "embed-check", path("collapse"), "--max-len", "2")
    assert code == 3 and "RequiresIsomorphisms" in err


def test_greens(capsys):
    assert run(capsys, "greens", path("hnn"), "x", "[a] x", "--rel", "J")[0] == 0
    assert run(capsys, "greens", path("hnn"), "x", "[a] x", "--rel", "R")[0] == 1


def test_conjugate(capsys, tmp_path):
    s3 = "group S3: p123 p132 p213 p231 p312 p321\ntable S3:\n{table}vertex v group S3\nedge {e}: v -> v\ndom {e}: {g}\nmap {e}: {g} -> {g}\n"
    from levikit.groups import symmetric_group

    G = symmetric_group(3)
    table = "".join(" ".join(G.element_names[k] for k in row) + "\n" for row in G.table)
    a, b = tmp_path / "a.lrd", tmp_path / "b.lrd"
    a.write_text(s3.format(table=table, e="x", g="p213"))
    b.write_text(s3.format(table=table, e="y", g="p321"))
    code, out, _ = run(capsys, "--json", "conjugate", str(a), str(b), "--edges", "x=y")
    data = json.loads(out)
    assert code == 0 and data["conjugate"] and data["witness"][0]["to"] == "y"
    assert run(capsys, "conjugate", str(a), str(b), "--edges", "x:y")[0] == 0
    assert run(capsys, "conjugate", str(a), str(b), "--edges", "xy")[0] == 2
    assert run(capsys, "conjugate", str(a), str(b))[0] == 3


def test_not_conjugate_exit(capsys, tmp_path):
    text = fixtures.text("hnn")
    other = tmp_path / "other.lrd"
    other.write_text(text.replace("dom x: a2", "dom x: a").replace("map x: a2 -> a2", "map x: a -> a"))
    code, out, _ = run(capsys, "conjugate", path("hnn"), str(other))
    assert code == 1 and out.startswith("not-conjugate")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["equal", path("hnn")])
    assert info.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.lrd"))
    assert code == 2 and "cannot read" in err


def test_semantic_error_structured(capsys, tmp_path):
    bad = tmp_path / "bad.lrd"
    bad.write_text(fixtures.text("hnn").replace("map x: a2 -> a2", "map x: a2 -> zz"))
    code, _, err = run(capsys, "--json", "validate", str(bad))
    data = json.loads(err)
    assert code == 3 and data["error"] == "DiagramSemanticError" and "line" in data["message"]


def test_json_flag_after_subcommand(capsys):
    code, out, _ = run(capsys, "classify", "--json", path("hnn"))
    assert json.loads(out) == {"class": "serre"}


def test_json_is_stable(capsys):
    outs = {run(capsys, "--json", "enumerate", path("hnn"), "--base", "v", "--edges", "2")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "levikit", "equal", path("hnn"), "[1] x", "x [1]"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and proc.stdout.strip() == "not-equal"
