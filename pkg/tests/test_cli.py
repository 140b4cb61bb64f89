import json

import pytest

from schurkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys, corpus_dir):
    code, out, _ = run(capsys, "parse", str(corpus_dir / "m27.txt"))
    assert code == 0 and "generators a b" in out


def test_analyze_json(capsys, corpus_dir):
    code, out, _ = run(capsys, "--json", "analyze", str(corpus_dir / "c3wrc3.txt"))
    data = json.loads(out)
    assert code == 0 and data["predicates"]["maximal_class"]
    assert data["fundamental_subgroup"]["index"] == 3


def test_global_flag_after_subcommand(capsys, corpus_dir):
    code, out, _ = run(capsys, "analyze", "--json", str(corpus_dir / "c27.txt"))
    assert code == 0 and json.loads(out)["predicates"]["order"] == 27


def test_nq(capsys, tmp_path):
    f = tmp_path / "f2.txt"
    f.write_text("generators a b\n")
    code, out, _ = run(capsys, "--json", "nq", "--class", "3", str(f))
    assert code == 0 and json.loads(out)["hirsch_length"] == 5


def test_identities(capsys):
    code, out, _ = run(capsys, "verify-identities", "eq1.1", "class5:4", "--trials", "5")
    assert code == 0 and "eq1.1: pass" in out


@pytest.mark.parametrize("lemma", ["mann", "hall", "lemma1.1", "lemma2.4"])
def test_check(capsys, corpus_dir, lemma):
    code, out, _ = run(capsys, "check", lemma, str(corpus_dir / "c3wrc3.txt"))
    assert code == 0 and out


def test_multiplier_both(capsys, corpus_dir):
    code, out, _ = run(capsys, "multiplier", "--method", "both", str(corpus_dir / "heisenberg27.txt"))
    assert code == 0 and "agree: True" in out


def test_verdict_and_exterior(capsys, corpus_dir):
    code, out, _ = run(capsys, "verdict", "--claim", "thm2.5", str(corpus_dir / "m27.txt"))
    assert code == 0 and "divides = True" in out
    code, out, _ = run(capsys, "exterior", str(corpus_dir / "m27.txt"))
    assert code == 0 and "|G^G| = 3" in out


def test_oracle(capsys, corpus_dir):
    code, out, _ = run(capsys, "oracle", "h2", str(corpus_dir / "c3cubed.txt"))
    assert code == 0 and "Z/3 + Z/3 + Z/3" in out


def test_corpus_output_file(capsys, corpus_dir, tmp_path):
    dest = tmp_path / "r.json"
    code, _, _ = run(capsys, "corpus", "run", str(corpus_dir), "--filter", "c27", "--format", "json",
                     "--output", str(dest))
    assert code == 0 and json.loads(dest.read_text())["totals"]["entries"] == 1


def test_config_file(capsys, corpus_dir, tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("json = true\nseed = 4\n")
    code, out, _ = run(capsys, "--config", str(cfg), "parse", str(corpus_dir / "c27.txt"))
    assert code == 0 and json.loads(out)["name"]


def test_errors_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("generators a\nrelators a^^\n")
    code, _, err = run(capsys, "parse", str(f))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "parse", str(tmp_path / "missing.txt"))
    assert code == 2
