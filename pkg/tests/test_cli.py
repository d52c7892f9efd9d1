from __future__ import annotations

import json
import subprocess
import sys
import zipfile

import pytest

from conftest import SPEAK_IT_NL, SPEAK_IT_SAR

from sartool.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_prints_canonical_form(tmp_path, capsys):
    src = tmp_path / "a.sar"
    src.write_text("<complist>\n<button>   string0 </button> </complist>")
    code, out, _ = run(capsys, "parse", str(src))
    assert code == 0 and out == "<complist> <button> string0 </button> </complist>\n"


def test_parse_error_as_json(tmp_path, capsys):
    src = tmp_path / "a.sar"
    src.write_text("<complist> <button>")
    code, _, err = run(capsys, "parse", "--json", str(src))
    report = json.loads(err)
    assert code == 1 and report["ok"] is False
    assert report["diagnostics"][0]["code"] == "SYNTAX_ERROR"


def test_compile_with_unbound_placeholder(tmp_path, capsys):
    src = tmp_path / "a.sar"
    src.write_text("<complist> <button> string0 </button> </complist>")
    code, _, err = run(capsys, "compile", str(src), "-o", str(tmp_path / "a.aia"))
    assert code == 1 and "MISSING_LITERAL" in err
    assert not (tmp_path / "a.aia").exists()


def test_nl2sar_then_compile(tmp_path, capsys):
    (tmp_path / "in.txt").write_text(SPEAK_IT_NL)
    sar = tmp_path / "speak_it.sar"
    assert run(capsys, "nl2sar", str(tmp_path / "in.txt"), "-o", str(sar))[0] == 0
    assert sar.read_text() == SPEAK_IT_SAR + "\n"
    assert (tmp_path / "speak_it.sar.literals").read_text() == "string0\tSpeak\n"
    code, _, err = run(capsys, "compile", str(sar), "--literals", f"{sar}.literals", "-o", str(tmp_path / "speak_it.aia"))
    assert code == 0
    with zipfile.ZipFile(tmp_path / "speak_it.aia") as zf:
        assert '"AppName":"speak_it"' in zf.read("src/appinventor/ai_user/speak_it/Screen1.scm").decode()


def test_synth_then_split(tmp_path, capsys, monkeypatch):
    corpus = tmp_path / "c.tsv"
    assert run(capsys, "synth", "-n", "5000", "-o", str(corpus))[0] == 0
    assert len(corpus.read_text().splitlines()) == 5000
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "split", "8:1:1", "-i", str(corpus))
    assert code == 0 and out == "train\t4000\nvalid\t500\ntest\t500\n"
    for name, n in (("train", 4000), ("valid", 500), ("test", 500)):
        assert len((tmp_path / f"corpus.{name}.tsv").read_text().splitlines()) == n


def test_corpus_pipeline_has_no_failures(tmp_path, capsys):
    corpus, translated = tmp_path / "c.tsv", tmp_path / "t.tsv"
    run(capsys, "synth", "-n", "200", "--seed", "4", "-o", str(corpus))
    code, _, err = run(capsys, "nl2sar", "--corpus", str(corpus), "-o", str(translated))
    assert code == 0 and "exact match 200/200" in err
    code, _, err = run(capsys, "compile", "--corpus", str(translated), "-o", str(tmp_path / "apps"))
    assert code == 0 and "0 failures" in err
    assert len(list((tmp_path / "apps").glob("*.aia"))) == 200


def test_mutate_subcommand(tmp_path, capsys):
    corpus, mutated = tmp_path / "c.tsv", tmp_path / "m.tsv"
    run(capsys, "synth", "-n", "50", "-o", str(corpus))
    assert run(capsys, "synth", "mutate", "--rate", "0.1", "-i", str(corpus), "-o", str(mutated))[0] == 0
    before, after = corpus.read_text().splitlines(), mutated.read_text().splitlines()
    assert [l.split("\t")[1:] for l in before] == [l.split("\t")[1:] for l in after]
    assert before != after


def test_simulate(tmp_path, capsys):
    sar, lits, script = tmp_path / "a.sar", tmp_path / "a.lit", tmp_path / "s.txt"
    sar.write_text(SPEAK_IT_SAR)
    lits.write_text("string0\tSpeak\n")
    script.write_text('set textbox1 text "good morning"\nfire button1_clicked\n')
    code, out, _ = run(capsys, "simulate", str(sar), "--literals", str(lits), "--script", str(script))
    assert code == 0 and out == 'Spoke("good morning")\n'


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "sartool.cli", "nl2sar"], input="an app with a button",
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "<complist> <button> </complist>\n"
