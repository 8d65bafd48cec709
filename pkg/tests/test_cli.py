import io
import json
import subprocess
import sys
from importlib.resources import files
from pathlib import Path

import pytest

from depgram.cli import CliConfig, UsageError, main, run
from helpers import FIGURES, figure_text

FIG = files("depgram.data.figures")
GRAMMARS = Path(__file__).parent / "grammars"


def fig(name):
    return str(FIG / f"{name}.fdg")


def call(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = call(capsys, "validate", fig("gapping_lecture"))
    assert (code, out) == (0, "axioms: ok\n")


def test_validate_reports_violations(capsys, tmp_path):
    bad = tmp_path / "bad.fdg"
    bad.write_text('<a>\n\t"a" #1 subj:>2\n<b>\n\t"b" #2 subj:>1\n')
    code, out, _ = call(capsys, "validate", str(bad))
    assert code == 1 and out.startswith("axioms: Cycle [1, 2]")


def test_projectivity(capsys):
    code, out, _ = call(capsys, "projectivity", fig("what_would_you_like"))
    assert code == 0
    assert "projective: no" in out and "crossing: obj(do->What) x main(ROOT->like)" in out
    code, _, _ = call(capsys, "projectivity", "--require-projective", fig("what_would_you_like"))
    assert code == 1
    code, out, _ = call(capsys, "projectivity", "--require-projective", fig("dog_was_running"))
    assert code == 0 and "projective: yes" in out


def test_report_mode_keeps_input_order(capsys, tmp_path, monkeypatch):
    stream = "\n".join(figure_text(n) for n in FIGURES)
    for jobs in ("1", "2"):
        code, out, _ = call(capsys, "projectivity", "--report", "json-lines", "--jobs", jobs,
                            stdin=stream, monkeypatch=monkeypatch)
        records = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and len(records) == len(FIGURES)
        assert [r["projective"] for r in records] == [n != "what_would_you_like" for n in FIGURES]
        lines = [r["line"] for r in records]
        assert lines == sorted(lines)


@pytest.mark.parametrize("grammar", sorted(GRAMMARS.glob("*.dg")), ids=lambda p: p.stem)
def test_equiv(capsys, grammar):
    code, out, _ = call(capsys, "equiv", "--grammar", str(grammar), "--max-len", "8")
    assert code == 0 and out.startswith("equal")


def test_lang(capsys):
    code, out, _ = call(capsys, "lang", "--grammar", str(GRAMMARS / "transitive.dg"), "--max-len", "3")
    assert out.splitlines() == ["Bill loves Bill", "Bill loves Mary", "Mary loves Bill", "Mary loves Mary"]
    code, via_cfg, _ = call(capsys, "lang", "--grammar", str(GRAMMARS / "transitive.dg"),
                            "--max-len", "3", "--via", "cfg")
    assert via_cfg == out


def test_parse(capsys, monkeypatch):
    grammar = str(GRAMMARS / "pp_attachment.dg")
    code, out, _ = call(capsys, "parse", "--grammar", grammar, "--report", "json-lines",
                        stdin="I saw man with telescope\nsaw I\n", monkeypatch=monkeypatch)
    first, second = (json.loads(x) for x in out.splitlines())
    assert first["parses"] == 2 and not second["recognized"] and code == 1
    code, out, _ = call(capsys, "parse", "--grammar", grammar, "--cap", "1",
                        stdin="I saw man with telescope\n", monkeypatch=monkeypatch)
    assert code == 0 and out.count("main:>0") == 1


def test_segment(capsys, monkeypatch):
    code, out, _ = call(capsys, "segment", stdin="Did/AUX the/DET dog/N run/V in/PREP the/DET house/N\n",
                        monkeypatch=monkeypatch)
    assert code == 0
    assert out.splitlines()[0] == "#1\tDid run\trun\tAUX V\tchain"


def test_expand(capsys):
    code, out, _ = call(capsys, "expand", "--format", "text", fig("bill_and_john"))
    assert (code, out) == (0, "Bill love Mary\nJohn love Mary\n")
    code, out, _ = call(capsys, "expand", fig("gapping_lecture"))
    assert code == 0 and out.count("main:>0") == 2


def test_expand_cap_is_a_finding(capsys):
    code, _, err = call(capsys, "expand", "--cap", "3", fig("coordinated_elements"))
    assert code == 1 and "CombinatorialBound" in err


def test_convert_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "convert", fig("dog_was_running"))
    assert code == 0 and json.loads(out)["sentence"][0] == "The"
    js = tmp_path / "t.json"
    js.write_text(out)
    code, back, _ = call(capsys, "convert", str(js))
    assert back == figure_text("dog_was_running")


def test_render(capsys):
    code, out, _ = call(capsys, "render", "--format", "dot", fig("coordinated_elements"))
    assert code == 0 and "style=dashed" in out
    code, out, _ = call(capsys, "render", fig("what_would_you_like"))
    assert "crossing:" in out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    assert main(["validate", fig("jack_painted"), "-o", str(target)]) == 0
    assert target.read_text() == "axioms: ok\n"


def test_usage_errors(capsys, tmp_path):
    assert call(capsys, "validate", str(tmp_path / "missing.fdg"))[0] == 2
    assert call(capsys, "lang", "--grammar", str(tmp_path / "missing.dg"))[0] == 2
    bad = tmp_path / "bad.fdg"
    bad.write_text("not fdg\n")
    assert call(capsys, "validate", str(bad))[0] == 2
    assert call(capsys, "lang", "--grammar", str(GRAMMARS / "leaf.dg"), "--max-len", "20")[0] == 2
    assert call(capsys, "validate", "--jobs", "0", fig("jack_painted"))[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_config_checks():
    with pytest.raises(UsageError):
        CliConfig("frobnicate")
    with pytest.raises(UsageError):
        CliConfig("expand", cap=0)


def test_run_is_deterministic():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        assert run(CliConfig("render", input=fig("gapping_lecture")), buf) == 0
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "depgram.cli", "validate", fig("what_would_you_like")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "axioms: ok\n"
