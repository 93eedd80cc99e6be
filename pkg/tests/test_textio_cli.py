import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from posetprob import catalog
from posetprob.cli import main
from posetprob.coupling import realize, realize_class_z
from posetprob.measure import Measure, MeasureSystem
from posetprob.textio import (
    ParseError,
    Workspace,
    dump_system,
    format_coupling,
    format_fraction,
    format_measure,
    format_poset,
    format_system,
    parse_fraction,
)
from posetprob.witness import fixture

F = Fraction
SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(*argv, files=None, tmp_path=None):
    paths = []
    for i, content in enumerate(files or []):
        p = tmp_path / f"in{i}.txt"
        p.write_text(content)
        paths.append(str(p))
    proc = subprocess.run(
        [sys.executable, "-m", "posetprob", *[a.format(*paths) for a in argv]],
        capture_output=True,
        text=True,
        env={"PYTHONPATH": SRC, "PATH": "/usr/bin:/bin"},
    )
    return proc


def test_fraction_round_trip():
    for v in [F(0), F(1), F(1, 2), F(22, 7), F(3)]:
        assert parse_fraction(format_fraction(v)) == v
    assert format_fraction(F(2, 4)) == "1/2"
    assert format_fraction(F(3, 1)) == "3"
    with pytest.raises(ParseError):
        parse_fraction("x/y")


def test_poset_round_trip():
    for p in [catalog.diamond(), catalog.zigzag(5), catalog.tall_y_tree()]:
        text = format_poset("p", p)
        ws = Workspace().load(text)
        assert ws.posets["p"] == p


def test_measure_and_system_round_trip():
    d = catalog.diamond()
    m = Measure(d, {"x": F(1, 3), "w": F(2, 3)})
    text = format_poset("d", d) + format_measure("m", "d", m)
    ws = Workspace().load(text)
    assert ws.measures["m"] == m

    cx = fixture("diamond-diamond")
    blob = dump_system(("idx", "tgt"), "sys", cx.system)
    ws = Workspace().load(blob)
    assert ws.first_system() == cx.system


def test_system_parse_order_independent():
    # a system file may reference blocks from a second file
    d_text = format_poset("d", catalog.diamond())
    m_text = format_measure("m", "d", Measure.point(catalog.diamond(), "x"))
    sys_text = format_system("s", "d", "d", {e: "m" for e in "wxyz"})
    ws = Workspace().load(sys_text + m_text, d_text)
    assert ws.first_system().assignment["x"] == Measure.point(catalog.diamond(), "x")


def test_coupling_round_trip():
    two = catalog.chain(2)
    sys_ = MeasureSystem(
        two,
        two,
        {"c0": Measure(two, {"c0": F(1, 2), "c1": F(1, 2)}), "c1": Measure(two, {"c1": F(1)})},
    )
    coupling = realize_class_z(sys_)
    text = format_poset("two", two) + format_coupling("two", "two", coupling)
    ws = Workspace().load(text)
    assert list(ws.couplings.values())[0] == coupling


def test_parse_errors():
    with pytest.raises(ParseError):
        Workspace().load("measure m on nope\nx = 1")
    with pytest.raises(ParseError):
        Workspace().load("poset p\nelements: a\ncovers: a<")
    with pytest.raises(ParseError):
        Workspace().load("garbage line")


# -- CLI ----------------------------------------------------------------------

DIAMOND_TXT = format_poset("diamond", catalog.diamond())
CHAIN_TXT = format_poset("chain5", catalog.chain(5))
YPOSET_TXT = format_poset("ypos", catalog.y_poset())
DBOW_TXT = format_poset("dbow", catalog.double_bowtie())
WPOSET_TXT = format_poset("wpos", catalog.w_poset())

PAIR_SYSTEM = (
    "poset chain2\nelements: a b\ncovers: a<b\n"
    "measure lo on chain2\na = 1/2\nb = 1/2\n"
    "measure hi on chain2\na = 1/4\nb = 3/4\n"
    "system demo on index=chain2 target=chain2\na := lo\nb := hi\n"
)

BAD_SYSTEM = (
    "poset chain2\nelements: a b\ncovers: a<b\n"
    "measure lo on chain2\na = 1/2\nb = 1/2\n"
    "measure hi on chain2\na = 1/4\nb = 3/4\n"
    "system demo on index=chain2 target=chain2\na := hi\nb := lo\n"
)


def test_cli_classify(tmp_path):
    proc = run_cli("classify", "{0}", files=[DIAMOND_TXT], tmp_path=tmp_path)
    assert proc.returncode == 0
    assert "B (cycle:" in proc.stdout
    proc = run_cli("classify", "{0}", "--format", "json", files=[CHAIN_TXT], tmp_path=tmp_path)
    data = json.loads(proc.stdout)
    assert data["components"][0]["class"] == "Z"


def test_cli_classify_parse_error(tmp_path):
    proc = run_cli("classify", "{0}", files=["poset p\nelements: a\ncovers: b<a\n"], tmp_path=tmp_path)
    assert proc.returncode == 2


def test_cli_check(tmp_path):
    ok = run_cli("check", "{0}", "--mode", "stochastic", files=[PAIR_SYSTEM], tmp_path=tmp_path)
    assert ok.returncode == 0
    bad = run_cli("check", "{0}", "--mode", "stochastic", files=[BAD_SYSTEM], tmp_path=tmp_path)
    assert bad.returncode == 1 and "violated" in bad.stdout
    rz = run_cli("check", "{0}", "--mode", "realizable", files=[PAIR_SYSTEM], tmp_path=tmp_path)
    assert rz.returncode == 0 and "coupling on" in rz.stdout


def test_cli_check_realizable_counterexample(tmp_path):
    cx = fixture("diamond-diamond")
    blob = dump_system(("d", "d"), "bad", cx.system)
    proc = run_cli("check", "{0}", "--mode", "realizable", files=[blob], tmp_path=tmp_path)
    assert proc.returncode == 1
    assert "certificate on" in proc.stdout


def test_cli_decide_exit_codes(tmp_path):
    holds = run_cli("decide", "{0}", "{1}", files=[DIAMOND_TXT, CHAIN_TXT], tmp_path=tmp_path)
    assert holds.returncode == 0 and holds.stdout.startswith("holds")
    fails = run_cli("decide", "{0}", "{1}", files=[DIAMOND_TXT, DIAMOND_TXT], tmp_path=tmp_path)
    assert fails.returncode == 1 and fails.stdout.startswith("fails")
    unknown = run_cli("decide", "{0}", "{1}", files=[DBOW_TXT, WPOSET_TXT], tmp_path=tmp_path)
    assert unknown.returncode == 3 and unknown.stdout.startswith("unknown")


def test_cli_decide_witness_reparses(tmp_path):
    out = tmp_path / "witness.txt"
    proc = run_cli(
        "decide", "{0}", "{1}", "--out", str(out), files=[DIAMOND_TXT, DIAMOND_TXT], tmp_path=tmp_path
    )
    assert proc.returncode == 1
    ws = Workspace().load(out.read_text())
    sys_ = ws.first_system()
    assert not realize(sys_).feasible


def test_cli_couple(tmp_path):
    auto = run_cli("couple", "{0}", files=[PAIR_SYSTEM], tmp_path=tmp_path)
    assert auto.returncode == 0 and "strategy: acyclic" in auto.stdout
    lp = run_cli("couple", "{0}", "--strategy", "lp", files=[PAIR_SYSTEM], tmp_path=tmp_path)
    assert lp.returncode == 0
    # identical marginals between strategies
    cz = run_cli("couple", "{0}", "--strategy", "class-z", files=[PAIR_SYSTEM], tmp_path=tmp_path)
    assert cz.returncode == 0
    cx = fixture("diamond-diamond")
    blob = dump_system(("d", "d"), "bad", cx.system)
    cert = run_cli("couple", "{0}", files=[blob], tmp_path=tmp_path)
    assert cert.returncode == 1 and "certificate on" in cert.stdout
    precondition = run_cli(
        "couple", "{0}", "--strategy", "class-z", files=[blob], tmp_path=tmp_path
    )
    assert precondition.returncode == 2


def test_cli_counterexample(tmp_path):
    proc = run_cli("counterexample", "{0}", "{1}", files=[DIAMOND_TXT, DIAMOND_TXT], tmp_path=tmp_path)
    assert proc.returncode == 0 and "provenance" in proc.stdout
    no = run_cli("counterexample", "{0}", "{1}", files=[CHAIN_TXT, CHAIN_TXT], tmp_path=tmp_path)
    assert no.returncode == 2
    crown_txt = format_poset("crown3", catalog.k_crown(3))
    proc = run_cli("counterexample", "{0}", "{1}", files=[crown_txt, YPOSET_TXT], tmp_path=tmp_path)
    assert proc.returncode == 0 and "crown-y" in proc.stdout
    # the emitted witness re-parses and re-certifies
    ws = Workspace().load(proc.stdout.split("provenance:", 1)[1].split("\n", 1)[1])
    assert not realize(ws.first_system()).feasible


def test_cli_enlarge(tmp_path):
    tree = run_cli("enlarge", "{0}", files=[CHAIN_TXT], tmp_path=tmp_path)
    assert tree.returncode == 0 and "poset chain5_acyclic" in tree.stdout
    obstruction = run_cli("enlarge", "{0}", files=[DIAMOND_TXT], tmp_path=tmp_path)
    assert obstruction.returncode == 1 and "obstruction: diamond" in obstruction.stdout
    bowtie_txt = format_poset("bow", catalog.bowtie())
    grown = run_cli("enlarge", "{0}", files=[bowtie_txt], tmp_path=tmp_path)
    assert grown.returncode == 0
    ws = Workspace().load(grown.stdout)
    out = ws.posets["bow_acyclic"]
    assert out.is_acyclic() and out.induced(catalog.bowtie().elements) == catalog.bowtie()


def test_cli_sweep_deterministic(tmp_path):
    a = run_cli("sweep", "--max-size", "3", "--seed", "9", tmp_path=tmp_path)
    b = run_cli("sweep", "--max-size", "3", "--seed", "9", tmp_path=tmp_path)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    as_json = run_cli("sweep", "--max-size", "3", "--seed", "9", "--format", "json", tmp_path=tmp_path)
    data = json.loads(as_json.stdout)
    assert data["failures"] == 0


def test_main_in_process(tmp_path, capsys):
    path = tmp_path / "d.txt"
    path.write_text(DIAMOND_TXT)
    code = main(["classify", str(path)])
    captured = capsys.readouterr()
    assert code == 0 and "B (cycle:" in captured.out
