from __future__ import annotations

import json
import subprocess
import sys

import pytest

from wlhier.cli import run_cli
from wlhier.graph import Graph, graphs_from_text
from wlhier.theorems import theorem_ids


def call(capsys, *argv: str) -> tuple[int, str, str]:
    code = run_cli(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_rook_dot(capsys):
    code, out, _ = call(capsys, "gen", "rook44", "--dot")
    assert code == 0
    assert out.lstrip().startswith("graph") and out.count("--") == 48


def test_gen_pair_text_roundtrips(capsys):
    code, out, _ = call(capsys, "gen", "cll", "--l", "5", "--text")
    assert code == 0
    gs = graphs_from_text(out)
    assert [g.node_count for g in gs] == [11, 11]


def test_distinguish_markdrop_remove(capsys):
    code, out, _ = call(capsys, "distinguish", "--spec", "M:2:d=2", "--pair", "markdrop", "--mode", "remove")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "INSEPARABLE" and rep["spec"] == "R:2:d=2" and rep["witness"] is None


def test_distinguish_from_files(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text(Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)]).to_text())
    b.write_text(Graph.from_edges(7, [(i, (i + 1) % 7) for i in range(7)]).to_text())
    code, out, _ = call(capsys, "distinguish", "--spec", "M:1:d=3", "--g1", str(a), "--g2", str(b))
    assert code == 0 and json.loads(out)["witness"]["k_prime"] == 1
    code, out, _ = call(capsys, "distinguish", "--spec", "WL1:d=3", "--g1", str(a), "--g2", str(b), "--graph-level")
    assert json.loads(out)["verdict"] == "SEPARATED"


def test_reproduce_output_shape(capsys):
    code, out, _ = call(capsys, "reproduce", "--theorem", "thm3")
    rep = json.loads(out)
    assert rep["theorem"] == "thm3" and len(rep["claims"]) == 4
    for c in rep["claims"]:
        assert set(c) == {"spec", "expected", "observed", "witness"}
    # the exit code reflects the claims, whatever they are
    ok = all(c["expected"] == c["observed"] for c in rep["claims"])
    assert code == (0 if ok else 1)
    assert rep["runtime_ms"] is None


def test_reproduce_is_byte_stable(capsys):
    first = call(capsys, "reproduce", "--theorem", "thm1", "--theorem", "thm8")
    second = call(capsys, "reproduce", "--theorem", "thm1", "--theorem", "thm8")
    assert first == second and first[0] == 0


def test_reproduce_jobs_do_not_change_output(capsys):
    args = ["reproduce", "--theorem", "thm5", "--theorem", "thm6", "--theorem", "thm9"]
    assert call(capsys, *args, "--jobs", "2") == call(capsys, *args, "--jobs", "1")


def test_timing_flag(capsys):
    _, out, _ = call(capsys, "reproduce", "--theorem", "thm5", "--timing")
    assert isinstance(json.loads(out)["runtime_ms"], (int, float))


@pytest.mark.parametrize("theorem", theorem_ids())
def test_every_theorem_is_reproducible(capsys, theorem):
    code, out, _ = call(capsys, "reproduce", "--theorem", theorem, "--small")
    rep = json.loads(out)
    ok = all(c["expected"] == c["observed"] for c in rep["claims"])
    assert code == (0 if ok else 1)


def test_reproduce_all_small(capsys):
    """Every claimed verdict must hold; see the ledger for the ones that do not."""
    code, _, err = call(capsys, "reproduce", "--all", "--small")
    assert code == 0, err


@pytest.mark.parametrize(
    "argv",
    [
        ["distinguish", "--spec", "Q:1", "--pair", "markdrop"],
        ["distinguish", "--spec", "N:2:d=2", "--pair", "cll"],
        ["gen", "nonsense"],
        ["reproduce", "--theorem", "thm99"],
        ["count", "--graph", "rook44", "--pattern", "CLIQUE", "--size", "2"],
        ["distinguish", "--spec", "M:3:d=2", "--pair", "rook", "--run-cap", "10"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err


def test_count_and_can_count(capsys):
    code, out, _ = call(capsys, "count", "--graph", "rook44", "--pattern", "CLIQUE", "--size", "4", "--node", "0")
    assert code == 0 and json.loads(out)["results"][0]["counts"] == {"0": 2}
    code, out, _ = call(
        capsys, "can-count", "--spec", "WL1:d=stable", "--corpus", "wl1",
        "--pattern", "CLIQUE", "--size", "3",
    )
    assert code == 0 and json.loads(out)["verdict"] == "COUNTEREXAMPLE"


def test_corpus_verb(capsys):
    code, out, _ = call(capsys, "corpus", "--kind", "connected", "--max-n", "4", "--text")
    assert code == 0 and len(graphs_from_text(out)) == 1 + 1 + 2 + 6
    code, out, _ = call(capsys, "corpus", "--kind", "random", "--count", "5", "--seed", "1", "--text")
    assert len(graphs_from_text(out)) == 5


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "wlhier", "gen", "shrikhande", "--text"], capture_output=True, text=True, check=True
    )
    assert Graph.from_text(res.stdout).node_count == 16
