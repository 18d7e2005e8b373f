"""Command line behaviour, exit codes and golden outputs."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from eatrees.canonical import canonical_form
from eatrees.cli import main
from eatrees.enumeration import enumerate_by_order, enumerate_up_to_order
from eatrees.render import render_table, tree_from_json

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def node_file(tmp_path):
    p = tmp_path / "single_node.json"
    p.write_text(json.dumps({"vertices": 1, "arrows": 1, "tau": [], "sigma": [["a0", 1]]}))
    return str(p)


def test_enumerate_order_2_table(capsys):
    code, out, _ = run(capsys, "enumerate", "--order", "2", "--format", "table")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 + 6
    assert lines[0].split()[:2] == ["|γ|", "|κ|"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_golden_tables(capsys, n):
    code, out, _ = run(capsys, "enumerate", "--order", str(n))
    assert code == 0
    assert out == (GOLDEN / f"order{n}.table").read_text(encoding="utf-8")
    assert render_table(enumerate_by_order(n)) == out


def test_golden_order_4_count():
    assert len(enumerate_by_order(4)) == int((GOLDEN / "order4.count").read_text())


def test_enumerate_filters(capsys):
    code, out, _ = run(capsys, "enumerate", "--order", "3", "--up-to", "--filter", "butcher", "--format", "json")
    assert code == 0
    assert len(json.loads(out)) == 4
    _, out, _ = run(capsys, "enumerate", "--order", "2", "--filter", "aromatic", "--filter", "connected", "--format", "json")
    assert len(json.loads(out)) == 1


def test_enumerate_composition_and_nodes(capsys):
    _, out, _ = run(capsys, "enumerate", "--composition", "0,1,1", "--format", "json")
    assert len(json.loads(out)) == 9
    _, out, _ = run(capsys, "enumerate", "--nodes", "1", "--max-order", "2", "--format", "json")
    assert len(json.loads(out)) == 3


@pytest.mark.parametrize("argv", [
    ["enumerate", "--nodes", "2"],
    ["enumerate", "--composition", "0,2"],
    ["enumerate"],
    ["eval", "--tree", "f^i ∂_i", "--field", "f1 = x3", "--point", "1,2"],
    ["eval", "--tree", "f^i ∂_i", "--field", "f1 = x1; f2 = 0", "--point", "1"],
    ["eval", "--tree", "{\"vertices\": 1, \"arrows\": 1, \"sigma\": [[\"a0\", \"a0\"]]}", "--field", "f1 = x1", "--point", "1"],
    ["pair", "--tree", "f^i ∂_i"],
    ["pair", "--matrix"],
    ["normalize", "--tree", "f^i f^j_j ∂_i"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_eval_single_node(capsys, node_file):
    code, out, _ = run(capsys, "eval", "--tree", node_file, "--field", "f1=x1", "--point", "2")
    assert (code, out) == (0, "2\n")


def test_eval_laplacian_symbolic(capsys):
    code, out, _ = run(capsys, "eval", "--tree", "f^i_{jj} ∂_i", "--field", "f1 = x2^2; f2 = 0",
                       "--point", "0,0", "--symbolic")
    assert code == 0
    assert out.splitlines() == ["f^i_jj ∂_i", "2,0"]
    _, out, _ = run(capsys, "eval", "--tree", "f^i_{jj} ∂_i", "--field", "f1 = x2^2", "--point", "0,0",
                    "--symbolic", "--format", "json")
    obj = json.loads(out)
    assert obj["value"] == ["2", "0"] and obj["expression"]["output"] == "i"


def test_eval_field_file_and_aroma(capsys, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("f1 = x1*x2\nf2 = x2^2\n")
    code, out, _ = run(capsys, "eval", "--tree", "f^j_j", "--field", str(p), "--point", "1,3")
    assert (code, out) == (0, "9\n")


def test_render_dot(capsys, node_file):
    code, out, _ = run(capsys, "render", "--tree", node_file)
    assert code == 0 and out.startswith("digraph")
    _, out, _ = run(capsys, "render", "--tree", node_file, "--format", "table")
    assert "(a0,1)" in out


def test_pair(capsys):
    code, out, _ = run(capsys, "pair", "--tree", "f^j_i f^j_{kk} ∂_i", "--tree", "f^j_i f^j_{kk} ∂_i")
    assert (code, out) == (0, "2\n")
    _, out, _ = run(capsys, "pair", "--tree", "f^j_k f^j_k", "--tree", "f^i_j f^j ∂_i")
    assert out == "0\n"
    _, out, _ = run(capsys, "pair", "--tree", "f^j_k f^j_k", "--tree", "f^i_j f^j ∂_i", "--theta-free")
    assert out == "1\n"


def test_pair_matrix(capsys):
    code, out, _ = run(capsys, "pair", "--matrix", "--order", "2")
    obj = json.loads(out)
    assert code == 0 and len(obj["matrix"]) == 7
    assert all(obj["matrix"][i][i] != "0" for i in range(7))


def test_verify_order_2(capsys):
    code, out, _ = run(capsys, "verify", "--order", "2", "--seed", "7")
    obj = json.loads(out)
    assert code == 0 and obj["agree"] and len(obj["trees"]) == 7
    code, out, _ = run(capsys, "--format", "table", "verify", "--order", "2", "--property", "gl", "--exact-only")
    assert code == 0 and "GL-equivariance" in out


def test_verify_disagreement_exit_1(capsys, monkeypatch):
    import eatrees.equivariance as eq

    monkeypatch.setattr(eq, "expected_verdict", lambda t, p: True)
    code, out, err = run(capsys, "verify", "--order", "2", "--property", "decoupling")
    assert code == 1 and "disagreement" in err
    assert json.loads(out)["agree"] is False


def test_normalize_and_classes(capsys):
    code, out, _ = run(capsys, "normalize", "--tree", "f^j_i f^k_j f^k ∂_i")
    assert code == 0 and out.strip().endswith("f^i_j f^j_k f^k ∂_i")
    code, out, _ = run(capsys, "classes", "--order", "2")
    assert code == 0 and len(out.splitlines()) == 4
    _, out, _ = run(capsys, "classes", "--order", "2", "--format", "json")
    assert sum(c["connected"] for c in json.loads(out)) == 2


def test_normalize_error_exit(capsys, monkeypatch):
    import eatrees.cli as cli
    from eatrees.gradrewrite import NonUniqueRepresentative

    def boom(t):
        raise NonUniqueRepresentative("two")

    monkeypatch.setattr(cli, "exotic_normal_form", boom)
    code, _, _ = run(capsys, "normalize", "--tree", "f^i ∂_i")
    assert code == 1


def test_seed_determinism(capsys):
    a = run(capsys, "verify", "--order", "2", "--property", "stiefel", "--seed", "3")[1]
    b = run(capsys, "verify", "--order", "2", "--property", "stiefel", "--seed", "3")[1]
    assert a == b


def test_json_round_trip_all(capsys):
    _, out, _ = run(capsys, "enumerate", "--order", "3", "--up-to", "--format", "json")
    objs = json.loads(out)
    for obj, t in zip(objs, enumerate_up_to_order(3)):
        obj.pop("symbolic")
        assert canonical_form(tree_from_json(obj)) == canonical_form(t)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "eatrees", "enumerate", "--order", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout == (GOLDEN / "order1.table").read_text(encoding="utf-8")
