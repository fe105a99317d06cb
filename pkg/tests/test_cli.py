import json

import pytest

from mclex import majority, pair_projection_matrix, parse_matrix, render_matrix
from mclex.cli import run


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture()
def files(tmp_path):
    return {
        "mal": _write(tmp_path, "mal.mat", "1 2 2 | 1\n2 2 1 | 1"),
        "maj": _write(tmp_path, "maj.mat", render_matrix(majority())),
        "ari": _write(tmp_path, "ari.mat", "1 2 2 | 1\n2 2 1 | 1\n1 2 1 | 1"),
        "anti": _write(tmp_path, "anti.mat", "1 | 1"),
        "triv": _write(tmp_path, "triv.mat", "1 | 2"),
        "diag": _write(tmp_path, "diag.rel", "2 2 2\n0 0\n1 1"),
        "tri": _write(tmp_path, "tri.rel", "2 2 2\n0 0\n0 1\n1 1"),
    }


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


# ---------------------------------------------------------------------------


def test_gen_named(capsys):
    assert run(["gen", "mal"]) == 0
    assert capsys.readouterr().out.strip() == "1 2 2 | 1\n2 2 1 | 1"


def test_gen_mn_roundtrips(capsys):
    assert run(["gen", "mn", "4"]) == 0
    out = capsys.readouterr().out
    assert parse_matrix(out) == pair_projection_matrix(4)


def test_gen_mn_requires_n(capsys):
    assert run(["gen", "mn"]) == 2


def test_gen_unknown_name(capsys):
    assert run(["gen", "nosuch"]) == 2


def test_implies_positive(files, capsys):
    assert run(["implies", files["ari"], files["mal"]]) == 0
    out = _json_out(capsys)
    assert out["holds"] is True
    assert out["certificate"]["steps"]


def test_implies_negative_with_closure(files, capsys):
    assert run(["implies", files["maj"], files["mal"]]) == 1
    out = _json_out(capsys)
    assert out["holds"] is False
    assert sorted(map(tuple, out["certificate"]["closure"])) >= \
        sorted(map(tuple, out["certificate"]["seeds"]))


def test_implies_resource_limit_exit(files, capsys, monkeypatch):
    monkeypatch.setenv("MCLEX_MAX_NODES", "3")
    assert run(["implies", files["ari"], files["mal"]]) == 2
    assert "resource limit" in capsys.readouterr().err


def test_classify_degeneracy(files, capsys):
    assert run(["classify", files["anti"]]) == 0
    assert _json_out(capsys)["tag"] == "anti-trivial"
    assert run(["classify", files["triv"]]) == 0
    out = _json_out(capsys)
    assert out["tag"] == "trivial" and out["conflict"]
    assert run(["classify", files["maj"]]) == 0
    out = _json_out(capsys)
    assert out["tag"] == "non-degenerate" and out["witness"] == "e8"


def test_classify_regular(files, capsys):
    assert run(["classify", files["ari"], "--regular"]) == 0
    out = _json_out(capsys)
    assert out["tag"] == "implies-mal-reg"
    assert out["evidence"]["witness_pair"] == [1, 2]
    assert run(["classify", files["maj"], "--regular"]) == 0
    assert _json_out(capsys)["tag"] == "implied-by-maj-reg"


def test_bool_term(files, capsys):
    assert run(["bool-term", files["maj"]]) == 0
    assert _json_out(capsys)["witness"]["bits_hex"] == "e8"
    assert run(["bool-term", files["triv"]]) == 1
    assert _json_out(capsys)["conflict"]


def test_check_relation(files, capsys):
    assert run(["check-relation", files["diag"], files["mal"]]) == 0
    assert _json_out(capsys)["closed"] is True
    assert run(["check-relation", files["tri"], files["mal"]]) == 1
    out = _json_out(capsys)
    assert out["counterexample"]["violation"] == [1, 0]


def test_poset_outputs(tmp_path, capsys):
    dot = tmp_path / "p.dot"
    js = tmp_path / "p.json"
    code = run(["--backend", "python", "poset", "2", "1", "2",
                "--dot", str(dot), "--json", str(js)])
    assert code == 0
    summary = _json_out(capsys)
    assert summary["shape"] == [2, 1, 2]
    data = json.loads(js.read_text())
    assert data["classes"]
    assert dot.read_text().startswith("digraph")


def test_poset_cache_roundtrip(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    assert run(["poset", "2", "1", "2", "--cache", str(cache)]) == 0
    capsys.readouterr()
    first = json.loads(cache.read_text())
    assert first
    assert run(["poset", "2", "1", "2", "--cache", str(cache)]) == 0
    assert json.loads(cache.read_text()) == first


def test_poset_deterministic_output(capsys):
    assert run(["poset", "2", "1", "2"]) == 0
    a = capsys.readouterr().out
    assert run(["poset", "2", "1", "2"]) == 0
    assert capsys.readouterr().out == a


def test_env_backend_override(files, capsys, monkeypatch):
    monkeypatch.setenv("MCLEX_BACKEND", "python")
    assert run(["implies", files["ari"], files["maj"], "--no-certificate"]) == 0
    assert _json_out(capsys)["holds"] is True


def test_gen_output_feeds_every_consumer(tmp_path, capsys):
    assert run(["gen", "mn", "3"]) == 0
    text = capsys.readouterr().out
    mn3 = _write(tmp_path, "mn3.mat", text)
    maj = _write(tmp_path, "maj.mat", render_matrix(majority()))
    assert run(["implies", mn3, maj, "--no-certificate"]) == 0
    capsys.readouterr()
    assert run(["classify", mn3]) == 0
    capsys.readouterr()
    assert run(["bool-term", mn3]) == 0
    capsys.readouterr()
    rel = _write(tmp_path, "cube.rel", "3 2 2 2\n0 0 0\n1 1 1")
    assert run(["check-relation", rel, mn3]) == 0
    capsys.readouterr()


def test_parse_error_exit(tmp_path, capsys):
    bad = _write(tmp_path, "bad.mat", "1 2 |")
    assert run(["classify", bad]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_exit(capsys):
    assert run(["classify", "/nonexistent/thing.mat"]) == 2


def test_usage_error_exit(capsys):
    assert run(["no-such-command"]) == 2
