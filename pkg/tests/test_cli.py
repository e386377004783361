"""Command-line surface: exit codes, artifacts, report schemas."""

import json

import pytest

from paramenv.cli import _default_jobs, main
from paramenv.jsonio import load_json, save_json, trigraph_to_json
from paramenv.polytope import TriEdge, TriGraph


def _run(*argv) -> int:
    return main(list(argv))


@pytest.fixture
def phi_file(tmp_path):
    path = tmp_path / "g.json"
    code = _run(
        "generate", "phi", "--n", "3", "--B", "1", "--D", "0/1", "--m", "1",
        "--out", str(path),
    )
    assert code == 0
    return path


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        _run("generate", "phi", "--frobnicate")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        _run("no-such-command")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        _run("generate", "phi", "--n", "3", "--B", "1", "--D", "half", "--m", "1",
             "--out", str(tmp_path / "g.json"))
    assert exc.value.code == 2


def test_missing_and_malformed_files_exit_2(tmp_path, capsys):
    assert _run("verify", "phi", "--in", str(tmp_path / "absent.json")) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": 2}')
    assert _run("envelope", "--in", str(bad), "--out", str(tmp_path / "e.json")) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_phi_generate_verify_round_trip(phi_file, tmp_path, capsys):
    report = tmp_path / "r.json"
    assert _run("verify", "phi", "--in", str(phi_file), "--report", str(report)) == 0
    out = capsys.readouterr().out
    assert "interval_optimality: ok" in out
    doc = load_json(str(report))
    assert doc["schema"] == "paramenv/phi-verify/1"
    assert doc["ok"] is True
    assert len(doc["checks"]) == 6


def test_phi_tampered_file_exits_1(phi_file, tmp_path, capsys):
    doc = load_json(str(phi_file))
    target = next(e for e in doc["graph"]["edges"] if e["a"] == "14580")
    target["a"] = "14581"
    save_json(str(phi_file), doc)
    report = tmp_path / "r.json"
    assert _run("verify", "phi", "--in", str(phi_file), "--report", str(report)) == 1
    assert "FAIL" in capsys.readouterr().out
    assert load_json(str(report))["ok"] is False


def test_envelope_oracle_plot_paths(phi_file, tmp_path, capsys):
    env = tmp_path / "env.json"
    fig = tmp_path / "env.png"
    code = _run(
        "envelope", "--in", str(phi_file), "--out", str(env),
        "--domain", "0", "81", "--oracle", "--fig", str(fig),
    )
    assert code == 0
    assert "oracle agreement: ok" in capsys.readouterr().out
    doc = load_json(str(env))
    assert doc["domain"] == ["0", "81"]
    assert len(doc["segments"]) >= 3
    assert fig.exists() and fig.stat().st_size > 0

    svg = tmp_path / "env.svg"
    assert _run("plot", "--in", str(env), "--out", str(svg)) == 0
    text = svg.read_text()
    assert text.startswith("<svg ") and "<polyline" in text

    assert _run("verify", "paths", "--in", str(env)) == 0


def test_envelope_unbounded_figure_exits_2(tmp_path, capsys):
    g = tmp_path / "g.json"
    save_json(
        str(g),
        {
            "vertices": 2,
            "source": 0,
            "sink": 1,
            "edges": [{"from": 0, "to": 1, "a": "1", "b": "2"}],
        },
    )
    env = tmp_path / "env.json"
    assert _run("envelope", "--in", str(g), "--out", str(env)) == 0
    assert (
        _run("envelope", "--in", str(g), "--out", str(env), "--fig",
             str(tmp_path / "f.png"))
        == 2
    )
    # Same contract for SVG: unbounded envelope needs --range.
    assert _run("plot", "--in", str(env), "--out", str(tmp_path / "e.svg")) == 2
    assert (
        _run("plot", "--in", str(env), "--out", str(tmp_path / "e.svg"),
             "--range", "0", "4")
        == 0
    )


def test_alternating_witnesses_exit_1(tmp_path, capsys):
    doc = {
        "breakpoints": ["1", "2", "3"],
        "segments": [
            {"a": "0", "b": "3", "path": [0, 1, 3]},
            {"a": "2", "b": "1", "path": [0, 2, 3]},
            {"a": "6", "b": "-1", "path": [0, 1, 3]},
            {"a": "12", "b": "-3", "path": [0, 2, 3]},
        ],
    }
    path = tmp_path / "env.json"
    save_json(str(path), doc)
    assert _run("verify", "paths", "--in", str(path)) == 1
    assert "FAIL" in capsys.readouterr().out


def test_link_generate_verify_and_tamper(tmp_path, capsys):
    link = tmp_path / "link.json"
    assert _run("generate", "link", "--B", "2", "--n", "3", "--out", str(link)) == 0
    report = tmp_path / "lr.json"
    assert _run("verify", "link", "--in", str(link), "--report", str(report)) == 0
    doc = load_json(str(report))
    assert doc["schema"] == "paramenv/link-verify/1"
    assert doc["ok"] and doc["planar"] and doc["graph_matches_params"]
    assert doc["max_span_denominator"] <= 9

    broken = load_json(str(link))
    broken["graph"]["edges"][0]["a"] = "999999"
    save_json(str(link), broken)
    assert _run("verify", "link", "--in", str(link)) == 1
    assert "graph matches parameters: FAIL" in capsys.readouterr().out


def test_link_main_lemma_variant(tmp_path):
    link = tmp_path / "link.json"
    assert (
        _run("generate", "link", "--B", "1", "--n", "3", "--main-lemma",
             "--D", "1/2", "--out", str(link))
        == 0
    )
    assert _run("verify", "link", "--in", str(link)) == 0


def test_words_flow(tmp_path, capsys):
    w = tmp_path / "w.json"
    assert _run("generate", "words", "--n", "3", "--ell", "2", "--out", str(w)) == 0
    assert _run("verify", "words", "--in", str(w), "--ds", "3") == 0
    wb = tmp_path / "wb.json"
    assert (
        _run("generate", "words", "--n", "3", "--ell", "2", "--binary",
             "--out", str(wb))
        == 0
    )
    assert _run("verify", "words", "--in", str(wb)) == 0
    doc = load_json(str(wb))
    assert doc["length"] == 4  # (n-1) * 2^(ell-1)

    # A hand-made alternating family fails.
    save_json(str(w), {"n": 2, "length": 1, "words": [[0], [1], [0], [1]]})
    assert _run("verify", "words", "--in", str(w)) == 1


def test_verify_ds(tmp_path):
    seq = tmp_path / "seq.json"
    save_json(str(seq), {"sequence": [0, 1, 0, 1]})
    assert _run("verify", "ds", "--in", str(seq), "--order", "2") == 1
    assert _run("verify", "ds", "--in", str(seq), "--order", "3") == 0
    save_json(str(seq), [0, 1, 2, 1])
    assert _run("verify", "ds", "--in", str(seq), "--order", "2") == 0
    save_json(str(seq), {"rows": []})
    assert _run("verify", "ds", "--in", str(seq), "--order", "2") == 2


def test_skeleton_and_layered_generators(tmp_path):
    for argv, vertices, edges in (
        (("generate", "grid-skeleton", "--p", "3", "--q", "4"), 12, 17),
        (("generate", "gnpl", "--n", "3", "--layers", "2"), 8, 15),
        (("generate", "gpl", "--n", "3", "--layers", "2"), 8, 12),
    ):
        out = tmp_path / "g.json"
        assert _run(*argv, "--out", str(out)) == 0
        doc = load_json(str(out))
        assert doc["vertices"] == vertices
        assert len(doc["edges"]) == edges


def test_experiment_grid_artifacts(tmp_path):
    report = tmp_path / "grid.json"
    rows_csv = tmp_path / "grid.csv"
    fig = tmp_path / "grid.png"
    code = _run(
        "experiment", "grid", "--p", "3", "--q", "4", "--trials", "12",
        "--bits", "5", "--seed", "9", "--report", str(report),
        "--csv", str(rows_csv), "--fig", str(fig),
    )
    assert code == 0
    doc = load_json(str(report))
    assert doc["schema"] == "paramenv/grid-experiment/1"
    assert doc["ok"] is True
    assert doc["piece_bound"] == 20
    assert sum(doc["histogram"].values()) == 12
    lines = rows_csv.read_text().strip().splitlines()
    assert lines[0] == "trial,seed,pieces,alternation_found,middle_row_max"
    assert len(lines) == 13
    assert fig.exists() and fig.stat().st_size > 0


def test_jobs_env_default(monkeypatch):
    monkeypatch.delenv("PARAMENV_JOBS", raising=False)
    assert _default_jobs() == 1
    monkeypatch.setenv("PARAMENV_JOBS", "3")
    assert _default_jobs() == 3
    monkeypatch.setenv("PARAMENV_JOBS", "soon")
    with pytest.raises(ValueError, match="PARAMENV_JOBS"):
        _default_jobs()


def test_reduce_matching(phi_file, tmp_path, capsys):
    report = tmp_path / "mr.json"
    code = _run(
        "reduce", "matching", "--in", str(phi_file), "--lambda", "0/1",
        "--report", str(report),
    )
    assert code == 0
    doc = load_json(str(report))
    assert doc["schema"] == "paramenv/matching/1"
    assert doc["ok"] is True
    assert doc["matching_weight"] == doc["shortest_path_cost"]
    # Negative weight at the chosen parameter is a precondition error.
    assert (
        _run("reduce", "matching", "--in", str(phi_file), "--lambda", "50") == 2
    )


def test_hull3_report(tmp_path):
    g = TriGraph(
        4,
        0,
        3,
        (
            TriEdge(0, 1, (1, 0, 2)),
            TriEdge(0, 2, (0, 1, 1)),
            TriEdge(1, 3, (2, 1, 0)),
            TriEdge(2, 3, (1, 3, 1)),
            TriEdge(0, 3, (4, 4, 2)),
        ),
    )
    path = tmp_path / "g3.json"
    save_json(str(path), trigraph_to_json(g))
    report = tmp_path / "hr.json"
    code = _run(
        "hull3", "--in", str(path), "--samples", "200", "--seed", "5",
        "--report", str(report),
    )
    assert code == 0
    doc = load_json(str(report))
    assert doc["schema"] == "paramenv/hull-cover/1"
    assert doc["ok"] is True
    assert doc["checked"] == 200
    assert doc["path_vectors"] == 3
    assert doc["cover_size"] <= doc["path_vectors"]
