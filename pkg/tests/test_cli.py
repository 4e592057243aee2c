import json
from importlib import resources

import jsonschema
import pytest

from conftest import TWO_BURST_TEXT
from tempograph.cli import check_result, main, InvariantError
from tempograph.segmentation import Episode, segment
from tempograph.temporal_graph import parse_edge_list


def schema(name):
    return json.loads(resources.files("tempograph").joinpath("schemas", name).read_text())


@pytest.fixture
def burst(tmp_path):
    p = tmp_path / "in.tsv"
    p.write_text(TWO_BURST_TEXT)
    return p


def run(*argv):
    return main([str(a) for a in argv])


def test_optimal_two_burst(burst, tmp_path):
    out = tmp_path / "r.json"
    assert run("segment", "--mode", "optimal", "--k", 2, burst, "-o", out) == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema("result.schema.json"))
    assert doc["total_profit"] == pytest.approx(2.5)
    assert [(e["start"], e["end"]) for e in doc["episodes"]] == [(1, 2), (5, 6)]
    assert doc["episodes"][1]["nodes"] == [10, 11, 12, 13]


@pytest.mark.parametrize("mode", ["optimal", "kgapprox", "kgoptdp", "kgoptds", "kgcvr"])
def test_every_mode_validates(burst, tmp_path, mode):
    out = tmp_path / f"{mode}.json"
    extra = ["--lam", "0.5", "--sketch"] if mode == "kgcvr" else ["--post-process"]
    assert run("segment", "--mode", mode, "--k", 2, *extra, burst, "-o", out) == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema("result.schema.json"))
    assert len(doc["episodes"]) == 2
    assert ("cover" in doc) == (mode == "kgcvr")


def test_kgapprox_four_episodes(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("".join(f"{i} {i + 1} {t}\n{i} {i + 2} {t}\n" for t in range(1, 9) for i in range(3)))
    out = tmp_path / "r.json"
    assert run("segment", "--mode", "kgapprox", "--k", 4, "--eps-dp", 0.1, "--eps-ds", 0.1,
               "--post-process", p, "-o", out) == 0
    assert len(json.loads(out.read_text())["episodes"]) == 4


def test_csv(burst, capsys):
    assert run("segment", "--mode", "optimal", "--k", 2, "--format", "csv", burst) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "start_raw,end_raw,density,size,nodes"
    assert lines[2] == "5,6,1.5,4,10;11;12;13"


def test_exit_codes(burst, tmp_path):
    out = tmp_path / "never.json"
    assert run("segment", "--k", 0, burst, "-o", out) == 3
    assert run("segment", "--k", 99, burst, "-o", out) == 3
    assert run("segment", "--k", 2, tmp_path / "missing.tsv", "-o", out) == 2
    bad = tmp_path / "bad.tsv"
    bad.write_text("1 2 3\nx y z\n")
    assert run("segment", "--k", 1, bad, "-o", out) == 2
    assert not out.exists()
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


def test_invariant_exit(burst, monkeypatch, tmp_path):
    import tempograph.cli as cli

    def broken(g, k, *a, **kw):
        seg = segment(g, k, "optimal")
        seg.episodes = seg.episodes[:1]
        return seg

    monkeypatch.setattr(cli, "segment", broken)
    out = tmp_path / "r.json"
    assert run("segment", "--k", 2, burst, "-o", out) == 4
    assert not out.exists()


def test_check_result_catches_bad_density():
    g = parse_edge_list(TWO_BURST_TEXT)
    seg = segment(g, 2, "optimal")
    e = seg.episodes[0]
    seg.episodes[0] = Episode(e.lo, e.hi, e.start, e.end, e.nodes, e.density + 1)
    with pytest.raises(InvariantError):
        check_result(g, seg)


def test_seed_env_fallback(burst, tmp_path, monkeypatch):
    monkeypatch.setenv("TEMPOGRAPH_SEED", "17")
    out = tmp_path / "r.json"
    assert run("segment", "--mode", "kgcvr", "--k", 2, "--sketch", "--lam", 1, burst, "-o", out) == 0
    assert json.loads(out.read_text())["parameters"]["seed"] == 17
    monkeypatch.setenv("TEMPOGRAPH_SEED", "abc")
    assert run("segment", "--k", 2, burst, "-o", out) == 2


def test_synth_eval_round_trip(tmp_path):
    edges = tmp_path / "s.tsv"
    args = ["synth", "--k", 5, "--community-degree", 7, "--seed", 4, "-o", edges]
    assert run(*args) == 0
    first = edges.read_text(), (tmp_path / "s.tsv.truth.json").read_text()
    assert run(*args) == 0
    assert (edges.read_text(), (tmp_path / "s.tsv.truth.json").read_text()) == first

    res = tmp_path / "r.json"
    assert run("segment", "--k", 5, "--post-process", edges, "-o", res) == 0
    met = tmp_path / "m.json"
    assert run("eval", res, tmp_path / "s.tsv.truth.json", "-o", met) == 0
    doc = json.loads(met.read_text())
    jsonschema.validate(doc, schema("metrics.schema.json"))
    assert len(doc["f"]) == 5 and doc["mean_f"] > 0.5


def test_synth_realized_degree(tmp_path):
    from tempograph.synth import GroundTruth, realized_degrees

    edges = tmp_path / "s.tsv"
    degs = []
    for seed in range(10):
        assert run("synth", "--community-degree", 6, "--seed", seed, "-o", edges) == 0
        g = parse_edge_list(edges.read_text())
        truth = GroundTruth.from_json((tmp_path / "s.tsv.truth.json").read_text())
        degs += realized_degrees(g, truth)
    assert sum(degs) / len(degs) == pytest.approx(6.0, rel=0.15)


def test_synth_infeasible(tmp_path):
    out = tmp_path / "x.tsv"
    assert run("synth", "--k", 50, "-o", out) == 3
    assert not out.exists()


def test_eval_perfect_and_disjoint(tmp_path):
    truth = {"communities": [{"nodes": [1, 2], "start": 0, "end": 9},
                             {"nodes": [3, 4], "start": 20, "end": 29}], "spec": None}
    tp = tmp_path / "t.json"
    tp.write_text(json.dumps(truth))
    perfect = {"episodes": [{"start": c["start"], "end": c["end"], "nodes": c["nodes"]}
                            for c in truth["communities"]]}
    fp = tmp_path / "f.json"
    fp.write_text(json.dumps(perfect))
    out = tmp_path / "m.json"
    assert run("eval", fp, tp, "-o", out) == 0
    m = json.loads(out.read_text())
    assert m["mean_precision"] == m["mean_recall"] == m["mean_f"] == 1.0
    fp.write_text(json.dumps({"episodes": [{"start": 100, "end": 109, "nodes": [1]},
                                           {"start": 110, "end": 119, "nodes": [3]}]}))
    assert run("eval", fp, tp, "-o", out) == 0
    assert json.loads(out.read_text())["mean_f"] == 0.0
    fp.write_text("{not json")
    assert run("eval", fp, tp) == 2


def test_docs_schema_matches_packaged():
    from pathlib import Path

    docs = Path(__file__).resolve().parents[1] / "docs"
    for name in ("result.schema.json", "metrics.schema.json"):
        assert json.loads((docs / name).read_text()) == schema(name)
