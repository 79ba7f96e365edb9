import json
import socket

import pytest

from strata.cli import main
from strata.model import parse_dataset, validate

from conftest import FIXTURE_DIR

FIG2 = str(FIXTURE_DIR / "fig2_13.json")
CORNELIA = str(FIXTURE_DIR / "cornelia38.json")


def test_layout_writes_svg_and_exits_zero(tmp_path, capsys):
    out = tmp_path / "out.svg"
    code = main(["layout", FIG2, "--mode", "force-layered", "--seed", "11", "--svg", str(out)])
    assert code == 0
    assert out.exists()
    summary = capsys.readouterr().out.strip()
    assert summary.startswith("force_layered ")
    assert "layer_violation=0.000" in summary


def test_layout_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["layout", FIG2, "--mode", "force-layered", "--seed", "11", "--svg", str(a)]) == 0
    assert main(["layout", FIG2, "--mode", "force-layered", "--seed", "11", "--svg", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_layout_invalid_dataset_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "persons": [{"id": "a", "label": "A"}],
        "relations": [{"source": "a", "target": "zz", "kind": "parent_of"}],
    }))
    out = tmp_path / "out.svg"
    code = main(["layout", str(bad), "--svg", str(out)])
    assert code == 2
    assert not out.exists()
    assert "zz" in capsys.readouterr().err


def test_layout_numerical_blowup_exit_3(tmp_path, capsys):
    code = main(["layout", FIG2, "--set", "repulsion_strength=1e308", "--svg", str(tmp_path / "x.svg")])
    assert code == 3
    assert "non-finite" in capsys.readouterr().err


def test_layout_writes_trace(tmp_path):
    trace = tmp_path / "trace.json"
    assert main(["layout", FIG2, "--trace", str(trace)]) == 0
    parsed = json.loads(trace.read_text())
    assert len(parsed["ticks"]) > 1


def test_compare_table_and_json(tmp_path, capsys):
    out = tmp_path / "both.json"
    code = main(["compare", CORNELIA, "--seed", "11", "--json", str(out)])
    assert code == 0
    table = capsys.readouterr().out
    assert "node_count" in table
    assert table.count("38") >= 2
    lv_row = next(line for line in table.splitlines() if line.startswith("layer_violation"))
    assert "0.000000" in lv_row
    doc = json.loads(out.read_text())
    assert set(doc["modes"]) == {"force_directed", "force_layered"}
    assert doc["modes"]["force_layered"]["report"]["layer_violation"] == 0.0
    assert doc["modes"]["force_directed"]["report"]["layer_violation"] > 0.0


def test_query_most_connected(capsys):
    assert main(["query", CORNELIA, "most-connected"]) == 0
    assert capsys.readouterr().out.split() == ["adriaen", "elisabeth_d"]


def test_query_common(capsys):
    assert main(["query", CORNELIA, "common", "cornelis", "barbara"]) == 0
    assert capsys.readouterr().out.split() == ["adriaen", "pieter_v", "susanna"]


def test_query_common_unknown_id_exit_2(capsys):
    assert main(["query", CORNELIA, "common", "cornelis", "zz"]) == 2


def test_query_snapshot_writes_valid_subdataset(tmp_path, capsys):
    out = tmp_path / "sub.json"
    assert main(["query", CORNELIA, "snapshot", "1650", "--json", str(out)]) == 0
    sub = parse_dataset(out.read_text())
    assert validate(sub) == []
    assert 0 < len(sub.persons) < 38


def test_layers_two_column_table(capsys):
    assert main(["layers", FIG2, "--hierarchy", "parent_of", "--colevel", "spouse_of"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 13
    assert lines[0] == "pieter\t0"
    table = dict(line.split("\t") for line in lines)
    assert table["lucas"] == "2"


def test_synth_writes_dataset(tmp_path, capsys):
    out = tmp_path / "synth.json"
    code = main([
        "synth", "--families", "2", "--generations", "3", "--children-mean", "2",
        "--intermarriage", "0.5", "--godparent", "0.3", "--seed", "1", "--json", str(out),
    ])
    assert code == 0
    ds = parse_dataset(out.read_text())
    assert validate(ds) == []
    assert len(ds.persons) == 9


def test_port_resolution(monkeypatch):
    from strata.cli import resolve_port

    monkeypatch.delenv("STRATA_PORT", raising=False)
    assert resolve_port(None) == 8088
    monkeypatch.setenv("STRATA_PORT", "9100")
    assert resolve_port(None) == 9100
    assert resolve_port(7000) == 7000  # flag wins


def test_serve_port_in_use_exit_4():
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    port = blocker.getsockname()[1]
    try:
        assert main(["serve", CORNELIA, "--port", str(port)]) == 4
    finally:
        blocker.close()
