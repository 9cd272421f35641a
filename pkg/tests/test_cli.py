import json

import pytest

from mpiso.cli import main
from mpiso.formats import read_bench_csv, read_graph, write_edge_list
from mpiso.graph import validate_mapping

from conftest import C5, FIXTURES, K3, P3, encode_tc15

RIGID = str(FIXTURES / "rigid6.txt")


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in (("c5", C5), ("k3", K3), ("p3", P3)):
        p = tmp_path / f"{name}.txt"
        p.write_text(write_edge_list(g))
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_iso_same_file(files, capsys):
    code, out, _ = run(capsys, "iso", files["c5"], files["c5"])
    assert code == 0
    report = json.loads(out)
    assert report["isomorphic"] and validate_mapping(C5, C5, report["mapping"])


def test_iso_nonisomorphic(files, capsys):
    assert run(capsys, "iso", files["k3"], files["p3"])[0] == 1


def test_iso_errors(files, capsys, tmp_path):
    code, out, err = run(capsys, "iso", files["k3"], str(tmp_path / "missing.txt"))
    assert code == 2 and out == "" and "error" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n")
    assert run(capsys, "iso", str(bad), str(bad))[0] == 2


def test_iso_limit_is_an_error(capsys):
    path = str(FIXTURES / "hard" / "c6.txt")
    code, _, err = run(capsys, "iso", path, path, "--mode", "exhaustive", "--max-probes", "0")
    assert code == 2 and "limit" in err


def test_iso_output_modes(files, capsys):
    code, out, _ = run(capsys, "iso", files["c5"], files["c5"], "--output", "csv")
    assert code == 0 and read_bench_csv(out)[0].verdict is True
    code, out, _ = run(capsys, "iso", files["c5"], files["c5"], "--output", "quiet")
    assert code == 0 and out == ""


def test_disconnected_notice(capsys):
    code, _, err = run(capsys, "iso", str(FIXTURES / "hard" / "c6.txt"), str(FIXTURES / "hard" / "2c3.txt"))
    assert code == 1 and "disconnected" in err


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("MPISO_SEED", "77")
    _, out, _ = run(capsys, "iso", files["c5"], files["c5"])
    assert json.loads(out)["seed"] == 77
    _, out, _ = run(capsys, "iso", files["c5"], files["c5"], "--seed", "3")
    assert json.loads(out)["seed"] == 3


def test_tc15_input(tmp_path, capsys):
    a = tmp_path / "x.A00"
    a.write_bytes(encode_tc15(C5))
    assert run(capsys, "iso", str(a), str(a))[0] == 0
    assert run(capsys, "iso", str(a), str(a), "--format", "tc15")[0] == 0


def test_auto(files, capsys, tmp_path):
    code, out, _ = run(capsys, "auto", files["c5"])
    rep = json.loads(out)
    assert code == 0 and rep["found"]
    m = rep["automorphisms"][0]
    assert validate_mapping(C5, C5, m) and m != list(range(5))
    code, out, _ = run(capsys, "auto", RIGID)
    assert code == 1 and json.loads(out)["automorphisms"] == []
    assert run(capsys, "auto", str(tmp_path / "nope.txt"))[0] == 2
    code, out, _ = run(capsys, "auto", files["c5"], "--count", "3")
    assert len(json.loads(out)["automorphisms"]) == 3


def test_canon(files, capsys):
    code, out, _ = run(capsys, "canon", files["p3"])
    d = json.loads(out)
    assert code == 0 and [c["original"] for c in d["cells"]] == [[1], [0, 2]]


def test_bench_sweep(capsys, tmp_path):
    fig = tmp_path / "scaling.png"
    code, out, _ = run(capsys, "bench", "--sizes", "16,32,64", "--pairs", "20", "--plot", str(fig))
    recs = read_bench_csv(out)
    assert code == 0
    assert len([r for r in recs if r.pair_id != "median"]) == 60
    meds = [r for r in recs if r.pair_id == "median"]
    assert [r.M for r in meds] == [16, 32, 64]
    assert all(r.verdict is True for r in recs if r.pair_id != "median")
    assert fig.stat().st_size > 0


def test_bench_directory(capsys, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, out, _ = run(capsys, "bench", str(empty))
    assert code == 0 and out.strip() == "family,M,pair_id,verdict,probes,rounds,wall_time_us"

    d = tmp_path / "db"
    d.mkdir()
    for k in range(3):
        (d / f"iso_r001_s5.A0{k}").write_bytes(encode_tc15(C5))
        (d / f"iso_r001_s5.B0{k}").write_bytes(encode_tc15(C5))
    (d / "iso_r001_s5.B01").write_bytes(b"\x05\x00\x09")  # corrupt
    csv_path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "bench", str(d), "--csv", str(csv_path), "--jobs", "2")
    recs = read_bench_csv(out)
    assert code == 0
    assert [r.verdict for r in recs] == [True, "error", True, "median"]
    assert csv_path.read_text() == out
    assert run(capsys, "bench", str(tmp_path / "missing"))[0] == 2


def test_gen(tmp_path, capsys):
    prefix = tmp_path / "pair"
    args = ["gen", "random", "--n", "12", "--rho", "0.3", "--connected", "--seed", "5", "--perm-seed", "6",
            "--out", str(prefix)]
    assert run(capsys, *args)[0] == 0
    g1, g2 = read_graph(f"{prefix}_a.txt"), read_graph(f"{prefix}_b.txt")
    sigma = json.loads((tmp_path / "pair_map.json").read_text())["mapping"]
    assert validate_mapping(g1, g2, sigma)
    first = [(tmp_path / f).read_bytes() for f in ("pair_a.txt", "pair_b.txt", "pair_map.json")]
    assert run(capsys, *args)[0] == 0
    assert first == [(tmp_path / f).read_bytes() for f in ("pair_a.txt", "pair_b.txt", "pair_map.json")]
    assert run(capsys, "gen", "regular", "--n", "5", "--d", "3", "--out", str(prefix))[0] == 2


def test_gen_permutes_by_default(tmp_path, capsys):
    prefix = tmp_path / "pair"
    assert run(capsys, "gen", "cycle", "--n", "10", "--seed", "3", "--out", str(prefix))[0] == 0
    sigma = json.loads((tmp_path / "pair_map.json").read_text())["mapping"]
    assert sigma != list(range(10))
    g1, g2 = read_graph(f"{prefix}_a.txt"), read_graph(f"{prefix}_b.txt")
    assert validate_mapping(g1, g2, sigma)
