import json

import numpy as np
import pytest

from modspec.cli import main, render_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def bridge_tsv(tmp_path, capsys):
    path = tmp_path / "bridge.tsv"
    code, _, _ = run(capsys, "generate", "classical", "--name", "two_cliques_bridge",
                     "--m", "5", "-o", str(path))
    assert code == 0
    return str(path)


@pytest.fixture
def block_tsv(tmp_path, capsys):
    path = tmp_path / "block.tsv"
    code, _, _ = run(capsys, "generate", "block", "--sizes", "15,15",
                     "--p", "0.6,0.08;0.08,0.6", "--seed", "3", "-o", str(path))
    assert code == 0
    return str(path)


def test_spectrum_report_structure(bridge_tsv, capsys):
    code, out, err = run(capsys, "spectrum", bridge_tsv, "--eps", "0.3",
                         "--eps", "0.5", "--top", "4")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["input", "spectrum"]
    assert doc["input"]["n"] == 10
    assert doc["input"]["connected"] is True
    assert doc["input"]["analyzed_n"] == 10
    assert len(doc["spectrum"]["lambdas"]) == 4
    assert len(doc["spectrum"]["mus"]) == 4
    assert doc["spectrum"]["structural_counts"] == {"0.3": 2, "0.5": 1}
    assert doc["spectrum"]["mus"][0] == pytest.approx(0.9273994175349938, abs=1e-9)


def test_spectrum_rerun_byte_identical(bridge_tsv, capsys):
    code1, out1, _ = run(capsys, "spectrum", bridge_tsv, "--eps", "0.25")
    code2, out2, _ = run(capsys, "spectrum", bridge_tsv, "--eps", "0.25")
    assert code1 == code2 == 0
    assert out1 == out2


def test_json_round_trip_idempotent(bridge_tsv, capsys):
    _, out, _ = run(capsys, "cluster", bridge_tsv, "--k", "2", "--seed", "7")
    doc = json.loads(out)
    assert render_json(doc) + "\n" == out


def test_cluster_report(bridge_tsv, capsys):
    code, out, _ = run(capsys, "cluster", bridge_tsv, "--k", "2", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["input", "spectrum", "clustering"]
    block = doc["clustering"]
    assert block["k"] == 2 and block["seed"] == 7 and block["restarts"] == 20
    labels = block["labels"]
    assert len(labels) == 10
    # the two cliques are the optimal split
    assert len({labels[f"v{i}"] for i in range(5)}) == 1
    assert len({labels[f"v{i}"] for i in range(5, 10)}) == 1
    assert labels["v0"] != labels["v9"]
    assert block["duality_residual"] <= 1e-10
    assert block["modularity"] + block["normalized_cut"] == pytest.approx(1.0, abs=1e-10)
    assert block["modularity"] <= block["relaxation_upper"] + 1e-10


def test_cluster_k1_trivial(bridge_tsv, capsys):
    code, out, _ = run(capsys, "cluster", bridge_tsv, "--k", "1", "--seed", "0")
    assert code == 0
    doc = json.loads(out)
    block = doc["clustering"]
    assert set(block["labels"].values()) == {0}
    assert block["k_variance"] == 0
    assert block["modularity"] == 0
    assert block["normalized_cut"] == 0


def test_regularity_report(bridge_tsv, capsys):
    code, out, _ = run(capsys, "regularity", bridge_tsv, "--k", "2", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["input", "spectrum", "clustering", "regularity"]
    reg = doc["regularity"]
    assert reg["k"] == 2
    assert len(reg["pairs"]) == 3
    assert reg["bound"] == pytest.approx(np.sqrt(4.0) * reg["s"] + reg["eps"], abs=1e-12)
    for pair in reg["pairs"]:
        assert pair["method"] == "exact"
        assert isinstance(pair["witness_x"], list)
        assert all(isinstance(v, str) for v in pair["witness_x"])
        assert pair["alpha"] >= 0.0


def test_regularity_samples_zero_skips_large_pairs(block_tsv, capsys):
    code, out, _ = run(capsys, "regularity", block_tsv, "--k", "2", "--seed", "1",
                       "--samples", "0", "--exact-max", "10")
    assert code == 0
    doc = json.loads(out)
    for pair in doc["regularity"]["pairs"]:
        assert pair["method"] == "skipped"
        assert pair["alpha"] is None
        assert pair["witness_x"] is None


def test_regularity_sampled_rerun_identical(block_tsv, capsys):
    args = ("regularity", block_tsv, "--k", "2", "--seed", "5",
            "--samples", "100", "--exact-max", "10")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert {p["method"] for p in doc["regularity"]["pairs"]} == {"sampled"}


def test_generate_classical_complete(tmp_path, capsys):
    path = tmp_path / "k3.tsv"
    code, out, err = run(capsys, "generate", "classical", "--name", "complete",
                         "--n", "3", "-o", str(path))
    assert code == 0
    assert out == ""
    assert "n=3 edges=3" in err
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 3
    assert lines[0].split("\t")[:2] == ["v0", "v1"]


def test_generate_errors(tmp_path, capsys):
    out_path = str(tmp_path / "x.tsv")
    code, _, err = run(capsys, "generate", "block", "--sizes", "5,5",
                       "--p", "0.5,0.1;0.2,0.5", "--seed", "0", "-o", out_path)
    assert code == 2 and "BadSize" in err
    code, _, err = run(capsys, "generate", "block", "--sizes", "5,5",
                       "--p", "0.5,0.1;0.1,0.5", "-o", out_path)
    assert code == 2 and "seed" in err
    code, _, err = run(capsys, "generate", "classical", "--name", "complete_bipartite",
                       "--a", "2", "-o", out_path)
    assert code == 2 and "--b" in err
    code, _, err = run(capsys, "generate", "block", "--sizes", "5,x",
                       "--p", "0.5", "--seed", "0", "-o", out_path)
    assert code == 2


def test_converge_spectrum_csv(block_tsv, tmp_path, capsys):
    out_path = tmp_path / "conv.csv"
    code, out, err = run(capsys, "converge", block_tsv, "--mode", "spectrum",
                         "--schedule", "8,16", "--trials", "3", "--j", "2",
                         "--seed", "5", "-o", str(out_path))
    assert code == 0
    assert "mode=spectrum" in err
    text = out_path.read_text()
    assert text.endswith("\n") and "\r" not in text
    lines = text.strip().split("\n")
    assert lines[0] == "m,trial,mu_1,mu_2,err_1,err_2,coverage,flagged"
    assert len(lines) == 1 + 2 * 3 + 2
    median_rows = [l for l in lines if ",median," in l]
    assert len(median_rows) == 2
    # byte-identical rerun
    out2 = tmp_path / "conv2.csv"
    run(capsys, "converge", block_tsv, "--mode", "spectrum", "--schedule", "8,16",
        "--trials", "3", "--j", "2", "--seed", "5", "-o", str(out2))
    assert out2.read_bytes() == out_path.read_bytes()


def test_converge_blowup_csv(tmp_path, capsys):
    graph = tmp_path / "blocks3.tsv"
    # deterministic three-block weighted graph has the needed spectral gap
    text_lines = []
    sizes = [0, 4, 8, 12]
    for i in range(12):
        for j in range(i + 1, 12):
            same = any(lo <= i < hi and lo <= j < hi
                       for lo, hi in zip(sizes, sizes[1:]))
            w = 0.6 if same else 0.1
            text_lines.append(f"x{i:02d}\tx{j:02d}\t{w}")
    graph.write_text("\n".join(text_lines) + "\n")
    out_path = tmp_path / "blow.csv"
    code, _, err = run(capsys, "converge", str(graph), "--mode", "blowup",
                       "--schedule", "1,2,4", "--k", "3", "-o", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "t,distance"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1" and float(first[1]) == 0.0


def test_converge_error_paths(block_tsv, tmp_path, capsys):
    out_path = str(tmp_path / "x.csv")
    code, _, err = run(capsys, "converge", block_tsv, "--mode", "spectrum",
                       "--schedule", "8,500", "--trials", "2", "--j", "1",
                       "--seed", "0", "-o", out_path)
    assert code == 2 and "BadSize" in err
    code, _, err = run(capsys, "converge", block_tsv, "--mode", "spectrum",
                       "--schedule", "8,16", "--trials", "2", "--j", "1",
                       "-o", out_path)
    assert code == 2 and "seed" in err
    code, _, err = run(capsys, "converge", block_tsv, "--mode", "kvariance",
                       "--schedule", "8,16", "--trials", "2", "--k", "2",
                       "-o", out_path)
    assert code == 2 and "seed" in err


def test_input_error_exit_codes(tmp_path, capsys):
    code, _, err = run(capsys, "spectrum", str(tmp_path / "missing.tsv"))
    assert code == 2 and "FileNotFoundError" in err
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\tb\t-1\n")
    code, _, err = run(capsys, "spectrum", str(bad))
    assert code == 2 and "NegativeWeight" in err
    loops = tmp_path / "loop.tsv"
    loops.write_text("a\ta\t1\n")
    code, _, err = run(capsys, "spectrum", str(loops))
    assert code == 2 and "SelfLoop" in err


def test_largest_component_flag(tmp_path, capsys):
    path = tmp_path / "disc.tsv"
    path.write_text("a\tb\t1.0\nc\td\t1.0\nd\te\t1.0\n")
    code, _, err = run(capsys, "spectrum", str(path))
    assert code == 2 and "Disconnected" in err
    code, out, _ = run(capsys, "spectrum", str(path), "--largest-component")
    assert code == 0
    doc = json.loads(out)
    assert doc["input"]["n"] == 5
    assert doc["input"]["analyzed_n"] == 3
    assert doc["input"]["largest_component_used"] is True
    assert doc["input"]["connected"] is False


def test_bad_eps_rejected(bridge_tsv, capsys):
    code, _, err = run(capsys, "spectrum", bridge_tsv, "--eps", "1.5")
    assert code == 2 and "ValueError" in err
