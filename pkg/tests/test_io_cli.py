import json

import numpy as np
import pytest

from tastic.cli import main
from tastic.datagen import generate, preset
from tastic.dissimilarity import TravelParams, dissim_matrix
from tastic.io import (
    DatasetParseError,
    load_config,
    load_dataset,
    load_labels,
    load_matrix,
    matrix_csv,
    save_dataset,
)


@pytest.fixture
def small(tmp_path):
    series, truth = generate(preset("G3_3", seed=2))
    path = tmp_path / "data.csv"
    save_dataset(path, series, truth)
    return path, series, truth


def test_dataset_round_trip(small):
    path, series, truth = small
    again, t2 = load_dataset(path)
    assert t2 == truth
    assert [s.id for s in again] == [s.id for s in series]
    assert all(np.array_equal(a.values, b.values) for a, b in zip(again, series))


def test_unlabelled_dataset(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("id,t1,t2,t3\na,1,2,3\nb,3,2,1\n")
    series, truth = load_dataset(p)
    assert truth is None and len(series) == 2


@pytest.mark.parametrize("text,where", [
    ("id,t1,t2,t3\na,1,2,3\nb,3,2\n", "row 3"),
    ("id,t1,t2\na,1,x\n", "row 2, column 3"),
    ("id,t1,t2\na,1,nan\n", "row 2, column 3"),
    ("name,t1,t2\na,1,2\n", "row 1"),
])
def test_parse_errors_name_position(tmp_path, text, where):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(DatasetParseError, match=where):
        load_dataset(p)


def test_matrix_round_trip(tmp_path, small):
    _, series, _ = small
    D = dissim_matrix(series, TravelParams(alpha=0.9))
    p = tmp_path / "m.csv"
    p.write_text(matrix_csv(D))
    back = load_matrix(p)
    assert np.array_equal(back.entries, D.entries) and back.ids == D.ids


def test_config_formats(tmp_path):
    j = tmp_path / "c.json"
    j.write_text(json.dumps({"L": 2, "C": 0.5}))
    kv = tmp_path / "c.txt"
    kv.write_text("# comment\nL = 2\nC=0.5\n")
    assert load_config(j) == load_config(kv) == {"L": 2, "C": 0.5}


# -- CLI ------------------------------------------------------------------


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_unknown_preset(capsys):
    code, out, _ = run(capsys, "gen", "G1_1", "--seed", "3")
    assert code == 0 and len(out.splitlines()) == 31
    assert out.startswith("id,label,t1,")
    code, _, err = run(capsys, "gen", "G9_9")
    assert code == 2 and "unknown preset" in err


def test_mixed_length_rows_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("id,t1,t2,t3\na,1,2,3\nb,1,2\n")
    code, _, err = run(capsys, "distmat", p)
    assert code == 2 and "row 3" in err


def test_bad_arguments_exit_2(small, capsys):
    path, _, _ = small
    assert run(capsys, "cluster", path, "--k", "500")[0] == 2
    assert run(capsys, "cluster", path)[0] == 2
    assert run(capsys, "distmat", path, "--L", "12")[0] == 2
    assert run(capsys, "distmat", path, "--E", "0.1,0.2")[0] == 2
    assert run(capsys, "distmat", path, "--measure", "dtw")[0] == 2
    assert run(capsys, "distmat", path.with_name("missing.csv"))[0] == 2


def test_distmat_thread_byte_identity(small, tmp_path):
    path, _, _ = small
    outs = []
    for t in (1, 4, 8):
        out = tmp_path / f"d{t}.csv"
        assert main(["distmat", str(path), "--threads", str(t), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_cluster_eval_profile_pipeline(small, tmp_path, capsys):
    path, _, truth = small
    labels = tmp_path / "labels.csv"
    summary = tmp_path / "summary.json"
    assert main(["cluster", str(path), "--k", "4", "--out", str(labels), "--summary", str(summary)]) == 0
    info = json.loads(summary.read_text())
    assert info["k"] == 4 and sum(info["sizes"]) == 40 and 0 < info["alpha"] <= 1
    assert info["alpha_source"] == "default(p=0.09)"
    ids, lab = load_labels(labels)
    assert len(ids) == 40 and lab.k == 4

    code, out, _ = run(capsys, "eval", labels, path)
    assert code == 0
    res = json.loads(out)
    assert 0 <= res["accuracy"] <= 1 and -1 <= res["ari"] <= 1

    code, out, _ = run(capsys, "eval", path, path)
    assert json.loads(out) == {"accuracy": 1.0, "ari": 1.0}

    code, out, _ = run(capsys, "profile", path, labels)
    assert code == 0
    groups = json.loads(out)["groups"]
    assert [g["group"] for g in groups] == [1, 2, 3, 4]
    assert "threshold_counts" in groups[0]

    code, out, _ = run(capsys, "profile", path, labels, "--thresholds", "")
    assert code == 0 and "threshold_counts" not in json.loads(out)["groups"][0]


def test_elbow_cli(small, capsys):
    path, _, _ = small
    code, out, _ = run(capsys, "elbow", path)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "k,wcd"
    ks = [int(line.split(",")[0]) for line in lines[1:]]
    vals = [float(line.split(",")[1]) for line in lines[1:]]
    assert ks == list(range(2, 11))
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_compare_cli(small, capsys):
    path, _, _ = small
    code, out, _ = run(capsys, "compare", path, "--methods", "euclidean,tastic")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "method,accuracy,ari,alpha"
    assert [r.split(",")[0] for r in rows[1:]] == ["euclidean", "tastic"]
    assert rows[1].endswith(",")


def test_config_file_and_override(small, tmp_path, capsys):
    path, series, _ = small
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"L": 1, "epsilon": 0.1, "alpha": 0.5}))
    code, out, _ = run(capsys, "distmat", path, "--config", cfg)
    assert code == 0
    m = tmp_path / "m.csv"
    m.write_text(out)
    want = dissim_matrix(series, TravelParams(L=1, E=(-0.1, 0.0, 0.1), alpha=0.5))
    assert np.array_equal(load_matrix(m).entries, want.entries)

    code, out, _ = run(capsys, "distmat", path, "--config", cfg, "--L", "2", "--E", "0")
    m.write_text(out)
    want = dissim_matrix(series, TravelParams(L=2, E=(0.0,), alpha=0.5))
    assert np.array_equal(load_matrix(m).entries, want.entries)

    cfg.write_text(json.dumps({"lag": 2}))
    assert run(capsys, "distmat", path, "--config", cfg)[0] == 2


def test_asymmetric_flag(small, capsys, tmp_path):
    path, series, _ = small
    code, out, _ = run(capsys, "distmat", path, "--asymmetric", "--alpha", "1")
    assert code == 0
    m = tmp_path / "m.csv"
    m.write_text(out)
    assert np.all(np.isfinite(load_matrix(m).entries))
