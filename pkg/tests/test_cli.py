import csv
import io
import json
import os

import pytest

from ordinalcode.cli import OUT_DIR_ENV, main

EXAMPLE = [18, 13, 8, 14, 5, 19]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def seqs(tmp_path):
    path = tmp_path / "seqs.jsonl"
    rows = [{"id": "ex", "items": EXAMPLE}, {"id": "up", "items": [1, 2, 3, 4, 5, 6]}]
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    return path


@pytest.fixture(autouse=True)
def no_out_dir(monkeypatch):
    monkeypatch.delenv(OUT_DIR_ENV, raising=False)


def test_encode(capsys, seqs):
    code, out, _ = run(capsys, "encode", "--in", str(seqs), "--seed", "7", "--k", "256")
    rows = jsonl(out)
    assert code == 0 and [r["id"] for r in rows] == ["ex", "up"]
    assert all(len(r["y"]) == 256 for r in rows)
    code2, out2, _ = run(capsys, "encode", "--in", str(seqs), "--seed", "7", "--k", "256")
    assert out2 == out


def test_learn_recognize_decode_pipeline(capsys, seqs, tmp_path):
    book = tmp_path / "book.json"
    assert run(capsys, "learn", "--in", str(seqs), "--seed", "3", "--k", "64", "--out", str(book))[0] == 0
    stored = json.loads(book.read_text())
    assert len(stored["entries"]) == 2 and stored["K"] == 64
    code, out, _ = run(capsys, "recognize", "--book", str(book), "--seq", "180,130,80,140,50,190")
    assert code == 0 and jsonl(out) == [{"id": "arg", "z": 0, "similarity": 1.0}]
    code, out, _ = run(capsys, "decode", "--book", str(book), "--z", "0", "--bag", "5,8,13,14,18,19")
    assert code == 0 and jsonl(out)[0]["items"] == EXAMPLE


def test_tree_weights(capsys):
    code, out, _ = run(capsys, "tree", "--weights", "--dyck", "--seq", ",".join(map(str, EXAMPLE)))
    row = jsonl(out)[0]
    assert code == 0
    assert sorted(row["weights"]) == sorted(["1/2", "1/4", "1/8", "3/8", "1/16", "3/4"])
    assert row["dyck"] == "(((()))())()"


def test_dyck(capsys):
    assert run(capsys, "dyck", "--validate", "(())()")[0] == 0
    assert run(capsys, "dyck", "--validate", "())(")[0] == 1
    code, out, _ = run(capsys, "dyck", "--sortable", "2,3,1")
    assert code == 0 and jsonl(out)[0]["stack_sortable"] is False


def test_huffman_pipeline(capsys, tmp_path):
    table = tmp_path / "table.json"
    table.write_text(json.dumps({"a": 2, "b": 1, "c": 1}))
    codec = tmp_path / "codec.json"
    assert run(capsys, "huffman", "build", "--table", str(table), "--out", str(codec))[0] == 0
    streams = tmp_path / "streams.jsonl"
    streams.write_text(json.dumps({"id": "s", "symbols": ["a", "c", "b"]}) + "\n")
    labels = tmp_path / "labels.jsonl"
    assert run(capsys, "huffman", "encode", "--codec", str(codec), "--in", str(streams), "--out", str(labels))[0] == 0
    assert jsonl(labels.read_text())[0]["labels"] == [1, 2, 2, 2, 1]
    code, out, _ = run(capsys, "huffman", "decode", "--codec", str(codec), "--in", str(labels))
    assert code == 0 and jsonl(out)[0]["symbols"] == ["a", "c", "b"]


def test_stdp(capsys):
    code, out, _ = run(capsys, "stdp", "--seq", "30,10,20", "--kernel", "invdist", "--epsilon", "0.01")
    row = jsonl(out)[0]
    assert code == 0 and row["recovered"] == [1, 2, 0] and row["kernel"] == "inverse-distance"


def test_detect_corpus(capsys, tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    words = [("totobu", ["to", "to", "bu"], "AAB"), ("pesipe", ["pe", "si", "pe"], "ABA")]
    corpus.write_text("".join(json.dumps({"word": w, "tokens": t, "label": l}) + "\n" for w, t, l in words))
    code, out, _ = run(capsys, "detect", "--in", str(corpus), "--template", "XYX")
    rows = jsonl(out)
    assert code == 0 and all(r["correct"] for r in rows)
    assert [r["match"] for r in rows] == [False, True]


def test_harlow_csv(capsys):
    code, out, _ = run(capsys, "harlow", "--episodes", "3", "--seed", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 18
    assert list(rows[0]) == ["episode", "trial", "choice", "reward"]


def test_usage_error(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "tree", "--bogus")[0] == 2


def test_parse_error_is_json(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json\n")
    code, _, err = run(capsys, "tree", "--in", str(bad))
    assert code == 3
    assert json.loads(err)["exit_code"] == 3


def test_precondition_error(capsys):
    code, _, err = run(capsys, "tree", "--seq", "1,1,2")
    assert code == 4 and json.loads(err)["error"] == "DuplicateItem"
    assert run(capsys, "verify", "nope")[0] == 4


def test_io_error(capsys, tmp_path):
    assert run(capsys, "tree", "--in", str(tmp_path / "missing.jsonl"))[0] == 5
    out = tmp_path / "no" / "such" / "dir" / "x.jsonl"
    os.chmod(tmp_path, 0o500)
    try:
        code = run(capsys, "tree", "--seq", "1,2", "--out", str(out))[0]
    finally:
        os.chmod(tmp_path, 0o700)
    assert code in (0, 5)  # root may ignore the permission bits


def test_no_partial_output_on_error(capsys, tmp_path):
    out = tmp_path / "out.jsonl"
    seqs = tmp_path / "seqs.jsonl"
    seqs.write_text(json.dumps({"id": "a", "items": [1, 2]}) + "\n" + json.dumps({"id": "b", "items": [1, 1]}) + "\n")
    assert run(capsys, "tree", "--in", str(seqs), "--out", str(out))[0] == 4
    assert not out.exists()
    assert list(tmp_path.iterdir()) == [seqs]


def test_env_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "tree", "--dyck", "--seq", "2,1,3")
    assert code == 0 and out == ""
    assert jsonl((tmp_path / "tree.jsonl").read_text())[0]["dyck"] == "(())()"


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 5\nk = 16\n")
    a = run(capsys, "encode", "--config", str(cfg), "--seq", "3,1,2")[1]
    b = run(capsys, "encode", "--seed", "5", "--k", "16", "--seq", "3,1,2")[1]
    c = run(capsys, "encode", "--config", str(cfg), "--k", "8", "--seq", "3,1,2")[1]
    assert a == b
    assert len(jsonl(c)[0]["y"]) == 8


def test_verify_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    code1, out1, _ = run(capsys, "verify", "tasks", "--format", "csv", "--out", str(first))
    code2, out2, _ = run(capsys, "verify", "tasks", "--format", "csv", "--out", str(second))
    assert code1 == code2 == 0
    assert out1 == out2 and out1.startswith("PASS tasks/")
    assert first.read_bytes() == second.read_bytes()
