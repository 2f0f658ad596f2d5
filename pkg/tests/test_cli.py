"""CLI behaviour and golden-file determinism.

Set DISTFEAT_REGEN_GOLDEN=1 to rewrite tests/golden/cli/ from the current build.
"""

import json
import os
import shutil
import subprocess
import sys

import numpy as np
import pytest

from distfeat import cli, features, kmeans
from distfeat.corpus import load_corpus

REGEN = os.environ.get("DISTFEAT_REGEN_GOLDEN") == "1"

SW = ["--stopwords", "stopwords.txt"]
GATES = "corpus/finance/gates_article.txt"

# name -> (argv, files written by the command that are also golden)
GOLDEN_CASES = {
    "stats_table": (["stats", GATES, *SW], []),
    "stats_csv": (["stats", GATES, *SW, "--format", "csv"], []),
    "stats_json": (["stats", GATES, *SW, "--corpus", "corpus", "--format", "json"], []),
    "stats_tfidf": (["stats", GATES, *SW, "--corpus", "corpus", "--scheme", "tfidf"], []),
    "histogram_table": (["histogram", GATES, *SW, "--corpus", "corpus", "--top", "5"], []),
    "histogram_csv": (["histogram", GATES, *SW, "--format", "csv", "--bins", "4"], []),
    "histogram_json": (["histogram", GATES, *SW, "--format", "json", "--svg", "hist.svg"], ["hist.svg"]),
    "histogram_term_table": (["histogram", "corpus", "--term", "gates", "--svg", "rank.svg"], ["rank.svg"]),
    "histogram_term_csv": (["histogram", "corpus", "--term", "gates", "--format", "csv"], []),
    "histogram_term_json": (["histogram", "corpus", "--term", "roses", "--format", "json"], []),
    "train_table": (["train", "synthetic", "-o", "plain.model", "--k", "3"], ["plain.model"]),
    "train_compressed_json": (
        ["train", "synthetic", "-o", "comp.model", "--compress", "--clusters-per-category", "3",
         "--seed", "5", "--format", "json"], ["comp.model"]),
    "cluster_table": (["cluster", "synthetic", "--k", "2", "--seed", "3",
                       "--assignments", "assign.csv", "--summary", "summary.json"],
                      ["assign.csv", "summary.json"]),
    "cluster_csv": (["cluster", "corpus", "--k", "2", "--format", "csv"], []),
    "cluster_json": (["cluster", "corpus", "--k", "3", "--format", "json", "--scheme", "tfidf"], []),
    "evaluate_table": (["evaluate", "synthetic", "--log", "log.csv"], ["log.csv"]),
    "evaluate_csv": (["evaluate", "synthetic", "--format", "csv", "--k", "1"], []),
    "evaluate_json": (["evaluate", "synthetic", "--format", "json", "--compress"], []),
    "gen_fixture_table": (["gen-fixture", "generated"], []),
    "gen_fixture_json": (["gen-fixture", "generated", "--format", "json", "--docs-per-category", "3"], []),
}

CLASSIFY_DOCS = ["synthetic/computing/computing_00.txt", "synthetic/medicine/medicine_03.txt", GATES]


@pytest.fixture
def workdir(tmp_path, fixtures_dir, monkeypatch):
    for name in ("corpus", "synthetic"):
        shutil.copytree(fixtures_dir / name, tmp_path / name)
    shutil.copy(fixtures_dir / "stopwords.txt", tmp_path / "stopwords.txt")
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def check_golden(golden_dir, name, text):
    path = golden_dir / "cli" / name
    if REGEN:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    assert path.exists(), f"missing golden file {path}; run with DISTFEAT_REGEN_GOLDEN=1"
    assert text == path.read_text(encoding="utf-8")


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_and_deterministic(name, workdir, capsys, golden_dir):
    argv, files = GOLDEN_CASES[name]
    code, first, err = run(argv, capsys)
    assert code == 0, err
    assert err == ""
    written = {f: (workdir / f).read_bytes() for f in files}
    code, second, _ = run(argv, capsys)
    assert code == 0
    assert first == second
    for f in files:
        assert (workdir / f).read_bytes() == written[f]

    check_golden(golden_dir, f"{name}.out", first)
    for f in files:
        check_golden(golden_dir, f"{name}.{f}", written[f].decode("utf-8"))
    if "--format" in argv and argv[argv.index("--format") + 1] == "json":
        assert json.dumps(json.loads(first), indent=2, ensure_ascii=False) + "\n" == first


@pytest.mark.parametrize("fmt", ["table", "csv", "json"])
@pytest.mark.parametrize("model", ["plain", "compressed"])
def test_classify_golden(fmt, model, workdir, capsys, golden_dir):
    extra = ["--compress", "--clusters-per-category", "2"] if model == "compressed" else []
    assert run(["train", "synthetic", "-o", "m.model", *extra], capsys)[0] == 0
    argv = ["classify", "m.model", *CLASSIFY_DOCS, "--format", fmt]
    code, out, err = run(argv, capsys)
    assert code == 0, err
    assert run(argv, capsys)[1] == out
    check_golden(golden_dir, f"classify_{model}_{fmt}.out", out)


class TestStats:
    def test_gates_has_maximal_content_count(self, workdir, capsys):
        code, out, _ = run(["stats", GATES, *SW, "--format", "json"], capsys)
        rows = {r["term"]: r for r in json.loads(out)["terms"]}
        assert json.loads(out)["paragraphs"] == 7
        assert rows["gates"]["count"] == max(r["count"] for r in rows.values()) == 7

    def test_single_paragraph_all_zero(self, workdir, capsys):
        (workdir / "one.txt").write_text("just one paragraph with words words\n")
        code, out, _ = run(["stats", "one.txt", "--format", "json"], capsys)
        assert code == 0
        for r in json.loads(out)["terms"]:
            assert r["first"] == r["last"] == r["centroid"] == 0

    def test_missing_file(self, workdir, capsys):
        code, out, err = run(["stats", "nope.txt"], capsys)
        assert code == 1 and out == "" and "nope.txt" in err

    def test_empty_document(self, workdir, capsys):
        (workdir / "empty.txt").write_text("\n\n  \n")
        code, _, err = run(["stats", "empty.txt"], capsys)
        assert code == 1 and "no tokens" in err

    def test_csv_and_table_parity(self, workdir, capsys):
        _, table, _ = run(["stats", GATES, *SW], capsys)
        _, csv_out, _ = run(["stats", GATES, *SW, "--format", "csv"], capsys)
        table_rows = [line.split() for line in table.splitlines()[7:]]
        csv_rows = [line.split(",") for line in csv_out.splitlines()[1:]]
        assert len(table_rows) == len(csv_rows)
        for t, c in zip(table_rows, csv_rows):
            assert t[:2] == c[:2]
            assert t[2:] == [f"{float(x):.6f}" for x in c[2:]]


class TestHistogram:
    def test_bins_sum_to_distinct_terms(self, workdir, capsys):
        _, out, _ = run(["histogram", GATES, "--bins", "10", "--format", "json"], capsys)
        data = json.loads(out)
        assert sum(b["count"] for b in data["bins"]) == data["terms"]
        doc = load_corpus(workdir / "corpus").get("finance/gates_article.txt")
        assert data["terms"] == len(set(doc.tokens()))

    def test_term_ranking(self, workdir, capsys):
        _, out, _ = run(["histogram", "corpus", "--term", "gates", "--format", "json"], capsys)
        assert json.loads(out)["documents"][0]["id"] == "finance/gates_article.txt"

    def test_unknown_term(self, workdir, capsys):
        code, _, err = run(["histogram", "corpus", "--term", "zyzzyva"], capsys)
        assert code == 1 and "zyzzyva" in err

    def test_csv_table_parity(self, workdir, capsys):
        _, table, _ = run(["histogram", "corpus", "--term", "gates"], capsys)
        _, csv_out, _ = run(["histogram", "corpus", "--term", "gates", "--format", "csv"], capsys)
        t = [line.split() for line in table.splitlines()[3:]]
        c = [line.split(",") for line in csv_out.splitlines()[1:]]
        assert [r[1] for r in t] == [r[1] for r in c]
        assert [r[2] for r in t] == [f"{float(r[2]):.6f}" for r in c]

    def test_zero_bins(self, workdir, capsys):
        assert run(["histogram", GATES, "--bins", "0"], capsys)[0] == 1


class TestTrainClassify:
    def test_training_document_gets_own_label(self, workdir, capsys):
        assert run(["train", "synthetic", "-o", "m.model", "--k", "1"], capsys)[0] == 0
        corpus = load_corpus(workdir / "synthetic")
        docs = [d.id for d in corpus.documents[::7]]
        _, out, _ = run(["classify", "m.model", *[f"synthetic/{d}" for d in docs],
                         "--k", "1", "--format", "json"], capsys)
        for row, doc_id in zip(json.loads(out), docs):
            assert row["label"] == corpus.get(doc_id).label

    def test_malformed_model(self, workdir, capsys):
        (workdir / "bad.model").write_text("distfeat-model\t99\n")
        code, out, err = run(["classify", "bad.model", GATES], capsys)
        assert code == 1 and out == "" and "version" in err

    def test_k_out_of_range(self, workdir, capsys):
        assert run(["train", "corpus", "-o", "m.model", "--k", "2"], capsys)[0] == 0
        code, _, err = run(["classify", "m.model", GATES, "--k", "50"], capsys)
        assert code == 1 and "k=50" in err
        code, _, err = run(["train", "corpus", "-o", "m2.model", "--k", "9"], capsys)
        assert code == 1 and "k=9" in err

    def test_model_records_weighting(self, workdir, capsys):
        run(["train", "synthetic", "-o", "m.model", "--scheme", "tfidf"], capsys)
        assert "scheme\ttfidf" in (workdir / "m.model").read_text()


class TestCluster:
    def test_k1_total_squared_deviation(self, workdir, capsys):
        _, out, _ = run(["cluster", "synthetic", "--k", "1", "--format", "json"], capsys)
        corpus = load_corpus(workdir / "synthetic")
        vecs = [features.vectorize(d, corpus, features.WeightingParams()).entries
                for d in corpus.documents]
        X, _ = kmeans.densify(vecs)
        assert json.loads(out)["objective"] == pytest.approx(((X - X.mean(0)) ** 2).sum(), rel=1e-12)

    def test_too_many_clusters(self, workdir, capsys):
        assert run(["cluster", "corpus", "--k", "10"], capsys)[0] == 1


class TestEvaluate:
    def test_recall_comparison_printed(self, workdir, capsys):
        _, out, _ = run(["evaluate", "synthetic", "--schemes", "tfidf,distributional"], capsys)
        assert "== tfidf ==" in out and "== distributional(alpha=1,beta=1) ==" in out
        assert out.strip().splitlines()[-1].startswith("macro recall: tfidf")

    def test_unknown_scheme(self, workdir, capsys):
        assert run(["evaluate", "synthetic", "--schemes", "bm25"], capsys)[0] == 1


class TestConfig:
    def test_config_file_and_flag_override(self, workdir, capsys):
        (workdir / "run.ini").write_text(
            "[tokenizer]\nstopwords_file = stopwords.txt\n"
            "[weighting]\nscheme = tfidf\n"
            "[output]\nformat = json\n"
            "[run]\ncorpus_root = corpus\n"
        )
        _, out, _ = run(["stats", GATES, "--config", "run.ini"], capsys)
        data = json.loads(out)
        assert data["scheme"] == "tfidf" and data["idf"] == "corpus corpus"
        assert "the" not in {r["term"] for r in data["terms"]}
        _, out, _ = run(["stats", GATES, "--config", "run.ini", "--scheme", "distributional",
                         "--format", "csv"], capsys)
        assert out.startswith("term,count")

    def test_bad_config_value(self, workdir, capsys):
        (workdir / "bad.ini").write_text("[output]\nformat = xml\n")
        code, _, err = run(["stats", GATES, "--config", "bad.ini"], capsys)
        assert code == 1 and "format" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["stats"])
    assert exc.value.code == 2


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "distfeat", "stats",
                           str(fixtures_dir / "corpus/garden/roses.txt"), "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    assert proc.stdout.startswith("term,count,first,last,centroid,compactness,weight\n")
