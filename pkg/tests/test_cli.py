import json

import numpy as np
import pytest

from conceptbag.cli import main
from conceptbag.embeddings import load_word_vectors

POS_WORDS = ["good", "great", "nice", "superb"]
NEG_WORDS = ["bad", "awful", "poor", "dull"]
FILLERS = [f"word{i}" for i in range(12)]


@pytest.fixture
def polarity_root(tmp_path):
    """Tiny on-disk dataset in the root/{pos,neg}/*.txt layout."""
    rng = np.random.default_rng(0)
    for side, charged, label_dir in (("pos", POS_WORDS, "pos"), ("neg", NEG_WORDS, "neg")):
        d = tmp_path / "data" / label_dir
        d.mkdir(parents=True)
        for i in range(12):
            toks = [
                str(rng.choice(charged)) if rng.random() < 0.4 else str(rng.choice(FILLERS))
                for _ in range(25)
            ]
            (d / f"{side}{i}.txt").write_text(" ".join(toks), encoding="utf-8")
    return tmp_path / "data"


@pytest.fixture
def vectors_path(tmp_path):
    """Word vectors covering the fixture vocabulary, sentiment-structured."""
    rng = np.random.default_rng(1)
    words = POS_WORDS + NEG_WORDS + FILLERS
    path = tmp_path / "vectors.txt"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(words)} 6\n")
        for w in words:
            center = 2.0 if w in POS_WORDS else -2.0 if w in NEG_WORDS else 0.0
            row = " ".join(repr(float(v)) for v in rng.normal(center, 0.3, size=6))
            fh.write(f"{w} {row}\n")
    return path


def dataset_flags(polarity_root, vectors_path):
    return [
        "--embeddings", str(vectors_path),
        "--dataset-root", str(polarity_root),
        "--dataset-type", "polarity",
    ]


class TestTrainEmbeddings:
    def test_writes_loadable_vectors(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("a b a b c\nc a b a b\n" * 10, encoding="utf-8")
        out = tmp_path / "vecs.txt"
        rc = main([
            "train-embeddings", "--corpus", str(corpus), "--out", str(out),
            "--dim", "8", "--epochs", "2", "--min-count", "1", "--seed", "3",
        ])
        assert rc == 0
        wv = load_word_vectors(out)
        assert set(wv.words) == {"a", "b", "c"}
        assert wv.dim == 8
        assert out.read_text().splitlines()[0] == "3 8"

    def test_missing_corpus(self, tmp_path, capsys):
        rc = main([
            "train-embeddings", "--corpus", str(tmp_path / "nope.txt"),
            "--out", str(tmp_path / "v.txt"),
        ])
        assert rc == 1
        assert "not found" in capsys.readouterr().err

    def test_env_seed_override(self, tmp_path, monkeypatch):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("a b c d e\n" * 20, encoding="utf-8")
        outs = []
        for env, name in ((None, "v0.txt"), ("99", "v1.txt")):
            if env is None:
                monkeypatch.delenv("CONCEPTBAG_SEED", raising=False)
            else:
                monkeypatch.setenv("CONCEPTBAG_SEED", env)
            out = tmp_path / name
            assert main([
                "train-embeddings", "--corpus", str(corpus), "--out", str(out),
                "--dim", "4", "--epochs", "1", "--min-count", "1", "--seed", "0",
            ]) == 0
            outs.append(out.read_text())
        assert outs[0] != outs[1]


class TestCluster:
    def test_deterministic_byte_identical(self, tmp_path, polarity_root, vectors_path):
        outs = []
        for name in ("c1.bin", "c2.bin"):
            out = tmp_path / name
            rc = main(
                ["cluster", *dataset_flags(polarity_root, vectors_path),
                 "--K", "4", "--seed", "5", "--out", str(out)]
            )
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_text_export(self, tmp_path, polarity_root, vectors_path):
        out = tmp_path / "c.bin"
        txt = tmp_path / "c.txt"
        rc = main(
            ["cluster", *dataset_flags(polarity_root, vectors_path),
             "--K", "3", "--out", str(out), "--text-out", str(txt)]
        )
        assert rc == 0
        lines = txt.read_text().splitlines()
        assert lines[0] == "3 6"
        assert lines[1].startswith("c0 ")

    def test_minibatch_variant(self, tmp_path, polarity_root, vectors_path):
        out = tmp_path / "c.bin"
        rc = main(
            ["cluster", *dataset_flags(polarity_root, vectors_path),
             "--K", "3", "--variant", "minibatch", "--batch-size", "8",
             "--out", str(out)]
        )
        assert rc == 0
        assert out.exists()


class TestPipelineChain:
    def test_featurize_train_evaluate(self, tmp_path, polarity_root, vectors_path, capsys):
        cents = tmp_path / "c.bin"
        assert main(
            ["cluster", *dataset_flags(polarity_root, vectors_path),
             "--K", "4", "--out", str(cents)]
        ) == 0
        feats = tmp_path / "train.svmlight"
        assert main(
            ["featurize", *dataset_flags(polarity_root, vectors_path),
             "--centroids", str(cents), "--mode", "nb_max", "--out", str(feats)]
        ) == 0
        model = tmp_path / "model.txt"
        assert main(
            ["train-svm", "--features", str(feats), "--out", str(model), "--C", "1.0"]
        ) == 0
        capsys.readouterr()
        assert main(["evaluate", "--model", str(model), "--features", str(feats)]) == 0
        out = capsys.readouterr().out
        assert "accuracy" in out
        acc = float(out.split()[1])
        assert acc > 0.8  # train-set accuracy on separable toy data

    def test_featurize_bow_mode_needs_no_centroids(
        self, tmp_path, polarity_root, vectors_path
    ):
        feats = tmp_path / "bow.svmlight"
        rc = main(
            ["featurize", *dataset_flags(polarity_root, vectors_path),
             "--mode", "bow_nb", "--out", str(feats)]
        )
        assert rc == 0
        assert feats.read_text().strip()


class TestInspectCluster:
    def test_prints_members(self, tmp_path, polarity_root, vectors_path, capsys):
        cents = tmp_path / "c.bin"
        assert main(
            ["cluster", *dataset_flags(polarity_root, vectors_path),
             "--K", "3", "--out", str(cents)]
        ) == 0
        capsys.readouterr()
        rc = main(
            ["inspect-cluster", *dataset_flags(polarity_root, vectors_path),
             "--centroids", str(cents), "--cluster", "0", "--top", "3"]
        )
        assert rc == 0
        assert capsys.readouterr().out.startswith("cluster 0:")


class TestRun:
    def write_config(self, tmp_path, polarity_root, vectors_path, experiments=None, **top):
        if experiments is None:
            experiments = [
                {
                    "dataset": "toy",
                    "dataset_root": str(polarity_root),
                    "dataset_type": "polarity",
                    "embeddings_path": str(vectors_path),
                    "ngram_orders": [1],
                    "K": 4,
                    "feature_mode": "nb_max",
                    "folds": 3,
                    "seed": 11,
                    "kmeans": {"K": 4, "iterations": 5},
                }
            ]
        config = {"version": 1, "experiments": experiments}
        config.update(top)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config), encoding="utf-8")
        return path

    def test_grid_writes_reports(self, tmp_path, polarity_root, vectors_path, capsys):
        base = {
            "dataset": "toy",
            "dataset_root": str(polarity_root),
            "dataset_type": "polarity",
            "embeddings_path": str(vectors_path),
            "K": 4,
            "folds": 3,
            "kmeans": {"K": 4, "iterations": 5},
        }
        cfg = self.write_config(
            tmp_path, polarity_root, vectors_path,
            experiments=[
                {**base, "feature_mode": "nb_max"},
                {**base, "feature_mode": "bow_nb"},
            ],
        )
        out_dir = tmp_path / "reports"
        rc = main(["run", "--config", str(cfg), "--output-dir", str(out_dir)])
        assert rc == 0
        assert (out_dir / "results.csv").exists()
        assert (out_dir / "report_000.json").exists()
        assert (out_dir / "report_001.json").exists()
        assert len((out_dir / "results.csv").read_text().strip().splitlines()) == 3
        assert "accuracy" in capsys.readouterr().out

    def test_dry_run(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path)
        rc = main(["run", "--config", str(cfg), "--dry-run"])
        assert rc == 0
        assert "config OK" in capsys.readouterr().out
        assert not (tmp_path / "reports").exists()

    def test_parallel_jobs_match_serial(self, tmp_path, polarity_root, vectors_path):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path)
        serial = tmp_path / "serial"
        parallel = tmp_path / "parallel"
        assert main(["run", "--config", str(cfg), "--output-dir", str(serial)]) == 0
        assert main(
            ["run", "--config", str(cfg), "--output-dir", str(parallel), "--jobs", "2"]
        ) == 0
        a = json.loads((serial / "report_000.json").read_text())
        b = json.loads((parallel / "report_000.json").read_text())
        assert a["per_fold"] == b["per_fold"]

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["run", "--config", str(tmp_path / "nope.json")])
        assert rc == 1
        assert "not found" in capsys.readouterr().err

    def test_wrong_version(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path, version=2)
        assert main(["run", "--config", str(cfg)]) == 1
        assert "version" in capsys.readouterr().err

    def test_empty_experiments(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path, experiments=[])
        assert main(["run", "--config", str(cfg)]) == 1
        assert "no experiments" in capsys.readouterr().err

    def test_unknown_top_level_key(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path, extra=1)
        assert main(["run", "--config", str(cfg)]) == 1
        assert "unknown config keys" in capsys.readouterr().err

    def test_unknown_experiment_key(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(
            tmp_path, polarity_root, vectors_path,
            experiments=[{"dataset_root": str(polarity_root), "bogus": True}],
        )
        assert main(["run", "--config", str(cfg)]) == 1
        assert "unknown experiment config keys" in capsys.readouterr().err

    def test_missing_dataset_root(self, tmp_path, polarity_root, vectors_path, capsys):
        cfg = self.write_config(
            tmp_path, polarity_root, vectors_path,
            experiments=[{"dataset_root": str(tmp_path / "absent"),
                          "feature_mode": "bow_nb"}],
        )
        assert main(["run", "--config", str(cfg)]) == 1
        assert "dataset_root" in capsys.readouterr().err

    def test_env_seed_changes_folds(
        self, tmp_path, polarity_root, vectors_path, monkeypatch
    ):
        cfg = self.write_config(tmp_path, polarity_root, vectors_path)
        monkeypatch.setenv("CONCEPTBAG_SEED", "123")
        out_dir = tmp_path / "seeded"
        assert main(["run", "--config", str(cfg), "--output-dir", str(out_dir)]) == 0
        rep = json.loads((out_dir / "report_000.json").read_text())
        assert rep["config_echo"]["seed"] == 123


class TestErrorHandling:
    def test_library_error_becomes_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "vectors.txt"
        bad.write_text("2 3\nw 1.0 2.0 3.0\nv 1.0 2.0\n", encoding="utf-8")
        feats = tmp_path / "f.svmlight"
        feats.write_text("+1 1:1.0\n", encoding="utf-8")
        data = tmp_path / "d"
        (data / "pos").mkdir(parents=True)
        (data / "neg").mkdir(parents=True)
        (data / "pos" / "a.txt").write_text("w", encoding="utf-8")
        (data / "neg" / "b.txt").write_text("v", encoding="utf-8")
        rc = main(
            ["cluster", "--embeddings", str(bad), "--dataset-root", str(data),
             "--K", "1", "--out", str(tmp_path / "c.bin")]
        )
        assert rc == 1
        assert "error:" in capsys.readouterr().err
