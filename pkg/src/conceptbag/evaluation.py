"""Cross-validation, accuracy, and stage-timed experiment runs."""

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import clustering, features, lsa, svm
from .clustering import KMeansConfig
from .corpus import Dataset, build_vocab, count_vectors
from .embeddings import WordVectors, embed_all
from .errors import ConceptBagError, LengthMismatch, TooFewDocuments
from .svm import SvmConfig

STAGES = ("ngram_repr", "kmeans", "doc_repr", "svm_train", "total")


@dataclass
class ExperimentConfig:
    dataset: str = "polarity"
    ngram_orders: tuple[int, ...] = (1,)
    K: int = 300
    feature_mode: str = "nb_max"  # nb_max | frequency | bow_nb | lsa
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)
    svm: SvmConfig = field(default_factory=SvmConfig)
    folds: int = 10  # 0 = use the dataset's predefined split
    seed: int = 42
    cluster_on_all: bool = False


@dataclass
class ExperimentReport:
    accuracy: float
    per_fold: list[float]
    stage_times: dict[str, float]
    config_echo: ExperimentConfig

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        raw = json.loads(text)
        cfg = raw["config_echo"]
        cfg["ngram_orders"] = tuple(cfg["ngram_orders"])
        cfg["kmeans"] = KMeansConfig(**cfg["kmeans"])
        cfg["svm"] = SvmConfig(**cfg["svm"])
        return cls(
            accuracy=raw["accuracy"],
            per_fold=list(raw["per_fold"]),
            stage_times=dict(raw["stage_times"]),
            config_echo=ExperimentConfig(**cfg),
        )


def accuracy(predictions, labels) -> float:
    """Fraction of exact matches."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(labels)} labels")
    return float(np.mean(predictions == labels))


def kfold_split(labels, folds: int, seed: int = 42):
    """Stratified fold index pairs; per-class fold sizes differ by at most 1."""
    labels = np.asarray(labels)
    n = len(labels)
    if folds < 2:
        raise TooFewDocuments(f"need at least 2 folds, got {folds}")
    if folds > n:
        raise TooFewDocuments(f"{folds} folds for {n} documents")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    offset = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        rng.shuffle(members)
        for j, idx in enumerate(members):
            fold_of[idx] = (j + offset) % folds
        offset += len(members)
    splits = []
    for f in range(folds):
        test = np.flatnonzero(fold_of == f)
        train = np.flatnonzero(fold_of != f)
        splits.append((train, test))
    return splits


class _StageClock:
    """Accumulates monotonic wall-clock seconds per pipeline stage."""

    def __init__(self):
        self.times = {s: 0.0 for s in STAGES}

    def timed(self, stage):
        clock = self

        class _Ctx:
            def __enter__(self_inner):
                self_inner.t0 = time.monotonic()

            def __exit__(self_inner, *exc):
                clock.times[stage] += time.monotonic() - self_inner.t0

        return _Ctx()


def _stage(name):
    """Re-raise library errors annotated with the failing stage."""
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, ConceptBagError):
                exc.args = (f"[stage {name}] {exc.args[0] if exc.args else ''}",)
            return False

    return _Ctx()


def _fold_features(
    train_docs, test_docs, y_train, config, wv, clock, all_docs=None, cache=None
):
    """Featurize one train/test split; returns (train feats, test feats).

    ``cache`` is an optional dict shared across experiments of a grid;
    vocabulary, counts, embeddings and centroids are reused when every input
    that shapes them coincides.
    """
    dictionary = wv.words
    vocab_docs = all_docs if (config.cluster_on_all and all_docs) else train_docs
    base_key = (
        config.dataset,
        tuple(sorted(config.ngram_orders)),
        config.cluster_on_all,
        tuple(d.id for d in train_docs),
        tuple(d.id for d in test_docs),
    )
    if cache is not None and ("counts", base_key) in cache:
        vocab, counts_train, counts_test = cache[("counts", base_key)]
    else:
        with _stage("vocab"):
            vocab = build_vocab(vocab_docs, config.ngram_orders, dictionary)
        counts_train = count_vectors(train_docs, vocab)
        counts_test = count_vectors(test_docs, vocab)
        if cache is not None:
            cache[("counts", base_key)] = (vocab, counts_train, counts_test)
    ratio = features.log_count_ratio(counts_train, y_train)

    if config.feature_mode == "bow_nb":
        with clock.timed("doc_repr"):
            return (
                features.bow_nb_features(counts_train, ratio),
                features.bow_nb_features(counts_test, ratio),
            )
    if config.feature_mode == "lsa":
        with clock.timed("doc_repr"):
            X = lsa.build_lsa_matrix(counts_train, ratio)
            factors = lsa.truncated_svd(X, config.K, seed=config.seed)
            f_train = lsa.lsa_document_features(factors)
            X_test = lsa.build_lsa_matrix(counts_test, ratio)
            f_test = lsa.lsa_fold_in(factors, X_test)
        return f_train, f_test

    if cache is not None and ("table", base_key) in cache:
        table = cache[("table", base_key)]
    else:
        with clock.timed("ngram_repr"), _stage("ngram_repr"):
            table = embed_all(vocab, wv)
        if cache is not None:
            cache[("table", base_key)] = table
    kmeans_key = ("kmeans", base_key, config.K, tuple(sorted(asdict(config.kmeans).items())))
    if cache is not None and kmeans_key in cache:
        result = cache[kmeans_key]
    else:
        with clock.timed("kmeans"), _stage("kmeans"):
            cfg = KMeansConfig(**{**asdict(config.kmeans), "K": config.K})
            if cfg.variant == "minibatch":
                cfg.batch_size = min(cfg.batch_size, table.shape[0])
                result = clustering.minibatch_kmeans_fit(table, cfg)
            else:
                result = clustering.kmeans_fit(table, cfg)
        if cache is not None:
            cache[kmeans_key] = result
    with clock.timed("doc_repr"), _stage("doc_repr"):
        if config.feature_mode == "nb_max":
            f_train = features.concept_features_nb(counts_train, result.labels, ratio, config.K)
            f_test = features.concept_features_nb(counts_test, result.labels, ratio, config.K)
        elif config.feature_mode == "frequency":
            f_train = features.concept_features_freq(counts_train, result.labels, config.K)
            f_test = features.concept_features_freq(counts_test, result.labels, config.K)
        else:
            raise ValueError(f"unknown feature_mode {config.feature_mode!r}")
    return f_train, f_test


def run_experiment(
    config: ExperimentConfig,
    dataset: Dataset,
    wv: Optional[WordVectors] = None,
    cache: Optional[dict] = None,
) -> ExperimentReport:
    """Run the full pipeline under the fold discipline of ``config``.

    All fitted parameters (vocabulary, log-count ratios, centroids, SVM
    weights) come from training documents only, unless cluster_on_all is set,
    in which case the vocabulary and clustering cover all documents while the
    ratios and classifier stay train-only.
    """
    if config.feature_mode not in ("bow_nb", "lsa") and wv is None:
        raise ValueError("word vectors are required for concept feature modes")
    if wv is None:
        # BOW/LSA still need a dictionary; fall back to all corpus words
        all_words = {t for d in dataset.documents for t in d.tokens}
        wv = WordVectors(words={w: i for i, w in enumerate(sorted(all_words))},
                         matrix=np.zeros((len(all_words), 1)))

    clock = _StageClock()
    t_start = time.monotonic()
    docs = dataset.documents
    labels = dataset.labels

    if config.folds == 0:
        if dataset.train_ids is None or dataset.test_ids is None:
            raise TooFewDocuments(f"dataset {dataset.name!r} has no predefined split")
        splits = [(np.array(dataset.train_ids), np.array(dataset.test_ids))]
    else:
        labeled = np.array(dataset.labeled_indices())
        splits = [
            (labeled[tr], labeled[te])
            for tr, te in kfold_split(labels[labeled], config.folds, config.seed)
        ]

    per_fold = []
    for train_idx, test_idx in splits:
        train_docs = [docs[i] for i in train_idx]
        test_docs = [docs[i] for i in test_idx]
        y_train = labels[train_idx]
        y_test = labels[test_idx]
        f_train, f_test = _fold_features(
            train_docs, test_docs, y_train, config, wv, clock, all_docs=docs, cache=cache
        )
        with clock.timed("svm_train"), _stage("svm_train"):
            model = svm.svm_train(f_train, y_train, config.svm)
        per_fold.append(accuracy(svm.svm_predict(model, f_test), y_test))

    clock.times["total"] = time.monotonic() - t_start
    return ExperimentReport(
        accuracy=float(np.mean(per_fold)),
        per_fold=per_fold,
        stage_times={k: round(v, 2) for k, v in clock.times.items()},
        config_echo=config,
    )


def write_reports(reports, json_dir=None, csv_path=None) -> None:
    """Write one JSON document per report plus an aggregate CSV."""
    if json_dir is not None:
        from pathlib import Path

        json_dir = Path(json_dir)
        json_dir.mkdir(parents=True, exist_ok=True)
        for i, rep in enumerate(reports):
            (json_dir / f"report_{i:03d}.json").write_text(rep.to_json())
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["dataset", "orders", "K", "mode", "accuracy"] + [f"time_{s}" for s in STAGES]
            )
            for rep in reports:
                cfg = rep.config_echo
                writer.writerow(
                    [
                        cfg.dataset,
                        "+".join(str(n) for n in cfg.ngram_orders),
                        cfg.K,
                        cfg.feature_mode,
                        f"{rep.accuracy:.4f}",
                    ]
                    + [f"{rep.stage_times[s]:.2f}" for s in STAGES]
                )
