"""Command-line entry points for each pipeline stage and an end-to-end runner."""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import clustering, evaluation, features, svm
from .clustering import KMeansConfig
from .corpus import build_vocab, load_imdb_dataset, load_polarity_dataset
from .embeddings import SgnsConfig, embed_all, load_word_vectors, save_word_vectors, train_sgns
from .errors import ConceptBagError
from .evaluation import ExperimentConfig, run_experiment, write_reports
from .svm import SvmConfig

CONFIG_VERSION = 1

_EXPERIMENT_KEYS = {
    "dataset",
    "dataset_type",
    "dataset_root",
    "embeddings_path",
    "ngram_orders",
    "K",
    "feature_mode",
    "folds",
    "seed",
    "kmeans",
    "svm",
    "cluster_on_all",
}


def _seed_override(seed: int) -> int:
    env = os.environ.get("CONCEPTBAG_SEED")
    return int(env) if env is not None else seed


def _load_dataset(root, dataset_type):
    if dataset_type == "polarity":
        return load_polarity_dataset(root)
    if dataset_type == "imdb":
        return load_imdb_dataset(root)
    raise ValueError(f"unknown dataset type {dataset_type!r}")


def _parse_orders(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(n) for n in text)
    return tuple(int(n) for n in text.split(",") if n)


def cmd_train_embeddings(args) -> int:
    corpus_path = Path(args.corpus)
    if not corpus_path.is_file():
        print(f"error: corpus file not found: {corpus_path}", file=sys.stderr)
        return 1
    docs = [line.split() for line in corpus_path.read_text(encoding="utf-8").splitlines()]
    config = SgnsConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        subsample_threshold=args.subsample,
        learning_rate=args.lr,
        epochs=args.epochs,
        min_count=args.min_count,
        seed=_seed_override(args.seed),
    )
    wv = train_sgns(docs, config)
    save_word_vectors(wv, args.out)
    print(f"wrote {len(wv)} vectors of dim {wv.dim} to {args.out}")
    return 0


def _embed_dataset_vocab(args):
    wv = load_word_vectors(args.embeddings)
    dataset = _load_dataset(args.dataset_root, args.dataset_type)
    orders = _parse_orders(args.orders)
    docs = (
        [dataset.documents[i] for i in dataset.train_ids]
        if dataset.train_ids is not None
        else dataset.documents
    )
    vocab = build_vocab(docs, orders, wv.words)
    table = embed_all(vocab, wv)
    return wv, dataset, docs, vocab, table


def cmd_cluster(args) -> int:
    wv, _, _, vocab, table = _embed_dataset_vocab(args)
    config = KMeansConfig(
        K=args.K,
        iterations=args.iterations,
        variant=args.variant,
        batch_size=min(args.batch_size, table.shape[0]),
        init=args.init,
        seed=_seed_override(args.seed),
    )
    if config.variant == "minibatch":
        result = clustering.minibatch_kmeans_fit(table, config)
    else:
        result = clustering.kmeans_fit(table, config)
    clustering.save_centroids(result.centroids, args.out)
    if args.text_out:
        clustering.export_centroids_text(result.centroids, args.text_out)
    print(
        f"clustered {len(vocab)} n-grams into K={config.K} "
        f"(inertia {result.inertia:.4f}); centroids -> {args.out}"
    )
    return 0


def cmd_featurize(args) -> int:
    wv, dataset, docs, vocab, table = _embed_dataset_vocab(args)
    from .corpus import count_vectors

    labeled = [d for d in docs if d.label is not None]
    counts = count_vectors(labeled, vocab)
    labels = np.array([d.label for d in labeled])
    ratio = features.log_count_ratio(counts, labels)
    if args.mode == "bow_nb":
        mat = features.bow_nb_features(counts, ratio)
    else:
        centroids = clustering.load_centroids(args.centroids)
        assignment = clustering._assign_all(table, centroids.matrix)
        if args.mode == "nb_max":
            mat = features.concept_features_nb(counts, assignment, ratio, centroids.K)
        else:
            mat = features.concept_features_freq(counts, assignment, centroids.K)
    features.export_svmlight(mat, labels, args.out)
    print(f"wrote {counts.shape[0]} feature rows to {args.out}")
    return 0


def cmd_train_svm(args) -> int:
    mat, labels = features.load_svmlight(args.features)
    config = SvmConfig(
        C=args.C, max_epochs=args.max_epochs, tolerance=args.tolerance,
        seed=_seed_override(args.seed),
    )
    model = svm.svm_train(mat, labels, config)
    svm.save_model(model, args.out)
    print(f"trained model (dim {len(model.w)}); wrote {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    mat, labels = features.load_svmlight(args.features)
    model = svm.load_model(args.model)
    if mat.shape[1] < len(model.w):
        import scipy.sparse as sp

        mat = sp.hstack(
            [mat, sp.csr_matrix((mat.shape[0], len(model.w) - mat.shape[1]))]
        ).tocsr()
    acc = evaluation.accuracy(svm.svm_predict(model, mat), labels)
    print(f"accuracy {acc:.4f} over {mat.shape[0]} documents")
    return 0


def cmd_inspect_cluster(args) -> int:
    wv, _, _, vocab, table = _embed_dataset_vocab(args)
    centroids = clustering.load_centroids(args.centroids)
    which = range(centroids.K) if args.cluster is None else [args.cluster]
    assignment = clustering._assign_all(table, centroids.matrix)
    for k in which:
        members = np.flatnonzero(assignment == k)
        if not len(members):
            print(f"cluster {k}: (empty)")
            continue
        dists = ((table[members] - centroids.matrix[k]) ** 2).sum(axis=1)
        nearest = members[np.argsort(dists)[: args.top]]
        grams = [" ".join(vocab.entries[t]) for t in nearest]
        print(f"cluster {k}: " + " | ".join(grams))
    return 0


def _parse_experiment(entry: dict, base_dir: Path):
    unknown = set(entry) - _EXPERIMENT_KEYS
    if unknown:
        raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
    kmeans_cfg = KMeansConfig(**entry.get("kmeans", {}))
    svm_cfg = SvmConfig(**entry.get("svm", {}))
    config = ExperimentConfig(
        dataset=entry.get("dataset", "polarity"),
        ngram_orders=_parse_orders(entry.get("ngram_orders", [1])),
        K=entry.get("K", 300),
        feature_mode=entry.get("feature_mode", "nb_max"),
        kmeans=kmeans_cfg,
        svm=svm_cfg,
        folds=entry.get("folds", 10),
        seed=_seed_override(entry.get("seed", 42)),
        cluster_on_all=entry.get("cluster_on_all", False),
    )
    root = entry.get("dataset_root")
    if root is None:
        raise ValueError("experiment entry is missing dataset_root")
    root = (base_dir / root).resolve() if not Path(root).is_absolute() else Path(root)
    emb = entry.get("embeddings_path")
    if emb is not None:
        emb = (base_dir / emb).resolve() if not Path(emb).is_absolute() else Path(emb)
    return config, root, entry.get("dataset_type", "polarity"), emb


def cmd_run(args) -> int:
    config_path = Path(args.config)
    if not config_path.is_file():
        print(f"error: config file not found: {config_path}", file=sys.stderr)
        return 1
    raw = json.loads(config_path.read_text(encoding="utf-8"))
    unknown = set(raw) - {"version", "experiments"}
    if unknown:
        print(f"error: unknown config keys: {sorted(unknown)}", file=sys.stderr)
        return 1
    if raw.get("version") != CONFIG_VERSION:
        print(f"error: config version must be {CONFIG_VERSION}", file=sys.stderr)
        return 1
    entries = raw.get("experiments", [])
    if not entries:
        print("error: no experiments in config", file=sys.stderr)
        return 1
    try:
        parsed = [_parse_experiment(e, config_path.parent) for e in entries]
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for _, root, _, emb in parsed:
        if not root.exists():
            print(f"error: dataset_root does not exist: {root}", file=sys.stderr)
            return 1
        if emb is not None and not emb.is_file():
            print(f"error: embeddings_path does not exist: {emb}", file=sys.stderr)
            return 1
    if args.dry_run:
        print(f"config OK: {len(parsed)} experiment(s)")
        return 0

    datasets = {}
    vectors = {}
    for _, root, dtype, emb in parsed:
        datasets.setdefault((str(root), dtype), _load_dataset(root, dtype))
        if emb is not None:
            vectors.setdefault(str(emb), load_word_vectors(emb))

    cache: dict = {}

    def _one(item):
        config, root, dtype, emb = item
        wv = vectors[str(emb)] if emb is not None else None
        return run_experiment(
            config, datasets[(str(root), dtype)], wv,
            cache=cache if args.jobs == 1 else None,
        )

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_one, parsed))
    else:
        reports = [_one(item) for item in parsed]

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_reports(reports, json_dir=out_dir, csv_path=out_dir / "results.csv")
    for rep in reports:
        cfg = rep.config_echo
        orders = "+".join(str(n) for n in cfg.ngram_orders)
        print(f"{cfg.dataset} orders={orders} K={cfg.K} mode={cfg.feature_mode}: "
              f"accuracy {rep.accuracy:.4f}")
    print(f"reports written to {out_dir}")
    return 0


def _add_dataset_args(p):
    p.add_argument("--embeddings", required=True, help="text-format word vectors")
    p.add_argument("--dataset-root", required=True)
    p.add_argument("--dataset-type", default="polarity", choices=["polarity", "imdb"])
    p.add_argument("--orders", default="1", help="comma-separated n-gram orders, e.g. 1,2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptbag",
        description="Bag-of-semantic-concepts document classification pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-embeddings", help="train toy skip-gram vectors")
    p.add_argument("--corpus", required=True, help="one whitespace-tokenized document per line")
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--subsample", type=float, default=1e-5)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--min-count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_embeddings)

    p = sub.add_parser("cluster", help="build vocab, embed n-grams, run K-means")
    _add_dataset_args(p)
    p.add_argument("--K", type=int, default=300)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--variant", default="lloyd", choices=["lloyd", "minibatch"])
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("--init", default="kmeanspp", choices=["kmeanspp", "random_points"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--text-out", default=None, help="also write a text export")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("featurize", help="write document features in svmlight format")
    _add_dataset_args(p)
    p.add_argument("--centroids", default=None, help="required for concept modes")
    p.add_argument("--mode", default="nb_max", choices=["nb_max", "frequency", "bow_nb"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train-svm", help="train the linear SVM on a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_svm)

    p = sub.add_parser("evaluate", help="accuracy of a saved model on a feature file")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="run a JSON experiment grid, write JSON+CSV reports")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", default="reports")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dry-run", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("inspect-cluster", help="print nearest n-grams per centroid")
    _add_dataset_args(p)
    p.add_argument("--centroids", required=True)
    p.add_argument("--cluster", type=int, default=None, help="single cluster id (default: all)")
    p.add_argument("--top", type=int, default=8)
    p.set_defaults(func=cmd_inspect_cluster)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConceptBagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
