"""Command-line entry point: ``distfeat <command> ...``.

Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
1 on a runtime error (bad input, bad model file, k out of range) and 2 on
a usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import evaluation as ev
from . import features as ft
from . import kmeans, knn, model_io, render, synthetic
from .config import CliConfig, KnnSettings, OUTPUT_FORMATS, load_config
from .corpus import (Corpus, IngestionError, load_corpus, load_stopwords,
                     read_document)



class CliError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("common options")
    g.add_argument("--config", type=Path, help="INI configuration file")
    g.add_argument("--scheme", choices=ft.SCHEMES)
    g.add_argument("--alpha", type=float, help="first-appearance strength")
    g.add_argument("--beta", type=float, help="compactness strength")
    g.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
    g.add_argument("--seed", type=int)
    g.add_argument("--stopwords", type=Path, help="stopword file, one word per line")
    g.add_argument("--min-token-length", type=int)
    g.add_argument("--strip-digits", action="store_true", default=None)


def _knn_flags(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, help="number of neighbors")
    p.add_argument("--vote", choices=knn.VOTE_MODES)
    p.add_argument("--compress", action="store_true", default=None,
                   help="use cluster-center prototypes")
    p.add_argument("--clusters-per-category", type=int)
    p.add_argument("--no-border-deletion", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distfeat",
        description="Distributional term features, kNN and k-means text categorization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="per-term distributional statistics of one document")
    p.add_argument("document", type=Path)
    p.add_argument("--corpus", type=Path, help="corpus root supplying idf (default: idf = 1)")
    _common(p)

    p = sub.add_parser("histogram", help="compactness histogram, or document ranking with --term")
    p.add_argument("path", type=Path, help="document file, or corpus root with --term")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--term", help="rank corpus documents by this term's weight")
    p.add_argument("--top", type=int, default=10, help="number of top-weighted terms to list")
    p.add_argument("--corpus", type=Path, help="corpus root supplying idf in single-document mode")
    p.add_argument("--svg", type=Path, help="also write an SVG bar chart here")
    _common(p)

    p = sub.add_parser("train", help="train and save a kNN model")
    p.add_argument("corpus", type=Path, nargs="?")
    p.add_argument("-o", "--out", type=Path, required=True, help="model file to write")
    _knn_flags(p)
    _common(p)

    p = sub.add_parser("classify", help="classify documents with a saved model")
    p.add_argument("model", type=Path)
    p.add_argument("documents", type=Path, nargs="+")
    p.add_argument("--k", type=int)
    p.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)

    p = sub.add_parser("cluster", help="k-means clustering of a corpus")
    p.add_argument("corpus", type=Path, nargs="?")
    p.add_argument("--k", type=int, help="number of clusters")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--init", choices=kmeans.INIT_MODES)
    p.add_argument("--assignments", type=Path, help="write assignments CSV here")
    p.add_argument("--summary", type=Path, help="write JSON summary with objective trace here")
    _common(p)

    p = sub.add_parser("evaluate", help="compare weighting schemes on a stratified split")
    p.add_argument("corpus", type=Path, nargs="?")
    p.add_argument("--schemes", default="tfidf,distributional",
                   help="comma-separated schemes to compare")
    p.add_argument("--ratio", type=float, default=0.5, help="training fraction per category")
    p.add_argument("--log", type=Path, help="write per-document prediction log CSV here")
    _knn_flags(p)
    _common(p)

    p = sub.add_parser("gen-fixture", help="write the seeded synthetic corpus")
    p.add_argument("out", type=Path)
    p.add_argument("--seed", type=int, default=synthetic.FixtureConfig.seed)
    p.add_argument("--docs-per-category", type=int, default=synthetic.FixtureConfig.docs_per_category)
    p.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
    return parser


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Config file first, then any flag given on the command line."""
    cfg = load_config(args.config) if getattr(args, "config", None) else CliConfig()
    flag = lambda name: getattr(args, name, None)  # noqa: E731

    tok = cfg.tokenizer
    if flag("stopwords") is not None:
        tok = replace(tok, stopwords=load_stopwords(args.stopwords))
    if flag("min_token_length") is not None:
        tok = replace(tok, min_token_length=args.min_token_length)
    if flag("strip_digits"):
        tok = replace(tok, strip_digits=True)

    w = cfg.weighting
    weighting = ft.WeightingParams(
        flag("scheme") or w.scheme,
        w.alpha if flag("alpha") is None else args.alpha,
        w.beta if flag("beta") is None else args.beta,
    )
    seed = cfg.seed if flag("seed") is None else args.seed

    k = cfg.knn
    knn_settings = KnnSettings(
        k=k.k if flag("k") is None else args.k,
        vote=flag("vote") or k.vote,
        compress=True if flag("compress") else k.compress,
        clusters_per_category=k.clusters_per_category if flag("clusters_per_category") is None
        else args.clusters_per_category,
        border_deletion=False if flag("no_border_deletion") else k.border_deletion,
    )
    km = cfg.kmeans
    kmeans_cfg = kmeans.KMeansConfig(
        k=km.k if (flag("k") is None or args.command != "cluster") else args.k,
        max_iterations=flag("max_iterations") or km.max_iterations,
        tolerance=km.tolerance if flag("tolerance") is None else args.tolerance,
        seed=seed,
        init=flag("init") or km.init,
    )
    root = flag("corpus") if isinstance(flag("corpus"), Path) else None
    return CliConfig(
        corpus_root=root or cfg.corpus_root,
        tokenizer=tok,
        weighting=weighting,
        knn=knn_settings,
        kmeans=kmeans_cfg,
        output_format=flag("output_format") or cfg.output_format,
        seed=seed,
    )


def _corpus(cfg: CliConfig) -> Corpus:
    if cfg.corpus_root is None:
        raise CliError("no corpus root given (positional argument or [run] corpus_root)")
    return load_corpus(cfg.corpus_root, cfg.tokenizer)


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8", newline="\n")


# -- stats / histogram --------------------------------------------------------

def _term_rows(doc, idf_source, params):
    """(term, profile, weight) sorted by weight descending, then term."""
    rows = []
    for term, prof in ft.document_profiles(doc).items():
        if idf_source is None:
            idf_value = 1.0
        elif term in idf_source.doc_frequency:
            idf_value = ft.idf(term, idf_source)
        else:
            idf_value = 0.0
        rows.append((term, prof, ft.term_weight(prof, idf_value, params)))
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows


def _idf_label(cfg: CliConfig) -> str:
    return f"corpus {cfg.corpus_root.as_posix()}" if cfg.corpus_root else "none (idf = 1)"


def cmd_stats(args, cfg: CliConfig) -> str:
    doc = read_document(args.document, cfg.tokenizer, doc_id=args.document.as_posix())
    idf_source = _corpus(cfg) if cfg.corpus_root else None
    rows = _term_rows(doc, idf_source, cfg.weighting)
    headers = ["term", "count", "first", "last", "centroid", "compactness", "weight"]
    data = [[t, p.count, p.first, p.last, p.centroid, p.compactness, w] for t, p, w in rows]

    if cfg.output_format == "json":
        return render.json_text({
            "document": doc.id,
            "paragraphs": doc.num_paragraphs,
            "scheme": cfg.weighting.name,
            "idf": _idf_label(cfg),
            "terms": [dict(zip(headers, r)) for r in data],
        })
    if cfg.output_format == "csv":
        return render.csv_text(headers, data)
    head = (f"document: {doc.id}\nparagraphs: {doc.num_paragraphs}\n"
            f"scheme: {cfg.weighting.name}\nidf: {_idf_label(cfg)}\n\n")
    return head + render.table(headers, data)


def _histogram_single(args, cfg: CliConfig) -> str:
    doc = read_document(args.path, cfg.tokenizer, doc_id=args.path.as_posix())
    idf_source = _corpus(cfg) if cfg.corpus_root else None
    rows = _term_rows(doc, idf_source, cfg.weighting)
    hist = ft.compactness_histogram([p for _, p, _ in rows], args.bins)
    top = rows[: args.top]

    labels = [
        f"[{lo:.2f},{hi:.2f}{']' if i == len(hist) - 1 else ')'}"
        for i, ((lo, hi), _) in enumerate(hist)
    ]
    counts = [c for _, c in hist]
    if args.svg:
        _write(args.svg, render.svg_bar_chart(labels, counts, f"compactness: {doc.id}"))

    if cfg.output_format == "json":
        return render.json_text({
            "document": doc.id,
            "terms": len(rows),
            "bins": [{"low": lo, "high": hi, "count": c} for (lo, hi), c in hist],
            "top_terms": [
                {"term": t, "weight": w, "compactness": p.normalized_compactness} for t, p, w in top
            ],
        })
    if cfg.output_format == "csv":
        return render.csv_text(["bin_low", "bin_high", "count"],
                               [[lo, hi, c] for (lo, hi), c in hist])
    out = [f"compactness histogram: {doc.id} ({len(rows)} terms, {args.bins} bins)",
           render.text_bars(labels, counts),
           f"top {len(top)} terms ({cfg.weighting.name}, idf: {_idf_label(cfg)})",
           render.table(["term", "weight", "compactness"],
                        [[t, w, p.normalized_compactness] for t, p, w in top])]
    return "\n".join(out)


def _histogram_term(args, cfg: CliConfig) -> str:
    corpus = _corpus(replace(cfg, corpus_root=args.path))
    ranked = ft.rank_documents(args.term, corpus, cfg.weighting)
    if args.svg:
        _write(args.svg, render.svg_bar_chart([d for d, _ in ranked], [w for _, w in ranked],
                                              f"weight of '{args.term}'"))
    if cfg.output_format == "json":
        return render.json_text({
            "term": args.term,
            "scheme": cfg.weighting.name,
            "documents": [{"rank": i + 1, "id": d, "weight": w} for i, (d, w) in enumerate(ranked)],
        })
    rows = [[i + 1, d, w] for i, (d, w) in enumerate(ranked)]
    if cfg.output_format == "csv":
        return render.csv_text(["rank", "document", "weight"], rows)
    return (f"documents ranked by '{args.term}' ({cfg.weighting.name})\n"
            + render.table(["rank", "document", "weight"], rows))


def cmd_histogram(args, cfg: CliConfig) -> str:
    if args.bins < 1:
        raise CliError("--bins must be >= 1")
    if args.term is not None:
        if not args.path.is_dir():
            raise CliError(f"--term needs a corpus directory, got {args.path}")
        return _histogram_term(args, cfg)
    if args.path.is_dir():
        raise CliError(f"{args.path} is a directory; pass --term to rank its documents")
    return _histogram_single(args, cfg)


# -- train / classify ----------------------------------------------------------

def cmd_train(args, cfg: CliConfig) -> str:
    corpus = _corpus(cfg)
    settings = cfg.knn
    if not 1 <= settings.k <= corpus.num_documents:
        raise CliError(f"k={settings.k} outside [1, {corpus.num_documents}]")
    samples = [knn.Sample(ft.vectorize(d, corpus, cfg.weighting), d.label) for d in corpus.documents]
    model = knn.train(samples, settings.k)
    if settings.compress:
        model = knn.compress(model, settings.clusters_per_category, cfg.seed, settings.border_deletion)
    saved = model_io.SavedModel(model, cfg.weighting, cfg.tokenizer, ft.IdfTable.of(corpus),
                                settings.vote)
    model_io.save(saved, args.out)

    n = len(model.prototypes) if isinstance(model, knn.CompressedKnnModel) else len(model.samples)
    info = {
        "model": args.out.as_posix(),
        "kind": saved.kind,
        "scheme": cfg.weighting.name,
        "documents": corpus.num_documents,
        "records": n,
        "vocabulary": len(corpus.vocabulary),
        "k_default": model.k_default,
    }
    if cfg.output_format == "json":
        return render.json_text(info)
    if cfg.output_format == "csv":
        return render.csv_text(list(info), [list(info.values())])
    return "".join(f"{key}: {value}\n" for key, value in info.items())


def cmd_classify(args) -> str:
    try:
        saved = model_io.load(args.model)
    except OSError as exc:
        raise CliError(f"cannot read model {args.model}: {exc}") from exc
    fmt = args.output_format or "table"
    results = []
    for path in args.documents:
        doc = read_document(path, saved.tokenizer, doc_id=path.as_posix())
        vec = ft.vectorize(doc, saved.idf_table, saved.weighting)
        pred = knn.predict(saved.classifier, vec, args.k, saved.vote)
        results.append((doc.id, pred))

    if fmt == "json":
        return render.json_text([
            {"document": d, "label": p.label, "scores": p.score_by_label,
             "neighbors": list(p.neighbor_ids), "similarities": list(p.similarities)}
            for d, p in results
        ])
    rows = [[d, p.label,
             " ".join(f"{lab}={render.num(s) if fmt == 'table' else repr(float(s))}"
                      for lab, s in p.score_by_label.items()),
             " ".join(p.neighbor_ids)] for d, p in results]
    headers = ["document", "label", "scores", "neighbors"]
    if fmt == "csv":
        return render.csv_text(headers, rows)
    return render.table(headers, rows)


# -- cluster -----------------------------------------------------------------

def cmd_cluster(args, cfg: CliConfig) -> str:
    corpus = _corpus(cfg)
    vectors = [ft.vectorize(d, corpus, cfg.weighting).entries for d in corpus.documents]
    ids = [d.id for d in corpus.documents]
    if not any(vectors):
        raise CliError("no document has a positive term weight; nothing to cluster")
    model = kmeans.cluster(vectors, cfg.kmeans)
    if args.assignments:
        _write(args.assignments, model.assignments_csv(ids))
    if args.summary:
        _write(args.summary, model.summary_json())

    if cfg.output_format == "json":
        summary = model.summary()
        summary["assignments"] = {i: int(a) for i, a in zip(ids, model.assignments)}
        return render.json_text(summary)
    if cfg.output_format == "csv":
        return model.assignments_csv(ids)
    rows = [[i, int(a), corpus.get(i).label or ""] for i, a in zip(ids, model.assignments)]
    head = (f"k: {model.k}\nobjective: {render.num(model.objective)}\n"
            f"iterations: {model.iterations_run}\nconverged: {str(model.converged).lower()}\n"
            f"cluster sizes: {' '.join(map(str, model.cluster_sizes()))}\n"
            "objective trace: " + " ".join(render.num(v) for v in model.objective_trace) + "\n\n")
    return head + render.table(["document", "cluster", "label"], rows)


# -- evaluate ------------------------------------------------------------------

def _schemes(names: str, cfg: CliConfig) -> list[ft.WeightingParams]:
    out = []
    for name in (s.strip() for s in names.split(",")):
        if not name:
            continue
        if name not in ft.SCHEMES:
            raise CliError(f"unknown scheme {name!r}")
        out.append(ft.WeightingParams(name, cfg.weighting.alpha, cfg.weighting.beta))
    if not out:
        raise CliError("--schemes is empty")
    return out


def cmd_evaluate(args, cfg: CliConfig) -> str:
    corpus = _corpus(cfg)
    schemes = _schemes(args.schemes, cfg)
    data_split = ev.split(corpus, args.ratio, cfg.seed)
    s = cfg.knn
    clf = ev.ClassifierConfig(s.k, s.vote, s.compress, s.clusters_per_category, s.border_deletion, cfg.seed)
    if not 1 <= s.k <= len(data_split.train_ids):
        raise CliError(f"k={s.k} outside [1, {len(data_split.train_ids)}]")
    results = ev.compare_schemes(corpus, data_split, schemes, clf)

    if args.log:
        rows = [[r.params.name, rec.doc_id, rec.true_label, rec.predicted, " ".join(rec.neighbor_ids)]
                for r in results for rec in r.log]
        _write(args.log, render.csv_text(["scheme", "doc_id", "true", "predicted", "neighbors"], rows))

    if cfg.output_format == "json":
        return render.json_text({
            "split": {"seed": data_split.seed, "ratio": data_split.ratio,
                      "train": len(data_split.train_ids), "test": len(data_split.test_ids)},
            "classifier": {"k": s.k, "vote": s.vote, "compress": s.compress},
            "results": [
                {"scheme": r.params.name, "report": r.report.to_dict(),
                 "predictions": [{"doc_id": p.doc_id, "true": p.true_label, "predicted": p.predicted,
                                  "neighbors": list(p.neighbor_ids)} for p in r.log]}
                for r in results
            ],
        })
    if cfg.output_format == "csv":
        parts = [ev.report_csv(r.report, r.params.name) for r in results]
        return parts[0] + "".join(p.split("\n", 1)[1] for p in parts[1:])
    out = [f"split: {len(data_split.train_ids)} train / {len(data_split.test_ids)} test "
           f"(ratio {data_split.ratio:g}, seed {data_split.seed}); k={s.k}, vote={s.vote}"
           + (", compressed" if s.compress else "") + "\n"]
    for r in results:
        out.append(ev.report_table(r.report, f"== {r.params.name} =="))
    out.append("macro recall: " + " | ".join(
        f"{r.params.name} {render.num(r.report.macro_recall)}" for r in results) + "\n")
    return "\n".join(out)


def cmd_gen_fixture(args) -> str:
    cfg = synthetic.FixtureConfig(docs_per_category=args.docs_per_category, seed=args.seed)
    paths = synthetic.write(args.out, cfg)
    rels = [p.relative_to(args.out).as_posix() for p in paths]
    fmt = args.output_format or "table"
    if fmt == "json":
        return render.json_text({"root": args.out.as_posix(), "seed": args.seed, "files": rels})
    if fmt == "csv":
        return render.csv_text(["file"], [[r] for r in rels])
    return f"wrote {len(rels)} documents under {args.out.as_posix()} (seed {args.seed})\n"


# -- main -------------------------------------------------------------------------

def run(argv=None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "classify":
            return 0, cmd_classify(args)
        if args.command == "gen-fixture":
            return 0, cmd_gen_fixture(args)
        cfg = resolve_config(args)
        handler = {
            "stats": cmd_stats,
            "histogram": cmd_histogram,
            "train": cmd_train,
            "cluster": cmd_cluster,
            "evaluate": cmd_evaluate,
        }[args.command]
        return 0, handler(args, cfg)
    except (CliError, IngestionError, model_io.ModelFormatError, ft.TermNotFound,
            ValueError, OSError) as exc:
        print(f"distfeat: error: {exc}", file=sys.stderr)
        return 1, ""


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="distfeat: %(levelname)s: %(message)s")
    code, out = run(argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
