"""Stratified splits, confusion matrices, precision/recall/F1, scheme comparison."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import knn
from .corpus import Corpus
from .features import WeightingParams, vectorize


@dataclass(frozen=True)
class Split:
    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    seed: int
    ratio: float


def split(corpus: Corpus, ratio: float = 0.5, seed: int = 0) -> Split:
    """Per-category shuffle; ``floor(ratio * size)`` to train, at least one per side."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio}")
    by_label: dict[str, list[str]] = {}
    for doc in corpus.documents:
        if doc.label is None:
            raise ValueError(f"document {doc.id!r} has no label")
        by_label.setdefault(doc.label, []).append(doc.id)

    rng = np.random.default_rng(seed)
    train = set()
    for label in sorted(by_label):
        ids = sorted(by_label[label])
        if len(ids) < 2:
            raise ValueError(f"category {label!r} has fewer than 2 documents")
        n_train = min(max(math.floor(ratio * len(ids)), 1), len(ids) - 1)
        order = rng.permutation(len(ids))
        train.update(ids[i] for i in order[:n_train])
    all_ids = [d.id for d in corpus.documents]
    return Split(
        train_ids=tuple(i for i in all_ids if i in train),
        test_ids=tuple(i for i in all_ids if i not in train),
        seed=seed,
        ratio=ratio,
    )


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    labels: tuple[str, ...]
    confusion: tuple[tuple[int, ...], ...]  # rows: true label, columns: predicted
    per_class: dict[str, ClassMetrics]
    macro: tuple[float, float, float]
    micro_accuracy: float

    @property
    def total(self) -> int:
        return sum(map(sum, self.confusion))

    @property
    def macro_precision(self) -> float:
        return self.macro[0]

    @property
    def macro_recall(self) -> float:
        return self.macro[1]

    @property
    def macro_f1(self) -> float:
        return self.macro[2]

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "confusion": [list(row) for row in self.confusion],
            "per_class": {
                lab: {"precision": m.precision, "recall": m.recall, "f1": m.f1, "support": m.support}
                for lab, m in self.per_class.items()
            },
            "macro": {"precision": self.macro[0], "recall": self.macro[1], "f1": self.macro[2]},
            "micro_accuracy": self.micro_accuracy,
            "total": self.total,
        }


def _ratio(num, den) -> Fraction:
    return Fraction(num, den) if den else Fraction(0)


def evaluate(predictions: Sequence[tuple[str, str]]) -> EvalReport:
    """Builds the report from ``(true, predicted)`` pairs. 0/0 counts as 0.

    Metrics are computed as exact fractions and rounded once to float.
    """
    if not predictions:
        raise ValueError("cannot evaluate an empty prediction list")
    labels = tuple(sorted({t for t, _ in predictions} | {p for _, p in predictions}))
    index = {lab: i for i, lab in enumerate(labels)}
    matrix = [[0] * len(labels) for _ in labels]
    for true, pred in predictions:
        matrix[index[true]][index[pred]] += 1

    exact = {}
    for i, lab in enumerate(labels):
        tp = matrix[i][i]
        fp = sum(matrix[r][i] for r in range(len(labels))) - tp
        fn = sum(matrix[i]) - tp
        p, r = _ratio(tp, tp + fp), _ratio(tp, tp + fn)
        f1 = 2 * p * r / (p + r) if p + r else Fraction(0)
        exact[lab] = (p, r, f1)

    n = len(labels)
    per_class = {
        lab: ClassMetrics(float(p), float(r), float(f1), sum(matrix[index[lab]]))
        for lab, (p, r, f1) in exact.items()
    }
    macro = tuple(float(sum(m[j] for m in exact.values()) / n) for j in range(3))
    trace = sum(matrix[i][i] for i in range(n))
    return EvalReport(
        labels=labels,
        confusion=tuple(tuple(row) for row in matrix),
        per_class=per_class,
        macro=macro,
        micro_accuracy=float(Fraction(trace, len(predictions))),
    )


@dataclass(frozen=True)
class ClassifierConfig:
    k: int = 3
    vote: str = "majority"
    compress: bool = False
    clusters_per_category: int = 3
    border_deletion: bool = True
    seed: int = 0


@dataclass(frozen=True)
class PredictionRecord:
    doc_id: str
    true_label: str
    predicted: str
    neighbor_ids: tuple[str, ...]


@dataclass
class SchemeResult:
    params: WeightingParams
    report: EvalReport
    log: list[PredictionRecord] = field(default_factory=list)

    def log_csv(self) -> str:
        return prediction_log_csv(self.log)


def fit(train_corpus: Corpus, params: WeightingParams, config: ClassifierConfig):
    """Vectorizes the training corpus against its own statistics and builds the classifier."""
    samples = [
        knn.Sample(vectorize(doc, train_corpus, params), doc.label)
        for doc in train_corpus.documents
    ]
    model = knn.train(samples, min(config.k, len(samples)))
    if config.compress:
        model = knn.compress(model, config.clusters_per_category, config.seed, config.border_deletion)
    return model


def run_scheme(corpus: Corpus, data_split: Split, params: WeightingParams,
               config: ClassifierConfig) -> SchemeResult:
    # idf comes from the training documents only
    train_corpus = corpus.subset(data_split.train_ids)
    model = fit(train_corpus, params, config)
    log = []
    for doc_id in data_split.test_ids:
        doc = corpus.get(doc_id)
        pred = knn.predict(model, vectorize(doc, train_corpus, params), None, config.vote)
        log.append(PredictionRecord(doc.id, doc.label, pred.label, pred.neighbor_ids))
    report = evaluate([(r.true_label, r.predicted) for r in log])
    return SchemeResult(params, report, log)


def compare_schemes(corpus: Corpus, data_split: Split, schemes: Sequence[WeightingParams],
                    config: ClassifierConfig = ClassifierConfig()) -> list[SchemeResult]:
    """One result per scheme, in input order, all on the same split and classifier."""
    if not schemes:
        raise ValueError("at least one weighting scheme is required")
    return [run_scheme(corpus, data_split, params, config) for params in schemes]


def cross_validate_k(corpus: Corpus, ks: Sequence[int], params: WeightingParams,
                     folds: int = 5, seed: int = 0, vote: str = "majority") -> dict[int, float]:
    """Mean accuracy of plain kNN per candidate k under stratified k-fold CV."""
    rng = np.random.default_rng(seed)
    fold_of: dict[str, int] = {}
    for label in corpus.categories:
        ids = sorted(d.id for d in corpus.documents if d.label == label)
        for pos, i in enumerate(rng.permutation(len(ids))):
            fold_of[ids[i]] = pos % folds
    scores: dict[int, list[float]] = {k: [] for k in ks}
    for f in range(folds):
        test_ids = [d.id for d in corpus.documents if fold_of[d.id] == f]
        if not test_ids:
            continue
        train_corpus = corpus.subset(i for i in fold_of if fold_of[i] != f)
        samples = [knn.Sample(vectorize(d, train_corpus, params), d.label)
                   for d in train_corpus.documents]
        model = knn.train(samples)
        for k in ks:
            kk = min(k, len(samples))
            hits = sum(
                knn.classify(model, vectorize(corpus.get(i), train_corpus, params), kk, vote).label
                == corpus.get(i).label
                for i in test_ids
            )
            scores[k].append(hits / len(test_ids))
    return {k: float(np.mean(v)) for k, v in scores.items()}


# -- rendering ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.6f}"


def report_table(report: EvalReport, title: str | None = None) -> str:
    out = []
    if title:
        out.append(title)
    width = max([len("true\\pred")] + [len(lab) for lab in report.labels])
    col = max(8, *(len(lab) for lab in report.labels))
    out.append("true\\pred".ljust(width) + "".join(lab.rjust(col + 1) for lab in report.labels))
    for lab, row in zip(report.labels, report.confusion):
        out.append(lab.ljust(width) + "".join(str(c).rjust(col + 1) for c in row))
    out.append("")
    out.append(f"{'label'.ljust(width)} {'precision':>10} {'recall':>10} {'f1':>10} {'support':>8}")
    for lab, m in report.per_class.items():
        out.append(f"{lab.ljust(width)} {_fmt(m.precision):>10} {_fmt(m.recall):>10} "
                   f"{_fmt(m.f1):>10} {m.support:>8}")
    p, r, f = report.macro
    out.append(f"{'macro'.ljust(width)} {_fmt(p):>10} {_fmt(r):>10} {_fmt(f):>10} {report.total:>8}")
    out.append(f"accuracy {_fmt(report.micro_accuracy)}")
    return "\n".join(out) + "\n"


def report_csv(report: EvalReport, scheme: str | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    prefix = [scheme] if scheme is not None else []
    w.writerow((["scheme"] if scheme is not None else []) + ["label", "precision", "recall", "f1", "support"])
    for lab, m in report.per_class.items():
        w.writerow(prefix + [lab, repr(m.precision), repr(m.recall), repr(m.f1), m.support])
    p, r, f = report.macro
    w.writerow(prefix + ["macro", repr(p), repr(r), repr(f), report.total])
    return buf.getvalue()


def report_json(report: EvalReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def prediction_log_csv(log: Sequence[PredictionRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["doc_id", "true", "predicted", "neighbors"])
    for rec in log:
        w.writerow([rec.doc_id, rec.true_label, rec.predicted, " ".join(rec.neighbor_ids)])
    return buf.getvalue()
