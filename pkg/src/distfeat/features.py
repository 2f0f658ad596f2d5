"""Distributional term profiles and feature-augmented tf-idf weighting.

A term occurring in paragraph ``i`` of a ``P``-paragraph document sits at
position ``i / P``. From those positions we derive first/last appearance,
a centroid, and compactness (mean absolute deviation from the centroid).
Compactness is normalized by its upper bound 0.5 before entering the weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

from .corpus import Corpus, Document

SCHEMES = ("tfidf", "distributional")


class TermNotFound(KeyError):
    def __init__(self, term: str, where: str = "document"):
        super().__init__(term)
        self.term = term
        self.where = where

    def __str__(self):
        return f"term not found in {self.where}: {self.term!r}"


class IdfSource(Protocol):
    """Anything carrying corpus statistics: a Corpus or a saved model's table."""

    vocabulary: Mapping[str, int]
    doc_frequency: Mapping[str, int]
    num_documents: int


@dataclass(frozen=True)
class IdfTable:
    vocabulary: dict[str, int]
    doc_frequency: dict[str, int]
    num_documents: int

    @classmethod
    def of(cls, source: IdfSource) -> "IdfTable":
        return cls(dict(source.vocabulary), dict(source.doc_frequency), source.num_documents)


@dataclass(frozen=True)
class TermProfile:
    term: str
    positions: tuple[float, ...]
    count: int
    first: float
    last: float
    centroid: float
    compactness: float

    @property
    def normalized_compactness(self) -> float:
        return min(2.0 * self.compactness, 1.0)


@dataclass(frozen=True)
class WeightingParams:
    scheme: str = "distributional"
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")

    @property
    def name(self) -> str:
        if self.scheme == "tfidf":
            return "tfidf"
        return f"distributional(alpha={self.alpha:g},beta={self.beta:g})"


@dataclass(frozen=True)
class FeatureVector:
    entries: dict[int, float]
    source_document_id: str = ""

    def __len__(self):
        return len(self.entries)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.entries.values()))

    def scaled(self, c: float) -> "FeatureVector":
        return FeatureVector({i: w * c for i, w in self.entries.items()}, self.source_document_id)


def profile_from_positions(term: str, positions: Sequence[float]) -> TermProfile:
    if not positions:
        raise TermNotFound(term)
    pos = tuple(sorted(positions))
    centroid = math.fsum(pos) / len(pos)
    # clamp against rounding so first <= centroid <= last holds exactly
    centroid = min(max(centroid, pos[0]), pos[-1])
    compactness = math.fsum(abs(p - centroid) for p in pos) / len(pos)
    return TermProfile(term, pos, len(pos), pos[0], pos[-1], centroid, compactness)


def term_profile(document: Document, term: str) -> TermProfile:
    n_par = document.num_paragraphs
    positions = [
        i / n_par
        for i, para in enumerate(document.paragraphs)
        for tok in para
        if tok == term
    ]
    return profile_from_positions(term, positions)


def document_profiles(document: Document) -> dict[str, TermProfile]:
    """Profiles of every distinct term in one pass, keyed and ordered by term."""
    n_par = document.num_paragraphs
    positions: dict[str, list[float]] = {}
    for i, para in enumerate(document.paragraphs):
        for tok in para:
            positions.setdefault(tok, []).append(i / n_par)
    return {t: profile_from_positions(t, positions[t]) for t in sorted(positions)}


def idf(term: str, corpus: IdfSource) -> float:
    try:
        df = corpus.doc_frequency[term]
    except KeyError:
        raise TermNotFound(term, "vocabulary") from None
    return math.log(corpus.num_documents / df)


def augmentation(profile: TermProfile, params: WeightingParams) -> float:
    """Multiplicative factor applied on top of tf*idf; 1 for plain tf-idf."""
    if params.scheme == "tfidf":
        return 1.0
    return (1.0 + params.alpha * (1.0 - profile.first)) * (
        1.0 + params.beta * profile.normalized_compactness
    )


def term_weight(profile: TermProfile, idf_value: float, params: WeightingParams) -> float:
    return profile.count * idf_value * augmentation(profile, params)


def weight(term: str, document: Document, corpus: IdfSource, params: WeightingParams) -> float:
    return term_weight(term_profile(document, term), idf(term, corpus), params)


def vectorize(document: Document, corpus: IdfSource, params: WeightingParams) -> FeatureVector:
    vocab = corpus.vocabulary
    entries = {}
    for term, prof in document_profiles(document).items():
        if term not in vocab:
            continue
        w = term_weight(prof, idf(term, corpus), params)
        if w > 0:
            entries[vocab[term]] = w
    return FeatureVector(dict(sorted(entries.items())), document.id)


def compactness_histogram(
    profiles: Sequence[TermProfile], num_bins: int
) -> list[tuple[tuple[float, float], int]]:
    """Equal-width bins over normalized compactness in [0, 1]; the last bin is closed."""
    if num_bins < 1:
        raise ValueError("num_bins must be >= 1")
    counts = [0] * num_bins
    for prof in profiles:
        idx = min(int(prof.normalized_compactness * num_bins), num_bins - 1)
        counts[idx] += 1
    return [((i / num_bins, (i + 1) / num_bins), c) for i, c in enumerate(counts)]


def rank_documents(term: str, corpus: Corpus, params: WeightingParams) -> list[tuple[str, float]]:
    """Documents containing ``term`` by weight descending, ties by id ascending."""
    if term not in corpus.vocabulary:
        raise TermNotFound(term, "vocabulary")
    term_idf = idf(term, corpus)
    ranked = []
    for doc in corpus.documents:
        if any(term in para for para in doc.paragraphs):
            ranked.append((doc.id, term_weight(term_profile(doc, term), term_idf, params)))
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked
