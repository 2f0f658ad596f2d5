"""Cosine kNN over sparse feature vectors, plain and cluster-compressed.

The compressed variant first drops border samples (edited nearest neighbor),
then clusters each category with k-means and keeps the cluster centers as
prototypes weighted by cluster size.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kmeans
from .features import FeatureVector

VOTE_MODES = ("majority", "similarity")

# similarities and vote scores equal to this many decimals count as ties
TIE_DECIMALS = 12

Vector = Mapping[int, float]


def _entries(v) -> Mapping[int, float]:
    return v.entries if isinstance(v, FeatureVector) else v


def _norm(v: Vector) -> float:
    return math.sqrt(sum(w * w for w in v.values()))


def cosine(u, v) -> float:
    """Cosine similarity; 0 when either vector is empty or all-zero."""
    u, v = _entries(u), _entries(v)
    if len(u) > len(v):
        u, v = v, u
    nu, nv = _norm(u), _norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    dot = sum(w * v[i] for i, w in u.items() if i in v)
    return dot / (nu * nv)


@dataclass(frozen=True)
class Sample:
    vector: FeatureVector
    label: str

    @property
    def id(self) -> str:
        return self.vector.source_document_id


@dataclass(frozen=True)
class Prototype:
    vector: FeatureVector
    label: str
    weight: float
    members: tuple[str, ...] = ()

    @property
    def id(self) -> str:
        return self.vector.source_document_id


@dataclass(frozen=True)
class KnnModel:
    samples: tuple[Sample, ...]
    k_default: int = 1

    def labels(self) -> list[str]:
        return sorted({s.label for s in self.samples})


@dataclass(frozen=True)
class CompressedKnnModel:
    prototypes: tuple[Prototype, ...]
    k_default: int = 1

    @property
    def provenance(self) -> list[int]:
        return [len(p.members) for p in self.prototypes]

    def labels(self) -> list[str]:
        return sorted({p.label for p in self.prototypes})


@dataclass(frozen=True)
class Prediction:
    label: str
    neighbor_ids: tuple[str, ...]
    score_by_label: dict[str, float]
    similarities: tuple[float, ...] = ()


def as_samples(samples) -> tuple[Sample, ...]:
    out = []
    for s in samples:
        if not isinstance(s, Sample):
            vec, label = s
            if not isinstance(vec, FeatureVector):
                vec = FeatureVector(dict(vec))
            s = Sample(vec, label)
        if not s.label:
            raise ValueError("every sample needs a non-empty label")
        out.append(s)
    return tuple(out)


def train(samples, k_default: int = 1) -> KnnModel:
    """Stores the labeled vectors; there is nothing to fit."""
    samples = as_samples(samples)
    if not samples:
        raise ValueError("cannot train on zero samples")
    if not 1 <= k_default <= len(samples):
        raise ValueError(f"k_default={k_default} outside [1, {len(samples)}]")
    return KnnModel(samples, k_default)


def _top_k(vectors: Sequence[FeatureVector], query, k: int) -> list[tuple[int, float]]:
    sims = [(i, cosine(query, v)) for i, v in enumerate(vectors)]
    sims.sort(key=lambda item: (-_tie(item[1]), item[0]))
    return sims[:k]


def _tie(x: float) -> float:
    return round(x, TIE_DECIMALS)


def _decide(scores: dict[str, float], sim_sums: dict[str, float]) -> str:
    # vote score, then summed similarity, then smallest label
    return min(scores, key=lambda lab: (-_tie(scores[lab]), -_tie(sim_sums[lab]), lab))


def _check_k(k: int, n: int):
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")


def classify(model: KnnModel, query, k: int | None = None, vote: str = "majority") -> Prediction:
    """Votes among the k most similar samples.

    ``vote="majority"`` counts neighbors per label; ``vote="similarity"``
    sums their cosine similarities instead. An empty query has similarity 0
    to everything, so the first k samples in training order are the
    neighbors and the tie-break chain decides.
    """
    k = model.k_default if k is None else k
    _check_k(k, len(model.samples))
    if vote not in VOTE_MODES:
        raise ValueError(f"vote must be one of {VOTE_MODES}")
    top = _top_k([s.vector for s in model.samples], query, k)
    scores: dict[str, float] = {}
    sim_sums: dict[str, float] = {}
    for i, sim in top:
        label = model.samples[i].label
        scores[label] = scores.get(label, 0) + (1 if vote == "majority" else sim)
        sim_sums[label] = sim_sums.get(label, 0.0) + sim
    return Prediction(
        label=_decide(scores, sim_sums),
        neighbor_ids=tuple(model.samples[i].id for i, _ in top),
        score_by_label=dict(sorted(scores.items())),
        similarities=tuple(sim for _, sim in top),
    )


def classify_compressed(model: CompressedKnnModel, query, k: int | None = None) -> Prediction:
    """Weighted vote: each neighbor prototype adds ``weight * similarity``."""
    k = model.k_default if k is None else k
    _check_k(k, len(model.prototypes))
    top = _top_k([p.vector for p in model.prototypes], query, k)
    scores: dict[str, float] = {}
    sim_sums: dict[str, float] = {}
    for i, sim in top:
        proto = model.prototypes[i]
        scores[proto.label] = scores.get(proto.label, 0.0) + proto.weight * sim
        sim_sums[proto.label] = sim_sums.get(proto.label, 0.0) + sim
    return Prediction(
        label=_decide(scores, sim_sums),
        neighbor_ids=tuple(model.prototypes[i].id for i, _ in top),
        score_by_label=dict(sorted(scores.items())),
        similarities=tuple(sim for _, sim in top),
    )


def predict(model: KnnModel | CompressedKnnModel, query, k: int | None = None,
            vote: str = "majority") -> Prediction:
    if isinstance(model, CompressedKnnModel):
        return classify_compressed(model, query, k)
    return classify(model, query, k, vote)


def nearest_other(samples: Sequence[Sample], i: int) -> int:
    """Index of the most similar other sample; ties go to the earlier one."""
    best, best_sim = -1, -math.inf
    for j, s in enumerate(samples):
        if j == i:
            continue
        sim = _tie(cosine(samples[i].vector, s.vector))
        if sim > best_sim:
            best, best_sim = j, sim
    return best


def delete_border_samples(samples) -> tuple[Sample, ...]:
    """Edited nearest neighbor: drop samples whose nearest other sample disagrees.

    A category whose every sample would be dropped is kept whole.
    """
    samples = as_samples(samples)
    if len(samples) < 2:
        return samples
    border = [samples[nearest_other(samples, i)].label != s.label for i, s in enumerate(samples)]
    extinct = {
        label for label in {s.label for s in samples}
        if all(b for s, b in zip(samples, border) if s.label == label)
    }
    return tuple(
        s for s, b in zip(samples, border) if not b or s.label in extinct
    )


def category_seed(seed: int, label: str) -> int:
    """Deterministic per-category seed, independent of category order."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, zlib.crc32(label.encode("utf-8"))])
    return int(ss.generate_state(1)[0])


def compress(
    model: KnnModel,
    clusters_per_category: int,
    seed: int = 0,
    border_deletion: bool = True,
    max_iterations: int = 100,
    tolerance: float = 1e-9,
) -> CompressedKnnModel:
    """Replaces each category's samples by weighted k-means centers.

    Prototypes are listed by category, then by the earliest training sample
    they absorbed, so singleton clusters reproduce the training order.
    """
    if clusters_per_category < 1:
        raise ValueError("clusters_per_category must be >= 1")
    samples = delete_border_samples(model.samples) if border_deletion else model.samples

    prototypes = []
    for label in sorted({s.label for s in samples}):
        members = [s for s in samples if s.label == label]
        config = kmeans.KMeansConfig(
            k=min(clusters_per_category, len(members)),
            max_iterations=max_iterations,
            tolerance=tolerance,
            seed=category_seed(seed, label),
        )
        result = kmeans.cluster([dict(s.vector.entries) for s in members], config)
        centers = result.centroid_vectors()
        groups = [(result.members(j), j) for j in range(result.k)]
        ordered = sorted((g for g in groups if g[0]), key=lambda g: g[0][0])
        for n, (idx, j) in enumerate(ordered):
            ids = tuple(members[i].id for i in idx)
            vec_id = ids[0] if len(ids) == 1 else f"{label}#c{n}"
            prototypes.append(Prototype(
                vector=FeatureVector(dict(sorted(centers[j].items())), vec_id),
                label=label,
                weight=float(len(idx)),
                members=ids,
            ))
    k_default = min(model.k_default, len(prototypes))
    return CompressedKnnModel(tuple(prototypes), k_default)
