"""Independent reference computations used as test oracles.

None of these import the code paths they check: weights are recomputed
with exact rationals from token lists, kNN is a dense numpy scan, and the
k-means optimum is found by enumerating partitions.
"""

import itertools
import math
import unicodedata
from collections import Counter
from fractions import Fraction

import numpy as np


def reference_tokens(text, strip_digits=False):
    """Runs of Unicode letters (category L*) and, unless stripped, decimal digits (Nd)."""
    def keep(ch):
        cat = unicodedata.category(ch)
        return cat.startswith("L") or (not strip_digits and cat == "Nd")
    return ["".join(g) for k, g in itertools.groupby(text.lower(), key=keep) if k]


def count_df(token_lists_per_doc):
    df = Counter()
    for paragraphs in token_lists_per_doc:
        df.update({t for para in paragraphs for t in para})
    return dict(df)


def exact_profile(paragraphs, term):
    """(count, first, last, centroid, compactness) as Fractions."""
    P = len(paragraphs)
    pos = [Fraction(i, P) for i, para in enumerate(paragraphs) for t in para if t == term]
    centroid = sum(pos) / len(pos)
    mad = sum(abs(p - centroid) for p in pos) / len(pos)
    return len(pos), min(pos), max(pos), centroid, mad


def brute_weight(paragraphs, term, df, n_docs, scheme, alpha, beta):
    count, first, _, _, mad = exact_profile(paragraphs, term)
    idf = math.log(n_docs / df)
    if scheme == "tfidf":
        factor = 1.0
    else:
        ctilde = min(2 * mad, Fraction(1))
        factor = float((1 + Fraction(alpha) * (1 - first)) * (1 + Fraction(beta) * ctilde))
    return count * idf * factor


TIE_DECIMALS = 12


def dense_cosine_matrix(X, q):
    norms = np.linalg.norm(X, axis=1)
    qn = np.linalg.norm(q)
    out = np.zeros(len(X))
    ok = (norms > 0) & (qn > 0)
    out[ok] = (X[ok] @ q) / (norms[ok] * qn)
    return out


def brute_knn(X, labels, q, k):
    """Exhaustive scan with the documented tie rules."""
    sims = dense_cosine_matrix(X, q).round(TIE_DECIMALS)
    order = sorted(range(len(X)), key=lambda i: (-sims[i], i))[:k]
    sims = dense_cosine_matrix(X, q)
    votes, sums = {}, {}
    for i in order:
        votes[labels[i]] = votes.get(labels[i], 0) + 1
        sums[labels[i]] = sums.get(labels[i], 0.0) + sims[i]
    best = min(votes, key=lambda lab: (-votes[lab], -round(sums[lab], TIE_DECIMALS), lab))
    return best, order


def brute_weighted_vote(X, labels, weights, q, k):
    sims = dense_cosine_matrix(X, q)
    order = sorted(range(len(X)), key=lambda i: (-round(sims[i], TIE_DECIMALS), i))[:k]
    score, sums = {}, {}
    for i in order:
        score[labels[i]] = score.get(labels[i], 0.0) + weights[i] * sims[i]
        sums[labels[i]] = sums.get(labels[i], 0.0) + sims[i]
    return min(score, key=lambda lab: (-round(score[lab], TIE_DECIMALS),
                                       -round(sums[lab], TIE_DECIMALS), lab))


def naive_objective(X, assignments, centroids):
    total = 0.0
    for i, x in enumerate(X):
        c = centroids[assignments[i]]
        total += sum((float(a) - float(b)) ** 2 for a, b in zip(x, c))
    return total


def best_two_partition(X):
    """Global optimum of the within-cluster squared error over all 2-partitions."""
    n = len(X)
    best = math.inf
    for r in range(1, n // 2 + 1):
        for left in itertools.combinations(range(n), r):
            mask = np.zeros(n, bool)
            mask[list(left)] = True
            cost = sum(((X[m] - X[m].mean(axis=0)) ** 2).sum() for m in (mask, ~mask))
            best = min(best, cost)
    return best


def brute_border(vectors, labels):
    """Edited-nearest-neighbor keep mask using dense cosine, earliest index on ties."""
    n = len(vectors)
    drop = []
    for i in range(n):
        sims = dense_cosine_matrix(vectors, vectors[i]).round(TIE_DECIMALS)
        sims[i] = -np.inf
        j = int(np.argmax(sims))  # first maximum
        drop.append(labels[j] != labels[i])
    keep = [not d for d in drop]
    for lab in set(labels):
        idx = [i for i in range(n) if labels[i] == lab]
        if not any(keep[i] for i in idx):
            for i in idx:
                keep[i] = True
    return keep
