"""Text categorization with distributional term features.

Term weights combine tf-idf with where a term first appears in a document
and how widely its occurrences spread across paragraphs. The weighted
vectors feed cosine kNN (plain or compressed to k-means prototypes) and
k-means clustering.
"""

from .corpus import Corpus, Document, TokenizerConfig, load_corpus, segment, tokenize
from .features import (FeatureVector, TermProfile, WeightingParams, compactness_histogram, idf,
                       rank_documents, term_profile, vectorize, weight)
from .kmeans import KMeansConfig, KMeansModel, cluster, objective
from .knn import (CompressedKnnModel, KnnModel, Prediction, classify, classify_compressed,
                  compress, cosine, delete_border_samples, train)
from .evaluation import EvalReport, Split, compare_schemes, evaluate, split

__version__ = "0.1.0"
