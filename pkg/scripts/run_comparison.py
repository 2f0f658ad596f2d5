"""Compares tfidf and distributional weighting on a labelled corpus over several splits.

    python3 scripts/run_comparison.py [ROOT] [--seeds 10] [--k 3] [--ratio 0.5] [--compress]

Prints per-seed macro recall for each scheme and the documents each scheme
gets right that the other gets wrong.
"""

import argparse
import statistics
import sys
from pathlib import Path

from distfeat.corpus import load_corpus
from distfeat.evaluation import ClassifierConfig, compare_schemes, split
from distfeat.features import WeightingParams

DEFAULT_ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "synthetic"


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("root", nargs="?", default=DEFAULT_ROOT, type=Path)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--compress", action="store_true")
    args = p.parse_args(argv)

    corpus = load_corpus(args.root)
    schemes = [WeightingParams("tfidf"), WeightingParams("distributional", args.alpha, args.beta)]
    config = ClassifierConfig(k=args.k, compress=args.compress)
    recalls = {s.name: [] for s in schemes}
    print(f"corpus {args.root}: {corpus.num_documents} documents, categories {', '.join(corpus.categories)}")
    print(f"{'seed':>4}  {'tfidf':>9}  {schemes[1].name:>32}  fixed  broken")
    for seed in range(args.seeds):
        base, dist = compare_schemes(corpus, split(corpus, args.ratio, seed), schemes, config)
        fixed = sum(a.predicted != a.true_label == b.predicted for a, b in zip(base.log, dist.log))
        broken = sum(a.predicted == a.true_label != b.predicted for a, b in zip(base.log, dist.log))
        for res in (base, dist):
            recalls[res.params.name].append(res.report.macro_recall)
        print(f"{seed:>4}  {base.report.macro_recall:9.6f}  {dist.report.macro_recall:32.6f}  "
              f"{fixed:>5}  {broken:>6}")
    for name, values in recalls.items():
        print(f"mean macro recall {name}: {statistics.fmean(values):.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
