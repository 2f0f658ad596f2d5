"""Grid over the alpha/beta augmentation strengths: mean macro recall across splits.

    python3 scripts/sweep_weights.py [ROOT] [--seeds 5] [--grid 0,0.5,1,2]
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
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--grid", default="0,0.5,1,2")
    args = p.parse_args(argv)

    grid = [float(x) for x in args.grid.split(",")]
    corpus = load_corpus(args.root)
    schemes = [WeightingParams("distributional", a, b) for a in grid for b in grid]
    means = {s.name: [] for s in schemes}
    for seed in range(args.seeds):
        for res in compare_schemes(corpus, split(corpus, 0.5, seed), schemes, ClassifierConfig(k=args.k)):
            means[res.params.name].append(res.report.macro_recall)
    print("alpha\\beta " + " ".join(f"{b:>8g}" for b in grid))
    for a in grid:
        row = [statistics.fmean(means[WeightingParams("distributional", a, b).name]) for b in grid]
        print(f"{a:>10g} " + " ".join(f"{v:8.4f}" for v in row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
