"""CLI configuration: INI file sections, overridden by command-line flags.

Recognized sections and keys::

    [tokenizer]  stopwords_file, min_token_length, strip_digits
    [weighting]  scheme, alpha, beta
    [knn]        k, vote, compress, clusters_per_category, border_deletion
    [kmeans]     k, max_iterations, tolerance, init
    [output]     format
    [run]        corpus_root, seed
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import TokenizerConfig, tokenizer_config_from_section
from .features import WeightingParams
from .kmeans import KMeansConfig

OUTPUT_FORMATS = ("table", "csv", "json")

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def _bool(value: str, key: str) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValueError(f"{key}: expected a boolean, got {value!r}")


@dataclass(frozen=True)
class KnnSettings:
    k: int = 3
    vote: str = "majority"
    compress: bool = False
    clusters_per_category: int = 3
    border_deletion: bool = True


@dataclass(frozen=True)
class CliConfig:
    corpus_root: Path | None = None
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    weighting: WeightingParams = field(default_factory=WeightingParams)
    knn: KnnSettings = field(default_factory=KnnSettings)
    kmeans: KMeansConfig = field(default_factory=lambda: KMeansConfig(k=2))
    output_format: str = "table"
    seed: int = 0

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {OUTPUT_FORMATS}")


def load_config(path: str | Path) -> CliConfig:
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise ValueError(f"cannot read config file {path}")
    cfg = CliConfig()
    base = path.parent

    if parser.has_section("tokenizer"):
        cfg = replace(cfg, tokenizer=tokenizer_config_from_section(parser["tokenizer"], base))
    if parser.has_section("weighting"):
        s = parser["weighting"]
        cfg = replace(cfg, weighting=WeightingParams(
            s.get("scheme", cfg.weighting.scheme),
            s.getfloat("alpha", cfg.weighting.alpha),
            s.getfloat("beta", cfg.weighting.beta),
        ))
    if parser.has_section("knn"):
        s = parser["knn"]
        cfg = replace(cfg, knn=KnnSettings(
            k=s.getint("k", cfg.knn.k),
            vote=s.get("vote", cfg.knn.vote),
            compress=_bool(s.get("compress", "false"), "compress"),
            clusters_per_category=s.getint("clusters_per_category", cfg.knn.clusters_per_category),
            border_deletion=_bool(s.get("border_deletion", "true"), "border_deletion"),
        ))
    if parser.has_section("run"):
        s = parser["run"]
        root = s.get("corpus_root")
        cfg = replace(
            cfg,
            corpus_root=(base / root) if root else None,
            seed=s.getint("seed", cfg.seed),
        )
    if parser.has_section("kmeans"):
        s = parser["kmeans"]
        cfg = replace(cfg, kmeans=KMeansConfig(
            k=s.getint("k", cfg.kmeans.k),
            max_iterations=s.getint("max_iterations", cfg.kmeans.max_iterations),
            tolerance=s.getfloat("tolerance", cfg.kmeans.tolerance),
            seed=cfg.seed,
            init=s.get("init", cfg.kmeans.init),
        ))
    if parser.has_section("output"):
        cfg = replace(cfg, output_format=parser["output"].get("format", cfg.output_format))
    return cfg
