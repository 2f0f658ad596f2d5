"""Seeded synthetic two-category corpus with planted high-frequency noise words.

Each document mentions a handful of its own category's topic words in the
opening paragraph and again in later paragraphs spread across the text.
Noisy documents additionally carry a block of the *other* category's topic
words, repeated many times inside one middle paragraph. Raw term frequency
is fooled by that block; first appearance and compactness are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

TOPICS = {
    "computing": (
        "algorithm", "compiler", "kernel", "processor", "database", "network",
        "software", "bandwidth", "cache", "encryption", "protocol", "router",
        "bytecode", "thread", "scheduler", "interpreter",
    ),
    "medicine": (
        "patient", "clinical", "therapy", "diagnosis", "surgery", "vaccine",
        "dosage", "symptom", "tumor", "cardiac", "antibiotic", "hospital",
        "pathology", "infection", "physician", "immune",
    ),
}

FILLER = (
    "study", "report", "results", "method", "analysis", "approach", "system",
    "data", "section", "value", "model", "process", "work", "example", "case",
    "problem", "figure", "table", "review", "design", "evaluation", "research",
    "field", "task", "level", "number", "group", "change", "effect", "summary",
    "overview", "context", "question", "detail", "measure", "sample", "trend",
    "finding", "outcome", "scope",
)


@dataclass(frozen=True)
class FixtureConfig:
    docs_per_category: int = 20
    paragraphs: int = 6
    topic_words: int = 5
    filler_per_paragraph: int = 8
    noise_words: int = 2
    noise_repeats: int = 5
    noisy_every: int = 2  # every n-th document of a category is noisy
    seed: int = 7


def _sentence(words: list[str]) -> str:
    text = " ".join(words)
    return text[:1].upper() + text[1:] + "."


def generate(config: FixtureConfig = FixtureConfig()) -> dict[str, str]:
    """Returns ``{relative path: text}`` for the whole corpus."""
    rng = np.random.default_rng(config.seed)
    P = config.paragraphs
    files = {}
    cats = sorted(TOPICS)
    for cat in cats:
        other = next(c for c in cats if c != cat)
        for n in range(config.docs_per_category):
            paras = [
                [str(w) for w in rng.choice(FILLER, config.filler_per_paragraph, replace=False)]
                for _ in range(P)
            ]
            topic = [str(w) for w in rng.choice(TOPICS[cat], config.topic_words, replace=False)]
            for word in topic:
                # once up front, then one early-half and one late-half mention
                for p in (0, int(rng.integers(1, P // 2)), int(rng.integers(P // 2 + 1, P))):
                    paras[p].insert(int(rng.integers(len(paras[p]) + 1)), word)
            if n % config.noisy_every == 0:
                noise = [str(w) for w in rng.choice(TOPICS[other], config.noise_words, replace=False)]
                mid = P // 2 if n % (2 * config.noisy_every) == 0 else P // 2 - 1
                for word in noise:
                    for _ in range(config.noise_repeats):
                        paras[mid].insert(int(rng.integers(len(paras[mid]) + 1)), word)
            files[f"{cat}/{cat}_{n:02d}.txt"] = "\n\n".join(_sentence(p) for p in paras) + "\n"
    return files


def write(root: str | Path, config: FixtureConfig = FixtureConfig()) -> list[Path]:
    root = Path(root)
    written = []
    for rel, text in generate(config).items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written
