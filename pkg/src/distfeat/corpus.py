"""Document ingestion: paragraph segmentation, tokenization, corpus vocabulary."""

from __future__ import annotations

import configparser
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

_BLANK_LINE = re.compile(r"\n[ \t\f\v]*\n")


class IngestionError(Exception):
    """Raised when a corpus root or document cannot be read."""


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset[str] = frozenset()
    min_token_length: int = 1
    strip_digits: bool = False

    def __post_init__(self):
        if self.min_token_length < 0:
            raise ValueError(f"min_token_length must be >= 0, got {self.min_token_length}")
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))


@dataclass(frozen=True)
class Document:
    id: str
    paragraphs: tuple[tuple[str, ...], ...]
    title: str | None = None
    label: str | None = None

    def __post_init__(self):
        if not self.paragraphs:
            raise ValueError(f"document {self.id!r} has no paragraphs")

    @property
    def num_paragraphs(self) -> int:
        return len(self.paragraphs)

    def tokens(self) -> list[str]:
        return [tok for para in self.paragraphs for tok in para]

    def terms(self) -> list[str]:
        """Distinct terms, sorted."""
        return sorted({tok for para in self.paragraphs for tok in para})


@dataclass(frozen=True)
class SkippedFile:
    path: str
    reason: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    vocabulary: dict[str, int]
    doc_frequency: dict[str, int]
    num_documents: int
    skipped: tuple[SkippedFile, ...] = field(default=())

    @classmethod
    def from_documents(cls, documents: Sequence[Document], skipped=()) -> "Corpus":
        vocabulary, df = build_vocabulary(documents)
        return cls(tuple(documents), vocabulary, df, len(documents), tuple(skipped))

    @property
    def labels(self) -> list[str | None]:
        return [doc.label for doc in self.documents]

    @property
    def categories(self) -> list[str]:
        return sorted({doc.label for doc in self.documents if doc.label is not None})

    def get(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)

    def subset(self, doc_ids: Iterable[str]) -> "Corpus":
        """Corpus over the given documents, with vocabulary and df recomputed."""
        wanted = set(doc_ids)
        return Corpus.from_documents([d for d in self.documents if d.id in wanted])


def segment(raw_text: str) -> list[str]:
    """Split text into blank-line-delimited paragraphs.

    Line endings are normalized first; paragraphs are stripped and empty ones dropped.
    """
    text = raw_text.replace("\r\n", "\n").replace("\r", "\n")
    return [p.strip() for p in _BLANK_LINE.split(text) if p.strip()]


def tokenize(paragraph: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Lowercase and split into maximal runs of letters (and digits unless stripped)."""
    text = paragraph.lower()
    if config.strip_digits:
        keep = str.isalpha
    else:
        keep = lambda c: c.isalpha() or c.isdecimal()  # noqa: E731

    tokens = []
    run: list[str] = []
    for ch in text + " ":
        if keep(ch):
            run.append(ch)
        elif run:
            tokens.append("".join(run))
            run = []
    return [
        t for t in tokens
        if len(t) >= config.min_token_length and t not in config.stopwords
    ]


def document_from_text(
    raw_text: str,
    doc_id: str,
    config: TokenizerConfig = TokenizerConfig(),
    label: str | None = None,
) -> Document:
    """Builds a Document; paragraphs that tokenize to nothing are dropped.

    Raises ValueError when no paragraph survives.
    """
    raw_paragraphs = segment(raw_text)
    paragraphs = tuple(
        tuple(toks) for toks in (tokenize(p, config) for p in raw_paragraphs) if toks
    )
    if not paragraphs:
        raise ValueError(f"document {doc_id!r} contains no tokens")
    return Document(
        id=doc_id,
        paragraphs=paragraphs,
        title=raw_paragraphs[0],
        label=label,
    )


def read_document(path: str | Path, config: TokenizerConfig = TokenizerConfig(),
                  doc_id: str | None = None, label: str | None = None) -> Document:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    return document_from_text(text, doc_id if doc_id is not None else str(path), config, label)


def build_vocabulary(documents: Sequence[Document]) -> tuple[dict[str, int], dict[str, int]]:
    """Lexicographically indexed vocabulary and per-term document frequency."""
    if not documents:
        raise ValueError("cannot build a vocabulary from zero documents")
    df: Counter[str] = Counter()
    for doc in documents:
        df.update(set(doc.tokens()))
    terms = sorted(df)
    return {t: i for i, t in enumerate(terms)}, {t: df[t] for t in terms}


def load_corpus(root: str | Path, config: TokenizerConfig = TokenizerConfig()) -> Corpus:
    """Reads ``<root>/<category>/<file>`` into a labeled corpus.

    Documents are ordered by POSIX relative path. Files with no tokens are
    recorded in ``Corpus.skipped`` rather than failing the load.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(f"corpus root is not a readable directory: {root}")
    try:
        files = sorted(
            (p for p in root.glob("*/*") if p.is_file() and not p.name.startswith(".")),
            key=lambda p: p.relative_to(root).as_posix(),
        )
    except OSError as exc:
        raise IngestionError(f"cannot list {root}: {exc}") from exc

    documents = []
    skipped = []
    for path in files:
        rel = path.relative_to(root).as_posix()
        try:
            documents.append(read_document(path, config, doc_id=rel, label=path.parent.name))
        except ValueError as exc:
            logger.warning("skipping %s: %s", rel, exc)
            skipped.append(SkippedFile(rel, str(exc)))
    if not documents:
        raise IngestionError(f"no usable documents under {root}")
    return Corpus.from_documents(documents, skipped)


def load_stopwords(path: str | Path) -> frozenset[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(w.strip().lower() for w in lines if w.strip() and not w.startswith("#"))


def tokenizer_config_from_section(section, base_dir: Path | None = None) -> TokenizerConfig:
    """Reads ``stopwords_file``, ``min_token_length`` and ``strip_digits`` keys."""
    stopwords: frozenset[str] = frozenset()
    if section.get("stopwords_file"):
        sw_path = Path(section["stopwords_file"])
        if base_dir is not None and not sw_path.is_absolute():
            sw_path = base_dir / sw_path
        stopwords = load_stopwords(sw_path)
    return TokenizerConfig(
        stopwords=stopwords,
        min_token_length=int(section.get("min_token_length", 1)),
        strip_digits=str(section.get("strip_digits", "false")).strip().lower()
        in ("1", "true", "yes", "on"),
    )


def load_tokenizer_config(path: str | Path) -> TokenizerConfig:
    """Loads a key-value file; keys may sit in a ``[tokenizer]`` section or at top level."""
    path = Path(path)
    parser = configparser.ConfigParser()
    text = path.read_text(encoding="utf-8")
    if not text.lstrip().startswith("["):
        text = "[tokenizer]\n" + text
    parser.read_string(text, source=str(path))
    section = parser["tokenizer"] if parser.has_section("tokenizer") else {}
    return tokenizer_config_from_section(section, path.parent)
