"""Line-oriented, versioned text format for trained classifiers.

Layout (fields separated by a single TAB, one record per line)::

    distfeat-model	1
    kind	knn | compressed
    scheme	tfidf | distributional
    alpha	<float>
    beta	<float>
    vote	majority | similarity
    k_default	<int>
    min_token_length	<int>
    strip_digits	true | false
    stopwords	<n>
    <word>                                  (n lines, sorted)
    num_documents	<int>
    vocabulary	<m>
    <term>	<index>	<df>                    (m lines, index order)
    records	<r>
    <label>	<weight>	<id>	<idx:w idx:w ...>[	<member id>...]

Floats are written with ``repr`` so a load/save cycle reproduces the file
byte for byte. Labels, ids, and terms may not contain TAB or newline.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import TokenizerConfig
from .features import FeatureVector, IdfTable, WeightingParams
from .knn import CompressedKnnModel, KnnModel, Prototype, Sample, VOTE_MODES

MAGIC = "distfeat-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SavedModel:
    """A classifier plus everything needed to vectorize new documents."""

    classifier: KnnModel | CompressedKnnModel
    weighting: WeightingParams
    tokenizer: TokenizerConfig
    idf_table: IdfTable
    vote: str = "majority"

    @property
    def kind(self) -> str:
        return "compressed" if isinstance(self.classifier, CompressedKnnModel) else "knn"


def _clean(field: str, what: str) -> str:
    if "\t" in field or "\n" in field or "\r" in field:
        raise ModelFormatError(f"{what} may not contain tabs or newlines: {field!r}")
    return field


def _entries_field(vec: FeatureVector) -> str:
    return " ".join(f"{i}:{w!r}" for i, w in sorted(vec.entries.items()))


def dumps(model: SavedModel) -> str:
    clf = model.classifier
    lines = [
        f"{MAGIC}\t{FORMAT_VERSION}",
        f"kind\t{model.kind}",
        f"scheme\t{model.weighting.scheme}",
        f"alpha\t{float(model.weighting.alpha)!r}",
        f"beta\t{float(model.weighting.beta)!r}",
        f"vote\t{model.vote}",
        f"k_default\t{clf.k_default}",
        f"min_token_length\t{model.tokenizer.min_token_length}",
        f"strip_digits\t{'true' if model.tokenizer.strip_digits else 'false'}",
        f"stopwords\t{len(model.tokenizer.stopwords)}",
    ]
    lines += [_clean(w, "stopword") for w in sorted(model.tokenizer.stopwords)]
    table = model.idf_table
    lines.append(f"num_documents\t{table.num_documents}")
    lines.append(f"vocabulary\t{len(table.vocabulary)}")
    for term, idx in sorted(table.vocabulary.items(), key=lambda kv: kv[1]):
        lines.append(f"{_clean(term, 'term')}\t{idx}\t{table.doc_frequency[term]}")

    if isinstance(clf, CompressedKnnModel):
        records = [(p.label, p.weight, p.vector, p.members) for p in clf.prototypes]
    else:
        records = [(s.label, 1.0, s.vector, ()) for s in clf.samples]
    lines.append(f"records\t{len(records)}")
    for label, weight, vec, members in records:
        fields = [_clean(label, "label"), repr(float(weight)),
                  _clean(vec.source_document_id, "id"), _entries_field(vec)]
        fields += [_clean(m, "member id") for m in members]
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def save(model: SavedModel, path: str | Path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8", newline="\n")


class _Reader:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    def line(self) -> str:
        if self.pos >= len(self.lines):
            raise ModelFormatError("unexpected end of model file")
        self.pos += 1
        return self.lines[self.pos - 1]

    def kv(self, key: str) -> str:
        lineno = self.pos + 1
        parts = self.line().split("\t")
        if len(parts) != 2 or parts[0] != key:
            raise ModelFormatError(f"line {lineno}: expected '{key}<TAB>value'")
        return parts[1]


def _parse_entries(field: str, lineno: int) -> dict[int, float]:
    entries = {}
    for pair in field.split():
        try:
            i, w = pair.split(":")
            entries[int(i)] = float(w)
        except ValueError:
            raise ModelFormatError(f"line {lineno}: bad sparse entry {pair!r}") from None
    return entries


def loads(text: str) -> SavedModel:
    r = _Reader(text)
    header = r.line().split("\t")
    if len(header) != 2 or header[0] != MAGIC:
        raise ModelFormatError("not a distfeat model file (missing header)")
    if header[1] != str(FORMAT_VERSION):
        raise ModelFormatError(
            f"unsupported model format version {header[1]!r}; this build reads version {FORMAT_VERSION}"
        )
    try:
        kind = r.kv("kind")
        if kind not in ("knn", "compressed"):
            raise ModelFormatError(f"unknown model kind {kind!r}")
        weighting = WeightingParams(r.kv("scheme"), float(r.kv("alpha")), float(r.kv("beta")))
        vote = r.kv("vote")
        if vote not in VOTE_MODES:
            raise ModelFormatError(f"unknown vote mode {vote!r}")
        k_default = int(r.kv("k_default"))
        min_len = int(r.kv("min_token_length"))
        strip = r.kv("strip_digits")
        if strip not in ("true", "false"):
            raise ModelFormatError(f"strip_digits must be true or false, got {strip!r}")
        stopwords = frozenset(r.line() for _ in range(int(r.kv("stopwords"))))
        tokenizer = TokenizerConfig(stopwords, min_len, strip == "true")

        num_documents = int(r.kv("num_documents"))
        vocabulary, df = {}, {}
        for _ in range(int(r.kv("vocabulary"))):
            term, idx, d = r.line().split("\t")
            vocabulary[term] = int(idx)
            df[term] = int(d)

        n_records = int(r.kv("records"))
        samples, prototypes = [], []
        for _ in range(n_records):
            lineno = r.pos + 1
            fields = r.line().split("\t")
            if len(fields) < 4:
                raise ModelFormatError(f"line {lineno}: record needs at least 4 fields")
            label, weight, vec_id, entries = fields[:4]
            vec = FeatureVector(_parse_entries(entries, lineno), vec_id)
            if kind == "knn":
                samples.append(Sample(vec, label))
            else:
                prototypes.append(Prototype(vec, label, float(weight), tuple(fields[4:])))
    except ModelFormatError:
        raise
    except ValueError as exc:
        raise ModelFormatError(f"malformed model file near line {r.pos}: {exc}") from None
    if r.pos != len(r.lines):
        raise ModelFormatError(f"trailing content after line {r.pos}")

    if kind == "knn":
        classifier = KnnModel(tuple(samples), k_default)
    else:
        classifier = CompressedKnnModel(tuple(prototypes), k_default)
    return SavedModel(classifier, weighting, tokenizer, IdfTable(vocabulary, df, num_documents), vote)


def load(path: str | Path) -> SavedModel:
    return loads(Path(path).read_text(encoding="utf-8"))
