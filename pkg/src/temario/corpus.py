"""Corpus ingestion, text normalization and vocabulary construction.

Raw documents come from JSONL or CSV files (``id``, ``text``, optional
``timestamp``).  Normalization removes URLs, @-mentions and #-hashtags as
whole tokens, strips punctuation, lowercases and applies a lemma lookup
table.  Surviving surface tokens are mapped to dense integer indices by a
frequency-ordered vocabulary.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class CorpusFormatError(ValueError):
    """Raised for unparseable records; the message names the offending line."""


class DuplicateIdError(CorpusFormatError):
    """Raised when two records share an id; the message names both lines."""


class EmptyCorpusError(ValueError):
    """Raised when no document survives vocabulary filtering."""


@dataclass
class RawDocument:
    id: str
    text: str
    timestamp: str | None = None


@dataclass
class TokenizedDocument:
    id: str
    tokens: list[int]


@dataclass
class Vocabulary:
    """Bijective word/index map with per-word corpus frequencies.

    Indices are dense 0..V-1, assigned by descending corpus frequency with
    lexicographic tie-breaking, so the assignment does not depend on document
    order.
    """

    index_to_word: list[str]
    frequencies: list[int]
    word_to_index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.word_to_index:
            self.word_to_index = {w: i for i, w in enumerate(self.index_to_word)}

    def __len__(self) -> int:
        return len(self.index_to_word)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_index

    def word(self, index: int) -> str:
        return self.index_to_word[index]

    def index(self, word: str) -> int:
        return self.word_to_index[word]

    def to_dict(self) -> dict:
        return {"words": self.index_to_word, "frequencies": self.frequencies}

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(index_to_word=list(d["words"]), frequencies=list(d["frequencies"]))


_URL_RE = re.compile(r"^https?://", re.IGNORECASE)
# Maximal runs of Unicode letters/digits once stripping rules have applied.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def resolve_lemma_chains(table: dict[str, str]) -> dict[str, str]:
    """Resolve lemma chains so that lemma(lemma(w)) == lemma(w).

    Follows ``a -> b -> c`` links to their terminal value.  Cycles are
    collapsed onto their lexicographically smallest member, which then maps
    to itself.
    """
    resolved: dict[str, str] = {}
    for start in table:
        seen: list[str] = []
        cur = start
        while cur in table and cur not in seen:
            seen.append(cur)
            cur = table[cur]
        if cur in seen:  # cycle: [cur ... end of seen] loops back
            cycle = seen[seen.index(cur):]
            cur = min(cycle)
        for node in seen:
            resolved[node] = cur
    # Drop self-maps introduced by cycle collapsing; absence means identity.
    return {k: v for k, v in resolved.items() if k != v}


@dataclass
class PreprocessRules:
    lowercase: bool = True
    strip_urls: bool = True
    strip_mentions: bool = True
    strip_hashtags: bool = True
    strip_punctuation: bool = True
    min_token_length: int = 2
    lemma_table: dict[str, str] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        self.lemma_table = resolve_lemma_chains(dict(self.lemma_table))
        self.stopwords = frozenset(self.stopwords)

    @classmethod
    def load(
        cls,
        lemma_path: str | Path | None = None,
        stoplist_path: str | Path | None = None,
        **flags,
    ) -> "PreprocessRules":
        """Build rules from a two-column TSV lemma table and a one-word-per-line stoplist."""
        lemma_table: dict[str, str] = {}
        if lemma_path is not None:
            with open(lemma_path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    line = line.rstrip("\n")
                    if not line.strip():
                        continue
                    parts = line.split("\t")
                    if len(parts) != 2 or not parts[0] or not parts[1]:
                        raise CorpusFormatError(
                            f"{lemma_path}: line {lineno}: expected 'surface<TAB>lemma'"
                        )
                    lemma_table[parts[0]] = parts[1]
        stopwords: set[str] = set()
        if stoplist_path is not None:
            with open(stoplist_path, encoding="utf-8") as fh:
                stopwords = {line.strip() for line in fh if line.strip()}
        return cls(lemma_table=lemma_table, stopwords=frozenset(stopwords), **flags)

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_urls": self.strip_urls,
            "strip_mentions": self.strip_mentions,
            "strip_hashtags": self.strip_hashtags,
            "strip_punctuation": self.strip_punctuation,
            "min_token_length": self.min_token_length,
            "lemma_table": dict(sorted(self.lemma_table.items())),
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreprocessRules":
        d = dict(d)
        d["lemma_table"] = dict(d.get("lemma_table", {}))
        d["stopwords"] = frozenset(d.get("stopwords", ()))
        return cls(**d)


def preprocess(text: str, rules: PreprocessRules) -> list[str]:
    """Normalize one text into surface tokens, preserving token order.

    URLs, mentions and hashtags are dropped as whole whitespace tokens before
    any punctuation handling, so '#Bogotá' never leaks a 'bogotá' token.
    """
    out: list[str] = []
    for chunk in text.split():
        if rules.strip_urls and _URL_RE.match(chunk):
            continue
        if rules.strip_mentions and chunk.startswith("@"):
            continue
        if rules.strip_hashtags and chunk.startswith("#"):
            continue
        if rules.strip_punctuation:
            pieces = _WORD_RE.findall(chunk)
        else:
            pieces = [chunk]
        for piece in pieces:
            if rules.lowercase:
                piece = piece.lower()
            if len(piece) < rules.min_token_length:
                continue
            piece = rules.lemma_table.get(piece, piece)
            if piece in rules.stopwords:
                continue
            out.append(piece)
    return out


def load_corpus(path: str | Path, format: str = "jsonl") -> list[RawDocument]:
    """Read raw documents from a JSONL or CSV file, preserving input order.

    Malformed records and duplicate ids raise CorpusFormatError /
    DuplicateIdError naming the offending line numbers.
    """
    path = Path(path)
    if format == "jsonl":
        docs = _load_jsonl(path)
    elif format == "csv":
        docs = _load_csv(path)
    else:
        raise ValueError(f"unknown corpus format: {format!r}")
    return docs


def _check_duplicate(seen: dict[str, int], doc_id: str, lineno: int, path: Path) -> None:
    if doc_id in seen:
        raise DuplicateIdError(
            f"{path}: duplicate document id {doc_id!r} on lines {seen[doc_id]} and {lineno}"
        )
    seen[doc_id] = lineno


def _load_jsonl(path: Path) -> list[RawDocument]:
    docs: list[RawDocument] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict) or "id" not in record or "text" not in record:
                raise CorpusFormatError(
                    f"{path}: line {lineno}: record must be an object with 'id' and 'text'"
                )
            doc_id = str(record["id"])
            _check_duplicate(seen, doc_id, lineno, path)
            docs.append(
                RawDocument(
                    id=doc_id,
                    text=str(record["text"]),
                    timestamp=record.get("timestamp"),
                )
            )
    return docs


def _load_csv(path: Path) -> list[RawDocument]:
    docs: list[RawDocument] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        if "id" not in reader.fieldnames or "text" not in reader.fieldnames:
            raise CorpusFormatError(f"{path}: header must contain 'id' and 'text' columns")
        for record in reader:
            lineno = reader.line_num
            if record.get("id") is None or record.get("text") is None:
                raise CorpusFormatError(f"{path}: line {lineno}: missing 'id' or 'text' value")
            doc_id = str(record["id"])
            _check_duplicate(seen, doc_id, lineno, path)
            docs.append(RawDocument(id=doc_id, text=record["text"], timestamp=record.get("timestamp") or None))
    return docs


def build_vocabulary(
    docs: Iterable[tuple[str, Sequence[str]]], min_count: int = 1
) -> tuple[Vocabulary, list[TokenizedDocument]]:
    """Index surface-token documents against a min_count-filtered vocabulary.

    Documents emptied by filtering are kept with empty token lists so callers
    can reconcile document counts.  Raises EmptyCorpusError when nothing
    survives.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    docs = list(docs)
    counts: dict[str, int] = {}
    for _, tokens in docs:
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    vocab = Vocabulary(index_to_word=[w for w, _ in kept], frequencies=[c for _, c in kept])
    tokenized = [
        TokenizedDocument(
            id=doc_id,
            tokens=[vocab.word_to_index[t] for t in tokens if t in vocab.word_to_index],
        )
        for doc_id, tokens in docs
    ]
    if not any(td.tokens for td in tokenized):
        raise EmptyCorpusError("empty corpus")
    return vocab, tokenized
