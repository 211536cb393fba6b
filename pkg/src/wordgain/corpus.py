"""Corpus data model and JSONL ingestion.

A corpus is an ordered list of documents, each carrying a unique id, raw
text and a non-empty set of category labels, plus a registry assigning a
stable column index to every category name (lexicographic order).
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorpusError

logger = logging.getLogger(__name__)

# Documents carrying more labels than this are retained but counted in the
# ingest report; large label sets usually indicate a data problem.
MANY_CATEGORIES = 6


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    categories: frozenset[str]
    token_count: int

    def __post_init__(self) -> None:
        if not self.categories:
            raise CorpusError(f"document {self.id!r} has no categories")


class CategoryRegistry:
    """Distinct category names in lexicographic order, mapped to 0..K-1."""

    def __init__(self, names: Iterable[str]):
        self.names: list[str] = sorted(set(names))
        self.index: dict[str, int] = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CategoryRegistry) and self.names == other.names


@dataclass
class Corpus:
    documents: list[Document]
    registry: CategoryRegistry

    def __post_init__(self) -> None:
        for doc in self.documents:
            missing = doc.categories - set(self.registry.names)
            if missing:
                raise CorpusError(
                    f"document {doc.id!r} has unregistered categories {sorted(missing)}"
                )

    @property
    def M(self) -> int:
        return len(self.documents)

    @property
    def K(self) -> int:
        return len(self.registry)

    def content_hash(self) -> str:
        """Stable sha256 over ids, texts and sorted category labels."""
        h = hashlib.sha256()
        for doc in self.documents:
            h.update(doc.id.encode("utf-8"))
            h.update(b"\x00")
            h.update(doc.text.encode("utf-8"))
            h.update(b"\x00")
            for cat in sorted(doc.categories):
                h.update(cat.encode("utf-8"))
                h.update(b"\x01")
            h.update(b"\x02")
        return h.hexdigest()


@dataclass
class IngestReport:
    retained: int = 0
    dropped: dict[str, int] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)
    max_categories: int = 0
    many_category_docs: int = 0

    def drop(self, reason: str) -> None:
        self.dropped[reason] = self.dropped.get(reason, 0) + 1

    @property
    def total_dropped(self) -> int:
        return sum(self.dropped.values())

    def summary(self) -> str:
        lines = [f"retained={self.retained}", f"dropped={self.total_dropped}"]
        for reason in sorted(self.dropped):
            lines.append(f"dropped.{reason}={self.dropped[reason]}")
        lines.append(f"max_categories={self.max_categories}")
        if self.many_category_docs:
            lines.append(f"docs_over_{MANY_CATEGORIES}_categories={self.many_category_docs}")
        return "\n".join(lines)


def _parse_record(line: str) -> tuple[str, str, frozenset[str]]:
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    doc_id = obj.get("id")
    text = obj.get("text")
    categories = obj.get("categories")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing or invalid 'id'")
    if not isinstance(text, str):
        raise ValueError("missing or invalid 'text'")
    if not isinstance(categories, list) or not all(
        isinstance(c, str) and c for c in categories
    ):
        raise ValueError("missing or invalid 'categories'")
    return doc_id, text, frozenset(categories)


def ingest(
    path: str | Path,
    min_tokens: int = 30,
    max_tokens: int = 500,
) -> tuple[Corpus, IngestReport]:
    """Read a JSONL corpus, keeping records within the token-length band.

    Token counts here are whitespace tokens of the raw text; the same
    filter is re-applied after cleaning, which can only shorten texts.
    Malformed records are dropped and counted per line; a duplicate id or
    an empty file is fatal.
    """
    if min_tokens > max_tokens:
        raise ValueError(f"min_tokens ({min_tokens}) > max_tokens ({max_tokens})")
    path = Path(path)
    report = IngestReport()
    documents: list[Document] = []
    seen_ids: set[str] = set()
    any_line = False

    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            any_line = True
            try:
                doc_id, text, categories = _parse_record(line)
            except (ValueError, json.JSONDecodeError) as exc:
                report.drop("malformed")
                report.errors.append(f"line {lineno}: {exc}")
                continue
            if doc_id in seen_ids:
                raise CorpusError(f"duplicate document id {doc_id!r} at line {lineno}")
            seen_ids.add(doc_id)
            if not categories:
                report.drop("no-category")
                continue
            token_count = len(text.split())
            if token_count < min_tokens:
                report.drop("too-short")
                continue
            if token_count > max_tokens:
                report.drop("too-long")
                continue
            documents.append(Document(doc_id, text, categories, token_count))
            ncat = len(categories)
            report.max_categories = max(report.max_categories, ncat)
            if ncat > MANY_CATEGORIES:
                report.many_category_docs += 1

    if not any_line:
        raise CorpusError(f"empty corpus file: {path}")

    report.retained = len(documents)
    if report.many_category_docs:
        logger.warning(
            "%d documents carry more than %d categories",
            report.many_category_docs,
            MANY_CATEGORIES,
        )
    registry = CategoryRegistry(
        cat for doc in documents for cat in doc.categories
    )
    return Corpus(documents, registry), report


def category_doc_sets(corpus: Corpus) -> dict[str, set[str]]:
    """Map each category to the set of document ids labeled with it."""
    sets: dict[str, set[str]] = {name: set() for name in corpus.registry}
    for doc in corpus.documents:
        for cat in doc.categories:
            sets[cat].add(doc.id)
    return sets


def save_corpus_jsonl(corpus: Corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(
                json.dumps(
                    {
                        "id": doc.id,
                        "text": doc.text,
                        "categories": sorted(doc.categories),
                    },
                    ensure_ascii=False,
                )
            )
            fh.write("\n")


def load_corpus_jsonl(path: str | Path) -> Corpus:
    """Reload a corpus artifact without applying any length filtering."""
    documents: list[Document] = []
    seen: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc_id, text, categories = _parse_record(line)
            except (ValueError, json.JSONDecodeError) as exc:
                raise CorpusError(f"corrupt corpus artifact at line {lineno}: {exc}")
            if doc_id in seen:
                raise CorpusError(f"duplicate document id {doc_id!r} at line {lineno}")
            seen.add(doc_id)
            documents.append(Document(doc_id, text, categories, len(text.split())))
    if not documents:
        raise CorpusError(f"empty corpus artifact: {path}")
    registry = CategoryRegistry(cat for doc in documents for cat in doc.categories)
    return Corpus(documents, registry)
