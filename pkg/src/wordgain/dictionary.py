"""Tokenization, stemming and the core dictionary.

The dictionary keeps every distinct stem that appears in at least
``threshold`` documents, counting presence once per document no matter
how often the stem repeats inside it.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus
from .errors import ConsistencyError
from .stemmer import STEMMER_VARIANT, porter_stem
from ._parallel import parallel_map

# Lowercased maximal runs of ASCII letters and digits.  Hyphens, slashes
# and other punctuation act as separators; alphanumeric tokens such as
# "150mhz" survive intact.
_TOKEN_RE = re.compile(r"[a-z0-9]+")

_DIGITS = set("0123456789")

_stem_cache: dict[str, str] = {}


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def stem(token: str) -> str:
    """Stem one token; tokens containing digits pass through unchanged."""
    cached = _stem_cache.get(token)
    if cached is not None:
        return cached
    if _DIGITS.isdisjoint(token):
        result = porter_stem(token)
    else:
        result = token
    _stem_cache[token] = result
    return result


def stem_set(text: str) -> set[str]:
    """Distinct stems present in a text."""
    return {stem(tok) for tok in tokenize(text)}


@dataclass(frozen=True)
class WordEntry:
    stem: str
    doc_count: int
    row_index: int


@dataclass
class Dictionary:
    entries: list[WordEntry]
    threshold: int

    @property
    def N(self) -> int:
        return len(self.entries)

    @property
    def stems(self) -> list[str]:
        return [e.stem for e in self.entries]

    def row_index(self) -> dict[str, int]:
        return {e.stem: e.row_index for e in self.entries}


def build_dictionary(corpus: Corpus, threshold: int = 10, jobs: int = 1) -> Dictionary:
    """Collect stems appearing in >= threshold documents, sorted by stem."""
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    doc_freq: Counter[str] = Counter()
    texts = [doc.text for doc in corpus.documents]
    for stems in parallel_map(stem_set, texts, jobs):
        doc_freq.update(stems)
    entries = [
        WordEntry(s, doc_freq[s], i)
        for i, s in enumerate(sorted(s for s, n in doc_freq.items() if n >= threshold))
    ]
    return Dictionary(entries, threshold)


def save_dictionary(
    dictionary: Dictionary,
    path: str | Path,
    meta_path: str | Path | None = None,
    corpus_hash: str = "",
) -> None:
    """Write ``stem,doc_count`` rows plus a key=value metadata sidecar."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("stem,doc_count\n")
        for entry in dictionary.entries:
            fh.write(f"{entry.stem},{entry.doc_count}\n")
    if meta_path is not None:
        content = (
            f"threshold={dictionary.threshold}\n"
            f"stemmer={STEMMER_VARIANT}\n"
            f"entries={dictionary.N}\n"
            f"corpus_hash={corpus_hash}\n"
        )
        Path(meta_path).write_text(content, encoding="utf-8")


def load_dictionary(path: str | Path, meta_path: str | Path | None = None) -> Dictionary:
    threshold = 1
    if meta_path is not None and Path(meta_path).exists():
        for line in Path(meta_path).read_text(encoding="utf-8").splitlines():
            key, _, value = line.partition("=")
            if key == "threshold":
                threshold = int(value)
            elif key == "stemmer" and value != STEMMER_VARIANT:
                raise ConsistencyError(
                    f"dictionary was built with stemmer {value!r}, "
                    f"this build uses {STEMMER_VARIANT!r}"
                )
    entries: list[WordEntry] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != "stem,doc_count":
            raise ConsistencyError(f"unexpected dictionary header: {header.strip()!r}")
        for i, line in enumerate(fh):
            word, _, count = line.rstrip("\n").partition(",")
            entries.append(WordEntry(word, int(count), i))
    return Dictionary(entries, threshold)


def dictionary_hash(dictionary: Dictionary) -> str:
    h = hashlib.sha256()
    for entry in dictionary.entries:
        h.update(f"{entry.stem}:{entry.doc_count}\n".encode("utf-8"))
    return h.hexdigest()
