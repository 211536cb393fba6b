"""Synthetic corpus generators for the acceptance suite.

The planted corpus uses exact per-category presence counts rather than
independent coin flips: ubiquitous words appear in exactly the same
number of documents of every category, which makes them *exactly*
independent of every category indicator (RIG identically zero), while
signature and filler words carry guaranteed association.  That keeps the
separation assertions deterministic instead of seed-lucky.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import numpy as np

from wordgain.corpus import CategoryRegistry, Corpus, Document

PLANTED_K = 10
PLANTED_DOCS_PER_CAT = 100
SIGNATURE_HOME = 95      # of 100 home docs (>= 90%)
SIGNATURE_AWAY = 2       # of 100 docs per foreign category (2% outside)
UBIQUITOUS_PER_CAT = 97  # of 100 docs in every category (>= 95% overall)
FILLER_WORDS = 300
FILLER_HOME = 30
FILLER_AWAY = 5


def planted_corpus(seed: int = 0) -> tuple[Corpus, list[str], list[str]]:
    """1,000 documents, 10 disjoint categories, planted vocabulary.

    Returns (corpus, signature words in category order, ubiquitous words).
    """
    rng = random.Random(seed)
    categories = [f"topic{i:02d}" for i in range(PLANTED_K)]
    doc_words: list[list[str]] = [
        [] for _ in range(PLANTED_K * PLANTED_DOCS_PER_CAT)
    ]

    def cat_docs(k: int) -> range:
        return range(k * PLANTED_DOCS_PER_CAT, (k + 1) * PLANTED_DOCS_PER_CAT)

    def plant(word: str, k: int, count: int) -> None:
        for i in rng.sample(list(cat_docs(k)), count):
            doc_words[i].append(word)

    signatures = [f"sig{k:02d}w" for k in range(PLANTED_K)]
    for k, word in enumerate(signatures):
        plant(word, k, SIGNATURE_HOME)
        for other in range(PLANTED_K):
            if other != k:
                plant(word, other, SIGNATURE_AWAY)

    ubiquitous = [f"ubiq{u}w" for u in range(5)]
    for word in ubiquitous:
        for k in range(PLANTED_K):
            plant(word, k, UBIQUITOUS_PER_CAT)

    for f in range(FILLER_WORDS):
        word = f"fill{f:03d}w"
        home = f % PLANTED_K
        plant(word, home, FILLER_HOME)
        for other in range(PLANTED_K):
            if other != home:
                plant(word, other, FILLER_AWAY)

    documents = []
    for i, words in enumerate(doc_words):
        assert words, "planted corpus produced an empty document"
        category = categories[i // PLANTED_DOCS_PER_CAT]
        text = " ".join(words)
        documents.append(
            Document(f"p{i:04d}", text, frozenset({category}), len(words))
        )
    return Corpus(documents, CategoryRegistry(categories)), signatures, ubiquitous


def write_scale_corpus(
    path: Path,
    n_docs: int = 100_000,
    n_cats: int = 50,
    vocab_size: int = 50_000,
    tokens_per_doc: int = 120,
    seed: int = 7,
) -> Path:
    """Zipf-ish corpus big enough to exercise the sparse/streaming design.

    The 1/(rank+10) weighting keeps tail words above the default
    document-frequency threshold, so the dictionary stays near the full
    vocabulary size.
    """
    rng = np.random.default_rng(seed)
    vocab = np.array([f"w{i:05d}x" for i in range(vocab_size)])
    weights = 1.0 / (np.arange(vocab_size) + 10.0)
    weights /= weights.sum()
    token_ids = rng.choice(vocab_size, size=(n_docs, tokens_per_doc), p=weights)
    primary = rng.integers(0, n_cats, size=n_docs)
    secondary = rng.integers(0, n_cats, size=n_docs)
    has_second = rng.random(n_docs) < 0.3

    with path.open("w", encoding="utf-8") as fh:
        for i in range(n_docs):
            cats = [f"cat{primary[i]:02d}"]
            if has_second[i] and secondary[i] != primary[i]:
                cats.append(f"cat{secondary[i]:02d}")
            record = {
                "id": f"s{i:06d}",
                "text": " ".join(vocab[token_ids[i]]),
                "categories": cats,
            }
            fh.write(json.dumps(record) + "\n")
    return path
