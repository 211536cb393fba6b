"""Sparse word-by-category presence counts and their normalizations.

Cell (j, k) counts documents in category k that contain stem j at least
once.  Categories may overlap, so a document can feed several columns;
row sums therefore bound the per-word document count from above.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus
from .dictionary import Dictionary, stem_set
from .errors import ConsistencyError
from ._parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass
class FrequencyMatrix:
    stems: list[str]
    categories: list[str]
    counts: sp.csr_matrix          # N x K presence counts w_jk
    row_doc_counts: np.ndarray     # |D^j| per stem
    col_doc_counts: np.ndarray     # |D_k| per category
    M: int
    source_hash: str = ""

    @property
    def N(self) -> int:
        return len(self.stems)

    @property
    def K(self) -> int:
        return len(self.categories)


def build_frequency_matrix(
    corpus: Corpus, dictionary: Dictionary, jobs: int = 1
) -> FrequencyMatrix:
    """Count w_jk for every dictionary stem and registry category.

    Also recounts each stem's global document frequency and fails hard if
    it disagrees with the dictionary, which catches a corpus/dictionary
    mix-up before any entropy is computed.
    """
    row_of = dictionary.row_index()
    cat_of = corpus.registry.index
    N, K = dictionary.N, len(corpus.registry)

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    global_counts = np.zeros(N, dtype=np.int64)
    col_doc_counts = np.zeros(K, dtype=np.int64)

    stem_sets = parallel_map(stem_set, [d.text for d in corpus.documents], jobs)
    for doc, stems in zip(corpus.documents, stem_sets):
        present = np.fromiter(
            (row_of[s] for s in stems if s in row_of), dtype=np.int64
        )
        cats = np.fromiter((cat_of[c] for c in doc.categories), dtype=np.int64)
        col_doc_counts[cats] += 1
        if present.size == 0:
            continue
        global_counts[present] += 1
        rows.append(np.repeat(present, cats.size))
        cols.append(np.tile(cats, present.size))

    if rows:
        data = np.ones(sum(r.size for r in rows), dtype=np.int64)
        coo = sp.coo_matrix(
            (data, (np.concatenate(rows), np.concatenate(cols))), shape=(N, K)
        )
        counts = coo.tocsr()  # duplicate (j, k) pairs are summed here
    else:
        counts = sp.csr_matrix((N, K), dtype=np.int64)

    expected = np.array([e.doc_count for e in dictionary.entries], dtype=np.int64)
    if N and not np.array_equal(global_counts, expected):
        bad = int(np.flatnonzero(global_counts != expected)[0])
        raise ConsistencyError(
            f"stem {dictionary.entries[bad].stem!r}: dictionary doc_count "
            f"{expected[bad]} but corpus recount {global_counts[bad]} "
            "(dictionary built from a different corpus?)"
        )

    return FrequencyMatrix(
        stems=dictionary.stems,
        categories=list(corpus.registry.names),
        counts=counts,
        row_doc_counts=global_counts,
        col_doc_counts=col_doc_counts,
        M=corpus.M,
        source_hash=corpus.content_hash(),
    )


def normalize_rows_l1(fm: FrequencyMatrix) -> sp.csr_matrix:
    """P_jk = w_jk / sum_i w_ji; every row sums to 1."""
    row_sums = np.asarray(fm.counts.sum(axis=1)).ravel().astype(np.float64)
    if np.any(row_sums == 0):
        raise ConsistencyError("word with zero occurrences cannot be row-normalized")
    inv = sp.diags(1.0 / row_sums)
    return (inv @ fm.counts).tocsr()


def normalize_cols_l1(fm: FrequencyMatrix) -> sp.csr_matrix:
    """Q_jk = w_jk / sum_i w_ik; all-zero columns stay zero with a warning."""
    col_sums = np.asarray(fm.counts.sum(axis=0)).ravel().astype(np.float64)
    zero = col_sums == 0
    if np.any(zero):
        names = [fm.categories[k] for k in np.flatnonzero(zero)]
        logger.warning("all-zero category columns left unnormalized: %s", names)
    safe = np.where(zero, 1.0, col_sums)
    return (fm.counts @ sp.diags(1.0 / safe)).tocsr()


def normalize_two_step(fm: FrequencyMatrix) -> sp.csr_matrix:
    """Scale each column by 1/|D_k|, then renormalize rows to unit sum.

    Equals the plain row normalization whenever all |D_k| agree, since
    the common factor cancels.
    """
    col_docs = fm.col_doc_counts.astype(np.float64)
    zero = col_docs == 0
    if np.any(zero):
        # such a column is all zeros by the cell bound, so the scale is moot
        col_docs = np.where(zero, 1.0, col_docs)
    scaled = (fm.counts @ sp.diags(1.0 / col_docs)).tocsr()
    row_sums = np.asarray(scaled.sum(axis=1)).ravel()
    if np.any(row_sums == 0):
        raise ConsistencyError("word with zero occurrences cannot be row-normalized")
    return (sp.diags(1.0 / row_sums) @ scaled).tocsr()


def save_matrix_csv(
    path: str | Path,
    stems: list[str],
    categories: list[str],
    matrix,
    precision: int | None = None,
    extra_columns: dict[str, np.ndarray] | None = None,
) -> None:
    """Write ``stem,<categories...>[,extras...]`` rows in dictionary order."""
    dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
    extras = extra_columns or {}
    if precision is None:
        def fmt(value: float) -> str:
            return str(int(value))
    else:
        def fmt(value: float) -> str:
            return f"{value:.{precision}f}"
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        # category names may contain commas; stems and numbers cannot
        csv.writer(fh).writerow(["stem"] + categories + list(extras))
        extra_cols = list(extras.values())
        for j, word in enumerate(stems):
            row = [word]
            row.extend(fmt(v) for v in dense[j])
            row.extend(fmt(col[j]) for col in extra_cols)
            fh.write(",".join(row) + "\n")
