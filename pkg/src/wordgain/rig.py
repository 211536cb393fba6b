"""Entropy, information gain and the word-category RIG matrix.

Each word/category pair is reduced to a 2x2 contingency table over the
corpus (presence of the word crossed with membership in the category).
The information gain is the drop in the category indicator's binary
entropy once word presence is known, and the relative gain divides by
that entropy so every cell lands in [0, 1].  All logarithms are base 2
and 0*log2(0) is taken as 0 throughout.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConsistencyError
from .freq import FrequencyMatrix, save_matrix_csv

logger = logging.getLogger(__name__)

# IG is non-negative in exact arithmetic; anything below this is a bug,
# anything above (but negative) is float cancellation and clamps to 0.
NEGATIVE_IG_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ContingencyCells:
    """Counts a=word&cat, b=word&!cat, c=!word&cat, d=!word&!cat."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError(f"negative contingency cell: {self}")

    @classmethod
    def from_counts(cls, w_jk: int, dj: int, dk: int, M: int) -> "ContingencyCells":
        """Build cells from w_jk, |D^j|, |D_k| and the corpus size."""
        cells = cls(w_jk, dj - w_jk, dk - w_jk, M - dk - (dj - w_jk))
        if cells.total != M:
            raise ValueError(f"cells {cells} do not sum to M={M}")
        return cells

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


def _h_term(n: int, total: int) -> float:
    if n <= 0 or total <= 0:
        return 0.0
    p = n / total
    return -p * math.log2(p)


def binary_entropy(n: int, total: int) -> float:
    """Entropy in bits of an n-out-of-total indicator; 0 if total is 0."""
    return _h_term(n, total) + _h_term(total - n, total)


def category_entropy(dk: int, M: int) -> float:
    if not 0 <= dk <= M or M < 1:
        raise ValueError(f"need 0 <= Dk <= M and M >= 1, got Dk={dk}, M={M}")
    return binary_entropy(dk, M)


def conditional_entropy(cells: ContingencyCells, M: int) -> float:
    """H(category | word): entropy left once word presence is observed."""
    if cells.total != M:
        raise ValueError(f"cells sum to {cells.total}, expected M={M}")
    dj = cells.a + cells.b
    return (dj / M) * binary_entropy(cells.a, dj) + (
        (M - dj) / M
    ) * binary_entropy(cells.c, M - dj)


def information_gain(cells: ContingencyCells, M: int) -> float:
    """H(c_k) - H(c_k | w_j), clamped at zero against float cancellation."""
    ig = category_entropy(cells.a + cells.c, M) - conditional_entropy(cells, M)
    if ig < 0:
        if ig < -NEGATIVE_IG_TOLERANCE:
            raise ConsistencyError(f"information gain {ig} below zero for {cells}")
        return 0.0
    return ig


def relative_information_gain(cells: ContingencyCells, M: int) -> float:
    """IG normalized by the category entropy; 0 for degenerate categories."""
    h = category_entropy(cells.a + cells.c, M)
    if h == 0.0:
        return 0.0
    return information_gain(cells, M) / h


@dataclass
class RigMatrix:
    stems: list[str]
    categories: list[str]
    values: np.ndarray             # N x K, each cell in [0, 1]
    category_entropies: np.ndarray | None
    sum_col: np.ndarray            # S_j per word
    max_col: np.ndarray            # M_j per word
    degenerate: list[str]          # categories with zero entropy
    source_hash: str = ""

    @property
    def N(self) -> int:
        return len(self.stems)

    @property
    def K(self) -> int:
        return len(self.categories)

    def column(self, category: str) -> np.ndarray:
        try:
            return self.values[:, self.categories.index(category)]
        except ValueError:
            raise KeyError(
                f"unknown category {category!r}; valid: {self.categories}"
            )


def _entropy_counts_vec(n: np.ndarray, total: np.ndarray) -> np.ndarray:
    """Elementwise binary entropy of n-out-of-total, with 0*log2(0) = 0."""
    n = np.asarray(n, dtype=np.float64)
    total = np.asarray(total, dtype=np.float64)
    r = total - n
    with np.errstate(divide="ignore", invalid="ignore"):
        p = n / total
        q = r / total
        term_p = np.where((n > 0) & (total > 0), -p * np.log2(p), 0.0)
        term_q = np.where((r > 0) & (total > 0), -q * np.log2(q), 0.0)
    return term_p + term_q


def _conditional_entropy_vec(a, dj, dk, M: int) -> np.ndarray:
    """Vector form of conditional_entropy over broadcastable count arrays."""
    dj = np.asarray(dj, dtype=np.float64)
    absent = M - dj
    with np.errstate(divide="ignore", invalid="ignore"):
        present_branch = np.where(dj > 0, (dj / M) * _entropy_counts_vec(a, dj), 0.0)
        absent_branch = np.where(
            absent > 0,
            (absent / M) * _entropy_counts_vec(np.asarray(dk) - np.asarray(a), absent),
            0.0,
        )
    return present_branch + absent_branch


def _rig_from_ig(ig: np.ndarray, h: np.ndarray) -> np.ndarray:
    low = float(ig.min(initial=0.0))
    if low < -NEGATIVE_IG_TOLERANCE:
        raise ConsistencyError(f"information gain {low} below zero")
    ig = np.maximum(ig, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        rig = np.where(h > 0, ig / np.where(h > 0, h, 1.0), 0.0)
    return rig


def build_rig_matrix(fm: FrequencyMatrix) -> RigMatrix:
    """Evaluate RIG for every (word, category) pair of the corpus.

    Zero count cells still carry information (a word can be informative
    by avoidance), so the N*K grid is filled from a closed form that
    depends only on (|D^j|, |D_k|, M), memoized per distinct |D_k|, and
    the sparse nonzero cells are then overwritten with their exact
    values.  Sum and max per word are appended as extra columns on
    export.
    """
    M = fm.M
    dj = fm.row_doc_counts.astype(np.float64)
    dk = fm.col_doc_counts.astype(np.float64)

    entropies = _entropy_counts_vec(dk, np.full_like(dk, M))
    degenerate = [fm.categories[k] for k in np.flatnonzero(entropies == 0.0)]
    if degenerate:
        logger.warning(
            "categories with degenerate entropy get RIG 0: %s", degenerate
        )

    # closed form for w_jk = 0 cells, one column per distinct |D_k|
    unique_dk, col_class = np.unique(dk, return_inverse=True)
    h_unique = _entropy_counts_vec(unique_dk, np.full_like(unique_dk, M))
    zero_a = np.zeros((len(dj), len(unique_dk)))
    cond0 = _conditional_entropy_vec(
        zero_a, dj[:, None], unique_dk[None, :], M
    )
    rig0 = _rig_from_ig(h_unique[None, :] - cond0, h_unique[None, :])
    values = np.ascontiguousarray(rig0[:, col_class])

    # exact values for the stored nonzero cells
    coo = fm.counts.tocoo()
    if coo.nnz:
        a = coo.data.astype(np.float64)
        jj, kk = coo.row, coo.col
        cond = _conditional_entropy_vec(a, dj[jj], dk[kk], M)
        values[jj, kk] = _rig_from_ig(entropies[kk] - cond, entropies[kk])

    high = float(values.max(initial=0.0))
    if high > 1.0:
        raise ConsistencyError(f"RIG {high} above one")

    return RigMatrix(
        stems=list(fm.stems),
        categories=list(fm.categories),
        values=values,
        category_entropies=entropies,
        sum_col=values.sum(axis=1),
        max_col=values.max(axis=1) if fm.K else np.zeros(fm.N),
        degenerate=degenerate,
        source_hash=fm.source_hash,
    )


def save_rig_csv(rm: RigMatrix, path: str | Path, precision: int = 6) -> None:
    """Word-category RIG matrix with trailing ``sum`` and ``max`` columns."""
    save_matrix_csv(
        path,
        rm.stems,
        rm.categories,
        rm.values,
        precision=precision,
        extra_columns={"sum": rm.sum_col, "max": rm.max_col},
    )


def load_rig_csv(path: str | Path) -> RigMatrix:
    """Reload an exported RIG matrix.

    Entropies are not stored in the artifact; degenerate categories are
    recovered as all-zero columns, which is what they export as.
    """
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:1] != ["stem"] or header[-2:] != ["sum", "max"]:
            raise ConsistencyError(f"unexpected RIG matrix header in {path}")
        categories = header[1:-2]
        stems: list[str] = []
        rows: list[list[float]] = []
        for row in reader:
            stems.append(row[0])
            rows.append([float(v) for v in row[1:]])
    data = np.array(rows, dtype=np.float64).reshape(len(stems), len(categories) + 2)
    values = data[:, :-2]
    zero_cols = np.flatnonzero(~values.any(axis=0)) if len(stems) else []
    return RigMatrix(
        stems=stems,
        categories=categories,
        values=values,
        category_entropies=None,
        sum_col=data[:, -2],
        max_col=data[:, -1],
        degenerate=[categories[k] for k in zero_cols],
    )
