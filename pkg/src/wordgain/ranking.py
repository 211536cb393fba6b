"""Word rankings, criterion comparison, coverage unions and the thesaurus.

Every ordering is total and reproducible: scores sort descending and tie
groups fall back to ascending stem order, so repeated runs emit
byte-identical lists.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .freq import FrequencyMatrix
from .rig import RigMatrix

logger = logging.getLogger(__name__)

SUM_RIGS = "sum_rigs"
MAX_RIGS = "max_rigs"
RIG_IN_CATEGORY = "rig_in_category"
FREQ_IN_CATEGORY = "freq_in_category"

Matrix = Union[FrequencyMatrix, RigMatrix]


@dataclass
class RankedList:
    criterion: str
    items: list[tuple[str, float]]

    def top(self, n: int) -> list[str]:
        return [stem for stem, _ in self.items[:n]]

    def write_csv(self, path: str | Path, precision: int = 6) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write("rank,stem,score\n")
            for i, (stem, score) in enumerate(self.items, start=1):
                fh.write(f"{i},{stem},{score:.{precision}f}\n")


def parse_criterion(criterion: str) -> tuple[str, str | None]:
    """Split 'sum_rigs' / 'max_rigs' / 'rig_in_category:X' / 'freq_in_category:X'."""
    kind, _, category = criterion.partition(":")
    if kind in (SUM_RIGS, MAX_RIGS):
        return kind, None
    if kind in (RIG_IN_CATEGORY, FREQ_IN_CATEGORY):
        if not category:
            raise ValueError(f"criterion {kind!r} needs a category: '{kind}:<name>'")
        return kind, category
    raise ValueError(
        f"unknown criterion {criterion!r}; expected one of "
        f"{SUM_RIGS}, {MAX_RIGS}, {RIG_IN_CATEGORY}:<name>, {FREQ_IN_CATEGORY}:<name>"
    )


def _scores_for(matrix: Matrix, criterion: str) -> np.ndarray:
    kind, category = parse_criterion(criterion)
    if kind == SUM_RIGS:
        if not isinstance(matrix, RigMatrix):
            raise TypeError(f"{kind} needs a RigMatrix")
        return matrix.sum_col
    if kind == MAX_RIGS:
        if not isinstance(matrix, RigMatrix):
            raise TypeError(f"{kind} needs a RigMatrix")
        return matrix.max_col
    if kind == RIG_IN_CATEGORY:
        if not isinstance(matrix, RigMatrix):
            raise TypeError(f"{kind} needs a RigMatrix")
        return matrix.column(category)
    if not isinstance(matrix, FrequencyMatrix):
        raise TypeError(f"{kind} needs a FrequencyMatrix")
    try:
        k = matrix.categories.index(category)
    except ValueError:
        raise KeyError(f"unknown category {category!r}; valid: {matrix.categories}")
    return matrix.counts.getcol(k).toarray().ravel().astype(np.float64)


def rank(matrix: Matrix, criterion: str) -> RankedList:
    """Order all stems by the criterion, ties broken by ascending stem."""
    scores = _scores_for(matrix, criterion)
    items = sorted(
        zip(matrix.stems, scores.tolist()), key=lambda t: (-t[1], t[0])
    )
    return RankedList(criterion, items)


def compare_top_n(
    list_a: RankedList, list_b: RankedList, ns: Sequence[int]
) -> list[tuple[int, int, float]]:
    """Size of top-n intersection for each n, as (n, matches, fraction)."""
    if {s for s, _ in list_a.items} != {s for s, _ in list_b.items}:
        raise ValueError("ranked lists cover different dictionaries")
    size = len(list_a.items)
    out = []
    for n in sorted(ns):
        if n > size:
            logger.warning("n=%d exceeds dictionary size %d; clamped", n, size)
            n = size
        matches = len(set(list_a.top(n)) & set(list_b.top(n)))
        out.append((n, matches, matches / n if n else 0.0))
    return out


@dataclass
class CoverageSet:
    """Union over categories of each category's top-n RIG stems (X_n)."""

    n: int
    members: set[str]
    per_category: dict[str, list[str]]
    min_best_rig: float

    def write(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"# n={self.n}\n")
            fh.write(f"# members={len(self.members)}\n")
            fh.write(f"# min_best_rig={self.min_best_rig:.6f}\n")
            for stem in sorted(self.members):
                fh.write(stem + "\n")


def coverage_union(rm: RigMatrix, n: int) -> CoverageSet:
    """Union the per-category top-n lists and report the weakest member.

    The reported minimum is over members' best in-category RIG, a guard
    against near-zero entries sneaking into the union.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    per_category: dict[str, list[str]] = {}
    members: set[str] = set()
    for category in rm.categories:
        top = rank(rm, f"{RIG_IN_CATEGORY}:{category}").top(n)
        per_category[category] = top
        members.update(top)
    if members:
        index = {s: i for i, s in enumerate(rm.stems)}
        min_best = float(min(rm.max_col[index[s]] for s in members))
    else:
        min_best = 0.0
    return CoverageSet(n, members, per_category, min_best)


def coverage_matches(top_stems: Sequence[str], coverage: CoverageSet) -> int:
    """How many of the given top stems fall inside the coverage union."""
    return len(set(top_stems) & coverage.members)


@dataclass
class SumHistogram:
    edges: np.ndarray
    counts: np.ndarray
    min_sum: float
    log_scale: bool = True

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"# min_sum={self.min_sum:.6f}\n")
            fh.write(f"# log_scale={'true' if self.log_scale else 'false'}\n")
            fh.write("bin_left,bin_right,count\n")
            for i, count in enumerate(self.counts):
                fh.write(f"{self.edges[i]:.6f},{self.edges[i + 1]:.6f},{int(count)}\n")


def sum_histogram(rm: RigMatrix, m: int, bins: int = 20, log_scale: bool = True) -> SumHistogram:
    """Histogram of S_j over the top-m words of the sum ranking.

    Supports the usual eyeball check on where the near-zero spike ends;
    the minimum S_j in the slice is reported alongside.
    """
    if not 1 <= m <= len(rm.stems):
        raise ValueError(f"m must be in 1..{len(rm.stems)}, got {m}")
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    values = np.array([s for _, s in rank(rm, SUM_RIGS).items[:m]])
    counts, edges = np.histogram(values, bins=bins)
    return SumHistogram(edges, counts, float(values.min()), log_scale)


@dataclass
class Thesaurus:
    items: list[tuple[str, float]]
    m: int
    min_sum: float
    corpus_hash: str
    criterion: str = SUM_RIGS

    def write(self, path: str | Path, manifest_path: str | Path, precision: int = 6) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write("rank,stem,score\n")
            for i, (stem, score) in enumerate(self.items, start=1):
                fh.write(f"{i},{stem},{score:.{precision}f}\n")
        manifest = (
            f"m={self.m}\n"
            f"criterion={self.criterion}\n"
            f"min_sum={self.min_sum:.{precision}f}\n"
            f"corpus_hash={self.corpus_hash}\n"
        )
        Path(manifest_path).write_text(manifest, encoding="utf-8")


def extract_thesaurus(rm: RigMatrix, m: int) -> Thesaurus:
    """Top-m words of the sum-of-RIGs ordering, with provenance metadata."""
    if not 1 <= m <= len(rm.stems):
        raise ValueError(f"m must be in 1..{len(rm.stems)}, got {m}")
    items = rank(rm, SUM_RIGS).items[:m]
    return Thesaurus(
        items=items,
        m=m,
        min_sum=float(min(s for _, s in items)),
        corpus_hash=rm.source_hash,
    )
