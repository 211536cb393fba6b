"""Human-facing report products: word-cloud weights and category tables."""

from __future__ import annotations

import logging
from pathlib import Path

from .ranking import RIG_IN_CATEGORY, rank
from .rig import RigMatrix

logger = logging.getLogger(__name__)


def wordcloud_weights(
    rm: RigMatrix, category: str, top_n: int = 100
) -> list[tuple[str, float]]:
    """Top stems of a category with their RIGs as rendering weights.

    A degenerate category (entropy zero) has no distinguishable words, so
    it yields an empty list rather than an arbitrary lexicographic one.
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    if category not in rm.categories:
        raise KeyError(f"unknown category {category!r}; valid: {rm.categories}")
    if category in rm.degenerate:
        logger.warning("category %r is degenerate; empty word cloud", category)
        return []
    if top_n > rm.N:
        logger.warning("top_n=%d exceeds dictionary size %d; clamped", top_n, rm.N)
        top_n = rm.N
    return rank(rm, f"{RIG_IN_CATEGORY}:{category}").items[:top_n]


def category_table(rm: RigMatrix, category: str, top_n: int = 100) -> list[tuple[int, str, float]]:
    """(rank, stem, RIG) rows for the most informative words of a category."""
    return [
        (i, stem, value)
        for i, (stem, value) in enumerate(wordcloud_weights(rm, category, top_n), start=1)
    ]


def write_category_table(
    rm: RigMatrix,
    category: str,
    top_n: int,
    path: str | Path,
    precision: int = 6,
) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("rank,stem,rig\n")
        for i, stem, value in category_table(rm, category, top_n):
            fh.write(f"{i},{stem},{value:.{precision}f}\n")


def write_wordcloud_weights(
    rm: RigMatrix,
    category: str,
    top_n: int,
    path: str | Path,
    precision: int = 6,
) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("stem,weight\n")
        for stem, value in wordcloud_weights(rm, category, top_n):
            fh.write(f"{stem},{value:.{precision}f}\n")
