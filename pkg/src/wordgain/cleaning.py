"""Boilerplate removal: copyright notices, journal names, permission text.

Rules come from an external file so the inventory can grow by curation.
Head/tail anchored rules only ever match inside a bounded window at the
start or end of the text, which is where attached notices live; publisher
names in the body are deliberately left alone.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from functools import partial
from importlib import resources
from pathlib import Path

from .corpus import CategoryRegistry, Corpus, Document
from .dictionary import stem, stem_set
from .errors import RuleError
from ._parallel import parallel_map

DEFAULT_WINDOW = 300

_KINDS = ("literal", "regex")
_ANCHORS = ("head", "tail", "anywhere")
_CASE_FLAGS = {"cs": True, "ci": False}


@dataclass(frozen=True)
class CleaningRule:
    pattern: str
    kind: str = "literal"
    anchor: str = "tail"
    case_sensitive: bool = False

    def __post_init__(self) -> None:
        if not self.pattern:
            raise RuleError("empty pattern")
        if self.kind not in _KINDS:
            raise RuleError(f"unknown rule kind {self.kind!r}")
        if self.anchor not in _ANCHORS:
            raise RuleError(f"unknown anchor {self.anchor!r}")

    def compile(self) -> re.Pattern[str]:
        source = re.escape(self.pattern) if self.kind == "literal" else self.pattern
        flags = 0 if self.case_sensitive else re.IGNORECASE
        try:
            return re.compile(source, flags)
        except re.error as exc:
            raise RuleError(f"rule {self.pattern!r} does not compile: {exc}")

    def label(self) -> str:
        case = "cs" if self.case_sensitive else "ci"
        return f"{self.kind}/{self.anchor}/{case}/{self.pattern}"


@dataclass
class CleaningReport:
    rule_matches: dict[str, int] = field(default_factory=dict)
    documents_modified: int = 0
    documents_dropped: int = 0

    def total_matches(self) -> int:
        return sum(self.rule_matches.values())

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rule", "matches"])
            for label, count in self.rule_matches.items():
                writer.writerow([label, count])
        # summary block appended as comment rows so the file stays one artifact
        with Path(path).open("a", encoding="utf-8") as fh:
            fh.write(f"# documents_modified,{self.documents_modified}\n")
            fh.write(f"# documents_dropped,{self.documents_dropped}\n")


def load_rules(path: str | Path) -> list[CleaningRule]:
    """Parse a rule file: ``kind<TAB>anchor<TAB>cs|ci<TAB>pattern`` per line."""
    rules: list[CleaningRule] = []
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t", 3)
        if len(parts) != 4:
            raise RuleError(f"{path}:{lineno}: expected 4 tab-separated fields")
        kind, anchor, case_flag, pattern = parts
        if case_flag not in _CASE_FLAGS:
            raise RuleError(f"{path}:{lineno}: case flag must be 'cs' or 'ci'")
        try:
            rule = CleaningRule(pattern, kind, anchor, _CASE_FLAGS[case_flag])
            rule.compile()
        except RuleError as exc:
            raise RuleError(f"{path}:{lineno}: {exc}")
        rules.append(rule)
    return rules


def default_rules_path() -> Path:
    """Path of the curated notice inventory shipped with the package."""
    return Path(str(resources.files("wordgain").joinpath("data/notice_rules.tsv")))


def _window_bounds(text: str, anchor: str, window: int) -> tuple[int, int]:
    if anchor == "head":
        return 0, min(window, len(text))
    if anchor == "tail":
        return max(0, len(text) - window), len(text)
    return 0, len(text)


def clean_text(
    text: str,
    rules: list[CleaningRule],
    compiled: list[re.Pattern[str]],
    window: int = DEFAULT_WINDOW,
) -> tuple[str, list[int]]:
    """Apply rules in order until a fixpoint; returns text and match counts.

    Each rule is re-applied while its window still matches, and the whole
    rule list is repeated after any change, so stacked notices are peeled
    off and the result cannot be cleaned further (one cleaning pass is
    idempotent by construction).  Texts with no match come back
    byte-identical; modified texts get their whitespace re-normalized.
    """
    counts = [0] * len(rules)
    while True:
        changed_round = False
        for i, (rule, pattern) in enumerate(zip(rules, compiled)):
            while True:
                start, end = _window_bounds(text, rule.anchor, window)
                match = pattern.search(text, start, end)
                if match is None:
                    break
                new_text = text[: match.start()] + " " + text[match.end() :]
                if new_text == text:
                    break
                text = new_text
                counts[i] += 1
                changed_round = True
        if not changed_round:
            break
        text = " ".join(text.split())
    return text, counts


def clean_corpus(
    corpus: Corpus,
    rules: list[CleaningRule],
    min_tokens: int = 30,
    window: int = DEFAULT_WINDOW,
    jobs: int = 1,
) -> tuple[Corpus, CleaningReport]:
    """Strip notices from every document and drop those left too short.

    The returned corpus re-derives its registry from the retained
    documents; the report tallies matches per rule in rule order.
    """
    compiled = [rule.compile() for rule in rules]
    report = CleaningReport(rule_matches={rule.label(): 0 for rule in rules})
    worker = partial(clean_text, rules=rules, compiled=compiled, window=window)
    results = parallel_map(worker, [doc.text for doc in corpus.documents], jobs)

    kept: list[Document] = []
    for doc, (new_text, counts) in zip(corpus.documents, results):
        for rule, n in zip(rules, counts):
            if n:
                report.rule_matches[rule.label()] += n
        if new_text == doc.text:
            kept.append(doc)
            continue
        report.documents_modified += 1
        token_count = len(new_text.split())
        if token_count < min_tokens:
            report.documents_dropped += 1
            continue
        kept.append(Document(doc.id, new_text, doc.categories, token_count))

    registry = CategoryRegistry(cat for doc in kept for cat in doc.categories)
    return Corpus(kept, registry), report


def count_term_documents(corpus: Corpus, terms: list[str]) -> dict[str, int]:
    """Count documents whose stemmed token set contains each term's stem.

    Useful for before/after audits of notice vocabulary ("elsevi",
    "reserv", ...).  Terms are stemmed with the same pipeline as the
    dictionary, so inflected queries match.
    """
    if not terms:
        raise ValueError("terms must be non-empty")
    wanted = {term: stem(term.lower()) for term in terms}
    counts = dict.fromkeys(terms, 0)
    for stems in map(stem_set, (doc.text for doc in corpus.documents)):
        for term, stemmed in wanted.items():
            if stemmed in stems:
                counts[term] += 1
    return counts
