from __future__ import annotations

import json
from pathlib import Path

import pytest

from wordgain.corpus import ingest
from wordgain.cleaning import clean_corpus, default_rules_path, load_rules
from wordgain.dictionary import build_dictionary
from wordgain.freq import build_frequency_matrix
from wordgain.rig import build_rig_matrix

from fixture_corpus import FIXTURE_DOCS, write_fixture


@pytest.fixture(scope="session")
def fixture_jsonl(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("fixture") / "corpus.jsonl"
    return write_fixture(path)


@pytest.fixture(scope="session")
def fixture_corpus(fixture_jsonl):
    corpus, report = ingest(fixture_jsonl, min_tokens=30, max_tokens=500)
    assert report.retained == len(FIXTURE_DOCS)
    return corpus


@pytest.fixture(scope="session")
def shipped_rules():
    return load_rules(default_rules_path())


@pytest.fixture(scope="session")
def cleaned_corpus(fixture_corpus, shipped_rules):
    cleaned, _ = clean_corpus(fixture_corpus, shipped_rules, min_tokens=30)
    return cleaned


@pytest.fixture(scope="session")
def fixture_rig(cleaned_corpus):
    dictionary = build_dictionary(cleaned_corpus, threshold=1)
    fm = build_frequency_matrix(cleaned_corpus, dictionary)
    return fm, build_rig_matrix(fm)


def write_jsonl(path: Path, docs: list[dict]) -> Path:
    with path.open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc) + "\n")
    return path
