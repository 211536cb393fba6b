"""End-to-end pipeline: ingest, clean, dictionary, matrices, thesaurus.

Every stage writes its artifact into the output directory and records a
content-hash key in ``manifest.txt``.  Reruns skip any stage whose key
and artifacts are unchanged, so editing one knob (say the thesaurus
size) only redoes the tail of the pipeline.  Nothing in the artifacts
depends on wall clock, absolute paths or the job count, which keeps
repeated runs byte-identical.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import cleaning, corpus as corpus_mod, dictionary as dict_mod
from .freq import FrequencyMatrix, build_frequency_matrix, save_matrix_csv
from .ranking import extract_thesaurus
from .rig import RigMatrix, build_rig_matrix, load_rig_csv, save_rig_csv

logger = logging.getLogger(__name__)

STAGES = ("ingest", "clean", "dict", "freq", "rig", "thesaurus")

EXIT_CODES = {stage: 10 + i for i, stage in enumerate(STAGES)}
EXIT_CODES["rank"] = 20
EXIT_CODES["report"] = 21

ARTIFACT_NAMES = {
    "ingest": ("corpus.jsonl",),
    "clean": ("corpus_clean.jsonl", "cleaning_report.csv"),
    "dict": ("dictionary.csv", "dictionary.meta"),
    "freq": ("freq_matrix.csv",),
    "rig": ("rig_matrix.csv",),
    "thesaurus": ("thesaurus.csv", "thesaurus.manifest"),
}

MANIFEST_NAME = "manifest.txt"


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    input: Path
    out: Path
    rules: Path | None = None      # None selects the shipped notice rules
    min_tokens: int = 30
    max_tokens: int = 500
    threshold: int = 10
    thesaurus_size: int = 5000
    top_n: int = 100
    precision: int = 6
    window: int = cleaning.DEFAULT_WINDOW
    jobs: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        self.input = Path(self.input)
        self.out = Path(self.out)
        if self.rules is not None:
            self.rules = Path(self.rules)
        for name in (
            "min_tokens", "max_tokens", "threshold", "thesaurus_size",
            "top_n", "precision", "window", "jobs",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.min_tokens > self.max_tokens:
            raise ValueError("min_tokens must not exceed max_tokens")

    def rules_path(self) -> Path:
        return self.rules if self.rules is not None else cleaning.default_rules_path()


_INT_FIELDS = {
    "min_tokens", "max_tokens", "threshold", "thesaurus_size",
    "top_n", "precision", "window", "jobs", "seed",
}


def load_config(path: str | Path) -> dict[str, object]:
    """Parse a key=value config file into PipelineConfig keyword arguments."""
    known = {f.name for f in fields(PipelineConfig)}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in known:
            raise ValueError(f"{path}:{lineno}: unknown config line {raw!r}")
        values[key] = int(value) if key in _INT_FIELDS else value
    return values


def _hash_file(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _stage_key(*parts: object) -> str:
    joined = "\x1f".join(str(p) for p in parts)
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


class _Manifest:
    """stage -> (key, {artifact name -> sha256}) persisted as plain text."""

    def __init__(self, path: Path):
        self.path = path
        self.stages: dict[str, tuple[str, dict[str, str]]] = {}
        if path.exists():
            self._load()

    def _load(self) -> None:
        stage = key = None
        files: dict[str, str] = {}
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.startswith("stage="):
                stage, key, files = line[6:], None, {}
            elif line.startswith("key="):
                key = line[4:]
            elif line.startswith("file="):
                name, _, digest = line[5:].partition(":")
                files[name] = digest
            elif line == "---" and stage and key:
                self.stages[stage] = (key, files)

    def save(self) -> None:
        lines = []
        for stage in STAGES:
            if stage not in self.stages:
                continue
            key, files = self.stages[stage]
            lines.append(f"stage={stage}")
            lines.append(f"key={key}")
            for name in sorted(files):
                lines.append(f"file={name}:{files[name]}")
            lines.append("---")
        self.path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def is_fresh(self, stage: str, key: str, out: Path) -> bool:
        entry = self.stages.get(stage)
        if entry is None or entry[0] != key:
            return False
        for name, digest in entry[1].items():
            artifact = out / name
            if not artifact.exists() or _hash_file(artifact) != digest:
                return False
        return True

    def record(self, stage: str, key: str, out: Path) -> None:
        files = {name: _hash_file(out / name) for name in ARTIFACT_NAMES[stage]}
        self.stages[stage] = (key, files)

    def artifact_hash(self, stage: str, name: str) -> str:
        return self.stages[stage][1][name]


@dataclass
class PipelineResult:
    artifacts: list[Path]
    stages_run: list[str] = field(default_factory=list)
    stages_cached: list[str] = field(default_factory=list)


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run all stages, reusing cached artifacts whose inputs are unchanged."""
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    manifest = _Manifest(out / MANIFEST_NAME)
    result = PipelineResult(artifacts=[])

    corpus_obj: corpus_mod.Corpus | None = None
    cleaned: corpus_mod.Corpus | None = None
    dictionary: dict_mod.Dictionary | None = None
    fm: FrequencyMatrix | None = None
    rm: RigMatrix | None = None

    def _run(stage: str, key: str, action) -> bool:
        """Returns True when the stage actually ran."""
        if manifest.is_fresh(stage, key, out):
            logger.info("stage %s: cached", stage)
            result.stages_cached.append(stage)
            return False
        try:
            action()
        except Exception as exc:
            raise StageError(stage, exc)
        manifest.record(stage, key, out)
        manifest.save()
        result.stages_run.append(stage)
        return True

    # ingest
    try:
        input_hash = _hash_file(config.input)
    except OSError as exc:
        raise StageError("ingest", exc)
    ingest_key = _stage_key("ingest", input_hash, config.min_tokens, config.max_tokens)

    def _ingest() -> None:
        nonlocal corpus_obj
        corpus_obj, report = corpus_mod.ingest(
            config.input, config.min_tokens, config.max_tokens
        )
        logger.info("ingest report:\n%s", report.summary())
        corpus_mod.save_corpus_jsonl(corpus_obj, out / "corpus.jsonl")

    _run("ingest", ingest_key, _ingest)

    def _raw_corpus() -> corpus_mod.Corpus:
        nonlocal corpus_obj
        if corpus_obj is None:
            corpus_obj = corpus_mod.load_corpus_jsonl(out / "corpus.jsonl")
        return corpus_obj

    # clean
    rules_path = config.rules_path()
    try:
        rules_hash = _hash_file(rules_path)
    except OSError as exc:
        raise StageError("clean", exc)
    clean_key = _stage_key(
        "clean",
        manifest.artifact_hash("ingest", "corpus.jsonl"),
        rules_hash,
        config.min_tokens,
        config.window,
    )

    def _clean() -> None:
        nonlocal cleaned
        rules = cleaning.load_rules(rules_path)
        cleaned, report = cleaning.clean_corpus(
            _raw_corpus(), rules, config.min_tokens, config.window, config.jobs
        )
        corpus_mod.save_corpus_jsonl(cleaned, out / "corpus_clean.jsonl")
        report.write_csv(out / "cleaning_report.csv")

    _run("clean", clean_key, _clean)

    def _clean_corpus() -> corpus_mod.Corpus:
        nonlocal cleaned
        if cleaned is None:
            cleaned = corpus_mod.load_corpus_jsonl(out / "corpus_clean.jsonl")
        return cleaned

    # dictionary
    dict_key = _stage_key(
        "dict",
        manifest.artifact_hash("clean", "corpus_clean.jsonl"),
        config.threshold,
    )

    def _dict() -> None:
        nonlocal dictionary
        dictionary = dict_mod.build_dictionary(
            _clean_corpus(), config.threshold, config.jobs
        )
        dict_mod.save_dictionary(
            dictionary,
            out / "dictionary.csv",
            out / "dictionary.meta",
            corpus_hash=_clean_corpus().content_hash(),
        )

    _run("dict", dict_key, _dict)

    def _dictionary() -> dict_mod.Dictionary:
        nonlocal dictionary
        if dictionary is None:
            dictionary = dict_mod.load_dictionary(
                out / "dictionary.csv", out / "dictionary.meta"
            )
        return dictionary

    def _freq_matrix() -> FrequencyMatrix:
        nonlocal fm
        if fm is None:
            fm = build_frequency_matrix(_clean_corpus(), _dictionary(), config.jobs)
        return fm

    # frequency matrix
    freq_key = _stage_key(
        "freq",
        manifest.artifact_hash("clean", "corpus_clean.jsonl"),
        manifest.artifact_hash("dict", "dictionary.csv"),
    )

    def _freq() -> None:
        matrix = _freq_matrix()
        save_matrix_csv(
            out / "freq_matrix.csv", matrix.stems, matrix.categories, matrix.counts
        )

    _run("freq", freq_key, _freq)

    # rig matrix
    rig_key = _stage_key(
        "rig",
        manifest.artifact_hash("clean", "corpus_clean.jsonl"),
        manifest.artifact_hash("dict", "dictionary.csv"),
        config.precision,
    )

    def _rig() -> None:
        nonlocal rm
        rm = build_rig_matrix(_freq_matrix())
        save_rig_csv(rm, out / "rig_matrix.csv", config.precision)

    _run("rig", rig_key, _rig)

    def _rig_matrix() -> RigMatrix:
        nonlocal rm
        if rm is None:
            rm = load_rig_csv(out / "rig_matrix.csv")
            rm.source_hash = _clean_corpus().content_hash()
        return rm

    # thesaurus
    thesaurus_key = _stage_key(
        "thesaurus",
        manifest.artifact_hash("rig", "rig_matrix.csv"),
        config.thesaurus_size,
        config.precision,
    )

    def _thesaurus() -> None:
        matrix = _rig_matrix()
        size = min(config.thesaurus_size, matrix.N)
        if size < config.thesaurus_size:
            logger.warning(
                "thesaurus size %d exceeds dictionary size %d; clamped",
                config.thesaurus_size,
                matrix.N,
            )
        thesaurus = extract_thesaurus(matrix, size)
        if not thesaurus.corpus_hash:
            thesaurus.corpus_hash = _clean_corpus().content_hash()
        thesaurus.write(
            out / "thesaurus.csv", out / "thesaurus.manifest", config.precision
        )

    _run("thesaurus", thesaurus_key, _thesaurus)

    result.artifacts = [
        out / name for stage in STAGES for name in ARTIFACT_NAMES[stage]
    ]
    return result
