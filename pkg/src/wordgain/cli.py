"""Command line interface.

Subcommands cover the individual pipeline stages plus the analyses that
read a finished RIG matrix (rankings, coverage unions, criterion
comparison, per-category reports) and the one-shot ``pipeline`` runner.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import cleaning, corpus as corpus_mod, dictionary as dict_mod
from .errors import ConsistencyError, CorpusError, RuleError
from .freq import (
    build_frequency_matrix,
    normalize_cols_l1,
    normalize_rows_l1,
    normalize_two_step,
    save_matrix_csv,
)
from .pipeline import (
    EXIT_CODES,
    PipelineConfig,
    StageError,
    load_config,
    run_pipeline,
)
from .ranking import (
    SUM_RIGS,
    compare_top_n,
    coverage_matches,
    coverage_union,
    extract_thesaurus,
    rank,
    sum_histogram,
)
from .reports import write_category_table, write_wordcloud_weights
from .rig import build_rig_matrix, load_rig_csv, save_rig_csv

logger = logging.getLogger(__name__)


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "x"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="random seed (only the synthetic-corpus test generator uses it)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordgain",
        description="Word-category information gain analysis for labeled corpora",
    )
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read a JSONL corpus and filter by length")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--min-tokens", type=int, default=30)
    p.add_argument("--max-tokens", type=int, default=500)
    p.add_argument(
        "--counts-file", action="store_true", help="also write ingest_report.txt"
    )

    p = sub.add_parser("clean", help="strip notices with a rule file")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--rules", type=Path, help="defaults to the shipped rules")
    p.add_argument("--min-tokens", type=int, default=30)
    p.add_argument("--window", type=int, default=cleaning.DEFAULT_WINDOW)

    p = sub.add_parser("dict", help="build the core dictionary")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--threshold", type=int, default=10)

    p = sub.add_parser("freq", help="build the word-category frequency matrix")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--dictionary", type=Path, required=True)
    p.add_argument(
        "--normalize",
        action="append",
        choices=["rows", "cols", "twostep"],
        default=[],
        help="also export a normalized variant (repeatable)",
    )

    p = sub.add_parser("rig", help="build the word-category RIG matrix")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--dictionary", type=Path, required=True)
    p.add_argument("--precision", type=int, default=6)

    p = sub.add_parser("rank", help="rank words under a criterion")
    p.add_argument("--rig", type=Path, help="rig_matrix.csv")
    p.add_argument("--freq-corpus", type=Path, help="corpus for freq criteria")
    p.add_argument("--freq-dictionary", type=Path, help="dictionary for freq criteria")
    p.add_argument(
        "--criterion",
        required=True,
        help="sum_rigs | max_rigs | rig_in_category:<name> | freq_in_category:<name>",
    )
    p.add_argument("--precision", type=int, default=6)

    p = sub.add_parser("thesaurus", help="extract the top-m sum-of-RIGs words")
    p.add_argument("--rig", type=Path, required=True)
    p.add_argument("--size", type=int, default=5000)
    p.add_argument("--precision", type=int, default=6)

    p = sub.add_parser("coverage", help="union of per-category top-n words")
    p.add_argument("--rig", type=Path, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--matches-m",
        type=int,
        help="also report overlap with the top-m sum-of-RIGs words",
    )

    p = sub.add_parser("compare", help="overlap of two ranked lists at several n")
    p.add_argument("--rig", type=Path, required=True)
    p.add_argument("--criterion-a", default="sum_rigs")
    p.add_argument("--criterion-b", default="max_rigs")
    p.add_argument("--ns", required=True, help="comma-separated list sizes")

    p = sub.add_parser("report", help="per-category tables and word-cloud weights")
    p.add_argument("--rig", type=Path, required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--top-n", type=int, help="defaults to config top_n, else 100")
    p.add_argument("--precision", type=int, help="defaults to config precision, else 6")
    p.add_argument(
        "--histogram",
        help="also write a sum-of-RIGs histogram, format m:bins (e.g. 5000:30)",
    )

    p = sub.add_parser("pipeline", help="run every stage into the output directory")
    p.add_argument("--input", type=Path)
    p.add_argument("--rules", type=Path)
    p.add_argument("--min-tokens", type=int)
    p.add_argument("--max-tokens", type=int)
    p.add_argument("--threshold", type=int)
    p.add_argument("--thesaurus-size", type=int)
    p.add_argument("--top-n", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--window", type=int)

    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus, report = corpus_mod.ingest(args.input, args.min_tokens, args.max_tokens)
    args.out.mkdir(parents=True, exist_ok=True)
    corpus_mod.save_corpus_jsonl(corpus, args.out / "corpus.jsonl")
    print(report.summary(), file=sys.stderr)
    if args.counts_file:
        (args.out / "ingest_report.txt").write_text(
            report.summary() + "\n", encoding="utf-8"
        )
    return 0


def _cmd_clean(args: argparse.Namespace) -> int:
    corpus = corpus_mod.load_corpus_jsonl(args.corpus)
    rules_path = args.rules if args.rules else cleaning.default_rules_path()
    rules = cleaning.load_rules(rules_path)
    cleaned, report = cleaning.clean_corpus(
        corpus, rules, args.min_tokens, args.window, args.jobs
    )
    args.out.mkdir(parents=True, exist_ok=True)
    corpus_mod.save_corpus_jsonl(cleaned, args.out / "corpus_clean.jsonl")
    report.write_csv(args.out / "cleaning_report.csv")
    print(
        f"modified={report.documents_modified} dropped={report.documents_dropped} "
        f"matches={report.total_matches()}",
        file=sys.stderr,
    )
    return 0


def _cmd_dict(args: argparse.Namespace) -> int:
    corpus = corpus_mod.load_corpus_jsonl(args.corpus)
    dictionary = dict_mod.build_dictionary(corpus, args.threshold, args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    dict_mod.save_dictionary(
        dictionary,
        args.out / "dictionary.csv",
        args.out / "dictionary.meta",
        corpus_hash=corpus.content_hash(),
    )
    print(f"entries={dictionary.N}", file=sys.stderr)
    return 0


def _load_freq(corpus_path: Path, dictionary_path: Path, jobs: int):
    corpus = corpus_mod.load_corpus_jsonl(corpus_path)
    dictionary = dict_mod.load_dictionary(
        dictionary_path, dictionary_path.with_suffix(".meta")
    )
    return build_frequency_matrix(corpus, dictionary, jobs)


def _cmd_freq(args: argparse.Namespace) -> int:
    fm = _load_freq(args.corpus, args.dictionary, args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(args.out / "freq_matrix.csv", fm.stems, fm.categories, fm.counts)
    schemes = {
        "rows": normalize_rows_l1,
        "cols": normalize_cols_l1,
        "twostep": normalize_two_step,
    }
    for scheme in args.normalize:
        matrix = schemes[scheme](fm)
        save_matrix_csv(
            args.out / f"freq_matrix_{scheme}.csv",
            fm.stems,
            fm.categories,
            matrix,
            precision=6,
        )
    return 0


def _cmd_rig(args: argparse.Namespace) -> int:
    fm = _load_freq(args.corpus, args.dictionary, args.jobs)
    rm = build_rig_matrix(fm)
    args.out.mkdir(parents=True, exist_ok=True)
    save_rig_csv(rm, args.out / "rig_matrix.csv", args.precision)
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    if args.criterion.startswith("freq_in_category"):
        if not (args.freq_corpus and args.freq_dictionary):
            raise ValueError(
                "freq_in_category ranking needs --freq-corpus and --freq-dictionary"
            )
        matrix = _load_freq(args.freq_corpus, args.freq_dictionary, args.jobs)
    else:
        if not args.rig:
            raise ValueError("RIG criteria need --rig")
        matrix = load_rig_csv(args.rig)
    ranking = rank(matrix, args.criterion)
    args.out.mkdir(parents=True, exist_ok=True)
    ranking.write_csv(
        args.out / f"ranking_{_slug(args.criterion)}.csv", args.precision
    )
    return 0


def _cmd_thesaurus(args: argparse.Namespace) -> int:
    rm = load_rig_csv(args.rig)
    size = min(args.size, rm.N)
    if size < args.size:
        logger.warning("size %d exceeds dictionary size %d; clamped", args.size, rm.N)
    thesaurus = extract_thesaurus(rm, size)
    args.out.mkdir(parents=True, exist_ok=True)
    thesaurus.write(
        args.out / "thesaurus.csv", args.out / "thesaurus.manifest", args.precision
    )
    return 0


def _cmd_coverage(args: argparse.Namespace) -> int:
    rm = load_rig_csv(args.rig)
    coverage = coverage_union(rm, args.n)
    args.out.mkdir(parents=True, exist_ok=True)
    coverage.write(args.out / f"coverage_{args.n}.txt")
    if args.matches_m:
        top = rank(rm, SUM_RIGS).top(args.matches_m)
        print(
            f"matches(T_{args.matches_m}, X_{args.n})="
            f"{coverage_matches(top, coverage)}",
            file=sys.stderr,
        )
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    rm = load_rig_csv(args.rig)
    ns = [int(n) for n in args.ns.split(",") if n]
    table = compare_top_n(rank(rm, args.criterion_a), rank(rm, args.criterion_b), ns)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"compare_{_slug(args.criterion_a)}_{_slug(args.criterion_b)}.csv"
    with path.open("w", encoding="utf-8") as fh:
        fh.write("n,matches,fraction\n")
        for n, matches, fraction in table:
            fh.write(f"{n},{matches},{fraction:.3f}\n")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else {}
    top_n = args.top_n if args.top_n is not None else int(config.get("top_n", 100))
    precision = (
        args.precision if args.precision is not None else int(config.get("precision", 6))
    )
    rm = load_rig_csv(args.rig)
    args.out.mkdir(parents=True, exist_ok=True)
    slug = _slug(args.category)
    write_category_table(
        rm, args.category, top_n, args.out / f"category_{slug}.csv", precision
    )
    write_wordcloud_weights(
        rm, args.category, top_n, args.out / f"wordcloud_{slug}.csv", precision
    )
    if args.histogram:
        m_str, _, bins_str = args.histogram.partition(":")
        histogram = sum_histogram(rm, int(m_str), int(bins_str) if bins_str else 20)
        histogram.write_csv(args.out / f"histogram_sum_{int(m_str)}.csv")
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    values: dict[str, object] = {}
    if args.config:
        values.update(load_config(args.config))
    for key in (
        "input", "rules", "min_tokens", "max_tokens", "threshold",
        "thesaurus_size", "top_n", "precision", "window",
    ):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "input" not in values:
        raise ValueError("pipeline needs --input or an input= line in --config")
    if args.out != Path(".") or "out" not in values:
        values["out"] = args.out
    # global flags beat config entries when given; argparse defaults defer
    jobs = args.jobs if args.jobs != 1 else int(values.pop("jobs", 1))
    seed = args.seed if args.seed != 0 else int(values.pop("seed", 0))
    values.pop("jobs", None)
    values.pop("seed", None)
    config = PipelineConfig(jobs=jobs, seed=seed, **values)
    result = run_pipeline(config)
    for path in result.artifacts:
        print(path, file=sys.stderr)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "clean": _cmd_clean,
    "dict": _cmd_dict,
    "freq": _cmd_freq,
    "rig": _cmd_rig,
    "rank": _cmd_rank,
    "thesaurus": _cmd_thesaurus,
    "coverage": _cmd_coverage,
    "compare": _cmd_compare,
    "report": _cmd_report,
    "pipeline": _cmd_pipeline,
}

_COMMAND_STAGE = {
    "ingest": "ingest",
    "clean": "clean",
    "dict": "dict",
    "freq": "freq",
    "rig": "rig",
    "rank": "rank",
    "thesaurus": "thesaurus",
    "coverage": "rank",
    "compare": "rank",
    "report": "report",
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"wordgain: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.stage, 1)
    except (
        CorpusError, RuleError, ConsistencyError,
        ValueError, KeyError, TypeError, OSError,
    ) as exc:
        print(f"wordgain: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_CODES.get(_COMMAND_STAGE.get(args.command, ""), 1)


def entrypoint() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(main())
