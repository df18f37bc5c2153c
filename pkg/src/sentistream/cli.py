"""Command-line entry point.

Subcommands: ``build`` (run the full pipeline), ``analyze`` (print one query
of a stats.json as CSV), ``validate`` (confusion matrix against a gold file),
``lexicon`` (check a lexicon file).

Exit codes: 0 success, 1 configuration/validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import analytics
from .dedup import DEFAULT_RUN_SIZE, MODES, RETWEET_LINK
from .labeller import DEFAULT_LANGUAGES
from .lexicon import (
    NEGATIVE,
    POSITIVE,
    LexiconError,
    load_lexicon,
    validate_lexicon,
)
from .pipeline import ConfigError, RunConfig, run_build
from .validation import (
    LabelFileError,
    confusion_matrix,
    load_distant_labels,
    load_gold,
    matrix_summary,
    write_matrix_csv,
    write_summary_json,
)

QUERIES = (
    "yearly_counts",
    "kind_share",
    "top_symbols",
    "polarity_ratio",
    "length_histogram",
    "user_source",
    "platform_top",
)

_TRUTHY = {"1", "true", "yes", "on"}
_FALSY = {"0", "false", "no", "off"}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUTHY:
        return True
    if lowered in _FALSY:
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {line_no}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _build_config(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}

    def pick(flag_value, key: str, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return default

    inputs = args.inputs or [
        p.strip() for p in pick(None, "input", "").split(",") if p.strip()
    ]
    output_dir = pick(args.output_dir, "output_dir", None)
    if output_dir is None:
        raise ConfigError("an output directory is required (--output-dir)")
    languages = pick(args.languages, "languages", None)
    if isinstance(languages, str):
        languages = frozenset(code.strip() for code in languages.split(",") if code.strip())
    min_matches = pick(args.min_matches, "min_matches", 1)
    emoji_in_token = pick(args.emoji_in_token, "emoji_in_token", True)
    if isinstance(emoji_in_token, str):
        emoji_in_token = _parse_bool(emoji_in_token)
    full_jsonl = pick(args.full_jsonl, "full_jsonl", False)
    if isinstance(full_jsonl, str):
        full_jsonl = _parse_bool(full_jsonl)
    spill_dir = pick(args.spill_dir, "spill_dir", None)
    lexicon_path = pick(args.lexicon, "lexicon", None)
    try:
        min_matches = int(min_matches)
        run_size = int(pick(args.run_size, "run_size", DEFAULT_RUN_SIZE))
        workers = int(pick(args.workers, "workers", 1))
    except ValueError as exc:
        raise ConfigError(f"bad numeric option: {exc}") from exc

    return RunConfig(
        inputs=[Path(p) for p in inputs],
        output_dir=Path(output_dir),
        lexicon_path=Path(lexicon_path) if lexicon_path else None,
        languages=languages if languages is not None else DEFAULT_LANGUAGES,
        min_matches=min_matches,
        emoji_in_token=emoji_in_token,
        dedup_mode=pick(args.dedup_mode, "dedup_mode", RETWEET_LINK),
        spill_dir=Path(spill_dir) if spill_dir else None,
        run_size=run_size,
        workers=workers,
        full_jsonl=bool(full_jsonl),
    )


def cmd_build(args: argparse.Namespace) -> int:
    config = _build_config(args)
    report = run_build(config)
    print(
        "build complete: {labelled} labelled, {survivors} after dedup".format(
            labelled=report["labelling"]["labelled"],
            survivors=report["dedup"]["survivors"],
        )
    )
    return 0


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise ConfigError(f"query {args.query!r} requires --{name}")


def cmd_analyze(args: argparse.Namespace) -> int:
    bundle = analytics.load_stats_json(args.stats_path)
    out = sys.stdout
    query = args.query
    if query == "yearly_counts":
        analytics.write_yearly_counts_csv(bundle, out)
    elif query == "kind_share":
        if args.year is not None and args.language is not None:
            emoji_share, emoticon_share = analytics.query_kind_share(
                bundle, args.year, args.language
            )
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["year", "language", "emoji_share", "emoticon_share"])
            w.writerow(
                [args.year, args.language, f"{emoji_share:.6f}", f"{emoticon_share:.6f}"]
            )
        else:
            analytics.write_kind_share_csv(bundle, out)
    elif query == "top_symbols":
        _require(args, "year", "polarity")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["year", "polarity", "rank", "glyph", "count"])
        rows = analytics.query_top_symbols(bundle, args.year, args.polarity, args.k)
        for rank, (glyph, n) in enumerate(rows, 1):
            w.writerow([args.year, args.polarity, rank, glyph, n])
    elif query == "polarity_ratio":
        if args.year is not None and args.language is not None:
            ratio = analytics.query_polarity_ratio(bundle, args.year, args.language)
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["year", "language", "ratio"])
            w.writerow([args.year, args.language, f"{ratio:.6f}"])
        else:
            analytics.write_polarity_ratio_csv(bundle, out)
    elif query == "length_histogram":
        if args.language is not None:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["language", "length", "count"])
            for bucket, n in analytics.query_length_histogram(bundle, args.language).items():
                w.writerow([args.language, bucket, n])
        else:
            analytics.write_length_histogram_csv(bundle, out)
    elif query == "user_source":
        analytics.write_user_source_csv(bundle, out, top_m=args.m)
    elif query == "platform_top":
        _require(args, "source-tool", "polarity")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["source_tool", "polarity", "rank", "glyph", "count"])
        rows = analytics.query_platform_top_symbols(
            bundle, args.source_tool, args.polarity, args.k
        )
        for rank, (glyph, n) in enumerate(rows, 1):
            w.writerow([args.source_tool, args.polarity, rank, glyph, n])
    else:  # argparse choices should make this unreachable
        raise ConfigError(f"unknown query {query!r}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    distant = load_distant_labels(args.labels_path)
    gold = load_gold(args.gold_path)
    matrix = confusion_matrix(distant, gold)
    summary = matrix_summary(matrix)

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    matrix_path = out_dir / "confusion_matrix.csv"
    with open(matrix_path, "w", encoding="utf-8", newline="") as f:
        write_matrix_csv(matrix, f)
    write_summary_json(summary, out_dir / "validation_summary.json")

    write_matrix_csv(matrix, sys.stdout)
    print(
        f"captured={summary.captured} coverage={summary.coverage} "
        f"positive_noise={summary.positive_noise:.6f} "
        f"negative_noise={summary.negative_noise:.6f}"
    )
    return 0


def cmd_lexicon(args: argparse.Namespace) -> int:
    lex = load_lexicon(args.lexicon_path)
    report = validate_lexicon(lex, expect_canonical_counts=args.canonical)
    if report.ok:
        print(f"ok: {len(lex)} symbols")
        return 0
    for issue in report.issues:
        print(issue)
    return 1


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentistream",
        description="Build and analyse distantly supervised sentiment datasets from tweet archives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="run the full pipeline over archives")
    p_build.add_argument("inputs", nargs="*", help="archive files, tars or directories")
    p_build.add_argument("--output-dir", default=None)
    p_build.add_argument("--lexicon", default=None, help="lexicon file (default: bundled)")
    p_build.add_argument("--languages", default=None, help="comma separated language codes")
    p_build.add_argument("--min-matches", type=int, default=None)
    p_build.add_argument(
        "--emoji-in-token",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="also match emojis inside tokens (default on)",
    )
    p_build.add_argument("--dedup-mode", choices=MODES, default=None)
    p_build.add_argument("--spill-dir", default=None)
    p_build.add_argument("--run-size", type=int, default=None,
                         help="max records held in memory per sort run")
    p_build.add_argument("--workers", type=int, default=None)
    p_build.add_argument(
        "--full-jsonl",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="also write full.jsonl with text, hits and metadata",
    )
    p_build.add_argument("--config", default=None, help="key=value config file; flags win")
    p_build.set_defaults(func=cmd_build)

    p_analyze = sub.add_parser("analyze", help="print one stats query as CSV")
    p_analyze.add_argument("stats_path")
    p_analyze.add_argument("query", choices=QUERIES)
    p_analyze.add_argument("--year", type=int, default=None)
    p_analyze.add_argument("--language", default=None)
    p_analyze.add_argument("--polarity", choices=(POSITIVE, NEGATIVE), default=None)
    p_analyze.add_argument("--k", type=int, default=10)
    p_analyze.add_argument("--m", type=int, default=3)
    p_analyze.add_argument("--source-tool", default=None)
    p_analyze.set_defaults(func=cmd_analyze)

    p_validate = sub.add_parser("validate", help="compare distant labels against gold labels")
    p_validate.add_argument("labels_path")
    p_validate.add_argument("gold_path")
    p_validate.add_argument("--output-dir", default=".")
    p_validate.set_defaults(func=cmd_validate)

    p_lexicon = sub.add_parser("lexicon", help="check a lexicon file")
    p_lexicon.add_argument("lexicon_path")
    p_lexicon.add_argument("--canonical", action="store_true",
                           help="also require the bundled 41/37/29/33 composition")
    p_lexicon.set_defaults(func=cmd_lexicon)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; our contract reserves 2 for I/O
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ConfigError, LexiconError, LabelFileError, analytics.UndefinedCellError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
