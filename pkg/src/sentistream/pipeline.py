"""End-to-end dataset build: ingest, label, deduplicate, write outputs.

Work fans out per archive member: each worker streams its member, labels
tweets, folds statistics into its own bundle and writes sorted dedup runs to
disk. The coordinator heap-merges all runs, keeps one survivor per content
key, re-sorts survivors by tweet id and writes the outputs. Because merging
bundles is commutative and the dedup result is partition-invariant, the
output bytes do not depend on the worker count.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import tempfile
from dataclasses import dataclass
from datetime import timezone
from pathlib import Path

from . import analytics, dedup
from .ingest import IngestCounters, MemberRef, list_members, parse_tweet, read_member_lines
from .labeller import DEFAULT_LANGUAGES, LabelCounters, label_tweet
from .lexicon import Lexicon, load_bundled_lexicon, load_lexicon

log = logging.getLogger(__name__)

LABELS_FILENAME = "labels.tsv"
FULL_FILENAME = "full.jsonl"
STATS_FILENAME = "stats.json"
REPORT_FILENAME = "report.json"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    inputs: list[Path]
    output_dir: Path
    lexicon_path: Path | None = None  # None -> bundled lexicon
    languages: frozenset[str] = DEFAULT_LANGUAGES
    min_matches: int = 1
    emoji_in_token: bool = True
    dedup_mode: str = dedup.RETWEET_LINK
    spill_dir: Path | None = None
    run_size: int = dedup.DEFAULT_RUN_SIZE
    workers: int = 1
    full_jsonl: bool = False

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("at least one input path is required")
        if not self.languages:
            raise ConfigError("language set must not be empty")
        if self.min_matches < 1:
            raise ConfigError("min_matches must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.run_size < 1:
            raise ConfigError("run_size must be >= 1")
        if self.dedup_mode not in dedup.MODES:
            raise ConfigError(f"unknown dedup mode {self.dedup_mode!r}")


@dataclass
class MemberResult:
    run_paths: list[str]
    stats: analytics.StatsBundle
    ingest: IngestCounters
    labels: LabelCounters


# Per-process state for pool workers, set up once by the initializer so the
# lexicon is not re-parsed for every member.
_WORKER: dict = {}


def _worker_init(lexicon_path, languages, min_matches, emoji_in_token,
                 dedup_mode, run_size, run_dir) -> None:
    _WORKER["lex"] = (
        load_lexicon(lexicon_path) if lexicon_path else load_bundled_lexicon()
    )
    _WORKER["languages"] = frozenset(languages)
    _WORKER["min_matches"] = min_matches
    _WORKER["emoji_in_token"] = emoji_in_token
    _WORKER["dedup_mode"] = dedup_mode
    _WORKER["run_size"] = run_size
    _WORKER["run_dir"] = run_dir


def _process_member(ref: MemberRef) -> MemberResult:
    ingest_counters = IngestCounters()
    label_counters = LabelCounters()
    stats = analytics.StatsBundle()
    lex: Lexicon = _WORKER["lex"]
    mode = _WORKER["dedup_mode"]
    writer = dedup.RunWriter(
        key=lambda t: dedup.sort_key(t, mode),
        run_size=_WORKER["run_size"],
        spill_dir=_WORKER["run_dir"],
        own_dir=False,
    )
    for line in read_member_lines(ref, ingest_counters):
        rec = parse_tweet(line, ingest_counters)
        if rec is None:
            continue
        labelled = label_tweet(
            rec,
            lex,
            min_matches=_WORKER["min_matches"],
            languages=_WORKER["languages"],
            emoji_in_token=_WORKER["emoji_in_token"],
            counters=label_counters,
        )
        if labelled is None:
            continue
        stats.add(labelled)
        writer.add(labelled)
    writer.flush()
    return MemberResult(
        run_paths=[str(p) for p in writer.run_paths],
        stats=stats,
        ingest=ingest_counters,
        labels=label_counters,
    )


def _full_record_line(t) -> str:
    rec = t.record
    payload = {
        "id": rec.id,
        "label": t.label,
        "text": rec.text,
        "retweet_text": rec.retweet_text,
        "stripped_text": t.stripped_text,
        "hits": t.hits.to_dict(),
        "language": rec.language,
        "created_at": rec.created_at.astimezone(timezone.utc).isoformat(),
        "year": rec.year,
        "author_id": rec.author_id,
        "source_tool": rec.source_tool,
        "retweet_of": rec.retweet_of,
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def run_build(config: RunConfig) -> dict:
    """Execute a full build; returns the run report dict.

    Output files already written are removed if anything fails midway.
    """
    config.validate()
    # fail fast on a bad lexicon before any heavy work
    lexicon_path = str(config.lexicon_path) if config.lexicon_path else None
    if lexicon_path:
        load_lexicon(lexicon_path)

    members: list[MemberRef] = []
    for input_path in config.inputs:
        members.extend(list_members(input_path))

    config.output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if config.spill_dir is not None:
        config.spill_dir.mkdir(parents=True, exist_ok=True)

    try:
        with tempfile.TemporaryDirectory(
            prefix="sentistream-", dir=config.spill_dir
        ) as run_root:
            init_args = (
                lexicon_path,
                sorted(config.languages),
                config.min_matches,
                config.emoji_in_token,
                config.dedup_mode,
                config.run_size,
                run_root,
            )
            results: list[MemberResult] = []
            if config.workers == 1 or len(members) <= 1:
                _worker_init(*init_args)
                for ref in members:
                    results.append(_process_member(ref))
            else:
                with multiprocessing.Pool(
                    processes=min(config.workers, len(members)),
                    initializer=_worker_init,
                    initargs=init_args,
                ) as pool:
                    results = list(pool.imap(_process_member, members))

            stats = analytics.StatsBundle()
            ingest_counters = IngestCounters()
            label_counters = LabelCounters()
            all_runs: list[str] = []
            for res in results:
                stats = stats.merge(res.stats)
                ingest_counters.merge(res.ingest)
                label_counters.merge(res.labels)
                all_runs.extend(res.run_paths)

            survivors = dedup.first_per_key(
                dedup.merge_runs(all_runs), config.dedup_mode
            )
            # survivors arrive in content-key order; the output wants id order
            id_sorter = dedup.RunWriter(
                key=dedup.id_key, run_size=config.run_size, spill_dir=Path(run_root)
            )
            for t in survivors:
                id_sorter.add(t)

            labels_path = config.output_dir / LABELS_FILENAME
            full_path = config.output_dir / FULL_FILENAME
            written.append(labels_path)
            survivor_count = 0
            with open(labels_path, "w", encoding="utf-8", newline="\n") as labels_f:
                full_f = None
                if config.full_jsonl:
                    written.append(full_path)
                    full_f = open(full_path, "w", encoding="utf-8", newline="\n")
                try:
                    for t in id_sorter.sorted_stream():
                        survivor_count += 1
                        labels_f.write(f"{t.record.id}\t{t.label}\n")
                        if full_f is not None:
                            full_f.write(_full_record_line(t))
                            full_f.write("\n")
                finally:
                    if full_f is not None:
                        full_f.close()
            id_sorter.close()

        stats_path = config.output_dir / STATS_FILENAME
        written.append(stats_path)
        analytics.write_stats_json(stats, stats_path)
        written.extend(analytics.write_stats_csvs(stats, config.output_dir))

        report = {
            "ingest": ingest_counters.as_dict(),
            "labelling": label_counters.as_dict(),
            "dedup": {"mode": config.dedup_mode, "survivors": survivor_count},
            "config": {
                "languages": sorted(config.languages),
                "min_matches": config.min_matches,
                "emoji_in_token": config.emoji_in_token,
                "workers": config.workers,
                "run_size": config.run_size,
                "members": len(members),
            },
        }
        report_path = config.output_dir / REPORT_FILENAME
        written.append(report_path)
        with open(report_path, "w", encoding="utf-8") as f:
            json.dump(report, f, sort_keys=True, indent=1)
            f.write("\n")
        return report
    except BaseException:
        for path in written:
            try:
                path.unlink(missing_ok=True)
            except OSError:  # cleanup is best effort
                pass
        raise
