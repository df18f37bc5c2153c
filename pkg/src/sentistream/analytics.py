"""Mergeable corpus statistics: per-year/language counts, symbol frequencies,
length histograms and author/source tallies, plus the query projections that
turn the accumulator into report tables.

One bundle per worker, merged at the end: merge is a cell-wise sum, so it is
associative, commutative and has the empty bundle as identity, which makes
parallel runs reproduce the single-threaded result exactly. Queries never
mutate the bundle.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .labeller import LabelledTweet
from .lexicon import EMOJI, EMOTICON, NEGATIVE, POSITIVE

MAX_LENGTH_BUCKET = 400
SHARE_DIGITS = 6

STATS_SCHEMA = "sentistream-stats/1"


class UndefinedCellError(LookupError):
    """Raised when a ratio query hits a cell with a zero denominator."""


@dataclass
class YearLangCell:
    total: int = 0
    positive: int = 0
    negative: int = 0
    with_emoji: int = 0
    with_emoticon: int = 0

    def plus(self, other: "YearLangCell") -> "YearLangCell":
        return YearLangCell(
            self.total + other.total,
            self.positive + other.positive,
            self.negative + other.negative,
            self.with_emoji + other.with_emoji,
            self.with_emoticon + other.with_emoticon,
        )


def _sum_maps(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


@dataclass
class StatsBundle:
    tweets_total: int = 0
    year_language: dict[tuple[int, str], YearLangCell] = field(default_factory=dict)
    year_polarity_glyph: dict[tuple[int, str, str], int] = field(default_factory=dict)
    tool_polarity_glyph: dict[tuple[str, str, str], int] = field(default_factory=dict)
    length_histogram: dict[tuple[str, int], int] = field(default_factory=dict)
    author_counts: dict[int, int] = field(default_factory=dict)
    tool_counts: dict[str, int] = field(default_factory=dict)

    def add(self, t: LabelledTweet) -> "StatsBundle":
        rec = t.record
        key = (rec.year, rec.language)
        cell = self.year_language.get(key)
        if cell is None:
            cell = self.year_language[key] = YearLangCell()
        cell.total += 1
        if t.label == POSITIVE:
            cell.positive += 1
        else:
            cell.negative += 1
        hits = t.hits.positive_hits + t.hits.negative_hits
        if any(h.kind == EMOJI for h in hits):
            cell.with_emoji += 1
        if any(h.kind == EMOTICON for h in hits):
            cell.with_emoticon += 1

        for polarity, hit_list in (
            (POSITIVE, t.hits.positive_hits),
            (NEGATIVE, t.hits.negative_hits),
        ):
            for h in hit_list:
                ypg = (rec.year, polarity, h.glyph)
                self.year_polarity_glyph[ypg] = self.year_polarity_glyph.get(ypg, 0) + 1
                tpg = (rec.source_tool, polarity, h.glyph)
                self.tool_polarity_glyph[tpg] = self.tool_polarity_glyph.get(tpg, 0) + 1

        # length of the raw (unstripped) matched text, in codepoints
        bucket = min(max(len(rec.matched_text()), 1), MAX_LENGTH_BUCKET)
        lh = (rec.language, bucket)
        self.length_histogram[lh] = self.length_histogram.get(lh, 0) + 1

        self.author_counts[rec.author_id] = self.author_counts.get(rec.author_id, 0) + 1
        self.tool_counts[rec.source_tool] = self.tool_counts.get(rec.source_tool, 0) + 1
        self.tweets_total += 1
        return self

    def merge(self, other: "StatsBundle") -> "StatsBundle":
        """Cell-wise sum into a new bundle; neither operand is modified."""
        merged_yl = {k: YearLangCell().plus(v) for k, v in self.year_language.items()}
        for k, v in other.year_language.items():
            merged_yl[k] = merged_yl[k].plus(v) if k in merged_yl else YearLangCell().plus(v)
        return StatsBundle(
            tweets_total=self.tweets_total + other.tweets_total,
            year_language=merged_yl,
            year_polarity_glyph=_sum_maps(self.year_polarity_glyph, other.year_polarity_glyph),
            tool_polarity_glyph=_sum_maps(self.tool_polarity_glyph, other.tool_polarity_glyph),
            length_histogram=_sum_maps(self.length_histogram, other.length_histogram),
            author_counts=_sum_maps(self.author_counts, other.author_counts),
            tool_counts=_sum_maps(self.tool_counts, other.tool_counts),
        )

    def to_json_dict(self) -> dict:
        return {
            "schema": STATS_SCHEMA,
            "tweets_total": self.tweets_total,
            "year_language": [
                [y, lang, c.total, c.positive, c.negative, c.with_emoji, c.with_emoticon]
                for (y, lang), c in sorted(self.year_language.items())
            ],
            "year_polarity_glyph": [
                [y, p, g, n] for (y, p, g), n in sorted(self.year_polarity_glyph.items())
            ],
            "tool_polarity_glyph": [
                [t, p, g, n] for (t, p, g), n in sorted(self.tool_polarity_glyph.items())
            ],
            "length_histogram": [
                [lang, bucket, n] for (lang, bucket), n in sorted(self.length_histogram.items())
            ],
            "author_counts": [[a, n] for a, n in sorted(self.author_counts.items())],
            "tool_counts": [[t, n] for t, n in sorted(self.tool_counts.items())],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "StatsBundle":
        if d.get("schema") != STATS_SCHEMA:
            raise ValueError(f"unsupported stats schema: {d.get('schema')!r}")
        bundle = cls(tweets_total=d["tweets_total"])
        for y, lang, total, pos, neg, we, wt in d["year_language"]:
            bundle.year_language[(y, lang)] = YearLangCell(total, pos, neg, we, wt)
        for y, p, g, n in d["year_polarity_glyph"]:
            bundle.year_polarity_glyph[(y, p, g)] = n
        for t, p, g, n in d["tool_polarity_glyph"]:
            bundle.tool_polarity_glyph[(t, p, g)] = n
        for lang, bucket, n in d["length_histogram"]:
            bundle.length_histogram[(lang, bucket)] = n
        for a, n in d["author_counts"]:
            bundle.author_counts[a] = n
        for t, n in d["tool_counts"]:
            bundle.tool_counts[t] = n
        return bundle


def accumulate(s: StatsBundle, t: LabelledTweet) -> StatsBundle:
    """Fold one labelled tweet into the bundle (mutates and returns it)."""
    return s.add(t)


def merge(a: StatsBundle, b: StatsBundle) -> StatsBundle:
    return a.merge(b)


def query_yearly_counts(s: StatsBundle) -> list[tuple[int, str, int]]:
    """(year, language, count) rows sorted by year then language code."""
    return [(y, lang, cell.total) for (y, lang), cell in sorted(s.year_language.items())]


def query_kind_share(s: StatsBundle, year: int, language: str) -> tuple[float, float]:
    """(emoji share, emoticon share) of tweets in one (year, language) cell.

    Shares may sum above 1: a tweet carrying both kinds counts in both.
    """
    cell = s.year_language.get((year, language))
    if cell is None or cell.total == 0:
        raise UndefinedCellError(f"no tweets for year={year} language={language!r}")
    return (cell.with_emoji / cell.total, cell.with_emoticon / cell.total)


def query_top_symbols(
    s: StatsBundle, year: int, polarity: str, k: int
) -> list[tuple[str, int]]:
    """Top k glyphs for one year and polarity, over all languages.

    Ordered by occurrence count, ties broken by codepoint order of the glyph.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = [
        (glyph, n)
        for (y, p, glyph), n in s.year_polarity_glyph.items()
        if y == year and p == polarity
    ]
    rows.sort(key=lambda gn: (-gn[1], gn[0]))
    return rows[:k]


def query_polarity_ratio(s: StatsBundle, year: int, language: str) -> float:
    """Negative over positive tweet count for one (year, language) cell."""
    cell = s.year_language.get((year, language))
    if cell is None or cell.positive == 0:
        raise UndefinedCellError(f"no positive tweets for year={year} language={language!r}")
    return cell.negative / cell.positive


def query_length_histogram(s: StatsBundle, language: str) -> dict[int, int]:
    """Codepoint-length counts for one language; lengths above 400 clamp to 400."""
    return {
        bucket: n
        for (lang, bucket), n in sorted(s.length_histogram.items())
        if lang == language
    }


@dataclass(frozen=True)
class UserSourceSummary:
    distinct_authors: int
    max_tweets_one_author: int
    single_tweet_authors: int
    single_tweet_author_share: float
    total_tweets: int
    top_tools: tuple[tuple[str, int, float], ...]  # (name, count, share of tweets)


def query_user_source_stats(s: StatsBundle, top_m: int = 3) -> UserSourceSummary:
    distinct = len(s.author_counts)
    max_by_one = max(s.author_counts.values(), default=0)
    singles = sum(1 for n in s.author_counts.values() if n == 1)
    tools = sorted(s.tool_counts.items(), key=lambda tn: (-tn[1], tn[0]))[:top_m]
    total = s.tweets_total
    return UserSourceSummary(
        distinct_authors=distinct,
        max_tweets_one_author=max_by_one,
        single_tweet_authors=singles,
        single_tweet_author_share=singles / distinct if distinct else 0.0,
        total_tweets=total,
        top_tools=tuple((t, n, n / total if total else 0.0) for t, n in tools),
    )


def query_platform_top_symbols(
    s: StatsBundle, source_tool: str, polarity: str, k: int
) -> list[tuple[str, int]]:
    """Like query_top_symbols but restricted to one source tool (all years)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = [
        (glyph, n)
        for (tool, p, glyph), n in s.tool_polarity_glyph.items()
        if tool == source_tool and p == polarity
    ]
    rows.sort(key=lambda gn: (-gn[1], gn[0]))
    return rows[:k]


def _share(x: float) -> str:
    return f"{x:.{SHARE_DIGITS}f}"


def _writer(f: IO[str]) -> "csv.writer":
    return csv.writer(f, lineterminator="\n")


def write_yearly_counts_csv(s: StatsBundle, f: IO[str]) -> None:
    w = _writer(f)
    w.writerow(["year", "language", "count"])
    for year, lang, n in query_yearly_counts(s):
        w.writerow([year, lang, n])


def write_kind_share_csv(s: StatsBundle, f: IO[str]) -> None:
    w = _writer(f)
    w.writerow(["year", "language", "emoji_share", "emoticon_share"])
    for (year, lang), cell in sorted(s.year_language.items()):
        if cell.total == 0:
            continue
        emoji_share, emoticon_share = query_kind_share(s, year, lang)
        w.writerow([year, lang, _share(emoji_share), _share(emoticon_share)])


def write_top_symbols_csv(s: StatsBundle, f: IO[str], k: int = 10) -> None:
    w = _writer(f)
    w.writerow(["year", "polarity", "rank", "glyph", "count"])
    years = sorted({y for (y, _p, _g) in s.year_polarity_glyph})
    for year in years:
        for polarity in (POSITIVE, NEGATIVE):
            for rank, (glyph, n) in enumerate(query_top_symbols(s, year, polarity, k), 1):
                w.writerow([year, polarity, rank, glyph, n])


def write_polarity_ratio_csv(s: StatsBundle, f: IO[str]) -> None:
    w = _writer(f)
    w.writerow(["year", "language", "ratio"])
    for (year, lang), cell in sorted(s.year_language.items()):
        if cell.positive == 0:
            continue
        w.writerow([year, lang, _share(query_polarity_ratio(s, year, lang))])


def write_length_histogram_csv(s: StatsBundle, f: IO[str]) -> None:
    w = _writer(f)
    w.writerow(["language", "length", "count"])
    for (lang, bucket), n in sorted(s.length_histogram.items()):
        w.writerow([lang, bucket, n])


def write_user_source_csv(s: StatsBundle, f: IO[str], top_m: int = 10) -> None:
    summary = query_user_source_stats(s, top_m=top_m)
    w = _writer(f)
    w.writerow(["metric", "name", "count", "share"])
    w.writerow(["total_tweets", "", summary.total_tweets, ""])
    w.writerow(["distinct_authors", "", summary.distinct_authors, ""])
    w.writerow(["max_tweets_one_author", "", summary.max_tweets_one_author, ""])
    w.writerow(
        [
            "single_tweet_authors",
            "",
            summary.single_tweet_authors,
            _share(summary.single_tweet_author_share),
        ]
    )
    for name, n, share in summary.top_tools:
        w.writerow(["top_source_tool", name, n, _share(share)])


def write_platform_top_csv(
    s: StatsBundle, f: IO[str], k: int = 10, tools: Iterable[str] | None = None
) -> None:
    if tools is None:
        ranked = sorted(s.tool_counts.items(), key=lambda tn: (-tn[1], tn[0]))
        tools = [t for t, _n in ranked[:5]]
    w = _writer(f)
    w.writerow(["source_tool", "polarity", "rank", "glyph", "count"])
    for tool in tools:
        for polarity in (POSITIVE, NEGATIVE):
            for rank, (glyph, n) in enumerate(
                query_platform_top_symbols(s, tool, polarity, k), 1
            ):
                w.writerow([tool, polarity, rank, glyph, n])


CSV_WRITERS = {
    "yearly_counts": write_yearly_counts_csv,
    "kind_share": write_kind_share_csv,
    "top_symbols": write_top_symbols_csv,
    "polarity_ratio": write_polarity_ratio_csv,
    "length_histogram": write_length_histogram_csv,
    "user_source": write_user_source_csv,
    "platform_top": write_platform_top_csv,
}


def write_stats_csvs(s: StatsBundle, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    written = []
    for name, writer in CSV_WRITERS.items():
        path = out_dir / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer(s, f)
        written.append(path)
    return written


def write_stats_json(s: StatsBundle, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(s.to_json_dict(), f, ensure_ascii=False, sort_keys=True, indent=1)
        f.write("\n")


def load_stats_json(path: str | Path) -> StatsBundle:
    with open(path, "r", encoding="utf-8") as f:
        return StatsBundle.from_json_dict(json.load(f))
