"""Stream tweet records out of bz2/json archives, tar containers and directory trees.

Archives are read member by member in lexicographic path order, line by line,
so memory stays flat no matter how large the input is. Corrupt or unreadable
members are skipped (with a logged warning and a counter bump), never fatal:
a multi-terabyte crawl must survive a few bad files.
"""

from __future__ import annotations

import bz2
import io
import json
import logging
import os
import re
import tarfile
from dataclasses import dataclass, fields
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterator

log = logging.getLogger(__name__)

_PLAIN_SUFFIXES = (".json", ".jsonl")
_TAR_SUFFIXES = (".tar", ".tar.gz", ".tgz", ".tar.bz2")

_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}
_CREATED_AT_RE = re.compile(
    r"^[A-Za-z]{3} (?P<mon>[A-Za-z]{3}) (?P<day>\d{2}) "
    r"(?P<h>\d{2}):(?P<m>\d{2}):(?P<s>\d{2}) "
    r"(?P<sign>[+-])(?P<oh>\d{2})(?P<om>\d{2}) (?P<year>\d{4})$"
)
_ANCHOR_RE = re.compile(r"<a\b[^>]*>(.*?)</a>", re.DOTALL)

# archive records older than Twitter itself or from the future are junk
MIN_YEAR = 2006
_MAX_YEAR = datetime.now(timezone.utc).year

# non-tweet stream messages that legitimately appear between tweets
_NOTICE_KEYS = (
    "delete",
    "status_withheld",
    "user_withheld",
    "limit",
    "scrub_geo",
    "disconnect",
    "warning",
    "event",
)


class TimestampFormatError(ValueError):
    pass


@dataclass
class IngestCounters:
    """Skip accounting; lines_read = records_parsed + notices_skipped + malformed_skipped."""

    lines_read: int = 0
    records_parsed: int = 0
    notices_skipped: int = 0
    malformed_skipped: int = 0
    members_corrupt: int = 0

    def merge(self, other: "IngestCounters") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class TweetRecord:
    id: int
    text: str
    language: str
    created_at: datetime
    year: int
    author_id: int
    source_tool: str
    retweet_of: int | None = None
    retweet_text: str | None = None

    def matched_text(self) -> str:
        """Text the labeller works on: the retweeted original when present.

        The outer text of a retweet is truncated by the platform, which
        silently drops trailing symbols.
        """
        return self.retweet_text if self.retweet_text is not None else self.text

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "language": self.language,
            "epoch": int(self.created_at.timestamp()),
            "year": self.year,
            "author_id": self.author_id,
            "source_tool": self.source_tool,
            "retweet_of": self.retweet_of,
            "retweet_text": self.retweet_text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TweetRecord":
        return cls(
            id=d["id"],
            text=d["text"],
            language=d["language"],
            created_at=datetime.fromtimestamp(d["epoch"], tz=timezone.utc),
            year=d["year"],
            author_id=d["author_id"],
            source_tool=d["source_tool"],
            retweet_of=d.get("retweet_of"),
            retweet_text=d.get("retweet_text"),
        )


@dataclass(frozen=True)
class MemberRef:
    """One independently openable archive member (a file, or a file inside a tar)."""

    container: Path
    inner: str | None
    codec: str  # "bz2" | "plain"

    @property
    def display_name(self) -> str:
        if self.inner is None:
            return str(self.container)
        return f"{self.container}::{self.inner}"


def _classify(name: str) -> tuple[str, str] | None:
    """Map a filename to ("tar"|"member", codec); None means skip."""
    lower = name.lower()
    if lower.endswith(_TAR_SUFFIXES):
        return ("tar", "")
    if lower.endswith(".bz2"):
        return ("member", "bz2")
    if lower.endswith(_PLAIN_SUFFIXES):
        return ("member", "plain")
    return None


def _tar_members(path: Path) -> list[MemberRef]:
    refs = []
    with tarfile.open(path, "r:*") as tf:
        for info in tf.getmembers():
            if not info.isfile():
                continue
            cls = _classify(info.name)
            if cls is None or cls[0] == "tar":
                continue
            refs.append(MemberRef(path, info.name, cls[1]))
    refs.sort(key=lambda r: r.inner or "")
    return refs


def list_members(path: str | Path) -> list[MemberRef]:
    """Enumerate archive members in deterministic (lexicographic path) order."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such archive: {p}")
    if p.is_dir():
        file_paths = sorted(
            Path(root, name)
            for root, _dirs, names in os.walk(p)
            for name in names
        )
    else:
        file_paths = [p]
    refs: list[MemberRef] = []
    for fp in file_paths:
        cls = _classify(fp.name)
        if cls is None:
            continue
        if cls[0] == "tar":
            refs.extend(_tar_members(fp))
        else:
            refs.append(MemberRef(fp, None, cls[1]))
    return refs


class _TarMemberStream:
    """Text stream over one tar member that closes the tarfile with itself."""

    def __init__(self, stream: io.TextIOWrapper, tar: tarfile.TarFile):
        self._stream = stream
        self._tar = tar

    def __iter__(self):
        return iter(self._stream)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        try:
            self._stream.close()
        finally:
            self._tar.close()


def open_member(ref: MemberRef):
    """Open one member as a text line stream (UTF-8, bad bytes replaced)."""
    if ref.inner is None:
        if ref.codec == "bz2":
            return bz2.open(ref.container, "rt", encoding="utf-8", errors="replace")
        return open(ref.container, "rt", encoding="utf-8", errors="replace")
    tar = tarfile.open(ref.container, "r:*")
    try:
        fobj = tar.extractfile(ref.inner)
        if fobj is None:
            raise OSError(f"cannot extract {ref.display_name}")
        raw = bz2.BZ2File(fobj) if ref.codec == "bz2" else fobj
        text = io.TextIOWrapper(raw, encoding="utf-8", errors="replace")
    except BaseException:
        tar.close()
        raise
    return _TarMemberStream(text, tar)


def read_member_lines(ref: MemberRef, counters: IngestCounters) -> Iterator[str]:
    """Lines of one member; a corrupt/unreadable member ends early, never raises."""
    try:
        stream = open_member(ref)
    except (OSError, EOFError, tarfile.TarError) as exc:
        log.warning("skipping unreadable member %s: %s", ref.display_name, exc)
        counters.members_corrupt += 1
        return
    with stream:
        try:
            for raw in stream:
                counters.lines_read += 1
                yield raw.rstrip("\r\n")
        except (OSError, EOFError) as exc:
            log.warning("corrupt data in %s: %s", ref.display_name, exc)
            counters.members_corrupt += 1


def open_archive(path: str | Path, counters: IngestCounters | None = None) -> Iterator[str]:
    """Stream decompressed lines of a file / tar / directory tree of archives.

    Member order is lexicographic by path, then line order, so two runs over
    the same archive always see the same sequence.
    """
    counters = counters if counters is not None else IngestCounters()
    for ref in list_members(path):
        yield from read_member_lines(ref, counters)


def parse_created_at(s: str) -> tuple[datetime, int]:
    """Parse the archive timestamp format ``Www Mmm DD HH:MM:SS +0000 YYYY``.

    Returns the UTC timestamp and its calendar year. Parsed by hand so the
    result cannot depend on the process locale.
    """
    m = _CREATED_AT_RE.match(s.strip())
    if m is None:
        raise TimestampFormatError(f"unparseable created_at: {s!r}")
    mon = _MONTHS.get(m.group("mon"))
    if mon is None:
        raise TimestampFormatError(f"unknown month in created_at: {s!r}")
    try:
        local = datetime(
            int(m.group("year")), mon, int(m.group("day")),
            int(m.group("h")), int(m.group("m")), int(m.group("s")),
            tzinfo=timezone.utc,
        )
    except ValueError as exc:
        raise TimestampFormatError(f"invalid date in created_at: {s!r}") from exc
    offset = timedelta(hours=int(m.group("oh")), minutes=int(m.group("om")))
    if m.group("sign") == "-":
        offset = -offset
    utc = local - offset
    return utc, utc.year


def parse_source(anchor: str) -> str:
    """Extract the display name from a source anchor tag.

    ``<a href="...">NAME</a>`` gives NAME with the ends trimmed; anything
    that is not an anchor passes through unchanged.
    """
    m = _ANCHOR_RE.search(anchor)
    if m is None:
        return anchor
    return m.group(1).strip()


def _fullest_text(obj: dict) -> str | None:
    ext = obj.get("extended_tweet")
    if isinstance(ext, dict) and isinstance(ext.get("full_text"), str):
        return ext["full_text"]
    if isinstance(obj.get("full_text"), str):
        return obj["full_text"]
    if isinstance(obj.get("text"), str):
        return obj["text"]
    return None


def _as_id(obj: dict, key: str = "id") -> int | None:
    value = obj.get(key)
    if value is None:
        value = obj.get(key + "_str")
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            return None
    return None


def parse_tweet(line: str, counters: IngestCounters | None = None) -> TweetRecord | None:
    """Turn one archive line into a TweetRecord, or None for anything else.

    Never raises: delete/withheld notices, blank lines, malformed JSON and
    records violating basic sanity (id > 0, plausible year, no self-retweet)
    all come back as None with the matching counter bumped.
    """
    counters = counters if counters is not None else IngestCounters()
    stripped = line.strip()
    if not stripped:
        counters.malformed_skipped += 1
        return None
    try:
        obj = json.loads(stripped)
    except ValueError:
        counters.malformed_skipped += 1
        return None
    if not isinstance(obj, dict):
        counters.malformed_skipped += 1
        return None

    text = _fullest_text(obj)
    if text is None or ("id" not in obj and "id_str" not in obj):
        if any(key in obj for key in _NOTICE_KEYS):
            counters.notices_skipped += 1
        else:
            counters.malformed_skipped += 1
        return None

    tweet_id = _as_id(obj)
    lang = obj.get("lang")
    created = obj.get("created_at")
    user = obj.get("user")
    source = obj.get("source")
    author_id = _as_id(user) if isinstance(user, dict) else None
    if (
        tweet_id is None
        or tweet_id <= 0
        or not isinstance(lang, str)
        or not isinstance(created, str)
        or author_id is None
        or author_id < 0
        or not isinstance(source, str)
    ):
        counters.malformed_skipped += 1
        return None
    try:
        timestamp, year = parse_created_at(created)
    except TimestampFormatError:
        counters.malformed_skipped += 1
        return None
    if not (MIN_YEAR <= year <= _MAX_YEAR):
        counters.malformed_skipped += 1
        return None

    retweet_of = None
    retweet_text = None
    rt = obj.get("retweeted_status")
    if isinstance(rt, dict):
        retweet_of = _as_id(rt)
        if retweet_of is not None:
            if retweet_of == tweet_id:
                counters.malformed_skipped += 1
                return None
            retweet_text = _fullest_text(rt)

    counters.records_parsed += 1
    return TweetRecord(
        id=tweet_id,
        text=text,
        language=lang,
        created_at=timestamp,
        year=year,
        author_id=author_id,
        source_tool=parse_source(source),
        retweet_of=retweet_of,
        retweet_text=retweet_text,
    )
