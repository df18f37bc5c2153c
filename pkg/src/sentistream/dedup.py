"""Collapse textual duplicates created by retweet chains.

Every retweet of an original shares a content key with it (the original's id);
per key we keep the original when present, otherwise the earliest retweet,
breaking timestamp ties by the smaller id. A second, opt-in mode keys on a
hash of the normalised text instead, which also folds coincidental repeats.

The survivor scan runs over an externally sorted stream: records spill to
sorted run files once an in-memory budget is hit, and a heap merge reads them
back, so inputs far larger than memory are fine. Results are invariant under
any permutation or partitioning of the input.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .labeller import LabelledTweet

RETWEET_LINK = "retweet_link"
TEXT_HASH = "text_hash"
MODES = (RETWEET_LINK, TEXT_HASH)

DEFAULT_RUN_SIZE = 50_000

_RT_PREFIX_RE = re.compile(r"^rt\s+@\w+:\s*")

SortKey = Callable[[LabelledTweet], tuple]


def content_key(t: LabelledTweet, mode: str = RETWEET_LINK) -> int:
    """Identity under which duplicates collapse.

    retweet_link: the original tweet's id when this is a retweet, else own id.
    text_hash: 128-bit hash of the stripped text, lowercased, with any legacy
    "RT @user:" prefix removed.
    """
    if mode == RETWEET_LINK:
        rec = t.record
        return rec.retweet_of if rec.retweet_of is not None else rec.id
    if mode == TEXT_HASH:
        normalized = _RT_PREFIX_RE.sub("", t.stripped_text.lower())
        digest = hashlib.md5(normalized.encode("utf-8")).digest()
        return int.from_bytes(digest, "big")
    raise ValueError(f"unknown dedup mode {mode!r}")


def sort_key(t: LabelledTweet, mode: str = RETWEET_LINK) -> tuple[int, int, int, int]:
    """Total order whose first record per key is the survivor."""
    rec = t.record
    return (
        content_key(t, mode),
        0 if rec.retweet_of is None else 1,
        int(rec.created_at.timestamp()),
        rec.id,
    )


def id_key(t: LabelledTweet) -> tuple[int]:
    """Sort key for the final output ordering (ascending tweet id)."""
    return (t.record.id,)


class RunWriter:
    """Accumulates records and spills them as sorted run files.

    Records are serialized immediately, so the buffer holds (key, json line)
    pairs rather than live objects. By default the writer owns a lazily
    created temp directory and deletes it on close; with ``own_dir=False``
    runs land directly in ``spill_dir`` (under unique names) and survive the
    writer, which lets worker processes hand their runs to a coordinator.
    """

    def __init__(
        self,
        key: SortKey,
        run_size: int = DEFAULT_RUN_SIZE,
        spill_dir: str | Path | None = None,
        own_dir: bool = True,
    ):
        if run_size < 1:
            raise ValueError("run_size must be >= 1")
        if not own_dir and spill_dir is None:
            raise ValueError("own_dir=False requires a spill_dir")
        self.key = key
        self.run_size = run_size
        self.spill_dir = Path(spill_dir) if spill_dir is not None else None
        self.own_dir = own_dir
        self.run_paths: list[Path] = []
        self._buffer: list[tuple[tuple, str]] = []
        self._tmpdir: tempfile.TemporaryDirectory | None = None

    def _run_dir(self) -> Path:
        if not self.own_dir:
            return self.spill_dir
        if self._tmpdir is None:
            if self.spill_dir is not None:
                self.spill_dir.mkdir(parents=True, exist_ok=True)
            self._tmpdir = tempfile.TemporaryDirectory(
                prefix="extsort-", dir=self.spill_dir
            )
        return Path(self._tmpdir.name)

    def add(self, t: LabelledTweet) -> None:
        key = tuple(self.key(t))
        line = json.dumps([list(key), t.to_dict()], ensure_ascii=False)
        self._buffer.append((key, line))
        if len(self._buffer) >= self.run_size:
            self.flush()

    def flush(self) -> None:
        if not self._buffer:
            return
        self._buffer.sort(key=lambda kv: kv[0])
        fd, name = tempfile.mkstemp(suffix=".run.jsonl", dir=self._run_dir())
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            for _, line in self._buffer:
                f.write(line)
                f.write("\n")
        self.run_paths.append(Path(name))
        self._buffer.clear()

    def sorted_stream(self) -> Iterator[LabelledTweet]:
        """Merged, fully sorted stream of everything added so far."""
        self._buffer.sort(key=lambda kv: kv[0])
        yield from merge_runs(self.run_paths, extra=iter(self._buffer))

    def close(self) -> None:
        self._buffer.clear()
        self.run_paths.clear()
        if self._tmpdir is not None:
            self._tmpdir.cleanup()
            self._tmpdir = None


def _iter_run(path: Path) -> Iterator[tuple[tuple, str]]:
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            key, _ = json.loads(line)
            yield tuple(key), line


def merge_runs(
    run_paths: Iterable[str | Path],
    extra: Iterable[tuple[tuple, str]] | None = None,
) -> Iterator[LabelledTweet]:
    """Heap-merge sorted run files (plus an optional pre-sorted iterable)."""
    streams = [_iter_run(Path(p)) for p in run_paths]
    if extra is not None:
        streams.append(iter(extra))
    for _key, line in heapq.merge(*streams, key=lambda kv: kv[0]):
        _, payload = json.loads(line)
        yield LabelledTweet.from_dict(payload)


def first_per_key(
    sorted_stream: Iterable[LabelledTweet], mode: str = RETWEET_LINK
) -> Iterator[LabelledTweet]:
    """Keep the first record of each key group of an already sorted stream."""
    current = object()
    for t in sorted_stream:
        key = content_key(t, mode)
        if key != current:
            current = key
            yield t


def deduplicate(
    input_stream: Iterable[LabelledTweet],
    mode: str = RETWEET_LINK,
    run_size: int = DEFAULT_RUN_SIZE,
    spill_dir: str | Path | None = None,
) -> Iterator[LabelledTweet]:
    """One survivor per content key, in ascending key order.

    Spills sorted runs beyond ``run_size`` records; an unwritable spill
    directory aborts the run with the underlying OSError.
    """
    if mode not in MODES:
        raise ValueError(f"unknown dedup mode {mode!r}")
    writer = RunWriter(
        key=lambda t: sort_key(t, mode), run_size=run_size, spill_dir=spill_dir
    )
    try:
        for t in input_stream:
            writer.add(t)
        yield from first_per_key(writer.sorted_stream(), mode)
    finally:
        writer.close()
