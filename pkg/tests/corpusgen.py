"""Deterministic synthetic tweet-archive generator for tests.

Produces a directory of mixed members (bz2, plain jsonl, a tar of bz2) whose
lines cover the interesting cases: seven in-scope languages plus strays,
retweet chains with and without the original, mixed-polarity tweets, symbol
presentation variants (variation selectors, skin tones), delete notices,
malformed lines and exact duplicate deliveries.
"""

from __future__ import annotations

import bz2
import io
import json
import random
import tarfile
from pathlib import Path

DOW = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
MON = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
       "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")

LANGS = ["en"] * 5 + ["es", "es", "fr", "de", "it", "ar", "zh", "ru", "ja", "pt"]

WORDS = (
    "the show today was lovely und schrecklich muy bueno tres bien oggi "
    "niente جديد جميل 今天 不错 game night rain coffee code trains"
).split()

# symbols that exist in the bundled lexicon
POS_SYMBOLS = [":)", ":D", ";)", "<3", "8)", "\U0001F60D", "\U0001F60A",
               "\U0001F970", "\U0001F618", "\U0001F44D", "☺️",
               "\U0001F44D\U0001F3FD"]
NEG_SYMBOLS = [":(", ":/", "D:", ">.<", "\U0001F62D", "\U0001F613",
               "\U0001F644", "\U0001F61E", "☹️"]
# pictographs that are NOT in the lexicon (must not label)
STRAY_SYMBOLS = ["\U0001F480", "\U0001F355", "\U0001F697"]

SOURCES = [
    '<a href="http://twitter.com/download/iphone" rel="nofollow">Twitter for iPhone</a>',
    '<a href="http://twitter.com/download/android" rel="nofollow">Twitter for Android</a>',
    '<a href="http://twitter.com" rel="nofollow">Twitter Web Client</a>',
    "web",
    '<a href="http://example.org/bot">tiny bot</a>',
]


def fmt_created_at(rng: random.Random) -> str:
    year = rng.randint(2013, 2020)
    month = rng.randint(1, 12)
    day = rng.randint(1, 28)
    h, m, s = rng.randint(0, 23), rng.randint(0, 59), rng.randint(0, 59)
    # weekday name is decorative; parsers must not rely on it
    dow = DOW[rng.randrange(7)]
    return f"{dow} {MON[month - 1]} {day:02d} {h:02d}:{m:02d}:{s:02d} +0000 {year}"


def make_text(rng: random.Random, symbols: list[str]) -> str:
    words = rng.choices(WORDS, k=rng.randint(2, 10))
    for sym in symbols:
        style = rng.random()
        pos = rng.randint(0, len(words))
        is_emoji = any(ord(c) > 0x2000 for c in sym)
        if is_emoji and style < 0.4:
            # glue the emoji onto a word, no whitespace
            if words:
                idx = rng.randrange(len(words))
                words[idx] = words[idx] + sym if style < 0.2 else sym + words[idx]
            else:
                words.append(sym)
        else:
            words.insert(pos, sym)
    return " ".join(words)


def tweet_line(rng: random.Random, tweet_id: int, text: str, lang: str,
               created_at: str | None = None, author: int | None = None,
               source: str | None = None, retweet: dict | None = None,
               extended: bool = False) -> str:
    obj = {
        "id": tweet_id,
        "id_str": str(tweet_id),
        "text": text if not extended else text[:100],
        "lang": lang,
        "created_at": created_at or fmt_created_at(rng),
        "user": {"id": author if author is not None else rng.randint(1, 4000),
                 "screen_name": f"user{tweet_id % 97}"},
        "source": source or rng.choice(SOURCES),
    }
    if extended:
        obj["extended_tweet"] = {"full_text": text}
    if retweet is not None:
        obj["retweeted_status"] = retweet
    return json.dumps(obj, ensure_ascii=False)


def generate_corpus(root: Path, n_tweets: int = 10_000, seed: int = 20130102,
                    members: int = 8) -> dict:
    """Write a synthetic archive under ``root``; returns generation stats."""
    rng = random.Random(seed)
    root.mkdir(parents=True, exist_ok=True)
    buckets: list[list[str]] = [[] for _ in range(members)]
    stats = {"tweets": 0, "junk": 0, "chains": 0, "duplicates": 0}
    next_id = 1000

    def emit(line: str, bucket: int | None = None) -> None:
        b = bucket if bucket is not None else rng.randrange(members)
        buckets[b].append(line)

    def alloc(n: int = 1) -> int:
        nonlocal next_id
        next_id += rng.randint(1, 50)
        value = next_id
        next_id += n
        return value

    dup_pool: list[str] = []
    while stats["tweets"] < n_tweets:
        roll = rng.random()
        if roll < 0.04 and stats["tweets"] + 1 < n_tweets:
            # retweet chain; original present half the time
            stats["chains"] += 1
            original_id = alloc()
            original_author = rng.randint(1, 4000)
            lang = rng.choice(LANGS)
            n_syms = rng.randint(0, 2)
            polarity = rng.choice([POS_SYMBOLS, NEG_SYMBOLS])
            text = make_text(rng, rng.choices(polarity, k=n_syms))
            created = fmt_created_at(rng)
            original_obj = {
                "id": original_id,
                "text": text[:140],
                "full_text": text,
                "lang": lang,
                "created_at": created,
                "user": {"id": original_author},
                "source": rng.choice(SOURCES),
            }
            if rng.random() < 0.5:
                emit(json.dumps(original_obj, ensure_ascii=False))
                stats["tweets"] += 1
            n_retweets = rng.randint(1, 4)
            shared_ts = fmt_created_at(rng)
            for _ in range(n_retweets):
                if stats["tweets"] >= n_tweets:
                    break
                rt_id = alloc()
                outer = "RT @user%d: %s" % (original_author % 97, text)
                ts = shared_ts if rng.random() < 0.3 else fmt_created_at(rng)
                emit(tweet_line(rng, rt_id, outer[:140], lang, created_at=ts,
                                retweet=original_obj))
                stats["tweets"] += 1
        else:
            tweet_id = alloc()
            lang = rng.choice(LANGS)
            kind = rng.random()
            if kind < 0.30:
                symbols = rng.choices(POS_SYMBOLS, k=rng.randint(1, 3))
            elif kind < 0.55:
                symbols = rng.choices(NEG_SYMBOLS, k=rng.randint(1, 3))
            elif kind < 0.60:
                symbols = [rng.choice(POS_SYMBOLS), rng.choice(NEG_SYMBOLS)]
            elif kind < 0.65:
                symbols = rng.choices(STRAY_SYMBOLS, k=1)
            else:
                symbols = []
            text = make_text(rng, symbols)
            extended = len(text) > 100 and rng.random() < 0.5
            line = tweet_line(rng, tweet_id, text, lang, extended=extended)
            emit(line)
            stats["tweets"] += 1
            if rng.random() < 0.01:
                dup_pool.append(line)

        junk_roll = rng.random()
        if junk_roll < 0.03:
            emit(json.dumps({"delete": {"status": {"id": alloc(), "user_id": 1}}}))
            stats["junk"] += 1
        elif junk_roll < 0.04:
            emit(rng.choice(["{broken json", "", "[1, 2, 3]", '{"id": 77}']))
            stats["junk"] += 1
        elif junk_roll < 0.045:
            emit(json.dumps({"limit": {"track": rng.randint(1, 100)}}))
            stats["junk"] += 1

    for line in dup_pool:  # identical delivery in a second member
        emit(line)
        stats["duplicates"] += 1

    # members 0..N-3 as bz2, N-3 as plain jsonl, last two inside one tar
    for i, bucket in enumerate(buckets[: members - 3]):
        with bz2.open(root / f"m{i:02d}.json.bz2", "wt", encoding="utf-8") as f:
            f.write("\n".join(bucket) + "\n")
    (root / f"m{members - 3:02d}.jsonl").write_text(
        "\n".join(buckets[members - 3]) + "\n", encoding="utf-8"
    )
    with tarfile.open(root / "zz-batch.tar", "w") as tar:
        for j, bucket in enumerate(buckets[members - 2:]):
            payload = bz2.compress(("\n".join(bucket) + "\n").encode("utf-8"))
            info = tarfile.TarInfo(name=f"inner{j}.json.bz2")
            info.size = len(payload)
            tar.addfile(info, io.BytesIO(payload))
    return stats
