"""Tokenize tweets, match lexicon symbols and assign polarity labels.

A tweet is labelled when all its symbol matches share one polarity and there
are at least ``min_matches`` of them; tweets matching both polarities are
dropped as ambiguous. The matched symbols are stripped from the text so the
remaining words can serve as training input without leaking the label.

Everything here is a pure function over immutable inputs and safe to run on
any number of parallel workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .ingest import TweetRecord
from .lexicon import (
    EMOJI,
    EMOTICON,
    NEGATIVE,
    POSITIVE,
    Lexicon,
    canonicalize_glyph,
)

# the seven language codes the default pipeline keeps
DEFAULT_LANGUAGES = frozenset({"ar", "de", "en", "es", "fr", "it", "zh"})

# split on space, tab, CR and LF only; other Unicode whitespace stays in-token
_SPLIT_RE = re.compile(r"[ \t\r\n]+")


class Hit(NamedTuple):
    glyph: str
    kind: str


@dataclass(frozen=True)
class MatchResult:
    positive_hits: tuple[Hit, ...] = ()
    negative_hits: tuple[Hit, ...] = ()

    @property
    def mixed(self) -> bool:
        return bool(self.positive_hits) and bool(self.negative_hits)

    @property
    def total(self) -> int:
        return len(self.positive_hits) + len(self.negative_hits)

    def to_dict(self) -> dict:
        return {
            "positive": [list(h) for h in self.positive_hits],
            "negative": [list(h) for h in self.negative_hits],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatchResult":
        return cls(
            positive_hits=tuple(Hit(*h) for h in d["positive"]),
            negative_hits=tuple(Hit(*h) for h in d["negative"]),
        )


@dataclass
class LabelledTweet:
    record: TweetRecord
    label: str
    hits: MatchResult
    stripped_text: str

    def to_dict(self) -> dict:
        return {
            "record": self.record.to_dict(),
            "label": self.label,
            "hits": self.hits.to_dict(),
            "stripped_text": self.stripped_text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabelledTweet":
        return cls(
            record=TweetRecord.from_dict(d["record"]),
            label=d["label"],
            hits=MatchResult.from_dict(d["hits"]),
            stripped_text=d["stripped_text"],
        )


@dataclass
class LabelCounters:
    labelled: int = 0
    omitted_language: int = 0
    omitted_mixed: int = 0
    omitted_below_min: int = 0

    def merge(self, other: "LabelCounters") -> None:
        self.labelled += other.labelled
        self.omitted_language += other.omitted_language
        self.omitted_mixed += other.omitted_mixed
        self.omitted_below_min += other.omitted_below_min

    def as_dict(self) -> dict[str, int]:
        return {
            "labelled": self.labelled,
            "omitted_language": self.omitted_language,
            "omitted_mixed_polarity": self.omitted_mixed,
            "omitted_below_min_matches": self.omitted_below_min,
        }


def tokenize(text: str) -> list[str]:
    """Split on runs of space/tab/CR/LF, dropping empty tokens."""
    return [t for t in _SPLIT_RE.split(text) if t]


def match_symbols(tokens: list[str], lex: Lexicon, emoji_in_token: bool = True) -> MatchResult:
    """Collect every symbol occurrence in the token list, one hit per occurrence.

    Emoticons must equal a whole token; emojis are also found inside tokens
    (unless switched off), and repeated glyphs count once per occurrence so
    frequency analytics stay truthful.
    """
    positive: list[Hit] = []
    negative: list[Hit] = []
    index_get = lex.index.get
    emoji_pattern = lex.emoji_pattern
    # when no emoji glyph is ASCII (always true for the canonical lexicon),
    # an ASCII token reduces to a single dict probe for an emoticon
    fast_ascii = not lex.emoji_needs_ascii_scan
    for token in tokens:
        if fast_ascii and token.isascii():
            exact = index_get(token)
            if exact is not None:
                hit = Hit(exact.glyph, exact.kind)
                (positive if exact.polarity == POSITIVE else negative).append(hit)
            continue
        canonical = canonicalize_glyph(token)
        exact = index_get(canonical)
        if exact is not None and exact.kind == EMOTICON:
            hit = Hit(exact.glyph, exact.kind)
            (positive if exact.polarity == POSITIVE else negative).append(hit)
        if emoji_in_token:
            if emoji_pattern is not None:
                for m in emoji_pattern.finditer(canonical):
                    sym = lex.index[m.group()]
                    hit = Hit(sym.glyph, sym.kind)
                    (positive if sym.polarity == POSITIVE else negative).append(hit)
        elif exact is not None and exact.kind == EMOJI:
            hit = Hit(exact.glyph, exact.kind)
            (positive if exact.polarity == POSITIVE else negative).append(hit)
    return MatchResult(tuple(positive), tuple(negative))


def _strip_tokens(tokens: list[str], hits: MatchResult) -> tuple[list[str], bool]:
    """Tokens with matched symbols removed, plus a partial-excision flag.

    The flag is True when some token was modified in place rather than
    dropped whole; only then can stripping expose a new exact-token match.
    """
    all_hits = hits.positive_hits + hits.negative_hits
    emoticon_glyphs = {h.glyph for h in all_hits if h.kind == EMOTICON}
    emoji_glyphs = sorted(
        {h.glyph for h in all_hits if h.kind == EMOJI}, key=lambda g: (-len(g), g)
    )
    ascii_risk = any(g.isascii() for g in emoji_glyphs)  # pathological lexicons only
    out: list[str] = []
    partial = False
    for token in tokens:
        ascii_token = token.isascii()
        if ascii_token and not emoticon_glyphs and not ascii_risk:
            out.append(token)
            continue
        canonical = token if ascii_token else canonicalize_glyph(token)
        if canonical in emoticon_glyphs:
            continue
        if (not ascii_token or ascii_risk) and any(g in canonical for g in emoji_glyphs):
            remainder = canonical
            for g in emoji_glyphs:
                while g in remainder:  # excision can re-join the glyph's codepoints
                    remainder = remainder.replace(g, "")
            if remainder:
                out.append(remainder)
                partial = True
        else:
            out.append(token)
    return out, partial


def strip_symbols(text: str, hits: MatchResult) -> str:
    """Remove matched symbols from the text.

    Matched emoticon tokens disappear entirely; matched emoji occurrences are
    excised in place. Whitespace runs collapse to single spaces and the ends
    are trimmed.
    """
    out, _ = _strip_tokens(tokenize(text), hits)
    return " ".join(out)


def label_tweet(
    rec: TweetRecord,
    lex: Lexicon,
    min_matches: int = 1,
    languages: frozenset[str] = DEFAULT_LANGUAGES,
    emoji_in_token: bool = True,
    counters: LabelCounters | None = None,
) -> LabelledTweet | None:
    """Label one tweet, or return None when it falls outside the sample.

    Dropped: wrong language, mixed polarity, fewer pure-polarity matches than
    ``min_matches``. Retweets are matched on the embedded original text.
    """
    if rec.language not in languages:
        if counters:
            counters.omitted_language += 1
        return None
    text = rec.matched_text()
    tokens = tokenize(text)
    hits = match_symbols(tokens, lex, emoji_in_token)
    if hits.mixed:
        if counters:
            counters.omitted_mixed += 1
        return None
    if hits.total < min_matches:
        if counters:
            counters.omitted_below_min += 1
        return None
    label = POSITIVE if hits.positive_hits else NEGATIVE

    # Excising an emoji can expose a new exact-token match ("x😭:)" leaves
    # ":)" as a token), so re-strip until nothing matches. Dropping whole
    # tokens never exposes anything, hence the partial flag.
    out_tokens, partial = _strip_tokens(tokens, hits)
    while partial:
        residual = match_symbols(out_tokens, lex, emoji_in_token)
        if not residual.positive_hits and not residual.negative_hits:
            break
        out_tokens, partial = _strip_tokens(out_tokens, residual)
    stripped = " ".join(out_tokens)

    if counters:
        counters.labelled += 1
    return LabelledTweet(record=rec, label=label, hits=hits, stripped_text=stripped)
