"""Curated emoticon/emoji sentiment lexicon: loading, validation and token matching.

The lexicon is a plain UTF-8 text file with one ``glyph<TAB>kind<TAB>polarity``
entry per line (``#`` starts a comment). Glyphs are stored canonical, i.e.
without variation selectors or skin-tone modifiers; :func:`canonicalize_glyph`
applies the same normalisation to incoming tokens so that presentation
variants of the same symbol all match one entry.

Matching rules differ by kind: emoticons only match a whole token (the
negative list contains ``:/``, which would otherwise fire on every URL),
while emojis also match inside a token because they routinely adjoin words
without whitespace. The in-token rule can be switched off.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator

EMOTICON = "emoticon"
EMOJI = "emoji"
POSITIVE = "positive"
NEGATIVE = "negative"

KINDS = (EMOTICON, EMOJI)
POLARITIES = (POSITIVE, NEGATIVE)

# canonical composition of the bundled lexicon
CANONICAL_TOTALS = {
    (EMOTICON, POSITIVE): 41,
    (EMOTICON, NEGATIVE): 37,
    (EMOJI, POSITIVE): 29,
    (EMOJI, NEGATIVE): 33,
}

# variation selectors and the five skin-tone modifiers
_STRIP_TABLE = {cp: None for cp in (0xFE0E, 0xFE0F)}
_STRIP_TABLE.update({cp: None for cp in range(0x1F3FB, 0x1F400)})

_WHITESPACE_RE = re.compile(r"\s")


class LexiconError(ValueError):
    """Base class for lexicon file problems."""


class LexiconParseError(LexiconError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LexiconConflictError(LexiconError):
    def __init__(self, glyph: str):
        super().__init__(f"glyph {glyph!r} appears with both polarities")
        self.glyph = glyph


@dataclass(frozen=True)
class SentimentSymbol:
    glyph: str
    kind: str
    polarity: str


@dataclass(frozen=True)
class ValidationReport:
    """Problems found in a lexicon; an empty issue list means valid."""

    issues: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return not self.issues

    @property
    def ok(self) -> bool:
        return not self.issues


def canonicalize_glyph(raw: str) -> str:
    """Strip variation selectors (U+FE0E/U+FE0F) and skin-tone modifiers.

    Idempotent; pure-ASCII input comes back unchanged.
    """
    if raw.isascii():  # the stripped codepoints are all non-ASCII
        return raw
    return raw.translate(_STRIP_TABLE)


class Lexicon:
    """Immutable set of sentiment symbols with a canonical-glyph index.

    Safe for concurrent reads once constructed.
    """

    def __init__(self, symbols: Iterable[SentimentSymbol]):
        seen: dict[tuple[str, str, str], SentimentSymbol] = {}
        for sym in symbols:
            seen.setdefault((sym.glyph, sym.kind, sym.polarity), sym)
        self.symbols: tuple[SentimentSymbol, ...] = tuple(
            sorted(seen.values(), key=lambda s: (s.glyph, s.kind, s.polarity))
        )
        self.index: dict[str, SentimentSymbol] = {}
        for sym in self.symbols:
            self.index.setdefault(sym.glyph, sym)
        emoji_glyphs = [s.glyph for s in self.symbols if s.kind == EMOJI]
        # longest alternative first so the leftmost match is also the longest
        emoji_glyphs.sort(key=lambda g: (-len(g), g))
        self.emoji_pattern: re.Pattern | None = (
            re.compile("|".join(re.escape(g) for g in emoji_glyphs))
            if emoji_glyphs
            else None
        )
        # pure-ASCII tokens can skip the emoji scan entirely unless some
        # (non-canonical) lexicon declares an ASCII glyph as an emoji
        self.emoji_needs_ascii_scan: bool = any(g.isascii() for g in emoji_glyphs)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[SentimentSymbol]:
        return iter(self.symbols)

    def count(self, kind: str, polarity: str) -> int:
        return sum(1 for s in self.symbols if s.kind == kind and s.polarity == polarity)

    def emoji_occurrences(self, canonical_token: str) -> Iterator[SentimentSymbol]:
        """Every emoji occurrence inside an already-canonicalized token, left to right."""
        if self.emoji_pattern is None:
            return
        if canonical_token.isascii() and not self.emoji_needs_ascii_scan:
            return
        for m in self.emoji_pattern.finditer(canonical_token):
            yield self.index[m.group()]


def bundled_lexicon_path() -> Path:
    """Filesystem path of the lexicon file shipped with the package."""
    return Path(str(resources.files("sentistream") / "data" / "symbols.tsv"))


def load_lexicon(source: str | Path | IO[str]) -> Lexicon:
    """Parse a lexicon file; input line order does not affect the result.

    Raises :class:`LexiconParseError` on malformed lines and
    :class:`LexiconConflictError` when one glyph carries both polarities.
    Exact duplicate entries collapse silently.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = Path(source).read_text(encoding="utf-8").splitlines()

    by_glyph: dict[str, SentimentSymbol] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconParseError(
                f"expected 3 tab-separated fields, got {len(parts)}", line_no
            )
        glyph_raw, kind, polarity = parts
        glyph = canonicalize_glyph(glyph_raw)
        if not glyph:
            raise LexiconParseError("empty glyph", line_no)
        if kind not in KINDS:
            raise LexiconParseError(f"unknown kind {kind!r}", line_no)
        if polarity not in POLARITIES:
            raise LexiconParseError(f"unknown polarity {polarity!r}", line_no)
        sym = SentimentSymbol(glyph, kind, polarity)
        prev = by_glyph.get(glyph)
        if prev is not None and prev.polarity != sym.polarity:
            raise LexiconConflictError(glyph)
        if prev is not None and prev.kind != sym.kind:
            raise LexiconParseError(
                f"glyph {glyph!r} already declared with kind {prev.kind!r}", line_no
            )
        by_glyph[glyph] = sym
    return Lexicon(by_glyph.values())


def load_bundled_lexicon() -> Lexicon:
    return load_lexicon(bundled_lexicon_path())


def validate_lexicon(lex: Lexicon, expect_canonical_counts: bool = False) -> ValidationReport:
    """Report disjointness violations, whitespace glyphs and count deviations.

    Problems are reported, never raised; an empty report means the lexicon
    is valid. Canonical counts are only checked when asked for, so
    user-supplied lexicons are held to disjointness alone.
    """
    issues: list[str] = []
    polarities_of: dict[str, set[str]] = {}
    for sym in lex.symbols:
        polarities_of.setdefault(sym.glyph, set()).add(sym.polarity)
    for glyph in sorted(polarities_of):
        if len(polarities_of[glyph]) > 1:
            issues.append(f"glyph {glyph!r} appears with both polarities")
    for sym in lex.symbols:
        if _WHITESPACE_RE.search(sym.glyph):
            issues.append(f"glyph {sym.glyph!r} contains whitespace")
    if expect_canonical_counts:
        for (kind, polarity), want in CANONICAL_TOTALS.items():
            got = lex.count(kind, polarity)
            if got != want:
                issues.append(
                    f"expected {want} {polarity} {kind} entries, found {got}"
                )
    return ValidationReport(tuple(issues))


def classify_token(
    lex: Lexicon, token: str, emoji_in_token: bool = True
) -> SentimentSymbol | None:
    """Match a single whitespace-free token against the lexicon.

    Emoticons require the whole (canonicalized) token to equal the glyph;
    emojis also match inside the token when ``emoji_in_token`` is on. When
    several symbols occur, the first by codepoint position wins.
    """
    canonical = canonicalize_glyph(token)
    exact = lex.index.get(canonical)
    if exact is not None:
        return exact
    if emoji_in_token:
        for sym in lex.emoji_occurrences(canonical):
            return sym
    return None
