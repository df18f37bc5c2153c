"""Distantly supervised sentiment datasets from streamed tweet archives.

The pipeline: stream newline-delimited JSON out of bz2/tar archives, match a
curated emoticon/emoji lexicon against each tweet, keep tweets whose symbols
agree on one polarity, collapse retweet duplicates, and accumulate the
longitudinal statistics (yearly counts, emoji-vs-emoticon share, top symbols,
length histograms, author/source tallies). A validation step compares the
distant labels against manually annotated gold labels.
"""

from .analytics import (
    StatsBundle,
    UndefinedCellError,
    accumulate,
    load_stats_json,
    merge,
    query_kind_share,
    query_length_histogram,
    query_platform_top_symbols,
    query_polarity_ratio,
    query_top_symbols,
    query_user_source_stats,
    query_yearly_counts,
)
from .dedup import RETWEET_LINK, TEXT_HASH, content_key, deduplicate
from .ingest import (
    IngestCounters,
    TweetRecord,
    open_archive,
    parse_created_at,
    parse_source,
    parse_tweet,
)
from .labeller import (
    DEFAULT_LANGUAGES,
    LabelledTweet,
    MatchResult,
    label_tweet,
    match_symbols,
    strip_symbols,
    tokenize,
)
from .lexicon import (
    EMOJI,
    EMOTICON,
    NEGATIVE,
    POSITIVE,
    Lexicon,
    SentimentSymbol,
    canonicalize_glyph,
    classify_token,
    load_bundled_lexicon,
    load_lexicon,
    validate_lexicon,
)
from .pipeline import RunConfig, run_build
from .validation import ConfusionMatrix, confusion_matrix, load_gold, matrix_summary

__version__ = "0.1.0"
