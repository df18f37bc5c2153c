from datetime import datetime, timezone
from pathlib import Path

import pytest

from sentistream.ingest import TweetRecord
from sentistream.labeller import LabelledTweet, label_tweet
from sentistream.lexicon import Lexicon, SentimentSymbol, load_bundled_lexicon


@pytest.fixture(scope="session")
def bundled_lex() -> Lexicon:
    return load_bundled_lexicon()


@pytest.fixture
def tiny_lex() -> Lexicon:
    return Lexicon(
        [
            SentimentSymbol(":)", "emoticon", "positive"),
            SentimentSymbol(":D", "emoticon", "positive"),
            SentimentSymbol(":(", "emoticon", "negative"),
            SentimentSymbol(":/", "emoticon", "negative"),
            SentimentSymbol("\U0001F60D", "emoji", "positive"),
            SentimentSymbol("\U0001F62D", "emoji", "negative"),
        ]
    )


def make_record(
    tweet_id=1,
    text="hello :)",
    language="en",
    when="2015-06-01T12:00:00",
    author_id=100,
    source_tool="web",
    retweet_of=None,
    retweet_text=None,
) -> TweetRecord:
    created = datetime.fromisoformat(when).replace(tzinfo=timezone.utc)
    return TweetRecord(
        id=tweet_id,
        text=text,
        language=language,
        created_at=created,
        year=created.year,
        author_id=author_id,
        source_tool=source_tool,
        retweet_of=retweet_of,
        retweet_text=retweet_text,
    )


def make_labelled(lex, **kwargs) -> LabelledTweet:
    rec = make_record(**kwargs)
    labelled = label_tweet(rec, lex)
    assert labelled is not None, f"fixture tweet did not label: {kwargs!r}"
    return labelled


@pytest.fixture
def lexicon_file(tmp_path) -> Path:
    path = tmp_path / "lex.tsv"
    path.write_text(
        ":)\temoticon\tpositive\n:(\temoticon\tnegative\n", encoding="utf-8"
    )
    return path
