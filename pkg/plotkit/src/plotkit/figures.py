"""Render figures from stats CSVs: length histograms, emoji-vs-emoticon
share over time, and the negative/positive ratio over time.

Each renderer draws one line (or bar) series per language and returns the
exact x/y values it plotted, so callers can verify the figure against the
CSV without decoding the image.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from matplotlib.figure import Figure
from matplotlib.ticker import MaxNLocator, PercentFormatter

KINDS = ("length_hist", "kind_share", "polarity_ratio")

REQUIRED_COLUMNS = {
    "length_hist": ("language", "length", "count"),
    "kind_share": ("year", "language", "emoji_share", "emoticon_share"),
    "polarity_ratio": ("year", "language", "ratio"),
}


class FigureError(ValueError):
    pass


class MissingColumnError(FigureError):
    def __init__(self, column: str):
        super().__init__(f"missing required column: {column}")
        self.column = column


class EmptyDataError(FigureError):
    def __init__(self, path):
        super().__init__(f"no data rows in {path}")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: Path
    output_image: Path
    languages: tuple[str, ...] = ()  # empty means all languages in the CSV

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")


def _read_rows(spec: FigureSpec) -> list[dict]:
    required = REQUIRED_COLUMNS[spec.kind]
    with open(spec.input_csv, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingColumnError(column)
        rows = list(reader)
    if spec.languages:
        rows = [r for r in rows if r["language"] in spec.languages]
    if not rows:
        raise EmptyDataError(spec.input_csv)
    return rows


def _languages(rows: list[dict]) -> list[str]:
    return sorted({r["language"] for r in rows})


def render(spec: FigureSpec) -> dict[str, tuple[list, list]]:
    """Write the figure image and return the plotted series.

    The returned mapping goes from series name to the (x, y) value lists
    exactly as drawn; re-rendering the same CSV returns equal series.
    """
    rows = _read_rows(spec)
    fig = Figure(figsize=(8, 4.5))
    ax = fig.subplots()
    series: dict[str, tuple[list, list]] = {}

    if spec.kind == "length_hist":
        for lang in _languages(rows):
            points = sorted(
                (int(r["length"]), int(r["count"]))
                for r in rows
                if r["language"] == lang
            )
            xs = [p[0] for p in points]
            ys = [p[1] for p in points]
            if len(xs) == 1:
                ax.bar(xs, ys, label=lang)
            else:
                ax.plot(xs, ys, label=lang)
            series[lang] = (xs, ys)
        ax.set_xlabel("tweet length (codepoints)")
        ax.set_ylabel("tweet count")
        ax.set_title("Tweet count by length")

    elif spec.kind == "kind_share":
        for lang in _languages(rows):
            points = sorted(
                (int(r["year"]), float(r["emoji_share"]), float(r["emoticon_share"]))
                for r in rows
                if r["language"] == lang
            )
            xs = [p[0] for p in points]
            emoji_ys = [p[1] for p in points]
            emoticon_ys = [p[2] for p in points]
            ax.plot(xs, emoji_ys, label=f"{lang} emoji")
            ax.plot(xs, emoticon_ys, linestyle="--", label=f"{lang} emoticon")
            series[f"{lang} emoji"] = (xs, emoji_ys)
            series[f"{lang} emoticon"] = (xs, emoticon_ys)
        ax.set_xlabel("year")
        ax.set_ylabel("share of labelled tweets")
        ax.yaxis.set_major_formatter(PercentFormatter(xmax=1.0))
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_title("Emoji vs emoticon usage over time")

    else:  # polarity_ratio
        for lang in _languages(rows):
            points = sorted(
                (int(r["year"]), float(r["ratio"])) for r in rows if r["language"] == lang
            )
            xs = [p[0] for p in points]
            ys = [p[1] for p in points]
            ax.plot(xs, ys, marker="o", label=lang)
            series[lang] = (xs, ys)
        ax.set_xlabel("year")
        ax.set_ylabel("negative / positive ratio")
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_title("Negative vs positive tweets over time")

    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    spec.output_image.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output_image)
    return series
