"""Compare distant labels against a manually annotated gold file.

The result is a 2x3 grid: distant labels (positive/negative) as rows, manual
labels (positive/neutral/negative) as columns. Gold tweets the distant method
never captured are reported as coverage, not as a matrix column. The noise
cells are the two polarity flips: distant-positive/manual-negative and
distant-negative/manual-positive.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

from .lexicon import NEGATIVE, POSITIVE

NEUTRAL = "neutral"
MANUAL_LABELS = (POSITIVE, NEUTRAL, NEGATIVE)
DISTANT_LABELS = (POSITIVE, NEGATIVE)


class LabelFileError(ValueError):
    def __init__(self, path: str | Path, line_no: int, message: str):
        super().__init__(f"{path}, line {line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


@dataclass
class ConfusionMatrix:
    cells: dict[tuple[str, str], int]
    coverage: int

    @classmethod
    def empty(cls) -> "ConfusionMatrix":
        return cls(
            cells={(d, m): 0 for d in DISTANT_LABELS for m in MANUAL_LABELS},
            coverage=0,
        )

    def row_sum(self, distant_label: str) -> int:
        return sum(self.cells[(distant_label, m)] for m in MANUAL_LABELS)

    @property
    def captured(self) -> int:
        return sum(self.cells.values())


@dataclass(frozen=True)
class MatrixSummary:
    captured: int
    coverage: int
    positive_row_total: int
    negative_row_total: int
    positive_noise: float
    negative_noise: float
    empty_rows: tuple[str, ...]  # rows whose noise fraction defaulted to 0

    def to_json_dict(self) -> dict:
        return {
            "captured": self.captured,
            "coverage": self.coverage,
            "positive_row_total": self.positive_row_total,
            "negative_row_total": self.negative_row_total,
            "positive_noise": self.positive_noise,
            "negative_noise": self.negative_noise,
            "empty_rows": list(self.empty_rows),
        }


def _load_label_file(path: str | Path, allowed: tuple[str, ...]) -> dict[int, str]:
    result: dict[int, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LabelFileError(
                    path, line_no, f"expected id<TAB>label, got {line!r}"
                )
            id_text, label = parts
            try:
                tweet_id = int(id_text)
            except ValueError:
                raise LabelFileError(path, line_no, f"bad tweet id {id_text!r}") from None
            if label not in allowed:
                raise LabelFileError(path, line_no, f"unknown label {label!r}")
            prev = result.get(tweet_id)
            if prev is not None and prev != label:
                raise LabelFileError(
                    path, line_no, f"id {tweet_id} already has label {prev!r}"
                )
            result[tweet_id] = label
    return result


def load_gold(path: str | Path) -> dict[int, str]:
    """Load a gold file of ``id<TAB>positive|neutral|negative`` lines.

    Duplicate ids with the same label collapse; conflicting labels raise.
    """
    return _load_label_file(path, MANUAL_LABELS)


def load_distant_labels(path: str | Path) -> dict[int, str]:
    """Load a distant labels file (``id<TAB>positive|negative``)."""
    return _load_label_file(path, DISTANT_LABELS)


def confusion_matrix(
    distant: Mapping[int, str], gold: Mapping[int, str]
) -> ConfusionMatrix:
    """Count (distant row, manual column) pairs over the shared ids.

    Gold ids the distant method did not label are counted as coverage;
    distant ids missing from gold are ignored.
    """
    matrix = ConfusionMatrix.empty()
    for tweet_id, manual in gold.items():
        d = distant.get(tweet_id)
        if d is None:
            matrix.coverage += 1
        else:
            matrix.cells[(d, manual)] += 1
    return matrix


def matrix_summary(m: ConfusionMatrix) -> MatrixSummary:
    """Per-row noise fractions plus capture totals.

    An empty row reports a noise fraction of 0 and is flagged.
    """
    pos_total = m.row_sum(POSITIVE)
    neg_total = m.row_sum(NEGATIVE)
    empty_rows = []
    if pos_total == 0:
        empty_rows.append(POSITIVE)
    if neg_total == 0:
        empty_rows.append(NEGATIVE)
    return MatrixSummary(
        captured=m.captured,
        coverage=m.coverage,
        positive_row_total=pos_total,
        negative_row_total=neg_total,
        positive_noise=m.cells[(POSITIVE, NEGATIVE)] / pos_total if pos_total else 0.0,
        negative_noise=m.cells[(NEGATIVE, POSITIVE)] / neg_total if neg_total else 0.0,
        empty_rows=tuple(empty_rows),
    )


def write_matrix_csv(m: ConfusionMatrix, f: IO[str]) -> None:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["distant\\manual"] + [f"manual_{label}" for label in MANUAL_LABELS])
    for d in DISTANT_LABELS:
        w.writerow([f"distant_{d}"] + [m.cells[(d, manual)] for manual in MANUAL_LABELS])
    w.writerow(["coverage", m.coverage, "", ""])


def write_summary_json(summary: MatrixSummary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary.to_json_dict(), f, sort_keys=True, indent=1)
        f.write("\n")
