from pathlib import Path

import pytest

from plotkit.cli import main
from plotkit.figures import (
    EmptyDataError,
    FigureError,
    FigureSpec,
    MissingColumnError,
    render,
)

KIND_SHARE_CSV = """year,language,emoji_share,emoticon_share
2013,en,0.250000,0.750000
2014,en,0.400000,0.600000
2015,en,0.700000,0.300000
2013,es,0.100000,0.900000
2014,es,0.300000,0.650000
2015,es,0.550000,0.400000
"""

POLARITY_CSV = """year,language,ratio
2013,en,0.500000
2014,en,0.650000
2013,es,0.800000
2014,es,0.750000
"""

LENGTH_CSV = """language,length,count
en,10,4
en,30,25
en,140,90
es,30,11
es,140,40
"""


def write(tmp_path: Path, name: str, content: str) -> Path:
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


class TestRender:
    def test_kind_share_series_roundtrip(self, tmp_path):
        csv_path = write(tmp_path, "kind_share.csv", KIND_SHARE_CSV)
        out = tmp_path / "fig.png"
        series = render(FigureSpec("kind_share", csv_path, out))
        assert out.is_file() and out.stat().st_size > 0
        # 2 languages x (emoji + emoticon) = 4 series
        assert len(series) == 4
        assert series["en emoji"] == ([2013, 2014, 2015], [0.25, 0.4, 0.7])
        assert series["en emoticon"] == ([2013, 2014, 2015], [0.75, 0.6, 0.3])
        assert series["es emoji"] == ([2013, 2014, 2015], [0.1, 0.3, 0.55])

    def test_polarity_ratio_series_roundtrip(self, tmp_path):
        csv_path = write(tmp_path, "ratio.csv", POLARITY_CSV)
        out = tmp_path / "ratio.png"
        series = render(FigureSpec("polarity_ratio", csv_path, out))
        assert out.is_file()
        assert series == {
            "en": ([2013, 2014], [0.5, 0.65]),
            "es": ([2013, 2014], [0.8, 0.75]),
        }

    def test_length_hist_series_roundtrip(self, tmp_path):
        csv_path = write(tmp_path, "length.csv", LENGTH_CSV)
        out = tmp_path / "length.png"
        series = render(FigureSpec("length_hist", csv_path, out))
        assert out.is_file()
        assert series["en"] == ([10, 30, 140], [4, 25, 90])
        assert series["es"] == ([30, 140], [11, 40])

    def test_single_bucket_bar(self, tmp_path):
        csv_path = write(tmp_path, "one.csv", "language,length,count\nen,30,7\n")
        series = render(FigureSpec("length_hist", csv_path, tmp_path / "one.png"))
        assert series == {"en": ([30], [7])}

    def test_rerender_identical_series(self, tmp_path):
        csv_path = write(tmp_path, "kind_share.csv", KIND_SHARE_CSV)
        first = render(FigureSpec("kind_share", csv_path, tmp_path / "a.png"))
        second = render(FigureSpec("kind_share", csv_path, tmp_path / "b.png"))
        assert first == second

    def test_language_filter(self, tmp_path):
        csv_path = write(tmp_path, "kind_share.csv", KIND_SHARE_CSV)
        series = render(
            FigureSpec("kind_share", csv_path, tmp_path / "f.png", languages=("es",))
        )
        assert set(series) == {"es emoji", "es emoticon"}

    def test_missing_column_named(self, tmp_path):
        csv_path = write(tmp_path, "bad.csv", "language,emoji_share,emoticon_share\nen,0.1,0.2\n")
        with pytest.raises(MissingColumnError) as exc:
            render(FigureSpec("kind_share", csv_path, tmp_path / "x.png"))
        assert exc.value.column == "year"
        assert "year" in str(exc.value)

    def test_empty_csv(self, tmp_path):
        csv_path = write(tmp_path, "empty.csv", "year,language,ratio\n")
        with pytest.raises(EmptyDataError):
            render(FigureSpec("polarity_ratio", csv_path, tmp_path / "x.png"))

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(FigureError):
            FigureSpec("pie", tmp_path / "a.csv", tmp_path / "x.png")

    def test_svg_output(self, tmp_path):
        csv_path = write(tmp_path, "ratio.csv", POLARITY_CSV)
        out = tmp_path / "fig.svg"
        render(FigureSpec("polarity_ratio", csv_path, out))
        assert out.read_text().lstrip().startswith("<?xml")


def test_acceptance_all_kinds_roundtrip(tmp_path):
    """All three figure kinds render from fixture CSVs and the plotted
    series equal the input columns."""
    cases = [
        ("kind_share", KIND_SHARE_CSV, "en emoji", [0.25, 0.4, 0.7]),
        ("polarity_ratio", POLARITY_CSV, "en", [0.5, 0.65]),
        ("length_hist", LENGTH_CSV, "en", [4, 25, 90]),
    ]
    for kind, content, probe_series, expected_y in cases:
        csv_path = write(tmp_path, f"{kind}.csv", content)
        out = tmp_path / f"{kind}.png"
        series = render(FigureSpec(kind, csv_path, out))
        assert out.is_file() and out.stat().st_size > 0
        assert series[probe_series][1] == expected_y
    print("\nACCEPTANCE PASS: plotkit renders all three kinds, series match CSVs")


class TestCli:
    def test_ok(self, tmp_path, capsys):
        csv_path = write(tmp_path, "ratio.csv", POLARITY_CSV)
        out = tmp_path / "fig.png"
        rc = main(["--kind", "polarity_ratio", "--in", str(csv_path), "--out", str(out)])
        assert rc == 0
        assert out.is_file()
        assert "2 series" in capsys.readouterr().out

    def test_lang_filter(self, tmp_path, capsys):
        csv_path = write(tmp_path, "ratio.csv", POLARITY_CSV)
        out = tmp_path / "fig.png"
        rc = main(["--kind", "polarity_ratio", "--in", str(csv_path),
                   "--out", str(out), "--lang", "en"])
        assert rc == 0
        assert "1 series" in capsys.readouterr().out

    def test_bad_kind(self, tmp_path, capsys):
        rc = main(["--kind", "pie", "--in", "x.csv", "--out", "y.png"])
        assert rc == 1

    def test_missing_column_exit_code(self, tmp_path, capsys):
        csv_path = write(tmp_path, "bad.csv", "language,ratio\nen,0.5\n")
        rc = main(["--kind", "polarity_ratio", "--in", str(csv_path),
                   "--out", str(tmp_path / "x.png")])
        assert rc == 1
        assert "year" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        rc = main(["--kind", "polarity_ratio", "--in", str(tmp_path / "none.csv"),
                   "--out", str(tmp_path / "x.png")])
        assert rc == 2
