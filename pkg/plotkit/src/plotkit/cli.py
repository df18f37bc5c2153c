"""Standalone figure renderer: ``render --kind <k> --in <csv> --out <img>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import KINDS, FigureError, FigureSpec, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a sentiment stats CSV as a figure."
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_image", required=True)
    parser.add_argument("--lang", action="append", default=None,
                        help="restrict to a language (repeatable)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    spec = FigureSpec(
        kind=args.kind,
        input_csv=Path(args.input_csv),
        output_image=Path(args.output_image),
        languages=tuple(args.lang) if args.lang else (),
    )
    try:
        series = render(spec)
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {spec.output_image} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
