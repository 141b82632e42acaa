"""Script entry point: qfp-plots --figure fig5 --input sweep.csv --output fig5.svg"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .io import SchemaError
from .render import FIGURES, render

EXIT_SCHEMA = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qfp-plots",
        description="Render photon-budget figures from qfp sweep CSVs",
    )
    parser.add_argument("--figure", choices=sorted(FIGURES), required=True)
    parser.add_argument("--input", required=True, help="CSV produced by qfp")
    parser.add_argument("--output", required=True, help="image path (.svg/.png/.pdf)")
    args = parser.parse_args(argv)
    try:
        render(args.figure, args.input, args.output)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
