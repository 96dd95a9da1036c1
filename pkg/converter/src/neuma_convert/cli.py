"""Command line: ``neuma-convert SRC OUT [--subjects ...]``
or ``neuma-convert - OUT --synthetic N [--seed S]``."""

from __future__ import annotations

import argparse
import sys

from .convert import ConversionError, convert, synthesize


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neuma-convert",
        description="Convert release EEG files into a neutral segment "
                    "store ('-' as SRC with --synthetic emits a seeded "
                    "synthetic store instead).")
    parser.add_argument("src", help="source directory, or '-' with "
                                    "--synthetic")
    parser.add_argument("out", help="output store directory")
    parser.add_argument("--subjects", nargs="+", default=None,
                        help="restrict conversion to these subject ids")
    parser.add_argument("--synthetic", type=int, metavar="N", default=None,
                        help="emit N synthetic segments instead of reading "
                             "SRC")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for --synthetic")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.synthetic is not None:
            if args.subjects is not None:
                raise ConversionError(
                    "--subjects cannot be combined with --synthetic")
            manifest = synthesize(args.out, args.synthetic, args.seed)
        else:
            if args.src == "-":
                raise ConversionError(
                    "SRC '-' requires --synthetic N")
            manifest = convert(args.src, args.out, args.subjects)
    except (ConversionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    total_buy = sum(manifest.buy_counts.values())
    print(f"wrote {manifest.n_segments} segments "
          f"({total_buy} Buy) for {len(manifest.subjects)} subjects "
          f"to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
