"""Command line entry point: ``pairdiff --input data.csv --mode unit-interval``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PairDiffError
from .report import RunConfig, render_report, run_suite
from .sample import Kind

MODES = {k.value: k for k in Kind}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pairdiff",
        description="Paired-difference back-tests of predictions against observations.",
    )
    p.add_argument("--input", required=True, help="CSV file with columns obs, pred and raw.w")
    p.add_argument("--mode", choices=sorted(MODES), default="unit-interval")
    p.add_argument("--seed", type=int, default=23)
    p.add_argument("--iterations", type=int, default=999, help="bootstrap replications R")
    p.add_argument("--v", type=float, default=None, help="fixed dispersion instead of the estimate")
    p.add_argument(
        "--weights",
        default="both",
        help="'both' (equal and raw.w weights), 'equal', or the name of the raw weight column",
    )
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--timestamp", default=None, help="fixed header timestamp for reproducible output")
    p.add_argument("--workers", type=int, default=1, help="threads for bootstrap replicates")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            input_path=args.input,
            mode=MODES[args.mode],
            seed=args.seed,
            iterations=args.iterations,
            v_override=args.v,
            weight_source=args.weights,
            timestamp=args.timestamp,
            workers=args.workers,
        )
        text = render_report(run_suite(cfg))
    except (PairDiffError, OSError, ValueError) as exc:
        print(f"pairdiff: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
