"""Command-line entry point: ``phonophot <scenario> --config FILE [options]``.

Exit codes: 0 success, 1 an oracle check failed, 2 bad configuration,
3 numeric failure.
"""

import argparse
import os
import sys

from .config import KINDS, parse_config
from .errors import ConfigError, NumericFailure, StabilityError
from .report import emit

EXIT_OK, EXIT_ORACLE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

HELP = {
    "phonon-sim": "integrate a harmonic lattice and track its energies",
    "photon-field-sim": "step the vector potential on the cell net",
    "dispersion-scan": "measure omega(k) from simulated time series",
    "quantize-report": "prepare and recover oscillator occupations",
    "hop-trace": "follow the photon core from cell to cell",
    "lifetime-calc": "cell lifetime and cells per wavelength",
}


def build_parser():
    parser = argparse.ArgumentParser(prog="phonophot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", required=True, metavar="scenario")
    for kind in KINDS:
        p = sub.add_parser(kind, help=HELP[kind])
        p.add_argument("--config", required=True, help="scenario config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--seed", type=int, help="override [scenario] seed")
        p.add_argument("--strict", action="store_true",
                       help="refuse core positions inside the first residence interval")
        p.add_argument("--figures", action="store_true",
                       help="also render PNG figures next to --out")
    return parser


def _fail(code, message):
    print(f"phonophot: {message}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(EXIT_CONFIG, f"cannot read config: {exc}")

    try:
        config = parse_config(text)
    except ConfigError as exc:
        for line, msg in exc.issues:
            print(f"{args.config}:{line}: {msg}" if line else f"{args.config}: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    if config.kind != args.kind:
        return _fail(EXIT_CONFIG, f"config is for {config.kind!r}, not {args.kind!r}")
    if args.seed is not None:
        config.seed = args.seed
    if args.strict:
        config.strict = True

    from .runner import run  # heavy imports only once the config is valid

    try:
        report = run(config)
    except NumericFailure as exc:
        return _fail(EXIT_NUMERIC, str(exc))
    except (StabilityError, ValueError) as exc:
        return _fail(EXIT_CONFIG, str(exc))

    if args.out:
        emit(report, args.format, args.out)
        if args.figures:
            from .plotting import render_figures

            out_dir = os.path.dirname(os.path.abspath(args.out))
            stem = os.path.splitext(os.path.basename(args.out))[0]
            render_figures(report, out_dir, stem)
    else:
        from .report import report_json, series_csv

        sys.stdout.write(series_csv(report) if args.format == "csv" else report_json(report))
        if args.figures:
            print("phonophot: --figures needs --out", file=sys.stderr)

    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    failed = [row.name for row in report.oracles if not row.passed]
    if failed:
        return _fail(EXIT_ORACLE, "oracle checks failed: " + ", ".join(failed))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
