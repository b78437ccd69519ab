"""Command-line front end.

Verbs:
  transmission  frequency curves from a [grid] config
  spectrum      same, plus photon-number metadata
  sweep         1- or 2-axis parameter sweep from a [sweep] config
  figure        run a shipped figure-reproduction config (fig2..fig5)
  selfcheck     run the built-in invariant suite

Outputs CSV (default) or JSON; identical configs produce byte-identical
files regardless of --threads.
"""

import argparse
import io
import os
import sys
from importlib import resources

from .config import ConfigError, load_config, parse_config
from .runs import run_spectrum, run_sweep, run_transmission, write_csv, \
    write_json
from .selfcheck import run_selfcheck

FIGURE_CONFIGS = ("fig2", "fig3", "fig4", "fig5")


def _add_common(p, needs_config=True):
    if needs_config:
        p.add_argument("--config", required=True, help="configuration file")
    p.add_argument("--out", default=None,
                   help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: hardware parallelism)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dotgain",
        description="Photon gain in quantum-dot cavity hybrids")
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, help_text in (("transmission", "frequency curves over [grid]"),
                            ("spectrum", "frequency curves plus photon number"),
                            ("sweep", "parameter sweep over [sweep] axes")):
        p = sub.add_parser(verb, help=help_text)
        _add_common(p)

    p = sub.add_parser("figure", help="run a shipped figure config")
    p.add_argument("name", choices=FIGURE_CONFIGS)
    _add_common(p, needs_config=False)

    p = sub.add_parser("selfcheck", help="run the invariant suite")
    p.add_argument("--out", default=None,
                   help="write the report here as well as stdout")
    return parser


def _emit(dataset, args):
    buf = io.StringIO()
    if args.format == "json":
        write_json(dataset, buf)
    else:
        write_csv(dataset, buf)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(args):
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        return args.threads
    return os.cpu_count() or 1


def _figure_config(name):
    ref = resources.files("dotgain").joinpath(f"configs/{name}.cfg")
    return parse_config(ref.read_text(encoding="utf-8"),
                        source=f"dotgain:configs/{name}.cfg")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "selfcheck":
            results, ok = run_selfcheck()
            lines = [r.line() for r in results]
            lines.append(f"{'PASS' if ok else 'FAIL'} selfcheck "
                         f"({sum(r.passed for r in results)}/{len(results)} "
                         "checks passed)")
            report = "\n".join(lines) + "\n"
            sys.stdout.write(report)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(report)
            return 0 if ok else 1

        if args.verb == "figure":
            config = _figure_config(args.name)
        else:
            config = load_config(args.config)

        workers = _threads(args)
        if args.verb == "sweep" or (args.verb == "figure" and config.sweep):
            dataset = run_sweep(config, workers=workers)
        elif args.verb == "spectrum":
            dataset = run_spectrum(config, workers=workers)
        else:
            dataset = run_transmission(config, workers=workers)
        _emit(dataset, args)
        return 0
    except (ConfigError, ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"dotgain: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
