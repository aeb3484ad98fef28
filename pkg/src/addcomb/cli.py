"""Command line entry point: ``addcomb run|all|list|describe``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import AddcombError
from .harness import SUITES, run_suite
from .harness.config import SuiteConfig, load_config
from .harness.report import emit


def _write(text: str, out: str | None, name: str, fmt: str, many: bool) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if many or path.is_dir():
        path.mkdir(parents=True, exist_ok=True)
        path = path / f"{name}.{fmt}"
    path.write_text(text)


def _run(configs: list[SuiteConfig], args) -> int:
    failed = 0
    for cfg in configs:
        report = run_suite(cfg, seed=args.seed)
        _write(emit(report, args.format), args.out, cfg.suite, args.format, len(configs) > 1)
        s = report.summary()
        print(f"{cfg.suite}: pass={s['pass_count']} fail={s['fail_count']} NA={s['na_count']}",
              file=sys.stderr)
        failed += report.fail_count > 0
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="addcomb", description="Energy, norm and spectral checks on finite groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (one suite or {'suites': [...]})")
        p.add_argument("--seed", type=int, help="global seed; overrides every config seed")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="output file, or a directory when several suites run")

    run = sub.add_parser("run", help="run one suite")
    run.add_argument("suite", choices=sorted(SUITES))
    common(run)
    everything = sub.add_parser("all", help="run every suite in a config (or every suite with defaults)")
    common(everything)
    sub.add_parser("list", help="list suites")
    desc = sub.add_parser("describe", help="show a suite's check and default parameters")
    desc.add_argument("suite", choices=sorted(SUITES))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.command == "list":
            for name, s in SUITES.items():
                print(f"{name:20s} {s.kind:9s} {s.check}")
            return 0
        if args.command == "describe":
            from .canonical import dumps
            s = SUITES[args.suite]
            print(dumps({"suite": s.name, "kind": s.kind, "check": s.check, "defaults": s.defaults}))
            return 0
        if args.command == "run":
            configs = load_config(args.config) if args.config else [SuiteConfig(args.suite)]
            configs = [c for c in configs if c.suite == args.suite]
            if not configs:
                raise AddcombError(f"config has no entry for suite {args.suite!r}")
            return _run(configs, args)
        configs = load_config(args.config) if args.config else [SuiteConfig(n) for n in SUITES]
        return _run(configs, args)
    except AddcombError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
