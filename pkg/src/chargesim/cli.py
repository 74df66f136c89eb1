"""``simcli`` — run, validate, and re-plot experiment configurations.

Exit codes: 0 on success, 1 for configuration validation failures, 2 for
compute or I/O failures. The worker pool size comes from the configuration's
``run.n_workers`` or, when that is absent, the ``SIMCLI_WORKERS``
environment variable.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError
from .experiments import WORKERS_ENV_VAR, run_experiment

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simcli",
        description="Charge-qubit array simulation harness.",
        epilog=f"Worker count: run.n_workers in the config, else ${WORKERS_ENV_VAR}.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser(
        "run", help="execute experiment configs and write result bundles"
    )
    run.add_argument("configs", nargs="*", help="experiment config files (JSON)")
    run.add_argument(
        "--out-dir", default=None,
        help="override the output directory (single config only)",
    )
    run.add_argument(
        "--no-plots", action="store_true", help="skip SVG rendering"
    )

    validate = commands.add_parser(
        "validate", help="check configs without running anything"
    )
    validate.add_argument("configs", nargs="+", help="experiment config files")

    plot = commands.add_parser(
        "plot", help="re-render the SVG plots of existing result bundles"
    )
    plot.add_argument("result_dirs", nargs="+", help="result bundle directories")
    return parser


def _cmd_run(args) -> int:
    if not args.configs:
        print("nothing to do: no experiment configs given")
        return EXIT_OK
    if args.out_dir is not None and len(args.configs) > 1:
        print("--out-dir applies to a single config", file=sys.stderr)
        return EXIT_INVALID
    for path in args.configs:
        try:
            config = load_config(path)
        except ConfigError as error:
            print(f"{path}: {error}", file=sys.stderr)
            return EXIT_INVALID
        try:
            directory = run_experiment(
                config,
                out_dir=args.out_dir,
                plots=False if args.no_plots else None,
            )
        except Exception as error:
            print(
                f"{path}: compute failed: {type(error).__name__}: {error}",
                file=sys.stderr,
            )
            return EXIT_COMPUTE
        print(f"{path}: {config.experiment} -> {directory} [{config.config_hash[:12]}]")
    return EXIT_OK


def _cmd_validate(args) -> int:
    status = EXIT_OK
    for path in args.configs:
        try:
            config = load_config(path)
        except ConfigError as error:
            print(f"{path}: {error}", file=sys.stderr)
            status = EXIT_INVALID
        else:
            print(f"{path}: ok ({config.experiment}, hash {config.config_hash[:12]})")
    return status


def _cmd_plot(args) -> int:
    from .plotting import render_bundle

    for directory in args.result_dirs:
        try:
            written = render_bundle(directory)
        except Exception as error:
            print(
                f"{directory}: plotting failed: {type(error).__name__}: {error}",
                file=sys.stderr,
            )
            return EXIT_COMPUTE
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "validate": _cmd_validate, "plot": _cmd_plot}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
