import argparse
import sys

import pandas as pd

from dirberg import APP_NAME
from dirberg.dirberg import (
    configure_logging,
    run_eval_norm,
    run_eval_scan,
    run_kernel,
    run_norm,
    run_report,
    run_verify,
)
from dirberg.services import constants
from dirberg.services.config import build_run_config
from dirberg.services.errors import DirbergError, exit_code_for
from dirberg.services.output import atomic_write, to_json_text
from dirberg.verification.report import report_table


def count(value: str) -> int:
    """Integers written either plainly or as 1e6."""
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}")
    if number != int(number):
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    return int(number)


def write_file(text: str, path: str) -> None:
    """Machine-readable output goes to stdout, or atomically to path."""
    if not path:
        sys.stdout.write(text + "\n")
        return
    atomic_write(path, text + "\n")
    print(f"Output written to {path}", file=sys.stderr)


def render(data, output_type: str) -> str:
    if isinstance(data, pd.DataFrame):
        if output_type == "csv":
            return data.to_csv(float_format=constants.FLOAT_FORMAT, index=False).rstrip("\n")
        return to_json_text(data.to_dict(orient="records"))
    return to_json_text(data)


def _point(parser, name: str, help_text: str) -> None:
    parser.add_argument(f"--{name}", nargs=2, type=float, metavar=("RE", "IM"), help=help_text)


def _measure_flags(parser) -> None:
    parser.add_argument("--measure", choices=["alpha", "dirac0", "density"], dest="measure_type",
                        help="Measure on (0, inf); defaults to alpha")
    parser.add_argument("--alpha", type=float, help="alpha of mu_alpha, default 0")


def _sampler_flags(parser) -> None:
    parser.add_argument("--samples", type=count, help="Monte Carlo samples, default 100000")
    parser.add_argument("--seed", type=count, help="Monte Carlo seed, default 0")
    parser.add_argument("--primes", type=count, help="Primes K of the truncated polytorus; defaults to what the polynomial needs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME,
                                     description="Norms, point evaluation and verification suites for Hardy and Bergman spaces of Dirichlet series")
    parser.add_argument("--config", help="JSON config file; flags take precedence over it")
    parser.add_argument("--output", help="Output file. Defaults to stdout")
    parser.add_argument("--output-type", choices=constants.OUTPUT_TYPES, help="Output type: json or csv")
    parser.add_argument("--log-level", help=f"Logging level, defaults to LOG_LEVEL ({constants.LOG_LEVEL})")

    subparsers = parser.add_subparsers(title="Commands", required=True, dest="command")

    norm_parser = subparsers.add_parser(name="norm", help="Norm of a Dirichlet polynomial")
    norm_parser.add_argument("--space", required=True, choices=constants.SPACES_NORM)
    norm_parser.add_argument("--p", type=float, help="Exponent p >= 1, default 2")
    norm_parser.add_argument("--poly", help='Polynomial as JSON, e.g. {"N":3,"coeffs":[[2,1,0],[3,1,0]]}')
    norm_parser.add_argument("--poly-file", help="Polynomial JSON file")
    _measure_flags(norm_parser)
    _sampler_flags(norm_parser)

    eval_parser = subparsers.add_parser(name="eval-norm", help="Norm of point evaluation at s (or z for the disk)")
    eval_parser.add_argument("--space", required=True, choices=constants.SPACES_EVAL)
    eval_parser.add_argument("--p", type=float, help="Exponent p >= 1, default 2")
    eval_parser.add_argument("--sigma", type=float, help="Real point s = sigma")
    _point(eval_parser, "s", "Complex point s")
    _point(eval_parser, "z", "Point of the unit disk (disk space)")
    eval_parser.add_argument("--eta-points", type=count, help="Size of the eta grid of infimum bounds")
    _measure_flags(eval_parser)

    scan_parser = subparsers.add_parser(name="eval-scan", help="Evaluation norm over a sigma grid, CSV by default")
    scan_parser.add_argument("--space", required=True, choices=constants.SPACES_SCAN)
    scan_parser.add_argument("--p", type=float, help="Exponent p >= 1, default 2")
    scan_parser.add_argument("--sigma-min", type=float, help="Default 0.51")
    scan_parser.add_argument("--sigma-max", type=float, help="Default 2.0")
    scan_parser.add_argument("--points", type=count, help="Default 50")
    scan_parser.add_argument("--eta-points", type=count, help="Size of the eta grid of infimum bounds")
    _measure_flags(scan_parser)

    verify_parser = subparsers.add_parser(name="verify", help="Run a verification suite")
    verify_parser.add_argument("--suite", required=True, help=f"One of {', '.join(constants.SUITES)}")
    verify_parser.add_argument("--json", dest="json_path", help="Also write the JSON reports to this file")
    verify_parser.add_argument("--timings", action=argparse.BooleanOptionalAction, default=False,
                               help="Include runtime_ms in the JSON reports (output no longer byte-reproducible)")

    kernel_parser = subparsers.add_parser(name="kernel", help="Truncated reproducing kernel of A^2_mu or B^2")
    kernel_parser.add_argument("--space", required=True, choices=["a2", "b2"])
    _point(kernel_parser, "s", "First point")
    kernel_parser.add_argument("--sigma", type=float, help="Real first point")
    _point(kernel_parser, "w", "Second point")
    kernel_parser.add_argument("--N", type=count, help=f"Truncation, default {constants.KERNEL_N}")
    _measure_flags(kernel_parser)

    report_parser = subparsers.add_parser(name="report", help="Render verify JSON output as a table")
    report_parser.add_argument("--input", help="Verify JSON file. Defaults to stdin")
    return parser


def collect_flags(args: argparse.Namespace) -> dict:
    """argparse namespace to RunConfig fields; unset flags stay None."""
    values = dict(vars(args))
    for key in ("config", "log_level", "json_path", "timings"):
        values.pop(key, None)
    values["measure"] = {"type": values.pop("measure_type", None), "alpha": values.pop("alpha", None)}
    values["sampler"] = {"samples": values.pop("samples", None), "seed": values.pop("seed", None),
                         "primes": values.pop("primes", None)}
    if values.get("command") == "eval-scan" and values.get("output_type") is None:
        values["output_type"] = "csv"
    return values


def cli():
    parser = build_parser()
    if len(sys.argv) <= 1:
        parser.print_help()
        sys.exit(constants.EXIT_CONFIG)
    args = parser.parse_args()
    configure_logging(args.log_level)

    try:
        cfg = build_run_config(collect_flags(args), args.config)
        if args.command == "norm":
            write_file(render(run_norm(cfg), cfg.output_type), cfg.output)
        elif args.command == "eval-norm":
            write_file(render(run_eval_norm(cfg), cfg.output_type), cfg.output)
        elif args.command == "eval-scan":
            write_file(render(run_eval_scan(cfg), cfg.output_type), cfg.output)
        elif args.command == "kernel":
            write_file(render(run_kernel(cfg), cfg.output_type), cfg.output)
        elif args.command == "report":
            write_file(run_report(cfg), cfg.output)
        elif args.command == "verify":
            reports = run_verify(cfg)
            output = {"suite": cfg.suite, "config": cfg.suites.model_dump(),
                      "reports": [report.to_dict(timing=args.timings) for report in reports]}
            text = to_json_text(output)
            write_file(text, cfg.output)
            if args.json_path:
                atomic_write(args.json_path, text + "\n")
                print(f"Output written to {args.json_path}", file=sys.stderr)
            print(report_table(reports).to_string(index=False), file=sys.stderr)
            if not all(report.passed for report in reports):
                sys.exit(constants.EXIT_VERIFY_FAILED)
    except DirbergError as e:
        print(f"{APP_NAME}: {e}", file=sys.stderr)
        sys.exit(exit_code_for(e))
    except ArithmeticError as e:
        print(f"{APP_NAME}: numerical failure: {e!r}", file=sys.stderr)
        sys.exit(exit_code_for(e))

    sys.exit(constants.EXIT_OK)


if __name__ == "__main__":
    cli()
