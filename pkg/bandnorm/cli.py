"""
Command-line front end: `bandnorm norm|integral|info --system FILE ...`.

Exit codes: 0 success, 2 mathematical precondition violated, 3 input or parse
error, 4 numerical failure.
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional, TextIO

from pydantic import BaseModel

from bandnorm.core.config import settings
from bandnorm.core.errors import BandNormError, InputError, SystemFileError
from bandnorm.models.schemas import IntegralResponse, SystemFile
from bandnorm.services.analysis import analyzer, load_system, make_band

logger = logging.getLogger("bandnorm")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit 3 instead of argparse's 2."""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def parse_system(source: str) -> SystemFile:
    """
    Read a system document from a file path or from literal JSON text.

    Raises:
        SystemFileError: With the line of a syntax error or the offending field
    """
    text = source
    if os.path.exists(source):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise SystemFileError(f"cannot read {source}: {e}") from e
    elif not source.lstrip().startswith("{"):
        raise SystemFileError(f"no such file: {source}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SystemFileError(e.msg, line=e.lineno) from e
    return load_system(data)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bandnorm", description="Frequency-band norms and integrals of LTI systems")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log decisions to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--system", required=True, help="System document (path or JSON text)")
    common.add_argument("--band", nargs=2, type=float, metavar=("LOW", "HIGH"), help="Band edges")
    common.add_argument("--degrees", action="store_true", help="Band edges given in degrees")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)

    norm = sub.add_parser("norm", parents=[common], help="Squared frequency-truncated norm")
    norm.add_argument("--method", choices=("auto", "stable", "general"), default="auto")
    norm.add_argument("--decimation", type=int, metavar="M", help="Also report the multirate error J")
    norm.add_argument("--check-oracle", type=float, metavar="TOL", help="Cross-check by quadrature")

    integral = sub.add_parser("integral", parents=[common], help="Band integral of the resolvent")
    integral.add_argument("--continuous", action="store_true", help="Integrate (j w E - A)^-1 over [w1, w2]")
    integral.add_argument("--check-oracle", type=float, metavar="TOL", help="Cross-check by quadrature")

    info = sub.add_parser("info", parents=[common], help="Eigenvalues, shift and band clearance")
    info.add_argument("--continuous", action="store_true", help="Treat the band as [w1, w2]")
    return parser


def _format_matrix(rows) -> str:
    return "\n".join("  " + " ".join(f"{x:.17g}" for x in row) for row in rows)


def _format_text(response: BaseModel) -> str:
    if isinstance(response, IntegralResponse):
        lines = [
            f"method: {response.method}",
            f"time_domain: {response.time_domain}",
            f"band: {response.band[0]:.17g} {response.band[1]:.17g}",
            f"arc_clearance: {response.arc_clearance:.6g}",
            "real:",
            _format_matrix(response.real),
            "imag:",
            _format_matrix(response.imag),
        ]
        if response.oracle_difference is not None:
            lines.append(f"oracle_difference: {response.oracle_difference:.3e}")
    else:
        lines = []
        for key, val in response.model_dump(exclude={"warnings"}).items():
            if val is None:
                continue
            if isinstance(val, float):
                val = f"{val:.17g}"
            lines.append(f"{key}: {val}")
    lines.extend(f"warning: {w}" for w in response.warnings)
    return "\n".join(lines)


def _dispatch(args) -> BaseModel:
    doc = parse_system(args.system)
    if args.command == "norm":
        band = make_band(args.band, args.degrees)
        return analyzer.norm(
            doc, band, method=args.method, decimation=args.decimation, check_oracle=args.check_oracle
        )
    if args.command == "integral":
        if args.band is None:
            raise InputError("integral needs --band")
        return analyzer.integral(
            doc, args.band, continuous=args.continuous, degrees=args.degrees, check_oracle=args.check_oracle
        )
    return analyzer.info(doc, args.band, continuous=args.continuous, degrees=args.degrees)


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Parse arguments, run one command and return the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except BandNormError as e:
        print(f"error: {e.message}", file=stderr)
        return e.exit_code

    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        stream=stderr,
    )

    try:
        response = _dispatch(args)
    except BandNormError as e:
        logger.debug(f"{type(e).__name__}: {e.details}")
        print(f"error: {e.message}", file=stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"unexpected failure: {e}")
        print(f"error: {e}", file=stderr)
        return 4

    if args.output == "json":
        print(response.model_dump_json(indent=2), file=stdout)
    else:
        print(_format_text(response), file=stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
