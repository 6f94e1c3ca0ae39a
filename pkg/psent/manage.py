"""
Command-line entrypoint for psent.

Commands:
    analyze     - Check the resonance conditions of an equation file.
    expand      - Compute the Puiseux expansion about a movable singularity.
    continue    - Continue a solution along a complex path.
    locate      - Locate the singularity met along a path.
    monodromy   - Loop around a located singularity.
    scan        - Locate singularities along a fan of paths.
    demo        - Run a demo equation (smith, warning or a registered plugin).

Usage:
    psent <command> [options]
    python -m psent.manage <command> [options]

Example:
    psent analyze --equation painleve1.json
    psent locate --equation cubic.json --y0=-1,0 --yp0=-1,0 --path "0,0:2,0" --out results/
    psent demo warning

Exit codes:
    0 success, 1 invalid input, 2 analysis negative, 3 numeric failure.
    Every failing command writes error.json into its output directory.

Environment Variables:
    PSENT_THREADS caps scan parallelism, LOG_LEVEL sets the verbosity;
    see `psent.app.config` for the numeric defaults.
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from psent.app.commands.analysis import run_analyze, run_expand
from psent.app.commands.common import parse_complex, parse_loop, parse_path
from psent.app.commands.continuation import run_continue, run_locate, run_monodromy, run_scan
from psent.app.commands.demo import run_demo
from psent.app.core.errors import PreconditionError, PsentError
from psent.app.core.logger import get_logger, setup_logging
from psent.app.reports import ErrorReportModel, RunConfig, write_json


logger = get_logger("psent")

COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "analyze": run_analyze,
    "expand": run_expand,
    "continue": run_continue,
    "locate": run_locate,
    "monodromy": run_monodromy,
    "scan": run_scan,
    "demo": run_demo,
}


class ArgumentParser(argparse.ArgumentParser):
    """ Reports usage errors as input errors (exit code 1) instead of exiting with 2. """

    def error(self, message):
        raise PreconditionError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--equation", type=Path, help="equation file (JSON)")
    common.add_argument("--z0", help="base point or scan origin 're,im'")
    common.add_argument("--y0", help="initial y 're,im'")
    common.add_argument("--yp0", help="initial y' 're,im'")
    common.add_argument("--branch", help="branch class: 1, +1 or -1 (odd N)")
    common.add_argument("--beta", default="0,0", help="free coefficient 're,im'")
    common.add_argument("--order", type=int, help="expansion index or series order")
    common.add_argument("--path", help="waypoints 'x0,y0:x1,y1:...'")
    common.add_argument("--loop", help="loop 'cx,cy,r,turns'")
    common.add_argument("--rays", type=int, help="number of rays of a scan fan")
    common.add_argument("--length", type=float, help="ray length of a scan fan")
    common.add_argument("--rel-tol", type=float)
    common.add_argument("--abs-tol", type=float)
    common.add_argument("--threads", type=int, help="worker threads (overrides PSENT_THREADS)")
    common.add_argument("--mode", choices=["exact", "float"], default="exact")
    common.add_argument("--out", type=Path, default=Path("psent-out"), help="output directory")
    common.add_argument("--log-level", choices=["debug", "info", "warning", "error", "critical"])

    parser = ArgumentParser(prog="psent", description="Movable singularities of y'' = sum a_n(z) y^n")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for name in COMMANDS:
        cmd = sub.add_parser(name, parents=[common])
        if name == "demo":
            cmd.add_argument("demo", help="demo name: smith, warning or a registered plugin")
        elif name not in ("analyze", "expand"):
            cmd.add_argument("--demo", help="continue a demo equation instead of an equation file")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """
    Turn parsed arguments into a validated `RunConfig`.

    Raises:
        PreconditionError: If a complex value, path or loop is malformed.
    """
    try:
        return RunConfig(
            command=args.command,
            equation=args.equation,
            demo=getattr(args, "demo", None),
            z0=parse_complex(args.z0) if args.z0 else None,
            y0=parse_complex(args.y0) if args.y0 else None,
            yp0=parse_complex(args.yp0) if args.yp0 else None,
            branch=args.branch,
            beta=parse_complex(args.beta),
            order=args.order,
            path=parse_path(args.path) if args.path else None,
            loop=parse_loop(args.loop) if args.loop else None,
            rays=args.rays,
            length=args.length,
            mode=args.mode,
            overrides={k: v for k, v in (("rel_tol", args.rel_tol), ("abs_tol", args.abs_tol),
                                         ("threads", args.threads)) if v is not None},
            out=args.out,
        )
    except ValueError as err:
        if isinstance(err, ValidationError):
            raise
        raise PreconditionError(str(err))


def _write_error(report: ErrorReportModel, out: Optional[Path]) -> None:
    if out is None:
        return
    try:
        write_json(report, out / "error.json")
    except OSError as err:
        logger.error(f"could not write error report: {err}")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse `argv`, run the command and return its exit code.

    Args:
        argv (list): Arguments without the program name; defaults to `sys.argv[1:]`.

    Returns:
        int: 0, 1, 2 or 3.
    """
    out = None
    try:
        args = build_parser().parse_args(argv)
        out = args.out
        setup_logging(args.log_level)
        config = make_config(args)
        logger.info(f"🚀 psent {config.command}")
        return COMMANDS[config.command](config)
    except ValidationError as err:
        logger.error(f"💥 invalid input: {err}")
        _write_error(ErrorReportModel(error="ValidationError", message=str(err), exit_code=1), out)
        return 1
    except PsentError as err:
        logger.error(f"💥 {type(err).__name__}: {err}")
        _write_error(ErrorReportModel.from_error(err), out)
        return err.exit_code
    except OSError as err:
        logger.error(f"💥 {err}")
        _write_error(ErrorReportModel(error=type(err).__name__, message=str(err), exit_code=1), out)
        return 1


def main():
    """ Console script entrypoint. """
    sys.exit(run())


if __name__ == "__main__":
    main()
