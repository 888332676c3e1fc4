import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field

from dotenv import load_dotenv

from routes import RENDERERS, ROUTES, MalformedJsonError
from utils.exact_core import parse_rational
from utils.guards import DeskGuardError
from utils.mixed_volume import METHODS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Raised instead of exiting when the command line cannot be parsed."""


class _Parser(argparse.ArgumentParser):
    # Values such as "-37,7" or "-1/2" are arguments, not option flags.
    NEGATIVE_VALUE = re.compile(r"^-\d[\d,/-]*$|^-\d*\.\d+$")

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = self.NEGATIVE_VALUE

    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class CommandRequest:
    subcommand: str
    parameters: dict = field(default_factory=dict)
    output_format: str = "json"
    verbose: bool = False

    def __post_init__(self):
        if self.subcommand not in ROUTES:
            raise UsageError(f"Unknown subcommand: {self.subcommand}")
        if self.output_format not in RENDERERS:
            raise UsageError(f"Unknown output format: {self.output_format}")


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cremona", description="Exact invariants of Cremona transformations of P^n.")
    parser.add_argument("--format", dest="output_format", choices=sorted(RENDERERS), default="json")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level to standard error.")
    commands = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    commands.required = True

    p = commands.add_parser("multidegrees", help="Multidegrees of the standard Cremona transformation.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=list(METHODS) + ["all"], default="all")

    p = commands.add_parser("segre", help="Segre numbers of the base locus of the standard transformation.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check-hypergeometric", action="store_true")

    p = commands.add_parser("convert", help="Convert between multidegrees and Segre numbers.")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--degrees", help="Comma-separated d_0,...,d_n.")
    source.add_argument("--segre", help="Comma-separated s_0,...,s_(n-2).")
    p.add_argument("--deg", type=int, required=True, help="Algebraic degree of the map.")
    p.add_argument("--n", type=int)
    p.add_argument("--inverse", action="store_true", help="With --degrees: multidegrees of the inverse map.")

    p = commands.add_parser("volume", help="Volume of a polytope file or of a*delta_n + b*(-delta_n).")
    p.add_argument("--polytope")
    p.add_argument("--a", type=_rational)
    p.add_argument("--b", type=_rational)
    p.add_argument("--n", type=int)
    p.add_argument("--oracle", action="store_true", help="Use the triangulation oracle instead of the closed form.")

    p = commands.add_parser("mixed-volume", help="Mixed coefficient of n polytope files in R^n.")
    p.add_argument("--polytopes", nargs="+", required=True, help="f1.json,...,fn.json (spaces also separate).")

    p = commands.add_parser("minors", help="Maximal minors of an (n+1) x n matrix of linear forms.")
    matrix = p.add_mutually_exclusive_group()
    matrix.add_argument("--matrix")
    matrix.add_argument("--standard", type=int)
    matrix.add_argument("--example", action="store_true")

    p = commands.add_parser("fan", help="Common refinement of the fan of P^n and its negative.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--action", choices=["count", "list", "cover-check"], default="count")

    p = commands.add_parser("report", help="Every invariant of the standard transformation for one n.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--regenerate-golden", action="store_true")
    p.add_argument("--check-golden", action="store_true")

    p = commands.add_parser("verify", help="Run every cross-check.")
    p.add_argument("--max-n", type=int, default=5)
    return parser


def parse_request(argv) -> CommandRequest:
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    output_format = args.pop("output_format")
    verbose = args.pop("verbose")
    return CommandRequest(subcommand, args, output_format, verbose)


def _error(message: str, details=None) -> dict:
    return {"error": message, "details": details}


def run(request: CommandRequest) -> tuple:
    """
    Executes one command.

    Returns:
        tuple: (exit code, rendered payload). Usage errors, guard violations,
        missing files and malformed JSON give exit code 2 with an error
        payload; failed verification gives 1.
    """
    render = RENDERERS[request.output_format]
    handler = ROUTES[request.subcommand]
    logger.info(f"Running {request.subcommand} with {request.parameters}")
    try:
        payload, code = handler(request.parameters)
    except DeskGuardError as e:
        return EXIT_USAGE, render(_error(str(e), {"guard": e.guard, "limit": e.limit, "value": e.value}))
    except FileNotFoundError as e:
        path = e.filename or str(e)
        return EXIT_USAGE, render(_error(f"File not found: {path}", {"path": path}))
    except MalformedJsonError as e:
        return EXIT_USAGE, render(_error(str(e), {"path": e.path, "line": e.line}))
    except ValueError as e:
        return EXIT_USAGE, render(_error(str(e)))
    except Exception as e:
        logger.error(f"Unexpected error in {request.subcommand}: {e}", exc_info=True)
        return EXIT_FAILURE, render(_error(f"Unexpected error: {e}"))
    logger.info(f"Finished {request.subcommand} with exit code {code}")
    return code, render(payload)


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, os.getenv("CREMONA_LOG_LEVEL", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    load_dotenv()
    argv = sys.argv[1:] if argv is None else argv
    try:
        request = parse_request(argv)
    except UsageError as e:
        _configure_logging(False)
        print(json.dumps(_error("Usage error", str(e)), indent=2))
        return EXIT_USAGE
    _configure_logging(request.verbose)
    code, output = run(request)
    print(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
