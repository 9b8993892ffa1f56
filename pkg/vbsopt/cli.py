"""Command line entry point: ``vbsopt solve|oracle|check|tree PROBLEM``.

Exit codes: 0 ok, 1 parse or I/O error, 2 solver error, 3 check mismatch, 4 size cap.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Optional, Sequence, TextIO

from .config import LOG_LEVELS, Settings, get_settings
from .markov_tree import Hypergraph, TreeError, build_tree, osla_order, tree_to_dot, tree_to_text
from .models import CheckReport, OracleReport, SolveReport, TreeEdge, TreeReport
from .oracle import OracleSizeError, brute_solve
from .problem import Problem, ProblemError
from .problem_file import ProblemParseError, format_result, format_trace, parse_problem
from .propagation import EnumerationLimitError, SolveOptions, SolverError, solve
from .valuation import ValuationError, format_value

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SOLVER = 2
EXIT_MISMATCH = 3
EXIT_SIZE = 4


def _order(raw: Optional[str]) -> Optional[tuple[str, ...]]:
    if raw is None:
        return None
    return tuple(name.strip() for name in raw.split(",") if name.strip())


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {raw!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _pick(flag: Optional[int], default: int) -> int:
    return default if flag is None else flag


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="problem file")
    common.add_argument("--objective", choices=("min", "max"), help="override the file's objective")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=LOG_LEVELS,
        default=None,
        help="logging level (default from VBS_LOG_LEVEL)",
    )

    solving = argparse.ArgumentParser(add_help=False)
    solving.add_argument("--order", help="comma-separated elimination order, e.g. C,D,E,B,A")
    solving.add_argument("--all-optima", action="store_true", help="enumerate every optimal configuration")
    solving.add_argument("--max-optima", type=_positive_int, default=None, help="cap on enumerated optima")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--max-joint", type=_positive_int, default=None, help="cap on the oracle's joint table size")

    parser = argparse.ArgumentParser(prog="vbsopt", description="Discrete optimization by local computation")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("solve", parents=[common, solving], help="solve by propagation on a Markov tree")
    p.add_argument("--trace", action="store_true", help="print every message table")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = commands.add_parser("oracle", parents=[common, sized], help="solve by exhaustive search")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = commands.add_parser("check", parents=[common, solving, sized], help="compare solver and oracle")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = commands.add_parser("tree", parents=[common], help="print the rooted Markov tree")
    p.add_argument("--order", help="comma-separated elimination order, e.g. C,D,E,B,A")
    p.add_argument("--format", choices=("text", "dot", "json"), default="text")
    return parser


def _options(args: argparse.Namespace, settings: Settings, trace: bool = False) -> SolveOptions:
    return SolveOptions(
        order=_order(args.order),
        all_optima=args.all_optima,
        trace=trace,
        max_optima=_pick(args.max_optima, settings.max_optima),
    )


# Commands -------------------------------------------------------------
def cmd_solve(problem: Problem, args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    result = solve(problem, _options(args, settings, trace=args.trace))
    if args.format == "json":
        report = SolveReport(
            objective=problem.sense.value,
            order=[v.name for v in result.order],
            optimum=result.optimum,
            solution=result.solution.as_dict(),
            optima=[x.as_dict() for x in result.all_optima] if result.all_optima is not None else None,
        )
        out.write(report.model_dump_json(indent=2) + "\n")
        return EXIT_OK
    out.write(format_result(result, problem))
    if args.trace:
        out.write(format_trace(result))
    return EXIT_OK


def cmd_oracle(problem: Problem, args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    result = brute_solve(problem, max_joint=_pick(args.max_joint, settings.max_joint))
    if args.format == "json":
        report = OracleReport(
            objective=problem.sense.value,
            optimum=result.optimum,
            argopt=[x.as_dict() for x in result.argopt],
            joint_size=result.joint_size,
        )
        out.write(report.model_dump_json(indent=2) + "\n")
        return EXIT_OK
    out.write(f"objective: {problem.sense.value}\n")
    out.write(f"optimum: {format_value(result.optimum)}\n")
    out.write(f"configurations scanned: {result.joint_size}\n")
    out.write(f"variables: {' '.join(problem.universe.names)}\n")
    out.write(f"optima: {len(result.argopt)}\n")
    for x in result.argopt:
        out.write(f"  {x}\n")
    return EXIT_OK


def cmd_check(problem: Problem, args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    result = solve(problem, _options(args, settings))
    oracle = brute_solve(problem, max_joint=_pick(args.max_joint, settings.max_joint))
    solution_value = problem.evaluate(result.solution)

    missing, extra = [], []
    if result.all_optima is not None:
        solver_set, oracle_set = set(result.all_optima), set(oracle.argopt)
        missing = sorted(oracle_set - solver_set, key=lambda x: x.states)
        extra = sorted(solver_set - oracle_set, key=lambda x: x.states)
    passed = (
        result.optimum == oracle.optimum
        and solution_value == oracle.optimum
        and not missing
        and not extra
    )
    report = CheckReport(
        objective=problem.sense.value,
        solver_optimum=result.optimum,
        oracle_optimum=oracle.optimum,
        solution_value=solution_value,
        optima_compared=result.all_optima is not None,
        missing_optima=[x.as_dict() for x in missing],
        extra_optima=[x.as_dict() for x in extra],
        passed=passed,
    )
    if args.format == "json":
        out.write(report.model_dump_json(indent=2) + "\n")
    else:
        _write_check(report, out)
    if not passed:
        logger.warning("solver and oracle disagree on %s", args.path)
    return EXIT_OK if passed else EXIT_MISMATCH


def _write_check(report: CheckReport, out: TextIO) -> None:
    def mark(ok: bool) -> str:
        return "✅" if ok else "❌"

    agree = report.solver_optimum == report.oracle_optimum
    out.write(
        f"{mark(agree)} optimum: solver {format_value(report.solver_optimum)}, "
        f"oracle {format_value(report.oracle_optimum)}\n"
    )
    out.write(
        f"{mark(report.solution_value == report.oracle_optimum)} solution evaluates to "
        f"{format_value(report.solution_value)}\n"
    )
    if report.optima_compared:
        same = not report.missing_optima and not report.extra_optima
        out.write(
            f"{mark(same)} optima sets: {len(report.missing_optima)} missing, {len(report.extra_optima)} extra\n"
        )
    out.write("PASSED\n" if report.passed else "FAILED\n")


def cmd_tree(problem: Problem, args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    hypergraph = Hypergraph.from_scopes(problem.scopes())
    names = _order(args.order)
    order = problem.order(names) if names is not None else osla_order(hypergraph)
    tree = build_tree(hypergraph, order)
    if args.format == "dot":
        out.write(tree_to_dot(tree))
    elif args.format == "json":
        edges = []
        for vertex in reversed(tree.postorder()):
            parent = tree.parent(vertex)
            if parent is None:
                continue
            eliminated = tree.eliminated_variable(vertex)
            edges.append(
                TreeEdge(
                    child=list(vertex.names),
                    parent=list(parent.names),
                    eliminates=eliminated.name if eliminated else None,
                )
            )
        report = TreeReport(
            order=[v.name for v in order],
            vertices=[list(v.names) for v in tree.vertices],
            edges=edges,
            max_frame_size=tree.max_frame_size(),
        )
        out.write(report.model_dump_json(indent=2) + "\n")
    else:
        out.write(f"order: {','.join(v.name for v in order)}\n")
        out.write(tree_to_text(tree))
    return EXIT_OK


Command = Callable[[Problem, argparse.Namespace, Settings, TextIO], int]

COMMANDS: dict[str, Command] = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "check": cmd_check,
    "tree": cmd_tree,
}


def load_problem(path: str, objective: Optional[str] = None) -> Problem:
    try:
        with open(path, encoding="utf-8-sig") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemParseError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ProblemParseError(f"{path} is not UTF-8 text: byte {exc.start} cannot be decoded") from exc
    problem = parse_problem(text)
    if objective is not None:
        problem = problem.with_sense(objective)
    return problem


def run_cli(
    argv: Optional[Sequence[str]] = None,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(level=args.log_level or settings.log_level, format="%(levelname)s: %(message)s")

    try:
        problem = load_problem(args.path, args.objective)
        return COMMANDS[args.command](problem, args, settings, out)
    except ProblemParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (OracleSizeError, EnumerationLimitError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SIZE
    except (SolverError, TreeError, ValuationError, ProblemError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
