"""Command-line front end.

Subcommands: validate, reach, behaviors, compare, generate. Human output
goes to stdout, diagnostics to stderr. Exit codes are part of the
contract: 0 success, 1 usage, 2 parse/validation, 3 state or path
explosion, 4 no terminal markings, 5 endpoint failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ._version import __version__
from .alignment import InvalidAlignment
from .diagnostics import ContractCheckError, errors_of
from .formats import (
    ParseError,
    parse_alignment,
    parse_net,
    serialize_report,
)
from .genharness import (
    EndpointError,
    GenerationConfig,
    NoCodeProduced,
    generate_candidate,
)
from .metrics import EmptyCandidateSet, EmptyGroundSet, compare
from .petri import InvalidNet, insert_loop_controls, validate_net
from .reachability import (
    DEFAULT_LIMITS,
    ExplorationLimits,
    NoTerminalMarkings,
    PathExplosion,
    StateExplosion,
    build_reachability_graph,
    enumerate_behaviors,
    find_dead_transitions,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_EXPLOSION = 3
EXIT_NO_TERMINAL = 4
EXIT_ENDPOINT = 5

ENV_ENDPOINT = "CONTRACTCHECK_ENDPOINT"


class _UsageError(SystemExit):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits with the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_limit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-states", type=int, default=DEFAULT_LIMITS.max_states,
                        help="state budget for reachability construction")
    parser.add_argument("--max-paths", type=int, default=DEFAULT_LIMITS.max_paths,
                        help="behavior budget for path enumeration")
    parser.add_argument("--max-depth", type=int, default=DEFAULT_LIMITS.max_depth,
                        help="maximum behavior length")


def build_parser() -> _Parser:
    parser = _Parser(prog="contractcheck",
                     description="Petri-net behavior comparison and compliance metrics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_validate = sub.add_parser("validate", parents=[], help="check a .pnet file")
    p_validate.add_argument("net", help="path to a .pnet file")

    p_reach = sub.add_parser("reach", help="build the reachability graph")
    p_reach.add_argument("net")
    p_reach.add_argument("--lcp-auto", action="store_true",
                         help="insert loop-control places before exploring")
    _add_limit_flags(p_reach)

    p_beh = sub.add_parser("behaviors", help="enumerate canonical behaviors")
    p_beh.add_argument("net")
    p_beh.add_argument("--lcp-auto", action="store_true",
                       help="insert loop-control places before exploring")
    p_beh.add_argument("--allow-no-terminal", action="store_true",
                       help="return an empty set instead of failing without terminals")
    p_beh.add_argument("--quiet", action="store_true", help="print only the count")
    _add_limit_flags(p_beh)

    p_cmp = sub.add_parser("compare", help="score a candidate net against a ground net")
    p_cmp.add_argument("--ground", required=True)
    p_cmp.add_argument("--candidate", required=True)
    p_cmp.add_argument("--align", required=True)
    p_cmp.add_argument("--report", help="write the JSON report to this path")
    p_cmp.add_argument("--format", choices=("table", "json"), default="table",
                       help="stdout format")
    p_cmp.add_argument("--round", type=int, default=2, dest="digits",
                       help="decimal digits in rendered ratios")
    p_cmp.add_argument("--figures", help="directory for rendered figure files")
    p_cmp.add_argument("--lcp-auto", action="store_true",
                       help="insert loop-control places into both nets")
    p_cmp.add_argument("--no-prune", action="store_true",
                       help="ignore illegal-sequence pruning")
    p_cmp.add_argument("--exclude-pruned", action="store_true",
                       help="drop pruned behaviors from the precision denominator")
    p_cmp.add_argument("--allow-no-terminal", action="store_true")
    _add_limit_flags(p_cmp)

    p_gen = sub.add_parser("generate", help="drive a generation endpoint")
    p_gen.add_argument("--contract", required=True, help="legal contract text file")
    p_gen.add_argument("--endpoint", help=f"chat endpoint URL (or ${ENV_ENDPOINT})")
    p_gen.add_argument("--model", default="default")
    p_gen.add_argument("--attempts", type=int, default=3)
    p_gen.add_argument("--temperature", type=float, default=0.8)
    p_gen.add_argument("--top-p", type=float, default=0.9)
    p_gen.add_argument("--top-k", type=int, default=40)
    p_gen.add_argument("--timeout", type=float, default=60.0)
    p_gen.add_argument("--out", default="generated", help="run directory for outputs")
    return parser


def _limits(args) -> ExplorationLimits:
    try:
        return ExplorationLimits(args.max_states, args.max_paths, args.max_depth)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_net(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read '{path}': {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return parse_net(text)


def _load_alignment(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read '{path}': {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return parse_alignment(text)


def _cmd_validate(args) -> int:
    net = _load_net(args.net)
    diagnostics = validate_net(net)
    for diag in diagnostics:
        print(str(diag), file=sys.stderr)
    if errors_of(diagnostics):
        return EXIT_INVALID
    print(
        f"OK: {net.name} ({len(net.places)} places, {len(net.transitions)} "
        f"transitions, {len(net.arcs)} arcs)"
    )
    return EXIT_OK


def _cmd_reach(args) -> int:
    net = _load_net(args.net)
    if args.lcp_auto:
        net = insert_loop_controls(net)
    rg = build_reachability_graph(net, _limits(args))
    print(
        f"{net.name}: {len(rg.nodes)} states, {len(rg.edges)} edges, "
        f"{len(rg.terminals)} terminal markings"
    )
    dead = find_dead_transitions(net, rg)
    if dead:
        print(f"warning: dead transitions: {', '.join(sorted(dead))}", file=sys.stderr)
    return EXIT_OK


def _cmd_behaviors(args) -> int:
    net = _load_net(args.net)
    if args.lcp_auto:
        net = insert_loop_controls(net)
    limits = _limits(args)
    rg = build_reachability_graph(net, limits)
    behaviors = enumerate_behaviors(rg, limits, allow_no_terminal=args.allow_no_terminal)
    print(f"{len(behaviors)} behaviors")
    if not args.quiet:
        for i, behavior in enumerate(behaviors, start=1):
            print(f"{i}: {behavior}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    ground = _load_net(args.ground)
    candidate = _load_net(args.candidate)
    align = _load_alignment(args.align)
    if args.lcp_auto:
        ground = insert_loop_controls(ground)
        candidate = insert_loop_controls(candidate)
    report = compare(
        ground,
        candidate,
        align,
        _limits(args),
        prune=not args.no_prune,
        include_pruned_in_total=not args.exclude_pruned,
        allow_no_terminal=args.allow_no_terminal,
    )
    for diag in report.diagnostics:
        print(str(diag), file=sys.stderr)
    sys.stdout.write(serialize_report(report, args.format, args.digits))
    if args.report:
        Path(args.report).write_text(
            serialize_report(report, "json", args.digits), encoding="utf-8"
        )
        print(f"report written to {args.report}", file=sys.stderr)
    if args.figures:
        from .figures import render_report_figures

        written = render_report_figures(report, args.figures, args.digits)
        for path in written:
            print(f"figure written to {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_generate(args) -> int:
    endpoint = args.endpoint or os.environ.get(ENV_ENDPOINT)
    if not endpoint:
        print(
            f"error: no endpoint; pass --endpoint or set ${ENV_ENDPOINT}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        contract_text = Path(args.contract).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read '{args.contract}': {exc}", file=sys.stderr)
        return EXIT_INVALID
    config = GenerationConfig(
        endpoint=endpoint,
        model=args.model,
        temperature=args.temperature,
        top_p=args.top_p,
        top_k=args.top_k,
        max_attempts=args.attempts,
        timeout=args.timeout,
    )
    result = generate_candidate(config, contract_text, run_dir=args.out)
    print(f"code extracted after {len(result.attempts)} attempt(s)")
    print(f"written to {Path(args.out) / 'candidate.sol'}")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "reach": _cmd_reach,
    "behaviors": _cmd_behaviors,
    "compare": _cmd_compare,
    "generate": _cmd_generate,
}


def run(argv=None) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ParseError, InvalidNet, InvalidAlignment, EmptyGroundSet, EmptyCandidateSet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (StateExplosion, PathExplosion) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXPLOSION
    except NoTerminalMarkings as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_TERMINAL
    except (EndpointError, NoCodeProduced) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except ContractCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
