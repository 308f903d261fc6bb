"""
Command-Line Commands
=====================
Subcommands:

    mine    mine frequent / closed / maximal patterns from a tree file
    verify  compare the miners against the brute-force oracle
    gen     write a synthetic tree file
    stats   print dataset statistics

Exit codes:
    0  success
    1  input could not be read or parsed
    2  bad flags or configuration
    3  verify found a difference
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from mining.miner import Algorithm, MiningConfig, Target, mine
from mining.tree_store import DataTree, load_forest, load_forest_file, tree_statistics
from utils.datagen import DEFAULT_SEED, PRESETS, GenProfile, generate, preset
from utils.errors import ConfigError, ParseError, UsageError
from cli.report import PeakMemory, RunReport, pattern_diff, write_patterns

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3

MINER_ALGORITHMS = [Algorithm.BASE.value, Algorithm.EAGER.value, Algorithm.PRUNE.value]


def default_seed() -> int:
    raw = os.getenv("TREEMINE_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"TREEMINE_SEED must be an integer, got {raw!r}") from None


# =============================================================================
# INPUT / OUTPUT
# =============================================================================

def read_tree(source: Optional[str], fmt: str) -> DataTree:
    """Load from a path, or from stdin when source is None or '-'."""
    if source and source != "-":
        return load_forest_file(source, fmt)
    if fmt == "xml":
        from utils.xml_loader import load_xml
        return load_xml(sys.stdin.buffer.read())
    return load_forest(sys.stdin.read())


def _open_out(path: Optional[str]):
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target.open("w", encoding="utf-8", newline="\n")
    return None


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def _config(args: argparse.Namespace, algorithm: str) -> MiningConfig:
    return MiningConfig(
        minsup=args.minsup,
        max_size=args.max_size,
        algorithm=algorithm,
        target=args.target,
        include_singletons=getattr(args, "include_singletons", False),
        use_disqualifiers=not getattr(args, "no_disqualifiers", False),
    )


def cmd_mine(args: argparse.Namespace) -> int:
    config = _config(args, args.algo)
    tree = read_tree(args.input, args.format)

    with PeakMemory() as memory:
        result = mine(tree, config)

    out = _open_out(args.out)
    try:
        written = write_patterns(result.patterns, out or sys.stdout, as_json=args.json)
    finally:
        if out is not None:
            out.close()
    logger.info(f"[OK] Wrote {written} pattern(s)")

    if args.report:
        RunReport.from_result(result, tree_statistics(tree), memory.peak).save(Path(args.report))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    tree = read_tree(args.input, args.format)
    expected = mine(tree, _config(args, Algorithm.ORACLE.value))
    algorithms = [args.algo] if args.algo else MINER_ALGORITHMS

    mismatches = 0
    for algorithm in algorithms:
        actual = mine(tree, _config(args, algorithm))
        diff = pattern_diff(expected.patterns, actual.patterns)
        if diff:
            mismatches += 1
            logger.error(f"[ERROR] {algorithm} differs from the oracle in {len(diff)} line(s)")
            for line in diff:
                print(f"{algorithm}\t{line}")
        else:
            logger.info(f"[VERIFY] {algorithm}: {len(actual.patterns)} pattern(s) match the oracle")

    print(f"verified {len(algorithms)} algorithm(s): {'MISMATCH' if mismatches else 'OK'}")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    if args.preset:
        profile, minsup = preset(args.preset, seed)
        logger.info(f"[OK] Preset {args.preset} (suggested minsup {minsup})")
    else:
        profile = GenProfile(
            seed=seed,
            node_count=args.nodes,
            max_depth=args.depth,
            max_fanout=args.fanout,
            label_count=args.labels,
            zipf_skew=args.skew,
            recursion_rate=args.recursion,
            trees=args.trees,
            template_size=args.template_size,
            mutation_rate=args.mutation,
        )
    text = generate(profile)

    out = _open_out(args.out)
    try:
        (out or sys.stdout).write(text)
    finally:
        if out is not None:
            out.close()
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    tree = read_tree(args.input, args.format)
    print(json.dumps(tree_statistics(tree), indent=2))
    return EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="Tree file (default: stdin, also '-')")
    parser.add_argument("--format", choices=["lines", "xml"], default="lines", help="Input format")


def _add_mining(parser: argparse.ArgumentParser, algo_required: bool) -> None:
    parser.add_argument("--minsup", type=_positive_int, required=True, help="Root-frequency threshold")
    parser.add_argument("--max-size", type=_positive_int, default=None, help="Largest pattern size")
    parser.add_argument("--target", choices=[t.value for t in Target], default=Target.CLOSED.value)
    parser.add_argument(
        "--algo",
        choices=MINER_ALGORITHMS,
        default=Algorithm.PRUNE.value if algo_required else None,
        help="Mining algorithm" if algo_required else "Check one algorithm only (default: all)",
    )
    parser.add_argument("--no-disqualifiers", action="store_true",
                        help="Skip the projection filters on surrogate candidates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treemine",
        description="Mine closed and maximal embedded unordered tree patterns",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="Mine patterns")
    _add_input(p_mine)
    _add_mining(p_mine, algo_required=True)
    p_mine.add_argument("--out", help="Pattern output file (default: stdout)")
    p_mine.add_argument("--json", action="store_true", help="JSON lines with per-node counts")
    p_mine.add_argument("--report", help="Write a JSON run report here")
    p_mine.add_argument("--include-singletons", action="store_true",
                        help="Also list frequent single-node patterns")
    p_mine.set_defaults(handler=cmd_mine)

    p_verify = sub.add_parser("verify", help="Compare miners against the oracle")
    _add_input(p_verify)
    _add_mining(p_verify, algo_required=False)
    p_verify.set_defaults(handler=cmd_verify)

    p_gen = sub.add_parser("gen", help="Generate a synthetic tree file")
    p_gen.add_argument("--preset", choices=sorted(PRESETS), help="Named profile")
    p_gen.add_argument("--seed", type=int, default=None, help="Random seed (default: TREEMINE_SEED or 7)")
    p_gen.add_argument("--nodes", type=_positive_int, default=50)
    p_gen.add_argument("--depth", type=_positive_int, default=4)
    p_gen.add_argument("--fanout", type=_positive_int, default=4)
    p_gen.add_argument("--labels", type=_positive_int, default=5)
    p_gen.add_argument("--skew", type=float, default=1.0)
    p_gen.add_argument("--recursion", type=float, default=0.0)
    p_gen.add_argument("--trees", type=_positive_int, default=1)
    p_gen.add_argument("--template-size", type=int, default=0)
    p_gen.add_argument("--mutation", type=float, default=0.0)
    p_gen.add_argument("--out", help="Output file (default: stdout)")
    p_gen.set_defaults(handler=cmd_gen)

    p_stats = sub.add_parser("stats", help="Print dataset statistics")
    _add_input(p_stats)
    p_stats.set_defaults(handler=cmd_stats)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags, run one subcommand and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        return args.handler(args)
    except (UsageError, ConfigError) as e:
        logger.error(f"[ERROR] {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        logger.error(f"[ERROR] Could not parse input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"[ERROR] I/O failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"[ERROR] Unexpected failure in {args.command}: {e}", exc_info=True)
        return EXIT_INPUT
