"""
Oracle Corpus Sweep
===================
Runs every miner against the brute-force oracle on a seeded corpus of
small random trees.

Checks per tree:
1. base, eager and prune output equals the oracle's closed (or maximal)
   patterns, supports and statuses included
2. No join outcome ever had more support than its prefix
3. Every surrogate prune confirmed is sound: neither the pruned pattern
   nor anything grown from it is closed (uncapped runs only, since a size
   cap turns pruning off)

Usage:
    python treemine/scripts/verify_corpus.py                      # 500 trees, max size 5
    python treemine/scripts/verify_corpus.py --uncapped --count 100 --nodes 10 18
"""

import argparse
import sys
from pathlib import Path

from tqdm import tqdm

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.miner import MiningConfig, mine
from mining.pattern_core import is_prefix_of
from utils.datagen import DEFAULT_SEED, generate_tree, sample_profiles

ALGORITHMS = ("base", "eager", "prune")


def check_tree(tree, minsup: int, max_size, target: str) -> list:
    """Return a list of failure messages for one tree (empty when all is well)."""
    failures = []
    expected = mine(tree, MiningConfig(minsup=minsup, max_size=max_size, algorithm="oracle"))
    want = {
        (p.encoding, p.support, p.status) for p in expected.patterns
        if target == "closed" or p.maximal
    }
    oracle_closed = [p.pattern for p in expected.patterns]

    for algorithm in ALGORITHMS:
        result = mine(tree, MiningConfig(minsup=minsup, max_size=max_size, algorithm=algorithm, target=target))
        got = {(p.encoding, p.support, p.status) for p in result.patterns}
        if got != want:
            failures.append(
                f"{algorithm}: missing {sorted(want - got)[:3]}, extra {sorted(got - want)[:3]}"
            )
        if result.stats.antimonotone_violations:
            failures.append(f"{algorithm}: {result.stats.antimonotone_violations} support increase(s)")
        for record in result.surrogates:
            if any(is_prefix_of(record.pruned, closed) for closed in oracle_closed):
                failures.append(f"{algorithm}: unsound {record.kind} surrogate for {record.pruned.labels}")
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description="Compare all miners with the oracle on random trees")
    parser.add_argument("--count", type=int, default=500, help="Number of trees")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--nodes", type=int, nargs=2, default=(20, 60), metavar=("MIN", "MAX"))
    parser.add_argument("--labels", type=int, nargs=2, default=(3, 6), metavar=("MIN", "MAX"))
    parser.add_argument("--max-size", type=int, default=5)
    parser.add_argument("--uncapped", action="store_true", help="No size cap (keep trees small)")
    parser.add_argument("--target", choices=["closed", "maximal"], default="closed")
    args = parser.parse_args()

    max_size = None if args.uncapped else args.max_size

    print("\n" + "=" * 60)
    print("ORACLE CORPUS SWEEP")
    print("=" * 60)
    print(f"   trees: {args.count}, nodes {args.nodes[0]}-{args.nodes[1]}, "
          f"max size: {max_size or 'none'}, target: {args.target}")

    failed = 0
    profiles = sample_profiles(args.count, args.seed, tuple(args.nodes), tuple(args.labels))
    for index, profile in enumerate(tqdm(profiles, total=args.count, desc="Trees")):
        tree = generate_tree(profile)
        for minsup in (2, 3):
            failures = check_tree(tree, minsup, max_size, args.target)
            if failures:
                failed += 1
                tqdm.write(f"❌ tree {index} (seed {profile.seed}), minsup {minsup}:")
                for message in failures:
                    tqdm.write(f"   {message}")

    print("\n" + "=" * 60)
    if failed:
        print(f"❌ {failed} failing run(s)")
        return 1
    print(f"✅ All {args.count * 2} runs match the oracle")
    return 0


if __name__ == "__main__":
    sys.exit(main())
