"""
Preset Benchmark Script
=======================
Mines each shipped synthetic preset with the eager and the prune miner and
compares the search counters.

Process:
1. Generates the preset tree (seeded, so every run sees the same data)
2. Mines closed patterns with eager, then with prune
3. Checks both return the same patterns
4. Prints computed / pruned counters and the reduction factor

Only xmark-like is tuned to show the reduction; dblp-like and cslogs-like
are there for runtime and shape comparisons.

Usage:
    python treemine/scripts/bench_presets.py
    python treemine/scripts/bench_presets.py --preset xmark-like --minsup 250
    python treemine/scripts/bench_presets.py --json results/bench.json
"""

import argparse
import json
import sys
from pathlib import Path

from tqdm import tqdm

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.miner import MiningConfig, mine
from utils.datagen import PRESETS, generate_tree, preset


def bench_preset(name: str, minsup_override: int = None, seed: int = None) -> dict:
    """
    Run eager and prune on one preset.

    Returns:
        Row with counters, timings and the computed-pattern reduction factor
    """
    profile, minsup = preset(name, seed)
    minsup = minsup_override or minsup
    tree = generate_tree(profile)

    runs = {}
    for algorithm in ("eager", "prune"):
        runs[algorithm] = mine(tree, MiningConfig(minsup=minsup, algorithm=algorithm))

    eager, prune = runs["eager"], runs["prune"]
    same = eager.encodings() == prune.encodings() and \
        [p.status for p in eager.patterns] == [p.status for p in prune.patterns]
    return {
        "preset": name,
        "nodes": tree.size,
        "minsup": minsup,
        "closed": len(prune.patterns),
        "frequent_eager": eager.stats.frequent,
        "computed_eager": eager.stats.computed,
        "computed_prune": prune.stats.computed,
        "verify_computed": prune.stats.verify_computed,
        "pruned": prune.stats.pruned,
        "shortcut": prune.stats.shortcut,
        "seconds_eager": round(eager.seconds, 3),
        "seconds_prune": round(prune.seconds, 3),
        "reduction": round(eager.stats.computed / max(prune.stats.computed, 1), 2),
        "same_output": same,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description="Benchmark eager vs prune on synthetic presets")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="Run one preset only")
    parser.add_argument("--minsup", type=int, default=None, help="Override the preset's minsup")
    parser.add_argument("--seed", type=int, default=None, help="Override the preset's seed")
    parser.add_argument("--json", help="Also write the rows as JSON")
    args = parser.parse_args()

    print("\n" + "=" * 60)
    print("PRESET BENCHMARK: EAGER vs PRUNE")
    print("=" * 60)

    names = [args.preset] if args.preset else sorted(PRESETS)
    rows = []
    for name in tqdm(names, desc="Presets"):
        rows.append(bench_preset(name, args.minsup, args.seed))

    failed = False
    for row in rows:
        print(f"\n{row['preset']} ({row['nodes']} nodes, minsup {row['minsup']})")
        print(f"   closed patterns:  {row['closed']}")
        print(f"   computed eager:   {row['computed_eager']}")
        print(f"   computed prune:   {row['computed_prune']} (+{row['verify_computed']} for checks)")
        print(f"   subtrees pruned:  {row['pruned']} ({row['shortcut']} by shortcut)")
        print(f"   time eager/prune: {row['seconds_eager']}s / {row['seconds_prune']}s")
        print(f"   reduction:        {row['reduction']}x")
        if not row["same_output"]:
            print("   ❌ eager and prune disagree")
            failed = True
        elif row["computed_prune"] > row["computed_eager"]:
            print("   ❌ prune computed more patterns than eager")
            failed = True
        else:
            print("   ✅ same output")

    if args.json:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
        print(f"\n💾 Saved {out}")

    print("\n" + "=" * 60)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
