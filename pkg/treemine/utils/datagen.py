"""
Synthetic Tree Generator
========================
Seeded random trees and forests in the line format, for tests and
benchmarks.

Two modes:

1. Random growth: each new node picks a uniformly random open parent
   (depth below max_depth, fan-out below max_fanout). Labels follow a Zipf
   distribution; with probability recursion_rate a node instead repeats
   the label of a random ancestor.
2. Template: a random template subtree is copied repeatedly under one root,
   each copy with a few mutated labels and the last one cut to fit
   node_count. Produces the deep, regular data where surrogates pay off.

node_count is exact and depth/fan-out bounds are never exceeded. A forest
splits node_count evenly over its trees.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from mining.tree_store import DataTree, format_tree_line, load_forest
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SEED = 7


@dataclass(frozen=True)
class GenProfile:
    """
    Generator parameters.

    Attributes:
        seed: Random seed; same seed, same output
        node_count: Total nodes over all trees
        max_depth: Deepest level (root = 0)
        max_fanout: Children per node
        label_count: Alphabet size
        zipf_skew: Exponent of the label distribution (0 = uniform)
        recursion_rate: Probability a node repeats an ancestor's label
        trees: Number of trees (lines)
        template_size: Copy a template of this many nodes (0 = random growth)
        mutation_rate: Per-node relabel probability in template copies
    """
    seed: int = DEFAULT_SEED
    node_count: int = 50
    max_depth: int = 4
    max_fanout: int = 4
    label_count: int = 5
    zipf_skew: float = 1.0
    recursion_rate: float = 0.0
    trees: int = 1
    template_size: int = 0
    mutation_rate: float = 0.0

    def validate(self) -> None:
        """
        Raises:
            ConfigError: a bound is out of range or cannot be met
        """
        if self.node_count < 1 or self.max_depth < 1 or self.max_fanout < 1 or self.label_count < 1:
            raise ConfigError("node_count, max_depth, max_fanout and label_count must be positive")
        if self.trees < 1 or self.trees > self.node_count:
            raise ConfigError(f"trees must be between 1 and node_count, got {self.trees}")
        if self.zipf_skew < 0:
            raise ConfigError(f"zipf_skew must be non-negative, got {self.zipf_skew}")
        if not 0.0 <= self.recursion_rate <= 1.0:
            raise ConfigError(f"recursion_rate must lie in [0, 1], got {self.recursion_rate}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError(f"mutation_rate must lie in [0, 1], got {self.mutation_rate}")
        if self.template_size < 0:
            raise ConfigError(f"template_size must be non-negative, got {self.template_size}")

        largest_tree = -(-self.node_count // self.trees)
        if self.template_size:
            if self.template_size > capacity(self.max_depth - 1, self.max_fanout):
                raise ConfigError(
                    f"template of {self.template_size} nodes does not fit depth "
                    f"{self.max_depth - 1} with fan-out {self.max_fanout}"
                )
            copies = -(-(largest_tree - 1) // self.template_size)
            if copies > self.max_fanout:
                raise ConfigError(f"{copies} template copies exceed fan-out {self.max_fanout}")
        elif largest_tree > capacity(self.max_depth, self.max_fanout):
            raise ConfigError(
                f"{largest_tree} nodes do not fit depth {self.max_depth} with fan-out {self.max_fanout}"
            )


PRESETS: Dict[str, Tuple[GenProfile, int]] = {
    "xmark-like": (
        GenProfile(node_count=5000, max_depth=6, max_fanout=1200, label_count=14,
                   zipf_skew=0.3, template_size=8, mutation_rate=0.01),
        300,
    ),
    "dblp-like": (
        GenProfile(node_count=3000, max_depth=3, max_fanout=40, label_count=20,
                   zipf_skew=1.2, trees=100),
        20,
    ),
    "cslogs-like": (
        GenProfile(node_count=2000, max_depth=8, max_fanout=3, label_count=12,
                   zipf_skew=1.0, recursion_rate=0.2, trees=200),
        100,
    ),
}


def preset(name: str, seed: Optional[int] = None) -> Tuple[GenProfile, int]:
    """Named profile and its suggested minsup."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    profile, minsup = PRESETS[name]
    if seed is not None:
        profile = replace(profile, seed=seed)
    return profile, minsup


def capacity(depth: int, fanout: int) -> int:
    """Most nodes a tree of the given depth and fan-out can hold."""
    return sum(fanout ** d for d in range(depth + 1))


def label_name(index: int) -> str:
    """A..Z, then A1..Z1, A2.."""
    letter = chr(ord("A") + index % 26)
    return letter if index < 26 else f"{letter}{index // 26}"


class _LabelSampler:
    def __init__(self, profile: GenProfile, rng: np.random.Generator):
        ranks = np.arange(1, profile.label_count + 1, dtype=float)
        weights = ranks ** -profile.zipf_skew
        self.probabilities = weights / weights.sum()
        self.recursion_rate = profile.recursion_rate
        self.rng = rng

    def draw(self) -> int:
        return int(self.rng.choice(self.probabilities.size, p=self.probabilities))

    def draw_for(self, ancestors: Sequence[int]) -> int:
        if ancestors and self.recursion_rate > 0 and self.rng.random() < self.recursion_rate:
            return ancestors[int(self.rng.integers(len(ancestors)))]
        return self.draw()


def _grow(size: int, max_depth: int, max_fanout: int, sampler: _LabelSampler,
          rng: np.random.Generator) -> Tuple[List[int], List[int]]:
    """Random tree in creation order: (labels, parents)."""
    parents = [-1]
    depth = [0]
    fanout = [0]
    labels = [sampler.draw()]
    ancestry: List[List[int]] = [[]]
    open_nodes = [0] if max_depth > 0 else []

    for node in range(1, size):
        slot = int(rng.integers(len(open_nodes)))
        parent = open_nodes[slot]
        parents.append(parent)
        depth.append(depth[parent] + 1)
        fanout.append(0)
        fanout[parent] += 1
        ancestry.append(ancestry[parent] + [labels[parent]])
        labels.append(sampler.draw_for(ancestry[node]))
        if fanout[parent] >= max_fanout:
            open_nodes[slot] = open_nodes[-1]
            open_nodes.pop()
        if depth[node] < max_depth:
            open_nodes.append(node)
    return labels, parents


def _preorder(labels: Sequence[int], parents: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Relayout a creation-order tree in depth-first order."""
    children: List[List[int]] = [[] for _ in labels]
    for node in range(1, len(parents)):
        children[parents[node]].append(node)
    out_labels: List[int] = []
    out_parents: List[int] = []
    stack = [(0, -1)]
    while stack:
        node, parent = stack.pop()
        position = len(out_labels)
        out_labels.append(labels[node])
        out_parents.append(parent)
        for child in reversed(children[node]):
            stack.append((child, position))
    return out_labels, out_parents


def _templated(size: int, profile: GenProfile, sampler: _LabelSampler,
               rng: np.random.Generator) -> Tuple[List[int], List[int]]:
    template_labels, template_parents = _preorder(
        *_grow(profile.template_size, profile.max_depth - 1, profile.max_fanout, sampler, rng)
    )
    labels = [sampler.draw()]
    parents = [-1]
    remaining = size - 1
    while remaining > 0:
        take = min(remaining, profile.template_size)
        offset = len(labels)
        for k in range(take):
            label = template_labels[k]
            if profile.mutation_rate > 0 and rng.random() < profile.mutation_rate:
                label = sampler.draw()
            labels.append(label)
            parents.append(0 if template_parents[k] == -1 else template_parents[k] + offset)
        remaining -= take
    return labels, parents


def generate(profile: GenProfile) -> str:
    """
    Tree file text for a profile, one line per tree.

    Raises:
        ConfigError: infeasible bounds
    """
    profile.validate()
    rng = np.random.default_rng(profile.seed)
    sampler = _LabelSampler(profile, rng)
    base, extra = divmod(profile.node_count, profile.trees)

    lines = []
    for index in range(profile.trees):
        size = base + (1 if index < extra else 0)
        if profile.template_size:
            labels, parents = _templated(size, profile, sampler, rng)
        else:
            labels, parents = _preorder(*_grow(size, profile.max_depth, profile.max_fanout, sampler, rng))
        lines.append(format_tree_line([label_name(label) for label in labels], parents))

    logger.debug(f"[OK] Generated {profile.trees} tree(s), {profile.node_count} nodes (seed {profile.seed})")
    return "\n".join(lines) + "\n"


def generate_tree(profile: GenProfile) -> DataTree:
    return load_forest(generate(profile))


def sample_profiles(
    count: int,
    seed: int = DEFAULT_SEED,
    nodes: Tuple[int, int] = (20, 60),
    labels: Tuple[int, int] = (3, 6),
) -> Iterator[GenProfile]:
    """
    Seeded stream of small random profiles for oracle comparisons.

    Depth 3..6 with fan-out 4..6 holds at least 85 nodes, so every
    node count up to that is feasible.
    """
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield GenProfile(
            seed=int(rng.integers(2 ** 31)),
            node_count=int(rng.integers(nodes[0], nodes[1] + 1)),
            max_depth=int(rng.integers(3, 7)),
            max_fanout=int(rng.integers(4, 7)),
            label_count=int(rng.integers(labels[0], labels[1] + 1)),
            zipf_skew=float(rng.uniform(0.0, 1.5)),
            recursion_rate=float(rng.uniform(0.0, 0.3)),
        )
