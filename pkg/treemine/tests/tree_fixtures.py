"""
Test Data and Reference Helpers
===============================
Small trees with hand-checked answers, seeded random trees and patterns,
and slow reference implementations that share no code with the miner.
"""

import itertools
import random
from typing import Iterator, List, Sequence, Set, Tuple

from mining.pattern_core import Pattern
from mining.tree_store import DataTree
from utils.datagen import GenProfile, generate_tree, sample_profiles

# A(B(C), B(C, D))
RUNNING_EXAMPLE = "A B C -1 -1 B C -1 D -1 -1"

# Every C sits under a B under an A, and every D under that C
SHARED_BRANCH = "A B C D -1 -1 -1\nA B C D -1 -1 -1\n"


def small_trees(count: int, seed: int = 11, nodes=(8, 20), labels=(2, 4)) -> List[DataTree]:
    """Seeded random trees, small enough for the brute-force oracle."""
    return [generate_tree(profile) for profile in sample_profiles(count, seed, nodes, labels)]


def random_tree(seed: int, nodes: int = 20, labels: int = 3) -> DataTree:
    return generate_tree(GenProfile(seed=seed, node_count=nodes, max_depth=4,
                                    max_fanout=4, label_count=labels, zipf_skew=0.5))


def random_pattern(rng: random.Random, label_ids: Sequence[int], size: int) -> Pattern:
    """Grow a pattern by rightmost extension with random labels and attach points."""
    p = Pattern.single(rng.choice(label_ids))
    while p.size < size:
        p = p.extend(rng.choice(label_ids), rng.choice(p.rightmost_path))
    return p


def ancestors_by_parent_chain(tree: DataTree) -> List[Set[int]]:
    parents = tree.parents.tolist()
    found: List[Set[int]] = []
    for node, parent in enumerate(parents):
        found.append(set() if parent == -1 else found[parent] | {parent})
    return found


def naive_homomorphic(tree: DataTree, p: Pattern) -> Set[Tuple[int, ...]]:
    """Every label-preserving map sending pattern edges to ancestor pairs, by exhaustive product."""
    ancestors = ancestors_by_parent_chain(tree)
    pools = [tree.inverted_list(label).entries.tolist() for label in p.labels]
    found = set()
    for image in itertools.product(*pools):
        if all(image[p.parents[k]] in ancestors[image[k]] for k in range(1, p.size)):
            found.add(image)
    return found


def all_orderings(p: Pattern) -> Iterator[Pattern]:
    """Every sibling reordering of p, as depth-first layouts."""

    def layouts(position: int) -> Iterator[List[Tuple[int, int]]]:
        # (label, parent offset) runs, parent offset relative to the subtree root
        kids = p.children[position]
        for order in itertools.permutations(kids):
            for parts in itertools.product(*(list(layouts(k)) for k in order)):
                run = [(p.labels[position], -1)]
                for part in parts:
                    base = len(run)
                    for label, parent in part:
                        run.append((label, 0 if parent == -1 else parent + base))
                yield run

    for run in layouts(0):
        yield Pattern(tuple(label for label, _ in run), tuple(parent for _, parent in run))
