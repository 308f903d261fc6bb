"""
Brute-Force Oracle
==================
Ground truth for small inputs, written without any of the miner's
occurrence machinery: no regional stamps, no inverted lists, no bitmaps.

- Host: a plain parent/children view with explicit ancestor sets. The data
  tree and every pattern can serve as a host.
- Embeddings: backtracking that assigns pattern positions in order, each
  image a strict descendant of its parent's image and apart from the images
  of earlier siblings.
- Shapes: unordered patterns as nested tuples (label, sorted child shapes),
  so isomorphic patterns collapse to one value without any canonical-form
  code from the miner.
- Enumeration: level by level, a leaf added under every node of every
  frequent shape with every frequent label.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from mining.pattern_core import Pattern, canonical_form
from mining.tree_store import DataTree

logger = logging.getLogger(__name__)

Shape = Tuple[int, tuple]


@dataclass(frozen=True)
class Host:
    """Tree to embed into, as label and parent arrays plus derived views."""
    labels: Tuple[int, ...]
    parents: Tuple[int, ...]

    @classmethod
    def from_tree(cls, tree: DataTree) -> "Host":
        return cls(tuple(tree.label_ids.tolist()), tuple(tree.parents.tolist()))

    @classmethod
    def from_pattern(cls, p: Pattern) -> "Host":
        return cls(p.labels, p.parents)

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def ancestors(self) -> List[FrozenSet[int]]:
        found: List[FrozenSet[int]] = []
        for parent in self.parents:
            found.append(frozenset() if parent == -1 else found[parent] | {parent})
        return found

    @cached_property
    def by_label(self) -> Dict[int, List[int]]:
        found: Dict[int, List[int]] = {}
        for node, label in enumerate(self.labels):
            found.setdefault(label, []).append(node)
        return found


def iter_embeddings(
    host: Host,
    p: Pattern,
    fixed: Optional[Tuple[int, int]] = None,
) -> Iterator[Tuple[int, ...]]:
    """
    Every injective, label- and descendant-preserving map of p into host
    whose sibling images are pairwise apart.

    Args:
        fixed: (position, node) pins one pattern position to a host node
    """
    ancestors = host.ancestors
    siblings_before = [
        [s for s in range(1, k) if p.parents[s] == p.parents[k]] for k in range(p.size)
    ]
    # pattern positions on the path to the pinned one must map onto host ancestors of the pin
    above_pin: Set[int] = set()
    if fixed is not None:
        k = p.parents[fixed[0]]
        while k != -1:
            above_pin.add(k)
            k = p.parents[k]
    image: List[int] = []

    def apart(a: int, b: int) -> bool:
        return a != b and a not in ancestors[b] and b not in ancestors[a]

    def assign(k: int) -> Iterator[Tuple[int, ...]]:
        if k == p.size:
            yield tuple(image)
            return
        if fixed is not None and k == fixed[0]:
            options = [fixed[1]] if host.labels[fixed[1]] == p.labels[k] else []
        else:
            options = host.by_label.get(p.labels[k], [])
        if k > 0:
            parent_image = image[p.parents[k]]
            options = [n for n in options if parent_image in ancestors[n]]
        if k in above_pin:
            options = [n for n in options if n in ancestors[fixed[1]]]
        for node in options:
            if node in image:
                continue
            if not all(apart(node, image[s]) for s in siblings_before[k]):
                continue
            image.append(node)
            yield from assign(k + 1)
            image.pop()

    yield from assign(0)


# =============================================================================
# SHAPES
# =============================================================================

def _normalize(label: int, children: Sequence[Shape]) -> Shape:
    return (label, tuple(sorted(children)))


def pattern_to_shape(p: Pattern) -> Shape:
    built: List[Optional[Shape]] = [None] * p.size
    for position in range(p.size - 1, -1, -1):
        built[position] = _normalize(p.labels[position], [built[c] for c in p.children[position]])
    return built[0]


def shape_to_pattern(shape: Shape) -> Pattern:
    """Depth-first layout of a shape, normalized with the miner's canonical form."""
    labels: List[int] = []
    parents: List[int] = []

    def walk(node: Shape, parent: int) -> None:
        position = len(labels)
        labels.append(node[0])
        parents.append(parent)
        for child in node[1]:
            walk(child, position)

    walk(shape, -1)
    return canonical_form(Pattern(tuple(labels), tuple(parents)))


def shape_size(shape: Shape) -> int:
    return 1 + sum(shape_size(c) for c in shape[1])


def add_leaf_everywhere(shape: Shape, label: int) -> Iterator[Shape]:
    """Shapes with one new leaf under any node."""
    own, kids = shape
    yield _normalize(own, kids + ((label, ()),))
    for i, kid in enumerate(kids):
        for grown in add_leaf_everywhere(kid, label):
            yield _normalize(own, kids[:i] + (grown,) + kids[i + 1:])


def insert_above_everywhere(shape: Shape, label: int) -> Iterator[Shape]:
    """Shapes with one new node between any node and a non-empty subset of its children."""
    own, kids = shape
    indices = range(len(kids))
    for r in range(1, len(kids) + 1):
        for chosen in combinations(indices, r):
            inner = _normalize(label, [kids[i] for i in chosen])
            rest = [kids[i] for i in indices if i not in chosen]
            yield _normalize(own, rest + [inner])
    for i, kid in enumerate(kids):
        for grown in insert_above_everywhere(kid, label):
            yield _normalize(own, kids[:i] + (grown,) + kids[i + 1:])


def single_node_extensions(shape: Shape, labels: Sequence[int]) -> Set[Shape]:
    """All shapes with exactly one node more that contain the shape."""
    found: Set[Shape] = set()
    for label in labels:
        found.update(add_leaf_everywhere(shape, label))
        found.update(insert_above_everywhere(shape, label))
        found.add((label, (shape,)))
    return found


# =============================================================================
# ENUMERATION AND FILTERING
# =============================================================================

@dataclass
class OracleEntry:
    """
    Attributes:
        shape: Unordered shape
        pattern: Canonical layout of the shape
        support: Distinct root images
        images: Per-position sets of data nodes used by some embedding
    """
    shape: Shape
    pattern: Pattern
    support: int
    images: List[Set[int]]


@dataclass
class OracleResult:
    frequent: Dict[Pattern, OracleEntry] = field(default_factory=dict)
    closed: Set[Pattern] = field(default_factory=set)
    maximal: Set[Pattern] = field(default_factory=set)


def _evaluate(host: Host, shape: Shape) -> OracleEntry:
    """Per-position images: for each position and candidate node, look for one embedding pinned there."""
    pattern = shape_to_pattern(shape)
    images: List[Set[int]] = [set() for _ in range(pattern.size)]
    for k in range(pattern.size):
        for node in host.by_label.get(pattern.labels[k], []):
            if node in images[k]:
                continue
            embedding = next(iter_embeddings(host, pattern, fixed=(k, node)), None)
            if embedding is None:
                continue
            for position, image in enumerate(embedding):
                images[position].add(image)
    return OracleEntry(shape, pattern, len(images[0]), images)


def enumerate_frequent_naive(tree: DataTree, minsup: int, max_size: Optional[int] = None) -> Dict[Shape, OracleEntry]:
    """
    Every frequent unordered pattern up to max_size nodes, keyed by shape.

    Root frequency is anti-monotone, so growing only frequent shapes by one
    leaf at a time reaches every frequent shape.
    """
    host = Host.from_tree(tree)
    labels = sorted(label for label, nodes in host.by_label.items() if label >= 0 and len(nodes) >= minsup)
    frequent: Dict[Shape, OracleEntry] = {}
    level: List[Shape] = []
    for label in labels:
        shape = (label, ())
        frequent[shape] = _evaluate(host, shape)
        level.append(shape)

    size = 1
    while level and (max_size is None or size < max_size):
        grown: Set[Shape] = set()
        for shape in level:
            for label in labels:
                grown.update(add_leaf_everywhere(shape, label))
        level = []
        for shape in sorted(grown):
            entry = _evaluate(host, shape)
            if entry.support >= minsup:
                frequent[shape] = entry
                level.append(shape)
        size += 1
        logger.debug(f"[VERIFY] Oracle level {size}: {len(level)} frequent shape(s)")
    return frequent


def _root_list_given(p: Pattern, q_entry: OracleEntry) -> Optional[Set[int]]:
    """L_root(P|Q) as a set of data nodes, or None if p does not embed into q."""
    q_host = Host.from_pattern(q_entry.pattern)
    roots = {embedding[0] for embedding in iter_embeddings(q_host, p)}
    if not roots:
        return None
    covered: Set[int] = set()
    for r in roots:
        covered |= q_entry.images[r]
    return covered


def filter_closed_naive(frequent: Dict[Shape, OracleEntry]) -> Tuple[Set[Shape], Set[Shape]]:
    """
    Closed and maximal shapes (two or more nodes) of a complete frequent set.

    A shape loses closedness to a frequent proper superpattern that keeps its
    whole root list, and maximality to any frequent proper superpattern. The
    single-node-extension sweep runs first; the pairwise pass catches the
    remaining witnesses.
    """
    labels = sorted({shape[0] for shape in frequent if not shape[1]})
    closed: Set[Shape] = set()
    maximal: Set[Shape] = set()
    ordered = sorted(frequent, key=shape_size)

    for shape in ordered:
        entry = frequent[shape]
        if entry.pattern.size < 2:
            continue
        is_closed, is_max = True, True

        for ext in single_node_extensions(shape, labels):
            ext_entry = frequent.get(ext)
            if ext_entry is None:
                continue
            is_max = False
            covered = _root_list_given(entry.pattern, ext_entry)
            if covered == entry.images[0]:
                is_closed = False
                break

        if is_closed:
            for other in ordered:
                other_entry = frequent[other]
                if other_entry.pattern.size <= entry.pattern.size:
                    continue
                covered = _root_list_given(entry.pattern, other_entry)
                if covered is None:
                    continue
                is_max = False
                if covered == entry.images[0]:
                    is_closed = False
                    break

        if is_closed:
            closed.add(shape)
            if is_max:
                maximal.add(shape)
    return closed, maximal


def run_oracle(tree: DataTree, minsup: int, max_size: Optional[int] = None) -> OracleResult:
    """Frequent, closed and maximal patterns by exhaustive search."""
    frequent = enumerate_frequent_naive(tree, minsup, max_size)
    closed, maximal = filter_closed_naive(frequent)
    result = OracleResult()
    for shape, entry in frequent.items():
        result.frequent[entry.pattern] = entry
    result.closed = {frequent[s].pattern for s in closed}
    result.maximal = {frequent[s].pattern for s in maximal}
    logger.info(
        f"[VERIFY] Oracle: {len(result.frequent)} frequent, "
        f"{len(result.closed)} closed, {len(result.maximal)} maximal"
    )
    return result
