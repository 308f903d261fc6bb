"""
Occurrence Engine
=================
Computes where a pattern occurs in the data tree.

Pipeline:
1. Candidates: one bitmap per pattern position (the occurrence lists of the
   two join parents, or full inverted lists).
2. Survivor pruning, bottom-up: a candidate node for position k survives only
   if every child position of k has a surviving candidate strictly inside the
   node's interval. Done with np.searchsorted over begin stamps.
3. Twig join, top-down: positions are assigned in depth-first order, each
   image drawn from the survivors inside its parent's image interval.
4. Sibling constraint: images of two children of one pattern node must not
   coincide or lie on one root-to-leaf path. Homomorphic tuples that pass it
   are exactly the embedded occurrences.

Occurrence lists never store the occurrence relation itself. compute_emb_ol
searches for one embedded tuple per uncovered (position, node) pair and
marks every image of each tuple it finds, so it visits at most one tuple per
surviving candidate instead of the whole relation.
"""

import logging
from bisect import bisect_left, bisect_right
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from mining.occlist import OccurrenceBitmap, OccurrenceListSet
from mining.pattern_core import Pattern
from mining.tree_store import DataTree
from utils.errors import UsageError

__all__ = [
    "OccurrenceListSet",
    "OccurrenceTuple",
    "twig_join_homomorphic",
    "sibling_filter",
    "compute_emb_ol",
    "compute_full_ol",
    "single_label_ol",
    "root_support",
    "occurrence_tuples",
    "project",
]

logger = logging.getLogger(__name__)

OccurrenceTuple = Tuple[int, ...]


class _TwigJoin:
    """
    Candidate-restricted twig join for one pattern.

    Attributes:
        survivors: Node ids per position after bottom-up pruning (ascending)
        survivor_begins: Begin stamps of survivors, for bisect lookups
    """

    def __init__(self, p: Pattern, candidates: Sequence[OccurrenceBitmap], tree: DataTree):
        if len(candidates) != p.size:
            raise UsageError(f"{len(candidates)} candidate bitmaps for a {p.size}-node pattern")
        self.p = p
        self.tree = tree
        self._begin = tree.begin_list
        self._end = tree.end_list

        nodes: List[np.ndarray] = []
        for position, bitmap in enumerate(candidates):
            if bitmap.label_id != p.labels[position]:
                raise UsageError(
                    f"position {position}: candidate label {bitmap.label_id} "
                    f"does not match pattern label {p.labels[position]}"
                )
            entries = tree.inverted_list(bitmap.label_id).entries
            if len(entries) != len(bitmap):
                raise UsageError(f"position {position}: bitmap does not match its inverted list")
            nodes.append(entries[bitmap.bits])

        survivors: List[np.ndarray] = [nodes[k] for k in range(p.size)]
        for position in range(p.size - 1, -1, -1):
            current = survivors[position]
            for child in p.children[position]:
                if current.size == 0:
                    break
                child_begin = tree.begin[survivors[child]]
                lo = np.searchsorted(child_begin, tree.begin[current], side="right")
                hi = np.searchsorted(child_begin, tree.end[current], side="left")
                current = current[hi > lo]
            survivors[position] = current

        self.survivors: List[List[int]] = [s.tolist() for s in survivors]
        self.survivor_begins: List[List[int]] = [tree.begin[s].tolist() for s in survivors]
        self._earlier_siblings = [
            tuple(s for s in p.children[p.parents[k]] if s < k) if k > 0 else ()
            for k in range(p.size)
        ]

    @property
    def empty(self) -> bool:
        return any(not s for s in self.survivors)

    def _choices(self, position: int, image: List[int]) -> Sequence[int]:
        if position == 0:
            return self.survivors[0]
        parent_node = image[self.p.parents[position]]
        begins = self.survivor_begins[position]
        lo = bisect_right(begins, self._begin[parent_node])
        hi = bisect_left(begins, self._end[parent_node])
        return self.survivors[position][lo:hi]

    def _apart(self, a: int, b: int) -> bool:
        if a == b:
            return False
        begin, end = self._begin, self._end
        if begin[a] < begin[b] < end[a]:
            return False
        return not (begin[b] < begin[a] < end[b])

    def _contains(self, outer: int, inner: int) -> bool:
        return self._begin[outer] < self._begin[inner] and self._end[inner] < self._end[outer]

    def tuples(
        self,
        embedded: bool,
        fixed: Optional[Tuple[int, int]] = None,
    ) -> Iterator[OccurrenceTuple]:
        """
        Stream tuples in lexicographic order of per-position begin stamps.

        Args:
            embedded: Enforce the sibling constraint while assigning
            fixed: Optional (position, node) every streamed tuple must use
        """
        if self.empty:
            return
        fixed_ancestors: Set[int] = set()
        if fixed is not None:
            position = self.p.parents[fixed[0]]
            while position != -1:
                fixed_ancestors.add(position)
                position = self.p.parents[position]
        image = [0] * self.p.size
        yield from self._assign(0, image, embedded, fixed, fixed_ancestors)

    def _assign(self, position, image, embedded, fixed, fixed_ancestors):
        if position == self.p.size:
            yield tuple(image)
            return
        choices = self._choices(position, image)
        if fixed is not None:
            fixed_position, fixed_node = fixed
            if position == fixed_position:
                choices = [fixed_node] if fixed_node in choices else []
            elif position in fixed_ancestors:
                choices = [n for n in choices if self._contains(n, fixed_node)]
        for node in choices:
            if embedded and not all(self._apart(node, image[s]) for s in self._earlier_siblings[position]):
                continue
            image[position] = node
            yield from self._assign(position + 1, image, embedded, fixed, fixed_ancestors)


def twig_join_homomorphic(
    p: Pattern,
    candidates: Sequence[OccurrenceBitmap],
    tree: DataTree,
) -> Iterator[OccurrenceTuple]:
    """
    Stream every homomorphic occurrence of p over the candidate nodes.

    Each tuple maps every pattern edge to a proper ancestor-descendant pair.
    Distinct positions may share an image.
    """
    return _TwigJoin(p, candidates, tree).tuples(embedded=False)


def sibling_filter(t: OccurrenceTuple, p: Pattern, tree: DataTree) -> bool:
    """True iff no two sibling images in t coincide or share a root-to-leaf path."""
    for kids in p.children:
        for a_index, a in enumerate(kids):
            for b in kids[a_index + 1:]:
                na, nb = t[a], t[b]
                if na == nb or tree.is_ancestor(na, nb) or tree.is_ancestor(nb, na):
                    return False
    return True


def _project_to_ol(
    p: Pattern,
    join: _TwigJoin,
    tree: DataTree,
) -> OccurrenceListSet:
    seen: List[Set[int]] = [set() for _ in range(p.size)]
    for position in range(p.size):
        for node in join.survivors[position]:
            if node in seen[position]:
                continue
            found = next(join.tuples(embedded=True, fixed=(position, node)), None)
            if found is None:
                continue
            for k, image_node in enumerate(found):
                seen[k].add(image_node)

    bitmaps = []
    for position, label in enumerate(p.labels):
        entries = tree.inverted_list(label).entries
        bits = np.zeros(len(entries), dtype=bool)
        if seen[position]:
            bits[np.searchsorted(entries, sorted(seen[position]))] = True
        bitmaps.append(OccurrenceBitmap(label, bits))
    return OccurrenceListSet.from_bitmaps(bitmaps)


def compute_emb_ol(
    q: Pattern,
    left_ol: OccurrenceListSet,
    right_ol: OccurrenceListSet,
    tree: DataTree,
) -> OccurrenceListSet:
    """
    Embedded occurrence lists of a join outcome.

    Args:
        q: Outcome of joining the left element with the right element
        left_ol: Occurrence lists of the left parent (q's immediate prefix)
        right_ol: Occurrence lists of the right parent; its last bitmap
                  bounds q's rightmost leaf
        tree: Data tree both lists index

    Returns:
        OccurrenceListSet whose k-th bitmap is the projection of OC(q) on k
    """
    if len(left_ol) != q.size - 1:
        raise UsageError(f"left parent has {len(left_ol)} positions, expected {q.size - 1}")
    candidates = list(left_ol.bitmaps) + [right_ol.bitmaps[-1]]
    return _project_to_ol(q, _TwigJoin(q, candidates, tree), tree)


def compute_full_ol(q: Pattern, tree: DataTree) -> OccurrenceListSet:
    """Embedded occurrence lists of any pattern, from full inverted lists."""
    candidates = [
        OccurrenceBitmap.full(label, len(tree.inverted_list(label))) for label in q.labels
    ]
    return _project_to_ol(q, _TwigJoin(q, candidates, tree), tree)


def single_label_ol(label: int, tree: DataTree) -> OccurrenceListSet:
    """A one-node pattern occurs at every node carrying its label."""
    return OccurrenceListSet.from_bitmaps(
        [OccurrenceBitmap.full(label, len(tree.inverted_list(label)))]
    )


def root_support(ol: OccurrenceListSet) -> int:
    return ol.root_support


def occurrence_tuples(q: Pattern, ol: OccurrenceListSet, tree: DataTree) -> Iterator[OccurrenceTuple]:
    """Stream OC(q), the embedded occurrence tuples, restricted to q's own lists."""
    return _TwigJoin(q, ol.bitmaps, tree).tuples(embedded=True)


def project(
    q: Pattern,
    ol: OccurrenceListSet,
    positions: Sequence[int],
    tree: DataTree,
) -> Set[OccurrenceTuple]:
    """Projection of OC(q) on the given positions, as a set of node tuples."""
    return {tuple(t[k] for k in positions) for t in occurrence_tuples(q, ol, tree)}
