"""
Embedding Matcher
=================
Unordered embedding tests between two patterns.

P embeds into Q when an injective, label-preserving map sends every P edge
to an ancestor-descendant pair of Q and keeps sibling images apart (neither
equal nor on one path). Deciding this is NP-complete in general, so the
matcher is a memoized backtracking search with cheap per-pair filters:

- label equality
- subtree size and height of the P node fit under the Q node
- label multiset of the P subtree is contained in the Q subtree's

matches(pn, qn) answers "can P's subtree at pn embed with pn -> qn". Child
subtrees of pn are then placed on pairwise-apart descendants of qn; apart
images have disjoint subtrees, so the whole map stays injective.
"""

import logging
from collections import Counter
from typing import Dict, List, Sequence, Tuple

import numpy as np

from mining.occlist import OccurrenceBitmap, OccurrenceListSet, bitmap_or
from mining.pattern_core import Pattern
from utils.errors import UsageError

logger = logging.getLogger(__name__)

RootImageSet = Tuple[int, ...]


class _SubtreeMatcher:
    """Memoized pn -> qn subtree embedding decisions for one (P, Q) pair."""

    def __init__(self, p: Pattern, q: Pattern):
        self.p = p
        self.q = q
        self._memo: Dict[Tuple[int, int], bool] = {}
        self._p_labels = _subtree_label_counts(p)
        self._q_labels = _subtree_label_counts(q)

    def _inside(self, outer: int, inner: int) -> bool:
        return outer < inner < outer + self.q.subtree_sizes[outer]

    def _apart(self, a: int, b: int) -> bool:
        return a != b and not self._inside(a, b) and not self._inside(b, a)

    def matches(self, pn: int, qn: int) -> bool:
        key = (pn, qn)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._decide(pn, qn)
            self._memo[key] = cached
        return cached

    def _decide(self, pn: int, qn: int) -> bool:
        p, q = self.p, self.q
        if p.labels[pn] != q.labels[qn]:
            return False
        if p.subtree_sizes[pn] > q.subtree_sizes[qn] or p.heights[pn] > q.heights[qn]:
            return False
        if self._p_labels[pn] - self._q_labels[qn]:
            return False

        kids = p.children[pn]
        if not kids:
            return True
        descendants = range(qn + 1, qn + q.subtree_sizes[qn])
        options: List[List[int]] = []
        for child in kids:
            found = [d for d in descendants if self.matches(child, d)]
            if not found:
                return False
            options.append(found)
        order = sorted(range(len(kids)), key=lambda k: len(options[k]))
        return self._assign([options[k] for k in order], [])

    def _assign(self, options: Sequence[List[int]], chosen: List[int]) -> bool:
        if len(chosen) == len(options):
            return True
        for image in options[len(chosen)]:
            if all(self._apart(image, other) for other in chosen):
                chosen.append(image)
                if self._assign(options, chosen):
                    return True
                chosen.pop()
        return False


def _subtree_label_counts(p: Pattern) -> List[Counter]:
    counts = [Counter({label: 1}) for label in p.labels]
    for position in range(p.size - 1, 0, -1):
        counts[p.parents[position]] += counts[position]
    return counts


def embeds(p: Pattern, q: Pattern) -> RootImageSet:
    """
    Positions of q that root(p) maps to under some embedding of p into q.

    Returns:
        Ascending q positions; empty iff p is not an embedded subpattern of q
    """
    if p.size > q.size:
        return ()
    if Counter(p.labels) - Counter(q.labels):
        return ()
    matcher = _SubtreeMatcher(p, q)
    root_label = p.labels[0]
    return tuple(r for r in range(q.size) if q.labels[r] == root_label and matcher.matches(0, r))


def is_embedded_subpattern(p: Pattern, q: Pattern) -> bool:
    return bool(embeds(p, q))


def union_at(ol: OccurrenceListSet, positions: Sequence[int]) -> OccurrenceBitmap:
    """OR of the occurrence lists at the given positions (all sharing one label)."""
    if not positions:
        raise UsageError("cannot take the union of zero occurrence lists")
    result = ol.bitmaps[positions[0]]
    for position in positions[1:]:
        result = bitmap_or(result, ol.bitmaps[position])
    return result


def l_root_given(p: Pattern, q: Pattern, ol_q: OccurrenceListSet) -> OccurrenceBitmap:
    """
    L_root(P|Q): union of Q's occurrence lists at every image of root(P).

    Raises:
        UsageError: p is not an embedded subpattern of q
    """
    images = embeds(p, q)
    if not images:
        raise UsageError("l_root_given needs p to be an embedded subpattern of q")
    return union_at(ol_q, images)


def root_list_preserved(p_root: OccurrenceBitmap, p: Pattern, q: Pattern, ol_q: OccurrenceListSet) -> bool:
    """True iff q is an embedded superpattern of p with L_root(P|Q) = L_root(P)."""
    images = embeds(p, q)
    if not images:
        return False
    return bool(np.array_equal(union_at(ol_q, images).bits, p_root.bits))
