"""
Surrogate Pruning
=================
Bookkeeping that lets the prune miner skip whole search subtrees.

Inside class [P] (prefix size m), an earlier element x is a surrogate
candidate of a later element y when joining them keeps every occurrence of
y (condition (a)):

    P_y  is occurrence-equivalent to  x (x) y      (x inserted at position m)

The join kind names the candidate: child (y hangs under x) or cousin (y
stays at its own position). A cousin candidate sitting deeper than y on
the rightmost path is confirmed at once by the position shortcut.
Everything else stays a candidate until:

1. Disqualifiers: while x is joined with later elements z at x's position,
   necessary conditions on occurrence projections drop candidates early.
2. Verification: before [P_y] is expanded, condition (b) is checked on the
   double expansions for every z from y onward. Only a candidate passing it
   prunes the subtree of y.

Occurrence equivalence of p into q (q is p with one node inserted) means the
projection of OC(q) onto p's positions covers all of OC(p). The reverse
inclusion always holds, so per-position bitmap equality is a cheap
necessary pre-check before tuples are compared.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from mining.occlist import OccurrenceListSet
from mining.occurrence_engine import compute_emb_ol, compute_full_ol, project
from mining.pattern_core import CHILD, COUSIN, ClassElement, Pattern
from mining.tree_store import DataTree

logger = logging.getLogger(__name__)

Outcomes = Mapping[Tuple[str, int], Tuple[Pattern, OccurrenceListSet]]


@dataclass(frozen=True)
class SurrogateRecord:
    """
    One confirmed surrogate, kept for auditing.

    Attributes:
        pruned: Class element whose subtree was skipped
        surrogate: Earlier element certifying it
        kind: "child" or "cousin"
        shortcut: Confirmed by position alone, without verification
    """
    pruned: Pattern
    surrogate: Pattern
    kind: str
    shortcut: bool = False


def _shifted(size: int, inserted_at: int) -> Tuple[int, ...]:
    return tuple(k if k < inserted_at else k + 1 for k in range(size))


def occurrence_equivalent(
    p: Pattern,
    q: Pattern,
    inserted_at: int,
    tree: DataTree,
    p_ol: Optional[OccurrenceListSet] = None,
    q_ol: Optional[OccurrenceListSet] = None,
    p_tuples: Optional[FrozenSet[Tuple[int, ...]]] = None,
) -> bool:
    """
    True iff every embedded occurrence of p extends to one of q.

    Args:
        p: Smaller pattern
        q: p with one node inserted at position inserted_at
        inserted_at: q position of the new node; p position k maps to k
                     below it and to k + 1 from it on
        tree: Data tree
        p_ol, q_ol: Occurrence lists, computed from the tree when omitted
        p_tuples: OC(p) if the caller already holds it
    """
    if p_ol is None:
        p_ol = compute_full_ol(p, tree)
    if p_ol.root_support == 0:
        return True
    if q_ol is None:
        q_ol = compute_full_ol(q, tree)
    mapping = _shifted(p.size, inserted_at)
    for k, mapped in enumerate(mapping):
        if p_ol.bitmaps[k] != q_ol.bitmaps[mapped]:
            return False
    if p_tuples is None:
        p_tuples = frozenset(project(p, p_ol, range(p.size), tree))
    covered = project(q, q_ol, mapping, tree)
    return p_tuples <= covered


class SurrogateTracker:
    """
    Surrogate state for one prune run.

    Occurrence lists and projections needed by the checks are cached per
    processed element and dropped when the next element starts.
    """

    def __init__(self, tree: DataTree, use_disqualifiers: bool = True):
        self.tree = tree
        self.use_disqualifiers = use_disqualifiers
        self.candidates = 0
        self.disqualified = 0
        self.shortcut = 0
        self.computed = 0
        self._projections: Dict[Tuple[Pattern, Tuple[int, ...]], FrozenSet[Tuple[int, ...]]] = {}
        self._ols: Dict[Pattern, OccurrenceListSet] = {}

    def begin_element(self) -> None:
        self._projections.clear()
        self._ols.clear()

    def _projection(self, pattern: Pattern, ol: OccurrenceListSet, positions: Sequence[int]):
        key = (pattern, tuple(positions))
        found = self._projections.get(key)
        if found is None:
            found = frozenset(project(pattern, ol, positions, self.tree))
            self._projections[key] = found
        return found

    def _joined_ol(self, pattern: Pattern, left_ol: OccurrenceListSet,
                   right_ol: OccurrenceListSet) -> OccurrenceListSet:
        found = self._ols.get(pattern)
        if found is None:
            found = compute_emb_ol(pattern, left_ol, right_ol, self.tree)
            self.computed += 1
            self._ols[pattern] = found
        return found

    # -------------------------------------------------------------------------
    # Condition (a)
    # -------------------------------------------------------------------------

    def record_candidate(
        self,
        left: ClassElement,
        right: ClassElement,
        kind: str,
        outcome: Pattern,
        outcome_ol: OccurrenceListSet,
    ) -> bool:
        """
        Record left as a surrogate candidate of right if right's pattern is
        occurrence-equivalent to their join outcome.

        Returns:
            True if a candidate was recorded
        """
        m = left.pattern.size - 1
        if not occurrence_equivalent(right.pattern, outcome, m, self.tree,
                                     p_ol=right.ol, q_ol=outcome_ol):
            return False
        self.candidates += 1
        state = right.surrogates
        if kind == CHILD:
            state.child.append(left)
        else:
            state.cousin.append(left)
            if left.attach > right.attach and state.confirmed_by is None:
                state.confirmed_by = left
                self.shortcut += 1
                logger.debug(f"[PRUNE] Shortcut: {left.pattern.labels} confirms {right.pattern.labels}")
        return True

    # -------------------------------------------------------------------------
    # Disqualifiers
    # -------------------------------------------------------------------------

    def disqualify(
        self,
        x: ClassElement,
        idx: int,
        zdx: int,
        elements: Sequence[ClassElement],
        outcomes: Outcomes,
    ) -> int:
        """
        Drop candidates x of every y strictly between x and z that fail a
        necessary projection condition. z must sit at x's position.

        Returns:
            Number of candidates removed
        """
        if not self.use_disqualifiers:
            return 0
        z = elements[zdx]
        m = x.pattern.size - 1
        prefix_positions = tuple(range(m))
        joined_positions = tuple(range(m + 1))
        removed = 0

        for ydx in range(idx + 1, zdx):
            y = elements[ydx]
            state = y.surrogates

            if any(c is x for c in state.child):
                keep = True
                if self._projection(y.pattern, y.ol, prefix_positions) == \
                        self._projection(z.pattern, z.ol, prefix_positions):
                    covered = self._projection(*outcomes[(CHILD, ydx)], joined_positions)
                    keep = (
                        covered <= self._projection(*outcomes[(CHILD, zdx)], joined_positions)
                        or covered <= self._projection(*outcomes[(COUSIN, zdx)], joined_positions)
                    )
                if not keep:
                    state.child = [c for c in state.child if c is not x]
                    removed += 1

            if any(c is x for c in state.cousin) and state.confirmed_by is not x:
                outcome = outcomes.get((COUSIN, ydx))
                if outcome is None:
                    continue
                spread = self._projection(*outcome, joined_positions)
                under_x = self._projection(*outcomes[(CHILD, zdx)], joined_positions)
                swapped = z.pattern.extend(x.label, m)
                swapped_ol = self._joined_ol(swapped, z.ol, x.ol)
                over_z = self._projection(swapped, swapped_ol, prefix_positions + (m + 1,))
                # a true cousin surrogate keeps spread apart from both
                if not (spread.isdisjoint(under_x) and spread.isdisjoint(over_z)):
                    state.cousin = [c for c in state.cousin if c is not x]
                    removed += 1

        if removed:
            self.disqualified += removed
            logger.debug(f"[PRUNE] Disqualified {removed} candidate(s) of {x.pattern.labels}")
        return removed

    # -------------------------------------------------------------------------
    # Condition (b)
    # -------------------------------------------------------------------------

    def verified_surrogate(
        self,
        y: ClassElement,
        idx: int,
        elements: Sequence[ClassElement],
        outcomes: Outcomes,
    ) -> Optional[SurrogateRecord]:
        """
        First candidate of y that passes condition (b) for every z from y on.

        Args:
            y: Element about to be expanded (elements[idx])
            idx: Its class index
            elements: The class, in class order
            outcomes: y's own join outcomes keyed by (kind, index)
        """
        m = y.pattern.size - 1
        for x in y.surrogates.child:
            if self._child_condition(x, y, idx, m, elements, outcomes):
                return SurrogateRecord(y.pattern, x.pattern, CHILD)
        for x in y.surrogates.cousin:
            if self._cousin_condition(x, y, idx, m, elements, outcomes):
                return SurrogateRecord(y.pattern, x.pattern, COUSIN)
        return None

    def _child_condition(self, x, y, idx, m, elements, outcomes) -> bool:
        stem = x.pattern.extend(y.label, m)
        stem_ol = self._joined_ol(stem, x.ol, y.ol)
        for zdx in range(idx, len(elements)):
            z = elements[zdx]
            if z.attach != y.attach:
                continue
            a, a_ol = outcomes[(COUSIN, zdx)]
            under_x = stem.extend(z.label, m)
            beside_x = stem.extend(z.label, y.attach)
            if occurrence_equivalent(a, under_x, m, self.tree, a_ol,
                                     self._joined_ol(under_x, stem_ol, z.ol)):
                continue
            if occurrence_equivalent(a, beside_x, m, self.tree, a_ol,
                                     self._joined_ol(beside_x, stem_ol, z.ol)):
                continue
            return False
        return True

    def _cousin_condition(self, x, y, idx, m, elements, outcomes) -> bool:
        stem = x.pattern.extend(y.label, y.attach)
        stem_ol = self._joined_ol(stem, x.ol, y.ol)
        for zdx in range(idx, len(elements)):
            z = elements[zdx]
            a, a_ol = outcomes[(COUSIN, zdx)]
            both = stem.extend(z.label, z.attach)
            if not occurrence_equivalent(a, both, m, self.tree, a_ol,
                                         self._joined_ol(both, stem_ol, z.ol)):
                return False
        return True
