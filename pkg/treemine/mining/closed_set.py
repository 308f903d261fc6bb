"""
Closed Set
==========
The evolving collection of closed candidates and the pairwise closedness
filter used by the post-processing miner.

Criterion: frequent P is not closed iff some frequent proper embedded
superpattern Q has L_root(P|Q) = L_root(P). P is not maximal iff any
frequent proper embedded superpattern exists.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from mining.embedding_matcher import embeds, union_at
from mining.occlist import OccurrenceListSet
from mining.pattern_core import Pattern

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ClosedEntry:
    """
    One closed candidate.

    Attributes:
        pattern: Canonical pattern (two or more nodes)
        ol: Its embedded occurrence lists
        is_max: Cleared once a frequent proper superpattern is seen
    """
    pattern: Pattern
    ol: OccurrenceListSet
    is_max: bool = True

    @property
    def support(self) -> int:
        return self.ol.root_support


class ClosedSet:
    """
    Closed candidates plus the pool of every other frequent pattern seen.

    Root lists do not carry through inner positions: P can lose closedness
    to Q while Q itself loses closedness to a pattern that keeps only Q's
    root images. Every visited pattern therefore stays a witness, whether it
    was ever a closed candidate or not.

    Two patterns seen by the set never stand in the relation "p embeds into
    q with equal conditional root list" with p still an entry.
    """

    def __init__(self):
        self.entries: List[ClosedEntry] = []
        self._label_counts: List[Counter] = []
        self._witnesses: List[Tuple[Pattern, OccurrenceListSet, Counter]] = []

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def _evict_covered(self, pattern: Pattern, ol: OccurrenceListSet, counts: Counter) -> None:
        """Drop entries that pattern covers and clear maximality of the ones it contains."""
        survivors: List[ClosedEntry] = []
        survivor_counts: List[Counter] = []
        for entry, entry_counts in zip(self.entries, self._label_counts):
            if entry.pattern.size < pattern.size and not (entry_counts - counts):
                images = embeds(entry.pattern, pattern)
                if images:
                    entry.is_max = False
                    if union_at(ol, images) == entry.ol.root:
                        logger.debug(f"[MINING] Evicted {entry.pattern.labels} (covered by {pattern.labels})")
                        self._witnesses.append((entry.pattern, entry.ol, entry_counts))
                        continue
            survivors.append(entry)
            survivor_counts.append(entry_counts)
        self.entries = survivors
        self._label_counts = survivor_counts

    def _covering(self, pattern: Pattern, ol: OccurrenceListSet, counts: Counter,
                  others: Iterable[Tuple[Pattern, OccurrenceListSet, Counter]]) -> Tuple[bool, bool]:
        """(closed, has frequent superpattern) of pattern against larger patterns."""
        has_super = False
        for other, other_ol, other_counts in others:
            if other.size <= pattern.size or counts - other_counts:
                continue
            images = embeds(pattern, other)
            if not images:
                continue
            has_super = True
            if union_at(other_ol, images) == ol.root:
                return False, True
        return True, has_super

    def observe(self, pattern: Pattern, ol: OccurrenceListSet) -> None:
        """Register a frequent pattern that is known not to be closed."""
        counts = Counter(pattern.labels)
        self._evict_covered(pattern, ol, counts)
        self._witnesses.append((pattern, ol, counts))

    def check(self, pattern: Pattern, ol: OccurrenceListSet, locally_max: bool = True) -> Optional[ClosedEntry]:
        """
        Compare a locally closed pattern against everything seen so far and
        insert it if closed.

        Args:
            pattern: Canonical, locally closed pattern
            ol: Its occurrence lists
            locally_max: Initial maximality flag

        Returns:
            The inserted entry, or None if the pattern is not closed
        """
        counts = Counter(pattern.labels)
        self._evict_covered(pattern, ol, counts)
        entries = [(e.pattern, e.ol, c) for e, c in zip(self.entries, self._label_counts)]
        closed, has_super = self._covering(pattern, ol, counts, entries)
        if closed:
            closed, witnessed = self._covering(pattern, ol, counts, self._witnesses)
            has_super = has_super or witnessed
        if not closed:
            self._witnesses.append((pattern, ol, counts))
            return None
        added = ClosedEntry(pattern, ol, locally_max and not has_super)
        self.entries.append(added)
        self._label_counts.append(counts)
        return added


def check_closed_max_subpattern(closed_set: ClosedSet, pattern: Pattern, ol: OccurrenceListSet,
                                locally_max: bool = True) -> Optional[ClosedEntry]:
    return closed_set.check(pattern, ol, locally_max)


def filter_closed_pairwise(
    frequent: Iterable[Tuple[Pattern, OccurrenceListSet]],
) -> List[ClosedEntry]:
    """
    Keep the closed patterns of a complete frequent set, flagging maximal ones.

    Quadratic in the number of frequent patterns; the label multiset check
    skips most pairs before the embedding search runs.
    """
    items = list(frequent)
    counts = [Counter(p.labels) for p, _ in items]
    result: List[ClosedEntry] = []
    for i, (p, ol) in enumerate(items):
        closed = True
        is_max = True
        for j, (q, ol_q) in enumerate(items):
            if q.size <= p.size or counts[i] - counts[j]:
                continue
            images = embeds(p, q)
            if not images:
                continue
            is_max = False
            if union_at(ol_q, images) == ol.root:
                closed = False
                break
        if closed:
            result.append(ClosedEntry(p, ol, is_max))
    return result
