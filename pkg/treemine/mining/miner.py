"""
Miner
=====
Frequent, closed and maximal embedded tree pattern mining.

Strategies:

    base    enumerate every frequent pattern, then filter pairwise
    eager   check closedness during the search: elements that lose no
            root occurrence inside their class go through the closed set
    prune   eager plus surrogates, which skip search subtrees that cannot
            hold a closed pattern

All three walk the same search tree: classes of frequent 2-patterns first,
then depth-first class expansion by child and cousin joins. Only canonical
elements are expanded; their non-canonical class mates still serve as join
partners.

Output patterns have at least two nodes. Frequent single nodes are added
unfiltered when include_singletons is set.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from mining.closed_set import ClosedEntry, ClosedSet, filter_closed_pairwise
from mining.occlist import OccurrenceListSet
from mining.occurrence_engine import compute_emb_ol, single_label_ol
from mining.pattern_core import (
    CHILD,
    COUSIN,
    ClassElement,
    EquivalenceClass,
    Pattern,
    child_join,
    cousin_join,
    encode,
)
from mining.surrogates import SurrogateRecord, SurrogateTracker
from mining.tree_store import DataTree
from utils.errors import UsageError

logger = logging.getLogger(__name__)


class Algorithm(str, Enum):
    BASE = "base"
    EAGER = "eager"
    PRUNE = "prune"
    ORACLE = "oracle"


class Target(str, Enum):
    FREQUENT = "frequent"
    CLOSED = "closed"
    MAXIMAL = "maximal"


@dataclass
class MiningConfig:
    """
    Parameters of one mining run.

    Attributes:
        minsup: Root-frequency threshold (>= 1)
        max_size: Optional cap on pattern size; closedness is relative to it
        algorithm: base, eager, prune or oracle
        target: frequent, closed or maximal
        include_singletons: Also report frequent 1-node patterns
        use_disqualifiers: Run the projection filters on surrogate candidates
    """
    minsup: int
    max_size: Optional[int] = None
    algorithm: Algorithm = Algorithm.PRUNE
    target: Target = Target.CLOSED
    include_singletons: bool = False
    use_disqualifiers: bool = True

    def __post_init__(self):
        try:
            self.algorithm = Algorithm(self.algorithm)
            self.target = Target(self.target)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if isinstance(self.minsup, bool) or not isinstance(self.minsup, int) or self.minsup < 1:
            raise UsageError(f"minsup must be a positive integer, got {self.minsup!r}")
        if self.max_size is not None and (not isinstance(self.max_size, int) or self.max_size < 1):
            raise UsageError(f"max_size must be a positive integer, got {self.max_size!r}")

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["algorithm"] = self.algorithm.value
        data["target"] = self.target.value
        return data


@dataclass
class MiningStats:
    """
    Run counters.

    Attributes:
        computed: Join outcomes whose occurrence lists were computed
        frequent: Frequent canonical patterns visited by the search
        lclosed: Visited patterns that stayed locally closed
        lmax: Visited patterns with no canonical extension in their class
        closed, maximal: Output sizes
        candidates: Surrogate candidates recorded
        disqualified: Candidates dropped by the projection filters
        shortcut: Surrogates confirmed by position alone
        pruned: Search subtrees skipped
        verify_computed: Occurrence lists computed only for surrogate checks
        antimonotone_violations: Outcomes with more support than their prefix
    """
    computed: int = 0
    frequent: int = 0
    lclosed: int = 0
    lmax: int = 0
    closed: int = 0
    maximal: int = 0
    candidates: int = 0
    disqualified: int = 0
    shortcut: int = 0
    pruned: int = 0
    verify_computed: int = 0
    antimonotone_violations: int = 0

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass
class MinedPattern:
    """One output line."""
    pattern: Pattern
    encoding: str
    support: int
    node_counts: List[int]
    closed: bool = False
    maximal: bool = False

    @property
    def status(self) -> str:
        if self.maximal:
            return "max"
        if self.closed:
            return "closed"
        return "freq"

    @property
    def sort_key(self) -> Tuple[int, str]:
        return (self.pattern.size, self.encoding)


@dataclass
class MiningResult:
    config: MiningConfig
    patterns: List[MinedPattern]
    stats: MiningStats = field(default_factory=MiningStats)
    surrogates: List[SurrogateRecord] = field(default_factory=list)
    seconds: float = 0.0

    def encodings(self) -> Dict[str, int]:
        """encoding -> support, for set comparisons."""
        return {p.encoding: p.support for p in self.patterns}

    def by_status(self, status: str) -> List[MinedPattern]:
        return [p for p in self.patterns if p.status == status]


# =============================================================================
# LEVEL 1 AND 2
# =============================================================================

def mine_f1_f2(
    tree: DataTree,
    config: MiningConfig,
    stats: Optional[MiningStats] = None,
) -> Tuple[List[Tuple[int, OccurrenceListSet]], List[EquivalenceClass]]:
    """
    Frequent labels and the classes [a] of frequent a//b patterns.

    Returns:
        (frequent 1-patterns as (label id, lists), classes in label order)
    """
    stats = stats if stats is not None else MiningStats()
    f1 = []
    for label in sorted(tree.inverted):
        if len(tree.inverted[label]) >= config.minsup:
            f1.append((label, single_label_ol(label, tree)))

    classes: List[EquivalenceClass] = []
    if config.max_size is not None and config.max_size < 2:
        return f1, classes
    for a, a_ol in f1:
        cls = EquivalenceClass(Pattern.single(a))
        for b, b_ol in f1:
            q = Pattern((a, b), (-1, 0))
            ol = compute_emb_ol(q, a_ol, b_ol, tree)
            stats.computed += 1
            if ol.root_support >= config.minsup:
                cls.add(ClassElement(attach=0, label=b, pattern=q, ol=ol))
        if cls.elements:
            classes.append(cls)
    logger.info(
        f"[MINING] {len(f1)} frequent label(s), "
        f"{sum(len(c) for c in classes)} frequent 2-pattern(s) in {len(classes)} class(es)"
    )
    return f1, classes


# =============================================================================
# CLASS SEARCH
# =============================================================================

class _ClassSearch:
    """
    Depth-first expansion of equivalence classes.

    One instance per run. In enumeration mode it collects every frequent
    canonical pattern; in closed mode it maintains local flags and the
    closed set, and with a tracker it also handles surrogates.
    """

    def __init__(
        self,
        tree: DataTree,
        config: MiningConfig,
        stats: MiningStats,
        collect_closed: bool,
        tracker: Optional[SurrogateTracker] = None,
    ):
        self.tree = tree
        self.minsup = config.minsup
        self.max_size = config.max_size
        self.stats = stats
        self.collect_closed = collect_closed
        self.tracker = tracker
        # A pruned K-node pattern may owe its non-closedness to a (K+1)-node witness.
        self.prune_enabled = tracker is not None and config.max_size is None
        self.closed_set = ClosedSet()
        self.frequent: List[Tuple[Pattern, OccurrenceListSet]] = []
        self.records: List[SurrogateRecord] = []

    def run(self, classes: List[EquivalenceClass]) -> None:
        for cls in classes:
            self.expand(cls)

    def expand(self, cls: EquivalenceClass) -> None:
        elements = cls.elements
        m = cls.prefix.size
        at_cap = self.max_size is not None and m + 1 >= self.max_size

        for idx, x in enumerate(elements):
            if not x.canonical:
                continue
            if self.tracker is not None:
                self.tracker.begin_element()
                if self.prune_enabled and x.surrogates.confirmed_cousin_surrogate:
                    self.records.append(
                        SurrogateRecord(x.pattern, x.surrogates.confirmed_by.pattern, COUSIN, shortcut=True)
                    )
                    self.stats.pruned += 1
                    self.closed_set.observe(x.pattern, x.ol)
                    continue

            self.stats.frequent += 1
            outcomes: Dict[Tuple[str, int], Tuple[Pattern, OccurrenceListSet]] = {}
            expansion = [] if at_cap else self._join_all(x, idx, elements, m, outcomes)

            if self.collect_closed:
                locally_max = not any(e.canonical for e in expansion)
                if locally_max:
                    self.stats.lmax += 1
                if x.locally_closed:
                    self.stats.lclosed += 1
                    self.closed_set.check(x.pattern, x.ol, locally_max)
                else:
                    self.closed_set.observe(x.pattern, x.ol)
            else:
                self.frequent.append((x.pattern, x.ol))

            if not expansion:
                continue
            if self.prune_enabled:
                record = self.tracker.verified_surrogate(x, idx, elements, outcomes)
                if record is not None:
                    self.records.append(record)
                    self.stats.pruned += 1
                    logger.debug(f"[PRUNE] Skipping subtree of {x.pattern.labels} ({record.kind} surrogate)")
                    continue
            self.expand(EquivalenceClass(x.pattern, expansion))

    def _join_all(
        self,
        x: ClassElement,
        idx: int,
        elements: List[ClassElement],
        m: int,
        outcomes: Dict[Tuple[str, int], Tuple[Pattern, OccurrenceListSet]],
    ) -> List[ClassElement]:
        child_part: List[ClassElement] = []
        cousin_part: List[ClassElement] = []
        for zdx, z in enumerate(elements):
            for kind, join in ((CHILD, child_join), (COUSIN, cousin_join)):
                q = join(x, z)
                if q is None:
                    continue
                ol = compute_emb_ol(q, x.ol, z.ol, self.tree)
                self.stats.computed += 1
                outcomes[(kind, zdx)] = (q, ol)
                if ol.root_support > x.support:
                    self.stats.antimonotone_violations += 1
                    logger.warning(f"[WARNING] Support grew from {x.support} to {ol.root_support} at {q.labels}")
                if ol.root_support < self.minsup:
                    continue

                element = ClassElement(
                    attach=m if kind == CHILD else z.attach,
                    label=z.label,
                    pattern=q,
                    ol=ol,
                    canonical=q.is_canonical,
                )
                (child_part if kind == CHILD else cousin_part).append(element)
                if self.collect_closed:
                    if ol.root == x.ol.root:
                        x.locally_closed = False
                    if ol.root == z.ol.root:
                        z.locally_closed = False
                if self.tracker is not None and zdx > idx and element.canonical:
                    self.tracker.record_candidate(x, z, kind, q, ol)

            if self.tracker is not None and zdx > idx and z.attach == x.attach:
                self.tracker.disqualify(x, idx, zdx, elements, outcomes)
        return child_part + cousin_part


# =============================================================================
# STRATEGIES
# =============================================================================

def _mined(pattern: Pattern, ol: OccurrenceListSet, tree: DataTree, closed: bool, maximal: bool) -> MinedPattern:
    return MinedPattern(
        pattern=pattern,
        encoding=encode(pattern, tree.labels),
        support=ol.root_support,
        node_counts=ol.counts(),
        closed=closed,
        maximal=maximal,
    )


def _from_entries(entries: List[ClosedEntry], tree: DataTree, config: MiningConfig,
                  stats: MiningStats) -> List[MinedPattern]:
    stats.closed = len(entries)
    stats.maximal = sum(1 for e in entries if e.is_max)
    patterns = [_mined(e.pattern, e.ol, tree, True, e.is_max) for e in entries]
    if config.target == Target.MAXIMAL:
        patterns = [p for p in patterns if p.maximal]
    return patterns


def _finish(tree: DataTree, config: MiningConfig, patterns: List[MinedPattern], stats: MiningStats,
            f1: List[Tuple[int, OccurrenceListSet]], started: float,
            records: Optional[List[SurrogateRecord]] = None) -> MiningResult:
    if config.include_singletons:
        patterns = patterns + [_mined(Pattern.single(a), ol, tree, False, False) for a, ol in f1]
    patterns.sort(key=lambda p: p.sort_key)
    result = MiningResult(config, patterns, stats, records or [], time.perf_counter() - started)
    logger.info(
        f"[OK] {config.algorithm.value}/{config.target.value}: {len(patterns)} pattern(s), "
        f"{stats.computed} computed, {stats.pruned} pruned in {result.seconds:.2f}s"
    )
    return result


def mine_frequent(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Every frequent canonical pattern with two or more nodes."""
    started = time.perf_counter()
    stats = MiningStats()
    f1, classes = mine_f1_f2(tree, config, stats)
    search = _ClassSearch(tree, config, stats, collect_closed=False)
    search.run(classes)
    patterns = [_mined(p, ol, tree, False, False) for p, ol in search.frequent]
    return _finish(tree, config, patterns, stats, f1, started)


def mine_base(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Enumerate all frequent patterns, then keep the closed ones pairwise."""
    started = time.perf_counter()
    stats = MiningStats()
    f1, classes = mine_f1_f2(tree, config, stats)
    search = _ClassSearch(tree, config, stats, collect_closed=False)
    search.run(classes)
    logger.info(f"[MINING] base: filtering {len(search.frequent)} frequent pattern(s)")
    entries = filter_closed_pairwise(search.frequent)
    return _finish(tree, config, _from_entries(entries, tree, config, stats), stats, f1, started)


def mine_eager(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Closedness checked during the search through local flags and the closed set."""
    started = time.perf_counter()
    stats = MiningStats()
    f1, classes = mine_f1_f2(tree, config, stats)
    search = _ClassSearch(tree, config, stats, collect_closed=True)
    search.run(classes)
    entries = list(search.closed_set)
    return _finish(tree, config, _from_entries(entries, tree, config, stats), stats, f1, started)


def mine_prune(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Eager search that skips subtrees certified non-closed by a surrogate."""
    started = time.perf_counter()
    stats = MiningStats()
    f1, classes = mine_f1_f2(tree, config, stats)
    tracker = SurrogateTracker(tree, use_disqualifiers=config.use_disqualifiers)
    search = _ClassSearch(tree, config, stats, collect_closed=True, tracker=tracker)
    if not search.prune_enabled:
        logger.info("[PRUNE] Size cap set: surrogates are tracked but nothing is pruned")
    search.run(classes)
    stats.candidates = tracker.candidates
    stats.disqualified = tracker.disqualified
    stats.shortcut = tracker.shortcut
    stats.verify_computed = tracker.computed
    entries = list(search.closed_set)
    return _finish(tree, config, _from_entries(entries, tree, config, stats), stats, f1,
                   started, search.records)


def mine_oracle(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Brute-force ground truth in the same result shape (small inputs only)."""
    from oracle import run_oracle

    started = time.perf_counter()
    stats = MiningStats()
    result = run_oracle(tree, config.minsup, config.max_size)
    patterns = []
    for pattern, entry in result.frequent.items():
        if pattern.size < 2:
            continue
        closed = pattern in result.closed
        maximal = pattern in result.maximal
        if config.target == Target.CLOSED and not closed:
            continue
        if config.target == Target.MAXIMAL and not maximal:
            continue
        patterns.append(MinedPattern(
            pattern=pattern,
            encoding=encode(pattern, tree.labels),
            support=entry.support,
            node_counts=[len(images) for images in entry.images],
            closed=closed and config.target != Target.FREQUENT,
            maximal=maximal and config.target != Target.FREQUENT,
        ))
    stats.frequent = sum(1 for p in result.frequent if p.size >= 2)
    stats.closed = len(result.closed)
    stats.maximal = len(result.maximal)
    if config.include_singletons:
        patterns += [
            MinedPattern(p, encode(p, tree.labels), result.frequent[p].support,
                         [result.frequent[p].support])
            for p in result.frequent if p.size == 1
        ]
    return _finish(tree, config, patterns, stats, [], started)


_STRATEGIES = {
    Algorithm.BASE: mine_base,
    Algorithm.EAGER: mine_eager,
    Algorithm.PRUNE: mine_prune,
    Algorithm.ORACLE: mine_oracle,
}


def mine(tree: DataTree, config: MiningConfig) -> MiningResult:
    """Run the configured strategy; the frequent target always enumerates."""
    logger.info(
        f"[MINING] algo={config.algorithm.value} target={config.target.value} "
        f"minsup={config.minsup} max_size={config.max_size} on {tree.size} nodes"
    )
    if config.target == Target.FREQUENT and config.algorithm != Algorithm.ORACLE:
        return mine_frequent(tree, config)
    return _STRATEGIES[config.algorithm](tree, config)
