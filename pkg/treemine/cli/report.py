"""
Run Reports and Pattern Output
==============================
Pattern lines go to stdout or --out; the run report is a separate JSON file.

Text line:   <encoding>\t<support>\t<max|closed|freq>
JSON line:   {"pattern", "support", "status", "size", "node_counts"}
"""

import json
import logging
import tracemalloc
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO

from mining.miner import MinedPattern, MiningResult

logger = logging.getLogger(__name__)


@dataclass
class RunReport:
    """
    Summary of one mine run.

    Attributes:
        config: Mining parameters
        counters: Search statistics (computed, frequent, lclosed, lmax, ...)
        tree: Dataset statistics of the input
        patterns: Number of output lines
        wall_seconds: Mining time, loading excluded
        peak_memory_bytes: tracemalloc peak during mining
    """
    config: Dict[str, object]
    counters: Dict[str, int]
    tree: Dict[str, float] = field(default_factory=dict)
    patterns: int = 0
    wall_seconds: float = 0.0
    peak_memory_bytes: Optional[int] = None

    @classmethod
    def from_result(cls, result: MiningResult, tree_stats: Dict[str, float],
                    peak_memory_bytes: Optional[int] = None) -> "RunReport":
        return cls(
            config=result.config.to_dict(),
            counters=result.stats.to_dict(),
            tree=tree_stats,
            patterns=len(result.patterns),
            wall_seconds=round(result.seconds, 6),
            peak_memory_bytes=peak_memory_bytes,
        )

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")
        logger.info(f"[OK] Report written to {path}")


class PeakMemory:
    """Context manager reporting the tracemalloc peak of its block."""

    def __init__(self):
        self.peak: Optional[int] = None
        self._owner = False

    def __enter__(self) -> "PeakMemory":
        if not tracemalloc.is_tracing():
            tracemalloc.start()
            self._owner = True
        tracemalloc.reset_peak()
        return self

    def __exit__(self, *exc) -> None:
        self.peak = tracemalloc.get_traced_memory()[1]
        if self._owner:
            tracemalloc.stop()


def format_line(pattern: MinedPattern) -> str:
    return f"{pattern.encoding}\t{pattern.support}\t{pattern.status}"


def format_json(pattern: MinedPattern) -> str:
    return json.dumps({
        "pattern": pattern.encoding,
        "support": pattern.support,
        "status": pattern.status,
        "size": pattern.pattern.size,
        "node_counts": pattern.node_counts,
    })


def write_patterns(patterns: Iterable[MinedPattern], stream: TextIO, as_json: bool = False) -> int:
    """Write one line per pattern; returns the number written."""
    written = 0
    for pattern in patterns:
        stream.write((format_json(pattern) if as_json else format_line(pattern)) + "\n")
        written += 1
    return written


def pattern_diff(expected: Iterable[MinedPattern], actual: Iterable[MinedPattern]) -> List[str]:
    """
    Lines present on one side only, compared on (encoding, support, status).

    Returns:
        "- ..." for expected-only lines, "+ ..." for actual-only lines
    """
    want = {format_line(p) for p in expected}
    got = {format_line(p) for p in actual}
    return [f"- {line}" for line in sorted(want - got)] + [f"+ {line}" for line in sorted(got - want)]
