"""
Occurrence List Bitmaps
=======================
Occurrence lists stored as bitmaps over a label's inverted list.

Bit k of a bitmap for label x refers to the k-th entry of InvertedList(x),
not to a global node id. Same-label bitmaps can be combined directly:

    AND  -> intersection (restricting candidates)
    OR   -> union (L_root(P|Q) over several root images)

OccurrenceListSet groups one bitmap per pattern position; position 0 is the
root list whose population count is the pattern's root support.
"""

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from mining.tree_store import InvertedList
from utils.errors import UsageError


@dataclass(frozen=True, eq=False)
class OccurrenceBitmap:
    """
    Bit set over InvertedList(label_id).

    Attributes:
        label_id: Label whose inverted list indexes the bits
        bits: Read-only boolean array, one flag per inverted-list entry
    """
    label_id: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def empty(cls, label_id: int, length: int) -> "OccurrenceBitmap":
        return cls(label_id, np.zeros(length, dtype=bool))

    @classmethod
    def full(cls, label_id: int, length: int) -> "OccurrenceBitmap":
        return cls(label_id, np.ones(length, dtype=bool))

    @classmethod
    def from_positions(cls, label_id: int, length: int, positions: Iterable[int]) -> "OccurrenceBitmap":
        bits = np.zeros(length, dtype=bool)
        bits[list(positions)] = True
        return cls(label_id, bits)

    @classmethod
    def from_string(cls, label_id: int, text: str) -> "OccurrenceBitmap":
        return cls(label_id, np.array([ch == "1" for ch in text], dtype=bool))

    def __len__(self) -> int:
        return int(self.bits.size)

    def __and__(self, other: "OccurrenceBitmap") -> "OccurrenceBitmap":
        return bitmap_and(self, other)

    def __or__(self, other: "OccurrenceBitmap") -> "OccurrenceBitmap":
        return bitmap_or(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OccurrenceBitmap):
            return NotImplemented
        return self.label_id == other.label_id and np.array_equal(self.bits, other.bits)

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def positions(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def to_string(self) -> str:
        return "".join("1" if bit else "0" for bit in self.bits.tolist())


def _check_compatible(a: OccurrenceBitmap, b: OccurrenceBitmap) -> None:
    if a.label_id != b.label_id:
        raise UsageError(f"bitmap label mismatch: {a.label_id} vs {b.label_id}")
    if len(a) != len(b):
        raise UsageError(f"bitmap length mismatch: {len(a)} vs {len(b)}")


def bitmap_and(a: OccurrenceBitmap, b: OccurrenceBitmap) -> OccurrenceBitmap:
    _check_compatible(a, b)
    return OccurrenceBitmap(a.label_id, np.bitwise_and(a.bits, b.bits))


def bitmap_or(a: OccurrenceBitmap, b: OccurrenceBitmap) -> OccurrenceBitmap:
    _check_compatible(a, b)
    return OccurrenceBitmap(a.label_id, np.bitwise_or(a.bits, b.bits))


def count(a: OccurrenceBitmap) -> int:
    """Population count."""
    return a.count()


def materialize(a: OccurrenceBitmap, lists: Mapping[int, InvertedList]) -> List[int]:
    """
    Data nodes at the set positions, in begin order.

    Args:
        a: Bitmap to expand
        lists: Inverted lists keyed by label id (DataTree.inverted)

    Raises:
        UsageError: the bitmap does not match its inverted list
    """
    inverted = lists.get(a.label_id)
    length = len(inverted) if inverted is not None else 0
    if length != len(a):
        raise UsageError(
            f"bitmap of length {len(a)} does not match inverted list of length {length}"
        )
    if length == 0:
        return []
    return inverted.entries[a.bits].tolist()


@dataclass(frozen=True, eq=False)
class OccurrenceListSet:
    """
    Per-position occurrence lists of one pattern.

    Attributes:
        bitmaps: bitmaps[k] is the projection of the embedded occurrence
                 relation on pattern position k
        root_support: Cached count of bitmaps[0]
    """
    bitmaps: Tuple[OccurrenceBitmap, ...]
    root_support: int

    @classmethod
    def from_bitmaps(cls, bitmaps: Sequence[OccurrenceBitmap]) -> "OccurrenceListSet":
        bitmaps = tuple(bitmaps)
        return cls(bitmaps, bitmaps[0].count() if bitmaps else 0)

    @property
    def root(self) -> OccurrenceBitmap:
        return self.bitmaps[0]

    def __len__(self) -> int:
        return len(self.bitmaps)

    def __getitem__(self, position: int) -> OccurrenceBitmap:
        return self.bitmaps[position]

    def counts(self) -> List[int]:
        """Occurrence count per position (used by JSON output)."""
        return [bitmap.count() for bitmap in self.bitmaps]
