"""
Test Harness for Occurrence Bitmaps
===================================
Bit algebra over inverted lists and expansion back to data nodes.
"""

import random
import sys
from pathlib import Path

import numpy as np
import pytest

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.occlist import (
    OccurrenceBitmap,
    OccurrenceListSet,
    bitmap_and,
    bitmap_or,
    count,
    materialize,
)
from utils.errors import UsageError


class TestBitAlgebra:

    def test_and_or(self):
        a = OccurrenceBitmap.from_string(0, "1100")
        b = OccurrenceBitmap.from_string(0, "1010")
        assert bitmap_and(a, b).to_string() == "1000"
        assert bitmap_or(a, b).to_string() == "1110"
        assert (a & b) == bitmap_and(a, b)
        assert (a | b) == bitmap_or(a, b)

    def test_count(self):
        assert count(OccurrenceBitmap.from_string(3, "10110")) == 3
        assert count(OccurrenceBitmap.empty(3, 5)) == 0
        assert count(OccurrenceBitmap.full(3, 5)) == 5

    def test_mismatched_label(self):
        with pytest.raises(UsageError):
            bitmap_and(OccurrenceBitmap.full(0, 3), OccurrenceBitmap.full(1, 3))

    def test_mismatched_length(self):
        with pytest.raises(UsageError):
            bitmap_or(OccurrenceBitmap.full(0, 3), OccurrenceBitmap.full(0, 4))

    def test_bits_are_read_only(self):
        bitmap = OccurrenceBitmap.full(0, 3)
        with pytest.raises(ValueError):
            bitmap.bits[0] = False

    def test_equality_includes_label(self):
        assert OccurrenceBitmap.full(0, 2) == OccurrenceBitmap.full(0, 2)
        assert OccurrenceBitmap.full(0, 2) != OccurrenceBitmap.full(1, 2)

    def test_from_positions(self):
        bitmap = OccurrenceBitmap.from_positions(0, 5, [0, 3])
        assert bitmap.to_string() == "10010"
        assert bitmap.positions().tolist() == [0, 3]

    def test_random_pairs_match_set_algebra(self):
        rng = random.Random(3)
        for _ in range(300):
            length = rng.randint(0, 40)
            sa = {k for k in range(length) if rng.random() < 0.5}
            sb = {k for k in range(length) if rng.random() < 0.5}
            a = OccurrenceBitmap.from_positions(2, length, sa)
            b = OccurrenceBitmap.from_positions(2, length, sb)
            assert set((a & b).positions().tolist()) == sa & sb
            assert set((a | b).positions().tolist()) == sa | sb
            assert count(a & b) <= min(count(a), count(b))


class TestMaterialize:
    """Bit k stands for the k-th entry of the label's inverted list."""

    def test_first_b_only(self, running_tree, label_ids):
        bitmap = OccurrenceBitmap.from_string(label_ids["B"], "10")
        assert materialize(bitmap, running_tree.inverted) == [1]

    def test_full_and_empty(self, running_tree, label_ids):
        b = label_ids["B"]
        assert materialize(OccurrenceBitmap.full(b, 2), running_tree.inverted) == [1, 3]
        assert materialize(OccurrenceBitmap.empty(b, 2), running_tree.inverted) == []

    def test_length_mismatch(self, running_tree, label_ids):
        with pytest.raises(UsageError):
            materialize(OccurrenceBitmap.full(label_ids["B"], 3), running_tree.inverted)


class TestOccurrenceListSet:

    def test_root_support_and_counts(self):
        ol = OccurrenceListSet.from_bitmaps([
            OccurrenceBitmap.from_string(0, "101"),
            OccurrenceBitmap.from_string(1, "1111"),
        ])
        assert ol.root_support == 2
        assert ol.root == ol[0]
        assert ol.counts() == [2, 4]
        assert len(ol) == 2

    def test_bits_stay_boolean(self):
        ol = OccurrenceListSet.from_bitmaps([OccurrenceBitmap(0, np.array([1, 0, 2]))])
        assert ol.root.bits.dtype == bool
        assert ol.root_support == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
