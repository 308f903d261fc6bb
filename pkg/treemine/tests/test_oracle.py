"""
Test Harness for the Brute-Force Oracle
=======================================
The oracle is the reference for every other test, so it is checked on
inputs small enough to count by hand.
"""

import sys
from pathlib import Path

import pytest

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.pattern_core import Pattern, canonical_check, encode
from mining.tree_store import load_forest
from oracle import (
    Host,
    enumerate_frequent_naive,
    filter_closed_naive,
    iter_embeddings,
    pattern_to_shape,
    run_oracle,
    shape_to_pattern,
)
from oracle.brute_force import single_node_extensions
from tree_fixtures import small_trees

A, B = 0, 1


class TestEmbeddings:

    def test_two_children(self, running_tree, label_ids):
        p = Pattern((label_ids["A"], label_ids["B"], label_ids["C"]), (-1, 0, 0))
        assert sorted(iter_embeddings(Host.from_tree(running_tree), p)) == [(0, 1, 4), (0, 3, 2)]

    def test_pinned_position(self, running_tree, label_ids):
        p = Pattern((label_ids["B"], label_ids["C"]), (-1, 0))
        host = Host.from_tree(running_tree)
        assert list(iter_embeddings(host, p, fixed=(1, 4))) == [(3, 4)]
        assert list(iter_embeddings(host, p, fixed=(0, 2))) == []

    def test_pattern_as_host(self):
        host = Host.from_pattern(Pattern((A, A, B), (-1, 0, 1)))
        assert sorted(e[0] for e in iter_embeddings(host, Pattern((A, B), (-1, 0)))) == [0, 1]


class TestShapes:

    def test_shape_is_order_free(self):
        left = Pattern((A, A, B), (-1, 0, 0))
        right = Pattern((A, B, A), (-1, 0, 0))
        assert pattern_to_shape(left) == pattern_to_shape(right)

    def test_shape_to_pattern_is_canonical(self):
        shape = pattern_to_shape(Pattern((A, B, A, A), (-1, 0, 0, 2)))
        p = shape_to_pattern(shape)
        assert canonical_check(p)
        assert pattern_to_shape(p) == shape

    def test_single_node_extensions(self):
        grown = single_node_extensions((A, ()), [A, B])
        assert grown == {(A, ((A, ()),)), (A, ((B, ()),)), (B, ((A, ()),))}

    def test_insert_above_children(self):
        shape = (A, ((B, ()), (B, ())))
        grown = single_node_extensions(shape, [A])
        assert (A, ((A, ((B, ()), (B, ()))),)) in grown
        assert (A, ((A, ((B, ()),)), (B, ()))) in grown


class TestEnumeration:

    def test_every_subpattern_at_minsup_one(self):
        tree = load_forest("A B -1 C -1")
        frequent = enumerate_frequent_naive(tree, 1)
        encodings = sorted(encode(e.pattern, tree.labels) for e in frequent.values())
        assert encodings == ["A", "A B -1", "A B -1 C -1", "A C -1", "B", "C"]

    def test_running_example(self, running_tree):
        result = run_oracle(running_tree, 2)
        assert [encode(p, running_tree.labels) for p in result.closed] == ["B C -1"]
        assert result.maximal == result.closed

    def test_closed_filter(self):
        tree = load_forest("A B -1 C -1")
        result = run_oracle(tree, 1)
        assert {encode(p, tree.labels) for p in result.closed} == {"A B -1 C -1"}

    def test_size_cap(self, branch_forest):
        result = run_oracle(branch_forest, 2, max_size=2)
        assert all(p.size <= 2 for p in result.frequent)
        assert len(result.closed) == 6

    def test_maximal_within_closed(self):
        for tree in small_trees(6, seed=41, nodes=(6, 12), labels=(2, 3)):
            result = run_oracle(tree, 2)
            assert result.maximal <= result.closed
            assert all(p.size >= 2 for p in result.closed)

    def test_filter_reads_shapes(self, running_tree):
        frequent = enumerate_frequent_naive(running_tree, 2)
        closed, maximal = filter_closed_naive(frequent)
        assert closed == maximal
        assert [frequent[s].support for s in closed] == [2]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
