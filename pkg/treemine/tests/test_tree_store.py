"""
Test Harness for the Tree Store
===============================
Parsing, regional encoding, inverted lists and dataset statistics.

Checks:
1. Stamps of the running example match hand-computed values
2. Interval containment agrees with the parent chain on random trees
3. Malformed lines fail with the offending line number
4. Forests get a virtual root that stays out of every inverted list
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.tree_store import (
    VIRTUAL_ROOT_ID,
    RegionalTriple,
    build_tree,
    format_tree_line,
    load_forest,
    load_forest_file,
    parse_tree_line,
    serialize,
    tree_statistics,
)
from utils.errors import ParseError, UsageError
from tree_fixtures import RUNNING_EXAMPLE, ancestors_by_parent_chain, random_tree


class TestRegionalEncoding:
    """Begin/end/level stamps from one shared entry/exit counter."""

    def test_running_example_regions(self, running_tree):
        expected = [(1, 12, 0), (2, 5, 1), (3, 4, 2), (6, 11, 1), (7, 8, 2), (9, 10, 2)]
        assert [running_tree.region(n) for n in range(6)] == [RegionalTriple(*t) for t in expected]

    def test_labels_in_preorder(self, running_tree):
        assert [running_tree.label_of(n) for n in range(6)] == ["A", "B", "C", "B", "C", "D"]

    def test_two_child_tree(self):
        tree = load_forest("A B -1 C -1")
        assert tree.region(0) == RegionalTriple(1, 6, 0)
        assert tree.region(1) == RegionalTriple(2, 3, 1)
        assert tree.region(2) == RegionalTriple(4, 5, 1)

    def test_single_node(self):
        tree = load_forest("A")
        assert tree.size == 1
        assert tree.region(0) == RegionalTriple(1, 2, 0)

    def test_closing_root_marker_is_optional(self):
        assert load_forest("A -1").size == 1
        with_marker = load_forest(RUNNING_EXAMPLE + " -1")
        assert with_marker.parents.tolist() == load_forest(RUNNING_EXAMPLE).parents.tolist()

    def test_ancestor_examples(self, running_tree):
        assert running_tree.is_ancestor(0, 4)
        assert running_tree.is_ancestor(3, 5)
        assert not running_tree.is_ancestor(1, 4)
        assert not running_tree.is_ancestor(4, 0)
        for node in range(running_tree.size):
            assert not running_tree.is_ancestor(node, node)

    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_containment_matches_parent_chain(self, seed):
        tree = random_tree(seed, nodes=40, labels=4)
        ancestors = ancestors_by_parent_chain(tree)
        for u in range(tree.size):
            for v in range(tree.size):
                assert tree.is_ancestor(u, v) == (u in ancestors[v])

    @pytest.mark.parametrize("seed", [6, 7, 8])
    def test_intervals_nest_or_separate(self, seed):
        tree = random_tree(seed, nodes=40)
        begin, end = tree.begin.tolist(), tree.end.tolist()
        for u in range(tree.size):
            assert begin[u] < end[u]
            for v in range(u + 1, tree.size):
                nested = begin[u] < begin[v] and end[v] < end[u]
                disjoint = end[u] < begin[v]
                assert nested or disjoint

    def test_subtree_sizes(self, running_tree):
        assert [running_tree.subtree_size(n) for n in range(6)] == [6, 2, 1, 3, 1, 1]


class TestInvertedLists:
    """One begin-ordered node list per label."""

    def test_entries(self, running_tree, label_ids):
        assert running_tree.inverted_list(label_ids["A"]).entries.tolist() == [0]
        assert running_tree.inverted_list(label_ids["B"]).entries.tolist() == [1, 3]
        assert running_tree.inverted_list(label_ids["C"]).entries.tolist() == [2, 4]
        assert running_tree.inverted_list(label_ids["D"]).entries.tolist() == [5]

    def test_label_ids_follow_label_order(self, running_tree):
        assert running_tree.labels.names == ("A", "B", "C", "D")
        assert running_tree.labels.id_of("C") == 2
        assert running_tree.labels.name_of(3) == "D"

    def test_unknown_label_is_empty(self, running_tree):
        assert len(running_tree.inverted_list(99)) == 0

    def test_lists_cover_every_real_node(self):
        tree = random_tree(9, nodes=50, labels=5)
        covered = np.concatenate([lst.entries for lst in tree.inverted.values()])
        assert sorted(covered.tolist()) == list(range(tree.size))
        for lst in tree.inverted.values():
            assert np.all(np.diff(tree.begin[lst.entries]) > 0)


class TestForest:
    """Several lines joined under a virtual root."""

    def test_virtual_root(self):
        tree = load_forest("A B -1\nA C -1\n")
        assert tree.virtual_root
        assert tree.size == 5
        assert int(tree.label_ids[0]) == VIRTUAL_ROOT_ID
        assert VIRTUAL_ROOT_ID not in tree.inverted
        assert tree.inverted_list(tree.labels.id_of("A")).entries.tolist() == [1, 3]
        assert tree.children[0] == [1, 3]

    def test_comments_and_blank_lines(self):
        tree = load_forest("# two trees\n\nA B -1\n   \nA C -1\n")
        assert tree.size == 5

    def test_serialize_round_trip(self):
        text = "A B C -1 -1 D -1\nB C -1\nA\n"
        tree = load_forest(text)
        again = load_forest(serialize(tree))
        assert again.label_ids.tolist() == tree.label_ids.tolist()
        assert again.parents.tolist() == tree.parents.tolist()
        assert serialize(tree).splitlines() == ["A B C -1 -1 D -1", "B C -1", "A"]

    def test_statistics(self, running_tree):
        stats = tree_statistics(running_tree)
        assert stats["trees"] == 1
        assert stats["nodes"] == 6
        assert stats["labels"] == 4
        assert stats["max_depth"] == 2
        assert stats["avg_depth"] == pytest.approx(8 / 6, abs=1e-3)

    def test_forest_statistics_skip_virtual_root(self, branch_forest):
        stats = tree_statistics(branch_forest)
        assert stats["trees"] == 2
        assert stats["nodes"] == 8
        assert stats["max_depth"] == 3


class TestParsing:
    """Malformed input is rejected with a ParseError."""

    @pytest.mark.parametrize("line", ["A -1 -1", "A -1 B", "A B", "-1"])
    def test_malformed_lines(self, line):
        with pytest.raises(ParseError):
            parse_tree_line(line)

    def test_empty_input(self):
        with pytest.raises(ParseError):
            load_forest("\n# nothing here\n")

    def test_line_number_reported(self):
        with pytest.raises(ParseError) as info:
            load_forest("A B -1\nA -1 -1\n")
        assert info.value.line_number == 2
        assert "line 2" in str(info.value)

    def test_format_inverts_parse(self):
        names, parents = parse_tree_line(RUNNING_EXAMPLE)
        assert parents == [-1, 0, 1, 0, 3, 3]
        assert format_tree_line(names, parents) == "A B C -1 -1 B C -1 D -1"

    def test_build_tree_rejects_non_preorder(self):
        with pytest.raises(UsageError):
            build_tree(["A", "B", "C"], [-1, 2, 0])
        with pytest.raises(UsageError):
            build_tree(["A", "B"], [0, 0])

    def test_load_file(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text(RUNNING_EXAMPLE + "\n", encoding="utf-8")
        assert load_forest_file(path).size == 6

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text("A\n", encoding="utf-8")
        with pytest.raises(UsageError):
            load_forest_file(path, fmt="yaml")


class TestXmlInput:
    """Element names become labels; text, attributes and comments are dropped."""

    def test_elements_in_document_order(self, tmp_path):
        pytest.importorskip("lxml")
        path = tmp_path / "doc.xml"
        path.write_bytes(b"<a><b><c/></b><!-- note --><b x='1'>text<c/><d/></b></a>")
        tree = load_forest_file(path, fmt="xml")
        assert [tree.label_of(n) for n in range(tree.size)] == ["a", "b", "c", "b", "c", "d"]
        assert tree.parents.tolist() == [-1, 0, 1, 0, 3, 3]

    def test_broken_xml(self, tmp_path):
        pytest.importorskip("lxml")
        path = tmp_path / "bad.xml"
        path.write_bytes(b"<a><b></a>")
        with pytest.raises(ParseError):
            load_forest_file(path, fmt="xml")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
