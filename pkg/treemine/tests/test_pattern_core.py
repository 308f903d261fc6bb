"""
Test Harness for Pattern Core
=============================
Pattern order, canonical form, string encoding and class joins.

Label ids used below: A=0, B=1, C=2, D=3.
"""

import random
import sys
from pathlib import Path

import pytest

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.occlist import OccurrenceBitmap, OccurrenceListSet
from mining.pattern_core import (
    ClassElement,
    EquivalenceClass,
    Pattern,
    canonical_check,
    canonical_form,
    child_join,
    cousin_join,
    decode,
    encode,
    is_prefix_of,
    pattern_order_cmp,
)
from mining.tree_store import LabelTable
from utils.errors import ParseError, UsageError
from tree_fixtures import all_orderings, random_pattern

A, B, C, D = 0, 1, 2, 3
LABELS = LabelTable(("A", "B", "C", "D"))

A_B = Pattern((A, B), (-1, 0))
A_C = Pattern((A, C), (-1, 0))
A_B_C = Pattern((A, B, C), (-1, 0, 0))      # A(B, C)
A_C_B = Pattern((A, C, B), (-1, 0, 0))      # A(C, B)


def _element(pattern: Pattern, attach: int) -> ClassElement:
    ol = OccurrenceListSet.from_bitmaps([OccurrenceBitmap.empty(label, 0) for label in pattern.labels])
    return ClassElement(attach=attach, label=pattern.labels[-1], pattern=pattern, ol=ol)


class TestPattern:

    def test_shape_helpers(self):
        p = Pattern((A, B, C, D), (-1, 0, 1, 0))   # A(B(C), D)
        assert p.size == 4
        assert p.rml == 3
        assert p.children == ((1, 3), (2,), (), ())
        assert p.rightmost_path == (0, 3)
        assert p.subtree_sizes == (4, 2, 1, 1)
        assert p.heights == (2, 1, 0, 0)

    def test_extend_on_rightmost_path(self):
        p = Pattern((A, B, C), (-1, 0, 1))
        assert p.extend(D, 0) == Pattern((A, B, C, D), (-1, 0, 1, 0))
        assert p.extend(D, 2).parents == (-1, 0, 1, 2)

    def test_extend_off_rightmost_path(self):
        p = Pattern((A, B, C, D), (-1, 0, 1, 0))
        with pytest.raises(UsageError):
            p.extend(A, 1)

    def test_prefix(self):
        assert A_B_C.prefix() == A_B
        with pytest.raises(UsageError):
            Pattern.single(A).prefix()

    @pytest.mark.parametrize("parents", [(0, 0), (-1, 2, 0), (-1, -1)])
    def test_invalid_layouts(self, parents):
        with pytest.raises(UsageError):
            Pattern(tuple(range(len(parents))), parents)

    def test_is_prefix_of(self):
        assert is_prefix_of(A_B, A_B_C)
        assert is_prefix_of(A_B, A_B)
        assert not is_prefix_of(A_C, A_B_C)
        assert not is_prefix_of(A_B_C, A_B)


class TestPatternOrder:
    """Labels in label order, backtrack ranking above every label."""

    def test_label_order(self):
        assert pattern_order_cmp(Pattern.single(A), Pattern.single(B)) == -1

    def test_pattern_before_its_prefix(self):
        assert pattern_order_cmp(A_B, Pattern.single(A)) == -1
        assert pattern_order_cmp(Pattern.single(A), A_B) == 1

    def test_sibling_labels(self):
        a_b_d = Pattern((A, B, D), (-1, 0, 0))
        assert pattern_order_cmp(A_B_C, a_b_d) == -1

    def test_deeper_before_wider(self):
        chain = Pattern((A, B, C), (-1, 0, 1))
        assert pattern_order_cmp(chain, A_B_C) == -1

    def test_equal(self):
        assert pattern_order_cmp(A_B_C, Pattern((A, B, C), (-1, 0, 0))) == 0


class TestCanonicalForm:

    def test_examples(self):
        assert canonical_check(A_B_C)
        assert not canonical_check(A_C_B)
        assert canonical_form(A_C_B) == A_B_C

    def test_nested(self):
        p = Pattern((A, B, D, B, C), (-1, 0, 1, 0, 3))        # A(B(D), B(C))
        expected = Pattern((A, B, C, B, D), (-1, 0, 1, 0, 3))  # A(B(C), B(D))
        assert not canonical_check(p)
        assert canonical_form(p) == expected
        assert canonical_check(expected)

    def test_form_is_minimum_over_reorderings(self):
        rng = random.Random(5)
        for _ in range(60):
            p = random_pattern(rng, [A, B, C], rng.randint(1, 6))
            orderings = set(all_orderings(p))
            smallest = min(orderings, key=lambda q: q.order_key)
            assert canonical_form(p) == smallest
            assert [q for q in orderings if canonical_check(q)] == [smallest]

    def test_prefix_of_canonical_is_canonical(self):
        rng = random.Random(6)
        for _ in range(60):
            p = canonical_form(random_pattern(rng, [A, B, C], rng.randint(2, 7)))
            assert canonical_check(p.prefix())


class TestEncoding:

    def test_encode(self):
        assert encode(A_B_C, LABELS) == "A B -1 C -1"
        assert encode(Pattern.single(A), LABELS) == "A"
        assert encode(Pattern((A, B, C), (-1, 0, 1)), LABELS) == "A B C -1 -1"

    def test_decode(self):
        assert decode("A B -1 C -1", LABELS) == A_B_C
        assert decode("A B -1 C -1 -1", LABELS) == A_B_C

    def test_decode_unknown_label(self):
        with pytest.raises(ParseError):
            decode("A E -1", LABELS)

    def test_decode_malformed(self):
        with pytest.raises(ParseError):
            decode("A -1 -1", LABELS)

    def test_decode_error_has_no_line_number(self):
        with pytest.raises(ParseError) as err:
            decode("A B", LABELS)
        assert err.value.line_number is None
        assert not str(err.value).startswith("line")

    def test_random_patterns_survive_encoding(self):
        rng = random.Random(8)
        for _ in range(50):
            p = random_pattern(rng, [A, B, C, D], rng.randint(1, 8))
            assert decode(encode(p, LABELS), LABELS) == p


class TestJoins:
    """Joins inside class [A]: the element P_x^i carries label x at attach position i."""

    def test_child_join(self):
        outcome = child_join(_element(A_B, 0), _element(A_C, 0))
        assert outcome == Pattern((A, B, C), (-1, 0, 1))

    def test_self_join(self):
        x = _element(A_B, 0)
        assert child_join(x, x) == Pattern((A, B, B), (-1, 0, 1))
        assert cousin_join(x, x) == Pattern((A, B, B), (-1, 0, 0))

    def test_cousin_join(self):
        assert cousin_join(_element(A_B, 0), _element(A_C, 0)) == A_B_C

    def test_attach_conditions(self):
        deeper = _element(Pattern((A, B, C), (-1, 0, 1)), 1)     # A(B(C)) in class [A(B)]
        shallower = _element(Pattern((A, B, D), (-1, 0, 0)), 0)  # A(B, D) in class [A(B)]
        assert child_join(deeper, shallower) is None
        assert child_join(shallower, deeper) is None
        assert cousin_join(deeper, shallower) == Pattern((A, B, C, D), (-1, 0, 1, 0))
        assert cousin_join(shallower, deeper) is None

    def test_outcome_has_left_as_prefix(self):
        left = _element(Pattern((A, B, C), (-1, 0, 1)), 1)
        for right in (left, _element(Pattern((A, B, D), (-1, 0, 1)), 1),
                      _element(Pattern((A, B, D), (-1, 0, 0)), 0)):
            for join in (child_join, cousin_join):
                outcome = join(left, right)
                if outcome is not None:
                    assert outcome.prefix() == left.pattern
                    assert outcome.labels[-1] == right.label


class TestEquivalenceClass:

    def test_class_order_is_pattern_order(self):
        prefix = A_B
        cls = EquivalenceClass(prefix)
        for label, attach in [(A, 0), (D, 1), (C, 0), (C, 1)]:
            cls.add(_element(prefix.extend(label, attach), attach))
        cls.sort()
        assert [(e.attach, e.label) for e in cls] == [(1, C), (1, D), (0, A), (0, C)]
        keys = [e.pattern.order_key for e in cls]
        assert keys == sorted(keys)

    def test_duplicates_dropped(self):
        cls = EquivalenceClass(Pattern.single(A))
        assert cls.add(_element(A_B, 0))
        assert not cls.add(_element(A_B, 0))
        assert len(cls) == 1

    def test_wrong_prefix(self):
        cls = EquivalenceClass(Pattern.single(B))
        with pytest.raises(UsageError):
            cls.add(_element(A_B, 0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
