"""
Pattern Core Module
===================
Unordered tree patterns with descendant edges, their canonical form, the
pattern order and the equivalence-class joins that grow the search tree.

Order on representations:

    key(P) = enc(root) + [$]
    enc(n) = [label(n)] + concat(enc(c) + [$] for c in children(n))

Keys compare lexicographically with label ids in label order and the
backtrack symbol $ ranking above every label. Consequences used throughout:

- A(B) < A: a pattern ranks before its own prefix.
- Canonical form = children sorted by non-decreasing key at every node.
- A prefix of a canonical pattern is canonical.
- Inside an equivalence class, (attach position desc, label asc) is exactly
  this order, so sorting elements that way sorts them by key.

Joins inside class [P] (element P_x^i = P plus x attached at position i):

    child join   P_x^i (x)c P_y^j   only if j == i  ->  y becomes a child of x
    cousin join  P_x^i (x)s P_y^j   only if j <= i  ->  y attached at position j

Both outcomes have P_x^i as immediate prefix and belong to class [P_x^i].
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple

from mining.occlist import OccurrenceListSet
from mining.tree_store import LabelTable, format_tree_line, parse_tree_line
from utils.errors import ParseError, UsageError

BACKTRACK_KEY = 1 << 30

CHILD = "child"
COUSIN = "cousin"


@dataclass(frozen=True)
class Pattern:
    """
    Pattern nodes in depth-first position order.

    Attributes:
        labels: Label id per position
        parents: Parent position per position (-1 at position 0)
    """
    labels: Tuple[int, ...]
    parents: Tuple[int, ...]

    def __post_init__(self):
        if not self.labels or len(self.labels) != len(self.parents):
            raise UsageError("pattern needs matching, non-empty labels and parents")
        if not _is_preorder(self.parents):
            raise UsageError(f"parents {self.parents} are not in depth-first position order")

    @classmethod
    def single(cls, label: int) -> "Pattern":
        return cls((label,), (-1,))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def rml(self) -> int:
        """Position of the rightmost leaf."""
        return len(self.labels) - 1

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in self.labels]
        for position in range(1, self.size):
            kids[self.parents[position]].append(position)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def rightmost_path(self) -> Tuple[int, ...]:
        path = []
        position = self.rml
        while position != -1:
            path.append(position)
            position = self.parents[position]
        return tuple(reversed(path))

    @cached_property
    def subtree_sizes(self) -> Tuple[int, ...]:
        sizes = [1] * self.size
        for position in range(self.size - 1, 0, -1):
            sizes[self.parents[position]] += sizes[position]
        return tuple(sizes)

    @cached_property
    def heights(self) -> Tuple[int, ...]:
        heights = [0] * self.size
        for position in range(self.size - 1, 0, -1):
            parent = self.parents[position]
            heights[parent] = max(heights[parent], heights[position] + 1)
        return tuple(heights)

    @cached_property
    def subtree_keys(self) -> Tuple[Tuple[int, ...], ...]:
        """enc(n) for every position, in this representation's sibling order."""
        keys: List[Tuple[int, ...]] = [()] * self.size
        for position in range(self.size - 1, -1, -1):
            parts = [self.labels[position]]
            for child in self.children[position]:
                parts.extend(keys[child])
                parts.append(BACKTRACK_KEY)
            keys[position] = tuple(parts)
        return tuple(keys)

    @cached_property
    def order_key(self) -> Tuple[int, ...]:
        return self.subtree_keys[0] + (BACKTRACK_KEY,)

    @cached_property
    def is_canonical(self) -> bool:
        return canonical_check(self)

    def extend(self, label: int, attach: int) -> "Pattern":
        """Add a new rightmost leaf under a rightmost-path position."""
        if attach not in self.rightmost_path:
            raise UsageError(f"position {attach} is not on the rightmost path {self.rightmost_path}")
        return Pattern(self.labels + (label,), self.parents + (attach,))

    def prefix(self) -> "Pattern":
        """Immediate prefix: this pattern without its rightmost leaf."""
        if self.size < 2:
            raise UsageError("a single-node pattern has no prefix")
        return Pattern(self.labels[:-1], self.parents[:-1])


def _is_preorder(parents: Sequence[int]) -> bool:
    if parents[0] != -1:
        return False
    path = [0]
    for position in range(1, len(parents)):
        while path and path[-1] != parents[position]:
            path.pop()
        if not path:
            return False
        path.append(position)
    return True


# =============================================================================
# ORDER AND CANONICAL FORM
# =============================================================================

def pattern_order_cmp(p1: Pattern, p2: Pattern) -> int:
    """
    Compare two patterns under the pattern order.

    Returns:
        -1 if p1 < p2, 0 if equal, 1 if p1 > p2
    """
    k1, k2 = p1.order_key, p2.order_key
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


def canonical_check(p: Pattern) -> bool:
    """True iff at every node the child subtrees are in non-decreasing order."""
    keys = p.subtree_keys
    for kids in p.children:
        for left, right in zip(kids, kids[1:]):
            if keys[left] + (BACKTRACK_KEY,) > keys[right] + (BACKTRACK_KEY,):
                return False
    return True


def canonical_form(p: Pattern) -> Pattern:
    """The sibling reordering of p that is minimal under the pattern order."""
    sorted_keys: List[Tuple[int, ...]] = [()] * p.size
    ordered_children: List[List[int]] = [[] for _ in range(p.size)]
    for position in range(p.size - 1, -1, -1):
        kids = sorted(p.children[position], key=lambda c: sorted_keys[c] + (BACKTRACK_KEY,))
        ordered_children[position] = kids
        parts = [p.labels[position]]
        for child in kids:
            parts.extend(sorted_keys[child])
            parts.append(BACKTRACK_KEY)
        sorted_keys[position] = tuple(parts)

    labels: List[int] = []
    parents: List[int] = []
    stack = [(0, -1)]
    while stack:
        position, parent = stack.pop()
        new_position = len(labels)
        labels.append(p.labels[position])
        parents.append(parent)
        for child in reversed(ordered_children[position]):
            stack.append((child, new_position))
    return Pattern(tuple(labels), tuple(parents))


def is_prefix_of(p: Pattern, q: Pattern) -> bool:
    """True iff q grows from p by rightmost-leaf additions (search-tree descendant or self)."""
    n = p.size
    return n <= q.size and q.labels[:n] == p.labels and q.parents[:n] == p.parents


# =============================================================================
# STRING ENCODING
# =============================================================================

def encode(p: Pattern, labels: LabelTable) -> str:
    """Depth-first label sequence with -1 backtracks, e.g. A(B,C) -> "A B -1 C -1"."""
    return format_tree_line([labels.name_of(label) for label in p.labels], p.parents)


def decode(text: str, labels: LabelTable) -> Pattern:
    """
    Parse a pattern string against a tree's label table.

    Raises:
        ParseError: malformed encoding or a label the tree does not have
    """
    names, parents = parse_tree_line(text.strip(), line_number=None)
    ids = []
    for name in names:
        if name not in labels:
            raise ParseError(f"unknown label {name!r} in pattern {text!r}")
        ids.append(labels.id_of(name))
    return Pattern(tuple(ids), tuple(parents))


# =============================================================================
# EQUIVALENCE CLASSES
# =============================================================================

@dataclass(eq=False)
class SurrogateState:
    """
    Surrogate bookkeeping of one class element.

    Attributes:
        child: Earlier elements recorded as child-surrogate candidates
        cousin: Earlier elements recorded as cousin-surrogate candidates
        confirmed_by: Cousin surrogate confirmed by the position shortcut
    """
    child: List["ClassElement"] = field(default_factory=list)
    cousin: List["ClassElement"] = field(default_factory=list)
    confirmed_by: Optional["ClassElement"] = None

    @property
    def confirmed_cousin_surrogate(self) -> bool:
        return self.confirmed_by is not None


@dataclass(eq=False)
class ClassElement:
    """
    One element P_x^i of an equivalence class.

    Attributes:
        attach: Position i the new node hangs from
        label: Label id x of the new node (the rightmost leaf)
        pattern: Prefix plus the new node
        ol: Embedded occurrence lists of pattern
        canonical: Whether pattern is in canonical form
        locally_closed: Cleared when a class join preserves its root list
        surrogates: Candidate lists and shortcut flag
    """
    attach: int
    label: int
    pattern: Pattern
    ol: OccurrenceListSet
    canonical: bool = True
    locally_closed: bool = True
    surrogates: SurrogateState = field(default_factory=SurrogateState)

    @property
    def order_key(self) -> Tuple[int, int]:
        return (-self.attach, self.label)

    @property
    def support(self) -> int:
        return self.ol.root_support


@dataclass(eq=False)
class EquivalenceClass:
    """All frequent one-node rightmost extensions of a prefix, in class order."""
    prefix: Pattern
    elements: List[ClassElement] = field(default_factory=list)

    def add(self, element: ClassElement) -> bool:
        """Append an element; order-equal duplicates are dropped."""
        if not is_prefix_of(self.prefix, element.pattern) or element.pattern.size != self.prefix.size + 1:
            raise UsageError("class element must have the class prefix as immediate prefix")
        if any(e.order_key == element.order_key for e in self.elements):
            return False
        self.elements.append(element)
        return True

    def sort(self) -> None:
        self.elements.sort(key=lambda e: e.order_key)

    def __iter__(self) -> Iterator[ClassElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def child_join(left: ClassElement, right: ClassElement) -> Optional[Pattern]:
    """P_x^i (x)c P_y^j: y under x, only when j == i."""
    if right.attach != left.attach:
        return None
    return left.pattern.extend(right.label, left.pattern.rml)


def cousin_join(left: ClassElement, right: ClassElement) -> Optional[Pattern]:
    """P_x^i (x)s P_y^j: y at position j, only when j <= i."""
    if right.attach > left.attach:
        return None
    return left.pattern.extend(right.label, right.attach)
