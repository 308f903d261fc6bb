"""
Tree Store Module
=================
Loads labeled trees and forests, stamps every node with its regional
encoding and builds one inverted list per label.

Regional encoding:

    A single counter starts at 1 and ticks on every node entry and every
    node exit of a depth-first walk.

        begin = entry stamp, end = exit stamp, level = depth (root = 0)
        u is a proper ancestor of v  <=>  u.begin < v.begin and v.end < u.end

Because the stamps come from a preorder walk, node ids are preorder
positions and begin stamps grow with the id. Inverted lists are therefore
just the ids carrying a label, in ascending order.

Input format (one tree per line, "-1" closes the last opened node):

    A B C -1 -1 B C -1 D -1 -1      ->  A(B(C), B(C, D))

Several lines become a forest joined under a virtual root. The virtual root
carries the reserved label id -1 and never enters an inverted list.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from utils.errors import ParseError, UsageError

logger = logging.getLogger(__name__)

BACKTRACK_TOKEN = "-1"
COMMENT_PREFIX = "#"
VIRTUAL_ROOT_ID = -1
VIRTUAL_ROOT_LABEL = "<root>"

_EMPTY_IDS = np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class RegionalTriple:
    """
    Interval stamps of one data node.

    Attributes:
        begin: Entry stamp (starts at 1)
        end: Exit stamp, always greater than begin
        level: Depth from the root (root = 0)
    """
    begin: int
    end: int
    level: int


@dataclass(frozen=True)
class LabelTable:
    """
    Bidirectional label <-> id map.

    Ids are dense and follow the lexicographic order of the label strings,
    so every ordering built on ids is reproducible across runs.
    """
    names: Tuple[str, ...]

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "LabelTable":
        return cls(tuple(sorted(set(labels))))

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: label_id for label_id, name in enumerate(self.names)}

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"Unknown label: {name!r}") from None

    def name_of(self, label_id: int) -> str:
        if label_id == VIRTUAL_ROOT_ID:
            return VIRTUAL_ROOT_LABEL
        return self.names[label_id]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True, eq=False)
class InvertedList:
    """
    All nodes carrying one label.

    Attributes:
        label_id: Dense label id
        entries: Node ids in ascending begin order
    """
    label_id: int
    entries: np.ndarray

    def __len__(self) -> int:
        return int(self.entries.size)


@dataclass(frozen=True, eq=False)
class DataTree:
    """
    Immutable preorder node array with regional encoding and inverted lists.

    Node ids are preorder positions: node 0 is the root and every parent id
    is smaller than its children's ids. Arrays are numpy so that candidate
    filtering can run vectorised; the ``*_list`` views exist for the tight
    Python loops of tuple enumeration.

    Attributes:
        label_ids: Label id per node (-1 on a virtual root)
        parents: Parent id per node (-1 on the root)
        labels: Label table shared by every pattern mined from this tree
        begin, end, level: Regional triple components per node
        inverted: label id -> InvertedList (virtual root excluded)
        virtual_root: True when node 0 joins a forest
    """
    label_ids: np.ndarray
    parents: np.ndarray
    labels: LabelTable
    begin: np.ndarray = field(default_factory=lambda: _EMPTY_IDS)
    end: np.ndarray = field(default_factory=lambda: _EMPTY_IDS)
    level: np.ndarray = field(default_factory=lambda: _EMPTY_IDS)
    inverted: Mapping[int, InvertedList] = field(default_factory=dict)
    virtual_root: bool = False

    @property
    def size(self) -> int:
        return int(self.label_ids.size)

    def __len__(self) -> int:
        return self.size

    def region(self, node: int) -> RegionalTriple:
        return RegionalTriple(int(self.begin[node]), int(self.end[node]), int(self.level[node]))

    def label_of(self, node: int) -> str:
        return self.labels.name_of(int(self.label_ids[node]))

    def inverted_list(self, label_id: int) -> InvertedList:
        found = self.inverted.get(label_id)
        if found is None:
            return InvertedList(label_id, _EMPTY_IDS)
        return found

    def is_ancestor(self, n1: int, n2: int) -> bool:
        return is_ancestor(self, n1, n2)

    def subtree_size(self, node: int) -> int:
        return (int(self.end[node]) - int(self.begin[node]) + 1) // 2

    @cached_property
    def children(self) -> List[List[int]]:
        kids: List[List[int]] = [[] for _ in range(self.size)]
        for node, parent in enumerate(self.parents.tolist()):
            if parent >= 0:
                kids[parent].append(node)
        return kids

    @cached_property
    def begin_list(self) -> List[int]:
        return self.begin.tolist()

    @cached_property
    def end_list(self) -> List[int]:
        return self.end.tolist()


# =============================================================================
# CONSTRUCTION
# =============================================================================

def is_ancestor(tree: DataTree, n1: int, n2: int) -> bool:
    """True iff n2 is a proper descendant of n1 (interval containment)."""
    return bool(tree.begin[n2] > tree.begin[n1] and tree.end[n1] > tree.end[n2])


def encode_regions(tree: DataTree) -> DataTree:
    """
    Assign (begin, end, level) to every node.

    With a shared entry/exit counter and preorder ids, node v has been
    preceded by v entries and (v - level) exits, so

        begin = 2v - level + 1,   end = begin + 2 * subtree_size - 1
    """
    parents = tree.parents.tolist()
    n = len(parents)
    level = [0] * n
    size = [1] * n
    for node in range(1, n):
        level[node] = level[parents[node]] + 1
    for node in range(n - 1, 0, -1):
        size[parents[node]] += size[node]

    level_arr = np.asarray(level, dtype=np.int64)
    begin = 2 * np.arange(n, dtype=np.int64) - level_arr + 1
    end = begin + 2 * np.asarray(size, dtype=np.int64) - 1
    return replace(tree, begin=begin, end=end, level=level_arr)


def build_inverted_lists(tree: DataTree) -> Dict[int, InvertedList]:
    """One begin-ordered list per real label; the virtual root is skipped."""
    lists: Dict[int, InvertedList] = {}
    for label_id in np.unique(tree.label_ids).tolist():
        if label_id == VIRTUAL_ROOT_ID:
            continue
        entries = np.flatnonzero(tree.label_ids == label_id).astype(np.int64)
        lists[label_id] = InvertedList(label_id, entries)
    return lists


def build_tree(names: Sequence[str], parents: Sequence[int], virtual_root: bool = False) -> DataTree:
    """
    Build a fully indexed DataTree from preorder label names and parent ids.

    Args:
        names: Label per node in preorder (ignored for node 0 of a forest)
        parents: Parent id per node, -1 for the root
        virtual_root: Node 0 is the forest's virtual root

    Raises:
        UsageError: parents do not describe a preorder tree
    """
    if not names or len(names) != len(parents):
        raise UsageError("names and parents must be non-empty and of equal length")
    _check_preorder(parents)

    real = names[1:] if virtual_root else names
    table = LabelTable.from_labels(real)
    ids = [table.id_of(name) for name in real]
    if virtual_root:
        ids.insert(0, VIRTUAL_ROOT_ID)

    skeleton = DataTree(
        label_ids=np.asarray(ids, dtype=np.int64),
        parents=np.asarray(parents, dtype=np.int64),
        labels=table,
        virtual_root=virtual_root,
    )
    stamped = encode_regions(skeleton)
    return replace(stamped, inverted=build_inverted_lists(stamped))


def _check_preorder(parents: Sequence[int]) -> None:
    if parents[0] != -1:
        raise UsageError("node 0 must be the root")
    path: List[int] = [0]
    for node in range(1, len(parents)):
        parent = parents[node]
        while path and path[-1] != parent:
            path.pop()
        if not path:
            raise UsageError(f"node {node}: parent {parent} is not on the current preorder path")
        path.append(node)


# =============================================================================
# TEXT FORMAT
# =============================================================================

def parse_tree_line(line: str, line_number: Optional[int] = 1) -> Tuple[List[str], List[int]]:
    """
    Parse one depth-first encoded tree.

    A trailing "-1" closing the root is accepted but not required.

    Returns:
        (labels in preorder, parent ids)

    Raises:
        ParseError: unbalanced markers, a second root, or an empty line
    """
    names: List[str] = []
    parents: List[int] = []
    stack: List[int] = []

    for token in line.split():
        if token == BACKTRACK_TOKEN:
            if not stack:
                raise ParseError("unbalanced '-1' marker", line_number)
            stack.pop()
            continue
        if names and not stack:
            raise ParseError(f"label {token!r} after the root was closed", line_number)
        parents.append(stack[-1] if stack else -1)
        stack.append(len(names))
        names.append(token)

    if not names:
        raise ParseError("empty tree", line_number)
    if len(stack) > 1:
        raise ParseError(f"{len(stack) - 1} node(s) left open at end of line", line_number)
    return names, parents


def format_tree_line(names: Sequence[str], parents: Sequence[int]) -> str:
    """Inverse of parse_tree_line for preorder (names, parents)."""
    tokens: List[str] = []
    stack: List[int] = []
    for node, parent in enumerate(parents):
        while stack and stack[-1] != parent:
            stack.pop()
            tokens.append(BACKTRACK_TOKEN)
        tokens.append(names[node])
        stack.append(node)
    tokens.extend([BACKTRACK_TOKEN] * (len(stack) - 1))
    return " ".join(tokens)


def load_forest(text: str) -> DataTree:
    """
    Parse tree-encoding text into an indexed DataTree.

    Blank lines and lines starting with '#' are skipped. One tree yields
    that tree; several trees are joined under a virtual root.

    Raises:
        ParseError: a malformed line (with its line number) or no tree at all
    """
    trees: List[Tuple[List[str], List[int]]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        trees.append(parse_tree_line(line, line_number))

    if not trees:
        raise ParseError("no trees found in input")

    if len(trees) == 1:
        names, parents = trees[0]
        tree = build_tree(names, parents)
    else:
        names = [VIRTUAL_ROOT_LABEL]
        parents = [-1]
        for tree_names, tree_parents in trees:
            offset = len(names)
            names.extend(tree_names)
            parents.extend(0 if p == -1 else p + offset for p in tree_parents)
        tree = build_tree(names, parents, virtual_root=True)

    logger.info(
        f"[OK] Loaded {len(trees)} tree(s): {tree.size} nodes, {len(tree.labels)} labels"
    )
    return tree


def load_forest_file(path: Union[str, Path], fmt: str = "lines") -> DataTree:
    """
    Load a tree file from disk.

    Args:
        path: File path
        fmt: "lines" (depth-first encoding) or "xml" (element names as labels)
    """
    path = Path(path)
    if fmt == "xml":
        from utils.xml_loader import load_xml
        return load_xml(path.read_bytes())
    if fmt != "lines":
        raise UsageError(f"unknown input format: {fmt!r}")
    return load_forest(path.read_text(encoding="utf-8"))


def serialize(tree: DataTree) -> str:
    """Write a tree back in the line format (one line per forest member)."""
    roots = tree.children[0] if tree.virtual_root else [0]
    parents = tree.parents.tolist()
    lines = []
    for root in roots:
        span = range(root, root + tree.subtree_size(root))
        names = [tree.label_of(node) for node in span]
        local_parents = [-1 if node == root else parents[node] - root for node in span]
        lines.append(format_tree_line(names, local_parents))
    return "\n".join(lines) + "\n"


def tree_statistics(tree: DataTree) -> Dict[str, float]:
    """
    Dataset statistics in the usual reporting shape.

    Depth is measured from the real roots, so a forest's virtual root does
    not add a level.
    """
    offset = 1 if tree.virtual_root else 0
    levels = tree.level[offset:] - offset
    return {
        "trees": len(tree.children[0]) if tree.virtual_root else 1,
        "nodes": int(tree.size - offset),
        "labels": len(tree.labels),
        "max_depth": int(levels.max()) if levels.size else 0,
        "avg_depth": round(float(levels.mean()), 3) if levels.size else 0.0,
    }
