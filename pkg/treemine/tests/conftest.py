"""
Shared pytest fixtures.
"""

import sys
from pathlib import Path

import pytest

# Add source root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mining.tree_store import load_forest
from tree_fixtures import RUNNING_EXAMPLE, SHARED_BRANCH


@pytest.fixture
def running_tree():
    """A(B(C), B(C, D)): node ids A=0, B=1, C=2, B=3, C=4, D=5."""
    return load_forest(RUNNING_EXAMPLE)


@pytest.fixture
def branch_forest():
    """Two copies of A(B(C(D))) under a virtual root."""
    return load_forest(SHARED_BRANCH)


@pytest.fixture
def label_ids(running_tree):
    return {name: running_tree.labels.id_of(name) for name in running_tree.labels.names}
