"""
XML Ingestion
=============
Turns an XML document into a DataTree: one node per element, the element's
local name as its label. Attributes, text, comments and processing
instructions are ignored.

Parsing is locked down: no entity resolution and no network access.
"""

import logging
from typing import Dict, List

from lxml import etree

from mining.tree_store import DataTree, build_tree
from utils.errors import ParseError

logger = logging.getLogger(__name__)


def _parser() -> etree.XMLParser:
    return etree.XMLParser(
        remove_comments=True,
        remove_pis=True,
        resolve_entities=False,
        no_network=True,
        huge_tree=False,
    )


def load_xml(data: bytes) -> DataTree:
    """
    Build a tree from raw XML bytes.

    Raises:
        ParseError: the document is not well-formed
    """
    try:
        root = etree.fromstring(data, parser=_parser())
    except etree.XMLSyntaxError as e:
        raise ParseError(f"invalid XML: {e.msg}", getattr(e, "lineno", None)) from None

    names: List[str] = []
    parents: List[int] = []
    index: Dict[etree._Element, int] = {}
    for element in root.iter(tag=etree.Element):
        parent = element.getparent()
        parents.append(-1 if parent is None else index[parent])
        index[element] = len(names)
        names.append(etree.QName(element).localname)

    tree = build_tree(names, parents)
    logger.info(f"[OK] Loaded XML: {tree.size} elements, {len(tree.labels)} distinct tags")
    return tree
