"""
Embedded tree-pattern mining: data tree indexing, occurrence lists,
pattern algebra and the frequent / closed / maximal miners.
"""
