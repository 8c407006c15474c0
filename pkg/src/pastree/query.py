"""Pattern search and fixed-size repeat enumeration over a built tree."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import Sequence, SuffixTree
from .errors import EmptyPattern, InvalidThreshold, KmerTreeRequired, PatternTooLong


class Locus(NamedTuple):
    """Where a walk stopped: ``edge_offset`` symbols into the incoming edge of ``node``."""

    node: int
    edge_offset: int
    matched: bool


class RepeatHit(NamedTuple):
    kmer: str
    count: int
    positions: tuple[int, ...]


def _as_bytes(pattern) -> bytes:
    if isinstance(pattern, str):
        return pattern.encode("latin-1")
    return bytes(pattern)


def find_node(tree: SuffixTree, seq: Sequence, pattern) -> Locus:
    """Walk ``pattern`` down from the root, one child lookup per node.

    A k-mer tree only knows windows of length ``k``, so longer patterns are
    rejected instead of reported as absent.
    """
    p = _as_bytes(pattern)
    if not p:
        raise EmptyPattern("pattern must not be empty")
    if tree.is_kmer_tree and len(p) > tree.k:
        raise PatternTooLong(f"pattern length {len(p)} exceeds the index window size {tree.k}")
    starts, lens = tree._lists[0], tree._lists[1]
    data = seq.data
    v, i, m = tree.root, 0, len(p)
    while True:
        c = tree.child(v, p[i])
        if c < 0:
            return Locus(v, lens[v], False)
        s, ln = starts[c], lens[c]
        j = 0
        while j < ln and i < m:
            if data[s + j] != p[i]:
                return Locus(c, j, False)
            i += 1
            j += 1
        if i == m:
            return Locus(c, j, True)
        v = c


def occurrences(tree: SuffixTree, seq: Sequence, pattern) -> np.ndarray:
    """Ascending start positions of ``pattern``.

    On a k-mer tree these are the window starts whose window begins with the
    pattern, so hits in the last ``k - len(pattern)`` positions are not seen.
    """
    loc = find_node(tree, seq, pattern)
    if not loc.matched:
        return np.zeros(0, dtype=np.int64)
    return tree.subtree_occurrences(loc.node)


def enumerate_repeats(tree: SuffixTree, seq: Sequence, min_count: int = 2) -> list[RepeatHit]:
    """Every distinct window seen at least ``min_count`` times, most frequent first."""
    if not tree.is_kmer_tree:
        raise KmerTreeRequired("repeat enumeration needs a k-mer tree, got a full tree")
    if not isinstance(min_count, (int, np.integer)) or min_count < 2:
        raise InvalidThreshold(f"min_count must be >= 2, got {min_count!r}")
    counts = np.diff(tree.occ_ptr)
    hits = []
    for v in np.flatnonzero(counts >= min_count).tolist():
        pos = tree.occurrences(v)
        hits.append(RepeatHit(seq.text(int(pos[0]), tree.k), len(pos), tuple(pos.tolist())))
    hits.sort(key=lambda h: (-h.count, h.kmer))
    return hits
