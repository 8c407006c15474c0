"""Alphabet extraction and grouping of fixed-length window starts by first symbol."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Alphabet, Sequence
from .errors import InvalidK


@dataclass(frozen=True)
class KmerPartition:
    """Window starts bucketed by their first symbol.

    ``buckets[a]`` is an ascending int64 array of every start ``i`` with
    ``data[i] == a`` whose length-``k`` window stays inside one record.
    """

    k: int
    buckets: dict[int, np.ndarray]
    total_windows: int

    def sizes(self) -> dict[int, int]:
        return {a: len(b) for a, b in self.buckets.items()}

    def nonempty(self) -> list[int]:
        return [a for a, b in self.buckets.items() if len(b)]


def extract_alphabet(seq: Sequence) -> Alphabet:
    counts = np.bincount(seq.array, minlength=256)
    return Alphabet(tuple(np.flatnonzero(counts).tolist()))


def _check_k(k) -> int:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidK(f"window size must be a positive integer, got {k!r}")
    return int(k)


def partition_windows(seq: Sequence, k: int, alphabet: Alphabet | None = None) -> KmerPartition:
    """Bucket every valid window start by its first symbol in one pass."""
    k = _check_k(k)
    if alphabet is None:
        alphabet = extract_alphabet(seq)
    starts = seq.window_starts(k)
    firsts = seq.array[starts]
    order = np.argsort(firsts, kind="stable")
    firsts_sorted = firsts[order]
    buckets = {}
    for a in alphabet:
        lo = np.searchsorted(firsts_sorted, a, side="left")
        hi = np.searchsorted(firsts_sorted, a, side="right")
        buckets[a] = starts[order[lo:hi]]
    return KmerPartition(k, buckets, int(len(starts)))


def symbol_windows(seq: Sequence, k: int, symbol: int) -> np.ndarray:
    """Scan the whole sequence for one symbol and keep starts with a full window.

    This is the per-worker scan of the parallel algorithm: each worker looks
    at every position but only claims its own symbol.
    """
    k = _check_k(k)
    hits = np.flatnonzero(seq.array == symbol).astype(np.int64, copy=False)
    if not len(hits):
        return hits
    return hits[hits + k <= seq.record_end(hits)]


def partition_per_symbol(seq: Sequence, k: int, alphabet: Alphabet | None = None) -> KmerPartition:
    """Same result as :func:`partition_windows`, built from one full scan per symbol."""
    k = _check_k(k)
    if alphabet is None:
        alphabet = extract_alphabet(seq)
    buckets = {a: symbol_windows(seq, k, a) for a in alphabet}
    return KmerPartition(k, buckets, sum(len(b) for b in buckets.values()))
