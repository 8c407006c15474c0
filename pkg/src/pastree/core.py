"""Sequences, alphabets and the array-backed suffix tree shared by every builder.

A tree is stored as a node arena in parallel numpy arrays. Node ``v`` has an
incoming edge ``(edge_start[v], edge_len[v])`` that indexes into the sequence
it was built from, plus a ``has_terminal`` flag for an edge that ends with the
synthetic terminal marker. The marker is structural: it is never a byte of the
data, so inputs are free to contain ``$``. An edge of length 0 with the flag
set is the bare marker edge.

Children are kept in CSR form (``child_ptr``/``child_ids``), sorted by the
first symbol of their edge with the marker first. Leaf occurrence lists use
the same layout (``occ_ptr``/``occ``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from .errors import InvalidNode

#: Child key of the bare-marker edge. Byte keys are 0..255, so it sorts first.
TERMINAL = -1
MARKER_TEXT = "$"


@dataclass(frozen=True)
class Sequence:
    """Immutable symbol text with record boundaries in global coordinates."""

    data: bytes
    records: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.data, bytes):
            object.__setattr__(self, "data", bytes(self.data))
        records = tuple((int(s), int(n)) for s, n in self.records)
        object.__setattr__(self, "records", records)
        pos = 0
        for start, length in records:
            if start != pos or length < 0:
                raise ValueError(f"records must tile the data in order, got {records!r}")
            pos += length
        if pos != len(self.data):
            raise ValueError(f"records cover {pos} symbols but data has {len(self.data)}")

    @classmethod
    def from_text(cls, text: str | bytes) -> Sequence:
        """Single-record sequence. ``str`` input is encoded as latin-1."""
        data = text.encode("latin-1") if isinstance(text, str) else bytes(text)
        return cls(data, ((0, len(data)),))

    @classmethod
    def from_records(cls, parts) -> Sequence:
        chunks = [p.encode("latin-1") if isinstance(p, str) else bytes(p) for p in parts]
        records, pos = [], 0
        for c in chunks:
            records.append((pos, len(c)))
            pos += len(c)
        return cls(b"".join(chunks), tuple(records))

    @property
    def n(self) -> int:
        return len(self.data)

    def __len__(self) -> int:
        return len(self.data)

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only uint8 view of ``data``."""
        return np.frombuffer(self.data, dtype=np.uint8)

    @cached_property
    def _record_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        starts = np.array([s for s, _ in self.records], dtype=np.int64)
        ends = np.array([s + n for s, n in self.records], dtype=np.int64)
        return starts, ends

    def record_end(self, positions: np.ndarray) -> np.ndarray:
        """End (exclusive) of the record containing each position."""
        starts, ends = self._record_bounds
        idx = np.searchsorted(starts, positions, side="right") - 1
        # zero-length records share a start with their successor; searchsorted
        # with side="right" already picks the last of them, which is the one
        # that actually contains the position
        return ends[np.clip(idx, 0, max(len(ends) - 1, 0))] if len(ends) else np.zeros_like(positions)

    def window_starts(self, k: int) -> np.ndarray:
        """All starts ``i`` whose window ``[i, i + k)`` lies inside one record."""
        parts = [np.arange(s, s + n - k + 1, dtype=np.int64) for s, n in self.records if n >= k]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)

    def text(self, start: int, length: int) -> str:
        return self.data[start:start + length].decode("latin-1")


@dataclass(frozen=True)
class Alphabet:
    """Distinct symbols (byte values) in ascending order."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        if any(a >= b for a, b in zip(syms, syms[1:])):
            raise ValueError("alphabet symbols must be strictly ascending")
        object.__setattr__(self, "symbols", syms)

    @property
    def sigma(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols

    def text(self) -> str:
        return bytes(self.symbols).decode("latin-1")


class Node(NamedTuple):
    """Read-only view of one arena entry."""

    id: int
    start: int
    length: int
    has_terminal: bool
    children: dict[int, int]
    occurrences: tuple[int, ...]

    @property
    def terminal_only(self) -> bool:
        return self.length == 0 and self.has_terminal

    @property
    def is_leaf(self) -> bool:
        return not self.children


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class SuffixTree:
    """Node arena for both k-mer trees (``k >= 1``) and full trees (``k == 0``)."""

    edge_start: np.ndarray
    edge_len: np.ndarray
    has_terminal: np.ndarray
    child_ptr: np.ndarray
    child_ids: np.ndarray
    child_keys: np.ndarray
    occ_ptr: np.ndarray
    occ: np.ndarray
    k: int
    seq_len: int
    root: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for name in ("edge_start", "edge_len", "child_ptr", "child_ids", "child_keys", "occ_ptr", "occ"):
            arr = _i64(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        flags = np.ascontiguousarray(self.has_terminal, dtype=bool)
        flags.flags.writeable = False
        object.__setattr__(self, "has_terminal", flags)

    @classmethod
    def from_parents(cls, parent, edge_start, edge_len, has_terminal, keys, occ_counts, occ, k, seq_len, root=0):
        """Assemble CSR child lists from a parent array.

        Children of each node end up ordered by ``keys``; ``occ`` must already
        be laid out node by node in id order.
        """
        parent = _i64(parent)
        keys = _i64(keys)
        n = len(parent)
        nonroot = np.flatnonzero(parent >= 0)
        order = nonroot[np.lexsort((keys[nonroot], parent[nonroot]))]
        counts = np.bincount(parent[nonroot], minlength=n) if n else np.zeros(0, np.int64)
        child_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=child_ptr[1:])
        occ_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(occ_counts, out=occ_ptr[1:])
        return cls(edge_start, edge_len, has_terminal, child_ptr, order, keys[order], occ_ptr, occ, k, seq_len, root)

    # -- basic accessors -------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.edge_start)

    def __len__(self) -> int:
        return self.n_nodes

    @property
    def is_kmer_tree(self) -> bool:
        return self.k > 0

    def _check(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n_nodes:
            raise InvalidNode(v)
        return int(v)

    @property
    def _lists(self):
        """Python-list copies of the hot arrays, for per-symbol walks."""
        got = self._cache.get("lists")
        if got is None:
            got = (self.edge_start.tolist(), self.edge_len.tolist(), self.has_terminal.tolist(),
                   self.child_ptr.tolist(), self.child_ids.tolist(), self.child_keys.tolist(),
                   self.occ_ptr.tolist())
            self._cache["lists"] = got
        return got

    def children(self, v: int) -> np.ndarray:
        v = self._check(v)
        return self.child_ids[self.child_ptr[v]:self.child_ptr[v + 1]]

    def child(self, v: int, key: int) -> int:
        """Child of ``v`` whose edge starts with ``key`` (``TERMINAL`` for the marker), or -1."""
        v = self._check(v)
        _, _, _, ptr, ids, keys, _ = self._lists
        lo, hi = ptr[v], ptr[v + 1]
        while lo < hi:
            mid = (lo + hi) // 2
            if keys[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        if lo < ptr[v + 1] and keys[lo] == key:
            return ids[lo]
        return -1

    def occurrences(self, v: int) -> np.ndarray:
        v = self._check(v)
        return self.occ[self.occ_ptr[v]:self.occ_ptr[v + 1]]

    def is_leaf(self, v: int) -> bool:
        v = self._check(v)
        return self.child_ptr[v] == self.child_ptr[v + 1]

    def node(self, v: int) -> Node:
        v = self._check(v)
        lo, hi = self.child_ptr[v], self.child_ptr[v + 1]
        children = dict(zip(self.child_keys[lo:hi].tolist(), self.child_ids[lo:hi].tolist()))
        return Node(v, int(self.edge_start[v]), int(self.edge_len[v]), bool(self.has_terminal[v]),
                    children, tuple(self.occurrences(v).tolist()))

    @property
    def parents(self) -> np.ndarray:
        got = self._cache.get("parents")
        if got is None:
            got = np.full(self.n_nodes, -1, dtype=np.int64)
            counts = np.diff(self.child_ptr)
            got[self.child_ids] = np.repeat(np.arange(self.n_nodes, dtype=np.int64), counts)
            got.flags.writeable = False
            self._cache["parents"] = got
        return got

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(np.diff(self.child_ptr) == 0)

    def walk(self) -> Iterator[tuple[int, int]]:
        """Pre-order ``(node, tree_depth)`` pairs in canonical child order."""
        _, _, _, ptr, ids, _, _ = self._lists
        stack = [(self.root, 0)]
        while stack:
            v, d = stack.pop()
            yield v, d
            for i in range(ptr[v + 1] - 1, ptr[v] - 1, -1):
                stack.append((ids[i], d + 1))

    def subtree_occurrences(self, v: int) -> np.ndarray:
        """Sorted union of leaf occurrences below ``v``."""
        v = self._check(v)
        _, _, _, ptr, ids, _, optr = self._lists
        spans, stack = [], [v]
        while stack:
            u = stack.pop()
            if optr[u] != optr[u + 1]:
                spans.append(self.occ[optr[u]:optr[u + 1]])
            stack.extend(ids[ptr[u]:ptr[u + 1]])
        if not spans:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(spans))


def edge_text(tree: SuffixTree, v: int, seq: Sequence) -> str:
    s = seq.text(int(tree.edge_start[v]), int(tree.edge_len[v]))
    return s + MARKER_TEXT if tree.has_terminal[v] else s


def node_path_label(tree: SuffixTree, node: int, seq: Sequence) -> str:
    """Concatenated edge labels from the root down to ``node``; marker shown as ``$``."""
    v = tree._check(node)
    parents = tree.parents
    parts = []
    while v != tree.root:
        parts.append(edge_text(tree, v, seq))
        v = int(parents[v])
        if v < 0:
            raise InvalidNode(node)
    return "".join(reversed(parts))


def string_depths(tree: SuffixTree) -> np.ndarray:
    """Symbol depth of each node, marker excluded."""
    depth = np.zeros(tree.n_nodes, dtype=np.int64)
    for v, _ in tree.walk():
        lo, hi = tree.child_ptr[v], tree.child_ptr[v + 1]
        kids = tree.child_ids[lo:hi]
        depth[kids] = depth[v] + tree.edge_len[kids]
    return depth


# -- invariant checking ----------------------------------------------------


class Violation(NamedTuple):
    rule: str
    node: int
    message: str


class InvariantReport(list):
    """List of violations; empty means every checked property holds."""

    @property
    def ok(self) -> bool:
        return not self

    def rules(self) -> set[str]:
        return {v.rule for v in self}


def _check_structure(tree: SuffixTree, seq: Sequence, report: InvariantReport) -> list[int]:
    """Shape checks common to every tree kind. Returns the nodes reachable from the root."""
    n = tree.n_nodes
    if n == 0 or not 0 <= tree.root < n:
        report.append(Violation("root", -1, "tree has no valid root"))
        return []
    if len(tree.child_ptr) != n + 1 or len(tree.occ_ptr) != n + 1:
        report.append(Violation("arena", -1, "pointer arrays do not match node count"))
        return []
    seen = np.zeros(n, dtype=np.int64)
    seen[tree.child_ids] += 1
    if seen[tree.root]:
        report.append(Violation("root", tree.root, "root appears as a child"))
    for v in np.flatnonzero(seen > 1):
        report.append(Violation("single-path", int(v), "node has more than one parent"))
    order, visited = [], np.zeros(n, dtype=bool)
    for v, _ in tree.walk():
        if visited[v]:
            break
        visited[v] = True
        order.append(v)
    for v in np.flatnonzero(~visited):
        report.append(Violation("reachable", int(v), "node not reachable from the root"))

    data = seq.data
    for v in order:
        lo, hi = int(tree.child_ptr[v]), int(tree.child_ptr[v + 1])
        nkids = hi - lo
        start, length = int(tree.edge_start[v]), int(tree.edge_len[v])
        if v != tree.root:
            if length < 0 or (length and (start < 0 or start + length > len(data))):
                report.append(Violation("edge-bounds", v, f"edge ({start}, {length}) outside the sequence"))
            if length == 0 and not tree.has_terminal[v]:
                report.append(Violation("edge-empty", v, "empty edge without terminal marker"))
            if nkids == 1:
                report.append(Violation("property-1.2", v, "internal node with a single child"))
            if nkids and tree.has_terminal[v]:
                report.append(Violation("terminal-leaf", v, "terminal marker on an internal edge"))
            if not nkids and not tree.has_terminal[v]:
                report.append(Violation("explicit", v, "leaf edge does not end with the terminal marker"))
        keys = tree.child_keys[lo:hi].tolist()
        if any(a >= b for a, b in zip(keys, keys[1:])):
            report.append(Violation("sibling-keys", v, f"child keys not distinct and ascending: {keys}"))
        for key, c in zip(keys, tree.child_ids[lo:hi].tolist()):
            clen = int(tree.edge_len[c])
            first = TERMINAL if clen == 0 else (data[tree.edge_start[c]] if 0 <= tree.edge_start[c] < len(data) else None)
            if first != key:
                report.append(Violation("child-key", c, f"key {key} does not match edge first symbol {first}"))
        occ = tree.occurrences(v)
        if len(occ) > 1 and np.any(np.diff(occ) <= 0):
            report.append(Violation("occurrences-sorted", v, "occurrences not strictly ascending"))
        if len(occ) and nkids:
            report.append(Violation("occurrences-leaf", v, "internal node carries occurrences"))
    return order


def check_tree_invariants(tree: SuffixTree, seq: Sequence) -> InvariantReport:
    """Collect every structural violation of ``tree`` as indexed over ``seq``.

    Full trees (``k == 0``) get the shape checks only; see
    :func:`pastree.baseline.verify_full_tree` for suffix completeness.
    """
    report = InvariantReport()
    order = _check_structure(tree, seq, report)
    if not order or not tree.is_kmer_tree:
        return report
    k = tree.k
    data = seq.data
    root = tree.root

    bare = [c for c in tree.children(root).tolist() if tree.edge_len[c] == 0 and tree.has_terminal[c]]
    if len(bare) != 1:
        report.append(Violation("terminal-leaf", root, f"root has {len(bare)} bare marker children"))

    starts = seq.window_starts(k)
    valid = np.zeros(len(data) + 1, dtype=bool)
    valid[starts] = True
    covered = []
    labels: dict[int, bytes] = {root: b""}
    for v in order:
        if v == root:
            continue
        parent = int(tree.parents[v])
        s, n = int(tree.edge_start[v]), int(tree.edge_len[v])
        label = labels[parent] + data[s:s + n]
        if tree.child_ptr[v] != tree.child_ptr[v + 1]:
            labels[v] = label
            continue
        occ = tree.occurrences(v).tolist()
        if parent == root and n == 0:
            if occ:
                report.append(Violation("window", v, "bare marker leaf carries occurrences"))
            continue
        if len(label) != k:
            report.append(Violation("window", v, f"leaf label has length {len(label)}, expected {k}"))
        if not occ:
            report.append(Violation("window", v, "window leaf without occurrences"))
        for i in occ:
            if not (0 <= i < len(valid) and valid[i]) or data[i:i + k] != label:
                report.append(Violation("window", v, f"occurrence {i} is not a window equal to the leaf label"))
        covered.extend(occ)
    if sorted(covered) != starts.tolist():
        report.append(Violation("occurrence-partition", root,
                                "leaf occurrences do not partition the valid window starts"))

    expected = len(np.unique(seq.array[starts])) + 1
    got = int(tree.child_ptr[root + 1] - tree.child_ptr[root])
    if got != expected:
        report.append(Violation("root-edges", root, f"root has {got} children, expected {expected}"))
    return report
