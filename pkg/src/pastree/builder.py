"""Parallel k-mer suffix tree construction.

The tree of all length-``k`` windows is split by first symbol into
independent branches. Branches are built concurrently, a barrier waits for
all of them, and a single thread grafts them under a common root next to the
bare terminal leaf.
"""
from __future__ import annotations

import multiprocessing as mp
import os
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import TERMINAL, Sequence, SuffixTree
from .errors import ConfigError, DuplicateBranch, ForeignStart
from .partition import _check_k, extract_alphabet, partition_windows, symbol_windows

SCAN_MODES = ("single", "per-symbol")
EXECUTORS = ("auto", "process", "thread")

# below this many symbols process start-up costs more than it saves
AUTO_PROCESS_MIN_N = 1 << 20


@dataclass(frozen=True)
class BuildConfig:
    k: int
    workers: int = 1
    scan_mode: str = "single"
    executor: str = "auto"

    def __post_init__(self):
        _check_k(self.k)
        if not isinstance(self.workers, (int, np.integer)) or self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers!r}")
        if self.scan_mode not in SCAN_MODES:
            raise ConfigError(f"scan_mode must be one of {SCAN_MODES}, got {self.scan_mode!r}")
        if self.executor not in EXECUTORS:
            raise ConfigError(f"executor must be one of {EXECUTORS}, got {self.executor!r}")


@dataclass(frozen=True, eq=False)
class Branch:
    """Sub-tree holding every window that starts with ``symbol``.

    Nodes are local ids in pre-order; node 0 is the top node whose parent
    (``-1``) is the shared root supplied at merge time.
    """

    symbol: int
    k: int
    parent: np.ndarray
    edge_start: np.ndarray
    edge_len: np.ndarray
    keys: np.ndarray
    occ_counts: np.ndarray
    occ: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.parent)

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.occ_counts))

    @property
    def has_terminal(self) -> np.ndarray:
        return self.occ_counts > 0

    def subtree(self, seq: Sequence) -> SuffixTree:
        """The branch as a standalone tree under its own root (no marker leaf)."""
        parent = np.concatenate([[-1], self.parent + 1])
        return SuffixTree.from_parents(
            parent,
            np.concatenate([[0], self.edge_start]),
            np.concatenate([[0], self.edge_len]),
            np.concatenate([[False], self.has_terminal]),
            np.concatenate([[TERMINAL], self.keys]),
            np.concatenate([[0], self.occ_counts]),
            self.occ, self.k, seq.n)


def _empty_branch(symbol: int, k: int) -> Branch:
    z = np.zeros(0, dtype=np.int64)
    return Branch(symbol, k, z, z, z, z, z, z)


def _sorted_windows(arr: np.ndarray, starts: np.ndarray, k: int):
    """Lexicographic order of the windows at ``starts`` plus the window matrix.

    Windows are packed big-endian into uint64 columns so that a lexsort over
    ``ceil(k / 8)`` integer keys is a string sort. The sort is stable, so equal
    windows keep ascending start order.
    """
    width = -(-k // 8) * 8
    win = np.zeros((len(starts), width), dtype=np.uint8)
    win[:, :k] = arr[starts[:, None] + np.arange(k)]
    cols = win.view(">u8")
    if cols.shape[1] == 1:
        order = np.argsort(cols[:, 0], kind="stable")
    else:
        order = np.lexsort(cols.T[::-1])
    return order, win[order, :k], cols[order]


def build_branch(seq: Sequence, k: int, symbol: int, starts) -> Branch:
    """Generalized suffix tree of the length-``k`` windows at ``starts``.

    One leaf per distinct window; a leaf's occurrences are all starts holding
    that window. Shared prefixes become internal nodes, split at the first
    mismatching symbol.
    """
    k = _check_k(k)
    symbol = int(symbol)
    starts = np.asarray(starts, dtype=np.int64)
    if not len(starts):
        return _empty_branch(symbol, k)
    arr = seq.array
    if starts.min() < 0 or starts.max() >= seq.n:
        raise ForeignStart(f"start outside the sequence for branch {chr(symbol)!r}")
    if np.any(np.diff(starts) <= 0):
        raise ForeignStart("starts must be strictly ascending")
    if np.any(arr[starts] != symbol):
        bad = int(starts[np.flatnonzero(arr[starts] != symbol)[0]])
        raise ForeignStart(f"position {bad} does not start with {chr(symbol)!r}")
    if np.any(starts + k > seq.record_end(starts)):
        bad = int(starts[np.flatnonzero(starts + k > seq.record_end(starts))[0]])
        raise ForeignStart(f"window at {bad} does not fit inside its record")

    order, win, cols = _sorted_windows(arr, starts, k)
    ordered_starts = starts[order]
    if len(starts) > 1:
        new_group = np.concatenate([[True], np.any(cols[1:] != cols[:-1], axis=1)])
    else:
        new_group = np.ones(1, dtype=bool)
    heads = np.flatnonzero(new_group)
    counts = np.diff(np.append(heads, len(starts)))
    reps = ordered_starts[heads]
    distinct = win[heads]
    if len(heads) > 1:
        lcp = np.argmax(distinct[1:] != distinct[:-1], axis=1)
    else:
        lcp = np.zeros(0, dtype=np.int64)

    depth, rep, first, parent = _compress(k, reps.tolist(), lcp.tolist())

    depth = np.array(depth, dtype=np.int64)
    first = np.array(first, dtype=np.int64)
    pre = np.lexsort((depth, first))
    new_id = np.empty_like(pre)
    new_id[pre] = np.arange(len(pre))
    old_parent = np.array(parent, dtype=np.int64)[pre]
    has_parent = old_parent >= 0
    parent_new = np.where(has_parent, new_id[np.maximum(old_parent, 0)], -1)
    depth = depth[pre]
    parent_depth = np.where(has_parent, depth[np.maximum(parent_new, 0)], 0)
    edge_start = np.array(rep, dtype=np.int64)[pre] + parent_depth
    edge_len = depth - parent_depth
    is_leaf = depth == k
    occ_counts = np.zeros(len(pre), dtype=np.int64)
    # leaves in pre-order are exactly the distinct windows in sorted order
    occ_counts[is_leaf] = counts
    return Branch(symbol, k, parent_new, edge_start, edge_len, arr[edge_start].astype(np.int64),
                  occ_counts, ordered_starts)


def _compress(k: int, reps: list, lcp: list):
    """Path-compressed trie over sorted distinct windows from their adjacent LCPs.

    Returns per-node string depth, a representative start for resolving the
    edge label, the first window row in the node's subtree and the parent id.
    """
    depth, rep, first, parent = [k], [reps[0]], [0], [-1]
    stack = [0]
    for i in range(1, len(reps)):
        l = lcp[i - 1]
        last = -1
        while stack and depth[stack[-1]] > l:
            last = stack.pop()
        if not stack or depth[stack[-1]] < l:
            new = len(depth)
            depth.append(l)
            rep.append(rep[last])
            first.append(first[last])
            parent.append(parent[last])
            parent[last] = new
            stack.append(new)
        leaf = len(depth)
        depth.append(k)
        rep.append(reps[i])
        first.append(i)
        parent.append(stack[-1])
        stack.append(leaf)
    return depth, rep, first, parent


def merge_branches(branches, seq: Sequence, k: int) -> SuffixTree:
    """Graft branches under a common root beside the bare terminal leaf.

    Node 0 is the root, node 1 the marker leaf, then each branch's nodes in
    ascending symbol order.
    """
    k = _check_k(k)
    branches = list(branches)
    symbols = [b.symbol for b in branches]
    if len(set(symbols)) != len(symbols):
        raise DuplicateBranch(f"branch symbols repeat: {sorted(symbols)}")
    branches = sorted((b for b in branches if b.n_nodes), key=lambda b: b.symbol)

    parents = [np.array([-1, 0], dtype=np.int64)]
    starts = [np.zeros(2, dtype=np.int64)]
    lens = [np.zeros(2, dtype=np.int64)]
    terms = [np.array([False, True])]
    keys = [np.array([TERMINAL, TERMINAL], dtype=np.int64)]
    occ_counts = [np.zeros(2, dtype=np.int64)]
    occs = [np.zeros(0, dtype=np.int64)]
    offset = 2
    for b in branches:
        parents.append(np.where(b.parent >= 0, b.parent + offset, 0))
        starts.append(b.edge_start)
        lens.append(b.edge_len)
        terms.append(b.has_terminal)
        keys.append(b.keys)
        occ_counts.append(b.occ_counts)
        occs.append(b.occ)
        offset += b.n_nodes
    return SuffixTree.from_parents(
        np.concatenate(parents), np.concatenate(starts), np.concatenate(lens),
        np.concatenate(terms), np.concatenate(keys), np.concatenate(occ_counts),
        np.concatenate(occs), k, seq.n)


# -- parallel orchestration -------------------------------------------------

_worker_seq: Sequence | None = None


def _init_worker(seq: Sequence) -> None:
    global _worker_seq
    _worker_seq = seq


def _branch_task(seq, k: int, symbol: int, starts) -> Branch:
    if seq is None:
        seq = _worker_seq
    if starts is None:
        starts = symbol_windows(seq, k, symbol)
    return build_branch(seq, k, symbol, starts)


def _make_executor(kind: str, workers: int, seq: Sequence) -> tuple[Executor, Sequence | None]:
    if kind == "auto":
        kind = "process" if seq.n >= AUTO_PROCESS_MIN_N else "thread"
    if kind == "thread":
        return ThreadPoolExecutor(max_workers=workers), seq
    methods = mp.get_all_start_methods()
    ctx = mp.get_context("fork" if "fork" in methods else "spawn")
    pool = ProcessPoolExecutor(max_workers=workers, mp_context=ctx,
                               initializer=_init_worker, initargs=(seq,))
    return pool, None


def _tasks(seq: Sequence, cfg: BuildConfig):
    alphabet = extract_alphabet(seq)
    if cfg.scan_mode == "single":
        part = partition_windows(seq, cfg.k, alphabet)
        # largest buckets first bounds the imbalance of the dynamic queue
        todo = sorted(part.nonempty(), key=lambda a: (-len(part.buckets[a]), a))
        return [(a, part.buckets[a]) for a in todo]
    # one full scan per symbol, as each processor of the parfor does
    return [(a, None) for a in alphabet]


def build_past(seq: Sequence, cfg: BuildConfig) -> SuffixTree:
    """Build the k-mer suffix tree with up to ``cfg.workers`` concurrent branches."""
    if not isinstance(cfg, BuildConfig):
        raise ConfigError("build_past expects a BuildConfig")
    tasks = _tasks(seq, cfg)
    workers = min(cfg.workers, max(len(tasks), 1))
    if workers == 1:
        branches = [_branch_task(seq, cfg.k, a, s) for a, s in tasks]
    else:
        pool, shared = _make_executor(cfg.executor, workers, seq)
        with pool:
            futures = [pool.submit(_branch_task, shared, cfg.k, a, s) for a, s in tasks]
            # sync: every branch must exist before the merge starts
            branches = [f.result() for f in futures]
    return merge_branches(branches, seq, cfg.k)


def build_sequential(seq: Sequence, k: int) -> SuffixTree:
    """Single-threaded build: one partition pass, branches one after another."""
    k = _check_k(k)
    part = partition_windows(seq, k)
    branches = [build_branch(seq, k, a, part.buckets[a]) for a in part.nonempty()]
    return merge_branches(branches, seq, k)


def default_workers() -> int:
    env = os.environ.get("PAST_WORKERS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            raise ConfigError(f"PAST_WORKERS must be an integer, got {env!r}") from None
    return 1
