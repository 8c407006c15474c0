"""Sequential full suffix tree (Ukkonen's online construction), the comparison baseline."""
from __future__ import annotations

from array import array

import numpy as np

from .core import TERMINAL, InvariantReport, Sequence, SuffixTree, Violation, _check_structure
from .errors import SingleRecordRequired

_END = 256  # terminal symbol during construction; never a byte value


def _filled(typecode: str, size: int, value: int) -> array:
    return array(typecode, [value]) * size


def build_ukkonen(seq: Sequence) -> SuffixTree:
    """Explicit suffix tree of ``seq`` + marker: one leaf per suffix, ``n + 1`` leaves.

    Each leaf's occurrence list holds its suffix start; the bare marker leaf
    holds ``n``. Suffix links and open leaf ends exist only while building.
    """
    if len(seq.records) > 1:
        raise SingleRecordRequired(f"full tree indexes one string, got {len(seq.records)} records")
    n = seq.n
    text = list(seq.data)
    text.append(_END)
    size = n + 1
    cap = 2 * size + 1
    tc = "i" if cap < 2**31 - 1 else "q"
    INF = size
    start = _filled(tc, cap, 0)
    end = _filled(tc, cap, 0)
    link = _filled(tc, cap, 0)  # suffix link of internal nodes, suffix start of leaves
    first = _filled(tc, cap, -1)
    sibling = _filled(tc, cap, -1)
    parent = _filled(tc, cap, -1)

    count = 1
    an = ae = al = rem = 0
    for i in range(size):
        c = text[i]
        rem += 1
        last_new = 0
        i1 = i + 1
        while rem:
            if al == 0:
                ae = i
            key = text[ae]
            nxt = first[an]
            while nxt != -1 and text[start[nxt]] != key:
                nxt = sibling[nxt]
            if nxt == -1:
                leaf = count
                count += 1
                start[leaf] = i
                end[leaf] = INF
                link[leaf] = i - rem + 1
                parent[leaf] = an
                sibling[leaf] = first[an]
                first[an] = leaf
                if last_new:
                    link[last_new] = an
                    last_new = 0
            else:
                s = start[nxt]
                e = end[nxt]
                el = (e if e < i1 else i1) - s
                if al >= el:
                    ae += el
                    al -= el
                    an = nxt
                    continue
                if text[s + al] == c:
                    if last_new and an:
                        link[last_new] = an
                    al += 1
                    break
                split = count
                leaf = count + 1
                count += 2
                start[split] = s
                end[split] = s + al
                parent[split] = an
                sibling[split] = sibling[nxt]
                p = first[an]
                if p == nxt:
                    first[an] = split
                else:
                    while sibling[p] != nxt:
                        p = sibling[p]
                    sibling[p] = split
                start[leaf] = i
                end[leaf] = INF
                link[leaf] = i - rem + 1
                parent[leaf] = split
                start[nxt] = s + al
                parent[nxt] = split
                first[split] = leaf
                sibling[leaf] = nxt
                sibling[nxt] = -1
                if last_new:
                    link[last_new] = split
                last_new = split
            rem -= 1
            if an == 0 and al > 0:
                al -= 1
                ae = i - rem + 1
            elif an:
                an = link[an]
    del text, first, sibling
    return _export(seq, count, start, end, link, parent, INF)


def _export(seq, count, start, end, link, parent, INF) -> SuffixTree:
    dt = np.int32 if start.typecode == "i" else np.int64
    start = np.frombuffer(start, dtype=dt)[:count].astype(np.int64)
    end = np.frombuffer(end, dtype=dt)[:count].astype(np.int64)
    suffix = np.frombuffer(link, dtype=dt)[:count].astype(np.int64)
    parent = np.frombuffer(parent, dtype=dt)[:count].astype(np.int64)
    n = seq.n
    leaf = end == INF
    edge_len = np.where(leaf, n - start, end - start)
    edge_len[0] = 0
    keys = np.full(count, TERMINAL, dtype=np.int64)
    has_data = edge_len > 0
    keys[has_data] = seq.array[start[has_data]]
    parent[0] = -1
    return SuffixTree.from_parents(parent, start, edge_len, leaf, keys, leaf.astype(np.int64),
                                   suffix[leaf], 0, n)


def verify_full_tree(tree: SuffixTree, seq: Sequence) -> InvariantReport:
    """Check that ``tree`` is the explicit suffix tree of ``seq``.

    Every suffix must label exactly one leaf, there must be ``n + 1`` leaves
    and Property 1.2 must hold.
    """
    report = InvariantReport()
    order = _check_structure(tree, seq, report)
    n = seq.n
    leaves = tree.leaves()
    if len(leaves) != n + 1:
        report.append(Violation("leaf-count", tree.root, f"{len(leaves)} leaves, expected {n + 1}"))
    if not order:
        return report
    data = seq.data
    labels = {tree.root: b""}
    found = np.zeros(n + 1, dtype=np.int64)
    parents = tree.parents
    for v in order:
        if v == tree.root:
            continue
        s, ln = int(tree.edge_start[v]), int(tree.edge_len[v])
        label = labels[int(parents[v])] + data[s:s + ln]
        if tree.child_ptr[v] != tree.child_ptr[v + 1]:
            labels[v] = label
            continue
        occ = tree.occurrences(v).tolist()
        if len(occ) != 1 or not 0 <= occ[0] <= n:
            report.append(Violation("suffix", v, f"leaf must hold one suffix start, has {occ}"))
            continue
        i = occ[0]
        found[i] += 1
        if data[i:] != label:
            report.append(Violation("suffix", v, f"leaf label does not equal suffix {i}"))
    for i in np.flatnonzero(found != 1).tolist():
        report.append(Violation("suffix-set", tree.root, f"suffix {i} labels {found[i]} leaves"))
    return report
