"""Brute-force reference computations. Nothing here touches the package's builders."""
from collections import defaultdict

END = object()  # marker key in the naive trie


def window_starts(records, k):
    """records: list of strings; yields (global_start, window) per in-record window."""
    pos = 0
    for rec in records:
        for i in range(len(rec) - k + 1):
            yield pos + i, rec[i:i + k]
        pos += len(rec)


def window_histogram(records, k):
    hist = defaultdict(list)
    for i, w in window_starts(records, k):
        hist[w].append(i)
    return dict(hist)


def naive_occurrences(text, pattern, k=None):
    """Every start of ``pattern`` in ``text``; with ``k``, only starts <= n - k."""
    limit = len(text) - len(pattern) if k is None else len(text) - k
    return [i for i in range(limit + 1) if text.startswith(pattern, i)]


def _insert(trie, word, occ):
    node = trie
    for ch in word:
        node = node.setdefault(ch, {})
    leaf = node.setdefault(END, [])
    if occ is not None:
        leaf.append(occ)


def _compress(trie, depth, out):
    """Pre-order lines matching the canonical dump: depth, edge text, occurrences."""
    keys = sorted((k for k in trie if k is not END))
    entries = []
    if END in trie:
        entries.append((END, None))
    entries.extend((k, trie[k]) for k in keys)
    for key, child in entries:
        if key is END:
            occ = ",".join(map(str, sorted(trie[END])))
            out.append(f"{depth}\t$\t{occ}")
            continue
        edge = key
        node = child
        while END not in node and len(node) == 1:
            (nk, nxt), = node.items()
            edge += nk
            node = nxt
        if END in node and len(node) == 1:
            occ = ",".join(map(str, sorted(node[END])))
            out.append(f"{depth}\t{edge}$\t{occ}")
        else:
            out.append(f"{depth}\t{edge}\t")
            _compress(node, depth + 1, out)
    return out


def naive_kmer_dump(records, k):
    """Canonical lines of the k-mer tree, built by inserting every window in a dict trie."""
    trie = {}
    _insert(trie, "", None)  # bare marker leaf at the root
    for i, w in window_starts(records, k):
        _insert(trie, w, i)
    return ["0\t\t"] + _compress(trie, 1, [])


def naive_suffix_dump(text):
    """Canonical lines of the full suffix tree of ``text`` + marker."""
    trie = {}
    for i in range(len(text) + 1):
        _insert(trie, text[i:], i)
    return ["0\t\t"] + _compress(trie, 1, [])
