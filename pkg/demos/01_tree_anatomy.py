# %% [markdown]
# # Anatomy of a k-mer suffix tree
# Build the tree of 3-mers for a six-letter string and look at it from a few angles.

# %%
from pastree import (BuildConfig, Sequence, build_past, check_tree_invariants, node_path_label,
                     partition_windows, to_canonical, to_dot)

seq = Sequence.from_text("abaabc")
k = 3

# %% windows are grouped by their first symbol before anything is built
part = partition_windows(seq, k)
for symbol, starts in part.buckets.items():
    print(chr(symbol), starts.tolist())
print("windows:", part.total_windows)

# %% each group becomes a branch; the branches hang off one root
tree = build_past(seq, BuildConfig(k, workers=2))
print(tree.n_nodes, "nodes")
for leaf in tree.leaves().tolist():
    print(f"{node_path_label(tree, leaf, seq):6s} occurs at {tree.occurrences(leaf).tolist()}")

# %% the canonical dump is what the tests compare byte for byte
print(to_canonical(tree, seq))

# %% structural checks come back as a (hopefully empty) list of violations
report = check_tree_invariants(tree, seq)
print("invariants hold" if report.ok else report)

# %% paste this into graphviz to draw the tree
print(to_dot(tree, seq))
