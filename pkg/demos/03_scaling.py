# %% [markdown]
# # Timing the builders
# A small version of the construction-time table: the full Ukkonen tree against
# the k-mer tree for a few input sizes and window lengths. Absolute numbers depend
# on the machine; the gap between the two columns is the point.

# %%
import os

from pastree import random_sequence, run_suite, speedup
from pastree.ingest import MB, render_table

sizes = [MB // 8, MB // 4, MB // 2]
inputs = [(random_sequence(n, sigma=4, seed=n), n) for n in sizes]
workers = sorted({1, min(4, os.cpu_count() or 1)})

result = run_suite(inputs, ks=[5, 10], workers=workers, baseline=True, timeout=120)
print(render_table(result.rows))

# %% ratios of sequential time over the PaST time
for point in result.speedups:
    print(f"{point.text_size / MB:.3f} MB  k={point.k}  P={point.workers}  {point.kind}: {point.ratio:.1f}x")

# %% the headline figure quoted for this method is a ratio of two published times
print(f"published 30 MB row: {speedup(2028, 136):.1f}x")
