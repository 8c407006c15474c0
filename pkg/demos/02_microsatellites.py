# %% [markdown]
# # Finding planted microsatellites
# Tandem repeats with 2-6 letter units are written into random DNA at known places,
# then recovered from the k-mer tree with one k per unit size.

# %%
from collections import defaultdict

from pastree import BuildConfig, build_past, enumerate_repeats, occurrences, plant_microsatellites

seq, planted = plant_microsatellites(200_000, count=10, seed=3)
for p in planted:
    print(f"{p.unit:>6s} x{p.copies} at {p.start}")

# %% one tree per unit size
trees = {u: build_past(seq, BuildConfig(u)) for u in sorted({len(p.unit) for p in planted})}

# %% every planted copy shows up among the occurrences of its unit
for p in planted:
    hits = set(occurrences(trees[len(p.unit)], seq, p.unit).tolist())
    missing = [i for i in p.window_starts() if i not in hits]
    print(f"{p.unit:>6s}: {len(hits)} hits in the whole text, missing planted copies: {missing}")

# %% repeats can also be listed wholesale; adjacent copies are what mark a tandem run
def tandem_runs(positions, unit_len, min_copies=3):
    runs, start, prev, copies = [], None, None, 0
    for pos in positions:
        if prev is not None and pos - prev == unit_len:
            copies += 1
        else:
            if copies >= min_copies:
                runs.append((start, copies))
            start, copies = pos, 1
        prev = pos
    if copies >= min_copies:
        runs.append((start, copies))
    return runs

found = defaultdict(list)
for u, tree in trees.items():
    for hit in enumerate_repeats(tree, seq, min_count=3):
        for run in tandem_runs(hit.positions, u):
            found[hit.kmer].append(run)
for p in planted:
    print(p.unit, (p.start, p.copies) in found[p.unit])
