"""Alphabet-partitioned parallel k-mer suffix trees, a Ukkonen baseline, and search tools."""
from .baseline import build_ukkonen, verify_full_tree
from .bench import (BenchRow, SpeedupPoint, plant_microsatellites, random_sequence, run_suite,
                    speedup, time_build)
from .builder import Branch, BuildConfig, build_branch, build_past, build_sequential, merge_branches
from .core import (TERMINAL, Alphabet, InvariantReport, Node, Sequence, SuffixTree,
                   check_tree_invariants, node_path_label)
from .errors import *  # noqa: F401,F403
from .ingest import (RecordMeta, read_bench_csv, read_fasta, read_sequence, read_text, to_canonical,
                     to_dot, write_bench_csv)
from .partition import KmerPartition, extract_alphabet, partition_windows
from .query import Locus, RepeatHit, enumerate_repeats, find_node, occurrences

__version__ = "0.1.0"
