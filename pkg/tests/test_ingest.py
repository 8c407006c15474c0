import re

import numpy as np
import pytest

from pastree import (BenchRow, BuildConfig, FormatError, IoError, Sequence, build_past,
                     build_sequential, build_ukkonen, read_bench_csv, read_fasta, read_text,
                     to_canonical, to_dot, write_bench_csv)
from pastree.ingest import MB, bench_csv_text, parse_fasta, read_sequence, render_table


def write(tmp_path, name, content):
    path = tmp_path / name
    path.write_bytes(content if isinstance(content, bytes) else content.encode())
    return path


class TestFasta:
    def test_single_record(self, tmp_path):
        seq, meta = read_fasta(write(tmp_path, "a.fa", ">r1\nACGT\nTACG\n"))
        assert seq.data == b"ACGTTACG"
        assert [(m.id, m.global_start, m.length) for m in meta] == [("r1", 0, 8)]

    def test_two_records(self, tmp_path):
        seq, meta = read_fasta(write(tmp_path, "b.fa", ">a\nAC\n>b\nGT\n"))
        assert seq.records == ((0, 2), (2, 2))
        assert [m.id for m in meta] == ["a", "b"]

    def test_normalize_case(self, tmp_path):
        seq, _ = read_fasta(write(tmp_path, "c.fa", ">x\nacGT\n"), normalize_case=True)
        assert seq.data == bytes(b - 32 if 97 <= b <= 122 else b for b in b"acGT")

    def test_whitespace_and_crlf(self, tmp_path):
        seq, _ = read_fasta(write(tmp_path, "d.fa", ">x desc here\r\n  AC \r\n\r\nGT\r\n"))
        assert seq.data == b"ACGT"

    def test_plain_text_rejected(self, tmp_path):
        with pytest.raises(FormatError, match="plain text"):
            read_fasta(write(tmp_path, "e.txt", "ACGT\n"))

    def test_data_before_header_rejected(self, tmp_path):
        with pytest.raises(FormatError):
            read_fasta(write(tmp_path, "f.fa", "AC\n>x\nGT\n"))

    def test_empty_file(self, tmp_path):
        seq, meta = read_fasta(write(tmp_path, "g.fa", ""))
        assert seq.n == 0 and meta == []

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            read_fasta(tmp_path / "nope.fa")

    def test_round_trip(self):
        raw = b">one\nACGTN\nAC\n>two\n\n>three\nTTT\n"
        seq, meta = parse_fasta(raw)
        rebuilt = b"".join(b">" + m.id.encode() + b"\n" + seq.data[m.global_start:m.global_start + m.length] + b"\n"
                           for m in meta)
        assert parse_fasta(rebuilt)[0] == seq


class TestText:
    def test_single_record(self, tmp_path):
        seq = read_text(write(tmp_path, "a.txt", "abaabc"))
        assert seq.n == 6 and seq.records == ((0, 6),)

    def test_strip_newlines(self, tmp_path):
        assert read_text(write(tmp_path, "b.txt", "ab\ncd")).data == b"abcd"
        assert read_text(write(tmp_path, "c.txt", "ab\ncd"), strip_newlines=False).data == b"ab\ncd"

    def test_large_protein_file(self, tmp_path):
        rng = np.random.default_rng(0)
        letters = np.frombuffer(b"ACDEFGHIKLMNPQRSTVWY", dtype=np.uint8)
        path = write(tmp_path, "p.txt", letters[rng.integers(0, 20, 10 * MB)].tobytes())
        assert read_text(path).n == 10 * 2**20

    def test_auto_format(self, tmp_path):
        seq, meta = read_sequence(write(tmp_path, "x", ">r\nAC\n"))
        assert seq.data == b"AC" and meta[0].id == "r"
        seq, meta = read_sequence(write(tmp_path, "y", "AC\n"))
        assert seq.data == b"AC" and meta[0].id == ""


class TestCanonical:
    def test_empty_tree_two_lines(self):
        seq = Sequence.from_text("")
        assert to_canonical(build_sequential(seq, 3), seq).splitlines() == ["0\t\t", "1\t$\t"]

    def test_workers_do_not_change_bytes(self):
        seq = Sequence.from_text("abaabc")
        one = to_canonical(build_past(seq, BuildConfig(3, workers=1)), seq)
        eight = to_canonical(build_past(seq, BuildConfig(3, workers=8)), seq)
        assert one == eight

    def test_ukkonen_leaf_lines(self):
        seq = Sequence.from_text("xabxac")
        lines = to_canonical(build_ukkonen(seq), seq).splitlines()
        assert sum(1 for l in lines if l.split("\t")[1].endswith("$")) == 7

    def test_abaabc_dump(self):
        seq = Sequence.from_text("abaabc")
        assert to_canonical(build_sequential(seq, 3), seq).splitlines() == [
            "0\t\t", "1\t$\t", "1\ta\t", "2\tab$\t2", "2\tb\t", "3\ta$\t0", "3\tc$\t3", "1\tbaa$\t1",
        ]

    def test_distinct_trees_distinct_dumps(self):
        rng = np.random.default_rng(4)
        seen = {}
        for _ in range(300):
            text = bytes(rng.choice(list(b"ab"), rng.integers(0, 9)).tolist())
            k = int(rng.integers(1, 4))
            seq = Sequence.from_text(text)
            tree = build_sequential(seq, k)
            shape = tuple(sorted((tuple(tree.occurrences(v).tolist()), text[tree.occurrences(v)[0]:][:k])
                                 for v in tree.leaves().tolist() if len(tree.occurrences(v))))
            dump = to_canonical(tree, seq)
            assert seen.setdefault(dump, shape) == shape


NODE_RE = re.compile(r"^\s+n(\d+)( \[.*\])?;$")
EDGE_RE = re.compile(r'^\s+n(\d+) -> n(\d+) \[label="(.*)"\];$')


def parse_dot(text):
    nodes, edges = set(), []
    for line in text.splitlines():
        if m := EDGE_RE.match(line):
            edges.append((int(m[1]), int(m[2]), m[3]))
        elif m := NODE_RE.match(line):
            nodes.add(int(m[1]))
    return nodes, edges


class TestDot:
    def test_abaabc_root_edges(self):
        seq = Sequence.from_text("abaabc")
        tree = build_sequential(seq, 3)
        nodes, edges = parse_dot(to_dot(tree, seq))
        root_edges = [label for src, _, label in edges if src == tree.root]
        assert root_edges == ["$", "a", "baa$"]

    def test_empty_tree(self):
        seq = Sequence.from_text("")
        nodes, edges = parse_dot(to_dot(build_sequential(seq, 2), seq))
        assert len(nodes) == 2 and len(edges) == 1

    @pytest.mark.parametrize("text, k", [("gattacagattaca", 4), ("mississippi", 0)])
    def test_counts_match_arena(self, text, k):
        seq = Sequence.from_text(text)
        tree = build_sequential(seq, k) if k else build_ukkonen(seq)
        dot = to_dot(tree, seq)
        nodes, edges = parse_dot(dot)
        assert dot.startswith("digraph ")
        assert len(nodes) == tree.n_nodes
        assert len(edges) == tree.n_nodes - 1

    def test_quotes_escaped(self):
        seq = Sequence.from_text('a"b"a')
        dot = to_dot(build_sequential(seq, 2), seq)
        assert '"a\\"$"' in dot


class TestBenchCsv:
    def test_rows_from_table(self, tmp_path):
        rows = [
            BenchRow(5 * MB, "st_based", None, 1, 92.0),
            BenchRow(30 * MB, "past", 5, 16, 136.0),
            BenchRow(40 * MB, "st_based", None, 1, None, "timeout"),
        ]
        path = tmp_path / "t.csv"
        write_bench_csv(rows, path)
        assert path.read_text().splitlines() == [
            "text_size_mb,builder,k,workers,seconds",
            "5,st_based,,1,92.000",
            "30,past,5,16,136.000",
            "40,st_based,,1,n/a",
        ]
        assert read_bench_csv(path) == rows

    def test_fractional_sizes_round_trip(self):
        from pastree.ingest import parse_bench_csv
        rows = [BenchRow(123_457, "past", 7, 2, 0.125), BenchRow(1, "past", 1, 1, 1.5)]
        assert parse_bench_csv(bench_csv_text(rows)) == rows

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_bench_csv([], tmp_path / "x.csv")

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoError):
            write_bench_csv([BenchRow(1, "past", 1, 1, 1.0)], tmp_path / "missing" / "x.csv")

    def test_table_layout(self):
        rows = [BenchRow(5 * MB, "st_based", None, 1, 92.0), BenchRow(5 * MB, "past", 5, 16, 24.0),
                BenchRow(5 * MB, "past", 10, 16, 35.0), BenchRow(40 * MB, "st_based", None, 1, None, "timeout"),
                BenchRow(40 * MB, "past", 5, 16, 173.0)]
        lines = render_table(rows).splitlines()
        assert "ST-Based (s)" in lines[0] and "PaST k=5 P=16 (s)" in lines[0]
        assert lines[2].split() == ["5", "92.000", "24.000", "35.000"]
        assert lines[3].split() == ["40", "n/a", "173.000"]
