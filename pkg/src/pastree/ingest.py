"""Reading sequences from disk and writing trees and benchmark results out."""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

from .core import Sequence, SuffixTree
from .errors import FormatError, IoError

MB = 1 << 20
CSV_HEADER = ("text_size_mb", "builder", "k", "workers", "seconds")
NA = "n/a"


@dataclass(frozen=True)
class RecordMeta:
    id: str
    global_start: int
    length: int


def _read_bytes(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {os.fspath(path)!r}: {exc.strerror or exc}") from exc


def parse_fasta(raw: bytes, normalize_case: bool = False) -> tuple[Sequence, list[RecordMeta]]:
    names, chunks = [], []
    current = None
    for lineno, line in enumerate(raw.splitlines(), 1):
        line = line.strip()
        if line.startswith(b">"):
            current = []
            chunks.append(current)
            names.append(line[1:].strip().decode("utf-8", errors="replace"))
        elif not line or line.startswith(b";"):
            continue
        elif current is None:
            if not names and not any(l.strip().startswith(b">") for l in raw.splitlines()):
                raise FormatError("no FASTA header found; read the file as plain text instead")
            raise FormatError(f"line {lineno}: sequence data before the first '>' header")
        else:
            current.append(line.upper() if normalize_case else line)
    parts = [b"".join(c) for c in chunks]
    seq = Sequence.from_records(parts)
    meta = [RecordMeta(name, s, n) for name, (s, n) in zip(names, seq.records)]
    return seq, meta


def read_fasta(path, normalize_case: bool = False) -> tuple[Sequence, list[RecordMeta]]:
    """Records delimited by ``>`` headers; sequence lines joined with whitespace stripped."""
    return parse_fasta(_read_bytes(path), normalize_case)


def read_text(path, strip_newlines: bool = True, normalize_case: bool = False) -> Sequence:
    """Whole file as a single record."""
    raw = _read_bytes(path)
    if strip_newlines:
        raw = raw.replace(b"\r", b"").replace(b"\n", b"")
    if normalize_case:
        raw = raw.upper()
    return Sequence.from_text(raw)


def read_sequence(path, format: str = "auto", normalize_case: bool = False) -> tuple[Sequence, list[RecordMeta]]:
    """Dispatch on ``format``; ``auto`` picks FASTA when the first byte is ``>``."""
    if format == "auto":
        raw = _read_bytes(path)
        format = "fasta" if raw[:1] == b">" else "text"
    if format == "fasta":
        return read_fasta(path, normalize_case)
    if format == "text":
        seq = read_text(path, normalize_case=normalize_case)
        return seq, [RecordMeta("", 0, seq.n)]
    raise FormatError(f"unknown input format {format!r}")


def to_record_coords(pos: int, meta: list[RecordMeta]) -> tuple[str, int]:
    for rec in meta:
        if rec.global_start <= pos < rec.global_start + rec.length:
            return rec.id, pos - rec.global_start
    raise IndexError(pos)


# -- tree serialization ------------------------------------------------------


def escape_symbols(raw: bytes) -> str:
    """Printable ASCII as-is; ``$``, backslash and everything else as ``\\xNN``."""
    out = []
    for b in raw:
        if 0x21 <= b <= 0x7E and b not in (0x24, 0x5C):
            out.append(chr(b))
        else:
            out.append(f"\\x{b:02x}")
    return "".join(out)


def _edge_label(tree: SuffixTree, v: int, seq: Sequence) -> str:
    s, n = int(tree.edge_start[v]), int(tree.edge_len[v])
    label = escape_symbols(seq.data[s:s + n])
    return label + "$" if tree.has_terminal[v] else label


def to_canonical(tree: SuffixTree, seq: Sequence) -> str:
    """Pre-order dump, one ``depth<TAB>edge<TAB>occurrences`` line per node."""
    lines = []
    for v, depth in tree.walk():
        label = "" if v == tree.root else _edge_label(tree, v, seq)
        occ = ",".join(map(str, tree.occurrences(v).tolist()))
        lines.append(f"{depth}\t{label}\t{occ}")
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(tree: SuffixTree, seq: Sequence, name: str = "suffix_tree") -> str:
    """Graphviz digraph; leaves are boxes labelled with their occurrence lists."""
    out = [f"digraph {name} {{", "  node [shape=circle, label=\"\"];"]
    edges = []
    for v, _ in tree.walk():
        lo, hi = int(tree.child_ptr[v]), int(tree.child_ptr[v + 1])
        if v == tree.root:
            out.append(f"  n{v} [shape=point];")
        elif lo == hi:
            occ = ",".join(map(str, tree.occurrences(v).tolist()))
            out.append(f"  n{v} [shape=box, label={_dot_quote('{' + occ + '}')}];")
        else:
            out.append(f"  n{v};")
        for c in tree.child_ids[lo:hi].tolist():
            edges.append(f"  n{v} -> n{c} [label={_dot_quote(_edge_label(tree, c, seq))}];")
    out.extend(edges)
    out.append("}")
    return "\n".join(out) + "\n"


# -- benchmark CSV -----------------------------------------------------------


def _format_mb(text_size: int) -> str:
    # 7 decimals resolve single bytes, so parsing recovers the exact size
    return f"{text_size / MB:.7f}".rstrip("0").rstrip(".")


def bench_csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        seconds = f"{r.seconds:.3f}" if r.status == "ok" else NA
        k = "" if r.k is None else str(r.k)
        w.writerow((_format_mb(r.text_size), r.builder, k, str(r.workers), seconds))
    return buf.getvalue()


def write_bench_csv(rows, path) -> None:
    """Write timing rows; timed-out runs get ``n/a`` in the seconds column."""
    rows = list(rows)
    if not rows:
        raise ValueError("no benchmark rows to write")
    try:
        with open(path, "w", newline="") as fh:
            fh.write(bench_csv_text(rows))
    except OSError as exc:
        raise IoError(f"cannot write {os.fspath(path)!r}: {exc.strerror or exc}") from exc


def parse_bench_csv(text: str):
    from .bench import BenchRow

    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise FormatError(f"unexpected bench CSV header {header!r}")
    rows = []
    for rec in reader:
        size, builder, k, workers, seconds = rec
        timeout = seconds == NA
        rows.append(BenchRow(
            text_size=int(round(float(size) * MB)),
            builder=builder,
            k=int(k) if k else None,
            workers=int(workers),
            seconds=None if timeout else float(seconds),
            status="timeout" if timeout else "ok",
        ))
    return rows


def read_bench_csv(path):
    return parse_bench_csv(_read_bytes(path).decode("utf-8"))


def render_table(rows) -> str:
    """Human-readable table: one line per text size, builders and k values as columns."""
    rows = list(rows)
    sizes = sorted({r.text_size for r in rows})
    cols = []
    if any(r.builder == "st_based" for r in rows):
        cols.append(("st_based", None, None))
    for key in sorted({(r.k, r.workers) for r in rows if r.builder == "past"}):
        cols.append(("past", *key))
    cells = {}
    for r in rows:
        key = ("st_based", None, None) if r.builder == "st_based" else ("past", r.k, r.workers)
        cells[(r.text_size, key)] = f"{r.seconds:.3f}" if r.status == "ok" else NA
    headers = ["Text Size (MB)"] + [
        "ST-Based (s)" if b == "st_based" else f"PaST k={k} P={w} (s)" for b, k, w in cols]
    body = [[_format_mb(s)] + [cells.get((s, c), "") for c in cols] for s in sizes]
    widths = [max(len(h), *(len(line[i]) for line in body)) if body else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(line, widths)) for line in body)
    return "\n".join(lines) + "\n"
