"""Construction-time measurements, speedup ratios and synthetic inputs.

Timings cover tree construction only: sequences are loaded before the clock
starts and nothing is serialized inside the timed region.
"""
from __future__ import annotations

import math
import multiprocessing as mp
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, NamedTuple

import numpy as np

from .baseline import build_ukkonen
from .builder import BuildConfig, build_past
from .core import Sequence
from .errors import ConfigError, InvalidDuration

BUILDERS = ("past", "st_based")
DNA = b"ACGT"
PROTEIN = b"ACDEFGHIKLMNPQRSTVWY"

CROSS = "st_based/past"
SELF = "past_1/past_P"


@dataclass(frozen=True)
class BenchRow:
    text_size: int
    builder: str
    k: int | None
    workers: int
    seconds: float | None
    status: str = "ok"


@dataclass(frozen=True)
class SpeedupPoint:
    """``ratio`` of a sequential time over a parallel one; ``kind`` says which pair."""

    text_size: int
    ratio: float
    kind: str
    k: int | None = None
    workers: int | None = None


@dataclass
class SuiteResult:
    rows: list[BenchRow] = field(default_factory=list)
    speedups: list[SpeedupPoint] = field(default_factory=list)


def speedup(sequential: float, parallel: float) -> float:
    for t in (sequential, parallel):
        if not isinstance(t, (int, float)) or math.isnan(t) or t <= 0:
            raise InvalidDuration(f"durations must be positive, got {sequential!r} and {parallel!r}")
    return sequential / parallel


def _runner(builder: str, k, workers: int, scan_mode: str) -> Callable[[Sequence], object]:
    if builder not in BUILDERS:
        raise ConfigError(f"builder must be one of {BUILDERS}, got {builder!r}")
    if builder == "st_based":
        if k is not None:
            raise ConfigError("the st_based builder indexes full suffixes and takes no k")
        return build_ukkonen
    if k is None:
        raise ConfigError("the past builder needs a window size k")
    cfg = BuildConfig(k, workers=workers, scan_mode=scan_mode)
    return partial(build_past, cfg=cfg)


def _timed(run, seq):
    t0 = time.perf_counter()
    run(seq)
    t1 = time.perf_counter()
    return t0, t1


def _child(run, seq, conn):
    try:
        conn.send(_timed(run, seq))
    finally:
        conn.close()


def _timed_with_cutoff(run, seq, timeout: float):
    """Run in a child process; returns ``None`` if it outlives ``timeout`` seconds."""
    methods = mp.get_all_start_methods()
    ctx = mp.get_context("fork" if "fork" in methods else "spawn")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(run, seq, send))
    proc.start()
    send.close()
    try:
        if not recv.poll(timeout):
            return None
        return recv.recv()
    except EOFError:
        raise RuntimeError("benchmark child exited without a result") from None
    finally:
        if proc.is_alive():
            proc.terminate()
        proc.join()
        recv.close()


def time_build(builder: str, seq: Sequence, k: int | None = None, workers: int = 1,
               repetitions: int = 1, timeout: float | None = None, *,
               scan_mode: str = "single", text_size: int | None = None,
               on_event: Callable[[str, float], None] | None = None) -> BenchRow:
    """Best-of-``repetitions`` wall time of one construction.

    With ``timeout`` set each run happens in a child process that is killed at
    the cutoff, and the row is marked ``timeout``. ``on_event`` receives the
    ``enter``/``exit`` timestamps bracketing each timed build.
    """
    if repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    run = _runner(builder, k, workers, scan_mode)
    size = seq.n if text_size is None else text_size
    k = None if builder == "st_based" else k
    best = None
    for _ in range(repetitions):
        stamps = _timed(run, seq) if timeout is None else _timed_with_cutoff(run, seq, timeout)
        if stamps is None or (timeout is not None and stamps[1] - stamps[0] > timeout):
            return BenchRow(size, builder, k, workers, None, "timeout")
        if on_event is not None:
            on_event("enter", stamps[0])
            on_event("exit", stamps[1])
        dt = stamps[1] - stamps[0]
        best = dt if best is None else min(best, dt)
    return BenchRow(size, builder, k, workers, best, "ok")


def run_suite(inputs, ks, workers, baseline: bool = False, repetitions: int = 1,
              timeout: float | None = None, scan_mode: str = "single",
              csv_path=None, progress: Callable[[BenchRow], None] | None = None) -> SuiteResult:
    """Sweep inputs x k x worker counts, plus one baseline row per input.

    ``inputs`` holds ``(sequence, text_size)`` pairs. Two kinds of speedup come
    back: baseline over PaST at the largest worker count, and PaST on one
    worker over PaST on each larger worker count.
    """
    inputs, ks, workers = list(inputs), list(ks), sorted(set(workers))
    if not inputs or not ks or not workers:
        raise ConfigError("run_suite needs at least one input, k and worker count")
    result = SuiteResult()

    def record(row):
        result.rows.append(row)
        if progress is not None:
            progress(row)
        return row

    for seq, size in inputs:
        base = record(time_build("st_based", seq, None, 1, repetitions, timeout, text_size=size)) if baseline else None
        for k in ks:
            past = {w: record(time_build("past", seq, k, w, repetitions, timeout,
                                         scan_mode=scan_mode, text_size=size))
                    for w in workers}
            top = past[workers[-1]]
            if base is not None and base.status == top.status == "ok":
                result.speedups.append(SpeedupPoint(size, speedup(base.seconds, top.seconds), CROSS, k, top.workers))
            one = past.get(1)
            for w in workers:
                if w > 1 and one is not None and one.status == past[w].status == "ok":
                    result.speedups.append(SpeedupPoint(size, speedup(one.seconds, past[w].seconds), SELF, k, w))
    if csv_path is not None:
        from .ingest import write_bench_csv
        write_bench_csv(result.rows, csv_path)
    return result


# -- synthetic inputs ----------------------------------------------------------


def _symbols(sigma: int) -> bytes:
    if sigma == 4:
        return DNA
    if sigma == 20:
        return PROTEIN
    if not 1 <= sigma <= 256:
        raise ConfigError(f"sigma must be in 1..256, got {sigma}")
    pool = bytes(range(ord("a"), ord("z") + 1)) + bytes(range(ord("A"), ord("Z") + 1))
    return pool[:sigma] if sigma <= len(pool) else bytes(range(sigma))


def random_sequence(n: int, sigma: int = 4, seed=None) -> Sequence:
    """Uniform i.i.d. text; ``sigma`` 4 gives ACGT and 20 the amino-acid letters."""
    alphabet = np.frombuffer(_symbols(sigma), dtype=np.uint8)
    rng = np.random.default_rng(seed)
    return Sequence.from_text(alphabet[rng.integers(0, len(alphabet), n)].tobytes())


class PlantedRepeat(NamedTuple):
    unit: str
    copies: int
    start: int

    def window_starts(self) -> list[int]:
        u = len(self.unit)
        return [self.start + j * u for j in range(self.copies)]


def plant_microsatellites(n: int, count: int = 20, unit_sizes=range(2, 7), copies=(3, 8),
                          sigma: int = 4, seed=None) -> tuple[Sequence, list[PlantedRepeat]]:
    """Random background with ``count`` tandem repeats written at known places.

    Unit sizes cycle through ``unit_sizes`` and copy numbers are drawn from the
    inclusive range ``copies``. Repeats never overlap each other.
    """
    rng = np.random.default_rng(seed)
    alphabet = np.frombuffer(_symbols(sigma), dtype=np.uint8)
    data = alphabet[rng.integers(0, len(alphabet), n)].copy()
    sizes = list(unit_sizes)
    slot = n // max(count, 1)
    planted = []
    for i in range(count):
        u = sizes[i % len(sizes)]
        c = int(rng.integers(copies[0], copies[1] + 1))
        span = u * c
        if span > slot:
            raise ConfigError(f"sequence of {n} symbols is too short for {count} repeats")
        unit = alphabet[rng.integers(0, len(alphabet), u)]
        start = i * slot + int(rng.integers(0, slot - span + 1))
        data[start:start + span] = np.tile(unit, c)
        planted.append(PlantedRepeat(unit.tobytes().decode("latin-1"), c, start))
    return Sequence.from_text(data.tobytes()), planted
