import pytest

from pastree import BuildConfig, Sequence, build_past, enumerate_repeats, to_canonical, to_dot
from pastree.cli import dispatch


@pytest.fixture
def files(tmp_path):
    def make(name, content):
        path = tmp_path / name
        path.write_text(content)
        return str(path)
    return make


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_dot(files, capsys):
    path = files("s.fa", ">s\nacgttacg\n")
    code, out, _ = run(capsys, "build", "--input", path, "--k", "4", "--workers", "8", "--emit", "dot")
    assert code == 0
    root_edges = [l for l in out.splitlines() if l.strip().startswith("n0 ->")]
    assert len(root_edges) == 5
    seq = Sequence.from_text("acgttacg")
    assert out == to_dot(build_past(seq, BuildConfig(4)), seq)


def test_build_canonical_matches_library(files, capsys):
    path = files("s.txt", "abaabc")
    code, out, _ = run(capsys, "build", "--input", path, "--k", "3")
    seq = Sequence.from_text("abaabc")
    assert code == 0 and out == to_canonical(build_past(seq, BuildConfig(3)), seq)


def test_build_baseline(files, capsys):
    path = files("s.txt", "xabxac")
    code, out, _ = run(capsys, "build", "--input", path, "--baseline")
    assert code == 0
    assert sum(1 for l in out.splitlines() if l.split("\t")[1].endswith("$")) == 7


def test_repeats(files, capsys):
    path = files("s.txt", "atatat")
    code, out, _ = run(capsys, "repeats", "--input", path, "--format", "text", "--k", "2", "--min-count", "2")
    assert code == 0
    assert out.splitlines() == ["at\t3\t0,2,4", "ta\t2\t1,3"]
    seq = Sequence.from_text("atatat")
    lib = enumerate_repeats(build_past(seq, BuildConfig(2)), seq, 2)
    assert [l.split("\t")[0] for l in out.splitlines()] == [h.kmer for h in lib]


def test_search(files, capsys):
    path = files("s.txt", "xabxac")
    code, out, _ = run(capsys, "search", "--input", path, "--k", "3", "--pattern", "xa")
    assert (code, out) == (0, "xa: 2 occurrences at 0, 3\n")


def test_search_no_hits(files, capsys):
    path = files("s.txt", "xabxac")
    code, out, _ = run(capsys, "search", "--input", path, "--k", "3", "--pattern", "zz")
    assert (code, out) == (0, "zz: 0 occurrences\n")


def test_search_record_coords(files, capsys):
    path = files("s.fa", ">one\nxab\n>two\nxac\n")
    code, out, _ = run(capsys, "search", "--input", path, "--k", "2", "--pattern", "xa", "--record-coords")
    assert (code, out) == (0, "xa: 2 occurrences at one:0, two:0\n")


def test_normalize_case(files, capsys):
    path = files("s.fa", ">r\nacGTac\n")
    code, out, _ = run(capsys, "search", "--input", path, "--k", "2", "--pattern", "ac", "--normalize-case")
    assert (code, out) == (0, "AC: 2 occurrences at 0, 4\n")


def test_output_file(files, capsys, tmp_path):
    path = files("s.txt", "atatat")
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "repeats", "--input", path, "--k", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("at\t3")


def test_module_error_exit_1(files, capsys):
    path = files("s.txt", "xabxac")
    code, _, err = run(capsys, "search", "--input", path, "--k", "3", "--pattern", "xabx")
    assert code == 1 and "PatternTooLong" in err


def test_missing_file_exit_1(tmp_path, capsys):
    code, _, err = run(capsys, "build", "--input", str(tmp_path / "none.fa"), "--k", "3")
    assert code == 1 and "IoError" in err


@pytest.mark.parametrize("argv", [
    ["build", "--k", "3"],
    ["search", "--input", "x", "--k", "3"],
    ["repeats", "--input", "x", "--k", "3", "--bogus"],
    ["frobnicate"],
    ["repeats", "--input", "x", "--k", "0"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(argv)
    assert exc.value.code == 2


def test_microsatellite_bounds(files, capsys):
    path = files("s.txt", "atatat")
    with pytest.raises(SystemExit) as exc:
        dispatch(["repeats", "--input", path, "--k", "7", "--microsatellite"])
    assert exc.value.code == 2
    code, out, _ = run(capsys, "repeats", "--input", path, "--k", "2", "--microsatellite")
    assert code == 0 and out


def test_workers_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("PAST_WORKERS", "3")
    from pastree.cli import build_parser
    args = build_parser().parse_args(["build", "--input", "x", "--k", "2"])
    assert args.workers == 3


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "0.01", "--ks", "3,4", "--workers", "1,2", "--baseline")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "text_size_mb,builder,k,workers,seconds"
    assert len(lines) == 1 + 1 + 4
    size, builder, k, workers, _ = lines[1].split(",")
    assert float(size) == pytest.approx(0.01, abs=1e-6)
    assert (builder, k, workers) == ("st_based", "", "1")


def test_bench_table(capsys, files):
    path = files("g.txt", "ACGT" * 3000)
    code, out, _ = run(capsys, "bench", "--input", path, "--sizes", "0.005,0.01", "--ks", "3",
                       "--workers", "1,2", "--emit", "table")
    assert code == 0
    assert "Text Size (MB)" in out and "past_1/past_P" in out


def test_deterministic_output(files, capsys):
    path = files("s.txt", "gattacagattacagattaca")
    outs = {run(capsys, "build", "--input", path, "--k", "4", "--workers", str(w))[1] for w in (1, 2, 8)}
    assert len(outs) == 1
