import csv
import io
import math

import pytest

from succinct_intervals import cli
from succinct_intervals.audit import (
    CSV_FIELDS,
    log_factorial_bits,
    redundancy_curve,
    redundancy_report,
    stirling_bits,
    to_csv,
)
from succinct_intervals.core import oracle_adj
from succinct_intervals.formats import read_uir


def test_log_factorial():
    assert log_factorial_bits(0) == 0 and log_factorial_bits(1) == 0
    assert log_factorial_bits(3) == pytest.approx(math.log2(6))
    n = 2**20
    assert abs(log_factorial_bits(n) - stirling_bits(n)) / log_factorial_bits(n) < 1e-4
    assert log_factorial_bits(170) == pytest.approx(math.log2(math.factorial(170)), rel=1e-12)


def test_reports_n_1024():
    adj = redundancy_report("adj", 1024, seed=0, query_samples=2000)
    assert adj.redundancy <= 8 * math.sqrt(1024) * 10
    cp = redundancy_report("cellprobe", 1024, seed=0, query_samples=2000)
    assert cp.measured_bits - math.ceil(cp.benchmark_bits) <= 3 and cp.meta_bits > 0
    deg = redundancy_report("deg", 1024, seed=0, query_samples=2000)
    assert deg.probe_max <= 12


def test_report_deterministic():
    assert redundancy_report("deg", 300, 4, 500) == redundancy_report("deg", 300, 4, 500)


def test_curve_and_csv():
    rows = redundancy_curve("adj", [1], seed=0)
    assert rows[0].benchmark_bits == 0
    text = to_csv(redundancy_curve("cellprobe", [1, 50], seed=1, query_samples=10))
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_FIELDS and len(parsed) == 2
    with pytest.raises(ValueError):
        redundancy_curve("adj", [])
    with pytest.raises(ValueError):
        redundancy_report("nope", 5)


def test_cli_roundtrip(tmp_path, capsys):
    g = tmp_path / "g.uir"
    assert cli.run(["gen", "--n", "3", "--seed", "7", "--out", str(g)]) == 0
    rep = read_uir(g)
    for kind in ("adj", "cellprobe"):
        out = tmp_path / f"g.{kind}"
        assert cli.run(["build", "--kind", kind, "--in", str(g), "--out", str(out)]) == 0
        capsys.readouterr()
        assert cli.run(["query", "--kind", kind, "--in", str(out), "adj", "1", "2"]) == 0
        assert capsys.readouterr().out.strip() == str(oracle_adj(rep, 1, 2)).lower()


def test_cli_deg_query_and_reconstruct(tmp_path, capsys):
    src = tmp_path / "t.uir"
    src.write_text("UIR 1\n3\n3 2 3\n")
    built = tmp_path / "t.deg"
    assert cli.run(["build", "--kind", "deg", "--in", str(src), "--out", str(built)]) == 0
    assert cli.run(["query", "--kind", "deg", "--in", str(built), "deg", "1"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    back = tmp_path / "back.uir"
    assert cli.run(["reconstruct", "--kind", "deg", "--in", str(built), "--out", str(back)]) == 0
    assert back.read_bytes() == src.read_bytes()


@pytest.mark.parametrize("kind", ["adj", "deg", "cellprobe"])
def test_cli_reconstruct_bytes(tmp_path, kind):
    g = tmp_path / "g.uir"
    cli.run(["gen", "--n", "200", "--seed", "3", "--out", str(g)])
    built = tmp_path / "g.bin"
    back = tmp_path / "back.uir"
    assert cli.run(["build", "--kind", kind, "--in", str(g), "--out", str(built)]) == 0
    assert cli.run(["reconstruct", "--kind", kind, "--in", str(built), "--out", str(back)]) == 0
    assert back.read_bytes() == g.read_bytes()


def test_cli_errors(tmp_path, capsys):
    g = tmp_path / "g.uir"
    cli.run(["gen", "--n", "5", "--seed", "1", "--out", str(g)])
    built = tmp_path / "g.adj"
    cli.run(["build", "--kind", "adj", "--in", str(g), "--out", str(built)])
    capsys.readouterr()
    assert cli.run(["query", "--kind", "adj", "--in", str(built), "adj", "0", "1"]) == 1
    assert "vertex 0" in capsys.readouterr().err
    assert cli.run(["query", "--kind", "adj", "--in", str(built), "adj", "1", "9"]) == 1
    assert cli.run(["query", "--kind", "deg", "--in", str(built), "deg", "1"]) == 1
    assert "magic" in capsys.readouterr().err
    assert cli.run(["query", "--kind", "adj", "--in", str(built), "adj", "1"]) == 1
    assert cli.run(["gen", "--n", "0", "--seed", "1"]) == 1
    assert cli.run(["build", "--kind", "adj", "--in", str(tmp_path / "missing"), "--out", str(built)]) == 1
    bad = tmp_path / "bad.uir"
    bad.write_text("UIR 1\n2\n2 1\n")
    assert cli.run(["build", "--kind", "adj", "--in", str(bad), "--out", str(built)]) == 1


def test_cli_convert(tmp_path, capsys):
    src = tmp_path / "iv.txt"
    src.write_text("1 3\n2 5\n4 6\n")
    assert cli.run(["convert", "--in", str(src)]) == 0
    assert capsys.readouterr().out == "UIR 1\n3\n2 3 3\n"


def test_cli_audit(capsys):
    assert cli.run(["audit", "--kind", "cellprobe", "--n-list", "16,64", "100", "--queries", "50"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_FIELDS) and len(lines) == 4
