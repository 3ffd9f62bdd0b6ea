"""Acceptance criteria, one test per criterion.

Each test prints a one-line verdict; the conftest hook also lists the
pass/fail status of every criterion at the end of the run.
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import chisquare

from succinct_intervals.adjacency import adj_decode_endpoint, adj_query, adj_reconstruct, build_adj
from succinct_intervals.audit import log_factorial_bits, normalizer, probe_counts
from succinct_intervals.cellprobe import build_cellprobe, cp_adj_query
from succinct_intervals.core import (
    ClassicRep,
    UniversalRep,
    adjacency_matrix,
    classic_to_universal,
    intersection_matrix,
    left_rank_order,
    oracle_adj,
    oracle_deg,
    oracle_degrees,
    reconstruct_from_degrees,
    sample_uniform,
    sample_uniform_batch,
)
from succinct_intervals.degree import build_deg, deg_query, deg_reconstruct
from succinct_intervals.spill import spill_decode_x, spill_decode_y, spill_encode, spill_params

SPACE_SCHEDULE = [2**k for k in range(10, 21, 2)]
PROBE_SCHEDULE = [2**k for k in range(10, 21)]
C_ADJ = 8
C_DEG = 8


def verdict(num, ok, detail):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def correctness_schedule():
    rng = np.random.default_rng(2024)
    for n in range(1, 65):
        for _ in range(50):
            yield sample_uniform(n, rng)
    for n in (200, 500):
        for _ in range(5):
            yield sample_uniform(n, rng)


_codes: dict = {}


def code_for(kind, n):
    """Structures for the space and probe criteria share one rep per n."""
    key = (kind, n)
    if key not in _codes:
        rep = sample_uniform(n, n)
        build = {"adj": build_adj, "deg": build_deg, "cellprobe": build_cellprobe}[kind]
        _codes[key] = build(rep)
    return _codes[key]


def test_criterion_01_adjacency_correctness():
    t0 = time.perf_counter()
    bad = 0
    reps = 0
    for rep in correctness_schedule():
        n = rep.n
        adj, cp = build_adj(rep), build_cellprobe(rep)
        truth = adjacency_matrix(rep)
        for i in range(1, n + 1):
            row = truth[i - 1]
            for j in range(1, n + 1):
                t = bool(row[j - 1])
                if adj_query(adj, i, j) != t or cp_adj_query(cp, i, j) != t:
                    bad += 1
        reps += 1
    # the matrix oracle itself is checked against oracle_adj on a few reps
    for seed in range(3):
        rep = sample_uniform(64, seed)
        m = adjacency_matrix(rep)
        assert all(m[i - 1, j - 1] == oracle_adj(rep, i, j) for i in range(1, 65) for j in range(1, 65))
    ok = verdict(1, bad == 0, f"{reps} reps, {bad} mismatches, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_criterion_02_degree_correctness():
    t0 = time.perf_counter()
    bad = 0
    reps = 0
    for rep in correctness_schedule():
        code = build_deg(rep)
        for i in range(1, rep.n + 1):
            if deg_query(code, i) != oracle_deg(rep, i):
                bad += 1
        reps += 1
    ok = verdict(2, bad == 0, f"{reps} reps, {bad} mismatches, {time.perf_counter() - t0:.1f}s")
    assert ok


def _space(kind, const, num):
    rows = []
    for n in SPACE_SCHEDULE:
        r = code_for(kind, n).measured_bits - log_factorial_bits(n)
        rows.append((n, r, r / normalizer(kind, n)))
    within = all(norm <= const for _, _, norm in rows)
    drift = rows[-1][2] <= 2 * rows[0][2]
    detail = ", ".join(f"2^{n.bit_length() - 1}:{norm:.3f}" for n, _, norm in rows)
    return verdict(num, within and drift, f"normalized r {detail}; C={const}, drift ok={drift}")


def test_criterion_03_adjacency_space():
    assert _space("adj", C_ADJ, 3)


def test_criterion_04_degree_space():
    assert _space("deg", C_DEG, 4)


def test_criterion_05_cellprobe_space():
    rows = []
    for n in (2**10, 2**14, 2**18):
        code = code_for("cellprobe", n)
        rows.append((n, code.data_bits - math.ceil(log_factorial_bits(n)), code.meta_bits))
    ok = all(excess <= 3 for _, excess, _ in rows)
    detail = ", ".join(f"2^{n.bit_length() - 1}: +{e} data bits, meta {m}" for n, e, m in rows)
    assert verdict(5, ok, detail)


def test_criterion_06_constant_probes():
    limits = {"adj": 8, "deg": 12, "cellprobe": 4}
    ok = True
    parts = []
    for kind, limit in limits.items():
        maxima = []
        for n in PROBE_SCHEDULE:
            probes = probe_counts(kind, code_for(kind, n), n, 100_000, seed=n)
            maxima.append(int(probes.max()))
        flat = all(b <= a + 1 for a, b in zip(maxima, maxima[1:]))
        ok &= max(maxima) <= limit and flat
        parts.append(f"{kind} max {maxima} (limit {limit}, flat={flat})")
    assert verdict(6, ok, "; ".join(parts))


def _link_grid():
    rng = np.random.default_rng(7)
    xs = rng.integers(4, 4097, size=40_000)
    ys = rng.integers(2, 4097, size=40_000)
    pairs = set(zip(xs.tolist(), ys.tolist()))
    for X in (4, 5, 16, 63, 64, 65, 1000, 4095, 4096):
        for Y in (2, 3, 100, 2048, 4095, 4096):
            pairs.add((X, Y))
    return sorted(pairs)


def test_criterion_07_link_properties():
    bad_round = 0
    for X in range(1, 65):
        for Y in range(1, 65):
            p = spill_params(X, Y)
            seen = set()
            for x in range(X):
                for y in range(Y):
                    m, s = spill_encode(x, y, p)
                    seen.add((m, s))
                    if spill_decode_y(m, p) != y or spill_decode_x(m, s, p) != x:
                        bad_round += 1
            if len(seen) != X * Y:
                bad_round += 1
    over = []
    grid = _link_grid()
    for X, Y in grid:
        p = spill_params(X, Y)
        r = p.M + math.log2(p.S) - math.log2(X * Y)
        bound = math.log2(1 + 2 / math.sqrt(X))
        if r > bound + 1e-12:
            over.append((X, Y, r / bound))
    worst = max(over, key=lambda t: t[2]) if over else None
    detail = (
        f"round-trip/injectivity failures {bad_round}; "
        f"{len(over)}/{len(grid)} grid links above log2(1+2/sqrt X)"
        + (f", worst X={worst[0]} Y={worst[1]} at {worst[2]:.3f}x bound" if worst else "")
    )
    assert verdict(7, bad_round == 0 and not over, detail)


def test_criterion_08_classic_pipeline():
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        perm = rng.permutation(np.arange(1, 2 * n + 1)).tolist()
        intervals = [tuple(sorted(perm[2 * k:2 * k + 2])) for k in range(n)]
        c = ClassicRep(intervals)
        rep = classic_to_universal(c)
        idx = [k - 1 for k in left_rank_order(c)]
        before = intersection_matrix(c.intervals)[np.ix_(idx, idx)]
        if not np.array_equal(before, adjacency_matrix(rep)):
            bad += 1
    assert verdict(8, bad == 0, f"200 classic reps, {bad} adjacency mismatches")


def _batch_index(batch):
    n = batch.shape[1]
    idx = np.zeros(batch.shape[0], dtype=np.int64)
    for i in range(1, n + 1):
        idx = idx * (n - i + 1) + (batch[:, i - 1] - i)
    return idx


def test_criterion_09_uniform_sampling():
    ok = True
    parts = []
    for n in (3, 4, 5):
        batch = sample_uniform_batch(n, 1_000_000, seed=900 + n)
        counts = np.bincount(_batch_index(batch), minlength=math.factorial(n))
        assert counts.size == math.factorial(n)
        pval = chisquare(counts).pvalue
        ok &= pval > 1e-3
        parts.append(f"n={n} p={pval:.4f}")
    assert verdict(9, ok, ", ".join(parts))


def test_criterion_10_reconstruction():
    bad = []
    for n in (1, 3, 10, 100, 1000):
        rep = sample_uniform(n, n + 10)
        if reconstruct_from_degrees(lambda k: oracle_deg(rep, k), n) != rep:
            bad.append(f"oracle n={n}")
    for n in (1, 10, 100, 1000, 10_000):
        rep = sample_uniform(n, n + 20)
        degs = oracle_degrees(rep)
        if reconstruct_from_degrees(lambda k: degs[k - 1], n) != rep:
            bad.append(f"fast oracle n={n}")
        if deg_reconstruct(build_deg(rep)) != rep:
            bad.append(f"deg n={n}")
        adj = build_adj(rep)
        if adj_reconstruct(adj) != rep or any(adj_decode_endpoint(adj, i) != e for i, e in enumerate(rep.e, 1)):
            bad.append(f"adj n={n}")
    assert verdict(10, not bad, "all round trips exact" if not bad else f"failed: {bad}")


@pytest.fixture(autouse=True, scope="module")
def _release_codes():
    yield
    _codes.clear()
