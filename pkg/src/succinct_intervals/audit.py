"""Space and probe measurements against the log2(n!) benchmark."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .adjacency import build_adj
from .cellprobe import build_cellprobe
from .core import sample_uniform
from .degree import build_deg

KINDS = ("adj", "deg", "cellprobe")
CSV_FIELDS = (
    "n",
    "kind",
    "measured_bits",
    "benchmark_bits",
    "redundancy",
    "normalized_redundancy",
    "probe_min",
    "probe_mean",
    "probe_max",
    "meta_bits",
)


def log_factorial_bits(n: int) -> float:
    """log2(n!) as a compensated sum of log2 k."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return math.fsum(math.log2(k) for k in range(2, n + 1))


def stirling_bits(n: int) -> float:
    return n * math.log2(n) - n * math.log2(math.e) + 0.5 * math.log2(2 * math.pi * n)


def normalizer(kind: str, n: int) -> float:
    if kind == "adj":
        return math.sqrt(n) * math.log2(n) if n > 1 else 1.0
    if kind == "deg":
        return n ** (2 / 3) * math.log2(n) if n > 1 else 1.0
    if kind == "cellprobe":
        return 1.0
    raise ValueError(f"unknown structure kind {kind!r}")


@dataclass(frozen=True)
class AuditReport:
    n: int
    kind: str
    measured_bits: int
    benchmark_bits: float
    redundancy: float
    normalized_redundancy: float
    probe_min: int
    probe_mean: float
    probe_max: int
    meta_bits: int

    def as_row(self) -> dict:
        return asdict(self)


def build(kind: str, rep):
    if kind == "adj":
        return build_adj(rep)
    if kind == "deg":
        return build_deg(rep)
    if kind == "cellprobe":
        return build_cellprobe(rep)
    raise ValueError(f"unknown structure kind {kind!r}")


def probe_counts(kind: str, code, n: int, samples: int, seed=0) -> np.ndarray:
    """Words read by each of ``samples`` random queries."""
    rng = np.random.default_rng(seed)
    if samples <= 0:
        return np.zeros(0, dtype=np.int64)
    a = rng.integers(1, n + 1, size=samples).tolist()
    if kind == "deg":
        return np.fromiter((code.degree_probed(i)[1] for i in a), dtype=np.int64, count=samples)
    b = rng.integers(1, n + 1, size=samples).tolist()
    return np.fromiter((code.adj_probed(i, j)[1] for i, j in zip(a, b)), dtype=np.int64, count=samples)


def report_for(kind: str, code, n: int, query_samples: int = 1000, seed=0) -> AuditReport:
    measured = code.measured_bits
    bench = log_factorial_bits(n)
    r = measured - bench
    assert r >= -1, f"{kind} at n={n} beats log2(n!) by {-r:.3f} bits"
    probes = probe_counts(kind, code, n, query_samples, seed)
    has = probes.size > 0
    return AuditReport(
        n=n,
        kind=kind,
        measured_bits=measured,
        benchmark_bits=bench,
        redundancy=r,
        normalized_redundancy=r / normalizer(kind, n),
        probe_min=int(probes.min()) if has else 0,
        probe_mean=float(probes.mean()) if has else 0.0,
        probe_max=int(probes.max()) if has else 0,
        meta_bits=code.meta_bits,
    )


def redundancy_report(kind: str, n: int, seed=0, query_samples: int = 1000) -> AuditReport:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    code = build(kind, sample_uniform(n, seed))
    return report_for(kind, code, n, query_samples, seed)


def redundancy_curve(kind: str, n_list, seed=0, query_samples: int = 1000) -> list[AuditReport]:
    n_list = list(n_list)
    if not n_list:
        raise ValueError("n_list is empty")
    return [redundancy_report(kind, n, seed, query_samples) for n in n_list]


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        w.writerow(rep.as_row())
    return buf.getvalue()
