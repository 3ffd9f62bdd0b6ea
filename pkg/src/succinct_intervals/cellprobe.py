"""Adjacency in log2(n!) + O(1) data bits via one spill chain.

The interval lengths ``x_i = e_i - i`` live in universes ``n, n-1, .., 1``
and are stored as a single spill chain.  The chain's plan (grouping, link
parameters, bit offsets) is a function of ``n`` and is kept in memory as
materialized tables whose size is reported apart from the data bits; it is
never serialized.  ``recompute=True`` answers a query by re-deriving the
needed part of the plan on the fly instead of reading those tables.
"""

from __future__ import annotations

import functools
from functools import cached_property

from .core import UniversalRep, _check_vertex
from .errors import FormatError
from .formats import pack_header, unpack_header
from .spill import (
    CLOSE_LIMIT,
    GROUP_TARGET,
    BitWriter,
    GroupPlan,
    SpillCode,
    closing_params,
    load_chain,
    serialized_size,
    spill_decode_x,
    spill_decode_y,
    spill_params,
    write_chain,
)

MAGIC = b"CPA1"


@functools.lru_cache(maxsize=16)
def cellprobe_plan(n: int) -> GroupPlan:
    return GroupPlan(range(n, 0, -1))


class CellProbeCode:
    def __init__(self, n: int, store):
        self.n = n
        self.store = store
        self.data = SpillCode(cellprobe_plan(n), store, 0)

    @property
    def data_bits(self) -> int:
        return self.data.bits

    measured_bits = data_bits

    @cached_property
    def meta_bits(self) -> int:
        return self.data.plan.meta_bits()

    def length_probed(self, i: int, recompute: bool = False) -> tuple[int, int]:
        """``x_i = e_i - i`` and the number of data words read."""
        _check_vertex(i, self.n)
        if recompute:
            return _length_without_tables(self.store, self.n, i)
        return self.data.access_probed(i - 1)

    def adj_probed(self, i: int, j: int, recompute: bool = False) -> tuple[bool, int]:
        _check_vertex(j, self.n)
        a, b = (i, j) if i <= j else (j, i)
        x, words = self.length_probed(a, recompute)
        return a + x >= b, words

    def adj(self, i: int, j: int, recompute: bool = False) -> bool:
        return self.adj_probed(i, j, recompute)[0]

    def endpoint(self, i: int) -> int:
        return i + self.length_probed(i)[0]

    def to_bytes(self) -> bytes:
        return pack_header(MAGIC, self.n) + self.data.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CellProbeCode":
        n, pos = unpack_header(data, MAGIC)
        plan = cellprobe_plan(n)
        if len(data) != pos + serialized_size(plan):
            raise FormatError(f"CPA1 file should be {pos + serialized_size(plan)} bytes, got {len(data)}")
        writer = BitWriter()
        load_chain(writer, data[pos:], plan)
        return cls(n, writer.finish())


def _length_without_tables(store, n: int, i: int) -> tuple[int, int]:
    """Walk the plan from the start, keeping only O(1) state, until the
    group holding element ``i`` (1-based) and its successor are known."""
    target = GROUP_TARGET
    offset = 0
    spill = 1
    cur = None  # (start, end, params, offset) of the group holding i
    vertex = 1
    while vertex <= n:
        prod = 1
        g_start = vertex
        while vertex <= n and prod * (n - vertex + 1) <= target:
            prod *= n - vertex + 1
            vertex += 1
        last = vertex > n
        if last and (prod * spill - 1).bit_length() <= CLOSE_LIMIT:
            p = closing_params(prod, spill)
        else:
            p = spill_params(prod, spill)
        if cur is not None:
            span, words = store.read(cur[3], cur[2].M + p.M)
            m = span & ((1 << cur[2].M) - 1)
            value = spill_decode_x(m, spill_decode_y(span >> cur[2].M, p), cur[2])
            return _digit(n, cur[0], cur[1], i, value), words
        if g_start <= i < vertex:
            cur = (g_start, vertex, p, offset)
            if last:
                tail = (p.S - 1).bit_length()
                span, words = store.read(offset, p.M + tail)
                m = span & ((1 << p.M) - 1)
                value = spill_decode_x(m, span >> p.M, p)
                return _digit(n, g_start, vertex, i, value), words
        offset += p.M
        spill = p.S
    raise AssertionError("unreachable: vertex not covered by plan")


def _digit(n: int, g_start: int, g_end: int, i: int, value: int) -> int:
    place = 1
    for v in range(i + 1, g_end):
        place *= n - v + 1
    return (value // place) % (n - i + 1)


def build_cellprobe(rep: UniversalRep) -> CellProbeCode:
    n = rep.n
    writer = BitWriter()
    write_chain(writer, [e - i for i, e in enumerate(rep.e, start=1)], cellprobe_plan(n))
    return CellProbeCode(n, writer.finish())


def cp_adj_query(code: CellProbeCode, i: int, j: int) -> bool:
    return code.adj(i, j)


def cp_reconstruct(code: CellProbeCode) -> UniversalRep:
    return UniversalRep([i + x for i, x in enumerate(code.data.decode_all(), start=1)])
