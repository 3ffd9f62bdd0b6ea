"""Adjacency structure with sqrt(n) blocks of (block, offset) pairs.

Vertices are cut into blocks of ``B = ceil(sqrt n)``.  A vertex in block
``k`` can only end in block ``k`` or later, so its right endpoint is
stored as ``r * B + o`` where ``r`` counts blocks past ``k`` and ``o`` is
the offset inside the landing block.  Each block's pairs share the
alphabet ``(K - k + 1) * B`` and are stored in one fixed-alphabet spill
code; all layout numbers are functions of ``n`` alone.
"""

from __future__ import annotations

from functools import cached_property

from .core import UniversalRep, _check_vertex
from .errors import FormatError
from .formats import pack_header, unpack_header
from .spill import BitWriter, PlainArray, SpillCode, fixed_plan, load_chain, serialized_size, write_chain, write_plain

MAGIC = b"ADJ1"
SMALL_N = 16


class AdjLayout:
    """Block geometry and per-block code plans for a given ``n``."""

    def __init__(self, n: int):
        self.n = n
        self.small = n < SMALL_N
        self.B = _ceil_isqrt(n)
        self.K = -(-n // self.B)
        if self.small:
            self.plans = []
            self.bases = [0]
            self.width = (n - 1).bit_length()
        else:
            self.plans = [fixed_plan(self.alphabet(k), self.block_len(k)) for k in range(1, self.K + 1)]
            bases = [0]
            for p in self.plans:
                bases.append(bases[-1] + p.total_bits)
            self.bases = bases

    def alphabet(self, k: int) -> int:
        return (self.K - k + 1) * self.B

    def block_len(self, k: int) -> int:
        return min(self.B, self.n - (k - 1) * self.B)

    @property
    def total_bits(self) -> int:
        return self.n * self.width if self.small else self.bases[-1]

    def meta_bits(self) -> int:
        return sum(p.meta_bits() for p in self.plans)


def _ceil_isqrt(n: int) -> int:
    from math import isqrt

    r = isqrt(n)
    return r if r * r >= n else r + 1


class AdjCode:
    """Succinct adjacency oracle over a universal representation."""

    def __init__(self, layout: AdjLayout, store):
        self.layout = layout
        self.store = store
        if layout.small:
            self._plain = PlainArray(store, 0, layout.width, layout.n)
            self._codes = []
        else:
            self._plain = None
            self._codes = [SpillCode(p, store, b) for p, b in zip(layout.plans, layout.bases)]

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def block_size(self) -> int:
        return self.layout.B

    @property
    def measured_bits(self) -> int:
        return self.layout.total_bits

    @cached_property
    def meta_bits(self) -> int:
        return self.layout.meta_bits()

    def endpoint_probed(self, i: int) -> tuple[int, int]:
        _check_vertex(i, self.n)
        if self._plain is not None:
            v, words = self._plain.get_probed(i - 1)
            return v + 1, words
        B = self.layout.B
        k, slot = divmod(i - 1, B)
        v, words = self._codes[k].access_probed(slot)
        r, o = divmod(v, B)
        return (k + r) * B + o + 1, words

    def endpoint(self, i: int) -> int:
        return self.endpoint_probed(i)[0]

    def adj_probed(self, i: int, j: int) -> tuple[bool, int]:
        _check_vertex(j, self.n)
        a, b = (i, j) if i <= j else (j, i)
        e, words = self.endpoint_probed(a)
        return e >= b, words

    def adj(self, i: int, j: int) -> bool:
        return self.adj_probed(i, j)[0]

    def to_bytes(self) -> bytes:
        out = [pack_header(MAGIC, self.n)]
        if self._plain is not None:
            out.append(self._plain.to_bytes())
        else:
            out.extend(code.to_bytes() for code in self._codes)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "AdjCode":
        n, pos = unpack_header(data, MAGIC)
        layout = AdjLayout(n)
        writer = BitWriter()
        if layout.small:
            size = (layout.total_bits + 7) // 8
            if len(data) != pos + size:
                raise FormatError(f"ADJ1 payload should be {size} bytes")
            writer.write_bytes(data[pos:], layout.total_bits)
        else:
            expected = pos + sum(serialized_size(p) for p in layout.plans)
            if len(data) != expected:
                raise FormatError(f"ADJ1 file should be {expected} bytes, got {len(data)}")
            for p in layout.plans:
                pos += load_chain(writer, data[pos:], p)
        code = cls(layout, writer.finish())
        code._check_ranges()
        return code

    def _check_ranges(self) -> None:
        for i in range(1, self.n + 1):
            e = self.endpoint(i)
            if not i <= e <= self.n:
                raise FormatError(f"stored endpoint of vertex {i} is {e}, outside [{i}, {self.n}]")


def build_adj(rep: UniversalRep) -> AdjCode:
    layout = AdjLayout(rep.n)
    writer = BitWriter()
    if layout.small:
        write_plain(writer, (v - 1 for v in rep.e), layout.width)
    else:
        B, e = layout.B, rep.e
        for k in range(1, layout.K + 1):
            lo = (k - 1) * B
            pairs = []
            for i in range(lo + 1, lo + layout.block_len(k) + 1):
                landing, o = divmod(e[i - 1] - 1, B)
                pairs.append((landing - (k - 1)) * B + o)
            write_chain(writer, pairs, layout.plans[k - 1])
    return AdjCode(layout, writer.finish())


def adj_query(code: AdjCode, i: int, j: int) -> bool:
    return code.adj(i, j)


def adj_decode_endpoint(code: AdjCode, i: int) -> int:
    return code.endpoint(i)


def adj_reconstruct(code: AdjCode) -> UniversalRep:
    return UniversalRep([code.endpoint(i) for i in range(1, code.n + 1)])
