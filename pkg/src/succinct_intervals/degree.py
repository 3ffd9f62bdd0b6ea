"""Degree structure with n^(1/3) blocks.

For a vertex ``i`` in block ``k`` the intervals meeting it split into
those spanning the whole block from the left (the same count for every
vertex of the block) and the rest.  The spanning count is stored once
per block; the rest, ``loc_i``, is below ``n - (k-1)*B + b_k`` where
``b_k`` is the number of right endpoints landing in block ``k``, and is
kept in a per-block fixed-alphabet spill code.
"""

from __future__ import annotations

from functools import cached_property

from .core import UniversalRep, _check_vertex, oracle_degrees, reconstruct_from_degrees
from .errors import FormatError, InvariantError
from .formats import pack_header, unpack_header
from .spill import BitWriter, PlainArray, SpillCode, fixed_plan, load_chain, serialized_size, write_chain, write_plain

MAGIC = b"DEG1"
SMALL_N = 64


def ceil_icbrt(n: int) -> int:
    r = round(n ** (1 / 3))
    while r ** 3 < n:
        r += 1
    while r > 1 and (r - 1) ** 3 >= n:
        r -= 1
    return r


class DegLayout:
    """Block geometry; code plans depend on ``bcount`` as well as ``n``."""

    def __init__(self, n: int, bcount=None):
        self.n = n
        self.small = n < SMALL_N
        self.B = ceil_icbrt(n)
        self.K = -(-n // self.B)
        self.count_width = n.bit_length()
        if self.small:
            self.width = (n - 1).bit_length()
            self.plans = []
            return
        self.plans = [
            fixed_plan(self.alphabet(k, bcount[k - 1]), self.block_len(k)) for k in range(1, self.K + 1)
        ]
        offsets = [0]
        for p in self.plans:
            offsets.append(offsets[-1] + p.total_bits)
        self.code_offsets = offsets
        self.offset_width = offsets[-1].bit_length()

    def alphabet(self, k: int, b_k: int) -> int:
        return self.n - (k - 1) * self.B + b_k

    def block_len(self, k: int) -> int:
        return min(self.B, self.n - (k - 1) * self.B)

    def meta_bits(self) -> int:
        return sum(p.meta_bits() for p in self.plans)


class DegCode:
    """Succinct degree oracle.

    Store layout: ``span``, ``bcount`` and the block code offsets as plain
    arrays, then the per-block local-degree codes.
    """

    def __init__(self, layout: DegLayout, store, regions):
        self.layout = layout
        self.store = store
        if layout.small:
            self._plain = PlainArray(store, 0, layout.width, layout.n)
            return
        self._plain = None
        K, cw = layout.K, layout.count_width
        span_base, bcount_base, off_base, codes_base = regions
        self.span = PlainArray(store, span_base, cw, K)
        self.bcount = PlainArray(store, bcount_base, cw, K)
        self.offsets = PlainArray(store, off_base, layout.offset_width, K)
        self._codes_base = codes_base
        self._codes = [
            SpillCode(p, store, codes_base + layout.code_offsets[k]) for k, p in enumerate(layout.plans)
        ]

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def block_size(self) -> int:
        return self.layout.B

    @property
    def measured_bits(self) -> int:
        return self.store.nbits

    @cached_property
    def meta_bits(self) -> int:
        return self.layout.meta_bits()

    def degree_probed(self, i: int) -> tuple[int, int]:
        _check_vertex(i, self.n)
        if self._plain is not None:
            return self._plain.get_probed(i - 1)
        k, slot = divmod(i - 1, self.layout.B)
        span, w1 = self.span.get_probed(k)
        b_k, w2 = self.bcount.get_probed(k)
        off, w3 = self.offsets.get_probed(k)
        plan = fixed_plan(self.layout.alphabet(k + 1, b_k), self.layout.block_len(k + 1))
        code = SpillCode(plan, self.store, self._codes_base + off)
        loc, w4 = code.access_probed(slot)
        return span + loc, w1 + w2 + w3 + w4

    def degree(self, i: int) -> int:
        return self.degree_probed(i)[0]

    def to_bytes(self) -> bytes:
        out = [pack_header(MAGIC, self.n)]
        if self._plain is not None:
            out.append(self._plain.to_bytes())
        else:
            out.append(self.span.to_bytes())
            out.append(self.bcount.to_bytes())
            out.extend(code.to_bytes() for code in self._codes)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DegCode":
        n, pos = unpack_header(data, MAGIC)
        probe = DegLayout(n, None) if n < SMALL_N else None
        if probe is not None:
            size = (n * probe.width + 7) // 8
            if len(data) != pos + size:
                raise FormatError(f"DEG1 payload should be {size} bytes")
            writer = BitWriter()
            writer.write_bytes(data[pos:], n * probe.width)
            return cls(probe, writer.finish(), None)
        B = ceil_icbrt(n)
        K = -(-n // B)
        cw = n.bit_length()
        arr_bytes = (K * cw + 7) // 8
        if len(data) < pos + 2 * arr_bytes:
            raise FormatError("DEG1 file truncated in count arrays")
        span = _unpack_plain(data[pos:pos + arr_bytes], cw, K)
        bcount = _unpack_plain(data[pos + arr_bytes:pos + 2 * arr_bytes], cw, K)
        pos += 2 * arr_bytes
        if sum(bcount) != n:
            raise FormatError(f"bcount sums to {sum(bcount)}, expected {n}")
        layout = DegLayout(n, bcount)
        expected = pos + sum(serialized_size(p) for p in layout.plans)
        if len(data) != expected:
            raise FormatError(f"DEG1 file should be {expected} bytes, got {len(data)}")
        writer = BitWriter()
        regions = _write_arrays(writer, layout, span, bcount)
        for p in layout.plans:
            pos += load_chain(writer, data[pos:], p)
        return cls(layout, writer.finish(), regions)


def _unpack_plain(raw: bytes, width: int, count: int) -> list[int]:
    value = int.from_bytes(raw, "little")
    mask = (1 << width) - 1
    return [(value >> (k * width)) & mask for k in range(count)]


def _write_arrays(writer: BitWriter, layout: DegLayout, span, bcount):
    span_base = write_plain(writer, span, layout.count_width)
    bcount_base = write_plain(writer, bcount, layout.count_width)
    off_base = write_plain(writer, layout.code_offsets[:-1], layout.offset_width)
    return span_base, bcount_base, off_base, writer.bits


def block_counts(rep: UniversalRep, B: int) -> tuple[list[int], list[int]]:
    """Per-block spanning counts and right-endpoint counts."""
    n = rep.n
    K = -(-n // B)
    diff = [0] * (K + 2)
    bcount = [0] * K
    for j, ej in enumerate(rep.e, start=1):
        kj = (j - 1) // B + 1
        ke = (ej - 1) // B + 1
        bcount[ke - 1] += 1
        if ke - kj >= 2:
            diff[kj + 1] += 1
            diff[ke] -= 1
    span = []
    run = 0
    for k in range(1, K + 1):
        run += diff[k]
        span.append(run)
    return span, bcount


def build_deg(rep: UniversalRep) -> DegCode:
    n = rep.n
    degrees = oracle_degrees(rep)
    writer = BitWriter()
    if n < SMALL_N:
        layout = DegLayout(n, None)
        write_plain(writer, degrees, layout.width)
        return DegCode(layout, writer.finish(), None)
    B = ceil_icbrt(n)
    span, bcount = block_counts(rep, B)
    layout = DegLayout(n, bcount)
    regions = _write_arrays(writer, layout, span, bcount)
    for k in range(1, layout.K + 1):
        lo = (k - 1) * B
        sigma = layout.alphabet(k, bcount[k - 1])
        locs = []
        for i in range(lo + 1, lo + layout.block_len(k) + 1):
            loc = degrees[i - 1] - span[k - 1]
            if not 0 <= loc < sigma:
                raise InvariantError(f"local degree {loc} of vertex {i} outside [0, {sigma})")
            locs.append(loc)
        write_chain(writer, locs, layout.plans[k - 1])
    return DegCode(layout, writer.finish(), regions)


def deg_query(code: DegCode, i: int) -> int:
    return code.degree(i)


def deg_reconstruct(code: DegCode) -> UniversalRep:
    return reconstruct_from_degrees(code.degree, code.n)
