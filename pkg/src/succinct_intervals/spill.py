"""Spill-based mixed-radix storage for integer sequences.

A sequence whose i-th value lives in ``[0, U_i)`` is cut into consecutive
groups, each packed into one integer by plain mixed-radix arithmetic.
Group values are then threaded through a chain of two-coordinate maps
``(x, y) -> (m, s)``: ``x`` is the group value, ``y`` is the spill left
over by the previous link, ``m`` is written to memory in exactly ``M``
bits and ``s`` becomes the next link's spill.  Because ``y`` can be
recovered from ``m`` alone, reading one value needs only the memory block
of its own group plus the next one (or the tail), and the rounding loss
of every link is ``O(1/sqrt(X))`` bits instead of up to one bit.

The group plan (group boundaries, the per-link parameters and the bit
offsets) depends only on the universe sequence, never on the values, so
it is recomputed rather than stored.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CorruptCode

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1
DOUBLE_WORD = 1 << (2 * WORD_BITS)

# Largest group universe.  Spills stay below ~2^43, so X*Y fits a double
# word, one memory block is at most ~90 bits and a block plus its
# successor spans at most four words.
GROUP_TARGET = 1 << 84

# A final group whose (spill, value) pair fits in this many bits is written
# as one exact number instead of being split, saving the tail rounding.
CLOSE_LIMIT = 96


def ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


@dataclass(frozen=True)
class SpillParams:
    """Parameters of one ``(x, y) -> (m, s)`` link.

    ``x`` ranges over ``[0, X)``, ``y`` over ``[0, Y)``; ``m`` takes ``M``
    bits, ``D`` is the number of ``m`` values per ``y`` and ``s`` ranges
    over ``[0, S)``.
    """

    X: int
    Y: int
    M: int
    D: int
    S: int

    @property
    def redundancy(self) -> float:
        return self.M + math.log2(self.S) - math.log2(self.X) - math.log2(self.Y)


def spill_params(X: int, Y: int) -> SpillParams:
    """Choose ``M``, ``D`` and ``S`` for universes ``X`` and ``Y``.

    Starts from the smallest ``M`` with ``floor(2^M / Y) >= ceil(sqrt X)``
    and keeps whichever of ``M``, ``M+1``, ``M+2`` minimises ``2^M * S``.
    """
    if X < 1 or Y < 1:
        raise ValueError(f"universes must be positive, got X={X}, Y={Y}")
    if X * Y > DOUBLE_WORD:
        raise OverflowError(f"X*Y = {X * Y} exceeds double-word range")
    c = ceil_sqrt(X)
    m = max(0, (Y * c - 1).bit_length())
    while (1 << m) // Y < c:
        m += 1
    best = None
    for cand in (m, m + 1, m + 2):
        D = (1 << cand) // Y
        S = -(-X // D)
        cost = S << cand
        if best is None or cost < best[0]:
            best = (cost, cand, D, S)
    _, M, D, S = best
    return SpillParams(X, Y, M, D, S)


def closing_params(X: int, Y: int) -> SpillParams:
    """Parameters that absorb all of ``x`` into ``m`` (``S = 1``)."""
    if X < 1 or Y < 1:
        raise ValueError(f"universes must be positive, got X={X}, Y={Y}")
    return SpillParams(X, Y, (X * Y - 1).bit_length(), X, 1)


def spill_encode(x: int, y: int, p: SpillParams) -> tuple[int, int]:
    if not 0 <= x < p.X:
        raise ValueError(f"x={x} outside [0, {p.X})")
    if not 0 <= y < p.Y:
        raise ValueError(f"y={y} outside [0, {p.Y})")
    a, b = divmod(x, p.S)
    return y * p.D + a, b


def spill_decode_y(m: int, p: SpillParams) -> int:
    y = m // p.D
    if y >= p.Y:
        raise CorruptCode(f"memory block {m} decodes to y={y} >= Y={p.Y}")
    return y


def spill_decode_x(m: int, s: int, p: SpillParams) -> int:
    if not 0 <= s < p.S:
        raise CorruptCode(f"spill {s} outside [0, {p.S})")
    x = (m % p.D) * p.S + s
    if x >= p.X:
        raise CorruptCode(f"memory block {m} decodes to x={x} >= X={p.X}")
    return x


# -- bit storage -------------------------------------------------------------


class BitWriter:
    """Appends fixed-width fields, little-endian, into 64-bit words."""

    def __init__(self):
        self.words: list[int] = []
        self._acc = 0
        self._accbits = 0
        self.bits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        if value < 0 or value >> nbits:
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        if nbits > 2 * WORD_BITS:
            raw = value.to_bytes((nbits + 7) // 8, "little")
            self.write_bytes(raw, nbits)
            return
        self._acc |= value << self._accbits
        self._accbits += nbits
        self.bits += nbits
        while self._accbits >= WORD_BITS:
            self.words.append(self._acc & WORD_MASK)
            self._acc >>= WORD_BITS
            self._accbits -= WORD_BITS

    def write_bytes(self, raw: bytes, nbits: int) -> None:
        """Write the low ``nbits`` bits of a little-endian byte string."""
        if len(raw) * 8 < nbits:
            raise ValueError("byte string shorter than requested bit count")
        pos = 0
        while nbits > 0:
            take = min(WORD_BITS, nbits)
            chunk = int.from_bytes(raw[pos:pos + 8], "little") & ((1 << take) - 1)
            self.write(chunk, take)
            pos += 8
            nbits -= take

    def finish(self) -> "WordArray":
        words = list(self.words)
        if self._accbits:
            words.append(self._acc)
        return WordArray(words, self.bits)


class WordArray:
    """Read-only bit storage addressed by bit offset.

    ``read`` also reports how many 64-bit words the access touched; that
    count is the probe cost used throughout the package.
    """

    __slots__ = ("words", "nbits")

    def __init__(self, words: list[int], nbits: int):
        self.words = words
        self.nbits = nbits

    def read(self, offset: int, nbits: int) -> tuple[int, int]:
        if nbits == 0:
            return 0, 0
        first = offset >> 6
        last = (offset + nbits - 1) >> 6
        words = self.words
        acc = words[last]
        for w in range(last - 1, first - 1, -1):
            acc = (acc << WORD_BITS) | words[w]
        return (acc >> (offset & 63)) & ((1 << nbits) - 1), last - first + 1

    def read_bytes(self, offset: int, nbits: int) -> bytes:
        """Copy a bit range out as a byte-padded little-endian string."""
        nbytes = (nbits + 7) // 8
        if nbits == 0:
            return b""
        first = offset >> 6
        last = (offset + nbits - 1) >> 6
        raw = b"".join(w.to_bytes(8, "little") for w in self.words[first:last + 1])
        value = int.from_bytes(raw, "little") >> (offset & 63)
        value &= (1 << nbits) - 1
        return value.to_bytes(nbytes, "little")


# -- group plans ---------------------------------------------------------------


class GroupPlan:
    """Deterministic layout of a spill chain over a universe sequence.

    Attributes are lists indexed by group: ``starts`` (first element,
    with a trailing sentinel), ``universes`` (product universe of the
    group), ``links`` (``SpillParams`` of the link that writes the group)
    and ``offsets`` (bit offset of each memory block relative to the code
    base, with the body length as trailing sentinel).
    """

    def __init__(self, element_universes: Sequence[int], target: int = GROUP_TARGET):
        self.element_universes = list(element_universes)
        self.target = target
        starts, universes = _greedy_groups(self.element_universes, target)
        self.starts = starts
        self.universes = universes
        self._group_of = None
        self._build_links()

    @property
    def n_elements(self) -> int:
        return len(self.element_universes)

    @property
    def n_groups(self) -> int:
        return len(self.universes)

    @property
    def body_bits(self) -> int:
        return self.offsets[-1]

    @property
    def total_bits(self) -> int:
        return self.offsets[-1] + self.tail_bits

    def _build_links(self) -> None:
        links = []
        offsets = [0]
        spill = 1
        last = len(self.universes) - 1
        self.tail_bits = 0
        for g, X in enumerate(self.universes):
            if g == last and ((X * spill - 1).bit_length() <= CLOSE_LIMIT):
                p = closing_params(X, spill)
            else:
                p = spill_params(X, spill)
            links.append(p)
            offsets.append(offsets[-1] + p.M)
            spill = p.S
        if links:
            self.tail_bits = (links[-1].S - 1).bit_length()
        self.links = links
        self.offsets = offsets

    def locate(self, i: int) -> tuple[int, int]:
        """Return ``(group, slot)`` of element ``i``."""
        if self._group_of is None:
            group_of = [0] * self.n_elements
            for g in range(self.n_groups):
                for k in range(self.starts[g], self.starts[g + 1]):
                    group_of[k] = g
            self._group_of = group_of
        g = self._group_of[i]
        return g, i - self.starts[g]

    def universe_at(self, i: int) -> int:
        return self.element_universes[i]

    def radix_below(self, g: int, slot: int) -> tuple[int, int]:
        """Universe of ``slot`` in group ``g`` and the product of the
        universes after it (its place value)."""
        start, end = self.starts[g], self.starts[g + 1]
        us = self.element_universes
        place = 1
        for k in range(start + slot + 1, end):
            place *= us[k]
        return us[start + slot], place

    def meta_bits(self) -> int:
        """Size of the materialized plan tables, were they stored."""
        g = self.n_groups
        if g == 0:
            return 0
        width = lambda v: max(1, int(v).bit_length())  # noqa: E731
        bits = (g + 1) * width(self.n_elements)  # starts
        bits += (g + 1) * width(self.body_bits)  # offsets
        bits += g * width(max(p.D for p in self.links))
        bits += g * width(max(p.S for p in self.links))
        bits += self.n_elements * width(g)  # element -> group map
        return bits

    def meta_bytes(self) -> bytes:
        """Canonical dump of the plan tables (starts, offsets, D, S)."""
        out = bytearray()
        for table in (self.starts, self.offsets, [p.D for p in self.links], [p.S for p in self.links]):
            size = max(1, (max(table, default=0).bit_length() + 7) // 8)
            out += len(table).to_bytes(8, "little") + bytes([size])
            for v in table:
                out += int(v).to_bytes(size, "little")
        return bytes(out)

    def __eq__(self, other):
        return (
            isinstance(other, GroupPlan)
            and self.starts == other.starts
            and self.universes == other.universes
            and self.links == other.links
            and self.offsets == other.offsets
            and self.tail_bits == other.tail_bits
        )

    __hash__ = None


class FixedPlan(GroupPlan):
    """Group plan for ``count`` symbols over one alphabet ``[0, sigma)``.

    Groups hold ``per_group`` symbols each (the last may hold fewer), so
    locating a symbol is a single division.
    """

    def __init__(self, sigma: int, count: int, target: int = GROUP_TARGET):
        if sigma < 1:
            raise ValueError(f"alphabet size must be positive, got {sigma}")
        if sigma > target:
            raise ValueError(f"alphabet {sigma} exceeds group target")
        self.sigma = sigma
        self.count = count
        self.target = target
        if sigma == 1:
            k = max(count, 1)
        else:
            k, p = 1, sigma
            while p * sigma <= target:
                p *= sigma
                k += 1
        self.per_group = k
        n_groups = -(-count // k)
        self.starts = [min(g * k, count) for g in range(n_groups + 1)]
        self.universes = [
            sigma ** (self.starts[g + 1] - self.starts[g]) for g in range(n_groups)
        ]
        self._build_links()

    @property
    def n_elements(self) -> int:
        return self.count

    @property
    def element_universes(self) -> list[int]:
        return [self.sigma] * self.count

    def locate(self, i: int) -> tuple[int, int]:
        return divmod(i, self.per_group)

    def universe_at(self, i: int) -> int:
        return self.sigma

    def radix_below(self, g: int, slot: int) -> tuple[int, int]:
        size = self.starts[g + 1] - self.starts[g]
        return self.sigma, self.sigma ** (size - slot - 1)

    def meta_bits(self) -> int:
        g = self.n_groups
        if g == 0:
            return 0
        width = lambda v: max(1, int(v).bit_length())  # noqa: E731
        bits = (g + 1) * width(self.body_bits)
        bits += g * width(max(p.D for p in self.links))
        bits += g * width(max(p.S for p in self.links))
        return bits


def _greedy_groups(universes: Sequence[int], target: int) -> tuple[list[int], list[int]]:
    starts: list[int] = []
    products: list[int] = []
    prod = None
    for i, u in enumerate(universes):
        if u < 1:
            raise ValueError(f"universe at {i} must be positive, got {u}")
        if u > target:
            raise ValueError(f"universe {u} at {i} exceeds group target {target}")
        if prod is None or prod * u > target:
            if prod is not None:
                products.append(prod)
            starts.append(i)
            prod = u
        else:
            prod *= u
    if prod is not None:
        products.append(prod)
    starts.append(len(universes))
    return starts, products


def group_plan(universes: Sequence[int], target: int = GROUP_TARGET) -> GroupPlan:
    return GroupPlan(universes, target)


@functools.lru_cache(maxsize=8192)
def fixed_plan(sigma: int, count: int) -> FixedPlan:
    return FixedPlan(sigma, count)


# -- codes ---------------------------------------------------------------------


class SpillCode:
    """A spill chain living at bit offset ``base`` of a ``WordArray``."""

    __slots__ = ("plan", "store", "base")

    def __init__(self, plan: GroupPlan, store: WordArray, base: int = 0):
        self.plan = plan
        self.store = store
        self.base = base

    def __len__(self):
        return self.plan.n_elements

    @property
    def bits(self) -> int:
        return self.plan.total_bits

    def group_value(self, g: int) -> tuple[int, int]:
        """Decode group ``g``'s packed value; returns ``(value, words)``."""
        plan = self.plan
        links = plan.links
        start = self.base + plan.offsets[g]
        p = links[g]
        if g + 1 < len(links):
            nxt = links[g + 1]
            span, words = self.store.read(start, p.M + nxt.M)
            m = span & ((1 << p.M) - 1)
            s = spill_decode_y(span >> p.M, nxt)
        else:
            span, words = self.store.read(start, p.M + plan.tail_bits)
            m = span & ((1 << p.M) - 1)
            s = span >> p.M
        return spill_decode_x(m, s, p), words

    def access_probed(self, i: int) -> tuple[int, int]:
        if not 0 <= i < self.plan.n_elements:
            raise IndexError(f"element {i} out of range [0, {self.plan.n_elements})")
        plan = self.plan
        g, slot = plan.locate(i)
        value, words = self.group_value(g)
        radix, place = plan.radix_below(g, slot)
        return (value // place) % radix, words

    def access(self, i: int) -> int:
        return self.access_probed(i)[0]

    def __getitem__(self, i: int) -> int:
        return self.access(i)

    def decode_all(self) -> list[int]:
        out: list[int] = []
        plan = self.plan
        for g in range(plan.n_groups):
            value, _ = self.group_value(g)
            size = plan.starts[g + 1] - plan.starts[g]
            digits = []
            for slot in range(size - 1, -1, -1):
                radix, _ = plan.radix_below(g, slot)
                value, d = divmod(value, radix)
                digits.append(d)
            out.extend(reversed(digits))
        return out

    def to_bytes(self) -> bytes:
        """``n_groups`` (8 bytes LE), body bytes, tail bytes."""
        plan = self.plan
        head = plan.n_groups.to_bytes(8, "little")
        body = self.store.read_bytes(self.base, plan.body_bits)
        tail = self.store.read_bytes(self.base + plan.body_bits, plan.tail_bits)
        return head + body + tail


def serialized_size(plan: GroupPlan) -> int:
    return 8 + (plan.body_bits + 7) // 8 + (plan.tail_bits + 7) // 8


def load_chain(writer: BitWriter, raw: bytes, plan: GroupPlan) -> int:
    """Append a serialized chain to ``writer``; returns bytes consumed."""
    from .errors import FormatError

    size = serialized_size(plan)
    if len(raw) < size:
        raise FormatError("truncated spill code")
    n_groups = int.from_bytes(raw[:8], "little")
    if n_groups != plan.n_groups:
        raise FormatError(f"group count {n_groups} does not match plan ({plan.n_groups})")
    body_len = (plan.body_bits + 7) // 8
    writer.write_bytes(raw[8:8 + body_len], plan.body_bits)
    writer.write_bytes(raw[8 + body_len:size], plan.tail_bits)
    return size


def write_chain(writer: BitWriter, values: Sequence[int], plan: GroupPlan) -> int:
    """Encode ``values`` under ``plan`` into ``writer``; returns base offset."""
    if len(values) != plan.n_elements:
        raise ValueError(f"got {len(values)} values for a plan of {plan.n_elements}")
    base = writer.bits
    spill = 0
    for g in range(plan.n_groups):
        start, end = plan.starts[g], plan.starts[g + 1]
        y = 0
        for k in range(start, end):
            radix = plan.universe_at(k)
            v = values[k]
            if not 0 <= v < radix:
                raise ValueError(f"value {v} at {k} outside [0, {radix})")
            y = y * radix + v
        p = plan.links[g]
        m, spill = spill_encode(y, spill, p)
        writer.write(m, p.M)
    if plan.n_groups:
        writer.write(spill, plan.tail_bits)
    return base


def encode_chain(values: Sequence[int], plan: GroupPlan) -> SpillCode:
    writer = BitWriter()
    write_chain(writer, values, plan)
    return SpillCode(plan, writer.finish(), 0)


def access_chain(code: SpillCode, i: int) -> int:
    return code.access(i)


def encode_fixed(values: Sequence[int], sigma: int) -> SpillCode:
    return encode_chain(values, fixed_plan(sigma, len(values)))


def access_fixed(code: SpillCode, i: int) -> int:
    return code.access(i)


# -- plain fixed-width arrays --------------------------------------------------


class PlainArray:
    """``count`` entries of ``width`` bits each at ``base`` in a store."""

    __slots__ = ("store", "base", "width", "count")

    def __init__(self, store: WordArray, base: int, width: int, count: int):
        self.store = store
        self.base = base
        self.width = width
        self.count = count

    @property
    def bits(self) -> int:
        return self.width * self.count

    def get_probed(self, i: int) -> tuple[int, int]:
        return self.store.read(self.base + i * self.width, self.width)

    def __getitem__(self, i: int) -> int:
        return self.get_probed(i)[0]

    def __len__(self):
        return self.count

    def to_bytes(self) -> bytes:
        return self.store.read_bytes(self.base, self.bits)


def write_plain(writer: BitWriter, values: Iterable[int], width: int) -> int:
    base = writer.bits
    for v in values:
        writer.write(v, width)
    return base
