"""On-disk formats for representations and interval lists.

UIR text::

    UIR 1
    <n>
    <e_1> <e_2> ... <e_n>

UIR binary: magic ``UIR1``, n as u64 LE, then n u64 LE endpoints.
"""

from __future__ import annotations

import struct

from .core import UniversalRep
from .errors import FormatError

UIR_MAGIC = b"UIR1"


def dumps_uir(rep: UniversalRep) -> str:
    return f"UIR 1\n{rep.n}\n{' '.join(map(str, rep.e))}\n"


def loads_uir(text: str) -> UniversalRep:
    lines = text.split("\n")
    if not lines or lines[0].strip() != "UIR 1":
        raise FormatError("missing 'UIR 1' header")
    if len(lines) < 3:
        raise FormatError("UIR text needs three lines")
    try:
        n = int(lines[1])
        e = [int(tok) for tok in lines[2].split()]
    except ValueError as exc:
        raise FormatError(f"malformed UIR text: {exc}") from None
    if len(e) != n:
        raise FormatError(f"header says n={n} but {len(e)} endpoints follow")
    return UniversalRep(e)


def dumps_uir_binary(rep: UniversalRep) -> bytes:
    return UIR_MAGIC + struct.pack(f"<Q{rep.n}Q", rep.n, *rep.e)


def loads_uir_binary(data: bytes) -> UniversalRep:
    if data[:4] != UIR_MAGIC:
        raise FormatError("missing UIR1 magic")
    if len(data) < 12:
        raise FormatError("truncated UIR binary header")
    (n,) = struct.unpack_from("<Q", data, 4)
    if len(data) != 12 + 8 * n:
        raise FormatError(f"expected {12 + 8 * n} bytes for n={n}, got {len(data)}")
    return UniversalRep(struct.unpack_from(f"<{n}Q", data, 12))


def read_uir(path) -> UniversalRep:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] == UIR_MAGIC:
        return loads_uir_binary(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError(f"{path}: neither UIR text nor UIR binary") from None
    return loads_uir(text)


def loads_intervals(text: str) -> list[tuple[float, float]]:
    """One interval per non-blank line: two numbers separated by whitespace."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two numbers, got {len(parts)}")
        try:
            a, b = (_number(p) for p in parts)
        except ValueError:
            raise FormatError(f"line {lineno}: not a number") from None
        out.append((a, b))
    return out


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def pack_header(magic: bytes, n: int) -> bytes:
    return magic + n.to_bytes(8, "little")


def unpack_header(data: bytes, magic: bytes) -> tuple[int, int]:
    """Check ``magic`` and return ``(n, offset of payload)``."""
    if data[:4] != magic:
        raise FormatError(f"expected magic {magic.decode()}, got {data[:4]!r}")
    if len(data) < 12:
        raise FormatError("truncated header")
    n = int.from_bytes(data[4:12], "little")
    if n < 1:
        raise FormatError("vertex count must be positive")
    return n, 12
