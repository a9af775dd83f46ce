"""graph6 encoding and decoding for undirected simple graphs.

Only the plain graph6 format is handled (no sparse6/digraph6).  Files may start
with the optional ``>>graph6<<`` header, which is skipped.
"""

from __future__ import annotations

from typing import IO, Iterable, Iterator

from .errors import Graph6Error
from .graph import Graph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise Graph6Error(f"order {n} too large for graph6")


def encode(g: Graph) -> str:
    n = g.n
    out = [_encode_n(n)]
    bits = []
    adj = g.adj
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            bits.append((row >> i) & 1)
    while len(bits) % 6:
        bits.append(0)
    for s in range(0, len(bits), 6):
        v = 0
        for b in bits[s:s + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def decode(text: str | bytes, *, line: int | None = None) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string", line)
    data = [ord(c) - 63 for c in s]
    if any(v < 0 or v > 63 for v in data):
        raise Graph6Error(f"invalid graph6 character in {s!r}", line)
    if data[0] == 63:
        if len(data) < 4 or data[1] == 63:
            raise Graph6Error("unsupported or truncated graph6 size field", line)
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    if len(body) != need:
        raise Graph6Error(f"expected {need} data bytes for n={n}, got {len(body)}", line)
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, tuple(adj))


def read_lines(lines: Iterable[str | bytes]) -> Iterator[Graph]:
    """Decode one graph per non-blank line; errors carry the 1-based line number."""
    for lineno, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("ascii", errors="replace")
        s = raw.strip()
        if not s:
            continue
        if s == HEADER:
            continue
        yield decode(s, line=lineno)


def read_file(fh: IO[str]) -> Iterator[Graph]:
    return read_lines(fh)
