"""graph6 encoding and decoding (header-less, n <= 64)."""

from __future__ import annotations

from .graph import MAX_VERTICES, Graph, GraphError

_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))


def encode(g: Graph) -> str:
    """Standard graph6 string of the labelled graph ``g``."""
    n = g.n
    out = [_encode_n(n)]
    acc = 0
    nbits = 0
    rows = g.rows
    for j in range(1, n):
        rj = rows[j]
        for i in range(j):
            acc = (acc << 1) | (rj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def decode(text: str) -> Graph:
    """Parse a graph6 string; an optional ``>>graph6<<`` header is ignored."""
    s = text.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER):]
    if not s:
        raise GraphError("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(not 0 <= c <= 63 for c in codes):
        raise GraphError(f"invalid graph6 character in {text!r}")
    if codes[0] == 63:
        if len(codes) >= 2 and codes[1] == 63:
            raise GraphError("graph6 with n >= 258048 is not supported")
        if len(codes) < 4:
            raise GraphError("truncated graph6 size field")
        n = (codes[1] << 12) | (codes[2] << 6) | codes[3]
        body = codes[4:]
    else:
        n = codes[0]
        body = codes[1:]
    if n > MAX_VERTICES:
        raise GraphError(f"graph has {n} vertices; at most {MAX_VERTICES} supported")
    need = n * (n - 1) // 2
    if len(body) != (need + 5) // 6:
        raise GraphError(f"graph6 body length {len(body)} does not match n={n}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if need % 6 and body[-1] & ((1 << (6 - need % 6)) - 1):
        raise GraphError("nonzero padding bits in graph6 string")
    return Graph._trusted(n, tuple(rows))
