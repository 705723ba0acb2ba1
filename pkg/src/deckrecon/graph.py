"""Simple undirected graphs on at most 64 vertices, stored as adjacency bit rows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64


class GraphError(ValueError):
    """Raised for malformed graph input."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, slots=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``rows[v]`` is the bitmask of neighbours of ``v``.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {v} references a vertex >= n")
            if row >> v & 1:
                raise GraphError(f"self-loop at {v}")
            for u in bits(row):
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency {v}-{u}")

    # construction ---------------------------------------------------------

    @classmethod
    def _trusted(cls, n: int, rows: tuple[int, ...]) -> "Graph":
        # skips validation; callers guarantee a symmetric loop-free row tuple
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", rows)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    # queries -----------------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1))]

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for u in bits(self.rows[v]):
                i = index.get(u)
                if i is not None:
                    r |= 1 << i
            rows.append(r)
        return Graph._trusted(len(vertices), tuple(rows))

    def induced_mask(self, mask: int) -> "Graph":
        return self.induced(list(bits(mask)))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``perm[i]`` renamed to ``i``."""
        return self.induced(perm)

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        rows = list(self.rows) + [r << shift for r in other.rows]
        return Graph._trusted(self.n + other.n, tuple(rows))

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def add_vertex(self, nbr_mask: int) -> "Graph":
        """Append vertex ``n`` adjacent to the vertices in ``nbr_mask``."""
        v = self.n
        rows = [r | ((nbr_mask >> u & 1) << v) for u, r in enumerate(self.rows)]
        rows.append(nbr_mask)
        return Graph._trusted(v + 1, tuple(rows))

    # traversal ---------------------------------------------------------------

    def component_masks(self, within: int | None = None) -> list[int]:
        """Vertex masks of connected components, ordered by least vertex."""
        rest = self.vertex_mask if within is None else within
        comps = []
        while rest:
            frontier = rest & -rest
            comp = 0
            while frontier:
                comp |= frontier
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.rows[v]
                frontier = nxt & rest & ~comp
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.component_masks()) == 1

    def is_forest(self) -> bool:
        return self.num_edges() == self.n - len(self.component_masks())

    def is_tree(self) -> bool:
        return self.n >= 1 and self.num_edges() == self.n - 1 and self.is_connected()

    def distances_from(self, sources: int) -> dict[int, int]:
        """BFS distances from a vertex mask; unreachable vertices are absent."""
        dist = {v: 0 for v in bits(sources)}
        seen = sources
        frontier = sources
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for v in bits(frontier):
                nxt |= self.rows[v]
            nxt &= ~seen
            for v in bits(nxt):
                dist[v] = d
            seen |= nxt
            frontier = nxt
        return dist

    def ball_mask(self, sources: int, radius: int) -> int:
        seen = sources
        frontier = sources
        for _ in range(radius):
            nxt = 0
            for v in bits(frontier):
                nxt |= self.rows[v]
            frontier = nxt & ~seen
            if not frontier:
                break
            seen |= frontier
        return seen

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# named graphs -------------------------------------------------------------------


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    out = Graph.empty(0)
    for g in graphs:
        out = out.disjoint_union(g)
    return out


# edge-list text format ----------------------------------------------------------


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse one ``u v`` pair per line (0-indexed). ``#`` starts a comment.

    A line ``n <count>`` fixes the vertex count, allowing isolated vertices.
    """
    edges = []
    declared = n
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            declared = int(parts[1])
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer vertex") from exc
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex")
        edges.append((u, v))
    if declared is None:
        declared = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(declared, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"
