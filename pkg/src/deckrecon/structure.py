"""Structural quantities: profiles, tree centres, d-balls, marked and rooted graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .canon import Cert, _tree_centre, marked_cert
from .graph import Graph, GraphError, bits


@dataclass(frozen=True)
class MarkedGraph:
    """A graph with a distinguished vertex set, e.g. a d-ball around a copy of H."""

    graph: Graph
    marked: int  # vertex bitmask

    def __post_init__(self) -> None:
        if self.marked & ~self.graph.vertex_mask:
            raise GraphError("marked set is not inside the vertex set")

    @classmethod
    def of(cls, graph: Graph, marked) -> "MarkedGraph":
        if isinstance(marked, int):
            return cls(graph, marked)
        m = 0
        for v in marked:
            m |= 1 << v
        return cls(graph, m)

    @property
    def marked_vertices(self) -> list[int]:
        return list(bits(self.marked))

    @property
    def core(self) -> Graph:
        return self.graph.induced_mask(self.marked)

    def cert(self) -> Cert:
        return marked_cert(self.graph, self.marked)


@dataclass(frozen=True)
class RootedTree:
    tree: Graph
    root: int

    def __post_init__(self) -> None:
        if not self.tree.is_tree():
            raise GraphError("rooted tree must be a tree")
        if not 0 <= self.root < self.tree.n:
            raise GraphError("root outside the tree")

    @property
    def order(self) -> int:
        return self.tree.n

    def cert(self) -> Cert:
        return marked_cert(self.tree, 1 << self.root)

    def is_end_rooted_path(self) -> bool:
        t = self.tree
        if t.n == 1:
            return True
        return all(d <= 2 for d in t.degrees()) and t.degree(self.root) == 1


@dataclass(frozen=True)
class StructureProfile:
    component_orders: tuple[int, ...]
    diameter: int
    girth: float  # math.inf when acyclic
    longest_path_order: int
    is_tree: bool


def _eccentricity(g: Graph, v: int) -> int:
    return max(g.distances_from(1 << v).values())


def diameter(g: Graph) -> int:
    """Largest distance between two vertices of the same component."""
    if g.is_forest():
        best = 0
        for comp in g.component_masks():
            start = comp.bit_length() - 1
            dist = g.distances_from(1 << start)
            far = max(bits(comp), key=lambda v: dist[v])
            best = max(best, max(g.distances_from(1 << far).values()))
        return best
    return max((_eccentricity(g, v) for v in range(g.n)), default=0)


def girth(g: Graph) -> float:
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for u in bits(g.rows[v]):
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        parent[u] = v
                        nxt.append(u)
                    elif parent[v] != u:
                        best = min(best, dist[u] + dist[v] + 1)
            frontier = nxt
    return best


def longest_path_order(g: Graph) -> int:
    """Maximum number of vertices on a path (exact).

    Forests use double BFS; other graphs use depth-first branch and bound,
    intended for n <= 20.
    """
    if g.n == 0:
        return 0
    if g.is_forest():
        return diameter(g) + 1
    best = 1
    for comp in g.component_masks():
        size = comp.bit_count()
        if size <= best:
            continue

        def reach(v: int, free: int) -> int:
            seen = 1 << v
            frontier = seen
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= g.rows[u]
                frontier = nxt & free & ~seen
                seen |= frontier
            return seen.bit_count() - 1

        done = False

        def dfs(v: int, used: int, length: int) -> None:
            nonlocal best, done
            if length > best:
                best = length
                if best == size:
                    done = True
                    return
            free = comp & ~used
            if length + reach(v, free) <= best:
                return
            for u in bits(g.rows[v] & free):
                dfs(u, used | (1 << u), length + 1)
                if done:
                    return

        for s in bits(comp):
            dfs(s, 1 << s, 1)
            if done:
                break
    return best


def structure_profile(g: Graph) -> StructureProfile:
    comps = g.component_masks()
    return StructureProfile(
        component_orders=tuple(sorted(c.bit_count() for c in comps)),
        diameter=diameter(g),
        girth=girth(g),
        longest_path_order=longest_path_order(g),
        is_tree=g.is_tree(),
    )


def tree_centre(t: Graph) -> list[int]:
    """The one or two central vertices of a tree (middle of every longest path)."""
    if not t.is_tree():
        raise GraphError("tree_centre needs a tree")
    return sorted(_tree_centre(t.rows, t.vertex_mask))


def d_ball(g: Graph, a, d: int) -> tuple[MarkedGraph, list[int]]:
    """Induced subgraph on vertices within distance ``d`` of ``a``, marked at ``a``.

    Returns the marked graph and the list mapping ball vertex ``i`` to its
    original vertex in ``g``.
    """
    if not isinstance(a, int):
        m = 0
        for v in a:
            m |= 1 << v
        a = m
    if not a:
        raise GraphError("d_ball needs a nonempty vertex set")
    if a & ~g.vertex_mask:
        raise GraphError("d_ball centre set outside the graph")
    if d < 0:
        raise GraphError("radius must be nonnegative")
    ball = g.ball_mask(a, d)
    verts = list(bits(ball))
    sub = g.induced(verts)
    marked = 0
    for i, v in enumerate(verts):
        if a >> v & 1:
            marked |= 1 << i
    return MarkedGraph(sub, marked), verts
