"""Graph families, exhaustive enumeration, and seeded random graphs.

Random generation uses Python's ``random.Random`` (Mersenne Twister MT19937)
seeded with an integer, drawing only through ``randrange``, so fixtures are
reproducible across platforms.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import networkx as nx

from . import graph6
from .canon import canonical_cert
from .graph import Graph, GraphError, cycle, disjoint_union, path, star


class FamilyError(GraphError):
    pass


# ---------------------------------------------------------------------------
# named families


FIGURE1_LEFT_EDGES = [(i, i + 1) for i in range(8)] + [(2, 9), (3, 10), (10, 11), (5, 12)]
FIGURE1_RIGHT_EDGES = [(i, i + 1) for i in range(8)] + [(2, 9), (4, 10), (5, 11), (11, 12)]


def figure1_left() -> Graph:
    return Graph.from_edges(13, FIGURE1_LEFT_EDGES)


def figure1_right() -> Graph:
    return Graph.from_edges(13, FIGURE1_RIGHT_EDGES)


def sw_pair_left(n: int) -> Graph:
    """The path P_n."""
    return path(n)


def sw_pair_right(n: int) -> Graph:
    """C_{ceil(n/2)+1} plus a disjoint P_{floor(n/2)-1}."""
    if n < 4:
        raise FamilyError("sw_pair_right needs n >= 4")
    return disjoint_union(cycle((n + 1) // 2 + 1), path(n // 2 - 1))


def caterpillar(spine: int, pendants: Sequence[int]) -> Graph:
    """Path on ``spine`` vertices; one extra leaf hung at each listed spine index."""
    if spine < 1:
        raise FamilyError("spine must have at least one vertex")
    edges = [(i, i + 1) for i in range(spine - 1)]
    for j, s in enumerate(pendants):
        if not 0 <= s < spine:
            raise FamilyError(f"pendant position {s} outside the spine")
        edges.append((s, spine + j))
    return Graph.from_edges(spine + len(pendants), edges)


def spider(legs: Sequence[int]) -> Graph:
    """Centre 0 with a path of each given length (in edges) hanging off it."""
    edges = []
    nxt = 1
    for length in legs:
        if length < 1:
            raise FamilyError("spider legs must have length >= 1")
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def double_broom(handle: int, left: int, right: int) -> Graph:
    """Path on ``handle`` vertices with ``left``/``right`` extra leaves at its ends."""
    if handle < 2:
        raise FamilyError("handle needs at least two vertices")
    edges = [(i, i + 1) for i in range(handle - 1)]
    nxt = handle
    for _ in range(left):
        edges.append((0, nxt))
        nxt += 1
    for _ in range(right):
        edges.append((handle - 1, nxt))
        nxt += 1
    return Graph.from_edges(nxt, edges)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labelled tree from a random Pruefer sequence."""
    if n < 1:
        raise FamilyError("a tree needs at least one vertex")
    if n == 1:
        return Graph.empty(1)
    if n == 2:
        return path(2)
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (w for w in range(n) if degree[w] == 1)
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with edge decisions drawn in (i, j) lexicographic order."""
    rng = random.Random(seed)
    scale = 1 << 30
    cut = int(p * scale)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.randrange(scale) < cut]
    return Graph.from_edges(n, edges)


def random_caterpillar(n: int, spine: int, seed: int) -> Graph:
    """Spine of ``spine`` vertices with ``n - spine`` leaves on random interior vertices."""
    if not 1 <= spine <= n:
        raise FamilyError("caterpillar spine must fit in n")
    rng = random.Random(seed)
    pendants = [rng.randrange(1, spine - 1) if spine > 2 else 0 for _ in range(n - spine)]
    return caterpillar(spine, pendants)


FAMILIES: dict[str, Callable[..., Graph]] = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "caterpillar": caterpillar,
    "spider": spider,
    "double_broom": double_broom,
    "figure1_left": figure1_left,
    "figure1_right": figure1_right,
    "sw_pair_left": sw_pair_left,
    "sw_pair_right": sw_pair_right,
    "random_tree": random_tree,
    "random_graph": random_graph,
    "random_caterpillar": random_caterpillar,
}


def generate(family: str, **params) -> Graph:
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise FamilyError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    try:
        g = fn(**params)
    except TypeError as exc:
        raise FamilyError(f"bad parameters for {family}: {exc}") from exc
    if g.n < 1:
        raise FamilyError(f"{family} with {params} has no vertices")
    return g


# ---------------------------------------------------------------------------
# exhaustive enumeration


@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of n-vertex graphs (canonical forms)."""
    if n < 0:
        raise FamilyError("n must be nonnegative")
    if n == 0:
        return (Graph.empty(0),)
    seen: dict[bytes, None] = {}
    for base in all_graphs(n - 1):
        for nbrs in range(1 << (n - 1)):
            c = canonical_cert(base.add_vertex(nbrs))
            if c not in seen:
                seen[c] = None
    return tuple(graph6.decode(c.decode("ascii")) for c in sorted(seen))


def all_graphs_upto(n: int) -> Iterator[Graph]:
    for k in range(1, n + 1):
        yield from all_graphs(k)


@lru_cache(maxsize=None)
def all_trees(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of n-vertex trees."""
    if n < 1:
        raise FamilyError("trees need at least one vertex")
    if n == 1:
        return (Graph.empty(1),)
    if n == 2:
        return (path(2),)
    out = []
    for t in nx.nonisomorphic_trees(n):
        out.append(Graph.from_edges(n, t.edges()))
    return tuple(out)
