"""Counting copies of a small graph inside a host graph.

``count_copies(g, h, "induced")`` is n_H(G), the number of vertex subsets
inducing a copy of ``h``; ``"subgraph"`` gives the number of (not necessarily
induced) subgraphs isomorphic to ``h``. Both are computed as an injective
embedding count divided by ``|Aut(h)|``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Literal

from . import graph6
from .canon import Cert, _rooted_codes, _tree_centre, canonical_cert, canonical_form, forest_key
from .graph import Graph, bits

Mode = Literal["induced", "subgraph"]
INDUCED: Mode = "induced"
SUBGRAPH: Mode = "subgraph"


class CountError(ValueError):
    pass


def _check_mode(mode: str) -> None:
    if mode not in (INDUCED, SUBGRAPH):
        raise CountError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# generic backtracking


def _search_order(h: Graph) -> list[int]:
    """Vertex order in which each vertex (after the first of its component)
    has an earlier neighbour; high degree first."""
    order: list[int] = []
    placed = 0
    deg = h.degrees()
    while len(order) < h.n:
        start = max((v for v in range(h.n) if not placed >> v & 1), key=lambda v: (deg[v], -v))
        order.append(start)
        placed |= 1 << start
        while True:
            frontier = 0
            for v in order:
                frontier |= h.rows[v]
            frontier &= ~placed
            if not frontier:
                break
            # most constrained: most already-placed neighbours, then degree
            nxt = max(bits(frontier), key=lambda v: ((h.rows[v] & placed).bit_count(), deg[v], -v))
            order.append(nxt)
            placed |= 1 << nxt
    return order


def embedding_count(h: Graph, g: Graph, induced: bool) -> int:
    """Number of injective maps V(h) -> V(g) preserving edges (and non-edges
    when ``induced``)."""
    if h.n > g.n:
        return 0
    if h.n == 0:
        return 1
    order = _search_order(h)
    # for each step, the earlier h-vertices adjacent / non-adjacent to it
    earlier_adj = []
    earlier_non = []
    for i, v in enumerate(order):
        adj = [j for j in range(i) if h.rows[v] >> order[j] & 1]
        non = [j for j in range(i) if not h.rows[v] >> order[j] & 1]
        earlier_adj.append(adj)
        earlier_non.append(non)
    hdeg = [h.degree(v) for v in order]
    grows = g.rows
    gdeg = g.degrees()
    eligible = []
    for i in range(h.n):
        m = 0
        for x in range(g.n):
            if gdeg[x] >= hdeg[i]:
                m |= 1 << x
        eligible.append(m)
    image = [0] * h.n
    k = h.n

    def rec(i: int, used: int) -> int:
        cand = eligible[i] & ~used
        for j in earlier_adj[i]:
            cand &= grows[image[j]]
        if induced:
            for j in earlier_non[i]:
                cand &= ~grows[image[j]]
        if i == k - 1:
            return cand.bit_count()
        total = 0
        for x in bits(cand):
            image[i] = x
            total += rec(i + 1, used | (1 << x))
        return total

    return rec(0, 0)


# ---------------------------------------------------------------------------
# trees into forests


class _RootedShape:
    """Rooted tree shapes keyed by their AHU code string."""

    def __init__(self, h: Graph, root: int):
        codes: dict[int, str] = {}
        self.root_code = _rooted_codes(h.rows, root, -1, None, h.vertex_mask, codes)
        self.children: dict[str, list[tuple[str, int]]] = {}

        stack = [(root, -1)]
        while stack:
            v, p = stack.pop()
            kids = [u for u in bits(h.rows[v]) if u != p]
            groups: dict[str, int] = {}
            for u in kids:
                groups[codes[u]] = groups.get(codes[u], 0) + 1
                stack.append((u, v))
            self.children.setdefault(codes[v], sorted(groups.items()))


def _tree_embeddings(shape: _RootedShape, g: Graph, start: int | None = None, parent: int = -1) -> int:
    grows = g.rows
    memo: dict[tuple[str, int, int], int] = {}

    def f(code: str, x: int, px: int) -> int:
        key = (code, x, px)
        got = memo.get(key)
        if got is not None:
            return got
        groups = shape.children[code]
        nbrs = [y for y in bits(grows[x]) if y != px]
        need = sum(t for _, t in groups)
        if need > len(nbrs):
            memo[key] = 0
            return 0
        if not groups:
            memo[key] = 1
            return 1
        weights = [[f(c, y, x) for y in nbrs] for c, _ in groups]
        # sweep neighbours; state = remaining children per group
        states = {tuple(t for _, t in groups): 1}
        for yi in range(len(nbrs)):
            nxt: dict[tuple[int, ...], int] = {}
            for rem, ways in states.items():
                nxt[rem] = nxt.get(rem, 0) + ways
                for gi, r in enumerate(rem):
                    if r and weights[gi][yi]:
                        new = rem[:gi] + (r - 1,) + rem[gi + 1:]
                        nxt[new] = nxt.get(new, 0) + ways * r * weights[gi][yi]
            states = nxt
        val = states.get((0,) * len(groups), 0)
        memo[key] = val
        return val

    if start is not None:
        return f(shape.root_code, start, parent)
    # recursion depth is bounded by the shape height, which is below 64
    return sum(f(shape.root_code, x, -1) for x in range(g.n))


def _tree_copies(h: Graph, g: Graph) -> int:
    if h.n >= 8 and max(h.degrees()) <= 3 and g.is_forest():
        # large low-degree patterns have few copies; enumerating them beats the DP
        return len(_tree_copy_masks(g, h))
    root = _tree_centre(h.rows, h.vertex_mask)[0]
    shape = _RootedShape(h, root)
    emb = _tree_embeddings(shape, g)
    if not emb:
        return 0
    aut = _tree_embeddings(shape, h)
    q, r = divmod(emb, aut)
    assert r == 0, "embedding count not divisible by automorphism count"
    return q


def rooted_copies(s: Graph, s_root: int, g: Graph, root: int, parent: int = -1) -> int:
    """Subtrees of the tree ``g`` hanging below ``root`` (away from ``parent``)
    that contain ``root`` and are isomorphic to ``s`` rooted at ``s_root``."""
    shape = _RootedShape(s, s_root)
    emb = _tree_embeddings(shape, g, root, parent)
    if not emb:
        return 0
    q, r = divmod(emb, _tree_embeddings(shape, s, s_root))
    assert r == 0
    return q


# ---------------------------------------------------------------------------
# public entry points


@lru_cache(maxsize=1 << 16)
def automorphism_count(h: Graph) -> int:
    if h.n and h.is_tree():
        root = _tree_centre(h.rows, h.vertex_mask)[0]
        return _tree_embeddings(_RootedShape(h, root), h)
    return embedding_count(h, h, True)


@lru_cache(maxsize=1 << 20)
def _count_canonical(gc: Cert, hc: Cert, mode: str) -> int:
    g = canonical_form_from_cert(gc)
    h = canonical_form_from_cert(hc)
    if h.n == 0:
        return 1
    if h.n == 1:
        return g.n
    if h.is_tree() and g.is_forest():
        # in a forest every tree-shaped subgraph is induced
        return _tree_copies(h, g)
    emb = embedding_count(h, g, mode == INDUCED)
    if not emb:
        return 0
    q, r = divmod(emb, automorphism_count(h))
    assert r == 0
    return q


def canonical_form_from_cert(c: Cert) -> Graph:
    return graph6.decode(c.decode("ascii"))


def count_copies(g: Graph, h: Graph, mode: Mode = INDUCED) -> int:
    """n_H(G) for ``mode="induced"``, the subgraph count for ``"subgraph"``."""
    _check_mode(mode)
    if h.n > g.n:
        raise CountError(f"pattern has {h.n} vertices, host only {g.n}")
    if h.num_edges() > g.num_edges():
        return 0
    return _count_canonical(canonical_cert(g), canonical_cert(h), mode)


def count_copies_bruteforce(g: Graph, h: Graph, mode: Mode = INDUCED) -> int:
    """Reference count by scanning vertex subsets (and edge subsets for the
    subgraph mode). Only for small graphs."""
    _check_mode(mode)
    target = canonical_cert(h)
    total = 0
    he = h.num_edges()
    for sub in combinations(range(g.n), h.n):
        part = g.induced(sub)
        if mode == INDUCED:
            total += canonical_cert(part) == target
            continue
        edges = part.edges()
        for chosen in combinations(edges, he):
            total += canonical_cert(Graph.from_edges(h.n, chosen)) == target
    return total


def induced_profile(g: Graph, k: int) -> dict[Cert, int]:
    """Certificate counts of all k-vertex induced subgraphs of ``g``."""
    return dict(_induced_profile(canonical_cert(g), k))


@lru_cache(maxsize=1 << 16)
def _induced_profile(gc: Cert, k: int) -> tuple[tuple[Cert, int], ...]:
    g = canonical_form_from_cert(gc)
    counts: dict[Cert, int] = {}
    for sub in combinations(range(g.n), k):
        c = canonical_cert(g.induced(sub))
        counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.items()))


# ---------------------------------------------------------------------------
# enumerating copies


def grow_sets(rows, seed: int, allowed: int, size: int) -> Iterator[int]:
    """Every vertex set ``S`` with ``seed <= S <= seed | allowed``, ``|S| = size``,
    and each vertex of ``S`` joined to ``seed`` by a path inside ``S``.

    Each set is produced once (include/exclude branching on the frontier).
    """
    need = size - seed.bit_count()
    if need < 0:
        return
    if need == 0:
        yield seed
        return
    allowed &= ~seed

    def frontier_of(s: int) -> int:
        f = 0
        for v in bits(s):
            f |= rows[v]
        return f

    stack = [(seed, frontier_of(seed) & allowed, 0)]
    while stack:
        cur, front, banned = stack.pop()
        front &= ~banned
        if not front:
            continue
        v = front & -front
        vi = v.bit_length() - 1
        # branch 1: exclude v
        stack.append((cur, front & ~v, banned | v))
        # branch 2: include v
        nxt = cur | v
        if nxt.bit_count() - seed.bit_count() == need:
            yield nxt
            continue
        stack.append((nxt, (front | rows[vi]) & allowed & ~nxt, banned))


def _tree_copy_masks(g: Graph, h: Graph) -> list[int]:
    """Copies of the tree ``h`` in the forest ``g`` by rooted backtracking.

    ``h`` is rooted at a centre vertex and explored parent-first. Siblings
    with equal rooted codes must map to increasing host vertices, which
    removes most automorphic duplicates; the rest collapse in the mask set.
    """
    root = _tree_centre(h.rows, h.vertex_mask)[0]
    codes: dict[int, str] = {}
    _rooted_codes(h.rows, root, -1, None, h.vertex_mask, codes)
    order = [root]
    parent = {root: -1}
    for v in order:
        kids = sorted((u for u in bits(h.rows[v]) if u != parent[v]), key=lambda u: codes[u])
        for u in kids:
            parent[u] = v
            order.append(u)
    # previous sibling with the same code, if any
    twin = {}
    for i, v in enumerate(order):
        for w in order[:i][::-1]:
            if parent[w] == parent[v] and w != root:
                if codes[w] == codes[v]:
                    twin[v] = w
                break
    hdeg = [h.degree(v) for v in order]
    gdeg = g.degrees()
    grows = g.rows
    pos = {v: i for i, v in enumerate(order)}
    par_idx = [pos[parent[v]] if parent[v] >= 0 else -1 for v in order]
    twin_idx = [pos[twin[v]] if v in twin else -1 for v in order]
    k = len(order)
    img = [0] * k
    found: set[int] = set()

    def rec(i: int, used: int) -> None:
        if i == k:
            found.add(used)
            return
        cand = grows[img[par_idx[i]]] & ~used
        lo = img[twin_idx[i]] if twin_idx[i] >= 0 else -1
        for y in bits(cand):
            if y > lo and gdeg[y] >= hdeg[i]:
                img[i] = y
                rec(i + 1, used | (1 << y))

    for x in range(g.n):
        if gdeg[x] >= hdeg[0]:
            img[0] = x
            rec(1, 1 << x)
    return sorted(found)


def copy_masks(g: Graph, h: Graph) -> list[int]:
    """Vertex sets of all induced copies of ``h`` in ``g`` (sorted bitmasks)."""
    k = h.n
    if k > g.n:
        return []
    if k == 0:
        return [0]
    forest = g.is_forest()
    if forest and not h.is_forest():
        return []
    if forest and h.is_connected() and k > 2:
        # in a forest every subtree copy is induced
        return _tree_copy_masks(g, h)
    ne = h.num_edges()
    if forest:
        target_key = forest_key(h.rows, h.vertex_mask)

        def ok(s: int) -> bool:
            return forest_key(g.rows, s) == target_key
    else:
        target = canonical_cert(h)

        def ok(s: int) -> bool:
            sub = g.induced_mask(s)
            return sub.num_edges() == ne and canonical_cert(sub) == target

    rows = g.rows
    out: list[int] = []
    if h.is_connected():
        for v in range(g.n):
            above = g.vertex_mask & ~((1 << (v + 1)) - 1)
            for s in grow_sets(rows, 1 << v, above, k):
                if ok(s):
                    out.append(s)
    else:
        for sub in combinations(range(g.n), k):
            s = 0
            for v in sub:
                s |= 1 << v
            # cheap edge-count filter before the isomorphism test
            if sum((rows[v] & s).bit_count() for v in sub) == 2 * ne and ok(s):
                out.append(s)
    out.sort()
    return out


__all__ = [
    "INDUCED",
    "SUBGRAPH",
    "Mode",
    "CountError",
    "count_copies",
    "count_copies_bruteforce",
    "embedding_count",
    "automorphism_count",
    "induced_profile",
    "canonical_form",
    "grow_sets",
    "rooted_copies",
    "copy_masks",
]
