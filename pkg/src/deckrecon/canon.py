"""Canonical labelling and isomorphism certificates.

Forests go through an AHU-style rooted code at the centre of every component.
Everything else uses colour refinement followed by an individualisation
search that keeps the lexicographically largest relabelled adjacency, pruned
with the automorphisms it discovers along the way.

A certificate is the graph6 string of the canonical relabelling (as bytes),
so the representative of a class can be recovered with ``graph6.decode``.
Marked graphs get a second colour class and a suffix listing marked
positions.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from . import graph6
from .graph import Graph, bits

Cert = bytes


# ---------------------------------------------------------------------------
# forests


def _tree_centre(rows: Sequence[int], comp: int) -> list[int]:
    """Centre of the tree spanned by ``comp`` via repeated leaf stripping."""
    alive = comp
    if alive & (alive - 1) == 0:
        return [alive.bit_length() - 1]
    deg = {v: (rows[v] & comp).bit_count() for v in bits(comp)}
    leaves = [v for v, d in deg.items() if d <= 1]
    remaining = len(deg)
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for v in leaves:
            alive &= ~(1 << v)
            for u in bits(rows[v] & alive):
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        leaves = nxt
    return list(bits(alive))


def _rooted_codes(rows, root: int, parent: int, colors, within: int, out: dict) -> str:
    # iterative post-order to survive 64-deep paths without recursion overhead
    stack = [(root, parent, False)]
    while stack:
        v, p, done = stack.pop()
        kids = rows[v] & within & ~(1 << p if p >= 0 else 0)
        if not done:
            stack.append((v, p, True))
            for u in bits(kids):
                stack.append((u, v, False))
        else:
            child = sorted(out[u] for u in bits(kids))
            c = colors[v] if colors is not None else 0
            out[v] = f"{c}({''.join(child)})"
    return out[root]


def _forest_canonical(g: Graph, colors: Sequence[int] | None) -> list[int]:
    rows = g.rows
    blocks = []
    for comp in g.component_masks():
        centre = _tree_centre(rows, comp)
        codes: dict[int, str] = {}
        if len(centre) == 1:
            c = centre[0]
            key = "V" + _rooted_codes(rows, c, -1, colors, comp, codes)
            roots = [(c, -1)]
        else:
            a, b = centre
            ca = _rooted_codes(rows, a, b, colors, comp, codes)
            cb = _rooted_codes(rows, b, a, colors, comp, codes)
            if cb < ca:
                a, b, ca, cb = b, a, cb, ca
            key = "E" + ca + cb
            roots = [(a, b), (b, a)]
        order = []
        for r, p in roots:
            stack = [(r, p)]
            while stack:
                v, par = stack.pop()
                order.append(v)
                kids = rows[v] & comp & ~(1 << par if par >= 0 else 0)
                # reversed so the smallest code is emitted first
                for u in sorted(bits(kids), key=lambda x: codes[x], reverse=True):
                    stack.append((u, v))
        blocks.append((key, order))
    blocks.sort(key=lambda kb: kb[0])
    return [v for _, order in blocks for v in order]


def forest_key(rows: Sequence[int], mask: int) -> str:
    """Isomorphism-class key of the forest induced on ``mask`` (original labels)."""
    keys = []
    for comp in _components(rows, mask):
        centre = _tree_centre(rows, comp)
        codes: dict[int, str] = {}
        if len(centre) == 1:
            keys.append("V" + _rooted_codes(rows, centre[0], -1, None, comp, codes))
        else:
            a, b = centre
            ca = _rooted_codes(rows, a, b, None, comp, codes)
            cb = _rooted_codes(rows, b, a, None, comp, codes)
            keys.append("E" + min(ca, cb) + max(ca, cb))
    keys.sort()
    return "|".join(keys)


def _components(rows: Sequence[int], rest: int) -> list[int]:
    comps = []
    while rest:
        frontier = rest & -rest
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            for v in bits(frontier):
                nxt |= rows[v]
            frontier = nxt & rest & ~comp
        comps.append(comp)
        rest &= ~comp
    return comps


# ---------------------------------------------------------------------------
# general graphs


def _refine(rows: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition."""
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                r = rows[v]
                sig = tuple((r & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


class _Search:
    def __init__(self, g: Graph):
        self.n = g.n
        self.rows = g.rows
        self.best_code: tuple[int, ...] | None = None
        self.best_lab: list[int] = []
        self.best_path: list[int] = []
        self.first_code: tuple[int, ...] | None = None
        self.first_lab: list[int] = []
        self.first_path: list[int] = []
        self.autos: list[list[int]] = []

    def code(self, lab: list[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        out = []
        for v in lab:
            r = 0
            for u in bits(self.rows[v]):
                r |= 1 << pos[u]
            out.append(r)
        return tuple(out)

    @staticmethod
    def _common(a: list[int], b: list[int]) -> int:
        k = 0
        for x, y in zip(a, b):
            if x != y:
                break
            k += 1
        return k

    def _record(self, src: list[int], dst: list[int]) -> None:
        gamma = [0] * self.n
        for s, d in zip(src, dst):
            gamma[s] = d
        if any(gamma[v] != v for v in range(self.n)):
            self.autos.append(gamma)

    def _orbit_roots(self, cell: list[int], fixed: list[int]) -> dict[int, int]:
        parent = {v: v for v in range(self.n)}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gamma in self.autos:
            if all(gamma[f] == f for f in fixed):
                for v in range(self.n):
                    a, b = find(v), find(gamma[v])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return {v: find(v) for v in cell}

    def run(self, cells: list[list[int]], path: list[int]) -> int:
        """Explore below ``path``; returns the depth to unwind to."""
        depth = len(path)
        cells = _refine(self.rows, cells)
        if len(cells) == self.n:
            lab = [c[0] for c in cells]
            code = self.code(lab)
            if self.first_code is None:
                self.first_code, self.first_lab, self.first_path = code, lab, list(path)
                self.best_code, self.best_lab, self.best_path = code, lab, list(path)
                return depth
            if code == self.first_code:
                self._record(self.first_lab, lab)
                return self._common(path, self.first_path)
            if code > self.best_code:
                self.best_code, self.best_lab, self.best_path = code, lab, list(path)
                return depth
            if code == self.best_code:
                self._record(self.best_lab, lab)
                return self._common(path, self.best_path)
            return depth
        idx = next(i for i, c in enumerate(cells) if len(c) > 1)
        target = cells[idx]
        explored: set[int] = set()
        for v in target:
            roots = self._orbit_roots(target, path)
            if roots[v] in explored:
                continue
            explored.add(roots[v])
            rest = [u for u in target if u != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            back = self.run(child, path + [v])
            if back < depth:
                return back
        return depth


def canonical_labeling(g: Graph, colors: Sequence[int] | None = None) -> list[int]:
    """Return ``lab`` with ``lab[i]`` the original vertex placed at position ``i``."""
    if g.n == 0:
        return []
    if g.is_forest():
        return _forest_canonical(g, colors)
    if colors is None:
        cells = [list(range(g.n))]
    else:
        by_color: dict[int, list[int]] = {}
        for v in range(g.n):
            by_color.setdefault(colors[v], []).append(v)
        cells = [by_color[c] for c in sorted(by_color)]
    search = _Search(g)
    search.run(cells, [])
    return search.best_lab


@lru_cache(maxsize=1 << 18)
def canonical_cert(g: Graph) -> Cert:
    """Certificate equal for two graphs exactly when they are isomorphic."""
    lab = canonical_labeling(g)
    return graph6.encode(g.relabel(lab)).encode("ascii")


def canonical_form(g: Graph) -> Graph:
    return graph6.decode(canonical_cert(g).decode("ascii"))


@lru_cache(maxsize=1 << 18)
def _marked(g: Graph, marked: int) -> Cert:
    colors = [marked >> v & 1 for v in range(g.n)]
    lab = canonical_labeling(g, colors)
    flags = "".join(str(colors[v]) for v in lab)
    return graph6.encode(g.relabel(lab)).encode("ascii") + b":" + flags.encode("ascii")


def marked_cert(g: Graph, marked) -> Cert:
    """Certificate of ``(g, marked)`` up to isomorphisms preserving the marked set.

    ``marked`` is a vertex bitmask or an iterable of vertices.
    """
    if not isinstance(marked, int):
        m = 0
        for v in marked:
            m |= 1 << v
        marked = m
    return _marked(g, marked)


def split_marked_cert(cert: Cert) -> tuple[Graph, int]:
    """Representative ``(graph, marked mask)`` of a marked certificate."""
    g6, flags = cert.split(b":")
    g = graph6.decode(g6.decode("ascii"))
    mask = 0
    for i, f in enumerate(flags):
        if f == ord("1"):
            mask |= 1 << i
    return g, mask


def is_isomorphic(a: Graph, b: Graph) -> bool:
    return a.n == b.n and a.num_edges() == b.num_edges() and canonical_cert(a) == canonical_cert(b)


def vertex_orbits(g: Graph) -> list[list[int]]:
    """Automorphism orbits of vertices, each sorted, ordered by least member."""
    groups: dict[Cert, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(marked_cert(g, 1 << v), []).append(v)
    return sorted(groups.values())
