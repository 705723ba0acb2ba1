"""Tree reconstruction by counting branches at the centre.

Works with the cards that contain a longest path P_k (k odd; even k is
reduced to odd by subdividing the central edge). Every longest path has the
centre c as its middle, so each such card shows c and true distances from
it. If one branch at c is heavy, the reference vertex walks into it
(c_0 = c, c_1, ...) until all branches below the current vertex c_j are
small. Everything outside those branches is then visible on a card;
the branches below c_j are recovered by counting.

Counting. For a rooted shape S, a *decorated tuple* is a longest path P, a
vertex w at distance j from c, and a subtree S' ~ S hanging below w and
avoiding P. Whether a vertex set carries such a tuple depends only on the
subgraph it induces, so tuple counts in T are card totals divided by a
binomial. Summing over the true branches b' below distance-j vertices,
tuples number sum sigma(S, b') * #(paths avoiding b'), where sigma counts
root-containing subtrees. Inverting over shapes ordered by size gives,
per shape b, the number of (branch ~ b, path avoiding it) pairs. Paths
through b' are counted the same way with half-paths. Each branch pairs
with every longest path once, so the total divides by n_{P_k}(T).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .canon import Cert, canonical_cert, marked_cert, split_marked_cert
from .counting import count_copies, rooted_copies
from .deck import Deck, compute_deck, kelly_count
from .graph import Graph, bits, path
from .trees import BranchInventory, Fail, Method, ParamContext, ReconstructionReport, TreeError

VERIFY_LIMIT = 50_000


@dataclass
class _View:
    """A P_k card seen from the centre: parents, depths and subtree sizes."""

    g: Graph
    mult: int
    connected: bool
    centre: int
    parent: dict[int, int]
    depth: dict[int, int]
    children: dict[int, list[int]]
    size: dict[int, int]
    top: dict[int, int]  # the child of the centre above each vertex

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return out

    def rooted_cert(self, v: int) -> Cert:
        verts = sorted(self.subtree(v))
        return marked_cert(self.g.induced(verts), 1 << verts.index(v))

    def heaviest_child(self, v: int) -> int | None:
        kids = self.children[v]
        if not kids:
            return None
        best = max(self.size[u] for u in kids)
        top = [u for u in kids if self.size[u] == best]
        if len(top) > 1:
            return -1
        return top[0]


def _view(g: Graph, mult: int, k: int) -> _View | None:
    for comp in g.component_masks():
        sub = g.induced_mask(comp)
        if sub.n < k:
            continue
        # the component holding a longest path has diameter k - 1
        start = comp.bit_length() - 1
        dist = g.distances_from(1 << start)
        far = max((v for v in bits(comp)), key=lambda v: dist[v])
        dist2 = g.distances_from(1 << far)
        other = max((v for v in bits(comp)), key=lambda v: dist2[v])
        if dist2[other] != k - 1:
            continue
        # centre: the middle vertex of that path
        back = g.distances_from(1 << other)
        c = next(v for v in bits(comp) if dist2[v] == (k - 1) // 2 and back[v] == (k - 1) // 2)
        parent = {c: -1}
        depth = {c: 0}
        order = [c]
        for x in order:
            for y in bits(g.rows[x]):
                if y not in parent:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    order.append(y)
        children: dict[int, list[int]] = {v: [] for v in order}
        for v in order[1:]:
            children[parent[v]].append(v)
        size = {}
        for v in reversed(order):
            size[v] = 1 + sum(size[u] for u in children[v])
        top = {}
        for v in order[1:]:
            top[v] = v if parent[v] == c else top[parent[v]]
        return _View(g, mult, comp == g.vertex_mask, c, parent, depth, children, size, top)
    return None


def _rooted(cert: Cert) -> tuple[Graph, int]:
    g, m = split_marked_cert(cert)
    return g, m.bit_length() - 1


@lru_cache(maxsize=1 << 18)
def _sigma(s: Cert, b: Cert) -> int:
    sg, sr = _rooted(s)
    bg, br = _rooted(b)
    if sg.n > bg.n:
        return 0
    return rooted_copies(sg, sr, bg, br)


@lru_cache(maxsize=1 << 16)
def _is_end_path(cert: Cert) -> bool:
    g, r = _rooted(cert)
    return all(x <= 2 for x in g.degrees()) and (g.n == 1 or g.degree(r) == 1)


@lru_cache(maxsize=1 << 16)
def _depth_profile(cert: Cert) -> tuple[int, ...]:
    g, r = _rooted(cert)
    dist = g.distances_from(1 << r)
    top = max(dist.values())
    return tuple(sum(1 for v in dist.values() if v == t) for t in range(top + 1))


class _Builder:
    """Edge-list construction of the partial tree."""

    def __init__(self) -> None:
        self.n = 1
        self.edges: list[tuple[int, int]] = []

    def vertex(self, at: int) -> int:
        v = self.n
        self.n += 1
        self.edges.append((at, v))
        return v

    def attach(self, at: int, cert: Cert) -> None:
        g, r = _rooted(cert)
        base = self.n
        self.n += g.n
        self.edges.append((at, base + r))
        self.edges.extend((base + u, base + v) for u, v in g.edges())

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


def _contract(g: Graph, s: int) -> Graph:
    nb = list(bits(g.rows[s]))
    keep = [v for v in range(g.n) if v != s]
    out = g.induced(keep)
    if len(nb) == 2:
        out = out.add_edges([(keep.index(nb[0]), keep.index(nb[1]))])
    elif len(nb) > 2:
        raise TreeError("the subdivision vertex has more than two neighbours")
    return out


def _subdivide_centre(g: Graph, k: int) -> Graph | None:
    """Subdivide the central edge of the longest path on a card (even k)."""
    for comp in g.component_masks():
        start = comp.bit_length() - 1
        d1 = g.distances_from(1 << start)
        a = max(bits(comp), key=lambda v: d1[v])
        d2 = g.distances_from(1 << a)
        b = max(bits(comp), key=lambda v: d2[v])
        if d2[b] != k - 1:
            continue
        d3 = g.distances_from(1 << b)
        half = k // 2
        u = next(v for v in bits(comp) if d2[v] == half - 1 and d3[v] == half)
        v = next(x for x in bits(comp) if d2[x] == half and d3[x] == half - 1)
        edges = [e for e in g.edges() if set(e) != {u, v}]
        s = g.n
        return Graph.from_edges(g.n + 1, edges + [(u, s), (v, s)])
    return None


def low_diam_reconstruct(
    d: Deck, ctx: ParamContext | None = None, guaranteed: bool = False, tie: str = "least"
) -> ReconstructionReport | Fail:
    """Reconstruct a tree from its deck by centre branch counts.

    ``tie`` picks which of several minimising cards supplies the light
    branches ("least" or "greatest" certificate); both must agree.
    """
    if tie not in ("least", "greatest"):
        raise ValueError("tie must be 'least' or 'greatest'")
    ctx = ctx or ParamContext.from_deck(d)
    if not ctx.low_diameter_applies():
        return Fail("NotApplicable: r is too large for this path length")
    k = ctx.k
    even = k % 2 == 0
    n_w, ell_w, k_w = (d.n + 1, d.ell + 1, k + 1) if even else (d.n, d.ell, k)
    half = (k_w - 1) // 2
    views: list[_View] = []
    for card, mult in d.classes():
        if not count_copies(card, path(k)):
            continue
        g = _subdivide_centre(card, k) if even else card
        if g is None:
            continue
        v = _view(g, mult, k_w)
        if v is None:
            raise TreeError("a card with a longest path has no centre")
        views.append(v)
    n_pk = kelly_count(d, path(k))
    conn = [v for v in views if v.connected]

    # walk into a heavy branch while some card shows it at the current step
    walk: list[list[int]] = [[v.centre] for v in conn]
    lights: list[list[Cert]] = []
    j = 0
    while True:
        threshold = ell_w - k_w - j
        heavy_here = False
        for v, w in zip(conn, walk):
            h = v.heaviest_child(w[-1])
            if h is not None and h >= 0 and v.size[h] >= threshold:
                heavy_here = True
            if h == -1 and max(v.size[u] for u in v.children[w[-1]]) >= threshold:
                raise TreeError("two equally heavy branches on a card")
        if not heavy_here:
            break
        if j >= half:
            raise TreeError("the heavy walk ran past the end of a longest path")
        # the card whose heaviest branch here is smallest shows every light branch whole
        def weight(i: int) -> int:
            return max((conn[i].size[u] for u in conn[i].children[walk[i][-1]]), default=0)

        lightest = min(weight(i) for i in range(len(conn)))
        tied = [i for i in range(len(conn)) if weight(i) == lightest]
        pick = min if tie == "least" else max
        best = pick(tied, key=lambda i: canonical_cert(conn[i].g))
        bv, bw = conn[best], walk[best][-1]
        hv = bv.heaviest_child(bw)
        lights.append(sorted(bv.rooted_cert(u) for u in bv.children[bw] if u != hv))
        for v, w in zip(conn, walk):
            w.append(v.heaviest_child(w[-1]))
        j += 1

    # decorated tuple totals gathered from the cards
    avoid: dict[tuple[Cert, int], int] = {}  # (branch cert, shared prefix i) -> weighted tuples
    through: dict[Cert, int] = {}
    for v in views:
        ends = [x for x, dx in v.depth.items() if dx == half]
        paths = [(a, b) for i, a in enumerate(ends) for b in ends[i + 1:] if v.top[a] != v.top[b]]
        anc_cache: dict[int, list[int]] = {}

        def ancestors(x: int) -> list[int]:
            if x not in anc_cache:
                chain = []
                y = x
                while y != -1:
                    chain.append(y)
                    y = v.parent[y]
                anc_cache[x] = chain[::-1]
            return anc_cache[x]

        for w in (x for x, dx in v.depth.items() if dx == j):
            wanc = set(ancestors(w))
            for ch in v.children[w]:
                cert = None
                for a, b in paths:
                    on_a, on_b = set(ancestors(a)), set(ancestors(b))
                    if ch in on_a or ch in on_b:
                        continue
                    i = max(len(wanc & on_a), len(wanc & on_b)) - 1
                    cert = cert or v.rooted_cert(ch)
                    avoid[(cert, i)] = avoid.get((cert, i), 0) + v.mult
                side = v.top.get(ch)
                q = sum(1 for e in ends if v.top[e] != side)
                if q:
                    cert = cert or v.rooted_cert(ch)
                    through[cert] = through.get(cert, 0) + v.mult * q

    cap = ell_w - k_w - j
    cands = sorted(
        {c for c, _ in avoid} | set(through),
        key=lambda c: (-_rooted(c)[0].n, c),
    )
    cands = [c for c in cands if _rooted(c)[0].n <= cap and not _is_end_path(c)]

    # group card totals by union size before dividing
    def tuple_count(s: Cert, deep_only: bool) -> int:
        s_order = _rooted(s)[0].n
        if deep_only:
            u = half + 1 + j + s_order
            tot = sum(wt * _sigma(s, b) for b, wt in through.items())
            if not tot:
                return 0
            return _exact(tot, n_w, ell_w, u)
        by_i: dict[int, int] = {}
        for (b, i), wt in avoid.items():
            sig = _sigma(s, b)
            if sig:
                by_i[i] = by_i.get(i, 0) + wt * sig
        return sum(_exact(tot, n_w, ell_w, k_w + j - i + s_order) for i, tot in by_i.items())

    pi: dict[Cert, int] = {}
    mu: dict[Cert, int] = {}
    for s in cands:
        val = tuple_count(s, False)
        val2 = tuple_count(s, True)
        for b in pi:
            if _rooted(b)[0].n > _rooted(s)[0].n:
                sig = _sigma(s, b)
                if sig:
                    val -= sig * pi[b]
                    val2 -= sig * mu[b]
        pi[s], mu[s] = val, val2

    counts: dict[Cert, int] = {}
    depth_at = half - j - 1
    for s in cands:
        prof = _depth_profile(s)
        dots = prof[depth_at] if 0 <= depth_at < len(prof) else 0
        total = pi[s] + dots * mu[s]
        q, r = divmod(total, n_pk)
        if r or q < 0:
            raise TreeError(f"branch count {total} is not a multiple of {n_pk}")
        if q:
            counts[s] = q

    # remove branches known to hang below other vertices at distance j
    for i, group in enumerate(lights):
        for cert in group:
            g, r = _rooted(cert)
            dist = g.distances_from(1 << r)
            par = {r: -1}
            order = [r]
            for x in order:
                for y in bits(g.rows[x]):
                    if y not in par:
                        par[y] = x
                        order.append(y)
            for x in order:
                if dist[x] != j - i - 1:
                    continue
                for y in bits(g.rows[x]):
                    if par.get(y) != x:
                        continue
                    sub = [z for z in order if _below(par, z, y)]
                    sub.sort()
                    c = marked_cert(g.induced(sub), 1 << sub.index(y))
                    if _is_end_path(c) or _rooted(c)[0].n > cap:
                        continue
                    counts[c] = counts.get(c, 0) - 1
                    if counts[c] < 0:
                        raise TreeError("more known branches than counted")

    b = _Builder()
    chain = [0]
    for i in range(j):
        for cert in lights[i]:
            b.attach(chain[-1], cert)
        chain.append(b.vertex(chain[-1]))
    cj = chain[-1]
    for cert, mult in sorted(counts.items()):
        for _ in range(mult):
            b.attach(cj, cert)

    def path_counts(q: int) -> tuple[int, int]:
        g = b.graph()
        if even:
            g, q = _contract(g, 0), q - 1
        have = count_copies(g, path(q)) if g.n >= q else 0
        return kelly_count(d, path(q)), have

    for t in range(half - j, 0, -1):
        q = t + 1 + j + half
        while True:
            want, have = path_counts(q)
            if have == want:
                break
            if have > want or b.n + t > n_w:
                raise TreeError(f"path branch counts disagree at length {t}")
            p_cert = marked_cert(path(t), 1)
            b.attach(cj, p_cert)
            counts[p_cert] = counts.get(p_cert, 0) + 1
    result = b.graph()
    if even:
        result = _contract(result, 0)
    if result.n != d.n:
        raise TreeError(f"reconstructed {result.n} vertices, expected {d.n}")
    notes = [f"walk depth {j}"]
    if comb(d.n, d.ell) <= VERIFY_LIMIT:
        if compute_deck(result, d.ell) != d:
            raise TreeError("the reconstructed tree has a different deck")
        notes.append("deck verified")
    method = Method.LOW_HEAVY if j else Method.LOW_ALL_SMALL
    inv = BranchInventory(f"c{j}", tuple(sorted((c, m) for c, m in counts.items() if m)))
    return ReconstructionReport(result, method, guaranteed, tuple(notes), inv)


def _below(par: dict[int, int], z: int, y: int) -> bool:
    while z != -1:
        if z == y:
            return True
        z = par[z]
    return False


def _exact(total: int, n: int, ell: int, u: int) -> int:
    if u > ell:
        raise TreeError("a decorated tuple does not fit on a card")
    q, r = divmod(total, comb(n - u, ell - u))
    if r:
        raise TreeError(f"tuple total {total} is not an exact card average")
    return q
