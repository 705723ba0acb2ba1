"""Counting engines driven by the deck.

``maximal_count`` counts maximal members of an explicit graph family via
the alternating chain sum (equivalently, a downward Moebius recursion over
family members ordered by size). ``ball_extension_counts`` recovers, for
every d-ball shape around copies of ``h``, how many copies of ``h`` have that
ball; ``component_count`` is its d = 1 special case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .canon import Cert, canonical_cert, marked_cert, split_marked_cert, vertex_orbits
from .counting import SUBGRAPH, canonical_form_from_cert, copy_masks, count_copies, grow_sets
from .deck import Deck, DeckError, kelly_count
from .graph import Graph, bits
from .structure import MarkedGraph

DEFAULT_BUDGET = 20000


class ExtensionError(ValueError):
    pass


class FamilyBudgetError(ExtensionError):
    """The candidate family grew past the configured budget."""


# ---------------------------------------------------------------------------
# maximal F-subgraphs


class FamilySpec:
    """An explicit finite family of pairwise non-isomorphic graphs.

    ``sub(i, j)`` is the number of (not necessarily induced) copies of member
    ``i`` inside member ``j``; it is computed on demand and cached.
    """

    def __init__(self, members: Iterable[Graph]):
        by_cert: dict[Cert, Graph] = {}
        for g in members:
            by_cert.setdefault(canonical_cert(g), g)
        keys = sorted(by_cert, key=lambda c: (by_cert[c].n, by_cert[c].num_edges(), c))
        self.certs: tuple[Cert, ...] = tuple(keys)
        self.members: tuple[Graph, ...] = tuple(by_cert[c] for c in keys)
        self.index = {c: i for i, c in enumerate(keys)}
        self._sub: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.members)

    @property
    def max_order(self) -> int:
        return max((g.n for g in self.members), default=0)

    def position(self, g: Graph) -> int:
        try:
            return self.index[canonical_cert(g)]
        except KeyError:
            raise ExtensionError("graph is not a member of the family") from None

    def sub(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._sub:
            a, b = self.members[i], self.members[j]
            self._sub[key] = count_copies(b, a, SUBGRAPH) if a.n < b.n else 0
        return self._sub[key]

    def above(self, i: int) -> list[int]:
        """Members strictly larger than member ``i`` that contain it."""
        n = self.members[i].n
        return [j for j in range(len(self.members)) if self.members[j].n > n and self.sub(i, j)]


@dataclass
class ChainTally:
    """All chains ``F = X_0, X_1, ..., X_k`` of family members with strictly
    increasing orders and every step a subgraph relation, grouped by length.

    Each chain is stored as ``(members, inner)`` where ``inner`` is the
    product of the step counts; evaluating against host counts gives the
    alternating sum.
    """

    family: FamilySpec
    start: int
    chains: dict[int, list[tuple[tuple[int, ...], int]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        stack = [((self.start,), 1)]
        while stack:
            seq, inner = stack.pop()
            self.chains.setdefault(len(seq) - 1, []).append((seq, inner))
            for j in self.family.above(seq[-1]):
                stack.append((seq + (j,), inner * self.family.sub(seq[-1], j)))
        for chain_list in self.chains.values():
            chain_list.sort()

    def evaluate(self, host_counts: Mapping[int, int]) -> int:
        total = 0
        for k, chain_list in self.chains.items():
            sign = -1 if k % 2 else 1
            for seq, inner in chain_list:
                c = host_counts.get(seq[-1], 0)
                if c:
                    total += sign * inner * c
        return total

    def rank(self, host_counts: Mapping[int, int]) -> int:
        best = -1
        for k, chain_list in self.chains.items():
            if any(host_counts.get(seq[-1], 0) for seq, _ in chain_list):
                best = max(best, k)
        return best


def _host_counts(d: Deck, fam: FamilySpec, idx: Iterable[int]) -> dict[int, int]:
    return {i: kelly_count(d, fam.members[i], SUBGRAPH) for i in idx}


def maximal_count(d: Deck, f: Graph, fam: FamilySpec, method: str = "recursion") -> int:
    """m(F, G): maximal family subgraphs of G isomorphic to ``f``, from the deck.

    Contract: the caller guarantees that every family subgraph of G has at
    most ``ell`` vertices and lies in a unique maximal one. Neither can be
    checked from the deck.
    """
    if fam.max_order > d.ell:
        raise ExtensionError(f"family has a member on {fam.max_order} > {d.ell} vertices")
    start = fam.position(f)
    if method == "chains":
        tally = ChainTally(fam, start)
        members = {seq[-1] for chain_list in tally.chains.values() for seq, _ in chain_list}
        return tally.evaluate(_host_counts(d, fam, members))
    if method != "recursion":
        raise ExtensionError(f"unknown method {method!r}")
    up = [start] + fam.above(start)
    host = _host_counts(d, fam, up)
    live = [i for i in up if host[i]]
    live.sort(key=lambda i: -fam.members[i].n)
    m: dict[int, int] = {}
    for i in live:
        val = host[i]
        for j, mj in m.items():
            if mj and fam.members[j].n > fam.members[i].n:
                s = fam.sub(i, j)
                if s:
                    val -= s * mj
        m[i] = val
    return m.get(start, 0)


# ---------------------------------------------------------------------------
# d-ball extension counts


@dataclass(frozen=True)
class BigBallDetected:
    """Some copy of ``h`` has a d-ball on at least ``ell`` vertices."""

    witness: Cert  # a card equal to such a ball (truncated to ell vertices)


@dataclass(frozen=True)
class BallCountResult:
    big_ball: BigBallDetected | None
    counts: Mapping[Cert, int]

    @property
    def detected(self) -> bool:
        return self.big_ball is not None


def _ball_cert(g: Graph, a: int, dd: int) -> tuple[Cert, int]:
    ball = g.ball_mask(a, dd)
    verts = list(bits(ball))
    sub = g.induced(verts)
    marked = 0
    for i, v in enumerate(verts):
        if a >> v & 1:
            marked |= 1 << i
    return marked_cert(sub, marked), len(verts)


@lru_cache(maxsize=1 << 18)
def _card_balls(card: Cert, hc: Cert, dd: int) -> tuple[tuple[Cert, int], ...]:
    g = canonical_form_from_cert(card)
    h = canonical_form_from_cert(hc)
    found: dict[Cert, int] = {}
    for a in copy_masks(g, h):
        c, size = _ball_cert(g, a, dd)
        found[c] = size
    return tuple(sorted(found.items()))


@lru_cache(maxsize=1 << 18)
def _self_balls(x: Cert, hc: Cert, dd: int) -> int:
    """Copies of h in X+ whose d-ball within X+ is all of X+ and matches X."""
    g, _ = split_marked_cert(x)
    h = canonical_form_from_cert(hc)
    full = g.vertex_mask
    return sum(
        1 for a in copy_masks(g, h) if g.ball_mask(a, dd) == full and marked_cert(g, a) == x
    )


@lru_cache(maxsize=1 << 20)
def _sub_extensions(x: Cert, size: int, y: Cert) -> int:
    """Sub-extensions of Y isomorphic to X: sets B with A <= B <= V(Y+)."""
    g, a = split_marked_cert(y)
    total = 0
    for b in grow_sets(g.rows, a, g.vertex_mask, size):
        verts = list(bits(b))
        marked = 0
        for i, v in enumerate(verts):
            if a >> v & 1:
                marked |= 1 << i
        if marked_cert(g.induced(verts), marked) == x:
            total += 1
    return total


def ball_extension_counts(
    d: Deck, h: Graph, dd: int, budget: int = DEFAULT_BUDGET
) -> BallCountResult:
    """m_d(H_e, G) for every extension class H_e realised in G, or BigBallDetected.

    Candidate balls are harvested from cards: for every copy A of ``h`` on a
    card, its d-ball within the card. A ball in G of fewer than ``ell``
    vertices sits inside some card, where it coincides with the card ball,
    so every realised ball is a candidate.

    Condition 1 (a ball of at least ``ell`` vertices) holds exactly when some
    card equals the d-ball of a copy it contains. Given a large ball, a
    breadth-first tree from A inside it has an ``ell``-vertex subset closed
    under parents; that card keeps every vertex within distance d of A.
    Conversely, distances in G are at most those on a card.
    """
    if h.n > d.ell - 1:
        raise ExtensionError(f"h has {h.n} vertices; at most ell - 1 = {d.ell - 1} allowed")
    if d.n < d.ell + 1:
        raise DeckError("ball counting needs n >= ell + 1")
    if dd < 0:
        raise ExtensionError("radius must be nonnegative")
    hc = canonical_cert(h)
    size_of: dict[Cert, int] = {}
    for card in sorted(d.cards):
        for c, size in _card_balls(card, hc, dd):
            if size >= d.ell:
                return BallCountResult(BigBallDetected(card), {})
            size_of[c] = size
            if len(size_of) > budget:
                raise FamilyBudgetError(f"more than {budget} candidate ball shapes")
    order = sorted(size_of, key=lambda c: (-size_of[c], c))
    m: dict[Cert, int] = {}
    for x in order:
        g, _ = split_marked_cert(x)
        val = kelly_count(d, g)
        if val:
            val *= _self_balls(x, hc, dd)
        for y, my in m.items():
            if my and size_of[y] > size_of[x]:
                val -= _sub_extensions(x, size_of[x], y) * my
        if val < 0:
            raise ExtensionError("negative extension count: the deck is inconsistent")
        m[x] = val
    return BallCountResult(None, {x: v for x, v in sorted(m.items()) if v})


def direct_ball_counts(g: Graph, h: Graph, dd: int) -> tuple[dict[Cert, int], int]:
    """Ground truth from the graph itself: ball class counts and the largest ball order."""
    counts: dict[Cert, int] = {}
    biggest = 0
    for a in copy_masks(g, h):
        c, size = _ball_cert(g, a, dd)
        counts[c] = counts.get(c, 0) + 1
        biggest = max(biggest, size)
    return counts, biggest


def component_count(d: Deck, h: Graph) -> int | BigBallDetected:
    """Number of components of G isomorphic to the connected graph ``h``."""
    if not h.is_connected():
        raise ExtensionError("component_count needs a connected h")
    res = ball_extension_counts(d, h, 1)
    if res.big_ball is not None:
        return res.big_ball
    return res.counts.get(marked_cert(h, h.vertex_mask), 0)


def leaf_extensions(h: Graph) -> list[MarkedGraph]:
    """One pendant-vertex extension of ``h`` (marked at V(h)) per vertex orbit."""
    if h.n == 0 or not h.is_connected():
        raise ExtensionError("leaf extensions need a nonempty connected graph")
    out = [MarkedGraph(h.add_vertex(1 << orbit[0]), h.vertex_mask) for orbit in vertex_orbits(h)]
    out.sort(key=lambda mg: mg.cert())
    return out
