"""Tree recognition from the deck, parameters, grafting, and the search oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from math import comb

from . import graph6
from .canon import Cert, canonical_cert, split_marked_cert
from .counting import SUBGRAPH, count_copies
from .deck import Deck, DeckError, compute_deck, kelly_count
from .extensions import ball_extension_counts
from .generators import all_graphs, all_trees
from .graph import Graph, path, star
from .structure import RootedTree, longest_path_order


class TreeError(ValueError):
    pass


class NotATreeError(TreeError):
    pass


class SearchBudgetError(TreeError):
    pass


class TreeVerdict(str, Enum):
    TREE = "Tree"
    NOT_TREE = "NotTree"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Recognition:
    verdict: TreeVerdict
    reason: str
    guaranteed: bool


def recognition_guaranteed(n: int, ell: int) -> bool:
    return 3 * ell >= 2 * n + 4


def recognize_tree_from_deck(d: Deck) -> Recognition:
    n, ell = d.n, d.ell
    if ell < 3:
        raise DeckError("tree recognition needs ell >= 3")
    g = recognition_guaranteed(n, ell)
    e = kelly_count(d, path(2))
    if e != n - 1:
        return Recognition(TreeVerdict.NOT_TREE, f"{e} edges, a tree has {n - 1}", g)
    cards = list(d.classes())
    for card, _ in cards:
        if not card.is_forest():
            return Recognition(TreeVerdict.NOT_TREE, "a card contains a cycle", g)
    if ell == n:
        # the single card is the graph; it is acyclic with n - 1 edges
        return Recognition(TreeVerdict.TREE, "the card is a tree", g)
    if not any(card.is_connected() for card, _ in cards):
        return Recognition(TreeVerdict.NOT_TREE, "every component is smaller than a card", g)
    # a component of order <= n - ell has a vertex of eccentricity <= (n - ell) // 2
    dr = math.floor(ell - n / 2 - 1)
    if dr < 1 or (n - ell) // 2 > dr - 1:
        return Recognition(TreeVerdict.INDETERMINATE, f"ball radius {dr} is too small", g)
    res = ball_extension_counts(d, Graph.empty(1), dr)
    if res.big_ball is not None:
        return Recognition(TreeVerdict.TREE, f"a {dr}-ball has at least {ell} vertices", g)
    for cert in res.counts:
        ball, marked = split_marked_cert(cert)
        ecc = max(ball.distances_from(marked).values())
        if ecc != dr:
            return Recognition(
                TreeVerdict.NOT_TREE, f"a {dr}-ball of radius {ecc} is a small component", g
            )
    return Recognition(TreeVerdict.TREE, f"every {dr}-ball has radius {dr}", g)


def longest_path_order_from_deck(d: Deck) -> tuple[int, bool]:
    """(k, saturated): the largest p with a P_p on some card; saturated when p = ell."""
    best = 0
    for card, _ in d.classes():
        if card.is_forest():
            best = max(best, longest_path_order(card))
        else:
            p = best + 1
            while p <= d.ell and count_copies(card, path(p)):
                p += 1
            best = max(best, p - 1)
    return best, best == d.ell


@dataclass(frozen=True)
class ParamContext:
    n: int
    ell: int
    r: int
    k: int
    saturated: bool
    d_recog: int

    @classmethod
    def from_deck(cls, d: Deck) -> "ParamContext":
        k, sat = longest_path_order_from_deck(d)
        return cls(d.n, d.ell, d.n - d.ell, k, sat, math.floor(d.ell - d.n / 2 - 1))

    def high_diameter_applies(self) -> bool:
        # with saturation the true k is at least ell
        return self.k > 4 * math.sqrt(self.ell) + 2 * self.r

    def low_diameter_applies(self) -> bool:
        if self.saturated:
            return False
        if self.k % 2:
            return 3 * self.r < self.n - 3 * self.k + 1
        return 3 * self.r < self.n - 3 * self.k - 1


def theorem_threshold(n: int) -> float:
    return 8 * n / 9 + 4 / 9 * math.sqrt(8 * n + 5) + 1


def dispatch_covers(n: int, ell: int, k: int) -> bool:
    """Whether one of the two reconstruction routes applies to (n, ell, k)."""
    r = n - ell
    high = k > 4 * math.sqrt(ell) + 2 * r
    low = 3 * r < n - 3 * k + 1 if k % 2 else 3 * r < n - 3 * k - 1
    return high or low


def graft(t1: RootedTree, t2: RootedTree) -> Graph:
    """Disjoint union of the two trees plus an edge between their roots."""
    g = t1.tree.disjoint_union(t2.tree)
    return g.add_edges([(t1.root, t1.tree.n + t2.root)])


# ---------------------------------------------------------------------------
# exhaustive search oracle


class GraphClass(str, Enum):
    TREES = "Trees"
    ALL_GRAPHS = "AllGraphs"


TREE_SEARCH_MAX_N = 16
GRAPH_SEARCH_MAX_N = 8
INDEX_WORK_LIMIT = 4_000_000


def _members(cls: GraphClass, n: int) -> tuple[Graph, ...]:
    if cls is GraphClass.TREES:
        if n > TREE_SEARCH_MAX_N:
            raise SearchBudgetError(f"tree search is limited to n <= {TREE_SEARCH_MAX_N}")
        return all_trees(n)
    if n > GRAPH_SEARCH_MAX_N:
        raise SearchBudgetError(f"graph search is limited to n <= {GRAPH_SEARCH_MAX_N}")
    return all_graphs(n)


def _deck_key(d: Deck) -> frozenset:
    return frozenset(d.cards.items())


@lru_cache(maxsize=32)
def deck_index(cls: GraphClass, n: int, ell: int) -> dict[frozenset, tuple[Graph, ...]]:
    """Every member of the class on n vertices, grouped by its ell-deck."""
    idx: dict[frozenset, list[Graph]] = {}
    for g in _members(cls, n):
        idx.setdefault(_deck_key(compute_deck(g, ell)), []).append(g)
    return {key: tuple(v) for key, v in idx.items()}


def _invariants_from_deck(d: Deck) -> tuple[int, ...]:
    inv = [kelly_count(d, path(p)) for p in range(2, d.ell + 1)]
    inv += [kelly_count(d, star(j), SUBGRAPH) for j in range(2, d.ell)]
    return tuple(inv)


def _invariants_of(g: Graph, ell: int) -> tuple[int, ...]:
    inv = [count_copies(g, path(p)) for p in range(2, ell + 1)]
    inv += [count_copies(g, star(j), SUBGRAPH) for j in range(2, ell)]
    return tuple(inv)


def reconstruct_by_search(d: Deck, cls: GraphClass = GraphClass.TREES) -> list[Graph]:
    """All non-isomorphic members of the class whose ell-deck equals ``d``."""
    cls = GraphClass(cls)
    members = _members(cls, d.n)
    if len(members) * comb(d.n, d.ell) <= INDEX_WORK_LIMIT:
        return list(deck_index(cls, d.n, d.ell).get(_deck_key(d), ()))
    # prefilter by path and star counts, which the deck determines
    want = _invariants_from_deck(d)
    out = []
    for g in members:
        if _invariants_of(g, d.ell) == want and compute_deck(g, d.ell) == d:
            out.append(g)
    return out


@dataclass(frozen=True)
class PairSearchResult:
    n: int
    ell: int
    graph_class: str
    pairs: tuple[tuple[str, str], ...]  # graph6 of each pair
    exhaustive: bool = True
    classes_checked: int = 0


def _deck_key_of(g6: str, ell: int) -> tuple:
    d = compute_deck(graph6.decode(g6), ell)
    return tuple(sorted(d.cards.items()))


def search_pairs(
    n: int,
    ell: int,
    cls: GraphClass = GraphClass.TREES,
    threads: int = 1,
    budget: int | None = None,
) -> PairSearchResult:
    """Every pair of non-isomorphic class members on n vertices with equal ell-decks.

    ``budget`` caps the number of members whose decks are computed; when it
    runs out the result holds the pairs among those seen, marked non-exhaustive.
    Decks are bucketed by a hash of their sorted card list; dictionary lookup
    then compares colliding keys exactly.
    """
    cls = GraphClass(cls)
    if threads <= 1 and budget is None:
        groups = list(deck_index(cls, n, ell).values())
        exhaustive = True
    else:
        members = _members(cls, n)
        exhaustive = budget is None or budget >= len(members)
        if not exhaustive:
            members = members[:budget]
        codes = [canonical_cert(g).decode("ascii") for g in members]
        if threads > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=threads) as pool:
                keys = list(pool.map(_deck_key_of, codes, [ell] * len(codes), chunksize=16))
        else:
            keys = [_deck_key_of(c, ell) for c in codes]
        buckets: dict[tuple, list[Graph]] = {}
        for g, key in zip(members, keys):
            buckets.setdefault(key, []).append(g)
        groups = list(buckets.values())
    pairs = []
    for group in groups:
        certs = sorted(canonical_cert(g).decode("ascii") for g in group)
        pairs.extend(combinations(certs, 2))
    checked = sum(map(len, groups))
    return PairSearchResult(n, ell, cls.value, tuple(sorted(pairs)), exhaustive, checked)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class AmbiguitySet:
    trees: tuple[Graph, ...]


class Method(str, Enum):
    HIGH_DIAMETER = "HighDiameter"
    LOW_ALL_SMALL = "LowDiameterAllSmall"
    LOW_HEAVY = "LowDiameterHeavy"
    SEARCH = "ExhaustiveSearch"


@dataclass(frozen=True)
class BranchInventory:
    """Branches at a reference vertex: ``shapes`` maps rooted certificate to multiplicity."""

    label: str
    shapes: tuple[tuple[Cert, int], ...] = ()

    @property
    def order(self) -> int:
        total = 0
        for cert, mult in self.shapes:
            g, _ = split_marked_cert(cert)
            total += g.n * mult
        return total


@dataclass(frozen=True)
class ReconstructionReport:
    result: Graph | AmbiguitySet
    method: Method
    guaranteed: bool
    notes: tuple[str, ...] = field(default=())
    inventory: BranchInventory | None = None

    def __post_init__(self) -> None:
        if self.guaranteed and not isinstance(self.result, Graph):
            raise TreeError("a guaranteed report must hold a single tree")


@dataclass(frozen=True)
class Fail:
    reason: str
