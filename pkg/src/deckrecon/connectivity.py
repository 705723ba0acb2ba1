"""Recognising connectedness from the deck.

A cheap first test settles graphs whose components are all smaller than a
card. Otherwise every potential small component shape ``h`` is probed
through the binomial moments of its copy degrees: a copy of a connected
``h`` with no outside neighbour is a component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from math import comb

from .canon import Cert, canonical_cert
from .counting import canonical_form_from_cert, copy_masks, induced_profile
from .deck import Deck, kelly_count
from .extensions import BigBallDetected, ExtensionError, component_count
from .graph import Graph, bits
from .moments import MomentError, MomentVector, degrees_from_cards, recover_multisets

DEFAULT_BUDGET = 20000


class FamilyTooLarge(ExtensionError):
    pass


class Verdict(str, Enum):
    CONNECTED = "Connected"
    DISCONNECTED = "Disconnected"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ConnectivityDecision:
    verdict: Verdict
    witness: str
    guaranteed: bool

    def __post_init__(self) -> None:
        if self.verdict is not Verdict.INDETERMINATE and not self.witness:
            raise ValueError("a definite verdict needs a witness")


@dataclass(frozen=True)
class AllSmall:
    """Every component has fewer than ell vertices; ``components`` maps shape to count."""

    components: tuple[tuple[Cert, int], ...]

    @property
    def count(self) -> int:
        return sum(c for _, c in self.components)


@dataclass(frozen=True)
class HasBig:
    witness: Cert  # a connected card


# ---------------------------------------------------------------------------
# dominating copies


def dominating_copies(hp: Graph, h: Graph) -> int:
    """n(H, H'): copies of ``h`` in ``hp`` adjacent to every vertex outside them."""
    full = hp.vertex_mask
    total = 0
    for a in copy_masks(hp, h):
        if all(hp.rows[v] & a for v in bits(full & ~a)):
            total += 1
    return total


@dataclass(frozen=True)
class NeighborhoodFamily:
    base: Graph
    j: int
    members: tuple[tuple[Cert, int], ...]  # (H', n(H, H')), all counts positive


def neighborhood_family(h: Graph, j: int, budget: int = DEFAULT_BUDGET) -> NeighborhoodFamily:
    """All graphs made of ``h`` plus ``j`` vertices each adjacent into ``h``."""
    k = h.n
    raw = (2**k - 1) ** j * 2 ** comb(j, 2)
    if raw > budget:
        raise FamilyTooLarge(f"{raw} raw extensions exceed the budget {budget}")
    pairs = list(combinations(range(j), 2))
    seen: dict[Cert, int] = {}
    for nbhds in product(range(1, 2**k), repeat=j):
        for inner in range(2 ** len(pairs)):
            g = h
            for nb in nbhds:
                g = g.add_vertex(nb)
            g = g.add_edges((k + a, k + b) for i, (a, b) in enumerate(pairs) if inner >> i & 1)
            c = canonical_cert(g)
            if c not in seen:
                seen[c] = dominating_copies(g, h)
    return NeighborhoodFamily(h, j, tuple(sorted(seen.items())))


def _dominating_from_cert(hc: Cert, hpc: Cert, _cache: dict = {}) -> int:
    key = (hc, hpc)
    if key not in _cache:
        _cache[key] = dominating_copies(canonical_form_from_cert(hpc), canonical_form_from_cert(hc))
    return _cache[key]


def small_component_spectrum(d: Deck, h: Graph, jmax: int) -> MomentVector:
    """``sum_i C(alpha_i, j)`` for j = 0..jmax, alpha_i the outside-neighbour
    count of the i-th copy of ``h``.

    The dominating extensions H' with ``n_{H'}(G) > 0`` all occur on cards,
    so summing ``n(H, H')`` over the induced (h+j)-profile of each card and
    averaging gives the same value as the sum over the abstract family.
    """
    if not h.is_connected():
        raise ExtensionError("spectrum needs a connected h")
    if h.n + jmax > d.ell:
        raise ExtensionError(f"h + jmax = {h.n + jmax} exceeds ell = {d.ell}")
    hc = canonical_cert(h)
    out = [kelly_count(d, h)]
    for j in range(1, jmax + 1):
        size = h.n + j
        total = 0
        for card, mult in d.classes():
            for c, k in induced_profile(card, size).items():
                total += mult * k * _dominating_from_cert(hc, c)
        q, r = divmod(total, comb(d.n - size, d.ell - size))
        if r:
            raise ExtensionError("spectrum average is not integral")
        out.append(q)
    return tuple(out)


def direct_spectrum(g: Graph, h: Graph, jmax: int) -> MomentVector:
    """Oracle: the same moments computed from copy degrees in ``g`` itself."""
    alphas = []
    for a in copy_masks(g, h):
        nb = 0
        for v in bits(a):
            nb |= g.rows[v]
        alphas.append((nb & ~a).bit_count())
    return tuple(sum(comb(x, j) for x in alphas) for j in range(jmax + 1))


# ---------------------------------------------------------------------------
# the decision procedure


def _card_component_shapes(d: Deck, max_order: int) -> list[Graph]:
    shapes: dict[Cert, Graph] = {}
    for card, _ in d.classes():
        for comp in card.component_masks():
            if comp.bit_count() <= max_order:
                sub = card.induced_mask(comp)
                shapes.setdefault(canonical_cert(sub), sub)
    return [shapes[c] for c in sorted(shapes, key=lambda c: (shapes[c].n, c))]


def largest_component_check(d: Deck) -> AllSmall | HasBig:
    """HasBig when some component has at least ``ell`` vertices, else the component multiset."""
    if d.ell == d.n:
        (card,) = d.cards
        g = canonical_form_from_cert(card)
        if g.is_connected():
            return HasBig(card)
        acc: dict[Cert, int] = {}
        for comp in g.component_masks():
            c = canonical_cert(g.induced_mask(comp))
            acc[c] = acc.get(c, 0) + 1
        return AllSmall(tuple(sorted(acc.items())))
    for card, _ in d.classes():
        if card.is_connected():
            return HasBig(canonical_cert(card))
    # every component is smaller than a card, so each one appears as a card component
    acc = {}
    for shape in _card_component_shapes(d, d.ell - 1):
        k = component_count(d, shape)
        assert not isinstance(k, BigBallDetected)
        if k:
            acc[canonical_cert(shape)] = k
    return AllSmall(tuple(sorted(acc.items())))


def _feasibility(n: int, eps: float) -> bool:
    lhs = math.sqrt(2 * (1 - eps) * eps * math.log(math.e / eps) + 2 * math.log(2) / n)
    return lhs <= 1 - 2 * eps


def guarantee(n: int, ell: int) -> bool:
    """Whether the moment argument provably decides connectedness at (n, ell).

    Uses ``eps = (n - ell) / n`` in the feasibility inequality. Below
    n = 39 nothing is claimed unless ``ell = n``.
    """
    if ell >= n:
        return True
    if n < 39 or ell < 1:
        return False
    eps = (n - ell) / n
    return eps < 0.5 and _feasibility(n, eps)


def is_connected_from_deck(d: Deck) -> ConnectivityDecision:
    n, ell = d.n, d.ell
    guaranteed = guarantee(n, ell) and (ell == n or ell >= math.ceil(9 * n / 10))
    first = largest_component_check(d)
    if isinstance(first, AllSmall):
        if first.count >= 2:
            return ConnectivityDecision(
                Verdict.DISCONNECTED, f"{first.count} components, all of order < {ell}", guaranteed
            )
        return ConnectivityDecision(Verdict.CONNECTED, "single component", guaranteed)
    if ell == n:
        return ConnectivityDecision(Verdict.CONNECTED, "the card is connected", guaranteed)

    # one component has >= ell vertices; any other has <= n - ell
    small = n - ell
    undecided: list[str] = []
    if small > ell - 1:
        undecided.append(f"components of order {ell}..{small} are invisible to the moments")
    for h in _card_component_shapes(d, min(small, ell - 1)):
        name = canonical_cert(h).decode("ascii")
        m = kelly_count(d, h)
        if not m:
            continue
        if h.n == 1 and ell == n - 1:
            sols = [list(degrees_from_cards(d))]
        else:
            try:
                s = small_component_spectrum(d, h, ell - h.n)
                sols = [list(x) for x in recover_multisets(s, m, n - h.n)]
            except (ExtensionError, MomentError) as exc:
                undecided.append(f"{name}: {exc}")
                continue
        zeros = {0 in x for x in sols}
        if zeros == {True}:
            return ConnectivityDecision(
                Verdict.DISCONNECTED, f"a component isomorphic to {name}", guaranteed
            )
        if zeros == {False}:
            continue
        # moments leave it open; the direct 1-ball count may still settle it
        k = component_count(d, h)
        if isinstance(k, BigBallDetected):
            undecided.append(f"{name}: {len(sols)} degree multisets fit the moments")
        elif k:
            return ConnectivityDecision(
                Verdict.DISCONNECTED, f"a component isomorphic to {name}", guaranteed
            )
    if undecided:
        return ConnectivityDecision(Verdict.INDETERMINATE, "; ".join(undecided), guaranteed)
    return ConnectivityDecision(
        Verdict.CONNECTED, f"a component of order >= {ell} and no component of order <= {small}",
        guaranteed,
    )
