"""The l-deck of a graph: multiset of its l-vertex induced subgraphs.

Cards are grouped by canonical certificate. Every count derived from a deck
is computed once per card class and weighted by multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator, Mapping

from . import graph6
from .canon import Cert, canonical_cert, forest_key
from .counting import INDUCED, Mode, count_copies, induced_profile
from .graph import Graph


class DeckError(ValueError):
    pass


class DivisibilityError(DeckError):
    """A Kelly-type average did not divide exactly: the deck is not a deck."""


@dataclass(frozen=True)
class Deck:
    n: int
    ell: int
    cards: Mapping[Cert, int] = field(hash=False)

    def __post_init__(self) -> None:
        if not 1 <= self.ell <= self.n:
            raise DeckError(f"card order {self.ell} outside 1..{self.n}")

    def total(self) -> int:
        return sum(self.cards.values())

    def classes(self) -> Iterator[tuple[Graph, int]]:
        """Canonical representative and multiplicity of every card class."""
        for cert in sorted(self.cards):
            yield graph6.decode(cert.decode("ascii")), self.cards[cert]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Deck):
            return NotImplemented
        return self.n == other.n and self.ell == other.ell and dict(self.cards) == dict(other.cards)

    def __hash__(self) -> int:
        return hash((self.n, self.ell, frozenset(self.cards.items())))

    # text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"#deck n={self.n} l={self.ell}"]
        for cert in sorted(self.cards, key=lambda c: c.decode("ascii")):
            lines.append(f"{self.cards[cert]} {cert.decode('ascii')}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Deck":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#deck "):
            raise DeckError("missing '#deck n=<n> l=<l>' header")
        try:
            fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
            n, ell = int(fields["n"]), int(fields["l"])
        except (KeyError, ValueError) as exc:
            raise DeckError(f"bad deck header {lines[0]!r}") from exc
        cards: dict[Cert, int] = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise DeckError(f"bad deck line {ln!r}")
            mult = int(parts[0])
            g = graph6.decode(parts[1])
            if g.n != ell:
                raise DeckError(f"card {parts[1]} has {g.n} vertices, expected {ell}")
            cert = canonical_cert(g)
            cards[cert] = cards.get(cert, 0) + mult
        deck = cls(n, ell, cards)
        if deck.total() != comb(n, ell):
            raise DeckError(f"multiplicities sum to {deck.total()}, expected C({n},{ell})")
        return deck


def _forest_cards(g: Graph, ell: int) -> dict[Cert, int]:
    rows = g.rows
    by_key: dict[str, int] = {}
    witness: dict[str, tuple[int, ...]] = {}
    for sub in combinations(range(g.n), ell):
        mask = 0
        for v in sub:
            mask |= 1 << v
        key = forest_key(rows, mask)
        if key in by_key:
            by_key[key] += 1
        else:
            by_key[key] = 1
            witness[key] = sub
    return {canonical_cert(g.induced(witness[k])): m for k, m in by_key.items()}


def compute_deck(g: Graph, ell: int) -> Deck:
    """All C(n, ell) induced ell-vertex subgraphs of ``g``, grouped by class."""
    if not 1 <= ell <= g.n:
        raise DeckError(f"card order {ell} outside 1..{g.n}")
    if g.is_forest():
        cards = _forest_cards(g, ell)
    elif ell == g.n:
        cards = {canonical_cert(g): 1}
    else:
        cards = dict(induced_profile(g, ell))
    return Deck(g.n, ell, cards)


def kelly_count(d: Deck, h: Graph, mode: Mode = INDUCED) -> int:
    """n_H(G) (or the subgraph count) recovered from the deck alone."""
    k = h.n
    if k > d.ell:
        raise DeckError(f"pattern on {k} vertices does not fit on {d.ell}-cards")
    total = 0
    for card, mult in d.classes():
        total += mult * count_copies(card, h, mode)
    return _exact_div(total, comb(d.n - k, d.ell - k))


def _exact_div(total: int, by: int) -> int:
    q, r = divmod(total, by)
    if r:
        raise DivisibilityError(f"{total} is not divisible by {by}")
    return q


def subdeck(d: Deck, ell2: int) -> Deck:
    """The ell2-deck implied by an ell-deck (Kelly averaging per card class)."""
    if not 1 <= ell2 <= d.ell:
        raise DeckError(f"sub-card order {ell2} outside 1..{d.ell}")
    if ell2 == d.ell:
        return Deck(d.n, d.ell, dict(d.cards))
    acc: dict[Cert, int] = {}
    for card, mult in d.classes():
        for c, m in induced_profile(card, ell2).items():
            acc[c] = acc.get(c, 0) + mult * m
    div = comb(d.n - ell2, d.ell - ell2)
    return Deck(d.n, ell2, {c: _exact_div(t, div) for c, t in acc.items()})


@dataclass(frozen=True)
class DeckDiff:
    """Card classes whose multiplicities differ: cert -> (left, right)."""

    differences: dict[Cert, tuple[int, int]]

    def __bool__(self) -> bool:
        return bool(self.differences)

    def lines(self) -> list[str]:
        return [
            f"{c.decode('ascii')} {a} {b}"
            for c, (a, b) in sorted(self.differences.items())
        ]


def deck_diff(d1: Deck, d2: Deck) -> DeckDiff:
    if (d1.n, d1.ell) != (d2.n, d2.ell):
        raise DeckError(f"decks differ in shape: (n={d1.n}, l={d1.ell}) vs (n={d2.n}, l={d2.ell})")
    out = {}
    for c in set(d1.cards) | set(d2.cards):
        a, b = d1.cards.get(c, 0), d2.cards.get(c, 0)
        if a != b:
            out[c] = (a, b)
    return DeckDiff(out)
