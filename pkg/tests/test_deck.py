from itertools import combinations
from math import comb

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deckrecon.canon import canonical_cert
from deckrecon.counting import INDUCED, SUBGRAPH, count_copies
from deckrecon.deck import Deck, DeckError, DivisibilityError, compute_deck, deck_diff, kelly_count, subdeck
from deckrecon.generators import all_graphs, figure1_left, figure1_right, sw_pair_right
from deckrecon.graph import Graph, path, star

from conftest import graphs, relabel, to_nx, trees


def oracle_deck(g: Graph, ell: int) -> dict:
    """Cards grouped with networkx isomorphism, independent of certificates."""
    reps: list[tuple[nx.Graph, int]] = []
    x = to_nx(g)
    for sub in combinations(range(g.n), ell):
        card = x.subgraph(sub)
        for i, (rep, m) in enumerate(reps):
            if nx.is_isomorphic(rep, card):
                reps[i] = (rep, m + 1)
                break
        else:
            reps.append((card, 1))
    return sorted(m for _, m in reps)


def test_deck_of_p3():
    d = compute_deck(path(3), 2)
    assert d.cards == {canonical_cert(path(2)): 2, canonical_cert(Graph.empty(2)): 1}


def test_full_deck_and_total():
    g = figure1_left()
    assert compute_deck(g, 13).cards == {canonical_cert(g): 1}
    assert compute_deck(g, 7).total() == 1716


@pytest.mark.parametrize("ell", [0, 5])
def test_deck_order_range(ell):
    with pytest.raises(DeckError):
        compute_deck(path(4), ell)


@given(graphs(min_n=2, max_n=7), st.integers(1, 7))
def test_deck_matches_oracle(g, ell):
    ell = 1 + ell % g.n
    d = compute_deck(g, ell)
    assert sorted(d.cards.values()) == oracle_deck(g, ell)
    assert d.total() == comb(g.n, ell)


@given(trees(min_n=3, max_n=10), st.integers(1, 10))
def test_forest_deck_matches_oracle(t, ell):
    ell = 1 + ell % t.n
    assert sorted(compute_deck(t, ell).cards.values()) == oracle_deck(t, ell)


@given(graphs(min_n=2, max_n=8), st.randoms())
def test_isomorphic_graphs_share_decks(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    for ell in range(1, g.n + 1):
        assert compute_deck(relabel(g, perm), ell) == compute_deck(g, ell)


def test_kelly_examples():
    assert kelly_count(compute_deck(path(3), 2), path(2)) == 2
    assert kelly_count(compute_deck(path(4), 3), path(2), SUBGRAPH) == 3
    for ell in range(1, 6):
        assert kelly_count(compute_deck(star(4), ell), Graph.empty(1)) == 5
    with pytest.raises(DeckError):
        kelly_count(compute_deck(path(4), 2), path(3))


@given(graphs(min_n=3, max_n=9), st.integers(0, 9), st.sampled_from(all_graphs(3) + all_graphs(2)))
def test_kelly_lemma(g, ell, h):
    ell = 3 + ell % (g.n - 2)
    d = compute_deck(g, ell)
    for mode in (INDUCED, SUBGRAPH):
        assert kelly_count(d, h, mode) == count_copies(g, h, mode)


def test_corrupted_deck_fails_division():
    d = compute_deck(path(5), 4)
    cards = dict(d.cards)
    cards[min(cards)] += 1
    bad = Deck(5, 4, cards)
    failures = 0
    for h in all_graphs(2) + all_graphs(3):
        try:
            kelly_count(bad, h)
        except DivisibilityError:
            failures += 1
    assert failures


def test_subdeck_examples():
    d = compute_deck(path(5), 4)
    assert subdeck(d, 4) == d
    assert subdeck(d, 2) == compute_deck(path(5), 2)
    a, b = compute_deck(figure1_left(), 7), compute_deck(figure1_right(), 7)
    assert subdeck(a, 2) == subdeck(b, 2)


@given(graphs(min_n=3, max_n=8), st.data())
def test_subdeck_composition(g, data):
    ell = data.draw(st.integers(2, g.n))
    a = data.draw(st.integers(1, ell))
    b = data.draw(st.integers(1, a))
    d = compute_deck(g, ell)
    assert subdeck(d, a) == compute_deck(g, a)
    assert subdeck(subdeck(d, a), b) == subdeck(d, b)


def test_deck_diff_examples():
    assert not deck_diff(compute_deck(figure1_left(), 7), compute_deck(figure1_right(), 7))
    assert deck_diff(compute_deck(figure1_left(), 8), compute_deck(figure1_right(), 8))
    assert not deck_diff(compute_deck(path(10), 5), compute_deck(sw_pair_right(10), 5))
    with pytest.raises(DeckError):
        deck_diff(compute_deck(path(5), 3), compute_deck(path(5), 4))


@given(graphs(min_n=2, max_n=9), st.integers(1, 9))
def test_deck_text_round_trip(g, ell):
    ell = 1 + ell % g.n
    d = compute_deck(g, ell)
    text = d.to_text()
    assert Deck.from_text(text) == d
    assert Deck.from_text(text).to_text() == text
    body = text.splitlines()[1:]
    assert body == sorted(body, key=lambda ln: ln.split()[1])


@pytest.mark.parametrize(
    "text",
    ["", "#deck n=3\n", "#deck n=3 l=2\n2 A_\n", "#deck n=3 l=2\n3 B?\n", "#deck n=3 l=2\nx A_\n"],
)
def test_deck_text_rejects(text):
    with pytest.raises((DeckError, ValueError)):
        Deck.from_text(text)
