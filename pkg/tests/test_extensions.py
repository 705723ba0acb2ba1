from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deckrecon.canon import canonical_cert, marked_cert, split_marked_cert, vertex_orbits
from deckrecon.counting import count_copies
from deckrecon.deck import DeckError, compute_deck
from deckrecon.extensions import (
    BigBallDetected,
    ExtensionError,
    FamilyBudgetError,
    FamilySpec,
    ball_extension_counts,
    component_count,
    direct_ball_counts,
    leaf_extensions,
    maximal_count,
)
from deckrecon.generators import all_graphs, figure1_left
from deckrecon.graph import Graph, cycle, disjoint_union, path, star

from conftest import graphs, to_nx

K1, K2 = Graph.empty(1), path(2)


def family_subgraphs(g: Graph, fam: FamilySpec) -> list[tuple[frozenset, int]]:
    """(edge set, member index) for every F-subgraph, members without isolated vertices."""
    certs = {c: i for i, c in enumerate(fam.certs)}
    edges = g.edges()
    out = []
    for k in range(1, max(m.num_edges() for m in fam.members) + 1):
        for sub in combinations(edges, k):
            verts = sorted({v for e in sub for v in e})
            idx = {v: i for i, v in enumerate(verts)}
            h = Graph.from_edges(len(verts), [(idx[u], idx[v]) for u, v in sub])
            c = canonical_cert(h)
            if c in certs:
                out.append((frozenset(sub), certs[c]))
    return out


def brute_maximal(g: Graph, f: Graph, fam: FamilySpec) -> tuple[int, bool]:
    subs = family_subgraphs(g, fam)
    maximal = [s for s, _ in subs if not any(s < t for t, _ in subs)]
    unique = all(sum(1 for m in maximal if s <= m) == 1 for s, _ in subs)
    target = fam.position(f)
    return sum(1 for s, i in subs if i == target and s in maximal), unique


def test_maximal_examples():
    fam = FamilySpec([path(2), path(3)])
    d = compute_deck(path(3), 3)
    assert maximal_count(d, path(2), fam) == 0
    assert maximal_count(d, path(3), fam) == 1
    tri_free = path(5)
    assert maximal_count(compute_deck(tri_free, 3), K2, FamilySpec([K2])) == 4
    paths = FamilySpec([path(2), path(3), path(4)])
    assert maximal_count(compute_deck(star(3), 4), path(3), paths) == 3


def test_family_member_too_large():
    with pytest.raises(ExtensionError):
        maximal_count(compute_deck(path(5), 3), path(2), FamilySpec([path(2), path(4)]))


@given(graphs(min_n=4, max_n=7))
def test_maximal_against_brute_force(g):
    fam = FamilySpec([path(2), path(3), star(3)])
    for f in fam.members:
        want, unique = brute_maximal(g, f, fam)
        if not unique:
            continue
        d = compute_deck(g, 4)
        assert maximal_count(d, f, fam) == want
        assert maximal_count(d, f, fam, method="chains") == want


def test_ball_examples():
    r = ball_extension_counts(compute_deck(path(5), 4), K1, 1)
    assert r.counts == {marked_cert(path(2), 0b01): 2, marked_cert(path(3), 0b010): 3}
    assert ball_extension_counts(compute_deck(star(6), 5), K1, 1).detected
    g = disjoint_union(K2, K2, K1)
    assert ball_extension_counts(compute_deck(g, 4), K2, 1).counts == {marked_cert(K2, 0b11): 2}


def test_ball_guards():
    with pytest.raises(ExtensionError):
        ball_extension_counts(compute_deck(path(6), 5), path(5), 1)
    with pytest.raises(DeckError):
        ball_extension_counts(compute_deck(path(4), 4), K1, 1)
    with pytest.raises(FamilyBudgetError):
        ball_extension_counts(compute_deck(figure1_left(), 9), K1, 2, budget=1)


@given(graphs(min_n=5, max_n=9), st.sampled_from([K1, K2, path(3)]), st.integers(1, 2), st.integers(0, 3))
def test_ball_counts_match_direct(g, h, dd, drop):
    ell = max(h.n + 1, g.n - 1 - drop)
    if ell >= g.n:
        return
    truth, biggest = direct_ball_counts(g, h, dd)
    res = ball_extension_counts(compute_deck(g, ell), h, dd)
    assert res.detected == (biggest >= ell)
    if not res.detected:
        assert dict(res.counts) == truth
        assert sum(res.counts.values()) == count_copies(g, h)


def test_component_examples():
    assert component_count(compute_deck(disjoint_union(K2, K2, K1), 4), K2) == 2
    assert component_count(compute_deck(disjoint_union(cycle(6), path(4)), 9), path(4)) == 1
    with pytest.raises(ExtensionError):
        component_count(compute_deck(path(6), 5), path(6))
    assert isinstance(component_count(compute_deck(star(6), 4), K1), BigBallDetected)


@given(graphs(min_n=5, max_n=9))
def test_component_count_matches_networkx(g):
    x = to_nx(g)
    ell = g.n - 1
    for h in all_graphs(3) + all_graphs(2):
        if not h.is_connected():
            continue
        k = component_count(compute_deck(g, ell), h)
        if isinstance(k, BigBallDetected):
            continue
        want = sum(1 for c in nx.connected_components(x) if nx.is_isomorphic(x.subgraph(c), to_nx(h)))
        assert k == want


def test_leaf_extensions():
    assert len(leaf_extensions(K1)) == 1
    assert len(leaf_extensions(path(3))) == 2
    f = figure1_left()
    ext = leaf_extensions(f)
    assert len(ext) == len(vertex_orbits(f))
    assert len({e.cert() for e in ext}) == len(ext)
    with pytest.raises(ExtensionError):
        leaf_extensions(Graph.empty(2))
