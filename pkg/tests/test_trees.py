import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deckrecon.canon import canonical_cert, is_isomorphic, marked_cert, split_marked_cert
from deckrecon.counting import count_copies
from deckrecon.deck import compute_deck
from deckrecon.generators import (
    all_trees,
    caterpillar,
    double_broom,
    figure1_left,
    figure1_right,
    random_caterpillar,
    random_tree,
    spider,
)
from deckrecon.graph import Graph, cycle, disjoint_union, path, star
from deckrecon.high_diameter import high_diam_reconstruct
from deckrecon.low_diameter import _subdivide_centre, low_diam_reconstruct
from deckrecon.pipeline import reconstruct_tree
from deckrecon.structure import RootedTree, tree_centre
from deckrecon.trees import (
    AmbiguitySet,
    Fail,
    GraphClass,
    Method,
    NotATreeError,
    ParamContext,
    ReconstructionReport,
    TreeError,
    TreeVerdict,
    dispatch_covers,
    graft,
    longest_path_order_from_deck,
    reconstruct_by_search,
    recognize_tree_from_deck,
    search_pairs,
    theorem_threshold,
)


def heavy_tree() -> Graph:
    """Centre with a 14-vertex star branch (rooted at the star centre), a P2 branch and two leaves."""
    edges = [(0, 1)] + [(1, 2 + i) for i in range(13)] + [(0, 15), (15, 16), (0, 17), (0, 18)]
    return Graph.from_edges(19, edges)


# recognition ---------------------------------------------------------------


def test_recognition_examples():
    assert recognize_tree_from_deck(compute_deck(cycle(5), 4)).verdict is TreeVerdict.NOT_TREE
    assert recognize_tree_from_deck(compute_deck(path(9), 8)).verdict is TreeVerdict.TREE
    g = disjoint_union(cycle(6), path(4))
    r = recognize_tree_from_deck(compute_deck(g, 8))
    assert r.verdict is TreeVerdict.NOT_TREE and "cycle" in r.reason


def _perturbed(seed: int) -> Graph:
    rng = random.Random(seed)
    n = rng.randrange(9, 15)
    t = random_tree(n, seed)
    edges = t.edges()
    if rng.randrange(2):
        edges.pop(rng.randrange(len(edges)))
        while True:
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and (min(u, v), max(u, v)) not in edges:
                edges.append((u, v))
                break
    return Graph.from_edges(n, edges)


@pytest.mark.parametrize("seed", range(40))
def test_recognition_sampled(seed):
    g = _perturbed(seed)
    n = g.n
    for ell in range(math.ceil((2 * n + 4) / 3), n):
        r = recognize_tree_from_deck(compute_deck(g, ell))
        assert r.guaranteed
        assert r.verdict is not TreeVerdict.INDETERMINATE
        assert (r.verdict is TreeVerdict.TREE) == g.is_tree()


def test_longest_path_examples():
    assert longest_path_order_from_deck(compute_deck(figure1_left(), 7)) == (7, True)
    assert longest_path_order_from_deck(compute_deck(figure1_left(), 12)) == (9, False)
    assert longest_path_order_from_deck(compute_deck(star(9), 9))[0] == 3


def test_param_context():
    ctx = ParamContext.from_deck(compute_deck(figure1_left(), 12))
    assert (ctx.n, ctx.ell, ctx.r, ctx.k, ctx.d_recog) == (13, 12, 1, 9, 4)
    assert not ctx.high_diameter_applies() and not ctx.low_diameter_applies()


def test_graft():
    k1 = RootedTree(Graph.empty(1), 0)
    assert is_isomorphic(graft(k1, k1), path(2))
    p2 = RootedTree(path(2), 0)
    assert is_isomorphic(graft(p2, k1), path(3))
    a, b = RootedTree(star(3), 1), RootedTree(path(4), 1)
    assert canonical_cert(graft(a, b)) == canonical_cert(graft(b, a))
    assert graft(a, b).n == 8


# bridge gluing -------------------------------------------------------------


def test_high_diameter_examples():
    cat = caterpillar(36, [3, 10, 20, 30])
    rep = high_diam_reconstruct(compute_deck(cat, 39))
    assert rep.method is Method.HIGH_DIAMETER and is_isomorphic(rep.result, cat)
    rep = high_diam_reconstruct(compute_deck(path(50), 49))
    assert is_isomorphic(rep.result, path(50))
    out = high_diam_reconstruct(compute_deck(figure1_left(), 12))
    assert isinstance(out, Fail) and out.reason.startswith("NotApplicable")


# branch counting -----------------------------------------------------------


@pytest.mark.parametrize(
    "tree,ell,method",
    [
        (spider([2] * 10), 20, Method.LOW_ALL_SMALL),
        (double_broom(4, 12, 12), 26, Method.LOW_ALL_SMALL),
        (heavy_tree(), 18, Method.LOW_HEAVY),
        (double_broom(3, 2, 16), 20, Method.LOW_HEAVY),
    ],
)
def test_low_diameter_examples(tree, ell, method):
    d = compute_deck(tree, ell)
    ctx = ParamContext.from_deck(d)
    assert ctx.low_diameter_applies()
    rep = low_diam_reconstruct(d, ctx)
    assert rep.method is method
    assert is_isomorphic(rep.result, tree)
    if method is Method.LOW_HEAVY:
        other = low_diam_reconstruct(d, ctx, tie="greatest")
        assert is_isomorphic(other.result, tree)


def test_low_diameter_not_applicable():
    out = low_diam_reconstruct(compute_deck(figure1_left(), 12))
    assert isinstance(out, Fail) and out.reason.startswith("NotApplicable")


def test_branch_inventory_sums_to_centre():
    s = spider([2] * 10 + [1] * 3)
    t = Graph.from_edges(s.n + 3, s.edges() + [(0, s.n), (s.n, s.n + 1), (s.n, s.n + 2)])
    d = compute_deck(t, t.n - 1)
    rep = low_diam_reconstruct(d)
    assert rep.method is Method.LOW_ALL_SMALL
    inv = rep.inventory
    (c,) = tree_centre(t)
    assert sum(m for _, m in inv.shapes) == t.degree(c)
    assert inv.order + 1 == t.n


def test_even_subdivision_coherence():
    t = double_broom(4, 12, 12)
    c1, c2 = tree_centre(t)
    edges = [e for e in t.edges() if set(e) != {c1, c2}] + [(c1, t.n), (c2, t.n)]
    tp = Graph.from_edges(t.n + 1, edges)
    for card, _ in compute_deck(t, 26).classes():
        if not count_copies(card, path(6)):
            continue
        sub = _subdivide_centre(card, 6)
        assert count_copies(tp, sub) > 0


@st.composite
def low_trees(draw):
    base = draw(st.integers(4, 8))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, base)]
    nxt = base
    for _ in range(draw(st.integers(1, 3))):
        at = draw(st.integers(0, base - 1))
        for _ in range(draw(st.integers(1, 6))):
            edges.append((at, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges), draw(st.integers(1, 2))


@settings(max_examples=40)
@given(low_trees())
def test_low_diameter_property(arg):
    t, r = arg
    d = compute_deck(t, t.n - r)
    ctx = ParamContext.from_deck(d)
    if not ctx.low_diameter_applies():
        return
    rep = low_diam_reconstruct(d, ctx)
    assert is_isomorphic(rep.result, t)


# dispatch ------------------------------------------------------------------


def test_dispatch_arithmetic_small_full():
    for n in range(1, 400):
        t = theorem_threshold(n)
        for ell in range(1, n + 1):
            if ell > t:
                assert all(dispatch_covers(n, ell, k) for k in range(1, n + 1))


def test_dispatch_arithmetic_grid():
    # high holds above a cut in k, low below one per parity: the largest
    # failing k of each parity is the binding case
    for n in range(1, 10_001):
        t = theorem_threshold(n)
        for ell in range(max(1, math.floor(t) + 1), n + 1):
            cut = math.floor(4 * math.sqrt(ell) + 2 * (n - ell))
            for k in (cut, cut - 1):
                if 1 <= k <= n:
                    assert dispatch_covers(n, ell, k), (n, ell, k)


def test_threshold_needs_large_n():
    assert min(n for n in range(1, 1000) if theorem_threshold(n) < n - 1) > 100


def test_reconstruct_tree_examples():
    rep = reconstruct_tree(compute_deck(figure1_left(), 12))
    assert rep.method is Method.SEARCH and not rep.guaranteed
    assert is_isomorphic(rep.result, figure1_left())
    rep = reconstruct_tree(compute_deck(path(50), 49))
    assert rep.method is Method.HIGH_DIAMETER and is_isomorphic(rep.result, path(50))
    with pytest.raises(NotATreeError):
        reconstruct_tree(compute_deck(cycle(6), 5))


def test_reconstruct_tree_ambiguous():
    rep = reconstruct_tree(compute_deck(figure1_left(), 7))
    assert isinstance(rep.result, AmbiguitySet)
    certs = {canonical_cert(t) for t in rep.result.trees}
    assert {canonical_cert(figure1_left()), canonical_cert(figure1_right())} <= certs


def test_guaranteed_report_needs_a_tree():
    with pytest.raises(TreeError):
        ReconstructionReport(AmbiguitySet((path(3),)), Method.HIGH_DIAMETER, True)


# search --------------------------------------------------------------------


def test_search_single_tree():
    for seed in range(5):
        t = random_tree(12, seed)
        found = reconstruct_by_search(compute_deck(t, 7))
        assert len(found) == 1 and is_isomorphic(found[0], t)


def test_search_all_graphs_small():
    g = cycle(6)
    found = reconstruct_by_search(compute_deck(g, 5), GraphClass.ALL_GRAPHS)
    assert [canonical_cert(x) for x in found] == [canonical_cert(g)]


def test_search_pairs_small():
    out = search_pairs(10, 8)
    assert out.pairs == () and out.exhaustive and out.classes_checked == len(all_trees(10))
    assert search_pairs(10, 8, threads=2) == out
    part = search_pairs(10, 8, budget=5)
    assert not part.exhaustive and part.classes_checked == 5
