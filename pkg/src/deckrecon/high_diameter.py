"""Tree reconstruction by gluing two leaf extensions across a bridge.

For a bridge splitting T into C and D, a leaf extension of C (C plus the
far endpoint of the bridge) is counted once more in T than inside D plus
its pendant vertex. That surplus certifies the gluing. Candidate shapes are
the edge-cut components seen on cards: a side of a bridge with fewer than
``ell`` vertices shows up intact as such a component.
"""

from __future__ import annotations

from .canon import Cert, canonical_cert, marked_cert, split_marked_cert
from .counting import canonical_form_from_cert, copy_masks
from .deck import Deck
from .extensions import ExtensionError, ball_extension_counts
from .graph import Graph, bits
from .trees import AmbiguitySet, Fail, Method, ParamContext, ReconstructionReport, TreeError


def _cut_components(d: Deck, max_order: int) -> dict[int, dict[Cert, Graph]]:
    by_size: dict[int, dict[Cert, Graph]] = {}
    for card, _ in d.classes():
        for u, v in card.edges():
            cut = Graph.from_edges(card.n, [e for e in card.edges() if e != (u, v)])
            for side in (u, v):
                comp = next(c for c in cut.component_masks() if c >> side & 1)
                size = comp.bit_count()
                if size <= max_order:
                    sub = card.induced_mask(comp)
                    by_size.setdefault(size, {}).setdefault(canonical_cert(sub), sub)
    return by_size


def _leaf_classes(d: Deck, c: Graph, cache: dict) -> dict[Cert, int] | None:
    """Positive m_1 counts of leaf extensions of ``c``; None if some 1-ball is too big."""
    key = canonical_cert(c)
    if key not in cache:
        try:
            res = ball_extension_counts(d, c, 1)
        except ExtensionError:
            cache[key] = None
        else:
            if res.big_ball is not None:
                cache[key] = None
            else:
                cache[key] = {
                    x: m for x, m in res.counts.items() if split_marked_cert(x)[0].n == c.n + 1
                }
    return cache[key]


def _pendant(ext: Cert) -> tuple[Graph, int, int, int]:
    """(graph, core mask, pendant vertex, its neighbour) of a leaf extension."""
    g, core = split_marked_cert(ext)
    p = next(iter(bits(g.vertex_mask & ~core)))
    a = next(iter(bits(g.rows[p])))
    return g, core, p, a


def inner_count(c_ext: Cert, d_ext: Cert, c_order: int) -> int:
    """N(C_e, D+): copies of C inside V_D whose 1-ball within D+ is C_e."""
    dp, core, _, _ = _pendant(d_ext)
    c_graph, _ = split_marked_cert(c_ext)
    c_core = c_graph.induced_mask(split_marked_cert(c_ext)[1])
    total = 0
    for a in copy_masks(dp, c_core):
        if a & ~core:
            continue
        ball = dp.ball_mask(a, 1)
        if ball.bit_count() != c_order + 1:
            continue
        verts = list(bits(ball))
        marked = sum(1 << i for i, v in enumerate(verts) if a >> v & 1)
        if marked_cert(dp.induced(verts), marked) == c_ext:
            total += 1
    return total


def glue(c_ext: Cert, d_ext: Cert) -> Graph:
    """Join the cores of two leaf extensions at the pendants' neighbours."""
    cg, ccore, _, ca = _pendant(c_ext)
    dg, dcore, _, da = _pendant(d_ext)
    cv = list(bits(ccore))
    dv = list(bits(dcore))
    left = cg.induced(cv)
    right = dg.induced(dv)
    g = left.disjoint_union(right)
    return g.add_edges([(cv.index(ca), left.n + dv.index(da))])


def high_diam_reconstruct(
    d: Deck, ctx: ParamContext | None = None, guaranteed: bool = False
) -> ReconstructionReport | Fail:
    ctx = ctx or ParamContext.from_deck(d)
    if not ctx.high_diameter_applies():
        return Fail("NotApplicable: the longest path is too short")
    n, ell = d.n, d.ell
    shapes = _cut_components(d, ell - 1)
    cache: dict = {}
    # balanced splits first; the bridge at the middle of a longest path is near n / 2
    sizes = sorted((s for s in range(1, n // 2 + 1) if n - s <= ell - 1), key=lambda s: (abs(n / 2 - s), -s))
    for s in sizes:
        glued: list[Graph] = []
        for c in shapes.get(s, {}).values():
            c_cls = _leaf_classes(d, c, cache)
            if not c_cls:
                continue
            for dgraph in shapes.get(n - s, {}).values():
                d_cls = _leaf_classes(d, dgraph, cache)
                if not d_cls:
                    continue
                for ce, mc in c_cls.items():
                    for de in d_cls:
                        if mc == inner_count(ce, de, s) + 1:
                            glued.append(glue(ce, de))
        if glued:
            certs = {canonical_cert(g) for g in glued}
            if len(certs) == 1:
                return ReconstructionReport(glued[0], Method.HIGH_DIAMETER, guaranteed, (f"split {s}+{n - s}",))
            if guaranteed:
                raise TreeError("accepted gluings disagree in the guaranteed regime")
            reps = tuple(canonical_form_from_cert(c) for c in sorted(certs))
            return ReconstructionReport(AmbiguitySet(reps), Method.HIGH_DIAMETER, False)
    if guaranteed:
        raise TreeError("no bridge gluing passed the count test")
    return Fail("no bridge gluing passed the count test")
