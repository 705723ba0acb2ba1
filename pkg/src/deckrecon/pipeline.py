"""Full tree reconstruction: recognise, then pick a route by the longest path."""

from __future__ import annotations

from .canon import canonical_cert
from .deck import Deck, DeckError
from .high_diameter import high_diam_reconstruct
from .low_diameter import low_diam_reconstruct
from .trees import (
    TREE_SEARCH_MAX_N,
    AmbiguitySet,
    Fail,
    GraphClass,
    Method,
    NotATreeError,
    ParamContext,
    ReconstructionReport,
    SearchBudgetError,
    TreeError,
    TreeVerdict,
    reconstruct_by_search,
    recognize_tree_from_deck,
    theorem_threshold,
)


def reconstruct_tree(d: Deck) -> ReconstructionReport:
    """Reconstruct a tree from its deck.

    The bridge-gluing route runs when the longest path is long, the branch
    counting route when it is short; an exhaustive search over trees covers
    decks where neither applies or recognition is inconclusive.
    """
    if d.ell < 3:
        raise DeckError("tree reconstruction needs ell >= 3")
    rec = recognize_tree_from_deck(d)
    if rec.verdict is TreeVerdict.NOT_TREE:
        raise NotATreeError(rec.reason)
    notes: list[str] = [f"recognition: {rec.verdict.value} ({rec.reason})"]
    if rec.verdict is TreeVerdict.TREE:
        ctx = ParamContext.from_deck(d)
        strong = d.ell > theorem_threshold(d.n)
        routes = []
        if ctx.high_diameter_applies():
            routes.append(high_diam_reconstruct)
        elif ctx.low_diameter_applies():
            routes.append(low_diam_reconstruct)
        for route in routes:
            try:
                out = route(d, ctx, guaranteed=strong)
            except TreeError as exc:
                if strong:
                    raise
                notes.append(f"{route.__name__}: {exc}")
                continue
            if isinstance(out, ReconstructionReport):
                return out
            notes.append(f"{route.__name__}: {out.reason}")
    if d.n > TREE_SEARCH_MAX_N:
        raise SearchBudgetError(
            f"no algorithmic route applies and search is limited to n <= {TREE_SEARCH_MAX_N}"
        )
    found = reconstruct_by_search(d, GraphClass.TREES)
    if not found:
        raise NotATreeError("no tree has this deck")
    if len(found) == 1:
        return ReconstructionReport(found[0], Method.SEARCH, False, tuple(notes))
    found.sort(key=canonical_cert)
    return ReconstructionReport(AmbiguitySet(tuple(found)), Method.SEARCH, False, tuple(notes))


__all__ = ["reconstruct_tree", "Fail"]
