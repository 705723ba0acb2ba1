"""Command-line interface.

Every command prints an experiment report (JSON by default). Exit status is
0 on success, 1 when a budget ran out or the answer is inconclusive, and 2 on
bad input.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from . import __version__, graph6
from .canon import canonical_cert
from .connectivity import Verdict, is_connected_from_deck
from .counting import INDUCED, SUBGRAPH, count_copies
from .deck import Deck, DeckError, compute_deck, deck_diff, kelly_count, subdeck
from .extensions import ExtensionError
from .generators import FAMILIES, generate
from .graph import Graph, GraphError, format_edge_list, parse_edge_list
from .moments import MomentError, degree_sequence_from_deck
from .pipeline import reconstruct_tree
from .trees import (
    AmbiguitySet,
    GraphClass,
    NotATreeError,
    SearchBudgetError,
    TreeError,
    TreeVerdict,
    recognize_tree_from_deck,
    search_pairs,
)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2
SEEDED = {"random_tree", "random_graph", "random_caterpillar"}


class InputError(Exception):
    pass


@dataclass
class ExperimentReport:
    command: str
    parameters: dict[str, Any]
    results: dict[str, Any]
    timing: dict[str, float] = field(default_factory=dict)
    versions: dict[str, str] = field(default_factory=dict)
    status: str = "ok"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _versions() -> dict[str, str]:
    import networkx

    return {"deckrecon": __version__, "python": platform.python_version(), "networkx": networkx.__version__}


# ---------------------------------------------------------------------------
# input


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not ASCII text") from exc


def parse_graph_text(text: str) -> Graph:
    """graph6 (a single token, optional >>graph6<< header) or an edge list."""
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(body) == 1 and len(body[0].split()) == 1:
        token = body[0].removeprefix(">>graph6<<")
        return graph6.decode(token)
    return parse_edge_list(text)


def load_graph(path: str) -> Graph:
    return parse_graph_text(_read(path))


def load_deck(path: str, ell: int | None) -> Deck:
    """A deck file, or a graph file whose ``ell``-deck is then computed."""
    text = _read(path)
    if text.lstrip().startswith("#deck"):
        d = Deck.from_text(text)
        if ell is not None and ell != d.ell:
            raise InputError(f"--l {ell} disagrees with the deck's card order {d.ell}")
        return d
    if ell is None:
        raise InputError("a graph input needs --l to fix the card order")
    return compute_deck(parse_graph_text(text), ell)


def _deck_json(d: Deck) -> dict[str, Any]:
    cards = [[c.decode("ascii"), m] for c, m in sorted(d.cards.items())]
    return {"n": d.n, "l": d.ell, "cards": cards}


def _g6(g: Graph) -> str:
    return canonical_cert(g).decode("ascii")


def _param_value(raw: str) -> Any:
    if "," in raw:
        return [_param_value(x) for x in raw.split(",") if x]
    for conv in (int, float):
        try:
            return conv(raw)
        except ValueError:
            pass
    return raw


# ---------------------------------------------------------------------------
# commands; each returns (results, status, text lines)

Outcome = tuple[dict[str, Any], str, list[str]]


def cmd_deck_compute(a: argparse.Namespace) -> Outcome:
    if a.ell is None:
        raise InputError("deck compute needs --l")
    d = compute_deck(load_graph(a.graph), a.ell)
    if a.out:
        with open(a.out, "w", encoding="ascii") as fh:
            fh.write(d.to_text())
    return _deck_json(d), "ok", d.to_text().splitlines()


def cmd_deck_diff(a: argparse.Namespace) -> Outcome:
    d1, d2 = load_deck(a.first, a.ell), load_deck(a.second, a.ell)
    diff = deck_diff(d1, d2)
    rows = [[c.decode("ascii"), x, y] for c, (x, y) in sorted(diff.differences.items())]
    lines = ["equal"] if not rows else diff.lines()
    return {"equal": not rows, "differences": rows}, "ok", lines


def cmd_deck_subdeck(a: argparse.Namespace) -> Outcome:
    if a.to is None:
        raise InputError("deck subdeck needs --to")
    d = subdeck(load_deck(a.deck, a.ell), a.to)
    return _deck_json(d), "ok", d.to_text().splitlines()


def cmd_count(a: argparse.Namespace) -> Outcome:
    d = load_deck(a.deck, a.ell)
    h = load_graph(a.pattern)
    value = kelly_count(d, h, a.mode)
    return {"pattern": _g6(h), "mode": a.mode, "count": value}, "ok", [str(value)]


def cmd_degrees(a: argparse.Namespace) -> Outcome:
    d = load_deck(a.deck, a.ell)
    try:
        seq, certified = degree_sequence_from_deck(d)
    except MomentError as exc:
        return {"error": str(exc)}, "indeterminate", [str(exc)]
    seq = sorted(seq, reverse=True)
    status = "ok" if certified else "indeterminate"
    return {"degrees": seq, "certified": certified}, status, [" ".join(map(str, seq))]


def cmd_connectivity(a: argparse.Namespace) -> Outcome:
    dec = is_connected_from_deck(load_deck(a.deck, a.ell))
    status = "indeterminate" if dec.verdict is Verdict.INDETERMINATE else "ok"
    res = {"verdict": dec.verdict.value, "witness": dec.witness, "guaranteed": dec.guaranteed}
    return res, status, [f"{dec.verdict.value}: {dec.witness}"]


def cmd_tree_recognize(a: argparse.Namespace) -> Outcome:
    rec = recognize_tree_from_deck(load_deck(a.deck, a.ell))
    status = "indeterminate" if rec.verdict is TreeVerdict.INDETERMINATE else "ok"
    res = {"verdict": rec.verdict.value, "reason": rec.reason, "guaranteed": rec.guaranteed}
    return res, status, [f"{rec.verdict.value}: {rec.reason}"]


def cmd_tree_reconstruct(a: argparse.Namespace) -> Outcome:
    d = load_deck(a.deck, a.ell)
    try:
        rep = reconstruct_tree(d)
    except NotATreeError as exc:
        return {"error": f"not a tree: {exc}"}, "error", [f"not a tree: {exc}"]
    except SearchBudgetError as exc:
        return {"error": str(exc)}, "budget", [str(exc)]
    res: dict[str, Any] = {"method": rep.method.value, "guaranteed": rep.guaranteed, "notes": list(rep.notes)}
    if isinstance(rep.result, AmbiguitySet):
        res["ambiguous"] = [_g6(t) for t in rep.result.trees]
        return res, "indeterminate", ["ambiguous: " + " ".join(res["ambiguous"])]
    res["tree"] = _g6(rep.result)
    return res, "ok", [res["tree"], format_edge_list(rep.result).rstrip()]


def cmd_search_pairs(a: argparse.Namespace) -> Outcome:
    if a.n is None or a.ell is None:
        raise InputError("search-pairs needs --n and --l")
    try:
        out = search_pairs(a.n, a.ell, GraphClass(a.graph_class), a.threads, a.budget)
    except SearchBudgetError as exc:
        return {"error": str(exc)}, "budget", [str(exc)]
    res = {
        "n": out.n,
        "l": out.ell,
        "class": out.graph_class,
        "pairs": [list(p) for p in out.pairs],
        "exhaustive": out.exhaustive,
        "classes_checked": out.classes_checked,
    }
    lines = [f"{x} {y}" for x, y in out.pairs] or ["no pairs"]
    return res, "ok" if out.exhaustive else "budget", lines


def cmd_generate(a: argparse.Namespace) -> Outcome:
    params: dict[str, Any] = {}
    for item in a.params:
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not key=value")
        key, raw = item.split("=", 1)
        params[key] = _param_value(raw)
    if a.family in SEEDED:
        params.setdefault("seed", a.seed if a.seed is not None else 0)
    if "legs" in params and isinstance(params["legs"], int):
        params["legs"] = [params["legs"]]
    if "pendants" in params and isinstance(params["pendants"], int):
        params["pendants"] = [params["pendants"]]
    g = generate(a.family, **params)
    res = {"graph6": graph6.encode(g), "n": g.n, "edges": [list(e) for e in g.edges()]}
    return res, "ok", [res["graph6"]]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--l", dest="ell", type=int, help="card order")
    common.add_argument("--threads", type=int, default=1, help="worker processes (search-pairs)")
    common.add_argument("--budget", type=int, help="cap on class members examined (search-pairs)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, help="seed for random families")

    p = argparse.ArgumentParser(prog="deckrecon", description="Graph and tree reconstruction from decks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    deck = sub.add_parser("deck", help="deck files")
    dsub = deck.add_subparsers(dest="action", required=True)
    x = dsub.add_parser("compute", parents=[common], help="the l-deck of a graph")
    x.add_argument("graph")
    x.add_argument("--out", help="also write the deck file here")
    x.set_defaults(func=cmd_deck_compute)
    x = dsub.add_parser("diff", parents=[common], help="card classes whose multiplicities differ")
    x.add_argument("first")
    x.add_argument("second")
    x.set_defaults(func=cmd_deck_diff)
    x = dsub.add_parser("subdeck", parents=[common], help="the deck of smaller cards")
    x.add_argument("deck")
    x.add_argument("--to", type=int, help="new card order")
    x.set_defaults(func=cmd_deck_subdeck)

    x = sub.add_parser("count", parents=[common], help="copies of a pattern, from the deck")
    x.add_argument("deck")
    x.add_argument("pattern", help="graph6 or edge-list file")
    x.add_argument("--mode", choices=(INDUCED, SUBGRAPH), default=INDUCED)
    x.set_defaults(func=cmd_count)

    x = sub.add_parser("degrees", parents=[common], help="degree sequence from the deck")
    x.add_argument("deck")
    x.set_defaults(func=cmd_degrees)

    x = sub.add_parser("connectivity", parents=[common], help="decide connectedness")
    x.add_argument("deck")
    x.set_defaults(func=cmd_connectivity)

    tree = sub.add_parser("tree", help="tree recognition and reconstruction")
    tsub = tree.add_subparsers(dest="action", required=True)
    x = tsub.add_parser("recognize", parents=[common])
    x.add_argument("deck")
    x.set_defaults(func=cmd_tree_recognize)
    x = tsub.add_parser("reconstruct", parents=[common])
    x.add_argument("deck")
    x.set_defaults(func=cmd_tree_reconstruct)

    x = sub.add_parser("search-pairs", parents=[common], help="non-isomorphic pairs with equal decks")
    x.add_argument("--n", type=int)
    x.add_argument("--class", dest="graph_class", choices=[c.value for c in GraphClass], default="Trees")
    x.set_defaults(func=cmd_search_pairs)

    x = sub.add_parser("generate", parents=[common], help="a named graph family member")
    x.add_argument("family", choices=sorted(FAMILIES))
    x.add_argument("params", nargs="*", help="key=value, lists comma separated")
    x.set_defaults(func=cmd_generate)
    return p


def _command_name(a: argparse.Namespace) -> str:
    return " ".join(filter(None, [a.command, getattr(a, "action", None)]))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    func: Callable[[argparse.Namespace], Outcome] = args.func
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "action")}
    start = time.perf_counter()
    try:
        results, status, lines = func(args)
    except (InputError, GraphError, DeckError, ValueError) as exc:
        if isinstance(exc, (ExtensionError, TreeError)) and not isinstance(exc, (GraphError, DeckError)):
            results, status, lines = {"error": str(exc)}, "error", [str(exc)]
        else:
            print(f"deckrecon: error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    elapsed = time.perf_counter() - start
    if args.format == "text":
        print("\n".join(lines))
    else:
        report = ExperimentReport(_command_name(args), params, results, {"seconds": round(elapsed, 6)}, _versions(), status)
        print(report.to_json())
    return EXIT_OK if status == "ok" else EXIT_INCONCLUSIVE


if __name__ == "__main__":
    raise SystemExit(main())
