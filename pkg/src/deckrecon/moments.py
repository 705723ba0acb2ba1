"""Binomial moments of integer multisets and their inversion.

The moments of a multiset ``x`` are ``s[j] = sum(C(x_i, j))``. Two multisets
over ``{0..n}`` of size ``m`` that share moments ``0..t`` have
``t + 1 <= sqrt(2 n ln(2m))``; ``uniqueness_threshold`` evaluates that bound
and ``bek_root_bound`` the underlying root-count bound. All moment
arithmetic is exact; floats only appear in the two bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .deck import Deck, DeckError, kelly_count
from .graph import Graph, star


class MomentError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class IntMultiset:
    values: tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> "IntMultiset":
        vals = tuple(sorted(values))
        if any(v < 0 for v in vals):
            raise MomentError("multiset values must be nonnegative")
        return cls(vals)

    @property
    def m(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


MomentVector = tuple[int, ...]


def binom_moments(x: Iterable[int], t: int) -> MomentVector:
    """``(sum C(x_i, 0), ..., sum C(x_i, t))``."""
    if t < 0:
        raise MomentError("t must be nonnegative")
    vals = list(x)
    return tuple(sum(comb(a, j) for a in vals) for j in range(t + 1))


def recover_multisets(s: Sequence[int], m: int, vmax: int) -> list[IntMultiset]:
    """Every size-``m`` multiset over ``0..vmax`` whose moments ``0..len(s)-1`` equal ``s``.

    Depth-first over the count of each value from ``vmax`` down, with exact
    residual bookkeeping. Results are sorted.
    """
    if not s or s[0] != m:
        raise MomentError("s[0] must equal the multiset size m")
    if vmax < 0:
        raise MomentError("vmax must be nonnegative")
    t = len(s) - 1
    # contributions of one copy of value v to each moment
    contrib = [[comb(v, j) for j in range(t + 1)] for v in range(vmax + 1)]
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def feasible(res: list[int], left: int, top: int) -> bool:
        # values remaining are all <= top, so each moment is at most left*C(top, j)
        row = contrib[top]
        for j in range(1, t + 1):
            if res[j] < 0 or res[j] > left * row[j]:
                return False
        return True

    def rec(v: int, res: list[int], left: int) -> None:
        if v < 0:
            if left == 0 and not any(res[1:]):
                out.append(tuple(sorted(chosen)))
            return
        if left == 0:
            if not any(res[1:]):
                out.append(tuple(sorted(chosen)))
            return
        if not feasible(res, left, v):
            return
        row = contrib[v]
        if v == 0:
            # zeros only add to s[0]
            if not any(res[1:]):
                chosen.extend([0] * left)
                out.append(tuple(sorted(chosen)))
                del chosen[len(chosen) - left:]
            return
        # the highest nonzero moment index v pins the count of value v when j = v <= t
        if v <= t:
            below = res[v]
            # values < v contribute nothing to moment v
            counts = [below] if below <= left else []
        else:
            cap = left
            for j in range(1, t + 1):
                if row[j]:
                    cap = min(cap, res[j] // row[j])
            counts = range(cap, -1, -1)
        for c in counts:
            new = [res[j] - c * row[j] for j in range(t + 1)]
            chosen.extend([v] * c)
            rec(v - 1, new, left - c)
            if c:
                del chosen[len(chosen) - c:]

    rec(vmax, [s[j] for j in range(t + 1)], m)
    return [IntMultiset(v) for v in sorted(set(out))]


def uniqueness_threshold(n: int, m: int) -> float:
    """``sqrt(2 n ln(2m))`` (natural log)."""
    if n < 1 or m < 1:
        raise MomentError("n and m must be positive")
    return math.sqrt(2 * n * math.log(2 * m))


@dataclass(frozen=True)
class GapPolynomial:
    """``sum x^alpha_i - sum x^beta_i`` as ``x^r * sum(a_j x^j)`` with ``a_0 != 0``."""

    coefficients: tuple[int, ...]
    r: int

    @classmethod
    def from_pair(cls, alpha: Iterable[int], beta: Iterable[int]) -> "GapPolynomial":
        alpha, beta = list(alpha), list(beta)
        top = max(alpha + beta, default=0)
        coeffs = [0] * (top + 1)
        for a in alpha:
            coeffs[a] += 1
        for b in beta:
            coeffs[b] -= 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise MomentError("the sequences are permutations of each other")
        r = 0
        while coeffs[r] == 0:
            r += 1
        return cls(tuple(coeffs[r:]), r)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def root_multiplicity_at_one(self) -> int:
        """Multiplicity of the root x = 1, by repeated synthetic division."""
        c = list(self.coefficients)
        mult = 0
        while len(c) > 1 and sum(c) == 0:
            # divide by (x - 1): coefficients from the top
            q = [0] * (len(c) - 1)
            acc = 0
            for i in range(len(c) - 1, 0, -1):
                acc += c[i]
                q[i - 1] = acc
            c = q
            mult += 1
        return mult


def bek_root_bound(p: GapPolynomial | Sequence[int]) -> float:
    """Upper bound on positive real roots (with multiplicity) of ``sum a_j x^j``:
    ``sqrt(2 n' ln(sum|a_i| / sqrt(|a_0 a_n'|)))``."""
    coeffs = p.coefficients if isinstance(p, GapPolynomial) else tuple(p)
    if not coeffs or coeffs[0] == 0 or coeffs[-1] == 0:
        raise MomentError("leading and trailing coefficients must be nonzero")
    deg = len(coeffs) - 1
    if deg == 0:
        return 0.0
    ratio = sum(abs(a) for a in coeffs) / math.sqrt(abs(coeffs[0] * coeffs[-1]))
    return math.sqrt(2 * deg * math.log(ratio))


def degrees_from_cards(d: Deck) -> IntMultiset:
    """At ell = n - 1 each card G - v reveals deg(v) = e(G) - e(G - v)."""
    if d.ell != d.n - 1 or d.n < 3:
        raise DeckError("direct degree reading needs ell = n - 1 and n >= 3")
    total = sum(g.num_edges() * m for g, m in d.classes())
    e, r = divmod(total, d.n - 2)
    if r:
        raise DeckError("card edge counts are inconsistent")
    out = []
    for g, m in d.classes():
        out.extend([e - g.num_edges()] * m)
    return IntMultiset.of(out)


def degree_sequence_from_deck(d: Deck) -> tuple[IntMultiset, bool]:
    """Degree multiset from star counts on the deck.

    ``certified`` is true when the moment system has a single solution and
    ``ell >= sqrt(2 n ln(2n))``; otherwise the least solution is returned.
    With ``ell = n - 1`` the degrees are read off the cards exactly.
    """
    if d.ell < 2:
        raise DeckError("degree sequence needs cards on at least 2 vertices")
    n = d.n
    if d.ell == n - 1 and n >= 3:
        return degrees_from_cards(d), True
    s = [n, 2 * kelly_count(d, Graph.from_edges(2, [(0, 1)]))]
    for j in range(2, d.ell):
        s.append(kelly_count(d, star(j), "subgraph"))
    sols = recover_multisets(s, n, n - 1)
    if not sols:
        raise MomentError("star counts are infeasible for any degree sequence")
    certified = len(sols) == 1 and d.ell >= uniqueness_threshold(n, n)
    return sols[0], certified


def shared_moment_pairs(m: int, vmax: int, t: int) -> list[tuple[IntMultiset, IntMultiset]]:
    """All unordered pairs of distinct size-``m`` multisets over ``0..vmax`` whose
    moments ``0..t`` agree (exhaustive; for extremal-pair experiments)."""
    from itertools import combinations_with_replacement

    buckets: dict[MomentVector, list[IntMultiset]] = {}
    for vals in combinations_with_replacement(range(vmax + 1), m):
        buckets.setdefault(binom_moments(vals, t), []).append(IntMultiset(vals))
    pairs = []
    for group in buckets.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                pairs.append((group[i], group[j]))
    return sorted(pairs)
