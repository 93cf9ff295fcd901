"""Exact 2-domination and 2-independence numbers on trees and forests.

Two independent routes are provided: linear rooted-tree dynamic programs
(:func:`solve_gamma2`, :func:`solve_alpha2`) and exhaustive subset search
(:func:`brute_gamma2`, :func:`brute_alpha2`) used as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import Infeasible, TooLarge
from .tree import Forest, RootedView

BRUTE_FORCE_CAP = 22

INF = math.inf

# gamma2 states
G_IN, G_OUT_NEED, G_OUT_SAT = 0, 1, 2
# alpha2 states
A_OUT, A_IN_FREE, A_IN_USED = 0, 1, 2


@dataclass(frozen=True)
class Constraint:
    forced_in: frozenset[int] = field(default_factory=frozenset)
    forced_out: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "forced_in", frozenset(self.forced_in))
        object.__setattr__(self, "forced_out", frozenset(self.forced_out))
        if self.forced_in & self.forced_out:
            raise ValueError("forced_in and forced_out overlap")


NO_CONSTRAINT = Constraint()


@dataclass(frozen=True)
class SolveOutcome:
    value: int
    witness: frozenset[int]


def is_2_dominating(t: Forest, s: Iterable[int]) -> bool:
    members = set(s)
    return all(
        v in members or sum(1 for y in t.adj[v] if y in members) >= 2
        for v in range(t.n)
    )


def is_2_independent(t: Forest, s: Iterable[int]) -> bool:
    members = set(s)
    return all(sum(1 for y in t.adj[v] if y in members) <= 1 for v in members)


def _postorder(t: Forest) -> list[RootedView]:
    return [RootedView.of(t, comp[0]) for comp in t.components()]


# gamma2 -------------------------------------------------------------------


def _gamma2_tables(rv: RootedView, c: Constraint) -> dict[int, tuple[float, float, float]]:
    g: dict[int, tuple[float, float, float]] = {}
    for v in reversed(rv.order):
        kids = rv.children[v]
        cost_in = 1.0
        # best[k]: min cost with k children in S (k capped at 2) while v is out
        best = [0.0, INF, INF]
        for ch in kids:
            gi, gn, gs = g[ch]
            cost_in += min(gi, gn, gs)
            best = [
                best[0] + gs,
                min(best[1] + gs, best[0] + gi),
                min(best[2] + gs, best[2] + gi, best[1] + gi),
            ]
        need, sat = best[1], best[2]
        if v == rv.root:
            need = INF
        if v in c.forced_in:
            need = sat = INF
        if v in c.forced_out:
            cost_in = INF
        g[v] = (cost_in, need, sat)
    return g


def _gamma2_witness(rv: RootedView, g, root_state: int) -> set[int]:
    chosen: set[int] = set()
    stack = [(rv.root, root_state)]
    while stack:
        v, s = stack.pop()
        kids = sorted(rv.children[v])
        if s == G_IN:
            chosen.add(v)
            for ch in kids:
                vals = g[ch]
                m = min(vals)
                stack.append((ch, vals.index(m)))
            continue
        # v is out: children are IN or OUT_SAT; count of IN children must be
        # exactly 1 (OUT_NEED) or at least 2 (OUT_SAT)
        target = g[v][s]
        # suffix[i][k]: min cost of kids[i:] contributing k IN children (capped)
        suffix = [[0.0, INF, INF]]
        for ch in reversed(kids):
            gi, _, gs = g[ch]
            nxt = suffix[-1]
            suffix.append([
                nxt[0] + gs,
                min(nxt[1] + gs, nxt[0] + gi),
                min(nxt[2] + gs, nxt[2] + gi, nxt[1] + gi),
            ])
        suffix.reverse()
        spent, count = 0.0, 0
        for i, ch in enumerate(kids):
            gi, _, gs = g[ch]
            for state, cost, inc in ((G_IN, gi, 1), (G_OUT_SAT, gs, 0)):
                if cost == INF:
                    continue
                c2 = min(count + inc, 2)
                rest = suffix[i + 1]
                if s == G_OUT_NEED:
                    need_k = 1 - c2
                    if need_k < 0:
                        continue
                    completion = rest[need_k]
                else:
                    completion = min(rest[k] for k in range(3) if min(c2 + k, 2) == 2)
                if spent + cost + completion == target:
                    spent += cost
                    count = c2
                    stack.append((ch, state))
                    break
            else:  # pragma: no cover - tables guarantee a consistent choice
                raise AssertionError("gamma2 backtracking failed")
    return chosen


def solve_gamma2(t: Forest, c: Constraint = NO_CONSTRAINT) -> SolveOutcome:
    """Minimum 2-dominating set of a tree or forest respecting ``c``.

    Raises Infeasible when no 2-dominating set satisfies the constraint.
    """
    total = 0
    witness: set[int] = set()
    for rv in _postorder(t):
        g = _gamma2_tables(rv, c)
        vals = g[rv.root]
        m = min(vals)
        if m == INF:
            raise Infeasible("no 2-dominating set respects the constraint")
        total += int(m)
        witness |= _gamma2_witness(rv, g, vals.index(m))
    return SolveOutcome(total, frozenset(witness))


# alpha2 -------------------------------------------------------------------


def _used_value(a, kids: list[int], ch: int) -> float:
    """IN_USED value when ``ch`` is the one IN_FREE child and the rest are OUT."""
    return 1.0 + a[ch][A_IN_FREE] + sum(a[k][A_OUT] for k in kids if k != ch)


def _alpha2_tables(rv: RootedView, c: Constraint) -> dict[int, tuple[float, float, float]]:
    a: dict[int, tuple[float, float, float]] = {}
    for v in reversed(rv.order):
        kids = rv.children[v]
        out = sum(max(a[ch]) for ch in kids)
        free = 1.0 + sum(a[ch][A_OUT] for ch in kids)
        # children that cannot be OUT (forced in) must be the IN_FREE one
        stuck = [ch for ch in kids if a[ch][A_OUT] == -INF]
        if len(stuck) > 1:
            used = -INF
        elif stuck:
            used = _used_value(a, kids, stuck[0])
        elif kids:
            used = free + max(a[ch][A_IN_FREE] - a[ch][A_OUT] for ch in kids)
        else:
            used = -INF
        if v in c.forced_in:
            out = -INF
        if v in c.forced_out:
            free = used = -INF
        a[v] = (out, free, used)
    return a


def _alpha2_witness(rv: RootedView, a, root_state: int) -> set[int]:
    chosen: set[int] = set()
    stack = [(rv.root, root_state)]
    while stack:
        v, s = stack.pop()
        kids = sorted(rv.children[v])
        if s == A_OUT:
            for ch in kids:
                vals = a[ch]
                stack.append((ch, vals.index(max(vals))))
            continue
        chosen.add(v)
        if s == A_IN_FREE:
            stack.extend((ch, A_OUT) for ch in kids)
            continue
        # IN_USED: exactly one child IN_FREE, the rest OUT; earliest child stays
        # OUT whenever a later child can take the IN_FREE slot optimally
        pick = [ch for ch in kids if _used_value(a, kids, ch) == a[v][A_IN_USED]][-1]
        for ch in kids:
            stack.append((ch, A_IN_FREE if ch == pick else A_OUT))
    return chosen


def solve_alpha2(t: Forest, c: Constraint = NO_CONSTRAINT) -> SolveOutcome:
    """Maximum 2-independent set of a tree or forest respecting ``c``.

    Raises Infeasible only if ``c.forced_in`` is not itself 2-independent.
    """
    total = 0
    witness: set[int] = set()
    for rv in _postorder(t):
        a = _alpha2_tables(rv, c)
        vals = a[rv.root]
        m = max(vals)
        if m == -INF:
            raise Infeasible("forced vertices violate 2-independence")
        total += int(m)
        witness |= _alpha2_witness(rv, a, vals.index(m))
    return SolveOutcome(total, frozenset(witness))


def gamma2(t: Forest) -> int:
    return solve_gamma2(t).value


def alpha2(t: Forest) -> int:
    return solve_alpha2(t).value


# membership predicates ----------------------------------------------------


def in_every_gamma2_set(t: Forest, v: int) -> bool:
    opt = gamma2(t)
    try:
        return solve_gamma2(t, Constraint(forced_out={v})).value > opt
    except Infeasible:
        return True


def in_some_gamma2_set(t: Forest, v: int) -> bool:
    try:
        return solve_gamma2(t, Constraint(forced_in={v})).value == gamma2(t)
    except Infeasible:  # pragma: no cover - forcing a vertex in is always feasible
        return False


def in_every_alpha2_set(t: Forest, v: int) -> bool:
    return solve_alpha2(t, Constraint(forced_out={v})).value < alpha2(t)


# brute force oracle -------------------------------------------------------


def _subset_tables(t: Forest) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = t.n
    if n > BRUTE_FORCE_CAP:
        raise TooLarge(f"brute force is capped at order {BRUTE_FORCE_CAP}, got {n}")
    masks = np.arange(1 << n, dtype=np.uint32)
    dominating = np.ones(masks.shape, dtype=bool)
    independent = np.ones(masks.shape, dtype=bool)
    for v in range(n):
        nbr = np.uint32(sum(1 << y for y in t.adj[v]))
        inside = ((masks >> np.uint32(v)) & np.uint32(1)).astype(bool)
        hits = np.bitwise_count(masks & nbr)
        dominating &= inside | (hits >= 2)
        independent &= ~inside | (hits <= 1)
    sizes = np.bitwise_count(masks)
    return sizes, dominating, independent


def brute_gamma2(t: Forest) -> int:
    sizes, dom, _ = _subset_tables(t)
    return int(sizes[dom].min())


def brute_alpha2(t: Forest) -> int:
    sizes, _, ind = _subset_tables(t)
    return int(sizes[ind].max())


def brute_both(t: Forest) -> tuple[int, int]:
    sizes, dom, ind = _subset_tables(t)
    return int(sizes[dom].min()), int(sizes[ind].max())


def find_2dom_2ind_set(t: Forest) -> frozenset[int]:
    """Smallest vertex set that is both 2-dominating and 2-independent.

    Among sets of minimum size the lexicographically first sorted tuple wins.
    """
    sizes, dom, ind = _subset_tables(t)
    ok = dom & ind
    if not ok.any():  # pragma: no cover - impossible for graphs
        raise AssertionError("no 2-dominating 2-independent set found")
    k = sizes[ok].min()
    cands = np.flatnonzero(ok & (sizes == k))
    tuples = [tuple(v for v in range(t.n) if (int(m) >> v) & 1) for m in cands]
    return frozenset(min(tuples))
