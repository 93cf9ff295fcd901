"""Membership in the local family by greedy inverse-operation reduction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import patterns as pt
from .construct import OPS, Certificate, OpStep, apply_O, make_step
from .errors import InternalInconsistency, TwoDomError
from .solvers import alpha2, gamma2
from .tree import Tree, canonical_code


@dataclass(frozen=True)
class ReductionStep:
    op: str
    pattern_id: str | None  # augmented id such as "T2^O4"; None for O3
    image: tuple[int, ...]  # host ids of the augmented pattern (O3: v, u1, u2, u3)
    removed: tuple[int, ...]
    restored_edge: tuple[int, int] | None = None

    @property
    def base_id(self) -> str | None:
        return None if self.pattern_id is None else self.pattern_id.split("^")[0]


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    certificate: Certificate | None
    gamma2: int
    alpha2: int
    reductions: tuple[ReductionStep, ...] = ()
    # paranoid mode only: greedy result, when it differs from backtracking
    greedy_accepted: bool | None = None


@dataclass(frozen=True)
class CertCheck:
    ok: bool
    reason: str | None = None  # BadBase, BadStep, BadTree or Mismatch
    step: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=None)
def augmented_patterns(o4_includes_t14: bool = True) -> tuple[tuple[str, pt.Pattern | None], ...]:
    """(op, augmented pattern) in scan order; O3 carries no pattern."""
    out: list[tuple[str, pt.Pattern | None]] = []
    for op in OPS:
        if op == "O3":
            out.append((op, None))
            continue
        for pid in pt.admissible(op, o4_includes_t14):
            out.append((op, pt.augment(pt.get(pid), op, o4_includes_t14)))
    return tuple(out)


def _o3_sites(t: Tree):
    """(v, u1, u2, u3): u2 has degree 3, neighbour v, and leaves u1 < u3."""
    for v in range(t.n):
        for u2 in t.adj[v]:
            if len(t.adj[u2]) != 3:
                continue
            leaves = sorted(y for y in t.adj[u2] if y != v and len(t.adj[y]) == 1)
            if len(leaves) == 2:
                yield (v, leaves[0], u2, leaves[1])


def _step_from(op: str, p: pt.Pattern | None, image: tuple[int, ...]) -> ReductionStep:
    if p is None:
        return ReductionStep(op, None, image, image[1:])
    removed = tuple(image[i] for i in p.removal)
    restored = None
    if p.removed_edge is not None:
        restored = (image[p.removed_edge[0]], image[p.removed_edge[1]])
    return ReductionStep(op, p.id, image, removed, restored)


def _first_embedding(t: Tree, p: pt.Pattern) -> tuple[int, ...] | None:
    # image[0] is the white vertex, so the lexicographically first image
    # lives at the smallest anchor that has any embedding at all
    for h in range(t.n):
        found = list(pt.iter_raw_embeddings(t, p, anchors=(h,)))
        if found:
            return min(found)
    return None


def reduce_once(t: Tree, o4_includes_t14: bool = True) -> ReductionStep | None:
    """First applicable inverse operation in scan order, or None."""
    if t.n < 5:
        return None
    for op, p in augmented_patterns(o4_includes_t14):
        if p is None:
            site = next(_o3_sites(t), None)
            if site is not None:
                return _step_from(op, None, site)
            continue
        image = _first_embedding(t, p)
        if image is not None:
            return _step_from(op, p, image)
    return None


def all_reductions(t: Tree, o4_includes_t14: bool = True) -> list[ReductionStep]:
    """Every applicable inverse operation, one per distinct removal."""
    if t.n < 5:
        return []
    out = []
    for op, p in augmented_patterns(o4_includes_t14):
        if p is None:
            out.extend(_step_from(op, None, s) for s in _o3_sites(t))
        else:
            out.extend(_step_from(op, p, e.image) for e in pt.find_pdi_embeddings(t, p))
    return out


def apply_reduction(t: Tree, r: ReductionStep) -> tuple[Tree, dict[int, int]]:
    """Remove ``r.removed`` (restoring the O6 edge); returns the smaller tree
    and the old-to-new id map of the surviving vertices."""
    rest, relabel = t.delete(r.removed)
    edges = rest.edges()
    if r.restored_edge is not None:
        a, b = r.restored_edge
        edges.append((relabel[a], relabel[b]))
    try:
        smaller = Tree.from_edges(rest.n, edges)
    except TwoDomError as exc:
        raise InternalInconsistency(f"reduction {r} does not leave a tree: {exc}") from exc
    return smaller, relabel


def _certificate(chain: list[tuple[Tree, ReductionStep, dict[int, int]]], base: Tree) -> Certificate:
    """Turn reductions t_0 -> ... -> base into forward steps with dense ids."""
    phi = {v: v for v in range(base.n)}  # current tree id -> replay id
    replay = base
    steps: list[OpStep] = []
    for t, r, relabel in reversed(chain):
        if r.op == "O3":
            fwd_image = (phi[relabel[r.image[0]]],)
            step = make_step(replay, "O3", None, fwd_image)
        else:
            k = pt.get(r.base_id).order
            fwd_image = tuple(phi[relabel[x]] for x in r.image[:k])
            step = make_step(replay, r.op, r.base_id, fwd_image)
        replay = apply_O(replay, step)
        nxt = {x: phi[relabel[x]] for x in relabel}
        for j, x in enumerate(r.removed):
            nxt[x] = step.added[j]
        phi = nxt
        steps.append(step)
    return Certificate(base, tuple(steps))


def _greedy(t: Tree, o4_includes_t14: bool, check_steps: bool):
    chain = []
    cur = t
    diff = alpha2(t) - gamma2(t) if check_steps else 0
    while cur.n > 4:
        r = reduce_once(cur, o4_includes_t14)
        if r is None:
            return False, chain, cur
        nxt, relabel = apply_reduction(cur, r)
        if check_steps and alpha2(nxt) - gamma2(nxt) != diff:
            raise InternalInconsistency(f"reduction {r} changed alpha2 - gamma2")
        chain.append((cur, r, relabel))
        cur = nxt
    return True, chain, cur


def _backtrack(t: Tree, o4_includes_t14: bool, dead: set):
    """Depth-first search over all reductions; ``dead`` memoizes failures by code."""
    if t.n <= 4:
        return [], t
    code = canonical_code(t)
    if code in dead:
        return None
    for r in all_reductions(t, o4_includes_t14):
        nxt, relabel = apply_reduction(t, r)
        found = _backtrack(nxt, o4_includes_t14, dead)
        if found is not None:
            chain, base = found
            return [(t, r, relabel)] + chain, base
    dead.add(code)
    return None


def recognize(
    t: Tree,
    o4_includes_t14: bool = True,
    strict: bool = True,
    paranoid: bool = False,
    check_steps: bool = True,
) -> Verdict:
    """Decide membership; ``strict`` raises InternalInconsistency when the
    outcome disagrees with gamma2 == alpha2."""
    g, a = gamma2(t), alpha2(t)
    accepted, chain, base = _greedy(t, o4_includes_t14, check_steps)
    greedy = None
    if paranoid:
        found = _backtrack(t, o4_includes_t14, set())
        if (found is not None) != accepted:
            greedy = accepted
        if found is not None and not accepted:
            chain, base = found
        accepted = found is not None
    if strict and accepted != (g == a):
        raise InternalInconsistency(
            f"recognizer says {accepted} but gamma2={g}, alpha2={a} on {t.edges()}"
        )
    cert = _certificate(chain, base) if accepted else None
    return Verdict(accepted, cert, g, a, tuple(r for _, r, _ in chain), greedy)


def verify_certificate(c: Certificate, t: Tree, o4_includes_t14: bool = True) -> CertCheck:
    if c.base.n > 4:
        return CertCheck(False, "BadBase", detail=f"base order {c.base.n}")
    cur = c.base
    for i, step in enumerate(c.steps):
        try:
            cur = apply_O(cur, step, o4_includes_t14)
        except (TwoDomError, KeyError, ValueError) as exc:
            return CertCheck(False, "BadStep", i, str(exc))
    if canonical_code(cur) != canonical_code(t):
        return CertCheck(False, "Mismatch", detail="replayed tree is not isomorphic to the input")
    return CertCheck(True)
