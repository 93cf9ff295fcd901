"""Forward construction: operations O1-O6 of the local family, R1-R4 of the
global family, certificates, and seeded random member generation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from . import patterns as pt
from .errors import InadmissiblePattern, InvalidAttacher, NoSuchEmbedding, PreconditionViolated
from .solvers import alpha2, gamma2, in_every_alpha2_set, in_some_gamma2_set
from .tree import Tree, enumerate_free_trees, prufer_decode

OPS = ("O1", "O2", "O3", "O4", "O5", "O6")
ARITY = {"O1": 1, "O2": 2, "O3": 3, "O4": 3, "O5": 3, "O6": 3}
# both gamma2 and alpha2 grow by exactly this amount
DELTA = {"O1": 1, "O2": 1, "O3": 2, "O4": 2, "O5": 2, "O6": 2}


@dataclass(frozen=True)
class OpStep:
    """One forward operation.  ``image`` lists host ids of the pattern's
    vertices (for O3 it is just the attacher)."""

    op: str
    pattern_id: str | None
    image: tuple[int, ...]
    added: tuple[int, ...] = ()
    removed_edge: tuple[int, int] | None = None
    roles: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise ValueError(f"unknown operation {self.op}")
        if self.added and len(self.added) != ARITY[self.op]:
            raise ValueError(f"{self.op} adds {ARITY[self.op]} vertices, got {len(self.added)}")
        if self.removed_edge is not None and self.op != "O6":
            raise ValueError("only O6 removes an edge")


@dataclass(frozen=True)
class Certificate:
    base: Tree
    steps: tuple[OpStep, ...] = ()

    def __post_init__(self) -> None:
        if self.base.n > 4:
            raise ValueError("certificate base must have order at most 4")

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": {"n": self.base.n, "edges": [list(e) for e in self.base.edges()]},
            "steps": [
                {
                    "op": s.op,
                    "pattern_id": s.pattern_id,
                    "image": list(s.image),
                    "roles": dict(s.roles),
                    "added": list(s.added),
                    "removed_edge": list(s.removed_edge) if s.removed_edge else None,
                }
                for s in self.steps
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Certificate":
        base = Tree.from_edges(d["base"]["n"], [tuple(e) for e in d["base"]["edges"]])
        steps = tuple(
            OpStep(
                op=s["op"],
                pattern_id=s.get("pattern_id"),
                image=tuple(s["image"]),
                added=tuple(s.get("added") or ()),
                removed_edge=tuple(s["removed_edge"]) if s.get("removed_edge") else None,
                roles=dict(s.get("roles") or {}),
            )
            for s in d["steps"]
        )
        return cls(base, steps)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def make_step(t: Tree, op: str, pattern_id: str | None, image: Sequence[int]) -> OpStep:
    """Build the OpStep for applying ``op`` to ``t`` at the given embedding."""
    n = t.n
    added = tuple(range(n, n + ARITY[op]))
    if op == "O3":
        return OpStep(op, None, tuple(image), added, None, {"v": image[0]})
    p = pt.get(pattern_id)
    roles = {r: image[i] for r, i in p.roles.items()}
    removed = (roles["v1"], roles["v2"]) if op == "O6" else None
    return OpStep(op, pattern_id, tuple(image), added, removed, roles)


def _check_step(t: Tree, step: OpStep, o4_includes_t14: bool) -> None:
    if step.added and step.added != tuple(range(t.n, t.n + ARITY[step.op])):
        raise NoSuchEmbedding(f"added ids {step.added} do not continue the labeling at {t.n}")
    if step.op == "O3":
        if len(step.image) != 1 or not 0 <= step.image[0] < t.n:
            raise InvalidAttacher(f"O3 needs one attacher in 0..{t.n - 1}, got {step.image}")
        return
    if step.pattern_id not in pt.admissible(step.op, o4_includes_t14):
        raise InadmissiblePattern(f"{step.pattern_id} is not admissible for {step.op}")
    p = pt.get(step.pattern_id)
    if not pt.is_pdi_embedding(t, p, step.image):
        raise NoSuchEmbedding(f"{step.pattern_id} is not a PDI-subtree at {step.image}")
    if step.roles and any(step.image[i] != step.roles.get(r) for r, i in p.roles.items()):
        raise NoSuchEmbedding("role images disagree with the embedding")
    if step.op == "O6" and step.removed_edge is not None:
        want = (step.image[p.roles["v1"]], step.image[p.roles["v2"]])
        if tuple(step.removed_edge) != want:
            raise NoSuchEmbedding(f"O6 must remove {want}, step says {step.removed_edge}")


def apply_O(t: Tree, step: OpStep, o4_includes_t14: bool = True) -> Tree:
    """Apply one of O1-O6; new vertices take ids n, n+1, n+2 in the order
    u / u1, u2 / u1, u2, u3."""
    _check_step(t, step, o4_includes_t14)
    n = t.n
    edges = t.edges()
    op = step.op
    if op == "O3":
        v = step.image[0]
        edges += [(n, n + 1), (n + 1, n + 2), (v, n + 1)]
    else:
        p = pt.get(step.pattern_id)
        role = {r: step.image[i] for r, i in p.roles.items()}
        if op == "O1":
            edges.append((role["v"], n))
        elif op == "O2":
            edges += [(role["v"], n), (n, n + 1)]
        elif op == "O4":
            edges += [(role["v"], n), (n, n + 1), (n + 1, n + 2)]
        elif op == "O5":
            edges += [(role["v1"], n), (n, n + 2), (role["v2"], n + 1)]
        else:
            v1, v2 = role["v1"], role["v2"]
            edges = [e for e in edges if set(e) != {v1, v2}]
            edges += [(v1, n), (n, n + 1), (n + 1, n + 2), (v2, n + 1)]
    return Tree.from_edges(n + ARITY[op], edges)


def applicable_steps(t: Tree, op: str, o4_includes_t14: bool = True) -> list[OpStep]:
    if op == "O3":
        return [make_step(t, "O3", None, (v,)) for v in range(t.n)]
    out = []
    for pid in pt.admissible(op, o4_includes_t14):
        for emb in pt.find_pdi_embeddings(t, pt.get(pid)):
            out.append(make_step(t, op, pid, emb.image))
    return out


def replay(cert: Certificate, o4_includes_t14: bool = True) -> Tree:
    t = cert.base
    for step in cert.steps:
        t = apply_O(t, step, o4_includes_t14)
    return t


# global family R1-R4 --------------------------------------------------------


def _attach(t: Tree, new_edges: list[tuple[int, int]], count: int) -> Tree:
    return Tree.from_edges(t.n + count, t.edges() + new_edges)


def _neighbour_clause(t: Tree, w: int, op: str) -> None:
    """If gamma2(T-w) = gamma2(T)-1, no neighbour of w may lie in a gamma2(T-w)-set."""
    rest, relabel = t.delete([w])
    if gamma2(rest) != gamma2(t) - 1:
        return
    for x in t.adj[w]:
        if in_some_gamma2_set(rest, relabel[x]):
            raise PreconditionViolated(
                f"{op}: neighbour {x} of {w} belongs to a gamma2(T-w)-set"
            )


def apply_R(t: Tree, op: str, **params: int) -> Tree:
    """Apply R1 (attach, p), R2 (w, p), R3 (v) or R4 (w) after checking the
    global preconditions with the exact solvers."""
    n = t.n
    if op == "R1":
        at, p = params["attach"], params["p"]
        if p < 2:
            raise PreconditionViolated("R1: star needs p >= 2")
        if not 0 <= at < n:
            raise PreconditionViolated(f"R1: no vertex {at}")
        u = n
        return _attach(t, [(at, u)] + [(u, u + i) for i in range(1, p + 1)], p + 1)
    if op == "R2":
        w, p = params["w"], params["p"]
        if p < 1:
            raise PreconditionViolated("R2: double star needs p >= 1")
        if not 0 <= w < n:
            raise PreconditionViolated(f"R2: no vertex {w}")
        _neighbour_clause(t, w, "R2")
        u, v = n, n + 1
        leaves = [(u, n + 2)] + [(v, n + 3 + i) for i in range(p)]
        return _attach(t, [(w, v), (u, v)] + leaves, p + 3)
    if op == "R3":
        v = params["v"]
        if not 0 <= v < n or t.n < 2 or t.degree(v) != 1:
            raise PreconditionViolated(f"R3: {v} is not a leaf")
        if not in_every_alpha2_set(t, v):
            raise PreconditionViolated(f"R3: leaf {v} is not in every alpha2-set")
        rest, _ = t.delete([v])
        if alpha2(rest) + 1 != alpha2(t):
            raise PreconditionViolated(f"R3: alpha2(T-{v}) + 1 != alpha2(T)")
        return _attach(t, [(v, n), (n, n + 1)], 2)
    if op == "R4":
        w = params["w"]
        if not 0 <= w < n:
            raise PreconditionViolated(f"R4: no vertex {w}")
        if not in_some_gamma2_set(t, w):
            raise PreconditionViolated(f"R4: {w} is in no gamma2-set")
        rest, _ = t.delete([w])
        if gamma2(rest) > gamma2(t):
            raise PreconditionViolated(f"R4: gamma2(T-{w}) > gamma2(T)")
        _neighbour_clause(t, w, "R4")
        return _attach(t, [(w, n), (n, n + 1), (n + 1, n + 2)], 3)
    raise ValueError(f"unknown operation {op}")


# random generation ------------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; identical streams on every platform."""
    return np.random.Generator(np.random.Philox(seed))


def small_trees() -> list[Tree]:
    """All trees of order at most 4, one per isomorphism class."""
    return [t for n in range(1, 5) for t in enumerate_free_trees(n)]


def random_member(
    seed: int,
    steps: int,
    op_weights: Mapping[str, float] | None = None,
    o4_includes_t14: bool = True,
) -> tuple[Tree, Certificate]:
    """Grow a random member of the family from a random base of order <= 4."""
    rng = make_rng(seed)
    weights = {op: 1.0 for op in OPS}
    if op_weights:
        weights.update(op_weights)
    bases = small_trees()
    base = bases[int(rng.integers(len(bases)))]
    t = base
    done: list[OpStep] = []
    for _ in range(steps):
        live = [op for op in OPS if weights[op] > 0]
        while live:
            w = np.array([weights[op] for op in live], dtype=float)
            op = live[int(rng.choice(len(live), p=w / w.sum()))]
            options = applicable_steps(t, op, o4_includes_t14)
            if options:
                step = options[int(rng.integers(len(options)))]
                t = apply_O(t, step, o4_includes_t14)
                done.append(step)
                break
            live.remove(op)
    return t, Certificate(base, tuple(done))


def random_tree(rng: np.random.Generator, n: int) -> Tree:
    if n <= 2:
        return Tree.from_edges(n, [(0, 1)] if n == 2 else [])
    seq = [int(x) for x in rng.integers(n, size=n - 2)]
    return prufer_decode(seq, n)


def random_host_with(rng: np.random.Generator, p: pt.Pattern, extra: int) -> Tree:
    """Random tree containing ``p`` as a PDI-subtree: a random tree on
    ``extra`` + 1 vertices is glued onto the white vertex."""
    other = random_tree(rng, extra + 1)
    k = p.order
    anchor = int(rng.integers(other.n))
    relabel = {}
    nxt = k
    for v in range(other.n):
        if v == anchor:
            relabel[v] = p.white
        else:
            relabel[v] = nxt
            nxt += 1
    edges = p.shape.edges() + [(relabel[a], relabel[b]) for a, b in other.edges()]
    return Tree.from_edges(nxt, edges)


def random_R_sequence(seed: int, length: int, max_tries: int = 50) -> tuple[Tree, list[tuple[str, dict]]]:
    """Random global-family member: a star followed by up to ``length``
    R-operations whose preconditions hold."""
    rng = make_rng(seed)
    p0 = int(rng.integers(1, 5))
    t = Tree.from_edges(p0 + 1, [(0, i) for i in range(1, p0 + 1)])
    history: list[tuple[str, dict]] = []
    for _ in range(length):
        for _ in range(max_tries):
            op = ("R1", "R2", "R3", "R4")[int(rng.integers(4))]
            v = int(rng.integers(t.n))
            if op == "R1":
                params = {"attach": v, "p": int(rng.integers(2, 4))}
            elif op == "R2":
                params = {"w": v, "p": int(rng.integers(1, 3))}
            elif op == "R3":
                params = {"v": v}
            else:
                params = {"w": v}
            try:
                t = apply_R(t, op, **params)
            except PreconditionViolated:
                continue
            history.append((op, params))
            break
    return t, history
