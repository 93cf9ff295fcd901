"""Registry of the 25 special trees and prescribed-degree-induced matching.

A pattern embeds into a host tree when it appears as an induced subtree and
every *black* pattern vertex keeps its pattern degree in the host.  The one
white vertex is the attachment point and its host degree is free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from .errors import InadmissiblePattern, SelfCheckFailed
from .solvers import brute_alpha2, brute_gamma2, is_2_dominating, is_2_independent
from .tree import Forest, Tree

FIXTURE_FORMAT = 1

B_FAMILY = {
    "B1": 0, "B2": 1, "B3": 2,
    "B4": 3, "B5": 3, "B6": 3,
    "B7": 4, "B8": 4,
    "B9": 5, "B10": 5,
}

PDIB_E_PATTERNS = ("T3", "T4", "T7", "T11", "T12", "T13", "T15")

# operation -> base patterns it may act on; "O4+T14" reflects the inclusion flag
ADMISSIBLE: dict[str, tuple[str, ...]] = {
    "O1": ("T1", "T2", "T8"),
    "O2": ("T4", "T11", "T12", "T13", "T15"),
    "O4": ("T1", "T2", "T3", "T5", "T6", "T7", "T9", "T10"),
    "O5": ("T6",),
    "O6": ("T14",),
}
O4_OPTIONAL = ("T14",)


def admissible(op: str, o4_includes_t14: bool = True) -> tuple[str, ...]:
    pats = ADMISSIBLE[op]
    if op == "O4" and o4_includes_t14:
        pats = pats + O4_OPTIONAL
    return pats


@dataclass(frozen=True)
class Pattern:
    id: str
    shape: Tree
    white: int
    roles: Mapping[str, int]
    squares: frozenset[int] = frozenset()
    diamonds: frozenset[int] = frozenset()
    b_family: int | None = None
    # filled only for augmented patterns
    base: str | None = None
    op: str | None = None
    removal: tuple[int, ...] = ()
    removed_edge: tuple[int, int] | None = None
    _plan: tuple = field(default=(), compare=False, repr=False)

    @property
    def order(self) -> int:
        return self.shape.n

    @property
    def blacks(self) -> frozenset[int]:
        return frozenset(v for v in range(self.shape.n) if v != self.white)

    def plan(self) -> tuple:
        """Matching order: (vertex, already-placed neighbour, required degree)."""
        if not self._plan:
            sh = self.shape
            order = [(self.white, None, None)]
            placed = {self.white}
            i = 0
            while i < len(order):
                x = order[i][0]
                for y in sh.adj[x]:
                    if y not in placed:
                        placed.add(y)
                        order.append((y, x, len(sh.adj[y])))
                i += 1
            object.__setattr__(self, "_plan", tuple(order))
        return self._plan


@dataclass(frozen=True)
class Embedding:
    pattern: str
    image: tuple[int, ...]  # image[i] is the host vertex of pattern vertex i
    host: Forest | None = field(default=None, compare=False, repr=False)

    def role(self, p: Pattern, name: str) -> int:
        return self.image[p.roles[name]]


# fixture ------------------------------------------------------------------


def _ints(text: str) -> list[int]:
    return [] if text in ("", "-") else [int(x) for x in text.split(",")]


def parse_fixture(text: str) -> list[Pattern]:
    patterns = []
    version = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("format "):
            version = int(line.split()[1])
            continue
        pid, *fields = line.split()
        kv = dict(f.split("=", 1) for f in fields)
        edges = [] if kv["edges"] == "-" else [
            tuple(map(int, e.split("-"))) for e in kv["edges"].split(",")
        ]
        roles = {}
        for item in kv["roles"].split(","):
            name, vid = item.split(":")
            roles[name] = int(vid)
        patterns.append(Pattern(
            id=pid,
            shape=Tree.from_edges(int(kv["order"]), edges),
            white=int(kv["white"]),
            roles=roles,
            squares=frozenset(_ints(kv["squares"])),
            diamonds=frozenset(_ints(kv["diamonds"])),
            b_family=B_FAMILY.get(pid),
        ))
    if version != FIXTURE_FORMAT:
        raise ValueError(f"unsupported fixture format {version}")
    return patterns


def format_fixture(patterns: Iterable[Pattern]) -> str:
    lines = [f"format {FIXTURE_FORMAT}"]
    for p in patterns:
        edges = ",".join(f"{a}-{b}" for a, b in p.shape.edges()) or "-"
        roles = ",".join(f"{k}:{v}" for k, v in sorted(p.roles.items()))
        lines.append(
            f"{p.id} order={p.order} edges={edges} white={p.white} roles={roles} "
            f"squares={','.join(map(str, sorted(p.squares)))} "
            f"diamonds={','.join(map(str, sorted(p.diamonds)))}"
        )
    return "\n".join(lines) + "\n"


def expected_roles(pid: str) -> set[str]:
    if pid in ("T6", "T14"):
        return {"v", "v1", "v2"}
    return {"w"} if pid.startswith("B") else {"v"}


def self_check(p: Pattern) -> None:
    """Raise SelfCheckFailed if ``p`` breaks a registry invariant."""
    if not 0 <= p.white < p.order:
        raise SelfCheckFailed(p.id, "white vertex out of range")
    if set(p.roles) != expected_roles(p.id):
        raise SelfCheckFailed(p.id, f"roles {sorted(p.roles)} != {sorted(expected_roles(p.id))}")
    if not is_2_dominating(p.shape, p.squares):
        raise SelfCheckFailed(p.id, "squares are not 2-dominating")
    if len(p.squares) != brute_gamma2(p.shape):
        raise SelfCheckFailed(p.id, "square count differs from gamma2")
    if not is_2_independent(p.shape, p.diamonds):
        raise SelfCheckFailed(p.id, "diamonds are not 2-independent")


def load_registry(text: str | None = None) -> list[Pattern]:
    if text is None:
        text = resources.files("twodom").joinpath("data/special_trees.txt").read_text()
    pats = parse_fixture(text)
    ids = [p.id for p in pats]
    want = [f"T{i}" for i in range(1, 16)] + [f"B{i}" for i in range(1, 11)]
    if ids != want:
        raise SelfCheckFailed("registry", f"ids {ids} != {want}")
    for p in pats:
        self_check(p)
    return pats


@lru_cache(maxsize=None)
def _registry() -> tuple[Pattern, ...]:
    return tuple(load_registry())


def registry() -> list[Pattern]:
    return list(_registry())


def get(pid: str) -> Pattern:
    for p in _registry():
        if p.id == pid:
            return p
    raise KeyError(pid)


def diamond_discrepancies(patterns: Iterable[Pattern] | None = None) -> list[tuple[str, int, int]]:
    """(id, diamond count, alpha2) for each pattern whose diamonds are not maximum."""
    out = []
    for p in patterns if patterns is not None else _registry():
        a = brute_alpha2(p.shape)
        if len(p.diamonds) != a:
            out.append((p.id, len(p.diamonds), a))
    return out


# augmentation -------------------------------------------------------------


def augment(p: Pattern, op: str, o4_includes_t14: bool = True) -> Pattern:
    """Attach the vertices added by ``op`` (all black) to pattern ``p``."""
    if op not in ADMISSIBLE or p.id not in admissible(op, o4_includes_t14):
        raise InadmissiblePattern(f"{p.id} is not admissible for {op}")
    n = p.order
    edges = p.shape.edges()
    removed_edge = None
    if op == "O1":
        v = p.roles["v"]
        x = (n,)
        edges += [(v, n)]
    elif op == "O2":
        v = p.roles["v"]
        x = (n, n + 1)
        edges += [(v, n), (n, n + 1)]
    elif op == "O4":
        v = p.roles["v"]
        x = (n, n + 1, n + 2)
        edges += [(v, n), (n, n + 1), (n + 1, n + 2)]
    elif op == "O5":
        v1, v2 = p.roles["v1"], p.roles["v2"]
        u1, u2, u3 = n, n + 1, n + 2
        x = (u1, u2, u3)
        edges += [(v1, u1), (u1, u3), (v2, u2)]
    else:  # O6
        v1, v2 = p.roles["v1"], p.roles["v2"]
        u1, u2, u3 = n, n + 1, n + 2
        x = (u1, u2, u3)
        removed_edge = (v1, v2)
        edges = [e for e in edges if set(e) != {v1, v2}]
        edges += [(v1, u1), (u1, u2), (u2, u3), (v2, u2)]
    return Pattern(
        id=f"{p.id}^{op}",
        shape=Tree.from_edges(n + len(x), edges),
        white=p.white,
        roles=dict(p.roles),
        base=p.id,
        op=op,
        removal=x,
        removed_edge=removed_edge,
    )


# matching -----------------------------------------------------------------


def is_pdi_embedding(host: Forest, p: Pattern, image: tuple[int, ...]) -> bool:
    """Direct check of the embedding conditions, independent of the search."""
    k = p.order
    if len(image) != k or len(set(image)) != k:
        return False
    if any(not 0 <= x < host.n for x in image):
        return False
    for i in range(k):
        host_nbrs = set(host.adj[image[i]])
        for j in range(i + 1, k):
            if (j in p.shape.adj[i]) != (image[j] in host_nbrs):
                return False
        if i != p.white and len(host_nbrs) != len(p.shape.adj[i]):
            return False
    return True


def _dedup_key(p: Pattern, image: tuple[int, ...]) -> tuple:
    roles = tuple(image[p.roles[r]] for r in sorted(p.roles))
    removal = frozenset(image[i] for i in p.removal)
    return frozenset(image), roles, removal


def iter_raw_embeddings(host: Forest, p: Pattern, anchors: Iterable[int] | None = None):
    """Every role-blind PDI map of ``p`` into ``host`` (automorphic copies included)."""
    plan = p.plan()
    k = len(plan)
    hadj = host.adj
    white_deg = len(p.shape.adj[p.white])
    img: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int):
        if i == k:
            yield tuple(img[j] for j in range(k))
            return
        vtx, par, deg = plan[i]
        for y in hadj[img[par]]:
            if y in used or len(hadj[y]) != deg:
                continue
            img[vtx] = y
            used.add(y)
            yield from extend(i + 1)
            used.discard(y)
        img.pop(vtx, None)

    for h in range(host.n) if anchors is None else anchors:
        if len(hadj[h]) < white_deg:
            continue
        img[p.white] = h
        used.add(h)
        yield from extend(1)
        used.discard(h)
        img.clear()


def find_pdi_embeddings(host: Forest, p: Pattern) -> list[Embedding]:
    """All PDI embeddings of ``p`` in ``host``, merged by image set and role images."""
    best: dict[tuple, tuple[int, ...]] = {}
    for image in iter_raw_embeddings(host, p):
        key = _dedup_key(p, image)
        if key not in best or image < best[key]:
            best[key] = image
    return [Embedding(p.id, im, host) for im in sorted(best.values())]
