"""Tree representation, serialization, canonical forms and enumeration.

Vertices are dense integers ``0..n-1``.  A :class:`Tree` is immutable; every
operation that changes structure returns a new object.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import MalformedGraph6, NotATree

Edge = tuple[int, int]


def _adjacency(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    seen: set[Edge] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise NotATree(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise NotATree(f"self-loop at {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise NotATree(f"duplicate edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj:
        nbrs.sort()
    return adj


@dataclass(frozen=True)
class Forest:
    """Acyclic graph on ``0..n-1``; the result of deleting vertices from a tree."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps


@dataclass(frozen=True)
class Tree(Forest):
    """A finite tree.  Construct with :func:`build_tree` or :meth:`from_edges`."""

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise NotATree("a tree needs at least one vertex")
        if len(self.adj) != n:
            raise NotATree("adjacency length differs from n")
        m2 = sum(len(a) for a in self.adj)
        if m2 != 2 * (n - 1):
            raise NotATree(f"edge count {m2 // 2} != n-1 = {n - 1}")
        seen = [False] * n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        if count != n:
            raise NotATree("graph is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Tree":
        adj = _adjacency(n, edges)
        return cls(n, tuple(tuple(a) for a in adj))

    @property
    def order(self) -> int:
        return self.n

    def leaves(self) -> list[int]:
        if self.n == 1:
            return [0]
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def delete(self, vertices: Iterable[int]) -> tuple[Forest, dict[int, int]]:
        """Remove ``vertices``; return the forest and the old->new id map."""
        gone = set(vertices)
        keep = [v for v in range(self.n) if v not in gone]
        relabel = {old: new for new, old in enumerate(keep)}
        adj = tuple(
            tuple(relabel[y] for y in self.adj[x] if y in relabel) for x in keep
        )
        return Forest(len(keep), adj), relabel

    def rooted(self, root: int = 0) -> "RootedView":
        return RootedView.of(self, root)

    def to_edge_list_text(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


def build_tree(n: int, edges: Sequence[Edge]) -> Tree:
    """Validate ``edges`` on ``n`` vertices and return the tree.

    Raises NotATree for cycles, disconnection, duplicates and self-loops.
    """
    edges = [tuple(e) for e in edges]
    if len(edges) != n - 1:
        # report duplicates / loops first since they are the more precise cause
        _adjacency(n, edges)
        raise NotATree(f"edge count {len(edges)} != n-1 = {n - 1}")
    return Tree.from_edges(n, edges)


def path_tree(n: int) -> Tree:
    return Tree.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(leaves: int) -> Tree:
    return Tree.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def parse_edge_list(text: str) -> Tree:
    """Parse the ``n`` / ``u v`` per line edge-list format."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or len(rows[0]) != 1:
        raise NotATree("edge list must start with a line holding n")
    try:
        n = int(rows[0][0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise NotATree(f"bad edge list: {exc}") from None
    return build_tree(n, edges)


# graph6 ------------------------------------------------------------------


def _g6_encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return chr(126) * 2 + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def encode_graph6(t: Forest) -> str:
    """Encode as graph6: order bytes, then the upper triangle in column order."""
    n = t.n
    bits = []
    for j in range(1, n):
        row = set(t.adj[j])
        for i in range(j):
            bits.append(1 if i in row else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return _g6_encode_n(n) + "".join(chars)


def decode_graph6(text: str) -> Tree:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise MalformedGraph6("empty graph6 string")
    vals = [ord(c) - 63 for c in s]
    if any(v < 0 or v > 63 for v in vals):
        raise MalformedGraph6(f"character outside graph6 range in {s!r}")
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) >= 4 and vals[1] != 63:
        n, pos = (vals[1] << 12) | (vals[2] << 6) | vals[3], 4
    elif len(vals) >= 8:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    else:
        raise MalformedGraph6(f"truncated order field in {s!r}")
    nbits = n * (n - 1) // 2
    body = vals[pos:]
    if len(body) != (nbits + 5) // 6:
        raise MalformedGraph6(
            f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(body)}"
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if n == 0:
        raise NotATree("graph6 encodes the empty graph")
    return build_tree(n, edges)


# rooted views and canonical codes -----------------------------------------


@dataclass(frozen=True)
class RootedView:
    tree: Tree
    root: int
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]  # BFS order from the root

    @classmethod
    def of(cls, tree: Forest, root: int) -> "RootedView":
        parent: list[int | None] = [None] * tree.n
        children: list[list[int]] = [[] for _ in range(tree.n)]
        order = [root]
        seen = {root}
        dq = deque([root])
        while dq:
            x = dq.popleft()
            for y in tree.adj[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    children[x].append(y)
                    order.append(y)
                    dq.append(y)
        return cls(tree, root, tuple(parent), tuple(map(tuple, children)), tuple(order))

    def descendants(self, v: int) -> list[int]:
        """D[v]: v together with all its descendants."""
        out = [v]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out


def eccentric_leaf(rv: RootedView, w: int) -> int:
    """Leaf of T_w farthest from ``w``; smallest id among ties."""
    best = w
    frontier = [w]
    d = 0
    while frontier:
        nxt = []
        for x in frontier:
            nxt.extend(rv.children[x])
        if not nxt:
            break
        d += 1
        frontier = nxt
        best = min(nxt)
    return best


def boundary(t: Forest, u: Iterable[int]) -> set[int]:
    """Members of ``u`` with at least one neighbour outside ``u``."""
    members = set(u)
    return {x for x in members if any(y not in members for y in t.adj[x])}


def centers(t: Forest) -> list[int]:
    """The one or two central vertices, by repeated leaf stripping."""
    n = t.n
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in t.adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for x in layer:
            for y in t.adj[x]:
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt
    return sorted(layer)


def rooted_code(t: Forest, root: int, banned: int | None = None) -> str:
    """AHU parenthesis code of ``t`` rooted at ``root``.

    ``banned`` excludes one neighbour of the root (used for edge-split codes).
    """
    parent = {root: banned}
    order = [root]
    for x in order:
        for y in t.adj[x]:
            if y != parent[x]:
                parent[y] = x
                order.append(y)
    code: dict[int, list[str]] = {x: [] for x in order}
    result = ""
    for x in reversed(order):
        kids = code.pop(x)
        kids.sort()
        result = "(" + "".join(kids) + ")"
        p = parent[x]
        if x != root:
            code[p].append(result)
    return result


def canonical_code(t: Forest) -> str:
    """Isomorphism-invariant code: AHU at the centre, min over a bicentre."""
    return min(rooted_code(t, c) for c in centers(t))


def is_isomorphic(a: Forest, b: Forest) -> bool:
    return a.n == b.n and canonical_code(a) == canonical_code(b)


# enumeration --------------------------------------------------------------


def _tree_from_levels(levels: Sequence[int]) -> Tree:
    edges = []
    stack: list[int] = []
    for i, d in enumerate(levels):
        del stack[d:]
        if stack:
            edges.append((stack[-1], i))
        stack.append(i)
    return Tree.from_edges(len(levels), edges)


def rooted_level_sequences(n: int) -> Iterator[list[int]]:
    """All rooted trees on ``n`` vertices as canonical (lex-largest) level sequences.

    Successor rule of Beyer and Hedetniemi; root has level 0.
    """
    if n < 1:
        return
    seq = list(range(n))
    while True:
        yield seq
        p = n - 1
        while p > 0 and seq[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while seq[q] != seq[p] - 1:
            q -= 1
        seq = seq[:]
        for i in range(p, n):
            seq[i] = seq[i - p + q]


def _root_segment_depths(seq: Sequence[int]) -> list[tuple[int, int]]:
    """(max depth, first index) of each root child's subtree, in order."""
    segs = []
    for i in range(1, len(seq)):
        d = seq[i]
        if d == 1:
            segs.append([1, i])
        elif d > segs[-1][0]:
            segs[-1][0] = d
    return [tuple(s) for s in segs]


def enumerate_free_trees(n: int) -> Iterator[Tree]:
    """One tree per isomorphism class of free trees on ``n`` vertices.

    Rooted level sequences are filtered to those rooted at a centre; for a
    bicentral tree only the rooting with the smaller AHU code survives.
    """
    if n < 1:
        raise ValueError("n must be positive")
    for seq in rooted_level_sequences(n):
        if n <= 2:
            yield _tree_from_levels(seq)
            continue
        segs = _root_segment_depths(seq)
        depths = sorted((s[0] for s in segs), reverse=True)
        d1 = depths[0]
        d2 = depths[1] if len(depths) > 1 else 0
        if d1 == d2:
            yield _tree_from_levels(seq)
        elif d1 == d2 + 1:
            t = _tree_from_levels(seq)
            other = next(s[1] for s in segs if s[0] == d1)
            if rooted_code(t, 0) <= rooted_code(t, other):
                yield t


def prufer_decode(seq: Sequence[int], n: int) -> Tree:
    if n == 1:
        return Tree.from_edges(1, [])
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for x in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(heap, x)
    a, b = heapq.heappop(heap), heapq.heappop(heap)
    edges.append((a, b))
    return Tree.from_edges(n, edges)


def labeled_trees(n: int) -> Iterator[Tree]:
    """All n^(n-2) labeled trees on n vertices via Prüfer sequences."""
    if n <= 2:
        yield path_tree(n)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)
