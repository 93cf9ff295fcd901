import random

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import trees
from oracles import leaf_extension_classes, prufer_class_count, sorted_degree_prufer_count, to_nx
from twodom.errors import MalformedGraph6, NotATree
from twodom.tree import (
    RootedView,
    Tree,
    boundary,
    build_tree,
    canonical_code,
    centers,
    decode_graph6,
    eccentric_leaf,
    encode_graph6,
    enumerate_free_trees,
    is_isomorphic,
    labeled_trees,
    parse_edge_list,
    path_tree,
    prufer_decode,
    star_tree,
)

# A000055, n = 1..16
FREE_TREE_COUNTS = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320]


def relabel(t: Tree, perm) -> Tree:
    return Tree.from_edges(t.n, [(perm[a], perm[b]) for a, b in t.edges()])


def test_build_tree_examples():
    assert build_tree(1, []).n == 1
    p3 = build_tree(3, [(0, 1), (1, 2)])
    assert p3.adj == ((1,), (0, 2), (1,))
    with pytest.raises(NotATree):
        build_tree(3, [(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("n,edges", [
    (4, [(0, 1), (2, 3), (0, 1)]),
    (3, [(0, 0), (1, 2)]),
    (4, [(0, 1), (1, 2), (0, 2)]),
    (3, [(0, 1), (1, 5)]),
    (2, []),
])
def test_build_tree_rejects(n, edges):
    with pytest.raises(NotATree):
        build_tree(n, edges)


def test_graph6_hand_encoded():
    assert encode_graph6(Tree.from_edges(1, [])) == "@"
    assert encode_graph6(path_tree(3)) == "Bg"
    assert decode_graph6("Bg") == path_tree(3)


@given(trees(max_n=70))
def test_graph6_round_trip_and_matches_networkx(t):
    s = encode_graph6(t)
    assert decode_graph6(s) == t
    assert nx.to_graph6_bytes(to_nx(t), header=False).decode().strip() == s


@pytest.mark.parametrize("bad", ["", "B", "Bx~", "B\x01", "Bgg"])
def test_graph6_malformed(bad):
    with pytest.raises(MalformedGraph6):
        decode_graph6(bad)


def test_graph6_non_tree():
    with pytest.raises(NotATree):
        decode_graph6("Bw")  # triangle


def test_edge_list_text_round_trip():
    t = star_tree(3)
    assert parse_edge_list(t.to_edge_list_text()) == t


def test_canonical_code_examples():
    p4 = path_tree(4)
    assert canonical_code(relabel(p4, [2, 0, 3, 1])) == canonical_code(p4)
    assert canonical_code(p4) != canonical_code(star_tree(3))
    assert len({canonical_code(t) for t in labeled_trees(5)}) == 3


@settings(max_examples=200)
@given(trees(max_n=12), trees(max_n=12))
def test_canonical_code_agrees_with_networkx(a, b):
    assert is_isomorphic(a, b) == nx.is_isomorphic(to_nx(a), to_nx(b))


@given(trees(max_n=20))
def test_canonical_code_relabel_invariant(t):
    perm = list(range(t.n))
    random.Random(t.n).shuffle(perm)
    assert canonical_code(relabel(t, perm)) == canonical_code(t)


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_matches_full_prufer(n):
    assert sum(1 for _ in enumerate_free_trees(n)) == prufer_class_count(n)


@pytest.mark.parametrize("n", range(1, 11))
def test_enumeration_matches_degree_sorted_prufer(n):
    assert sum(1 for _ in enumerate_free_trees(n)) == sorted_degree_prufer_count(n)


def test_enumeration_counts_and_distinctness():
    for n, want in enumerate(FREE_TREE_COUNTS[:13], start=1):
        ts = list(enumerate_free_trees(n))
        assert len(ts) == want
        assert len({canonical_code(t) for t in ts}) == want
        assert all(t.n == n and len(t.edges()) == n - 1 for t in ts)
    assert len(leaf_extension_classes(12)) == FREE_TREE_COUNTS[11]


def test_enumeration_is_deterministic():
    assert list(enumerate_free_trees(9)) == list(enumerate_free_trees(9))


def test_boundary():
    assert boundary(path_tree(3), {0, 1}) == {1}
    assert boundary(path_tree(3), {0, 1, 2}) == set()
    assert boundary(path_tree(5), {0, 1, 2}) == {2}


@given(trees(max_n=15))
def test_boundary_subset(t):
    u = set(range(0, t.n, 2))
    assert boundary(t, u) <= u


def test_eccentric_leaf():
    assert eccentric_leaf(RootedView.of(path_tree(3), 0), 1) == 2
    assert eccentric_leaf(RootedView.of(path_tree(3), 0), 2) == 2
    # spider at head 0: leg 0-1 and leg 0-2-3-4
    spider = Tree.from_edges(5, [(0, 1), (0, 2), (2, 3), (3, 4)])
    assert eccentric_leaf(RootedView.of(spider, 0), 0) == 4


def test_centers():
    assert centers(path_tree(5)) == [2]
    assert centers(path_tree(4)) == [1, 2]
    assert centers(Tree.from_edges(1, [])) == [0]


def test_rooted_view_consistent():
    t = prufer_decode([4, 4, 0, 7, 2, 9, 9, 1], 10)
    rv = RootedView.of(t, 3)
    assert rv.parent[3] is None
    for v in range(t.n):
        for c in rv.children[v]:
            assert rv.parent[c] == v
    assert sorted(rv.order) == list(range(t.n))


def test_delete_gives_forest():
    f, relabel_map = path_tree(5).delete([2])
    assert f.n == 4 and len(f.components()) == 2
    assert relabel_map == {0: 0, 1: 1, 3: 2, 4: 3}
