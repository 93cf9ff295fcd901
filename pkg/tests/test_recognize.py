import dataclasses
import importlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import trees
from twodom import patterns as pt
from twodom.construct import Certificate, OpStep, random_member
from twodom.errors import InternalInconsistency
from twodom.recognize import (
    ReductionStep,
    all_reductions,
    apply_reduction,
    augmented_patterns,
    recognize,
    reduce_once,
    verify_certificate,
)
from twodom.solvers import alpha2, gamma2
from twodom.tree import Tree, canonical_code, enumerate_free_trees, path_tree, star_tree


def test_reduce_once_p6():
    p6 = path_tree(6)
    # fixed scan order reaches O2 before O4: T4 under O2 strips a 2-vertex tail
    r = reduce_once(p6)
    assert (r.op, r.pattern_id, r.removed) == ("O2", "T4^O2", (4, 5))
    # the inverse O4 via augmented T2 is also available and leaves P3
    o4 = [x for x in all_reductions(p6) if x.pattern_id == "T2^O4"]
    assert o4
    smaller, _ = apply_reduction(p6, o4[0])
    assert canonical_code(smaller) == canonical_code(path_tree(3))


def test_reduce_once_examples():
    assert reduce_once(path_tree(5)) is None
    r = reduce_once(star_tree(4))
    assert r.pattern_id == "T1^O1" and len(r.removed) == 1
    smaller, _ = apply_reduction(star_tree(4), r)
    assert canonical_code(smaller) == canonical_code(star_tree(3))
    assert reduce_once(path_tree(4)) is None  # base case


def test_o3_inverse():
    # hub 1 carries leaves 0 and 2 and hangs off vertex 3 of the tail 3-4
    spider = Tree.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    sites = [r for r in all_reductions(spider) if r.op == "O3"]
    assert [(r.image, r.removed) for r in sites] == [((3, 0, 1, 2), (0, 1, 2))]
    smaller, _ = apply_reduction(spider, sites[0])
    assert smaller == path_tree(2)


def test_scan_order():
    ops = [op for op, _ in augmented_patterns()]
    assert ops == sorted(ops)
    ids = [p.id for _, p in augmented_patterns() if p is not None]
    assert ids.index("T14^O4") == ids.index("T10^O4") + 1
    assert "T14^O4" not in [p.id for _, p in augmented_patterns(False) if p is not None]


def test_recognize_examples():
    v = recognize(path_tree(5))
    assert not v.accepted and (v.gamma2, v.alpha2) == (3, 4) and v.certificate is None
    v = recognize(path_tree(6))
    assert v.accepted and (v.gamma2, v.alpha2) == (4, 4)
    assert v.certificate.base.n == 4 and [s.op for s in v.certificate.steps] == ["O2"]
    for p in range(1, 12):
        assert recognize(star_tree(p)).accepted


def test_small_trees_are_base():
    for n in range(1, 5):
        for t in enumerate_free_trees(n):
            v = recognize(t)
            assert v.accepted and v.certificate.steps == () and v.certificate.base == t


def test_certificate_checks():
    cert = recognize(path_tree(6)).certificate
    assert verify_certificate(cert, path_tree(6))
    bad = verify_certificate(cert, path_tree(5))
    assert not bad and bad.reason == "Mismatch"
    # spoil the degree prescription: point the T4 embedding at the wrong end
    s = cert.steps[0]
    broken = Certificate(cert.base, (dataclasses.replace(s, image=tuple(reversed(s.image)), roles={}),))
    chk = verify_certificate(broken, path_tree(6))
    assert not chk and chk.reason == "BadStep" and chk.step == 0


def test_certificate_bad_o3_attacher():
    cert = Certificate(path_tree(2), (OpStep("O3", None, (9,)),))
    assert verify_certificate(cert, path_tree(5)).reason == "BadStep"


def test_certificate_relabelled_input():
    t, cert = random_member(3, 6)
    perm = list(reversed(range(t.n)))
    relabelled = Tree.from_edges(t.n, [(perm[a], perm[b]) for a, b in t.edges()])
    assert verify_certificate(cert, relabelled)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 10))
def test_members_are_recognized_with_valid_certificates(seed, steps):
    t, _ = random_member(seed, steps)
    v = recognize(t)
    assert v.accepted
    assert verify_certificate(v.certificate, t)
    assert len(v.reductions) <= t.n


@settings(max_examples=100, deadline=None)
@given(trees(max_n=16))
def test_recognize_agrees_with_value_equality(t):
    v = recognize(t)
    assert v.accepted == (gamma2(t) == alpha2(t))
    if v.accepted:
        assert verify_certificate(v.certificate, t)


def test_strict_mode_raises_on_disagreement(monkeypatch):
    rec = importlib.import_module("twodom.recognize")
    monkeypatch.setattr(rec, "reduce_once", lambda t, o4=True: None)
    with pytest.raises(InternalInconsistency):
        rec.recognize(path_tree(6), check_steps=False)
    v = rec.recognize(path_tree(6), strict=False, check_steps=False)
    assert not v.accepted and v.gamma2 == v.alpha2


def test_paranoid_agrees_with_greedy():
    for n in range(5, 11):
        for t in enumerate_free_trees(n):
            v = recognize(t, paranoid=True)
            assert v.greedy_accepted is None
            if v.accepted:
                assert verify_certificate(v.certificate, t)


def test_greedy_safety_all_reductions():
    # every applicable reduction on a member keeps alpha2 - gamma2 at zero
    for n in range(5, 11):
        for t in enumerate_free_trees(n):
            if gamma2(t) != alpha2(t):
                continue
            for r in all_reductions(t):
                smaller, _ = apply_reduction(t, r)
                assert smaller.n == t.n - len(r.removed)
                assert gamma2(smaller) == alpha2(smaller), (t.edges(), r)


def test_reduction_step_base_id():
    assert ReductionStep("O4", "T14^O4", (), ()).base_id == "T14"
    assert ReductionStep("O3", None, (), ()).base_id is None


def test_o4_flag_off_still_complete_small():
    for n in range(5, 13):
        for t in enumerate_free_trees(n):
            v = recognize(t, o4_includes_t14=False)
            if v.accepted:
                assert verify_certificate(v.certificate, t, o4_includes_t14=False)
