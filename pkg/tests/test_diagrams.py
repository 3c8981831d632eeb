"""Diagram arithmetic against independent oracles."""

from __future__ import annotations

import itertools
import json

import pytest

from diagmon.diagrams import (
    BoundaryMismatch,
    Diagram,
    ModulusMismatch,
    Skeleton,
    block,
    catalan,
    circle,
    compose,
    enumerate_monoid,
    enumerate_skeletons,
    factorise,
    from_json,
    glue_circles,
    half_diagrams,
    hook,
    identity,
    involute,
    recompose,
    tensor,
    to_json,
)


def trace_circles(a: Skeleton, b: Skeleton) -> int:
    """Oracle for glue_circles: walk explicit edge lists instead of union-find."""
    assert a.bottom == b.top
    # nodes ("a"/"b", point); edges: matching partners and middle gluings
    step = {}
    for x, y in enumerate(a.partner):
        step[("a", x)] = ("a", y)
    for x, y in enumerate(b.partner):
        step[("b", x)] = ("b", y)
    glue = {}
    for j in range(a.bottom):
        glue[("a", j)] = ("b", b.bottom + j)
        glue[("b", b.bottom + j)] = ("a", j)
    outer = [("a", a.bottom + i) for i in range(a.top)]
    outer += [("b", j) for j in range(b.bottom)]
    seen = set()
    for start in outer:
        node = start
        while True:
            seen.add(node)
            node = step[node]
            seen.add(node)
            if node not in glue:
                break
            node = glue[node]
    circles = 0
    for j in range(a.bottom):
        node = ("a", j)
        if node in seen:
            continue
        circles += 1
        while node not in seen:
            seen.add(node)
            nxt = step[node]
            seen.add(nxt)
            node = glue[nxt]
    return circles


def test_identity_cases():
    empty = identity(0, 1)
    assert empty.skeleton.pairs() == ()
    assert empty.circles == 0
    d = identity(3, 5)
    assert d.skeleton.pairs() == ((-3, 3), (-2, 2), (-1, 1))
    assert d.circles == 0


def test_identity_is_a_unit():
    e = identity(4, 2)
    for d in enumerate_monoid(4, 2):
        assert compose(e, d) == d
        assert compose(d, e) == d


def test_circle_generator():
    o = circle(2, 3)
    assert o.skeleton == identity(2, 3).skeleton
    assert o.circles == 1


def test_hook_shape():
    u1 = hook(3, 0, 1)
    assert u1.skeleton.pairs() == ((-3, 3), (-2, -1), (1, 2))
    with pytest.raises(ValueError):
        hook(3, 0, 3)
    with pytest.raises(ValueError):
        hook(3, 0, 0)


def test_block_equals_hook_run():
    assert block(3, 1, 2, 1).skeleton == compose(hook(3, 1, 2), hook(3, 1, 1)).skeleton
    assert block(3, 1, 1, 1) == hook(3, 1, 1)
    for n in range(2, 6):
        for i in range(1, n):
            for j in range(1, i + 1):
                run = hook(n, 0, i)
                for t in range(i - 1, j - 1, -1):
                    run = compose(run, hook(n, 0, t))
                assert block(n, 0, i, j) == run


def test_hook_square_relation():
    u1 = hook(3, 2, 1)
    sq = compose(u1, u1)
    assert sq.skeleton == u1.skeleton
    assert sq.circles == 1
    assert sq == compose(circle(3, 2), u1) == compose(u1, circle(3, 2))


def test_cup_cap_closes_circle():
    cup = Diagram(Skeleton.from_pairs(0, 2, [(-1, -2)]), 0, 0)
    cap = Diagram(Skeleton.from_pairs(2, 0, [(1, 2)]), 0, 0)
    d = compose(cap, cup)
    assert d.skeleton.pairs() == ()
    assert d.circles == 1


def test_worked_product_three_cyclic():
    # (cap(1,2), cup(3,4), 3->1, 4->2, two circles) over (cup(1,2) on top,
    # cap(3,4), 1->3, 2->4, one circle): gluing closes one more circle and
    # 4 = 1 mod 3.
    a = Diagram(
        Skeleton.from_pairs(4, 4, [(1, 2), (-3, -4), (3, -1), (4, -2)]), 2, 3
    )
    b = Diagram(
        Skeleton.from_pairs(4, 4, [(-1, -2), (3, 4), (1, -3), (2, -4)]), 1, 3
    )
    prod = compose(a, b)
    assert prod.skeleton.pairs() == ((-4, -3), (-2, 2), (-1, 1), (3, 4))
    assert prod.circles == 1


def test_glue_circles_matches_path_tracing_oracle():
    for bottom, top in [(0, 2), (2, 2), (2, 4), (3, 3), (4, 4), (4, 2)]:
        for a in enumerate_skeletons(bottom, top):
            for b in enumerate_skeletons(top, bottom):
                assert glue_circles(b, a) == trace_circles(b, a)


def test_circle_count_never_seen_through_identity():
    for s in enumerate_skeletons(4, 4):
        assert glue_circles(identity(4, 0).skeleton, s) == 0
        assert glue_circles(s, identity(4, 0).skeleton) == 0


def test_compose_boundary_and_modulus_errors():
    with pytest.raises(BoundaryMismatch):
        compose(identity(3, 2), identity(4, 2))
    with pytest.raises(ModulusMismatch):
        compose(identity(3, 2), identity(3, 3))
    with pytest.raises(ModulusMismatch):
        identity(3, 2) == identity(3, 3)


def test_tensor_padding_and_counts():
    assert tensor(identity(1, 1), identity(1, 1)) == identity(2, 1)
    u1 = hook(2, 1, 1)
    assert tensor(u1, identity(1, 1)) == hook(3, 1, 1)
    # through counts add over all skeleton pairs with few points
    shapes = [(0, 2), (1, 1), (2, 2), (1, 3)]
    for (b1, t1), (b2, t2) in itertools.product(shapes, repeat=2):
        for sa in enumerate_skeletons(b1, t1):
            for sb in enumerate_skeletons(b2, t2):
                prod = tensor(Diagram(sa, 0, 0), Diagram(sb, 0, 0))
                assert prod.through() == sa.through() + sb.through()


def test_involution_laws():
    for n in range(0, 5):
        assert involute(identity(n, 3)) == identity(n, 3)
    for i in range(1, 4):
        assert involute(hook(4, 2, i)) == hook(4, 2, i)
    elements = enumerate_monoid(3, 2)
    for a in elements:
        assert involute(involute(a)) == a
        for b in elements:
            assert involute(compose(a, b)) == compose(involute(b), involute(a))


def test_factorise_identity():
    f = factorise(identity(4, 3))
    assert f.through == 4
    assert f.mid_circles == 0
    assert f.top_half == identity(4, 0).skeleton
    assert f.bottom_half == identity(4, 0).skeleton


def test_factorise_rectangular_example():
    # 4 -> 6 diagram: cap (3,4), cups (1,2) and (4,5), strands 1->3 and 2->6,
    # one circle
    d = Diagram(
        Skeleton.from_pairs(4, 6, [(3, 4), (-1, -2), (-4, -5), (1, -3), (2, -6)]),
        1,
        0,
    )
    f = factorise(d)
    assert f.through == 2
    assert f.mid_circles == 1
    assert f.top_half == Skeleton.from_pairs(
        2, 6, [(-1, -2), (-4, -5), (1, -3), (2, -6)]
    )
    assert f.bottom_half == Skeleton.from_pairs(4, 2, [(3, 4), (1, -1), (2, -2)])
    assert recompose(f, 0) == d


def test_factorise_recomposition_exhaustive():
    for d in enumerate_monoid(4, 2):
        f = factorise(d)
        assert f.top_half.caps() == 0
        assert f.bottom_half.cups() == 0
        assert f.through == d.through()
        assert recompose(f, 2) == d


def test_enumeration_counts():
    assert len(enumerate_skeletons(4, 4)) == 14 == catalan(4)
    assert len(enumerate_monoid(4, 2)) == 28
    assert len(enumerate_skeletons(0, 0)) == 1
    assert len(enumerate_skeletons(2, 4)) == catalan(3)
    with pytest.raises(ValueError):
        enumerate_skeletons(3, 4)


def test_enumeration_canonical_order():
    skels = enumerate_skeletons(3, 3)
    keys = [s.sort_key() for s in skels]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_half_diagrams_have_no_caps():
    halves = half_diagrams(6, 2)
    assert len(halves) == 9
    assert all(h.caps() == 0 for h in halves)


def test_associativity_small():
    for n, m in [(3, 2), (4, 3)]:
        elements = enumerate_monoid(n, m)
        for a, b, c in itertools.islice(
            itertools.product(elements, repeat=3), 0, None, 7
        ):
            assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_through_monotone_under_composition():
    for n in range(1, 6):
        skels = enumerate_skeletons(n, n)
        for a in skels:
            for b in skels:
                glued, _ = (
                    compose(Diagram(a, 0, 0), Diagram(b, 0, 0)).skeleton,
                    None,
                )
                assert glued.through() <= min(a.through(), b.through())


def test_planarity_rejected():
    with pytest.raises(ValueError):
        Skeleton.from_pairs(2, 2, [(1, -2), (2, -1)])


def test_json_round_trip():
    for d in enumerate_monoid(3, 3):
        blob = to_json(d)
        assert to_json(from_json(blob)) == blob
    d = hook(4, 0, 2)
    data = json.loads(to_json(d))
    assert data["n_bottom"] == 4 and data["modulus"] == 0
