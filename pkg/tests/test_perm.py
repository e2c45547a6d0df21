"""Permutations, enumeration, and actions.

Oracles here are independent recomputations: orbit-stabilizer by direct
counting, products by composing image tables point by point.
"""

import os
import random

import pytest

from sgk.errors import CapExceeded, CycleSyntaxError, PointOutOfRange, RepeatedPoint
from sgk.perm import (
    Action,
    GroupSpec,
    Perm,
    coerce_action,
    enumerate_group,
    group_from_generators,
    is_transitive,
    orbit,
    parse_cycles,
    small_generating_set,
)


def test_parse_cycles_round_trip():
    cases = ["(1 2)", "(1 2 3)(4 5)", "(1 4 3 2)", "id"]
    for text in cases:
        images = parse_cycles(text, 5)
        assert Perm(images).cycle_string() == text


def test_parse_cycles_identity_spellings():
    for text in ("id", "()", "", "  "):
        assert parse_cycles(text, 4) == (0, 1, 2, 3)


def test_parse_cycles_commas_equal_spaces():
    assert parse_cycles("(1,2,3)", 3) == parse_cycles("(1 2 3)", 3)


def test_parse_cycles_rejections():
    with pytest.raises(RepeatedPoint):
        parse_cycles("(1 2 1)", 3)
    with pytest.raises(PointOutOfRange):
        parse_cycles("(1 9)", 3)
    with pytest.raises(CycleSyntaxError):
        parse_cycles("(1 2", 3)
    with pytest.raises(CycleSyntaxError):
        parse_cycles("(1 x)", 3)


def test_product_is_left_then_right():
    p = Perm.from_cycles("(1 2)", 3)
    q = Perm.from_cycles("(2 3)", 3)
    # (p * q)(i) = q(p(i)): apply p first
    assert (p * q).images == tuple(q(p(i)) for i in range(3))
    assert (p * q).cycle_string() == "(1 3 2)"


def test_inverse_and_order():
    rnd = random.Random(7)
    for _ in range(40):
        n = rnd.randrange(2, 9)
        images = list(range(n))
        rnd.shuffle(images)
        p = Perm(images)
        assert (p * p.inverse()).is_identity()
        k = p.order()
        acc = Perm.identity(n)
        for _ in range(k):
            acc = acc * p
        assert acc.is_identity()
        for m in range(1, k):
            acc = Perm.identity(n)
            for _ in range(m):
                acc = acc * p
            assert not acc.is_identity()


def test_conjugation_law():
    # x^g = g^-1 x g, checked against relabelling each cycle of x by g
    rnd = random.Random(11)
    for _ in range(30):
        n = 7
        xs = list(range(n))
        rnd.shuffle(xs)
        gs = list(range(n))
        rnd.shuffle(gs)
        x, g = Perm(xs), Perm(gs)
        conj = x.conjugated_by(g)
        assert conj == g.inverse() * x * g
        for i in range(n):
            assert conj(g(i)) == g(x(i))


def test_involution_detection():
    assert Perm.from_cycles("(1 2)(3 4)", 4).is_involution()
    assert not Perm.from_cycles("(1 2 3)", 4).is_involution()
    assert not Perm.identity(4).is_involution()


def test_enumeration_identity_first_and_sorted_start(s4):
    assert s4.element(0).is_identity()
    assert len(s4) == 24
    assert s4.index(s4.identity()) == 0


def test_enumeration_deterministic(s4):
    again = enumerate_group(GroupSpec(4, s4.generators))
    assert [p.images for p in again.elements] == [p.images for p in s4.elements]


def test_orbit_stabilizer_by_direct_count(s4, d6, z6):
    for group in (s4, d6, z6):
        for point in range(group.degree):
            orb = orbit(group, point)
            stab = [g for g in group.elements if g(point) == point]
            assert len(orb) * len(stab) == len(group)


def test_product_index_matches_perm_product(d4):
    for i in range(len(d4)):
        for j in range(len(d4)):
            expect = d4.element(i) * d4.element(j)
            assert d4.element(d4.product_index(i, j)) == expect


def test_inverse_index(d6):
    for i in range(len(d6)):
        assert d6.element(d6.inverse_index(i)) == d6.element(i).inverse()


def test_group_membership(s4, d4):
    assert Perm.from_cycles("(1 2 3)", 4) in s4
    assert Perm.from_cycles("(1 2)", 4) not in d4


def test_index_raises_for_outsiders(d4):
    with pytest.raises(KeyError):
        d4.index(Perm.from_cycles("(1 2)", 4))


def test_element_cap(monkeypatch):
    spec = GroupSpec(5, (Perm.from_cycles("(1 2)", 5), Perm.from_cycles("(1 2 3 4 5)", 5)))
    with pytest.raises(CapExceeded):
        enumerate_group(spec, cap=100)
    monkeypatch.setenv("SGK_ELEMENT_CAP", "60")
    with pytest.raises(CapExceeded):
        enumerate_group(spec)
    monkeypatch.setenv("SGK_ELEMENT_CAP", "not-a-number")
    with pytest.raises(ValueError):
        enumerate_group(spec)


def test_small_generating_set(s4):
    gens = small_generating_set(4, s4.elements)
    # greedy growth at least doubles the subgroup per generator
    assert len(gens) <= 5
    assert len(group_from_generators(gens, degree=4)) == 24


def test_transitivity(s4, z6):
    assert is_transitive(s4)
    assert is_transitive(z6)
    fixer = group_from_generators([Perm.from_cycles("(1 2)", 4)], degree=4)
    assert not is_transitive(fixer)


def test_natural_action_orbit_and_kernel(d4):
    act = Action.natural(d4)
    assert act.orbit_of(0) == frozenset(range(4))
    assert act.kernel_size() == 1
    assert act.is_faithful()


def test_action_stabilizer_matches_filter(d6):
    act = Action.natural(d6)
    for p in range(6):
        expect = {i for i, g in enumerate(d6.elements) if g(p) == p}
        assert set(act.stabilizer_indices(p)) == expect


def test_coerce_action_degree_guard(s4):
    act = coerce_action(s4, 4)
    assert act.n_points == 4
    with pytest.raises(Exception):
        coerce_action(s4, 5)


def test_cap_env_round_trip(monkeypatch):
    monkeypatch.delenv("SGK_ELEMENT_CAP", raising=False)
    spec = GroupSpec(4, (Perm.from_cycles("(1 2 3 4)", 4),))
    assert len(enumerate_group(spec)) == 4
    assert os.environ.get("SGK_ELEMENT_CAP") is None
