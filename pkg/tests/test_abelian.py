import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from dvrstat.abelian import (
    FiniteAbelianGroup,
    abelian_groups_of_order,
    crt,
    frobenius_orbits,
    galois_exponents,
    mult_order,
    parse_group,
    serialize_group,
    small_abelian_groups,
    val_p,
    wedge_square_p_part,
)

small_orders = st.lists(st.integers(min_value=1, max_value=12), min_size=0, max_size=3)


def test_from_orders_canonicalizes():
    assert FiniteAbelianGroup.from_orders([6, 4]).invariant_factors == (2, 12)
    assert FiniteAbelianGroup.from_orders([2, 3]).invariant_factors == (6,)
    assert FiniteAbelianGroup.from_orders([1, 1]).invariant_factors == ()


def test_invalid_invariant_factors():
    with pytest.raises(ValueError):
        FiniteAbelianGroup((4, 2))
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1,))


@given(small_orders)
@settings(max_examples=60, deadline=None)
def test_order_and_exponent(orders):
    G = FiniteAbelianGroup.from_orders(orders)
    prod = math.prod(orders)
    assert G.order == prod
    assert all(G.exponent % G.element_order(g) == 0 for g in G.elements())


@given(small_orders)
@settings(max_examples=40, deadline=None)
def test_element_order_matches_iteration(orders):
    G = FiniteAbelianGroup.from_orders(orders)
    for g in itertools.islice(G.elements(), 20):
        o = 1
        x = g
        while x != G.identity():
            x = G.add(x, g)
            o += 1
        assert o == G.element_order(g)


def test_subgroup_count_klein():
    G = FiniteAbelianGroup((2, 2))
    assert len(G.subgroups()) == 5


def test_cyclic_quotients_reference_counts():
    assert len(FiniteAbelianGroup((2, 2)).cyclic_quotients()) == 4
    assert len(FiniteAbelianGroup((4,)).cyclic_quotients()) == 3
    # Z/2 x Z/4: quotients by the three order-4 subgroups, two of the
    # order-2 subgroups, and the whole group are cyclic
    assert len(FiniteAbelianGroup((2, 4)).cyclic_quotients()) == 6


def test_cyclic_quotient_count_equals_cyclic_subgroup_count():
    # duality: cyclic quotients of G correspond to cyclic subgroups
    for G in small_abelian_groups(16):
        cyc_sub = sum(
            1
            for H in G.subgroups()
            if any(G.element_order(g) == len(H) for g in H)
        )
        assert len(G.cyclic_quotients()) == cyc_sub


def test_characters_biject_and_pair_nondegenerately():
    G = FiniteAbelianGroup((2, 4))
    chars = list(G.characters())
    assert len(chars) == G.order
    for chi in chars:
        if any(chi):
            assert any(G.char_value_exponent(chi, g) != 0 for g in G.elements())


def test_galois_exponents_basic():
    assert galois_exponents(1, 2) == [1]
    # E = 4, p = 2: all units mod 4
    assert galois_exponents(4, 2) == [1, 3]
    # E = 3, p = 2: Frobenius orbit {1, 2}
    assert galois_exponents(3, 2) == [1, 2]
    # E = 5, p = 2: ord_5(2) = 4, all units
    assert galois_exponents(5, 2) == [1, 2, 3, 4]
    # E = 7, p = 2: ord_7(2) = 3
    assert galois_exponents(7, 2) == [1, 2, 4]


def test_galois_exponents_form_a_group():
    for E, p in [(12, 2), (18, 3), (20, 2), (15, 2)]:
        units = galois_exponents(E, p)
        s = set(units)
        for a in units:
            for b in units:
                assert a * b % E in s


def test_frobenius_orbits_partition():
    for G in [FiniteAbelianGroup((6,)), FiniteAbelianGroup((2, 4)), FiniteAbelianGroup((9,))]:
        for p in (2, 3):
            orbits = frobenius_orbits(G, p)
            flat = [chi for orb in orbits for chi in orb]
            assert len(flat) == G.order
            assert len(set(flat)) == G.order
            for orb in orbits:
                o = G.char_order(orb[0])
                assert all(G.char_order(chi) == o for chi in orb)


def test_crt_and_mult_order():
    assert crt(2, 3, 3, 5) == 8
    assert mult_order(2, 7) == 3
    assert mult_order(3, 1) == 1
    assert val_p(48, 2) == 4


def test_wedge_square():
    assert wedge_square_p_part(FiniteAbelianGroup((4,)), 2).order == 1
    assert wedge_square_p_part(FiniteAbelianGroup((4, 4)), 2).invariant_factors == (4,)
    assert wedge_square_p_part(FiniteAbelianGroup((2, 2, 2)), 2).order == 8


def test_group_counts_by_order():
    assert len(abelian_groups_of_order(1)) == 1
    assert len(abelian_groups_of_order(8)) == 3
    assert len(abelian_groups_of_order(16)) == 5
    assert len(abelian_groups_of_order(36)) == 4


def test_serialization_round_trip():
    for G in small_abelian_groups(20):
        assert parse_group(serialize_group(G)) == G
