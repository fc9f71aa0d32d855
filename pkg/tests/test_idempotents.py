import pytest

from dvrstat.abelian import FiniteAbelianGroup, small_abelian_groups, val_p
from dvrstat.idempotents import (
    IdealPower,
    NORM_ANNIHILATES,
    ONE_MINUS_GAMMA_ANNIHILATES,
    WHOLE_RING,
    enumerate_idempotents,
    gamma_annihilation,
    ideal_image_valuation,
    ramtype_qualifies,
    residue_module_key,
    threshold_ideal,
)


def test_dimensions_sum_to_group_order():
    for G in small_abelian_groups(30):
        for p in (2, 3, 5):
            es = enumerate_idempotents(G, p)
            assert sum(e.dimension for e in es) == G.order


def test_z3_at_p2():
    es = enumerate_idempotents(FiniteAbelianGroup((3,)), 2)
    assert len(es) == 2
    triv, chi = es
    assert triv.is_trivial and triv.dimension == 1 and triv.Q == 2
    assert chi.f == 2 and chi.Q == 4 and chi.dimension == 2
    assert chi.uniformizer_kind == "P"


def test_z4_at_p2():
    es = enumerate_idempotents(FiniteAbelianGroup((4,)), 2)
    dims = sorted(e.dimension for e in es)
    assert dims == [1, 1, 2]
    ram = next(e for e in es if e.e_ram == 2)
    assert ram.uniformizer_kind == "ONE_MINUS_GAMMA"
    assert ram.k == 2 and ram.m_prime == 1


def test_orbit_sizes():
    for G in small_abelian_groups(24):
        for p in (2, 3):
            for e in enumerate_idempotents(G, p):
                assert len(e.orbit) == e.f * e.e_ram


def test_threshold_whole_ring_iff_p_coprime():
    for G in small_abelian_groups(30):
        for p in (2, 3, 5):
            for e in enumerate_idempotents(G, p):
                assert threshold_ideal(e).is_whole_ring == (G.order % p != 0)


def test_threshold_trivial_idempotent_is_p_exponent():
    for G in small_abelian_groups(30):
        for p in (2, 3):
            if G.order % p:
                continue
            e = next(e for e in enumerate_idempotents(G, p) if e.is_trivial)
            assert threshold_ideal(e).d == val_p(G.exponent, p)


def test_threshold_faithful_character_of_zp():
    for p in (2, 3, 5):
        G = FiniteAbelianGroup((p,))
        e = next(e for e in enumerate_idempotents(G, p) if not e.is_trivial)
        assert threshold_ideal(e).d == 1


def test_gamma_annihilation_dichotomy():
    G = FiniteAbelianGroup((4,))
    for p in (2, 3):
        for e in enumerate_idempotents(G, p):
            for g in G.elements():
                if not any(g):
                    continue
                verdict = gamma_annihilation(e, g)
                if e.value_exponent(g) == 0:
                    assert verdict == ONE_MINUS_GAMMA_ANNIHILATES
                else:
                    assert verdict == NORM_ANNIHILATES


def test_ideal_image_valuation_cases():
    G = FiniteAbelianGroup((12,))
    p = 2
    es = enumerate_idempotents(G, p)
    e = next(e for e in es if e.char_order == 12)
    # value of order 3 (prime to p): 1 - value is a unit
    g3 = (4,)
    assert ideal_image_valuation(e, g3) == WHOLE_RING
    # value of order 12 is divisible by 3, so still a unit
    assert ideal_image_valuation(e, (1,)) == WHOLE_RING
    # value of order 4 = p^2: valuation phi(4)/phi(4) = 1
    assert ideal_image_valuation(e, (3,)).d == 1


def test_ideal_image_valuation_trivial_idempotent():
    G = FiniteAbelianGroup((4,))
    e = next(e for e in enumerate_idempotents(G, 2) if e.is_trivial)
    # val(1 - 1) is infinite, realized as e_ram * v_p(|gamma|)
    assert ideal_image_valuation(e, (1,)).d == 2
    assert ideal_image_valuation(e, (2,)).d == 1


def test_residue_keys_group_by_cyclic_quotients_of_p_part():
    for G in small_abelian_groups(24):
        for p in (2, 3):
            es = enumerate_idempotents(G, p)
            by_key = {}
            for e in es:
                by_key.setdefault(residue_module_key(e), []).append(e)
            expect = len(G.p_part(p).cyclic_quotients())
            for group in by_key.values():
                assert len(group) == expect


def test_ramtype_rejects_beyond_threshold():
    G = FiniteAbelianGroup((4,))
    for e in enumerate_idempotents(G, 2):
        d = threshold_ideal(e).d
        gens = [(1,)]
        assert not ramtype_qualifies(e, IdealPower(d + 1), gens, gens)


def test_ramtype_noncyclic_inertia_rejected():
    G = FiniteAbelianGroup((2, 2))
    e = next(e for e in enumerate_idempotents(G, 2) if e.is_trivial)
    gens = [(1, 0), (0, 1)]
    with pytest.raises(ValueError):
        ramtype_qualifies(e, IdealPower(1), gens, gens)
