"""Primitive idempotents of Q_p[Γ] for finite abelian Γ, the local-ring
data of their integral images, valuations of images of group elements,
the threshold ideal, and the ramification-type classifiers.

An idempotent is identified with a Galois orbit of characters; the
integral image is a complete DVR with ramification index φ(p^k), residue
degree f and residue field of size Q = p^f, where the common character
order is n = p^k · m' and f is the order of p mod m'.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from .abelian import (
    FiniteAbelianGroup,
    euler_phi_prime_power,
    frobenius_orbits,
    mult_order,
    require_prime,
    val_p,
)

P_UNIFORMIZER = "P"
ONE_MINUS_GAMMA = "ONE_MINUS_GAMMA"

ONE_MINUS_GAMMA_ANNIHILATES = "ONE_MINUS_GAMMA_ANNIHILATES"
NORM_ANNIHILATES = "NORM_ANNIHILATES"

INFINITE_VALUATION = 10**9


@dataclass(frozen=True)
class IdealPower:
    """The ideal 𝔪^d of a DVR; d = 0 means the whole ring."""

    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("ideal exponent must be >= 0")

    @property
    def is_whole_ring(self):
        return self.d == 0


WHOLE_RING = IdealPower(0)


@dataclass(frozen=True)
class PrimitiveIdempotent:
    group: FiniteAbelianGroup
    p: int
    orbit: tuple  # sorted tuple of character coefficient tuples

    def __post_init__(self):
        require_prime(self.p)

    @property
    def rep(self):
        return self.orbit[0]

    @property
    def char_order(self):
        return self.group.char_order(self.rep)

    @property
    def k(self):
        return val_p(self.char_order, self.p)

    @property
    def p_part(self):
        return self.p**self.k

    @property
    def m_prime(self):
        return self.char_order // self.p_part

    @property
    def e_ram(self):
        return euler_phi_prime_power(self.p, self.k)

    @property
    def f(self):
        return mult_order(self.p, self.m_prime)

    @property
    def Q(self):
        return self.p**self.f

    @property
    def dimension(self):
        return self.e_ram * self.f

    @property
    def uniformizer_kind(self):
        return P_UNIFORMIZER if self.k == 0 else ONE_MINUS_GAMMA

    @property
    def is_trivial(self):
        return self.char_order == 1

    @property
    def cyclic_quotient_order(self):
        return self.char_order

    def quotient_kernel(self):
        """ker χ (independent of the orbit member): the subgroup with
        Γ/ker ≅ the acting cyclic quotient."""
        return self.group.char_kernel(self.rep)

    def value_exponent(self, g):
        """χ(g) for the orbit representative, as an exponent mod exponent(Γ)."""
        return self.group.char_value_exponent(self.rep, g)

    def value_order(self, g):
        """Multiplicative order of χ(g)."""
        E = self.group.exponent
        t = self.value_exponent(g)
        return E // math.gcd(E, t) if t else 1

    def one_minus_value_valuation(self, g):
        """𝔪-adic valuation of 1 − χ(g); INFINITE_VALUATION when χ(g) = 1."""
        d0 = self.value_order(g)
        if d0 == 1:
            return INFINITE_VALUATION
        m0 = d0 // self.p ** val_p(d0, self.p)
        if m0 > 1:
            return 0
        a = val_p(d0, self.p)
        return self.e_ram // euler_phi_prime_power(self.p, a)

    def prime_to_p_component(self, coeffs):
        """The prime-to-p part of a character (trivial if its order is a p-power)."""
        n = self.group.char_order(coeffs)
        pk = self.p ** val_p(n, self.p)
        mp = n // pk
        if mp == 1:
            return self.group.identity()
        u = pk * pow(pk, -1, mp) % (pk * mp)
        return self.group.char_pow(coeffs, u)


def enumerate_idempotents(G: FiniteAbelianGroup, p):
    """One primitive idempotent per Galois orbit of characters; the trivial
    idempotent comes first."""
    require_prime(p)
    out = [PrimitiveIdempotent(G, p, orbit) for orbit in frobenius_orbits(G, p)]
    out.sort(key=lambda e: (not e.is_trivial, e.char_order, e.rep))
    return out


def gamma_annihilation(e: PrimitiveIdempotent, g):
    """Which of 1−γ and the norm Σ_{j<=|γ|} γ^j kills the image ring."""
    if all(a == 0 for a in g):
        raise ValueError("identity element is not classified")
    if e.value_exponent(g) == 0:
        return ONE_MINUS_GAMMA_ANNIHILATES
    return NORM_ANNIHILATES


def ideal_image_valuation(e: PrimitiveIdempotent, g) -> IdealPower:
    """Valuation of the image of the ideal (1−γ, Σ_{j=1}^{|γ|} γ^j).

    When χ(γ) = 1 the image is (0, |γ|), of valuation e_ram·val_p(|γ|);
    when χ(γ) has order divisible by a prime other than p, 1−χ(γ) is a
    unit; when χ(γ) has order p^a the valuation is φ(p^k)/φ(p^a).
    """
    if all(a == 0 for a in g):
        raise ValueError("identity element has no image ideal")
    d0 = e.value_order(g)
    if d0 == 1:
        return IdealPower(e.e_ram * val_p(e.group.element_order(g), e.p))
    v = e.one_minus_value_valuation(g)
    return IdealPower(v)


@lru_cache(maxsize=None)
def _threshold_cached(e: PrimitiveIdempotent):
    best = 0
    for g in e.group.elements():
        if all(a == 0 for a in g):
            continue
        best = max(best, ideal_image_valuation(e, g).d)
    return IdealPower(best)


def threshold_ideal(e: PrimitiveIdempotent) -> IdealPower:
    """Intersection over nontrivial γ of the image ideals; 𝔪^d with d the
    max of the per-γ valuations.  Whole ring iff p does not divide |Γ|."""
    return _threshold_cached(e)


def residue_module_key(e: PrimitiveIdempotent):
    """Canonical key of the simple residue module A = image ring / 𝔪.

    Two idempotents share a key iff their residue modules are isomorphic
    as Γ-modules: same Q and same orbit of prime-to-p character parts.
    """
    parts = frozenset(e.prime_to_p_component(chi) for chi in e.orbit)
    return (e.Q, parts)


def _subgroup_of(G, gens):
    return G.subgroup_generated(list(gens))


def ramtype_qualifies(e: PrimitiveIdempotent, I: IdealPower, inertia_gens, decomposition_gens):
    """Ramification-type test against the ideal I = 𝔪^d.

    True iff some generator γ of the (cyclic, nontrivial) inertia
    subgroup has image-ideal valuation >= d, and every element of the
    decomposition subgroup acts trivially on the ring mod 𝔪^d.  The
    residue-characteristic exclusion is the caller's responsibility.
    """
    G = e.group
    inertia = _subgroup_of(G, inertia_gens)
    decomp = _subgroup_of(G, decomposition_gens)
    if not inertia <= decomp:
        raise ValueError("inertia must lie inside the decomposition subgroup")
    gens_of_inertia = [g for g in inertia if G.element_order(g) == len(inertia)]
    if len(inertia) > 1 and not gens_of_inertia:
        raise ValueError("inertia subgroup is not cyclic")
    d = I.d
    cond_a = any(
        any(c for c in g) and ideal_image_valuation(e, g).d >= d for g in gens_of_inertia
    )
    cond_b = all(e.one_minus_value_valuation(g) >= d for g in decomp)
    return cond_a and cond_b


def ramtype_qualifies_A(e: PrimitiveIdempotent, inertia_gens, decomposition_gens):
    """Residue-field variant: p divides the inertia order and the whole
    decomposition subgroup acts trivially mod 𝔪."""
    G = e.group
    inertia = _subgroup_of(G, inertia_gens)
    decomp = _subgroup_of(G, decomposition_gens)
    if not inertia <= decomp:
        raise ValueError("inertia must lie inside the decomposition subgroup")
    if len(inertia) % e.p != 0:
        return False
    return all(e.one_minus_value_valuation(g) >= 1 for g in decomp)
