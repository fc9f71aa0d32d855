"""Finite abelian groups in invariant-factor form, their elements,
characters, subgroup enumeration, and orbits of characters under the
p-adic Galois action.

Elements and characters are exponent tuples; character values are held
as exponents mod the group exponent, so everything stays in exact
integer arithmetic.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

SUBGROUP_ENUM_CAP = 2**12


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def require_prime(p):
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")


def mult_order(a, m):
    """Multiplicative order of a modulo m (gcd(a, m) must be 1)."""
    if m == 1:
        return 1
    assert math.gcd(a, m) == 1
    t, x = 1, a % m
    while x != 1:
        x = x * a % m
        t += 1
    return t


def val_p(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def euler_phi_prime_power(p, k):
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


def crt(a1, m1, a2, m2):
    """x with x ≡ a1 mod m1, x ≡ a2 mod m2 for coprime m1, m2."""
    g, s, t = _xgcd(m1, m2)
    assert g == 1
    return (a1 * t * m2 + a2 * s * m1) % (m1 * m2)


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant factors d_1 | d_2 | ... | d_k, each >= 2."""

    invariant_factors: tuple

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        for d in facs:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(facs, facs[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_orders(cls, orders):
        """Canonical invariant factors of ⊕ Z/orders[i] (orders arbitrary >= 1)."""
        per_prime = {}
        for o in orders:
            o = int(o)
            assert o >= 1
            d = 2
            while d * d <= o:
                if o % d == 0:
                    v = 0
                    while o % d == 0:
                        o //= d
                        v += 1
                    per_prime.setdefault(d, []).append(v)
                d += 1
            if o > 1:
                per_prime.setdefault(o, []).append(1)
        if not per_prime:
            return cls(())
        width = max(len(v) for v in per_prime.values())
        facs = [1] * width
        for p, exps in per_prime.items():
            exps = sorted(exps, reverse=True)
            for i, a in enumerate(exps):
                facs[i] *= p**a
        facs = [d for d in sorted(facs) if d > 1]
        return cls(tuple(facs))

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self):
        return len(self.invariant_factors)

    def identity(self):
        return (0,) * self.rank

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def add(self, g, h):
        return tuple((a + b) % d for a, b, d in zip(g, h, self.invariant_factors))

    def neg(self, g):
        return tuple((-a) % d for a, d in zip(g, self.invariant_factors))

    def scalar_mul(self, n, g):
        return tuple((n * a) % d for a, d in zip(g, self.invariant_factors))

    def element_order(self, g):
        if len(g) != self.rank:
            raise ValueError("coordinate count mismatch")
        out = 1
        for a, d in zip(g, self.invariant_factors):
            o = d // math.gcd(d, a % d)
            out = out * o // math.gcd(out, o)
        return out

    def subgroup_generated(self, gens):
        """Frozenset of elements of the subgroup generated by gens."""
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def subgroups(self):
        return _subgroups_cached(self.invariant_factors)

    def cyclic_quotients(self):
        """All (subgroup N, |Γ/N|) with Γ/N cyclic."""
        out = []
        n = self.order
        for N in self.subgroups():
            index = n // len(N)
            if self._quotient_is_cyclic(N, index):
                out.append((N, index))
        out.sort(key=lambda t: (t[1], sorted(t[0])))
        return out

    def _quotient_is_cyclic(self, N, index):
        for g in self.elements():
            # order of g + N in the quotient
            o = 1
            x = g
            while x not in N:
                x = self.add(x, g)
                o += 1
            if o == index:
                return True
        return False

    def p_part(self, p):
        """The p-Sylow subgroup as its own FiniteAbelianGroup."""
        exps = [val_p(d, p) for d in self.invariant_factors]
        return FiniteAbelianGroup.from_orders([p**a for a in exps if a > 0])

    # -- characters ---------------------------------------------------------

    def characters(self):
        """All characters as coefficient tuples (same index ranges as elements)."""
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def char_value_exponent(self, coeffs, g):
        """χ(g) as an exponent mod the group exponent E (value = ζ_E^result)."""
        E = self.exponent
        return sum(c * (E // d) * a for c, a, d in zip(coeffs, g, self.invariant_factors)) % E

    def char_order(self, coeffs):
        return self.element_order(coeffs)

    def char_pow(self, coeffs, u):
        return tuple((u * c) % d for c, d in zip(coeffs, self.invariant_factors))

    def char_kernel(self, coeffs):
        return frozenset(g for g in self.elements() if self.char_value_exponent(coeffs, g) == 0)


@lru_cache(maxsize=None)
def _subgroups_cached(invariant_factors):
    G = FiniteAbelianGroup(invariant_factors)
    if G.order > SUBGROUP_ENUM_CAP:
        raise ValueError(f"subgroup enumeration capped at order {SUBGROUP_ENUM_CAP}")
    trivial = frozenset({G.identity()})
    found = {trivial}
    frontier = [trivial]
    elems = list(G.elements())
    while frontier:
        H = frontier.pop()
        for g in elems:
            if g in H:
                continue
            H2 = G.subgroup_generated(list(H) + [g])
            if H2 not in found:
                found.add(H2)
                frontier.append(H2)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def galois_exponents(E, p):
    """Exponents u acting on E-th roots of unity by the p-adic Galois group.

    The group is generated by the units congruent to 1 off p (wild part)
    together with the Frobenius exponent (p on the prime-to-p part, 1 on
    the p-part).  Returns a sorted list of units mod E.
    """
    require_prime(p)
    if E == 1:
        return [1]
    K = val_p(E, p)
    pk = p**K
    m = E // pk
    wild = [a for a in range(1, pk + 1) if math.gcd(a, pk) == 1] if pk > 1 else [1]
    f = mult_order(p, m)
    out = set()
    for a in wild:
        frob = 1
        for _ in range(f):
            if pk == 1:
                u = frob % m
            elif m == 1:
                u = a % pk
            else:
                u = crt(a, pk, frob, m)
            out.add(u if u else E)
            frob = frob * p % m if m > 1 else 1
    return sorted(out)


def frobenius_orbits(G: FiniteAbelianGroup, p):
    """Partition of the characters of G into orbits of the p-adic Galois action.

    Each orbit is the full set {χ^u} over Galois exponents u; for a
    character of order prime to p this is the orbit of χ ↦ χ^p.
    Returns a list of orbits (tuples of coefficient tuples), sorted by
    minimal member; the trivial character's orbit comes first.
    """
    require_prime(p)
    units = galois_exponents(G.exponent, p)
    seen = set()
    orbits = []
    for chi in G.characters():
        if chi in seen:
            continue
        orbit = {G.char_pow(chi, u) for u in units}
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    orbits.sort(key=lambda o: o[0])
    return orbits


def wedge_square_p_part(G: FiniteAbelianGroup, p):
    """∧² of the p-part of G: for exponents a_1 <= ... <= a_r the result
    is ⊕_{i<j} Z/p^min(a_i, a_j)."""
    require_prime(p)
    exps = sorted(a for a in (val_p(d, p) for d in G.invariant_factors) if a > 0)
    orders = [p ** exps[i] for i in range(len(exps)) for j in range(i + 1, len(exps))]
    return FiniteAbelianGroup.from_orders(orders)


def abelian_groups_of_order(n):
    """All abelian groups of order n, in invariant-factor form."""
    assert n >= 1
    factors = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    per_prime = []
    for p, a in factors.items():
        per_prime.append([[p**part for part in parts] for parts in _int_partitions(a)])
    out = []
    for combo in itertools.product(*per_prime):
        orders = [o for group in combo for o in group]
        out.append(FiniteAbelianGroup.from_orders(orders))
    return out


def small_abelian_groups(max_order):
    out = []
    for n in range(1, max_order + 1):
        out.extend(abelian_groups_of_order(n))
    return out


def _int_partitions(m, cap=None):
    if cap is None:
        cap = m
    if m == 0:
        return [[]]
    out = []
    for first in range(min(m, cap), 0, -1):
        for rest in _int_partitions(m - first, first):
            out.append([first] + rest)
    return out


def serialize_group(G: FiniteAbelianGroup) -> str:
    return ",".join(str(d) for d in G.invariant_factors)


def parse_group(s: str) -> FiniteAbelianGroup:
    s = s.strip()
    if not s or s == "1":
        return FiniteAbelianGroup(())
    return FiniteAbelianGroup.from_orders([int(t) for t in s.split(",")])


def parse_tuple(s: str):
    s = s.strip()
    if not s:
        return ()
    return tuple(int(t) for t in s.split(","))
