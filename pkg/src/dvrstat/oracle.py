"""Concrete finite modules with group action and the brute-force ground
truth built on them: realizations of DVR-module types, kernel/image
submodules of 1−γ and the norm, conjugacy statistics in extensions,
2-cocycle extension enumeration, splitting counts, and fiber products.

Everything here favours transparency over speed; the closed formulas in
dvrmod are validated against these computations.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .abelian import FiniteAbelianGroup, val_p
from .dvrmod import ModuleType
from .idempotents import PrimitiveIdempotent
from . import linalg

MODULE_ENUM_CAP = 4096
GROUP_SCAN_CAP = 8192


# ---------------------------------------------------------------------------
# mixed-modulus matrix helpers

def _mat_apply(mat, v, orders):
    return tuple(sum(r * x for r, x in zip(row, v)) % o for row, o in zip(mat, orders))


def _mat_mat(A, B, orders):
    k = len(orders)
    return [
        [sum(A[i][t] * B[t][j] for t in range(k)) % orders[i] for j in range(k)]
        for i in range(k)
    ]


def _mat_pow(A, n, orders):
    k = len(orders)
    R = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    B = [row[:] for row in A]
    while n:
        if n & 1:
            R = _mat_mat(R, B, orders)
        B = _mat_mat(B, B, orders)
        n >>= 1
    return R


def _mat_eq(A, B, orders):
    return all(
        (a - b) % o == 0 for ra, rb, o in zip(A, B, orders) for a, b in zip(ra, rb)
    )


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


class ExplicitModule:
    """A finite abelian p-group ∏ Z/p^{a_i} with an action of Γ given by
    one matrix per invariant-factor generator of Γ.

    Matrix entry (i, j) is read mod p^{a_i} and must be divisible by
    p^{max(a_i - a_j, 0)} so the induced map on mixed-modulus tuples is
    well defined.
    """

    def __init__(self, p, orders, group: FiniteAbelianGroup, actions, check=True):
        self.p = p
        self.orders = tuple(int(o) for o in orders)
        self.group = group
        self.actions = tuple(tuple(tuple(x % o for x in row) for row, o in zip(A, self.orders)) for A in actions)
        self.alphas = tuple(val_p(o, p) for o in self.orders)
        self._action_cache = {}
        if check:
            self._validate()

    def _validate(self):
        k = len(self.orders)
        for o, a in zip(self.orders, self.alphas):
            assert o == self.p**a and o >= 2, "orders must be powers of p"
        assert len(self.actions) == self.group.rank
        for A in self.actions:
            assert len(A) == k and all(len(r) == k for r in A)
            for i in range(k):
                for j in range(k):
                    need = self.p ** max(self.alphas[i] - self.alphas[j], 0)
                    assert A[i][j] % need == 0, "action matrix not well defined"
        for A, d in zip(self.actions, self.group.invariant_factors):
            assert _mat_eq(_mat_pow(A, d, self.orders), _identity(k), self.orders), (
                "action order does not divide the generator order"
            )
        for A, B in itertools.combinations(self.actions, 2):
            assert _mat_eq(_mat_mat(A, B, self.orders), _mat_mat(B, A, self.orders), self.orders)

    @property
    def size(self):
        out = 1
        for o in self.orders:
            out *= o
        return out

    def zero(self):
        return (0,) * len(self.orders)

    def elements(self):
        assert self.size <= MODULE_ENUM_CAP, "module too large to enumerate"
        return itertools.product(*(range(o) for o in self.orders))

    def add(self, x, y):
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % o for a, o in zip(x, self.orders))

    def smul(self, n, x):
        return tuple((n * a) % o for a, o in zip(x, self.orders))

    def element_order(self, x):
        out = 1
        for a, o in zip(x, self.orders):
            t = o // math.gcd(o, a % o)
            out = out * t // math.gcd(out, t)
        return out

    def action_of(self, g):
        """Matrix of the action of the group element g (cached)."""
        hit = self._action_cache.get(g)
        if hit is not None:
            return hit
        k = len(self.orders)
        M = _identity(k)
        for A, a in zip(self.actions, g):
            if a:
                M = _mat_mat(M, _mat_pow(A, a, self.orders), self.orders)
        self._action_cache[g] = M
        return M

    def act(self, g, x):
        return _mat_apply(self.action_of(g), x, self.orders)

    def endo_one_minus(self, g):
        A = self.action_of(g)
        k = len(self.orders)
        return [[(int(i == j) - A[i][j]) % self.orders[i] for j in range(k)] for i in range(k)]

    def endo_norm(self, g):
        """Σ_{j=1}^{|γ|} (action of γ)^j."""
        A = self.action_of(g)
        o = self.group.element_order(g)
        k = len(self.orders)
        S = [[0] * k for _ in range(k)]
        P = _identity(k)
        for _ in range(o):
            P = _mat_mat(P, A, self.orders)
            S = [[(a + b) % m for a, b in zip(ra, rb)] for ra, rb, m in zip(S, P, self.orders)]
        return S

    def kernel_set(self, mat):
        z = self.zero()
        return frozenset(x for x in self.elements() if _mat_apply(mat, x, self.orders) == z)

    def image_set(self, mat):
        return frozenset(_mat_apply(mat, x, self.orders) for x in self.elements())


def zero_module(p, group):
    return ExplicitModule(p, (), group, [[] for _ in range(group.rank)])


def direct_sum(M1: ExplicitModule, M2: ExplicitModule):
    assert M1.p == M2.p and M1.group == M2.group
    k1, k2 = len(M1.orders), len(M2.orders)
    actions = []
    for A, B in zip(M1.actions, M2.actions):
        k = k1 + k2
        C = [[0] * k for _ in range(k)]
        for i in range(k1):
            for j in range(k1):
                C[i][j] = A[i][j]
        for i in range(k2):
            for j in range(k2):
                C[k1 + i][k1 + j] = B[i][j]
        actions.append(C)
    return ExplicitModule(M1.p, M1.orders + M2.orders, M1.group, actions)


# ---------------------------------------------------------------------------
# realization of DVR-module types

def _cyclotomic_prime_power(p, k):
    """Coefficient list of Φ_{p^k}(y) (k >= 1)."""
    deg = (p - 1) * p ** (k - 1)
    c = [0] * (deg + 1)
    for j in range(p):
        c[j * p ** (k - 1)] = 1
    return c


def _cyclotomic(m):
    """Coefficient list of Φ_m via the product formula."""
    # (x^m - 1) / ∏_{d | m, d < m} Φ_d
    poly = [0] * (m + 1)
    poly[0], poly[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            sub = _cyclotomic(d)
            poly = _poly_div_exact(poly, sub)
    return poly


def _poly_div_exact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for d in range(len(a) - len(b), -1, -1):
        c = a[d + len(b) - 1]
        assert c % b[-1] == 0
        q = c // b[-1]
        out[d] = q
        for i in range(len(b)):
            a[d + i] -= q * b[i]
    assert all(x == 0 for x in a)
    return out


def _unramified_factor(p, m_prime, f, N):
    """A monic degree-f factor of Φ_{m'} mod p^N (Hensel-lifted)."""
    assert m_prime > 1
    phi = _cyclotomic(m_prime)
    # find a monic irreducible factor of degree f mod p by searching the
    # factorization of y^{m'} - 1 structure: minimal polynomial of a root
    import sympy

    y = sympy.symbols("y")
    poly = sympy.Poly(phi[::-1], y, modulus=p)
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == f:
            coeffs = [int(c) % p for c in fac.all_coeffs()[::-1]]
            lifted, _ = linalg.hensel_lift_factor(phi, coeffs, p, N)
            return lifted
    raise AssertionError("no factor of the expected degree")


def _mult_matrix(reducer, mod, dim):
    """Matrix of multiplication by the class of y in (Z/mod)[y]/reducer."""
    # reducer monic of degree dim
    M = [[0] * dim for _ in range(dim)]
    for j in range(dim - 1):
        M[j + 1][j] = 1
    for i in range(dim):
        M[i][dim - 1] = (-reducer[i]) % mod
    return M


def realize(e: PrimitiveIdempotent, M: ModuleType, precision=None) -> ExplicitModule:
    """Build ⊕_i R/𝔪^{λ_i} for the DVR R attached to e, as an explicit
    module with transported Γ-action.  Round-trips with iso_type."""
    assert M.Q == e.Q, "type and idempotent disagree on the residue field"
    G, p = e.group, e.p
    lam = M.parts
    if not lam:
        return zero_module(p, G)
    N = precision if precision is not None else max(lam) + e.e_ram + 1
    assert N >= max(lam) + e.e_ram, "precision headroom too small"
    mod = p**N
    k, m_prime, f, e_ram = e.k, e.m_prime, e.f, e.e_ram
    D = e_ram * f
    # multiplication matrices for the ring on the basis y^a z^b
    if k >= 1:
        ram_red = _cyclotomic_prime_power(p, k)
        Y1 = _mult_matrix(ram_red, mod, e_ram)
    else:
        Y1 = _identity(1)
    if m_prime > 1:
        un_red = _unramified_factor(p, m_prime, f, N)
        Z1 = _mult_matrix(un_red, mod, f)
    else:
        Z1 = _identity(1)
    # tensor: index (a, b) -> a * f + b
    W = [[0] * D for _ in range(D)]
    for a1 in range(e_ram):
        for b1 in range(f):
            for a2 in range(e_ram):
                for b2 in range(f):
                    W[a1 * f + b1][a2 * f + b2] = Y1[a1][a2] * Z1[b1][b2] % mod
    ring_orders = (mod,) * D
    n = e.char_order
    E = G.exponent
    # action of each Γ-generator: multiplication by the image root of unity
    gen_mats = []
    for i in range(G.rank):
        gvec = tuple(1 if j == i else 0 for j in range(G.rank))
        t = e.value_exponent(gvec)
        assert t % (E // n) == 0
        gen_mats.append(_mat_pow(W, t // (E // n), ring_orders))
    # uniformizer: p, or 1 - (generator)^{m'}
    if k == 0:
        pi_mat = [[p if i == j else 0 for j in range(D)] for i in range(D)]
    else:
        Wm = _mat_pow(W, m_prime, ring_orders)
        pi_mat = [[(int(i == j) - Wm[i][j]) % mod for j in range(D)] for i in range(D)]

    summands = []
    for L in lam:
        piL = _mat_pow(pi_mat, L, ring_orders)
        cols = [[piL[i][j] for i in range(D)] for j in range(D)]
        orders_q, proj, lift = linalg.quotient_structure([mod] * D, cols)
        actions = []
        for Am in gen_mats:
            big = linalg.mat_mul(proj, linalg.mat_mul(Am, lift))
            actions.append([[x % o for x in row] for row, o in zip(big, orders_q)])
        summands.append(ExplicitModule(p, orders_q, G, actions))
    out = summands[0]
    for s in summands[1:]:
        out = direct_sum(out, s)
    got = iso_type(out, e)
    assert got == M, f"realization round-trip failed: {got} != {M}"
    return out


def uniformizer_matrix(M: ExplicitModule, e: PrimitiveIdempotent):
    """Action of the maximal-ideal generator on an e-typed module."""
    k = len(M.orders)
    if e.k == 0:
        return [[e.p if i == j else 0 for j in range(k)] for i in range(k)]
    gen = None
    for g in e.group.elements():
        if e.value_order(g) == e.char_order:
            gen = g
            break
    assert gen is not None
    gstar = e.group.scalar_mul(e.m_prime, gen)
    A = M.action_of(gstar)
    return [[(int(i == j) - A[i][j]) % M.orders[i] for j in range(k)] for i in range(k)]


def subgroup_size(orders, gens):
    """Size of the subgroup of ⊕ Z/orders generated by the given vectors."""
    if not orders:
        return 1
    q_orders, _, _ = linalg.quotient_structure(list(orders), [list(g) for g in gens])
    quo = 1
    for o in q_orders:
        quo *= o
    total = 1
    for o in orders:
        total *= o
    return total // quo


def iso_type(M: ExplicitModule, e: PrimitiveIdempotent) -> ModuleType:
    """Partition type of an e-typed module, read off the 𝔪-filtration."""
    if M.size == 1:
        return ModuleType(e.Q, ())
    pi = uniformizer_matrix(M, e)
    k = len(M.orders)
    Q = e.Q
    sizes = [M.size]
    P = _identity(k)
    while sizes[-1] > 1:
        P = _mat_mat(P, pi, M.orders)
        cols = [[P[i][j] for i in range(k)] for j in range(k)]
        sizes.append(subgroup_size(M.orders, cols))
        if len(sizes) > 64:
            raise ValueError("module is not annihilated by a power of the maximal ideal")
    conj = []
    for prev, cur in zip(sizes, sizes[1:]):
        ratio = prev // cur
        assert cur * ratio == prev
        lam_j = round(math.log(ratio, Q))
        assert Q**lam_j == ratio, "filtration step is not a power of the residue size"
        conj.append(lam_j)
    assert all(a >= b for a, b in zip(conj, conj[1:])), "filtration not decreasing"
    parts = tuple(sum(1 for c in conj if c >= j) for j in range(1, conj[0] + 1)) if conj else ()
    return ModuleType(Q, parts)


def residue_rank(M: ExplicitModule, e: PrimitiveIdempotent) -> int:
    return len(iso_type(M, e).parts)


# ---------------------------------------------------------------------------
# kernels and images of 1−γ and the norm

@dataclass(frozen=True)
class ABSets:
    """Kernels/images of 1−γ and the norm on a module H."""

    a_zero: frozenset    # ker(1−γ) ∩ ker(norm)
    a_minus: frozenset   # ker(norm)
    a_plus: frozenset    # ker(1−γ)
    b_minus: frozenset   # im(1−γ)
    b_plus: frozenset    # im(norm)


def ab_sets(H: ExplicitModule, g) -> ABSets:
    one_minus = H.endo_one_minus(g)
    norm = H.endo_norm(g)
    a_plus = H.kernel_set(one_minus)
    a_minus = H.kernel_set(norm)
    return ABSets(
        a_zero=a_minus & a_plus,
        a_minus=a_minus,
        a_plus=a_plus,
        b_minus=H.image_set(one_minus),
        b_plus=H.image_set(norm),
    )


def subgroup_sum(H: ExplicitModule, S1, S2):
    return frozenset(H.add(x, y) for x in S1 for y in S2)


def gamma_orbit_count_on_quotient(H: ExplicitModule, num, den):
    """Number of Γ-orbits on the quotient group num/den (den ⊆ num ⊆ H,
    both Γ-stable)."""
    den = frozenset(den)
    gen_mats = [H.action_of(tuple(1 if j == i else 0 for j in range(H.group.rank)))
                for i in range(H.group.rank)]

    def coset_key(x):
        return min(H.add(x, d) for d in den)

    cosets = {coset_key(x) for x in num}
    seen = set()
    orbits = 0
    for c in cosets:
        if c in seen:
            continue
        orbits += 1
        frontier = [c]
        seen.add(c)
        while frontier:
            x = frontier.pop()
            for A in gen_mats:
                y = coset_key(_mat_apply(A, x, H.orders))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return orbits


# ---------------------------------------------------------------------------
# submodules and quotients as modules in their own right

def module_from_subgroup(H: ExplicitModule, subset):
    """The Γ-stable subgroup `subset` of H as an ExplicitModule.

    Returns (module, coords_of, gens_ambient): coords_of maps an ambient
    element of the subgroup to its coordinates in the new module.
    """
    elems = sorted(subset)
    k = len(H.orders)
    if not any(any(x) for x in elems):
        return zero_module(H.p, H.group), (lambda x: ()), []
    Gmat = [[el[i] for el in elems] for i in range(k)]
    g = len(elems)
    # kernel lattice of w ↦ G w in ⊕ Z/orders
    big = [Gmat[i] + [H.orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    ker = linalg.integer_kernel(big, k, g + k)
    K0 = [[col[t] for t in range(g)] for col in ker]
    orders_s, proj_s, lift_s = linalg.lattice_quotient(g, K0)
    gens_amb = []
    for t in range(len(orders_s)):
        w = [lift_s[i][t] for i in range(g)]
        gens_amb.append(tuple(sum(Gmat[i][j] * w[j] for j in range(g)) % H.orders[i] for i in range(k)))

    def coords_of(x):
        w = linalg.solve_congruence(Gmat, list(x), list(H.orders))
        assert w is not None, "element not in the subgroup"
        return tuple(sum(proj_s[t][j] * w[j] for j in range(g)) % orders_s[t] for t in range(len(orders_s)))

    actions = []
    for i in range(H.group.rank):
        gvec = tuple(1 if j == i else 0 for j in range(H.group.rank))
        A = H.action_of(gvec)
        cols = [coords_of(_mat_apply(A, ga, H.orders)) for ga in gens_amb]
        actions.append([[cols[j][i2] for j in range(len(orders_s))] for i2 in range(len(orders_s))])
    sub = ExplicitModule(H.p, orders_s, H.group, actions)
    return sub, coords_of, gens_amb


def module_quotient(H: ExplicitModule, subgroup):
    """H / subgroup as an ExplicitModule; returns (module, project_fn)."""
    gens = [list(x) for x in subgroup]
    orders_q, proj, lift = linalg.quotient_structure(list(H.orders), gens)
    if not orders_q:
        Z = zero_module(H.p, H.group)
        return Z, (lambda x: ())

    def project(x):
        return tuple(sum(proj[t][i] * x[i] for i in range(len(H.orders))) % orders_q[t]
                     for t in range(len(orders_q)))

    actions = []
    for i in range(H.group.rank):
        gvec = tuple(1 if j == i else 0 for j in range(H.group.rank))
        A = H.action_of(gvec)
        big = linalg.mat_mul(proj, linalg.mat_mul(A, lift))
        actions.append([[x % o for x in row] for row, o in zip(big, orders_q)])
    quo = ExplicitModule(H.p, orders_q, H.group, actions)
    return quo, project


def gamma_submodules(H: ExplicitModule, inside=None):
    """All Γ-stable subgroups of H (optionally contained in `inside`)."""
    universe = frozenset(H.elements()) if inside is None else frozenset(inside)
    gen_mats = [H.action_of(tuple(1 if j == i else 0 for j in range(H.group.rank)))
                for i in range(H.group.rank)]

    def close(gens):
        seen = {H.zero()}
        frontier = [H.zero()]
        while frontier:
            x = frontier.pop()
            nxt = [H.add(x, g) for g in gens]
            nxt += [_mat_apply(A, x, H.orders) for A in gen_mats]
            for y in nxt:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    trivial = frozenset({H.zero()})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        S = frontier.pop()
        for x in universe:
            if x in S:
                continue
            S2 = close(list(S) + [x])
            if S2 <= universe and S2 not in found:
                found.add(S2)
                frontier.append(S2)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# extensions of Γ by a module

class ExplicitGroup:
    """Extension of Γ by H given by a normalized 2-cocycle table.

    Elements are pairs (h, γ); (h1, γ1)(h2, γ2) = (h1 + γ1·h2 + f(γ1, γ2), γ1γ2).
    """

    def __init__(self, H: ExplicitModule, cocycle, check=True):
        self.H = H
        self.G = H.group
        self.cocycle = dict(cocycle)
        self._act = {g: H.action_of(g) for g in self.G.elements()}
        if check:
            self._validate()

    @classmethod
    def split(cls, H: ExplicitModule):
        z = H.zero()
        coc = {(a, b): z for a in H.group.elements() for b in H.group.elements()}
        return cls(H, coc, check=False)

    def _validate(self):
        G, H = self.G, self.H
        idg = G.identity()
        for a in G.elements():
            assert self.cocycle[(idg, a)] == H.zero()
            assert self.cocycle[(a, idg)] == H.zero()
        for a in G.elements():
            for b in G.elements():
                for c in G.elements():
                    lhs = H.add(self.cocycle[(a, b)], self.cocycle[(G.add(a, b), c)])
                    rhs = H.add(_mat_apply(self._act[a], self.cocycle[(b, c)], H.orders),
                                self.cocycle[(a, G.add(b, c))])
                    assert lhs == rhs, "cocycle identity fails"

    @property
    def size(self):
        return self.H.size * self.G.order

    def elements(self):
        assert self.size <= GROUP_SCAN_CAP, "group too large to scan"
        return ((h, g) for g in self.G.elements() for h in self.H.elements())

    def identity(self):
        return (self.H.zero(), self.G.identity())

    def mul(self, x, y):
        h1, g1 = x
        h2, g2 = y
        h = self.H.add(self.H.add(h1, _mat_apply(self._act[g1], h2, self.H.orders)),
                       self.cocycle[(g1, g2)])
        return (h, self.G.add(g1, g2))

    def inv(self, x):
        return self.power(x, self.element_order(x) - 1)

    def element_order(self, x):
        o = 1
        y = x
        while y != self.identity():
            y = self.mul(y, x)
            o += 1
        return o

    def power(self, x, n):
        y = self.identity()
        for _ in range(n):
            y = self.mul(y, x)
        return y

    def conjugate(self, g, x):
        # g x g^{-1}
        return self.mul(self.mul(g, x), self.inv(g))


def conjugacy_stats(G: ExplicitGroup, gamma):
    """(|c_γ|, d_γ): elements over γ with the same order as γ, and the
    number of conjugacy classes among them.

    Classes are orbit closures under conjugation by a generating set
    (basis vectors of H plus lifts of the Γ-generators), which agree
    with conjugacy under the full group.
    """
    target = G.G.element_order(gamma)
    c = {(h, gamma) for h in G.H.elements() if G.element_order((h, gamma)) == target}
    k = len(G.H.orders)
    gens = [(tuple(1 if t == i else 0 for t in range(k)), G.G.identity()) for i in range(k)]
    gens += [(G.H.zero(), tuple(1 if t == i else 0 for t in range(G.G.rank)))
             for i in range(G.G.rank)]
    pairs = [(g, G.inv(g)) for g in gens]
    seen = set()
    classes = 0
    for x in sorted(c):
        if x in seen:
            continue
        classes += 1
        frontier = [x]
        seen.add(x)
        while frontier:
            y = frontier.pop()
            for g, ginv in pairs:
                z = G.mul(G.mul(g, y), ginv)
                if z not in seen:
                    assert z in c
                    seen.add(z)
                    frontier.append(z)
    return len(c), classes


def enumerate_extensions(Gamma: FiniteAbelianGroup, H: ExplicitModule, refine=True):
    """All extensions of Γ by H up to isomorphisms fixing H pointwise and
    inducing the identity on Γ, then (with refine) further identified
    under module automorphisms of H.

    Returns a list of ExplicitGroup, the split one first.  refine=False
    gives one group per cohomology class, which is enough for invariants
    like conjugacy statistics or splitting counts and avoids enumerating
    a possibly huge automorphism group.
    """
    assert Gamma == H.group
    if Gamma.order > 8 or H.size > 256:
        raise ValueError("extension enumeration cap exceeded")
    k = len(H.orders)
    if k == 0:
        return [ExplicitGroup.split(H)]
    p = H.p
    alphas = H.alphas
    A_exp = max(alphas)
    L = p**A_exp
    Gs = [g for g in Gamma.elements() if any(g)]
    m = len(Gs)
    gidx = {g: t for t, g in enumerate(Gs)}
    nvar = m * m * k

    def vid(a, b, i):
        return (gidx[a] * m + gidx[b]) * k + i

    # action matrices rewritten in the scaled coordinates y_i = p^{A-α_i} x_i;
    # divisibility of the original entries makes every scaled entry integral
    scaled = {}
    for g in Gamma.elements():
        M = H.action_of(g)
        S = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                if alphas[j] >= alphas[i]:
                    S[i][j] = M[i][j] * p ** (alphas[j] - alphas[i]) % L
                else:
                    step = p ** (alphas[i] - alphas[j])
                    assert M[i][j] % step == 0
                    S[i][j] = M[i][j] // step % L
        scaled[g] = S

    idg = Gamma.identity()
    rows = []
    for a in Gs:
        for b in Gs:
            ab = Gamma.add(a, b)
            for c in Gs:
                bc = Gamma.add(b, c)
                Sa = scaled[a]
                for i in range(k):
                    row = [0] * nvar
                    row[vid(a, b, i)] += 1
                    if ab != idg:
                        row[vid(ab, c, i)] += 1
                    if bc != idg:
                        row[vid(a, bc, i)] -= 1
                    for j in range(k):
                        if Sa[i][j]:
                            row[vid(b, c, j)] -= Sa[i][j]
                    rows.append(row)
    for a in Gs:
        for b in Gs:
            for i in range(k):
                row = [0] * nvar
                row[vid(a, b, i)] = p ** alphas[i]
                rows.append(row)
    Kgens, Korders, Kcoords = linalg.kernel_mod(rows, L, nvar)

    def scale_cocycle(coc):
        y = [0] * nvar
        for a in Gs:
            for b in Gs:
                h = coc[(a, b)]
                for i in range(k):
                    y[vid(a, b, i)] = (h[i] * p ** (A_exp - alphas[i])) % L
        return y

    def unscale(y):
        coc = {}
        for a in Gamma.elements():
            coc[(idg, a)] = H.zero()
            coc[(a, idg)] = H.zero()
        for a in Gs:
            for b in Gs:
                h = []
                for i in range(k):
                    v = y[vid(a, b, i)] % L
                    s = p ** (A_exp - alphas[i])
                    assert v % s == 0
                    h.append((v // s) % (p ** alphas[i]))
                coc[(a, b)] = tuple(h)
        return coc

    # coboundaries of the basis 1-cochains
    cob_rows = []
    for a0 in Gs:
        for i0 in range(k):
            coc = {}
            for u in Gs:
                for v in Gs:
                    h = [0] * k
                    if v == a0:  # u · c(v)
                        Mu = H.action_of(u)
                        for i in range(k):
                            h[i] = (h[i] + Mu[i][i0]) % H.orders[i]
                    if Gamma.add(u, v) == a0:
                        h[i0] = (h[i0] - 1) % H.orders[i0]
                    if u == a0:
                        h[i0] = (h[i0] + 1) % H.orders[i0]
                    coc[(u, v)] = tuple(h)
            cob_rows.append(list(Kcoords(scale_cocycle(coc))))
    h2_orders, h2_proj, h2_lift = linalg.quotient_structure(list(Korders), cob_rows)

    def class_of(coc):
        c = Kcoords(scale_cocycle(coc))
        return tuple(sum(h2_proj[t][j] * c[j] for j in range(len(Korders))) % h2_orders[t]
                     for t in range(len(h2_orders)))

    def rep_of(z):
        c = [sum(h2_lift[j][t] * z[t] for t in range(len(h2_orders))) % Korders[j]
             for j in range(len(Korders))]
        y = [0] * nvar
        for j, cj in enumerate(c):
            if cj:
                y = [(a + cj * b) % L for a, b in zip(y, Kgens[j])]
        return unscale(y)

    classes = list(itertools.product(*(range(o) for o in h2_orders)))
    if not refine:
        out = [ExplicitGroup(H, rep_of(z)) for z in classes]
        z = H.zero()
        out.sort(key=lambda G: any(v != z for v in G.cocycle.values()))
        return out
    auts = module_automorphisms(H)
    seen = set()
    out = []
    for z in classes:
        if z in seen:
            continue
        orbit = {z}
        frontier = [z]
        while frontier:
            z0 = frontier.pop()
            coc = rep_of(z0)
            for T in auts:
                coc2 = {ab: _mat_apply(T, h, H.orders) for ab, h in coc.items()}
                z1 = class_of(coc2)
                if z1 not in orbit:
                    orbit.add(z1)
                    frontier.append(z1)
        seen |= orbit
        rep = min(orbit)
        out.append(ExplicitGroup(H, rep_of(rep)))
    z = H.zero()
    out.sort(key=lambda G: any(v != z for v in G.cocycle.values()))
    return out


def module_automorphisms(H: ExplicitModule):
    """All automorphisms of H commuting with the Γ-action, as matrices."""
    k = len(H.orders)
    if k == 0:
        return [[]]
    p = H.p
    alphas = H.alphas
    entry_choices = []
    for i in range(k):
        for j in range(k):
            step = p ** max(alphas[i] - alphas[j], 0)
            count = p ** min(alphas[i], alphas[j])
            entry_choices.append([step * t % H.orders[i] for t in range(count)])
    total = 1
    for c in entry_choices:
        total *= len(c)
    if total > 2**22:
        raise ValueError("automorphism enumeration too large")
    gen_mats = [H.action_of(tuple(1 if j == i else 0 for j in range(H.group.rank)))
                for i in range(H.group.rank)]
    groups_by_alpha = {}
    for i, a in enumerate(alphas):
        groups_by_alpha.setdefault(a, []).append(i)
    out = []
    for flat in itertools.product(*entry_choices):
        T = [list(flat[i * k:(i + 1) * k]) for i in range(k)]
        ok = True
        for idxs in groups_by_alpha.values():
            block = [[T[i][j] % p for j in idxs] for i in idxs]
            if not _invertible_mod_p(block, p):
                ok = False
                break
        if not ok:
            continue
        for A in gen_mats:
            if not _mat_eq(_mat_mat(T, A, H.orders), _mat_mat(A, T, H.orders), H.orders):
                ok = False
                break
        if ok:
            out.append(T)
    return out


def _invertible_mod_p(block, p):
    n = len(block)
    M = [row[:] for row in block]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if M[r][c] % p:
                piv = r
                break
        if piv is None:
            return False
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, p)
        for r in range(c + 1, n):
            t = M[r][c] * inv % p
            if t:
                M[r] = [(a - t * b) % p for a, b in zip(M[r], M[c])]
    return True


def splitting_count(G: ExplicitGroup) -> int:
    """Number of homomorphic sections Γ → G (0 iff the extension is nonsplit)."""
    Gamma = G.G
    d = Gamma.rank
    if d == 0:
        return 1
    basis = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    fibers = [[(h, b) for h in G.H.elements()] for b in basis]
    count = 0
    for lifts in itertools.product(*fibers):
        ok = all(G.power(s, di) == G.identity()
                 for s, di in zip(lifts, Gamma.invariant_factors))
        if ok and all(G.mul(a, b) == G.mul(b, a) for a, b in itertools.combinations(lifts, 2)):
            count += 1
    return count


def aut_extension_count(H: ExplicitModule, Gamma: FiniteAbelianGroup, basis=None) -> int:
    """#𝔄⁻_{γ₁}(H) · ∏_{j>=2} #𝔄⁺_{γ₁}(H)[|γ_j|] for a basis γ₁..γ_d of Γ
    with γ₂..γ_d acting trivially on H."""
    assert Gamma == H.group
    d = Gamma.rank
    if basis is None:
        basis = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
        idm = _identity(len(H.orders))
        basis.sort(key=lambda g: _mat_eq(H.action_of(g), idm, H.orders))
    if d == 0:
        return 1
    idm = _identity(len(H.orders))
    for g in basis[1:]:
        if not _mat_eq(H.action_of(g), idm, H.orders):
            raise ValueError("all basis elements after the first must act trivially")
    g1 = basis[0]
    ab = ab_sets(H, g1)
    out = len(ab.a_minus)
    for g in basis[1:]:
        o = Gamma.element_order(g)
        out *= sum(1 for x in ab.a_plus if H.smul(o, x) == H.zero())
    return out


# ---------------------------------------------------------------------------
# homomorphisms between explicit modules, brute-force counts

@dataclass
class ModuleHom:
    src: ExplicitModule
    dst: ExplicitModule
    matrix: tuple  # rows indexed by dst coords

    def apply(self, v):
        return _mat_apply(self.matrix, v, self.dst.orders)

    def is_surjective(self):
        cols = [[self.matrix[i][j] for i in range(len(self.dst.orders))]
                for j in range(len(self.src.orders))]
        return subgroup_size(self.dst.orders, cols) == self.dst.size

    def kernel(self):
        z = self.dst.zero()
        return frozenset(x for x in self.src.elements() if self.apply(x) == z)


def _hom_candidate_columns(src: ExplicitModule, dst: ExplicitModule):
    """Per source generator, the list of admissible images (order condition)."""
    cand = []
    elems = list(dst.elements())
    for o in src.orders:
        cand.append([y for y in elems if dst.smul(o, y) == dst.zero()])
    return cand


def _is_equivariant(matrix, src: ExplicitModule, dst: ExplicitModule):
    ks = len(src.orders)
    for i in range(src.group.rank):
        gvec = tuple(1 if j == i else 0 for j in range(src.group.rank))
        A1 = src.action_of(gvec)
        A2 = dst.action_of(gvec)
        for s in range(ks):
            col = tuple(A1[r][s] for r in range(ks))
            lhs = _mat_apply(matrix, col, dst.orders)
            rhs = _mat_apply(A2, tuple(matrix[r][s] for r in range(len(dst.orders))), dst.orders)
            if lhs != rhs:
                return False
    return True


def brute_module_counts(M: ExplicitModule, N: ExplicitModule):
    """(#Hom_Γ, #Sur_Γ) by enumeration of generator images."""
    ks = len(M.orders)
    if ks == 0:
        return 1, (1 if N.size == 1 else 0)
    cand = _hom_candidate_columns(M, N)
    kd = len(N.orders)
    hom = sur = 0
    for cols in itertools.product(*cand):
        matrix = tuple(tuple(cols[j][i] for j in range(ks)) for i in range(kd))
        if not _is_equivariant(matrix, M, N):
            continue
        hom += 1
        if subgroup_size(N.orders, [list(c) for c in cols]) == N.size:
            sur += 1
    return hom, sur


def enumerate_module_homs(M: ExplicitModule, N: ExplicitModule):
    """All Γ-homomorphisms M → N as ModuleHom values."""
    ks = len(M.orders)
    kd = len(N.orders)
    if ks == 0:
        return [ModuleHom(M, N, tuple(tuple() for _ in range(kd)))]
    out = []
    for cols in itertools.product(*_hom_candidate_columns(M, N)):
        matrix = tuple(tuple(cols[j][i] for j in range(ks)) for i in range(kd))
        if _is_equivariant(matrix, M, N):
            out.append(ModuleHom(M, N, matrix))
    return out


# fast action-free counts used by the exhaustive oracle sweep

def _cyclic_set(y, mods):
    o = 1
    for c, m in zip(y, mods):
        t = m // math.gcd(m, c)
        o = o * t // math.gcd(o, t)
    return {tuple((t * c) % m for c, m in zip(y, mods)) for t in range(o)}


@lru_cache(maxsize=None)
def _divisors(n):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


def brute_counts_plain(q, lam, mu):
    """(#Hom, #Sur) for ⊕ Z/q^λ → ⊕ Z/q^μ with no group action, counted
    by enumerating generator images (rank of λ at most 2)."""
    mods = [q**b for b in mu]
    total = 1
    for m in mods:
        total *= m
    elems = list(itertools.product(*(range(m) for m in mods)))
    cand = {}
    for a in set(lam):
        cand[a] = [y for y in elems if all((q**a * c) % m == 0 for c, m in zip(y, mods))]
    hom = 1
    for a in lam:
        hom *= len(cand[a])
    r = len(lam)
    if r == 0:
        return 1, (1 if total == 1 else 0)
    if r == 1:
        sur = 0
        for y in cand[lam[0]]:
            o = 1
            for c, m in zip(y, mods):
                t = m // math.gcd(m, c)
                o = o * t // math.gcd(o, t)
            if o == total:
                sur += 1
        return hom, sur
    if r == 2:
        seconds = []
        for y2 in cand[lam[1]]:
            o2 = 1
            for c, m in zip(y2, mods):
                t = m // math.gcd(m, c)
                o2 = o2 * t // math.gcd(o2, t)
            multiples = [(t, tuple((t * c) % m for c, m in zip(y2, mods)))
                         for t in _divisors(o2)]
            seconds.append(multiples)
        sur = 0
        for y1 in cand[lam[0]]:
            S1 = _cyclic_set(y1, mods)
            s1 = len(S1)
            for multiples in seconds:
                tmin = next(t for t, x in multiples if x in S1)
                if s1 * tmin == total:
                    sur += 1
        return hom, sur
    raise ValueError("plain brute-force counts support rank <= 2")


# ---------------------------------------------------------------------------
# fiber products

@dataclass
class FiberResult:
    common_quotient: ExplicitModule
    to_common_1: ModuleHom
    to_common_2: ModuleHom
    fiber_product: ExplicitModule
    boxtimes: ExplicitModule


def _fiber_submodule(f: ModuleHom, g: ModuleHom):
    """{(x, y) : f(x) = g(y)} inside src(f) ⊕ src(g) as a module."""
    X, Y = f.src, g.src
    D = direct_sum(X, Y)
    subset = set()
    for x in X.elements():
        fx = f.apply(x)
        for y in Y.elements():
            if g.apply(y) == fx:
                subset.add(tuple(x) + tuple(y))
    sub, _, _ = module_from_subgroup(D, subset)
    return sub


def fiber_tools(e: PrimitiveIdempotent, pi1: ModuleHom, pi2: ModuleHom) -> FiberResult:
    """Maximal common quotient of π₁, π₂, the fiber product over their
    common target, and the fiber product over the maximal common quotient."""
    N1, N2 = pi1.src, pi2.src
    N3 = pi1.dst
    assert pi2.dst is N3 or (pi2.dst.orders == N3.orders and pi2.dst.actions == N3.actions)
    assert pi1.is_surjective() and pi2.is_surjective()
    r3 = residue_rank(N3, e)
    if not (residue_rank(N1, e) == residue_rank(N2, e) == r3):
        raise ValueError("equal-rank hypothesis violated")

    ker2 = pi2.kernel()
    best = None  # (U, quotient, project, psi)
    factoring = []
    for U in gamma_submodules(N2, ker2):
        quo, project = module_quotient(N2, U)
        # induced map quotient -> N3, tabulated in one pass over N2
        induced = {}
        for y in N2.elements():
            induced[project(y)] = pi2.apply(y)
        # a surjection N1 -> quotient lifting π₁
        found = None
        for psi in enumerate_module_homs(N1, quo):
            if not psi.is_surjective():
                continue
            if all(pi1.apply(x) == induced[psi.apply(x)] for x in _generators(N1)):
                found = psi
                break
        if found is not None:
            factoring.append((U, quo, project, found))
    assert factoring, "the common target itself must factor"
    Ustar = frozenset.intersection(*(frozenset(U) for U, _, _, _ in factoring))
    match = [t for t in factoring if frozenset(t[0]) == Ustar]
    assert match, "intersection of factoring submodules must factor"
    U, quo, project, psi = match[0]
    q2 = ModuleHom(N2, quo, tuple(tuple(project(col)[i] for col in _unit_columns(N2))
                                  for i in range(len(quo.orders))))
    fiber = _fiber_submodule(pi1, pi2)
    box = _fiber_submodule(psi, q2)
    return FiberResult(common_quotient=quo, to_common_1=psi, to_common_2=q2,
                       fiber_product=fiber, boxtimes=box)


def _unit_columns(M: ExplicitModule):
    k = len(M.orders)
    return [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]


def _generators(M: ExplicitModule):
    return _unit_columns(M)


