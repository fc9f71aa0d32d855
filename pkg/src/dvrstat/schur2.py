"""Exact arithmetic for the order-2 symmetry case: a reduced class-2
central cover of H ⋊ Z/2 for a finite abelian 2-group H, the lifting map
W sending lattice vectors into the cover kernel, power-solution counts,
the lattice sums b(H, q, n), and the weighted-moment ratio.

H is specified by its 2-exponents d_1 >= ... >= d_r (orders 2^{d_i}).
The cover kernel is ∏_{i<j} Z/2^{d_j - 1} ≅ ∧²(2H), with one central
commutator coordinate per generator pair.
"""

import itertools
from fractions import Fraction


class NilClass2Cover:
    """Class-2 cover of H = ∏ Z/2^{d_i} generated by lifts x̃_i.

    Elements are (a, c): a are generator exponents mod 2^{d_i}, c the
    central commutator coordinates, one per pair i < j, mod 2^{d_j - 1}.
    Collection is left-to-right by generator index:
    x̃^a · x̃^b = x̃^{a+b} ∏_{i<j} [x̃_i, x̃_j]^{-a_j b_i}.
    """

    def __init__(self, ds):
        ds = tuple(int(d) for d in ds)
        assert all(a >= b for a, b in zip(ds, ds[1:])), "exponents must be sorted descending"
        assert all(d >= 1 for d in ds), "exponents must be positive"
        self.ds = ds
        self.r = len(ds)
        self.orders = tuple(2**d for d in ds)
        self.pairs = [(i, j) for i in range(self.r) for j in range(i + 1, self.r)]
        self.pair_mods = tuple(2 ** (ds[j] - 1) for _, j in self.pairs)

    # -- elements -----------------------------------------------------------

    def identity(self):
        return ((0,) * self.r, (0,) * len(self.pairs))

    def kernel_zero(self):
        return (0,) * len(self.pairs)

    @property
    def size(self):
        out = 1
        for o in self.orders:
            out *= o
        for m in self.pair_mods:
            out *= m
        return out

    @property
    def kernel_size(self):
        out = 1
        for m in self.pair_mods:
            out *= m
        return out

    @property
    def kernel_exponent(self):
        return max(self.pair_mods, default=1)

    def elements(self):
        for a in itertools.product(*(range(o) for o in self.orders)):
            for c in self.kernel_elements():
                yield (a, c)

    def kernel_elements(self):
        return itertools.product(*(range(m) for m in self.pair_mods))

    def kernel_add(self, c1, c2):
        return tuple((x + y) % m for x, y, m in zip(c1, c2, self.pair_mods))

    def kernel_smul(self, n, c):
        return tuple((n * x) % m for x, m in zip(c, self.pair_mods))

    # -- group law ----------------------------------------------------------

    def mul(self, x, y):
        a, c = x
        b, cp = y
        a2 = tuple((u + v) % o for u, v, o in zip(a, b, self.orders))
        c2 = list(self.kernel_add(c, cp))
        for t, (i, j) in enumerate(self.pairs):
            c2[t] = (c2[t] - a[j] * b[i]) % self.pair_mods[t]
        return (a2, tuple(c2))

    def power(self, x, n):
        y = self.identity()
        b = x
        while n:
            if n & 1:
                y = self.mul(y, b)
            b = self.mul(b, b)
            n >>= 1
        return y

    def element_order(self, x):
        o = 1
        y = x
        while y != self.identity():
            y = self.mul(y, x)
            o += 1
        return o

    def sigma(self, x):
        """The order-2 symmetry: inverts the generators, fixes the kernel."""
        a, c = x
        return (tuple((-u) % o for u, o in zip(a, self.orders)), c)

    def square_of_lift(self, a):
        """(x̃^a σ)² as a kernel element: coordinate (i, j) is a_i·a_j."""
        a = tuple(u % o for u, o in zip(a, self.orders))
        x = (a, self.kernel_zero())
        prod = self.mul(x, self.sigma(x))
        avec, c = prod
        assert all(u == 0 for u in avec)
        expect = tuple(a[i] * a[j] % m for (i, j), m in zip(self.pairs, self.pair_mods))
        assert c == expect
        return c


def class_reps(cover: NilClass2Cover):
    """{0,1}-exponent normal forms indexing the twisted conjugacy classes;
    one per element of H/2H."""
    return list(itertools.product((0, 1), repeat=cover.r))


def t_exponent(cover: NilClass2Cover, q):
    """((q-1)/2)·q^{-1} mod the kernel exponent."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    ex = cover.kernel_exponent
    if ex == 1:
        return 0
    return (q - 1) // 2 * pow(q, -1, ex) % ex


def w_map(cover: NilClass2Cover, q, m_vec):
    """W_{q⁻¹} of a lattice vector (coordinates aligned with class_reps):
    Σ_a m_a · t(q) · square_of_lift(a), in the cover kernel."""
    reps = class_reps(cover)
    assert len(m_vec) == len(reps)
    t = t_exponent(cover, q)
    acc = cover.kernel_zero()
    for m_a, a in zip(m_vec, reps):
        if m_a:
            acc = cover.kernel_add(acc, cover.kernel_smul(m_a * t, cover.square_of_lift(a)))
    return acc


def nr_pow(cover: NilClass2Cover, q, a):
    """Number of kernel elements x with x^{q-1} = a."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    v = _val2(q - 1)
    out = 1
    for coord, mod in zip(a, cover.pair_mods):
        g = min(2**v, mod)
        if coord % g != 0:
            return 0
        out *= g
    return out


def _val2(n):
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def lattice_kernel_vectors(cover: NilClass2Cover, n):
    """All m̲ ≥ 0 over H/2H with Σ m_a = n, Σ m_a ≡ 0 (mod 2), and
    Σ m_a·a ≡ 0 in H/2H."""
    reps = class_reps(cover)
    out = []
    if n % 2:
        return out

    def rec(idx, rem, res):
        if idx == len(reps) - 1:
            m_a = rem
            res2 = tuple((x + m_a * y) % 2 for x, y in zip(res, reps[idx]))
            if all(x == 0 for x in res2):
                out.append(tuple(prefix) + (m_a,))
            return
        for m_a in range(rem + 1):
            prefix.append(m_a)
            rec(idx + 1, rem - m_a, tuple((x + m_a * y) % 2 for x, y in zip(res, reps[idx])))
            prefix.pop()

    prefix = []
    rec(0, n, (0,) * cover.r)
    return out


def lattice_kernel_count(cover: NilClass2Cover, n):
    """#{m̲ ≥ 0 : Σ m_a = n, image 0 in H/2H × Z/2}, by dynamic programming
    over (partial sum, partial residue)."""
    if n % 2:
        return 0
    reps = class_reps(cover)
    zero = (0,) * cover.r
    dp = {(0, zero): 1}
    for a in reps:
        nxt = {}
        for (s, res), cnt in dp.items():
            for m_a in range(n - s + 1):
                res2 = tuple((x + m_a * y) % 2 for x, y in zip(res, a)) if m_a % 2 else res
                key = (s + m_a, res2)
                nxt[key] = nxt.get(key, 0) + cnt
        dp = nxt
    return dp.get((n, zero), 0)


def b_exact(ds, q, n):
    """Σ over lattice-kernel vectors m̲ of nr_{q-1}(W_{q⁻¹}(m̲))."""
    cover = NilClass2Cover(ds)
    total = 0
    for m_vec in lattice_kernel_vectors(cover, n):
        total += nr_pow(cover, q, w_map(cover, q, m_vec))
    return total


def b_closed(ds, v, n):
    """#(∧²2H)[2^{v-1}] times the lattice-kernel count."""
    if v < 1:
        raise ValueError("v must be >= 1")
    cover = NilClass2Cover(ds)
    tors = 1
    for mod in cover.pair_mods:
        tors *= min(2 ** (v - 1), mod)
    return tors * lattice_kernel_count(cover, n)


def w_image_multiset(ds, q, n):
    """Fiber sizes of m̲ ↦ W_{q⁻¹}(m̲) over the lattice kernel: a dict
    kernel element -> count."""
    cover = NilClass2Cover(ds)
    fibers = {}
    for m_vec in lattice_kernel_vectors(cover, n):
        w = w_map(cover, q, m_vec)
        fibers[w] = fibers.get(w, 0) + 1
    return fibers


def scaled_kernel(ds, v):
    """The subgroup 2^{v-1}·ker of the cover kernel, as a set."""
    cover = NilClass2Cover(ds)
    s = 2 ** (v - 1)
    return {cover.kernel_smul(s, c) for c in cover.kernel_elements()}


def moment_ratio(ds, v):
    """|(∧²(2H))[2^{v-1}]| / |2H| as an exact rational."""
    ds = tuple(int(d) for d in ds)
    if not ds:
        raise ValueError("H must be nontrivial")
    if v < 1:
        raise ValueError("v must be >= 1")
    cover = NilClass2Cover(ds)
    num = 1
    for mod in cover.pair_mods:
        num *= min(2 ** (v - 1), mod)
    den = 1
    for d in ds:
        den *= 2 ** (d - 1)
    return Fraction(num, den)
