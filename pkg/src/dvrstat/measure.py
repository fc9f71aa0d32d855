"""Cohen–Lenstra style probability measure on finite DVR-module types,
truncated moment sums with bracketed tails, and a Monte-Carlo sampler
that draws the cokernel of a uniform n x (n+1) matrix over the ring
truncated at 𝔪^prec.

The residue field size Q may be any prime power; sampling over Q = p^f
with f > 1 runs in the unramified extension ring (Z/p^N)[z]/u(z).
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abelian import _is_prime
from .dvrmod import ModuleType, aut_count, partitions_of, sur_count
from . import linalg

DEFAULT_TRUNC = 64


def _prime_power_split(Q):
    for p in range(2, Q + 1):
        if Q % p == 0:
            f = 0
            n = Q
            while n % p == 0:
                n //= p
                f += 1
            if n != 1 or not _is_prime(p):
                raise ValueError("Q must be a prime power")
            return p, f
    raise ValueError("Q must be >= 2")


@dataclass(frozen=True)
class MeasureContext:
    """Residue field size plus the truncation index for the constant
    Z(Q) = ∏_{i=2}^∞ (1 - Q^{-i})."""

    Q: int
    trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        _prime_power_split(self.Q)
        assert self.trunc >= 2

    def z_bracket(self):
        """(lower, upper) rational bracket for Z(Q).

        The partial product to index `trunc` is an upper bound; the tail
        ∏_{i>T}(1 - Q^{-i}) is at least 1 - Q^{-T}/(Q - 1).
        """
        Q = self.Q
        part = Fraction(1)
        for i in range(2, self.trunc + 1):
            part *= 1 - Fraction(1, Q**i)
        tail_low = 1 - Fraction(1, Q**self.trunc * (Q - 1))
        return part * tail_low, part


def measure(ctx: MeasureContext, M: ModuleType):
    """Rational bracket for μ(M) = Z(Q) / (#Aut(M)·|M|)."""
    if M.Q != ctx.Q:
        raise ValueError("residue field size mismatch")
    zlo, zhi = ctx.z_bracket()
    den = aut_count(M) * M.size
    return zlo / den, zhi / den


@dataclass(frozen=True)
class MomentBracket:
    lower: Fraction
    upper: Fraction
    tail_estimate: Fraction  # heuristic geometric extrapolation, included in upper

    @property
    def width(self):
        return self.upper - self.lower


def moment_truncated(ctx: MeasureContext, V: ModuleType, B: int) -> MomentBracket:
    """Bracket for ∫ #Sur(X, V) dμ(X) from partitions of total size <= B.

    The lower bound drops the tail entirely; the upper bound adds a
    heuristic geometric extrapolation of the last partial-sum increments
    (the tail estimate is reported so callers can label it as such).
    The exact value of the full sum is 1/|V|.
    """
    if V.Q != ctx.Q:
        raise ValueError("residue field size mismatch")
    if B < sum(V.parts):
        raise ValueError("truncation below the target size")
    Q = ctx.Q
    zlo, zhi = ctx.z_bracket()
    increments = []
    for b in range(B + 1):
        s = Fraction(0)
        for lam in partitions_of(b):
            M = ModuleType(Q, lam)
            sc = sur_count(M, V)
            if sc:
                s += Fraction(sc, aut_count(M) * M.size)
        increments.append(s)
    S = sum(increments)
    positive = [x for x in increments if x > 0]
    tail = Fraction(0)
    if len(positive) >= 2 and increments[-1] > 0:
        ratios = [b / a for a, b in zip(positive, positive[1:]) if a > 0][-3:]
        r = min(max(max(ratios), Fraction(1, Q)), Fraction(9, 10))
        tail = increments[-1] * r / (1 - r)
    return MomentBracket(lower=zlo * S, upper=zhi * (S + tail), tail_estimate=zhi * tail)


# ---------------------------------------------------------------------------
# sampling

@dataclass(frozen=True)
class SampleOutcome:
    """Partition of a sampled cokernel; parts are valuations capped at the
    working precision, overflow marks a part that hit the cap."""

    parts: tuple
    overflow: bool

    def label(self):
        if not self.parts:
            return "0"
        marks = [str(v) for v in self.parts]
        if self.overflow:
            marks[0] += "+"
        return ",".join(marks)


class _GaloisRing:
    """(Z/p^N)[z]/u(z) with u a monic lift of an irreducible of degree f."""

    def __init__(self, p, f, N):
        self.p, self.f, self.N = p, f, N
        self.mod = p**N
        self.u = _irreducible_poly(p, f)

    def mul(self, a, b):
        prod = linalg.poly_mul(list(a), list(b), self.mod)
        _, rem = linalg.poly_divmod(prod, self.u, self.mod)
        return tuple(rem + [0] * (self.f - len(rem)))

    def sub(self, a, b):
        return tuple((x - y) % self.mod for x, y in zip(a, b))

    def valuation(self, a):
        v = self.N
        for c in a:
            if c:
                w = 0
                while c % self.p == 0:
                    c //= self.p
                    w += 1
                v = min(v, w)
        return v

    def shift_down(self, a, v):
        return tuple(c // self.p**v for c in a)

    def unit_inverse(self, a):
        # Newton iteration from the inverse in the residue field
        g, s, _ = linalg.poly_ext_gcd_modp(list(a), self.u, self.p)
        assert g == [1], "not a unit"
        x = tuple((c % self.p) for c in s + [0] * (self.f - len(s)))
        two = (2 % self.mod,) + (0,) * (self.f - 1)
        k = 1
        while k < self.N:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            k *= 2
        assert self.valuation(self.sub(self.mul(a, x), (1,) + (0,) * (self.f - 1))) >= self.N
        return x

    def zero(self):
        return (0,) * self.f

    def is_zero(self, a):
        return all(c == 0 for c in a)


def _irreducible_poly(p, f):
    """Coefficients (ascending) of a monic irreducible of degree f mod p."""
    import itertools as it
    import sympy

    z = sympy.symbols("z")
    for tail in it.product(range(p), repeat=f):
        coeffs = list(tail) + [1]
        if sympy.Poly(coeffs[::-1], z, modulus=p).is_irreducible:
            return coeffs
    raise AssertionError("no irreducible polynomial found")


def _coker_valuations_int(A, q, prec):
    """Diagonal valuations of an n x m matrix over Z/q^prec (q prime)."""
    mod = q**prec
    n, m = len(A), len(A[0])
    A = [row[:] for row in A]
    vals = []
    for t in range(min(n, m)):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                x = A[i][j] % mod
                if x == 0:
                    continue
                v = 0
                while x % q == 0:
                    x //= q
                    v += 1
                if best is None or v < best[0]:
                    best = (v, i, j)
                if best[0] == 0:
                    break
            if best and best[0] == 0:
                break
        if best is None:
            vals.extend([prec] * (min(n, m) - t))
            break
        v, bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        for row in A:
            row[t], row[bj] = row[bj], row[t]
        unit = A[t][t] // q**v
        uinv = pow(unit, -1, mod)
        for i in range(t + 1, n):
            if A[i][t] % mod:
                mult = (A[i][t] // q**v) * uinv % mod
                A[i] = [(a - mult * b) % mod for a, b in zip(A[i], A[t])]
        for j in range(t + 1, m):
            if A[t][j] % mod:
                mult = (A[t][j] // q**v) * uinv % mod
                for i in range(t, n):
                    A[i][j] = (A[i][j] - mult * A[i][t]) % mod
        vals.append(v)
    return vals


def _coker_valuations_ring(A, ring: _GaloisRing):
    n, m = len(A), len(A[0])
    A = [row[:] for row in A]
    prec = ring.N
    vals = []
    for t in range(min(n, m)):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if ring.is_zero(A[i][j]):
                    continue
                v = ring.valuation(A[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
                if best[0] == 0:
                    break
            if best and best[0] == 0:
                break
        if best is None:
            vals.extend([prec] * (min(n, m) - t))
            break
        v, bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        for row in A:
            row[t], row[bj] = row[bj], row[t]
        uinv = ring.unit_inverse(ring.shift_down(A[t][t], v))
        for i in range(t + 1, n):
            if not ring.is_zero(A[i][t]):
                mult = ring.mul(ring.shift_down(A[i][t], v), uinv)
                A[i] = [ring.sub(a, ring.mul(mult, b)) for a, b in zip(A[i], A[t])]
        for j in range(t + 1, m):
            if not ring.is_zero(A[t][j]):
                mult = ring.mul(ring.shift_down(A[t][j], v), uinv)
                for i in range(t, n):
                    A[i][j] = ring.sub(A[i][j], ring.mul(mult, A[i][t]))
        vals.append(v)
    return vals


def make_rng(seed: int):
    """Counter-based generator with an explicit 64-bit seed."""
    return np.random.Generator(np.random.Philox(seed))


def sample(ctx: MeasureContext, n: int, prec: int, rng) -> SampleOutcome:
    """Partition of the cokernel of a uniform n x (n+1) matrix over the
    ring truncated at 𝔪^prec."""
    assert n >= 1 and prec >= 1
    p, f = _prime_power_split(ctx.Q)
    if f == 1:
        mod = p**prec
        assert mod < 2**62
        A = rng.integers(0, mod, size=(n, n + 1))
        vals = _coker_valuations_int([[int(x) for x in row] for row in A], p, prec)
    else:
        ring = _GaloisRing(p, f, prec)
        mod = p**prec
        assert mod < 2**62
        raw = rng.integers(0, mod, size=(n, n + 1, f))
        A = [[tuple(int(c) for c in raw[i][j]) for j in range(n + 1)] for i in range(n)]
        vals = _coker_valuations_ring(A, ring)
    parts = tuple(sorted((v for v in vals if v > 0), reverse=True))
    return SampleOutcome(parts=parts, overflow=bool(parts and parts[0] >= prec))


def sample_many(ctx: MeasureContext, n: int, prec: int, trials: int, seed: int):
    """Frequency table {SampleOutcome: count} over `trials` draws."""
    rng = make_rng(seed)
    freq = {}
    for _ in range(trials):
        out = sample(ctx, n, prec, rng)
        freq[out] = freq.get(out, 0) + 1
    return freq
