"""Congruence-group geometry for Gamma_0(N) and the theta group.

Integer 2x2 matrices taken mod +-I, group invariants (index, genus, cusp
data, elliptic counts), cusp scaling frames, and truncated enumeration of
Gamma_a \\ Gamma coset representatives for automorphic sums.

Scaling matrices are kept as exact pairs (A, w): A is an integer
unimodular matrix sending infinity to the cusp and w is the cusp width.
The true scaling matrix is A * diag(sqrt(w), 1/sqrt(w)); the irrational
factor is only ever composed at the point of acting on z, so membership
tests stay exact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd


class GroupError(ValueError):
    """Invalid group data (bad determinant, unknown cusp, weight, ...)."""


def _xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class UnimodularMatrix:
    """Integer matrix (a b; c d) with det 1, identified with its negative."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = int(a), int(b), int(c), int(d)
        if a * d - b * c != 1:
            raise GroupError(f"determinant of ({a},{b};{c},{d}) is not 1")
        # canonical sign: c > 0, or c == 0 and d > 0
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def T(cls, n=1):
        return cls(1, n, 0, 1)

    @classmethod
    def S(cls):
        return cls(0, -1, 1, 0)

    @classmethod
    def parse(cls, text: str) -> "UnimodularMatrix":
        parts = [int(p) for p in text.replace(";", ",").split(",")]
        if len(parts) != 4:
            raise GroupError(f"expected four integers a,b,c,d, got {text!r}")
        return cls(*parts)

    def __mul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"UM({self.a},{self.b};{self.c},{self.d})"

    @property
    def trace(self) -> int:
        return self.a + self.d

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1

    def tuple(self):
        return (self.a, self.b, self.c, self.d)

    def j(self, z: complex) -> complex:
        """Automorphy factor c*z + d."""
        return self.c * z + self.d

    def apply(self, z: complex) -> complex:
        """Moebius action on a point of the upper half-plane."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply_cusp(self, x):
        """Moebius action on a cusp (Fraction or None for infinity)."""
        if x is None:
            return None if self.c == 0 else Fraction(self.a, self.c)
        num = self.a * x.numerator + self.b * x.denominator
        den = self.c * x.numerator + self.d * x.denominator
        return None if den == 0 else Fraction(num, den)


def is_parabolic(M: UnimodularMatrix) -> bool:
    """Trace +-2 and not the identity mod +-I."""
    return abs(M.trace) == 2 and not M.is_identity()


_THETA_GEN = {
    "T2": UnimodularMatrix(1, 2, 0, 1),
    "T2^-1": UnimodularMatrix(1, -2, 0, 1),
    "S": UnimodularMatrix(0, -1, 1, 0),
    "S^-1": UnimodularMatrix(0, 1, -1, 0),
}


def theta_word(letters) -> UnimodularMatrix:
    """Product of theta-group generators T^2, S and their inverses.

    Letters are the strings "T2", "S", "T2^-1", "S^-1"; the product is
    taken left to right.
    """
    if not letters:
        raise GroupError("empty generator word")
    out = UnimodularMatrix.identity()
    for w in letters:
        try:
            out = out * _THETA_GEN[w]
        except KeyError:
            raise GroupError(f"unknown theta generator {w!r}") from None
    return out


@dataclass(frozen=True)
class CuspData:
    """One cusp class: representative, width and integer scaling frame A.

    The representative is a Fraction, or None for infinity.  A is the
    unimodular matrix with A(infinity) = representative; the full scaling
    matrix is A * diag(sqrt(width), 1/sqrt(width)).
    """

    label: str
    value: object  # Fraction | None
    width: int
    A: UnimodularMatrix

    def frame_point(self, z: complex) -> complex:
        """sigma_a^{-1} z = (A^{-1} z) / width."""
        return self.A.inv().apply(z) / self.width

    def frame_height(self, z: complex) -> float:
        return (self.A.inv().apply(z)).imag / self.width

    def scaled_point(self, z: complex) -> complex:
        """sigma_a z = A (width * z)."""
        return self.A.apply(self.width * z)

    def scaled_j(self, z: complex) -> complex:
        """j(sigma_a, z) = j(A, width*z) / sqrt(width)."""
        return self.A.j(self.width * z) / (self.width ** 0.5)

    def stabilizer_generator(self) -> UnimodularMatrix:
        """Generator A T^width A^{-1} of the parabolic subgroup fixing the cusp."""
        return self.A * UnimodularMatrix.T(self.width) * self.A.inv()


class GroupContext:
    """Invariants and cusp data for Gamma_0(N) or the theta group."""

    def __init__(self, kind, level, index, genus, nu2, nu3, cusps):
        self.kind = kind
        self.level = level
        self.index = index
        self.genus = genus
        self.nu2 = nu2
        self.nu3 = nu3
        self.cusps = list(cusps)
        self._by_label = {c.label: c for c in self.cusps}
        self.elliptic_orders = [2] * nu2 + [3] * nu3
        chi = 2 * genus - 2 + self.p + sum(1 - Fraction(1, e) for e in self.elliptic_orders)
        if self.p < 1 or chi <= 0:
            raise GroupError(f"inconsistent invariants for {kind} level {level}")

    @property
    def p(self) -> int:
        return len(self.cusps)

    @property
    def hyperbolic_count(self) -> int:
        return 2 * self.genus

    @property
    def translation_step(self) -> int:
        """Smallest t > 0 with T^t in the group (width of the infinity cusp)."""
        return self._by_label["inf"].width

    def cusp(self, label: str) -> CuspData:
        try:
            return self._by_label[label]
        except KeyError:
            raise GroupError(f"unknown cusp {label!r} for {self.kind} level {self.level}") from None

    def is_member(self, M: UnimodularMatrix) -> bool:
        if self.kind == "gamma0":
            return M.c % self.level == 0
        # theta group: congruent to I or to the antidiagonal pattern mod 2
        pat = (M.a % 2, M.b % 2, M.c % 2, M.d % 2)
        return pat in ((1, 0, 0, 1), (0, 1, 1, 0))

    def cache_key(self):
        return (self.kind, self.level)

    def __hash__(self):
        return hash(self.cache_key())

    def __eq__(self, other):
        return isinstance(other, GroupContext) and self.cache_key() == other.cache_key()

    def __repr__(self):
        return f"GroupContext({self.kind}, N={self.level}, mu={self.index}, g={self.genus}, p={self.p})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "level": self.level,
                "index": self.index,
                "genus": self.genus,
                "nu2": self.nu2,
                "nu3": self.nu3,
                "cusps": [
                    {
                        "label": c.label,
                        "value": None if c.value is None else [c.value.numerator, c.value.denominator],
                        "width": c.width,
                        "A": c.A.tuple(),
                    }
                    for c in self.cusps
                ],
            }
        )


def _legendre_m1(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _legendre_m3(p: int) -> int:
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _cusp_matrix(num: int, den: int) -> UnimodularMatrix:
    """Unimodular A with A(infinity) = num/den, gcd(num, den) = 1."""
    g, x, y = _xgcd(num, den)
    assert g == 1
    # num*x + den*y = 1  ->  (num, -y; den, x) has det num*x + den*y = 1
    return UnimodularMatrix(num, -y, den, x)


@lru_cache(maxsize=None)
def gamma0_context(N: int) -> GroupContext:
    """Invariants and cusp data of Gamma_0(N)."""
    if N < 1:
        raise GroupError("level must be a positive integer")
    primes = _prime_factors(N)
    index = N
    for q in primes:
        index = index * (q + 1) // q
    nu2 = 0 if N % 4 == 0 else _prod(1 + _legendre_m1(q) for q in primes)
    nu3 = 0 if N % 9 == 0 else _prod(1 + _legendre_m3(q) for q in primes)

    # cusp classes of Gamma_0(N): one for each divisor c of N and each
    # unit a mod gcd(c, N/c), represented by a fraction a'/c with
    # gcd(a', c) = 1; the class with denominator N is infinity.
    cusps = []
    for c in sorted(_divisors(N)):
        if c == N:
            cusps.append(CuspData("inf", None, 1, UnimodularMatrix.identity()))
            continue
        d1 = gcd(c, N // c)
        width = N // gcd(c * c, N)
        if c == 1:
            cusps.append(CuspData("0", Fraction(0, 1), N, UnimodularMatrix.S()))
            continue
        for a in range(1, d1 + 1):
            if gcd(a, d1) != 1:
                continue
            ap = a
            while gcd(ap, c) != 1:
                ap += d1
            frac = Fraction(ap, c)
            label = f"{frac.numerator}/{frac.denominator}"
            cusps.append(CuspData(label, frac, width, _cusp_matrix(frac.numerator, frac.denominator)))
    # infinity first, then 0, then the rest ascending
    cusps.sort(key=lambda cd: (cd.value is not None, cd.value if cd.value is not None else 0))

    p = len(cusps)
    genus_frac = 1 + Fraction(index, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(p, 2)
    if genus_frac.denominator != 1:
        raise GroupError(f"non-integral genus for N={N}")
    return GroupContext("gamma0", N, index, int(genus_frac), nu2, nu3, cusps)


def _prod(it):
    out = 1
    for v in it:
        out *= v
    return out


def _divisors(n: int):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


@lru_cache(maxsize=None)
def theta_context() -> GroupContext:
    """The theta group: index 3 in PSL_2(Z), cusps at infinity (width 2) and 1."""
    cusps = [
        CuspData("inf", None, 2, UnimodularMatrix.identity()),
        CuspData("1", Fraction(1, 1), 1, _cusp_matrix(1, 1)),
    ]
    return GroupContext("theta", 2, 3, 0, 1, 0, cusps)


class CosetEnumeration:
    """Truncated set of Gamma_a \\ Gamma representatives in the cusp frame.

    Stores one seed per orbit of right multiplication by T^step, where
    step is the group's translation step.  A seed is the frame matrix
    B = A^{-1} gamma (integer, det 1) with bottom row (c, d), c ascending,
    then d ascending in [0, step*c).  The frame matrices of the remaining
    representatives with the same c are the right translates B T^(step n).
    Complete for |c| <= C_max.
    """

    def __init__(self, ctx, cusp: CuspData, C_max: int, mats, step: int):
        self.ctx = ctx
        self.cusp = cusp
        self.C_max = C_max
        self.mats = list(mats)
        self.step = step
        self.exact = True

    @property
    def rows(self):
        return [(B.c, B.d) for B in self.mats]

    def gammas(self):
        """Group elements A*B corresponding to the seeds."""
        A = self.cusp.A
        return [A * B for B in self.mats]

    def __len__(self):
        return len(self.mats)


def _complete_seed(ctx: GroupContext, A: UnimodularMatrix, c: int, d: int):
    """Frame matrix B with bottom row (c, d) and A*B in the group, or None."""
    if c == 0:
        B = UnimodularMatrix(1, 0, 0, 1) if d == 1 else None
        if B is not None and ctx.is_member(A * B):
            return B
        return None
    g, x, _y = _xgcd(d, c)
    if g != 1:
        return None
    # B0 = (x, -(1 - x*d)/c ... ) choose a0 = x so a0*d - b0*c = 1
    a0 = x
    b0 = (a0 * d - 1) // c
    B0 = UnimodularMatrix(a0, b0, c, d)
    if ctx.kind == "gamma0":
        N = ctx.level
        r, s = A.c, A.d
        rc = (r * c) % N
        t = (-(r * a0 + s * c)) % N
        g2 = gcd(rc, N)
        if t % g2 != 0:
            return None
        # solve m * rc = t mod N
        rr, tt, nn = rc // g2, t // g2, N // g2
        _, inv, _ = _xgcd(rr % nn if nn > 1 else 0, nn if nn > 1 else 1)
        m = (tt * inv) % nn if nn > 1 else 0
        B = UnimodularMatrix.T(m) * B0
        assert ctx.is_member(A * B)
        return B
    # theta group: try the translates T^m B0 for m in a small window
    for m in range(0, 4):
        B = UnimodularMatrix.T(m) * B0
        if ctx.is_member(A * B):
            return B
    return None


@lru_cache(maxsize=512)
def _coset_reps_cached(ctx: GroupContext, label: str, C_max: int):
    cusp = ctx.cusp(label)
    step = ctx.translation_step
    A = cusp.A
    mats = []
    B0 = _complete_seed(ctx, A, 0, 1)
    if B0 is not None:
        mats.append(B0)
    for c in range(1, C_max + 1):
        for d in range(step * c):
            if gcd(c, d) != 1:
                continue
            B = _complete_seed(ctx, A, c, d)
            if B is not None:
                mats.append(B)
    return CosetEnumeration(ctx, cusp, C_max, mats, step)


def coset_reps(ctx: GroupContext, cusp: str = "inf", C_max: int = 50) -> CosetEnumeration:
    """Seed representatives of Gamma_a \\ Gamma with |c| <= C_max.

    Deterministic order: ascending c, then ascending d within the
    residue system mod step*c.
    """
    if C_max < 1:
        raise GroupError("C_max must be >= 1")
    if ctx.kind == "theta" and cusp != "inf":
        raise GroupError("only the infinity cusp is enumerable for the theta group")
    return _coset_reps_cached(ctx, cusp, C_max)


# ---------------------------------------------------------------------------
# permutation-action oracle for the Gamma_0(N) invariants


def _p1_reps(N: int):
    """Canonical representatives of P^1(Z/N)."""
    if N == 1:
        return [(0, 1)], {(0, 0): (0, 1)}
    units = [u for u in range(1, N) if gcd(u, N) == 1]
    canon = {}
    reps = []
    for c in range(N):
        for d in range(N):
            if gcd(gcd(c, d), N) != 1:
                continue
            key = (c, d)
            if key in canon:
                continue
            orbit = [((u * c) % N, (u * d) % N) for u in units]
            rep = min(orbit)
            for o in orbit:
                canon[o] = rep
            if rep not in reps:
                reps.append(rep)
    reps.sort()
    return reps, canon


def perm_invariants_oracle(N: int) -> dict:
    """Gamma_0(N) invariants from the permutation action of S, T on cosets.

    Independent of the closed-form expressions: the index is #P^1(Z/N),
    the elliptic counts are fixed points of the S and ST permutations,
    the cusp count is the number of T-orbits, and the genus comes from
    the Euler characteristic of the action.
    """
    reps, canon = _p1_reps(N)
    idx = {r: i for i, r in enumerate(reps)}

    def act(row, M):
        c, d = row
        return canon[((c * M.a + d * M.c) % N, (c * M.b + d * M.d) % N)]

    S = UnimodularMatrix.S()
    T = UnimodularMatrix.T()
    ST = S * T
    mu = len(reps)
    perm_s = [idx[act(r, S)] for r in reps]
    perm_st = [idx[act(r, ST)] for r in reps]
    perm_t = [idx[act(r, T)] for r in reps]
    nu2 = sum(1 for i, j in enumerate(perm_s) if i == j)
    nu3 = sum(1 for i, j in enumerate(perm_st) if i == j)
    seen = [False] * mu
    p = 0
    for i in range(mu):
        if seen[i]:
            continue
        p += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm_t[j]
    genus = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(p, 2)
    assert genus.denominator == 1
    return {"index": mu, "nu2": nu2, "nu3": nu3, "p": p, "genus": int(genus)}


def sample_elements(ctx: GroupContext, seed: int, count: int, max_c: int = 60,
                    word_len: int = 14, require_c: bool = True):
    """Deterministic sample of group elements from bounded random words in T, S.

    Words are reduced into the group by membership filtering; elements
    with |c| > max_c are discarded so downstream series evaluations stay
    in a numerically comfortable regime.
    """
    rng = random.Random(seed)
    T = UnimodularMatrix.T()
    Ti = UnimodularMatrix.T(-1)
    S = UnimodularMatrix.S()
    out = []
    seen = set()
    attempts = 0
    while len(out) < count and attempts < 20000:
        attempts += 1
        M = UnimodularMatrix.identity()
        for _ in range(rng.randrange(2, word_len)):
            M = M * rng.choice((T, Ti, S))
        if not ctx.is_member(M):
            continue
        if abs(M.c) > max_c or (require_c and M.c == 0):
            continue
        if M.is_identity() or M.tuple() in seen:
            continue
        seen.add(M.tuple())
        out.append(M)
    if len(out) < count:
        raise GroupError(f"could not sample {count} elements (got {len(out)})")
    return out
