"""Dense univariate polynomials over a residue field, as tuples of raw coefficients (low-to-high).

The zero polynomial is the empty tuple. Prime fields take an integer fast path.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .residue_field import FieldDescriptor


def trim(F: FieldDescriptor, a) -> tuple:
    z = F.zero
    n = len(a)
    while n and a[n - 1] == z:
        n -= 1
    return tuple(a[:n])


def add(F, a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(F, out)


def sub(F, a, b) -> tuple:
    out = list(a) + [F.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return trim(F, out)


def neg(F, a) -> tuple:
    return tuple(F.neg(c) for c in a)


def scale(F, a, c) -> tuple:
    if c == F.zero:
        return ()
    return tuple(F.mul(x, c) for x in a)


def mul(F, a, b) -> tuple:
    if not a or not b:
        return ()
    if F.degree == 1:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        if F.p:
            p = F.p
            return trim(F, [c % p for c in out])
        return trim(F, out)
    out = [F.zero] * (len(a) + len(b) - 1)
    z = F.zero
    for i, x in enumerate(a):
        if x != z:
            for j, y in enumerate(b):
                if y != z:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(F, out)


def divmod_(F, a, b) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    inv_lc = F.inv(b[-1])
    if F.degree == 1:
        return _divmod_scalar(F, a, b, db, inv_lc)
    q = [F.zero] * (len(a) - db)
    z = F.zero
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == z:
            continue
        c = F.mul(c, inv_lc)
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]))
    return trim(F, q), trim(F, a[:db])


def _divmod_scalar(F, a, b, db, inv_lc):
    p = F.p
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if p:
            c %= p
        if not c:
            continue
        c = c * inv_lc % p if p else c * inv_lc
        q[i - db] = c
        off = i - db
        for j in range(db):
            bj = b[j]
            if bj:
                a[off + j] -= c * bj
        a[i] = 0
    r = a[:db]
    if p:
        r = [x % p for x in r]
    if not p:
        q = [F.zero if x == 0 else x for x in q]
        r = [F.zero if x == 0 else x for x in r]
    return trim(F, q), trim(F, r)


def monic(F, a) -> tuple:
    if not a:
        return ()
    if a[-1] == F.one:
        return tuple(a)
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b) -> tuple:
    """Monic greatest common divisor."""
    a, b = trim(F, a), trim(F, b)
    while b:
        _, r = divmod_(F, a, b)
        a, b = b, r
    return monic(F, a)


def evaluate(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ord_(F, a) -> int:
    """Index of the lowest nonzero coefficient."""
    z = F.zero
    for i, c in enumerate(a):
        if c != z:
            return i
    raise ValueError("order of the zero polynomial")


def is_monomial(F, a) -> bool:
    z = F.zero
    return sum(1 for c in a if c != z) == 1


def spread(F, a, k: int) -> tuple:
    """Substitute u -> u^k."""
    if k == 1 or not a:
        return tuple(a)
    out = [F.zero] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return tuple(out)


def shift_down(a, k: int) -> tuple:
    return tuple(a[k:])


def power(F, a, n: int) -> tuple:
    result = (F.one,)
    base = tuple(a)
    while n:
        if n & 1:
            result = mul(F, result, base)
        n >>= 1
        if n:
            base = mul(F, base, base)
    return result


def gcd_fast(F, a, b) -> tuple:
    """Monic gcd with shortcuts for constants and monomials (both nonzero)."""
    if len(a) == 1 or len(b) == 1:
        return (F.one,)
    ma, mb = is_monomial(F, a), is_monomial(F, b)
    if ma or mb:
        k = min(ord_(F, a), ord_(F, b))
        return (F.zero,) * k + (F.one,)
    k = min(ord_(F, a), ord_(F, b))
    a, b = a[k:], b[k:]
    g = gcd(F, a, b) if F.p else gcd_char0(F, a, b)
    return (F.zero,) * k + g


def _is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    bases = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in bases:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ModP:
    """F_p for a large prime p, raw elements are ints; only what the helpers here need."""

    degree = 1
    zero = 0
    one = 1

    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


class ModP2:
    """F_p[w]/(w^2 + b w + c) for an inert prime p; raw elements are int pairs."""

    degree = 2

    def __init__(self, p: int, c: int, b: int):
        self.p, self.c, self.b = p, c, b
        self.zero = (0, 0)
        self.one = (1, 0)

    def add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x, y):
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x):
        return (-x[0] % self.p, -x[1] % self.p)

    def mul(self, x, y):
        p = self.p
        a0, a1 = x
        b0, b1 = y
        hi = a1 * b1
        # w^2 = -b w - c
        return ((a0 * b0 - self.c * hi) % p, (a0 * b1 + a1 * b0 - self.b * hi) % p)

    def inv(self, x):
        # x * conj(x) is the norm in F_p
        a0, a1 = x
        p = self.p
        conj = ((a0 - self.b * a1) % p, -a1 % p)
        n = self.mul(x, conj)[0]
        ni = pow(n, -1, p)
        return (conj[0] * ni % p, conj[1] * ni % p)


_PRIMES: dict = {}


def _modular_images(F) -> list:
    """Large primes p with a reduction F -> E; for extensions p is inert."""
    if F in _PRIMES:
        return _PRIMES[F]
    out = []
    p = (1 << 61) - 1
    while len(out) < 40:
        if _is_probable_prime(p):
            if F.degree == 1:
                out.append((p, ModP(p)))
            else:
                c, b, _ = F.minpoly
                if c.denominator % p and b.denominator % p:
                    cm = c.numerator * pow(c.denominator, -1, p) % p
                    bm = b.numerator * pow(b.denominator, -1, p) % p
                    if pow((bm * bm - 4 * cm) % p, (p - 1) // 2, p) == p - 1:
                        out.append((p, ModP2(p, cm, bm)))
        p -= 2
    _PRIMES[F] = out
    return out


def _reduce_scalar(q: Fraction, p: int):
    if q.denominator % p == 0:
        return None
    return q.numerator * pow(q.denominator, -1, p) % p


def _reduce_poly(F, a, p: int):
    out = []
    for c in a:
        if F.degree == 1:
            r = _reduce_scalar(c, p)
            if r is None:
                return None
        else:
            r = tuple(_reduce_scalar(x, p) for x in c)
            if None in r:
                return None
        out.append(r)
    return out


def _rational_reconstruct(u: int, m: int):
    """n/d with |n|, d <= sqrt(m/2) and n = u d mod m, or None."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _divides(F, g, a) -> bool:
    return not divmod_(F, a, g)[1]


def gcd_char0(F, a, b, max_primes: int = 40) -> tuple:
    """Monic gcd over Q or a quadratic field via modular images, CRT and rational reconstruction.

    A candidate is accepted only after exact trial division of both inputs, so
    the answer is always correct; plain Euclid is the fallback.
    """
    best_deg = None
    modulus = 1
    acc: list = []
    k = F.degree
    for p, E in _modular_images(F)[:max_primes]:
        ra, rb = _reduce_poly(F, a, p), _reduce_poly(F, b, p)
        if ra is None or rb is None:
            continue
        ra, rb = trim(E, ra), trim(E, rb)
        if len(ra) != len(a) or len(rb) != len(b):
            continue
        g = gcd(E, ra, rb)
        if len(g) == 1:
            return (F.one,)
        d = len(g) - 1
        if best_deg is not None and d > best_deg:
            continue
        flat = [x for c in g for x in ((c,) if k == 1 else c)]
        if best_deg is None or d < best_deg:
            best_deg, modulus, acc = d, p, flat
        else:
            # Chinese remaindering coefficientwise
            inv = pow(modulus, -1, p)
            acc = [x + modulus * ((y - x) * inv % p) for x, y in zip(acc, flat)]
            modulus *= p
        rec = [_rational_reconstruct(x, modulus) for x in acc]
        if None in rec:
            continue
        if k == 1:
            cand = tuple(rec)
        else:
            cand = tuple(F.from_coords(rec[i:i + k]) for i in range(0, len(rec), k))
        cand = trim(F, cand)
        if len(cand) - 1 == best_deg and cand[-1] == F.one and _divides(F, cand, a) and _divides(F, cand, b):
            return cand
    return gcd(F, a, b)


def exact_div(F, a, g) -> tuple:
    """a / g for a monic divisor g of a."""
    if len(g) == 1:
        return tuple(a)
    if is_monomial(F, g):
        return tuple(a[len(g) - 1:])
    return divmod_(F, a, g)[0]


def invmod(F, a, h) -> tuple:
    """Inverse of a modulo h (h irreducible, a not divisible by h)."""
    r0, r1 = tuple(h), divmod_(F, a, h)[1]
    s0, s1 = (), (F.one,)
    while len(r1) > 1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
    if not r1:
        raise ZeroDivisionError("not invertible modulo h")
    return scale(F, s1, F.inv(r1[0]))


def powmod(F, a, n: int, h) -> tuple:
    result = (F.one,)
    base = divmod_(F, a, h)[1]
    while n:
        if n & 1:
            result = divmod_(F, mul(F, result, base), h)[1]
        n >>= 1
        if n:
            base = divmod_(F, mul(F, base, base), h)[1]
    return result


def is_irreducible(F, h) -> bool:
    """Ben-Or test over a finite field."""
    k = len(h) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    q = F.order
    x = (F.zero, F.one)
    xp = x
    for _ in range(k // 2):
        xp = powmod(F, xp, q, h)
        if len(gcd(F, h, sub(F, xp, x))) > 1:
            return False
    return True


class QuotientField:
    """F[u]/(h) for an irreducible h of degree >= 2, with elements as trimmed tuples.

    Exposes the raw-operation interface of a residue field so the helpers in
    this module work over it unchanged.
    """

    p = 0

    def __init__(self, F, h):
        self.F = F
        self.h = tuple(h)
        self.degree = F.degree * (len(h) - 1)
        self.zero = ()
        self.one = (F.one,)

    def reduce(self, a) -> tuple:
        return divmod_(self.F, a, self.h)[1]

    def add(self, a, b):
        return add(self.F, a, b)

    def sub(self, a, b):
        return sub(self.F, a, b)

    def neg(self, a):
        return neg(self.F, a)

    def mul(self, a, b):
        return self.reduce(mul(self.F, a, b))

    def inv(self, a):
        return invmod(self.F, a, self.h)
