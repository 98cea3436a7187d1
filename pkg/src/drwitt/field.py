"""Finite fields F_{p^r} and Galois rings W_N(F_{p^r}).

Both are realised as ``(Z/p^N)[x]/(f)`` where ``f`` is the Conway polynomial
of ``F_{p^r}`` read with integer coefficients; ``N = 1`` gives the field.
Elements are tuples of ``r`` integers (little-endian in the generator ``g``).
The ring Frobenius is the automorphism sending ``x`` to the root of ``f``
congruent to ``x^p``; with it the Teichmüller lift and inverse Frobenius are
exact at any working precision.
"""

from __future__ import annotations

import functools
import threading

from .errors import CapExceeded

#: Working p-adic precision of the shared Galois ring.  Forms of length m
#: need m digits; conversions between coordinate systems divide by at most
#: p^(2m), so 16 digits covers the supported lengths with margin.
PREC = 16

PRIME_CAP = 7
CONWAY_DEGREE_CAP = 4

# Conway polynomials, coefficients low -> high (monic).  Regenerated and
# checked against ``compute_conway`` in the test-suite.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- plain F_p[x] helpers (only used for the Conway search) ------------------

def _pmulmod(a, b, f, p):
    r = len(f) - 1
    prod = [0] * (2 * r - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, r - 1, -1):
        c = prod[k]
        if c:
            for i in range(r + 1):
                prod[k - r + i] = (prod[k - r + i] - c * f[i]) % p
    return prod[:r]


def _ppowmod(a, e, f, p):
    r = len(f) - 1
    result = [1] + [0] * (r - 1)
    base = list(a) + [0] * (r - len(a))
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def compute_conway(p: int, r: int) -> tuple[int, ...]:
    """Brute-force the Conway polynomial of F_{p^r} (small p^r only)."""
    q = p**r
    one = [1] + [0] * (r - 1)
    x = [0, 1] + [0] * (r - 2) if r > 1 else None
    subs = [d for d in range(1, r) if r % d == 0]
    sub_polys = {d: compute_conway(p, d) for d in subs}
    import itertools

    for alphas in itertools.product(range(p), repeat=r):
        # alphas = (alpha_{r-1}, ..., alpha_0); coefficient c_i = (-1)^{r-i} alpha_i
        coeffs = [0] * (r + 1)
        coeffs[r] = 1
        for pos, a in enumerate(alphas):
            i = r - 1 - pos
            coeffs[i] = (a if (r - i) % 2 == 0 else -a) % p
        if coeffs[0] == 0:
            continue
        f = coeffs
        if r == 1:
            root = (-f[0]) % p
            if any(pow(root, (q - 1) // l, p) == 1 for l in _prime_factors(q - 1)):
                continue
            return tuple(f)
        if _ppowmod(x, q - 1, f, p) != one:
            continue
        if any(_ppowmod(x, (q - 1) // l, f, p) == one for l in _prime_factors(q - 1)):
            continue
        ok = True
        for d, g in sub_polys.items():
            y = _ppowmod(x, (q - 1) // (p**d - 1), f, p)
            acc = [0] * r
            power = one
            for c in g:
                acc = [(s + c * t) % p for s, t in zip(acc, power)]
                power = _pmulmod(power, y, f, p)
            if any(acc):
                ok = False
                break
        if ok:
            return tuple(f)
    raise ValueError(f"no Conway polynomial found for ({p}, {r})")


def conway_polynomial(p: int, r: int) -> tuple[int, ...]:
    if (p, r) in CONWAY:
        return CONWAY[(p, r)]
    if p**r > 5000:
        raise CapExceeded(f"F_{p}^{r} is beyond the supported field size")
    return compute_conway(p, r)


class GaloisRing:
    """``W_N(F_{p^r})`` for all ``N <= prec`` at once.

    Methods take an optional precision ``k`` (default: ``prec``); results are
    reduced modulo ``p^k``.  ``k = 1`` is arithmetic in the residue field.
    """

    def __init__(self, p: int, r: int = 1, prec: int = PREC):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError("r must be positive")
        self.p, self.r, self.prec = p, r, prec
        self.q = p**r
        self.modulus = conway_polynomial(p, r)
        self.mods = [p**k for k in range(prec + 1)]
        self._zero = (0,) * r
        self._one = (1,) + (0,) * (r - 1)
        self._teich_cache: dict = {}
        self._lock = threading.Lock()
        self._sigma = self._frobenius_matrices()

    # construction -----------------------------------------------------------
    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def from_int(self, n: int, k: int | None = None):
        return ((n % self.mods[self.prec if k is None else k]),) + (0,) * (self.r - 1)

    def gen(self):
        """The generator g of F_{p^r} (for r = 1 this is the root of x + c, a constant)."""
        if self.r == 1:
            return (-self.modulus[0] % self.p,)
        return (0, 1) + (0,) * (self.r - 2)

    def elements(self):
        """All elements of the residue field F_{p^r}, in a fixed order."""
        import itertools

        return [tuple(t) for t in itertools.product(range(self.p), repeat=self.r)]

    # ring operations ---------------------------------------------------------
    def reduce(self, a, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        return tuple(x % M for x in a)

    def add(self, a, b, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub(self, a, b, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg(self, a, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        return tuple(-x % M for x in a)

    def scale(self, a, n: int, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        return tuple(x * n % M for x in a)

    def mul(self, a, b, k: int | None = None):
        M = self.mods[self.prec if k is None else k]
        r = self.r
        if r == 1:
            return (a[0] * b[0] % M,)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        f = self.modulus
        for d in range(2 * r - 2, r - 1, -1):
            c = prod[d]
            if c:
                for i in range(r):
                    prod[d - r + i] -= c * f[i]
        return tuple(x % M for x in prod[:r])

    def finish_raw(self, raw: dict, k: int | None = None) -> dict:
        """Reduce a map of unreduced convolution products; drops zeros."""
        M = self.mods[self.prec if k is None else k]
        r, f = self.r, self.modulus
        out = {}
        for e, prod in raw.items():
            if len(prod) > r:
                prod = list(prod)
                for d in range(len(prod) - 1, r - 1, -1):
                    c = prod[d]
                    if c:
                        for i in range(r):
                            prod[d - r + i] -= c * f[i]
            c = tuple(x % M for x in prod[:r])
            if any(c):
                out[e] = c
        return out

    def pow(self, a, e: int, k: int | None = None):
        result = self.from_int(1, k)
        base = self.reduce(a, k)
        while e:
            if e & 1:
                result = self.mul(result, base, k)
            base = self.mul(base, base, k)
            e >>= 1
        return result

    def is_zero(self, a, k: int | None = None) -> bool:
        if k is None:
            return not any(a)
        M = self.mods[k]
        return all(x % M == 0 for x in a)

    def valuation(self, a) -> float:
        """p-adic valuation (``inf`` for 0) of a working-precision element."""
        best = float("inf")
        p = self.p
        for x in a:
            if x:
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                best = min(best, v)
        return best

    def divp(self, a, e: int, k: int | None = None):
        """Exact division by p^e (raises if not divisible)."""
        P = self.mods[e]
        for x in a:
            if x % P:
                raise ArithmeticError("element not divisible by p^%d" % e)
        M = self.mods[self.prec if k is None else k]
        return tuple((x // P) % M for x in a)

    def inv(self, a, k: int | None = None):
        """Inverse of a unit modulo p^k (Newton iteration from the residue field)."""
        k = self.prec if k is None else k
        if self.is_zero(a, 1):
            raise ZeroDivisionError("not a unit")
        x = self.pow(self.reduce(a, 1), self.q - 2, 1)
        prec = 1
        two = self.from_int(2)
        while prec < k:
            prec = min(2 * prec, k)
            x = self.mul(x, self.sub(two, self.mul(a, x, prec), prec), prec)
        return x

    # Frobenius ---------------------------------------------------------------
    def _frobenius_matrices(self):
        r, p, k = self.r, self.p, self.prec
        if r == 1:
            return None
        f = self.modulus

        def f_eval(y, deriv=False):
            acc = self.zero
            coeffs = [i * c for i, c in enumerate(f)][1:] if deriv else list(f)
            for c in reversed(coeffs):
                acc = self.add(self.mul(acc, y), self.from_int(c))
            return acc

        y = self.pow(self.gen(), p)
        for _ in range(k.bit_length() + 1):
            y = self.sub(y, self.mul(f_eval(y), self.inv(f_eval(y, deriv=True))))
        powers = [self.one]
        for _ in range(r - 1):
            powers.append(self.mul(powers[-1], y))
        mats = [None, powers]
        for e in range(2, r):
            prev = mats[-1]
            mats.append([self._apply_sigma(mp, powers) for mp in prev])
        return mats

    def _apply_sigma(self, a, images):
        acc = [0] * self.r
        for c, img in zip(a, images):
            if c:
                for i, v in enumerate(img):
                    acc[i] += c * v
        M = self.mods[self.prec]
        return tuple(x % M for x in acc)

    def sigma(self, a, e: int = 1, k: int | None = None):
        """Apply the e-th power of the ring Frobenius (e may be negative)."""
        if self.r == 1:
            return self.reduce(a, k)
        e %= self.r
        if e == 0:
            return self.reduce(a, k)
        out = self._apply_sigma(a, self._sigma[e])
        return out if k is None else self.reduce(out, k)

    def teich(self, c, k: int | None = None):
        """Teichmüller lift of a residue-field element."""
        c = self.reduce(c, 1)
        with self._lock:
            hit = self._teich_cache.get(c)
        if hit is None:
            hit = self.pow(c, self.q ** (self.prec - 1))
            with self._lock:
                self._teich_cache[c] = hit
        return hit if k is None else self.reduce(hit, k)

    def field_root(self, c):
        """The unique p-th root of a residue-field element."""
        return self.sigma(self.reduce(c, 1), -1, 1)

    def field_inv(self, c):
        return self.pow(self.reduce(c, 1), self.q - 2, 1)


@functools.lru_cache(maxsize=None)
def galois_ring(p: int, r: int = 1) -> GaloisRing:
    """Shared working-precision Galois ring for (p, r)."""
    if p > PRIME_CAP:
        raise CapExceeded(f"p = {p} exceeds the prime cap {PRIME_CAP}")
    return GaloisRing(p, r)
