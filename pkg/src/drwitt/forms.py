"""Normal forms for W_m Omega^q of a Laurent tower.

Representation
--------------
A form of length ``m`` is a finite sum of terms ``c * T^(N / p^(m-1)) * dlog T_I``
where ``N`` is an integer index vector (one entry per tower variable, outer
variable last), ``I`` a sorted tuple of variable positions and ``c`` a
Galois-ring coefficient.  These are the integral forms with p-power
denominators in the exponents (Illusie's model of the de Rham-Witt complex of
a Laurent polynomial algebra over a perfect field), taken modulo
``V^m + dV^m``.  In this model

* ``F`` keeps ``N`` and applies the ring Frobenius to ``c`` (length m -> m-1),
* ``V`` keeps ``N`` and sends ``c`` to ``p * sigma^-1(c)`` (length m -> m+1),
* ``R`` sends ``N`` to ``N / p`` and kills terms with ``p`` not dividing ``N``,
* ``d`` multiplies by the exponent vector, ``[T^a]`` is the term ``(p^(m-1) a, ())``.

The index ``N`` is exactly the component index ``n`` of the Geisser-Hesselholt
decomposition in the outer variable, so filtration levels and index shifts
are read off the keys.  ``components()`` / ``from_components()`` convert to
and from the explicit ``V^s(a [t]^i) + dV^s(b [t]^i)`` components.

Canonical form
--------------
All terms sharing an index ``N`` form one block.  Let ``u`` be the p-adic
denominator of the weight ``N / p^(m-1)`` and ``kappa = p^u * weight``
(integral, with a unit entry at position ``j0``).  The block is integral iff
``kappa ^ c = 0 mod p^u``; every such block is uniquely
``kappa ^ b + p^u * gamma`` with ``b, gamma`` free of ``dlog T_j0`` and
reduced mod ``p^(m-u)``.  Blocks with ``u = 0`` are plain coefficients mod
``p^m``.  Equality of forms is equality of canonical term maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    DegreeMismatch,
    DegreeOutOfRange,
    LengthUnderflow,
    NotAUnit,
    PrecisionRequired,
    ShapeMismatch,
    TowerMismatch,
)
from .field import GaloisRing
from .laurent import LaurentElem, TowerSpec, poly_add, poly_mul, poly_pow
from .witt import WittVec


def vp(n: int, p: int):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def weight_data(N: tuple, m: int, p: int):
    """(u, kappa, j0) for index N at length m; kappa/j0 are None when u = 0."""
    v = min((vp(x, p) for x in N), default=math.inf)
    if v >= m - 1:
        return 0, None, None
    u = m - 1 - v
    pv = p**v
    kappa = tuple(x // pv for x in N)
    j0 = next(j for j, x in enumerate(kappa) if x % p)
    return u, kappa, j0


def wedge_var(j: int, I: tuple):
    """e_j ^ e_I = sign * e_J, returned as (sign, J); None when j in I."""
    if j in I:
        return None
    below = sum(1 for i in I if i < j)
    J = tuple(sorted(I + (j,)))
    return (-1 if below % 2 else 1), J


def wedge_sets(I: tuple, J: tuple):
    """e_I ^ e_J = sign * e_K; None when I and J overlap."""
    if set(I) & set(J):
        return None
    inversions = sum(1 for i in I for j in J if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


def _acc(ring, out, key, c):
    if key in out:
        out[key] = ring.add(out[key], c)
    else:
        out[key] = ring.reduce(c)


def _canon_block(ring: GaloisRing, m: int, N: tuple, block: dict, p: int) -> dict:
    """Canonicalize the coefficient block of one index N; returns I -> coefficient."""
    u, kappa, j0 = weight_data(N, m, p)
    if u == 0:
        out = {}
        for I, c in block.items():
            c = ring.reduce(c, m)
            if any(c):
                out[I] = c
        return out
    M = ring.mods[ring.prec]
    kinv = pow(kappa[j0] % M, -1, M)
    b: dict = {}
    for I, c in block.items():
        if j0 in I:
            J = tuple(i for i in I if i != j0)
            sign = -1 if sum(1 for i in J if i < j0) % 2 else 1
            _acc(ring, b, J, ring.scale(c, sign * kinv))
    rest = {I: c for I, c in block.items()}
    kb = _kappa_wedge(ring, kappa, b)
    for I, c in kb.items():
        rest[I] = ring.sub(rest.get(I, ring.zero), c)
    gamma = {}
    for I, c in rest.items():
        if not any(c):
            continue
        if j0 in I:
            raise ArithmeticError("internal: j0-component did not cancel")
        try:
            gamma[I] = ring.divp(c, u, m - u)
        except ArithmeticError:
            raise ArithmeticError(f"non-integral block at index {N} (length {m})") from None
    b = {J: ring.reduce(c, m - u) for J, c in b.items()}
    out: dict = {}
    for I, c in _kappa_wedge(ring, kappa, b).items():
        _acc(ring, out, I, c)
    pu = p**u
    for I, c in gamma.items():
        _acc(ring, out, I, ring.scale(c, pu))
    res = {}
    for I, c in out.items():
        c = ring.reduce(c, m)
        if any(c):
            res[I] = c
    return res


def split_kappa(ring, kappa, j0, block: dict):
    """Split a block as ``kappa ^ b + rest`` with ``b`` and ``rest`` free of ``dlog T_j0``."""
    M = ring.mods[ring.prec]
    kinv = pow(kappa[j0] % M, -1, M)
    b: dict = {}
    for I, c in block.items():
        if j0 in I:
            J = tuple(i for i in I if i != j0)
            sign = -1 if sum(1 for i in J if i < j0) % 2 else 1
            _acc(ring, b, J, ring.scale(c, sign * kinv))
    rest = dict(block)
    for I, c in _kappa_wedge(ring, kappa, b).items():
        rest[I] = ring.sub(rest.get(I, ring.zero), c)
    return b, {I: c for I, c in rest.items() if any(c)}


def _kappa_wedge(ring, kappa, b: dict) -> dict:
    out: dict = {}
    for J, c in b.items():
        for j, kj in enumerate(kappa):
            if kj:
                w = wedge_var(j, J)
                if w is not None:
                    sign, K = w
                    _acc(ring, out, K, ring.scale(c, sign * kj))
    return out


def normalize_terms(tower: TowerSpec, m: int, raw: dict) -> dict:
    """Canonical term map from a raw (N, I) -> coefficient map of integral lifts."""
    if m <= 0:
        return {}
    ring, p = tower.ring, tower.p
    blocks: dict = {}
    for (N, I), c in raw.items():
        blk = blocks.setdefault(N, {})
        if I in blk:
            blk[I] = ring.add(blk[I], c)
        else:
            blk[I] = c
    out = {}
    for N in sorted(blocks, key=lambda n: n[::-1]):
        for I, c in sorted(_canon_block(ring, m, N, blocks[N], p).items()):
            out[(N, I)] = c
    return out


def raw_d(tower: TowerSpec, m: int, raw: dict) -> dict:
    """d on exact integral lifts at length m (no reduction)."""
    ring, p = tower.ring, tower.p
    out: dict = {}
    for (N, I), c in raw.items():
        for j, nj in enumerate(N):
            if nj:
                w = wedge_var(j, I)
                if w is not None:
                    sign, K = w
                    _acc(ring, out, (N, K), ring.scale(c, sign * nj))
    if m > 1:
        out = {k: ring.divp(c, m - 1) for k, c in out.items()}
    return {k: c for k, c in out.items() if any(c)}


@dataclass(frozen=True)
class GhComponent:
    """One summand of the decomposition in the outer variable.

    ``s = 0``: ``a [t]^i + b [t]^i dlog[t]`` with ``i = n / p^(m-1)``;
    ``s >= 1``: ``V^s(a [t]^i) + dV^s(b [t]^i)`` with ``i = n / p^(m-1-s)``.
    ``a``/``b`` are forms over the inner tower of length ``m - s``
    (``b`` is None in degree 0).
    """

    n: int
    s: int
    a: "DrwForm"
    b: Optional["DrwForm"]

    @property
    def i(self) -> int:
        m = self.a.m + self.s
        return self.n // self.a.tower.p ** (m - 1 - self.s)


class DrwForm:
    """Element of W_m Omega^q of a Laurent tower in canonical form."""

    __slots__ = ("tower", "m", "q", "terms", "prec", "_hash")

    def __init__(self, tower: TowerSpec, m: int, q: int, terms: dict | None = None,
                 *, normalize: bool = True, prec: int | None = None):
        if m < 0:
            raise LengthUnderflow("negative length")
        if q < 0:
            raise DegreeOutOfRange(f"negative degree {q}")
        self.tower, self.m, self.q = tower, m, q
        terms = terms or {}
        if q > tower.depth:
            terms = {}
        for (N, I), _ in terms.items():
            if len(N) != tower.depth or len(I) != q:
                raise DegreeOutOfRange(f"term ({N}, {I}) does not fit degree {q} at level {tower.depth}")
        if normalize:
            terms = normalize_terms(tower, m, terms)
        if prec is not None:
            terms = {k: c for k, c in terms.items() if k[0][-1] < prec}
        self.terms = terms
        self.prec = prec
        self._hash = None

    # constructors -------------------------------------------------------------
    @classmethod
    def zero(cls, tower, m, q=0):
        return cls(tower, m, q, {}, normalize=False)

    @classmethod
    def integer(cls, tower, n: int, m: int) -> "DrwForm":
        return cls(tower, m, 0, {((0,) * tower.depth, ()): tower.ring.from_int(n)})

    @classmethod
    def teich_monomial(cls, tower, exps, m, c=None) -> "DrwForm":
        ring = tower.ring
        coeff = ring.one if c is None else ring.teich(c)
        N = tuple(tower.p ** (m - 1) * e for e in exps)
        return cls(tower, m, 0, {(N, ()): coeff})

    @classmethod
    def dlog_var(cls, tower, j: int, m: int) -> "DrwForm":
        return cls(tower, m, 1, {((0,) * tower.depth, (j,)): tower.ring.one})

    # protocol -------------------------------------------------------------------
    @property
    def level(self) -> int:
        return self.tower.depth

    def shape(self):
        return (self.tower, self.m, self.q)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DrwForm):
            return NotImplemented
        if self.shape() != other.shape():
            return False
        bound = _min_prec(self.prec, other.prec)
        if bound is None:
            return self.terms == other.terms
        return _cut(self.terms, bound) == _cut(other.terms, bound)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tower, self.m, self.q, tuple(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"DrwForm(m={self.m}, q={self.q}: {self})"

    def _same(self, other, what="operands"):
        if not isinstance(other, DrwForm):
            raise TypeError(f"expected DrwForm, got {type(other).__name__}")
        if other.tower != self.tower:
            raise TowerMismatch(f"{what} live over different towers")
        if other.m != self.m:
            raise ShapeMismatch(f"{what} have lengths {self.m} and {other.m}")

    # arithmetic -------------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = DrwForm.integer(self.tower, other, self.m)
        self._same(other)
        if other.q != self.q:
            raise DegreeMismatch(f"cannot add forms of degrees {self.q} and {other.q}")
        ring = self.tower.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = ring.add(out[k], c) if k in out else c
        return DrwForm(self.tower, self.m, self.q, out, prec=_min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        ring = self.tower.ring
        return DrwForm(self.tower, self.m, self.q, {k: ring.neg(c) for k, c in self.terms.items()}, prec=self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = DrwForm.integer(self.tower, other, self.m)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, n: int) -> "DrwForm":
        ring = self.tower.ring
        return DrwForm(self.tower, self.m, self.q, {k: ring.scale(c, n) for k, c in self.terms.items()}, prec=self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        ring = self.tower.ring
        q = self.q + other.q
        out: dict = {}
        if q <= self.tower.depth:
            for (N1, I1), c1 in self.terms.items():
                for (N2, I2), c2 in other.terms.items():
                    w = wedge_sets(I1, I2)
                    if w is None:
                        continue
                    sign, K = w
                    N = tuple(x + y for x, y in zip(N1, N2))
                    c = ring.mul(c1, c2)
                    _acc(ring, out, (N, K), c if sign > 0 else ring.neg(c))
        prec = None
        if self.prec is not None or other.prec is not None:
            cands = []
            if self.prec is not None:
                cands.append(self.prec + other.min_outer_index())
            if other.prec is not None:
                cands.append(other.prec + self.min_outer_index())
            prec = min(cands)
            prec = None if prec == math.inf else int(prec)
        return DrwForm(self.tower, self.m, q, out, prec=prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of forms are not defined")
        out = DrwForm.integer(self.tower, 1, self.m)
        for _ in range(n):
            out = out * self
        return out

    # operators -----------------------------------------------------------------------
    def d(self) -> "DrwForm":
        raw = raw_d(self.tower, self.m, self.terms)
        return DrwForm(self.tower, self.m, self.q + 1, raw, prec=self.prec)

    def F(self) -> "DrwForm":
        if self.m == 0:
            raise LengthUnderflow("F on the zero ring")
        ring = self.tower.ring
        raw = {k: ring.sigma(c) for k, c in self.terms.items()}
        return DrwForm(self.tower, self.m - 1, self.q, raw, prec=self.prec)

    def V(self) -> "DrwForm":
        ring, p = self.tower.ring, self.tower.p
        raw = {k: ring.scale(ring.sigma(c, -1), p) for k, c in self.terms.items()}
        return DrwForm(self.tower, self.m + 1, self.q, raw, prec=self.prec)

    def R(self) -> "DrwForm":
        if self.m == 0:
            raise LengthUnderflow("R on the zero ring")
        p = self.tower.p
        raw = {}
        for (N, I), c in self.terms.items():
            if all(x % p == 0 for x in N):
                raw[(tuple(x // p for x in N), I)] = c
        prec = None if self.prec is None else -(-self.prec // p)
        return DrwForm(self.tower, self.m - 1, self.q, raw, prec=prec)

    def Fn(self, k: int) -> "DrwForm":
        out = self
        for _ in range(k):
            out = out.F()
        return out

    def Vn(self, k: int) -> "DrwForm":
        out = self
        for _ in range(k):
            out = out.V()
        return out

    def Rn(self, k: int) -> "DrwForm":
        out = self
        for _ in range(k):
            out = out.R()
        return out

    # structure --------------------------------------------------------------------------
    def outer_indices(self) -> list:
        return sorted({N[-1] for (N, _) in self.terms})

    def min_outer_index(self):
        return min((N[-1] for (N, _) in self.terms), default=math.inf)

    def restrict_outer(self, n: int) -> "DrwForm":
        return DrwForm(self.tower, self.m, self.q,
                       {k: c for k, c in self.terms.items() if k[0][-1] == n}, normalize=False)

    def drop_outer_at_least(self, bound: int) -> "DrwForm":
        """Keep only terms with outer index < bound."""
        return DrwForm(self.tower, self.m, self.q,
                       {k: c for k, c in self.terms.items() if k[0][-1] < bound}, normalize=False)

    def blocks(self) -> dict:
        out: dict = {}
        for (N, I), c in self.terms.items():
            out.setdefault(N, {})[I] = c
        return out

    def with_terms(self, terms: dict) -> "DrwForm":
        return DrwForm(self.tower, self.m, self.q, terms)

    # GH components ---------------------------------------------------------------------
    def components(self) -> list:
        if self.tower.depth == 0:
            raise ShapeMismatch("components are defined over towers of depth >= 1")
        return [self._component(n) for n in self.outer_indices()]

    def _component(self, n: int) -> GhComponent:
        tower, m, q = self.tower, self.m, self.q
        ring, p = tower.ring, tower.p
        inner = tower.inner()
        outer = tower.depth - 1
        alpha, beta = {}, {}
        for (N, I), c in self.terms.items():
            if N[-1] != n:
                continue
            if I and I[-1] == outer:
                beta[(N[:-1], I[:-1])] = c
            else:
                alpha[(N[:-1], I)] = c
        v = vp(n, p)
        if v >= m - 1:
            a = DrwForm(inner, m, q, alpha)
            b = DrwForm(inner, m, q - 1, beta) if q >= 1 else None
            return GhComponent(n, 0, a, b)
        s = m - 1 - v
        i = n // p**v
        M = ring.mods[ring.prec]
        iinv = pow(i % M, -1, M)
        b_raw = {k: ring.scale(ring.sigma(c, s), iinv) for k, c in beta.items()}
        db = raw_d(inner, m - s, b_raw)
        a_raw = {k: ring.sigma(c, s) for k, c in alpha.items()}
        for k, c in db.items():
            a_raw[k] = ring.sub(a_raw.get(k, ring.zero), c)
        a_raw = {k: ring.divp(c, s) for k, c in a_raw.items()}
        a = DrwForm(inner, m - s, q, a_raw)
        b = DrwForm(inner, m - s, q - 1, b_raw) if q >= 1 else None
        return GhComponent(n, s, a, b)

    @classmethod
    def from_components(cls, tower: TowerSpec, m: int, q: int, comps) -> "DrwForm":
        ring, p = tower.ring, tower.p
        outer = tower.depth - 1
        raw: dict = {}
        for comp in comps:
            n, s = comp.n, comp.s
            expected_s = 0 if vp(n, p) >= m - 1 else m - 1 - vp(n, p)
            if s != expected_s:
                raise ShapeMismatch(f"component at n={n} must have s={expected_s}, got {s}")
            if comp.a.m != m - s or (comp.b is not None and comp.b.m != m - s):
                raise ShapeMismatch(f"component at n={n} needs coefficient length {m - s}")
            if s == 0:
                for (N, I), c in comp.a.terms.items():
                    _acc(ring, raw, (N + (n,), I), c)
                if comp.b is not None:
                    for (N, J), c in comp.b.terms.items():
                        _acc(ring, raw, (N + (n,), J + (outer,)), c)
                continue
            i = n // p ** (m - 1 - s)
            ps = p**s
            inner_raw = {k: ring.scale(c, ps) for k, c in comp.a.terms.items()}
            if comp.b is not None:
                for k, c in raw_d(comp.a.tower, m - s, comp.b.terms).items():
                    _acc(ring, inner_raw, k, c)
                for (N, J), c in comp.b.terms.items():
                    _acc(ring, raw, (N + (n,), J + (outer,)), ring.scale(ring.sigma(c, -s), i))
            for (N, I), c in inner_raw.items():
                _acc(ring, raw, (N + (n,), I), ring.sigma(c, -s))
        return cls(tower, m, q, raw)

    # text / JSON ---------------------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        tower = self.tower
        names = tower.var_names
        ring = tower.ring
        den = tower.p ** (self.m - 1) if self.m else 1
        parts = []
        for (N, I), c in self.terms.items():
            coeff = _format_coeff(ring, c)
            mono = []
            for name, x in zip(names, N):
                if x:
                    g = math.gcd(x, den)
                    num, dd = x // g, den // g
                    mono.append(name if (num == 1 and dd == 1) else
                                (f"{name}^{num}" if dd == 1 else f"{name}^({num}/{dd})"))
            dl = [f"dlog({names[j]})" for j in I]
            body = "*".join(mono + dl)
            if not body:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(body)
            else:
                parts.append(f"{coeff}*{body}")
        text = " + ".join(parts)
        if self.prec is not None:
            text += f" + O(index {self.prec})"
        return text

    def to_json(self) -> dict:
        return form_to_json(self)

    @classmethod
    def from_json(cls, tower: TowerSpec, data) -> "DrwForm":
        return form_from_json(tower, data)


def _format_coeff(ring, c) -> str:
    if ring.r == 1:
        x = c[0]
        M = ring.mods[ring.prec]
        return str(x if x < M // 2 else x - M)
    return "(" + ",".join(str(x) for x in c) + ")"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _cut(terms, bound):
    return {k: c for k, c in terms.items() if k[0][-1] < bound}


# -- Witt vectors <-> degree-0 forms ------------------------------------------

def teich_form(x: LaurentElem, m: int) -> DrwForm:
    """[x]_m as a degree-0 form: F^-(m-1) of the lifted x^(p^(m-1))."""
    tower = x.tower
    ring, p = tower.ring, tower.p
    if not x.terms:
        return DrwForm.zero(tower, m)
    lifted = x.lift_terms()
    power = lifted
    for _ in range(m - 1):
        power = poly_pow(ring, power, p, m)
    raw = {(e, ()): ring.sigma(c, -(m - 1)) for e, c in power.items()}
    return DrwForm(tower, m, 0, raw)


def from_witt(w: WittVec) -> DrwForm:
    """sum_j V^j([x_j]) computed as F^-(m-1) of the (m-1)-st ghost component."""
    tower, m = w.tower, w.m
    ring, p = tower.ring, tower.p
    if m == 0:
        return DrwForm.zero(tower, 0)
    acc: dict = {}
    for j, x in enumerate(w.coords):
        if not x.terms:
            continue
        power = x.lift_terms()
        for _ in range(m - 1 - j):
            power = poly_pow(ring, power, p, m - j)
        pj = p**j
        acc = poly_add(ring, acc, {e: ring.scale(c, pj) for e, c in power.items()}, m)
    raw = {(e, ()): ring.sigma(c, -(m - 1)) for e, c in acc.items()}
    return DrwForm(tower, m, 0, raw)


def to_witt(x: DrwForm) -> WittVec:
    """Inverse of from_witt on degree-0 forms."""
    if x.q != 0:
        raise ShapeMismatch("to_witt needs a degree-0 form")
    tower = x.tower
    ring, p = tower.ring, tower.p
    coords = []
    cur = x
    while cur.m > 0:
        m = cur.m
        den = p ** (m - 1)
        a0 = {}
        for (N, _), c in cur.terms.items():
            if all(n % den == 0 for n in N):
                cc = ring.reduce(c, 1)
                if any(cc):
                    a0[tuple(n // den for n in N)] = cc
        a0 = LaurentElem(tower, a0)
        coords.append(a0)
        if m == 1:
            break
        rest = cur - teich_form(a0, m)
        raw = {k: ring.divp(ring.sigma(c), 1) for k, c in rest.terms.items()}
        cur = DrwForm(tower, m - 1, 0, raw)
    return WittVec(tower, coords)


# -- dlog -------------------------------------------------------------------------

def dlog(u: LaurentElem, m: int, prec: int | None = None) -> DrwForm:
    """dlog[u]_m for a unit u.

    Monomial units are exact: dlog(c t^j) = sum j_i dlog t_i.  A general unit
    needs a precision bound (on the outer index); the result is then exact
    below that bound.
    """
    tower = u.tower
    if not u.terms:
        raise NotAUnit("0 is not a unit")
    if u.is_monomial():
        (e, _), = u.terms.items()
        out = DrwForm.zero(tower, m, 1)
        for j, x in enumerate(e):
            if x:
                out = out + DrwForm.dlog_var(tower, j, m).scale(x)
        return out
    if tower.depth == 0:
        raise NotAUnit("constant is zero")
    lead = u.leading()
    if not lead.is_monomial():
        raise NotAUnit("leading coefficient is not a unit of the inner ring")
    bound = prec if prec is not None else u.prec
    if bound is None:
        raise PrecisionRequired("dlog of a non-monomial unit needs precision mode")
    v = u.valuation()
    mono = LaurentElem(tower, {e: c for e, c in u.terms.items() if e[-1] == v})
    u1 = LaurentElem(tower, (u * mono.inverse()).terms)  # 1 + h, h of positive outer valuation
    w1 = u1.inverse(prec=bound)
    w1 = LaurentElem(tower, w1.terms)
    body = teich_form(w1, m) * teich_form(u1, m).d()
    out = dlog(mono, m) + body
    return DrwForm(tower, m, 1, out.terms, normalize=False, prec=bound)


# -- JSON ------------------------------------------------------------------------------

def form_to_json(x: DrwForm) -> dict:
    tower = x.tower
    if tower.depth == 0:
        data = {"level": 0, "q": x.q, "m": x.m}
        data["witt"] = to_witt(x).to_json() if x.q == 0 else None
        return data
    comps = []
    for comp in x.components():
        comps.append({
            "n": comp.n,
            "s": comp.s,
            "a": _inner_json(comp.a),
            "b": None if comp.b is None else _inner_json(comp.b),
        })
    return {"level": tower.depth, "q": x.q, "m": x.m, "components": comps}


def _inner_json(y: DrwForm):
    if y.tower.depth == 0:
        if y.q == 0:
            return to_witt(y).to_json()
        return None
    return form_to_json(y)


def form_from_json(tower: TowerSpec, data) -> DrwForm:
    if data.get("level") != tower.depth:
        raise TowerMismatch(f"expected level {tower.depth}, got {data.get('level')}")
    m, q = int(data["m"]), int(data["q"])
    if tower.depth == 0:
        if q == 0 and data.get("witt") is not None:
            return from_witt(WittVec.from_json(tower, data["witt"]))
        return DrwForm.zero(tower, m, q)
    inner = tower.inner()
    comps = []
    for c in data["components"]:
        n, s = int(c["n"]), int(c["s"])
        a = _inner_from_json(inner, m - s, q, c["a"])
        b = None if q == 0 else _inner_from_json(inner, m - s, q - 1, c.get("b"))
        comps.append(GhComponent(n, s, a, b))
    return DrwForm.from_components(tower, m, q, comps)


def _inner_from_json(inner: TowerSpec, m: int, q: int, data) -> DrwForm:
    if data is None:
        return DrwForm.zero(inner, m, q)
    if inner.depth == 0:
        if q != 0:
            return DrwForm.zero(inner, m, q)
        return from_witt(WittVec.from_json(inner, data))
    return form_from_json(inner, data)
