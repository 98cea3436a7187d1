"""Brylinski-Kato filtration on Witt vectors and de Rham-Witt forms.

``fil_n`` is Z-indexed and measured in the outermost variable: a form lies
in ``fil_n`` iff every component index is ``>= -n``.  Multivariate levels are
tuples listed outer variable first, e.g. ``(n_t, n_u)`` at depth 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotInKernel, ShapeMismatch, UnsupportedShape
from .forms import DrwForm, split_kappa, teich_form, vp, weight_data
from .laurent import LaurentElem
from .witt import WittVec

NEG_INF = -math.inf


def fil_level(x: DrwForm):
    """Minimal n with x in fil_n (``-inf`` for 0)."""
    if not x.terms:
        return NEG_INF
    return -x.min_outer_index()


def fil_level_witt(a: WittVec):
    """Coordinate criterion: max_i p^i * (-v(a_i)) over nonzero coordinates a_i (a_0 deepest)."""
    p = a.tower.p
    best = NEG_INF
    for i in range(a.m):
        c = a.a(i)
        if c.terms:
            best = max(best, -(p**i) * c.valuation())
    return best


def fil_member_witt(a: WittVec, n) -> bool:
    """a in fil_n W_m: p^i * pole(a_i) <= n for all i (per variable when n is a tuple)."""
    p = a.tower.p
    if isinstance(n, (tuple, list)):
        depth = a.tower.depth
        if len(n) != depth:
            raise ShapeMismatch(f"need {depth} levels, got {len(n)}")
        for i in range(a.m):
            c = a.a(i)
            if not c.terms:
                continue
            for pos, nj in enumerate(n):
                j = depth - 1 - pos
                if -(p**i) * c.valuation_in(j) > nj:
                    return False
        return True
    return fil_level_witt(a) <= n


def fil_member(x: DrwForm, n) -> bool:
    if isinstance(n, (tuple, list)):
        return all(lv <= nj for lv, nj in zip(fil_level_multi(x), n))
    return fil_level(x) <= n


def fil_level_multi(x: DrwForm) -> tuple:
    """Per-variable levels (outer variable first).

    Supported where the filtration is a plain support condition: length 1 in
    any degree, and degree 0 at any length.
    """
    if x.m != 1 and x.q != 0:
        raise UnsupportedShape("multivariate levels need m = 1 or q = 0")
    depth = x.tower.depth
    if not x.terms:
        return (NEG_INF,) * depth
    return tuple(-min(N[j] for (N, _) in x.terms) for j in reversed(range(depth)))


def fil_level_multi_m1(x: DrwForm) -> tuple:
    if x.m != 1:
        raise ShapeMismatch("fil_level_multi_m1 needs m = 1")
    return fil_level_multi(x)


def fil_level_multi_witt(a: WittVec) -> tuple:
    p, depth = a.tower.p, a.tower.depth
    levels = [NEG_INF] * depth
    for i in range(a.m):
        c = a.a(i)
        if c.terms:
            for pos in range(depth):
                j = depth - 1 - pos
                levels[pos] = max(levels[pos], -(p**i) * c.valuation_in(j))
    return tuple(levels)


def shift_by_monomial(x: DrwForm, l: int) -> DrwForm:
    """Multiply by [t^l]_m; every index moves by p^(m-1) * l."""
    t = LaurentElem.var(x.tower, x.tower.var_names[-1], l)
    return x * teich_form(t, x.m)


# -- goodness ------------------------------------------------------------------

def _split_block(ring, m, N, block, p):
    """Canonical pieces (u, kappa, j0, b, gamma) of one block."""
    u, kappa, j0 = weight_data(N, m, p)
    if u == 0:
        return 0, None, None, {}, dict(block)
    b, rest = split_kappa(ring, kappa, j0, block)
    gamma = {I: ring.divp(c, u) for I, c in rest.items() if any(c)}
    return u, kappa, j0, b, gamma


def goodness_decompose(x: DrwForm):
    """Write x with R(x) = 0 as V^(m-1)(a) + dV^(m-1)(b) with a, b of length 1.

    a and b sit at the same indices as x, so they inherit its filtration level.
    """
    m = x.m
    if m < 1:
        raise ShapeMismatch("need m >= 1")
    if x.R():
        raise NotInKernel("R(x) is not zero")
    tower = x.tower
    ring, p = tower.ring, tower.p
    a_raw, b_raw = {}, {}
    for N, block in x.blocks().items():
        u, kappa, j0, b, gamma = _split_block(ring, m, N, block, p)
        e = m - 1 - u
        try:
            for I, c in gamma.items():
                a_raw[(N, I)] = ring.sigma(ring.divp(c, e), m - 1)
            for J, c in b.items():
                b_raw[(N, J)] = ring.sigma(ring.divp(c, e), m - 1)
        except ArithmeticError:
            raise NotInKernel(f"block at {N} is not in the kernel of R") from None
    a = DrwForm(tower, 1, x.q, a_raw)
    b = DrwForm(tower, 1, x.q - 1, b_raw) if x.q >= 1 else DrwForm.zero(tower, 1, 0)
    rebuilt = a.Vn(m - 1)
    if x.q >= 1:
        rebuilt = rebuilt + b.Vn(m - 1).d()
    if rebuilt != x:
        raise AssertionError("goodness decomposition failed to rebuild the input")
    return a, b


def r_section_witt(y: WittVec) -> WittVec:
    """Section of R on coordinates: append a zero deepest coordinate."""
    return WittVec(y.tower, y.coords + (LaurentElem.zero(y.tower),))


def r_section(y: DrwForm) -> DrwForm:
    """A preimage of y under R: same coefficients at p times the index."""
    p = y.tower.p
    raw = {(tuple(p * n for n in N), I): c for (N, I), c in y.terms.items()}
    return DrwForm(y.tower, y.m + 1, y.q, raw)


def p_bar(omega: DrwForm) -> DrwForm:
    """p times any R-lift: W_{m-1} -> W_m."""
    return r_section(omega).scale(omega.tower.p)


@dataclass(frozen=True)
class GradedShape:
    """Shape of gr_n W_m Omega^q: the component group at index -n."""

    n: int
    index: int
    s: int
    i: int
    a_length: int
    b_length: int | None

    def describe(self, var: str = "t") -> str:
        if self.s == 0:
            text = f"W_{self.a_length}(S)[{var}]^{self.i}"
            if self.b_length is not None:
                text += f" + W_{self.b_length}Omega^(q-1)(S)[{var}]^{self.i} dlog[{var}]"
            return text
        v = "V" if self.s == 1 else f"V^{self.s}"
        text = f"{v}(W_{self.a_length}(S)[{var}]^{self.i})"
        if self.b_length is not None:
            text += f" + d{v}(W_{self.b_length}Omega^(q-1)(S)[{var}]^{self.i})"
        return text


def graded_rep(n: int, m: int, q: int, p: int) -> GradedShape:
    index = -n
    v = vp(index, p)
    if v >= m - 1:
        s, i = 0, index // p ** (m - 1)
    else:
        s = m - 1 - v
        i = index // p**v
    return GradedShape(n, index, s, i, m - s, (m - s) if q >= 1 else None)


def gr_class(x: DrwForm, n: int) -> DrwForm:
    """Projection fil_n -> gr_n (the component at index -n)."""
    if fil_level(x) > n:
        raise ShapeMismatch(f"element is not in fil_{n}")
    return x.restrict_outer(-n)


def is_integral_top(x: DrwForm) -> bool:
    """Top-degree form lies in W_m Omega^d of the integral model (all weights positive)."""
    if x.q != x.tower.depth:
        raise ShapeMismatch("is_integral_top needs a top-degree form")
    return all(all(n > 0 for n in N) for (N, _) in x.terms)
