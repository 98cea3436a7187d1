"""Seeded law suites with mutation testing and counterexample shrinking.

Every law draws its inputs from a private random stream keyed by
``(seed, law, grid point, sample index)`` and evaluates the identity
through an :class:`Ops` table.  Mutations swap single entries of that table
for deliberately wrong implementations, which lets the meta-test check that
every law is able to fail.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable

from . import cartier, conductor, filtration
from .derham import de_rham_m1_oracle
from .errors import UnknownLaw, UnknownSuite
from .forms import DrwForm, dlog, from_witt, teich_form, to_witt, wedge_var
from .laurent import LaurentElem
from .sampling import (
    GridPoint,
    random_form,
    random_laurent,
    random_monomial_unit,
    random_witt,
    restrict_level,
    rng_for,
)
from .witt import WittVec, gen_witt_polys

DEFAULT_PRIMES = (3, 5)
EXPERIMENTAL_PRIMES = (2,)


def default_grid(primes=DEFAULT_PRIMES, powers=(1, 2), depths=(1, 2), lengths=(1, 2, 3),
                 lo=-12, hi=12) -> list:
    return [GridPoint(p, r, dep, m, 0, lo, hi) for p, r, dep, m in product(primes, powers, depths, lengths)]


# -- operation table -----------------------------------------------------------------

def _witt_naive(op):
    def run(a, b):
        coords = [op(x, y) for x, y in zip(a.coords, b.coords)]
        return WittVec(a.tower, coords)
    return run


def _add_forms(x, y):
    return x + y


def _mul_forms(x, y):
    return x * y


@dataclass(frozen=True)
class Ops:
    """The operations a law may use; mutations replace individual entries."""

    witt_add: Callable = WittVec.__add__
    witt_mul: Callable = WittVec.__mul__
    witt_neg: Callable = WittVec.__neg__
    witt_F: Callable = WittVec.F
    witt_V: Callable = WittVec.V
    witt_R: Callable = WittVec.R
    witt_tables: Callable = gen_witt_polys
    from_witt: Callable = from_witt
    to_witt: Callable = to_witt
    add: Callable = _add_forms
    mul: Callable = _mul_forms
    d: Callable = DrwForm.d
    F: Callable = DrwForm.F
    V: Callable = DrwForm.V
    R: Callable = DrwForm.R
    teich: Callable = teich_form
    dlog: Callable = dlog
    oracle: Callable = de_rham_m1_oracle
    fil_level: Callable = filtration.fil_level
    fil_level_witt: Callable = filtration.fil_level_witt
    fil_member_witt: Callable = filtration.fil_member_witt
    shift: Callable = filtration.shift_by_monomial
    r_section: Callable = filtration.r_section
    r_section_witt: Callable = filtration.r_section_witt
    p_bar: Callable = filtration.p_bar
    goodness: Callable = filtration.goodness_decompose
    C: Callable = cartier.cartier_C
    is_Z1: Callable = cartier.is_Z1
    f_preimage: Callable = cartier.f_preimage
    b_preimage: Callable = cartier.b_preimage
    cartier_inverse: Callable = cartier.cartier_inverse
    vr3: Callable = cartier.vr3_witness
    swan: Callable = conductor.swan
    best_form: Callable = conductor.asw_best_form
    refined_swan: Callable = conductor.refined_swan
    is_certified: Callable = conductor.is_certified


def _flip_C(x, section=cartier.DEFAULT_SECTION):
    return -cartier.cartier_C(x, section)


def _C_identity(x, section=cartier.DEFAULT_SECTION):
    return x


def _C_bad_section(x, section=cartier.DEFAULT_SECTION):
    out = cartier.cartier_C(x)
    return out + x if section == "zero-pad" else out


def _F_as_R(x):
    return x.R()


def _R_floor(x):
    p = x.tower.p
    raw = {(tuple(n // p for n in N), I): c for (N, I), c in x.terms.items()}
    return DrwForm(x.tower, x.m - 1, x.q, raw)


def _d_twist(x):
    out = x.d()
    if x.q + 1 <= x.tower.depth:
        out = out + x * DrwForm.dlog_var(x.tower, x.tower.depth - 1, x.m)
    return out


def _d_drop_outer(x):
    outer = x.tower.depth - 1
    ring = x.tower.ring
    raw: dict = {}
    for (N, I), c in x.terms.items():
        for j, nj in enumerate(N):
            w = wedge_var(j, I)
            if nj and j != outer and w is not None:
                sign, K = w
                key = (N, K)
                raw[key] = ring.add(raw.get(key, ring.zero), ring.scale(c, sign * nj))
    if x.m > 1:
        raw = {k: ring.divp(c, x.m - 1) for k, c in raw.items()}
    return DrwForm(x.tower, x.m, x.q + 1, raw)


def _mul_no_sign(x, y):
    ring = x.tower.ring
    out: dict = {}
    for (N1, I1), c1 in x.terms.items():
        for (N2, I2), c2 in y.terms.items():
            if set(I1) & set(I2):
                continue
            key = (tuple(a + b for a, b in zip(N1, N2)), tuple(sorted(I1 + I2)))
            out[key] = ring.add(out.get(key, ring.zero), ring.mul(c1, c2))
    return DrwForm(x.tower, x.m, x.q + y.q, out)


def _teich_additive(x, m):
    acc = DrwForm.zero(x.tower, m)
    for e, c in x.terms.items():
        acc = acc + teich_form(LaurentElem(x.tower, {e: c}), m)
    return acc


def _dlog_abs(u, m, prec=None):
    (e, c), = u.terms.items()
    return dlog(LaurentElem.monomial(u.tower, tuple(abs(x) for x in e), c), m)


def _from_witt_teich_only(a):
    return teich_form(a.coords[0], a.m) if a.m else from_witt(a)


def _to_witt_truncate(x):
    w = to_witt(x)
    return WittVec(w.tower, w.coords[:1] + (LaurentElem.zero(w.tower),) * (w.m - 1))


def _tables_corrupt(p, m):
    t = gen_witt_polys(p, m)
    return replace(t, sums=t.prods, prods=t.sums)


def _add_as_sub(x, y):
    return _add_forms(x, -y)


def _mul_extra_pole(x, y):
    return filtration.shift_by_monomial(_mul_forms(x, y), -1)


def _fil_clamp(x):
    return max(filtration.fil_level(x), 0)


def _fil_off_by_one(x):
    return filtration.fil_level(x) + 1


def _fil_witt_unweighted(a):
    best = filtration.NEG_INF
    for c in a.coords:
        if c.terms:
            best = max(best, -c.valuation())
    return best


def _fil_member_unweighted(a, n):
    return _fil_witt_unweighted(a) <= n


def _shift_wrong(x, l):
    return filtration.shift_by_monomial(x, l + 1)


def _p_bar_square(omega):
    return filtration.r_section(omega).scale(omega.tower.p ** 2)


def _section_no_scale(y):
    return DrwForm(y.tower, y.m + 1, y.q, dict(y.terms))


def _section_witt_front(y):
    return y.V()


def _goodness_drop_b(x):
    a, b = filtration.goodness_decompose(x)
    return a, DrwForm.zero(b.tower, b.m, b.q)


def _z1_no_F(x, fil_bound=None):
    return not x.d()


def _preimage_none(x, i=1):
    return None


def _b_everything(x, i):
    return DrwForm.zero(x.tower, max(i, 1), max(x.q - 1, 0))


def _cartier_inverse_wrong(y):
    return y


def _vr3_wrong(omega):
    return omega.V()


def _swan_no_reduction(chi):
    form = chi.form if isinstance(chi, conductor.AswCharacter) else chi
    lvl = filtration.fil_level(form)
    sw = 0 if lvl <= 0 else int(lvl)
    if sw == 0:
        return conductor.SwanReport(0, form, None, None)
    rsw, mod = conductor.refined_swan(form, sw)
    return conductor.SwanReport(sw, form, rsw, mod)


def _swan_off_by_one(chi):
    rep = conductor.swan(chi)
    return replace(rep, sw=rep.sw + 1)


def _swan_rsw_sign(chi):
    rep = conductor.swan(chi)
    return rep if rep.rsw is None else replace(rep, rsw=-rep.rsw)


def _swan_rsw_zero(chi):
    rep = conductor.swan(chi)
    return rep if rep.rsw is None else replace(rep, rsw=DrwForm.zero(rep.rsw.tower, rep.rsw.m, rep.rsw.q))


def _best_identity(a):
    return a


def _witt_neg_identity(a):
    return a


def _witt_V_front(a):
    return WittVec(a.tower, a.coords + (LaurentElem.zero(a.tower),))


MUTATIONS = {
    "witt-add-naive": {"witt_add": _witt_naive(lambda x, y: x + y)},
    "witt-mul-naive": {"witt_mul": _witt_naive(lambda x, y: x * y)},
    "witt-neg-identity": {"witt_neg": _witt_neg_identity},
    "witt-V-append": {"witt_V": _witt_V_front},
    "tables-corrupt": {"witt_tables": _tables_corrupt},
    "from-witt-teich-only": {"from_witt": _from_witt_teich_only},
    "to-witt-truncate": {"to_witt": _to_witt_truncate},
    "F-as-R": {"F": _F_as_R},
    "V-as-section": {"V": filtration.r_section},
    "R-floor": {"R": _R_floor},
    "d-twist": {"d": _d_twist},
    "d-drop-outer": {"d": _d_drop_outer},
    "mul-no-sign": {"mul": _mul_no_sign},
    "add-as-sub": {"add": _add_as_sub},
    "mul-extra-pole": {"mul": _mul_extra_pole},
    "fil-clamp": {"fil_level": _fil_clamp},
    "teich-additive": {"teich": _teich_additive},
    "dlog-abs": {"dlog": _dlog_abs},
    "fil-off-by-one": {"fil_level": _fil_off_by_one},
    "fil-witt-unweighted": {"fil_level_witt": _fil_witt_unweighted,
                            "fil_member_witt": _fil_member_unweighted},
    "shift-wrong": {"shift": _shift_wrong},
    "p-bar-square": {"p_bar": _p_bar_square},
    "section-no-scale": {"r_section": _section_no_scale},
    "section-witt-front": {"r_section_witt": _section_witt_front},
    "goodness-drop-b": {"goodness": _goodness_drop_b},
    "flip-C": {"C": _flip_C},
    "C-identity": {"C": _C_identity},
    "bad-section": {"C": _C_bad_section},
    "Z1-no-F": {"is_Z1": _z1_no_F},
    "preimage-none": {"f_preimage": _preimage_none},
    "B-everything": {"b_preimage": _b_everything},
    "cartier-inverse-wrong": {"cartier_inverse": _cartier_inverse_wrong},
    "vr3-wrong": {"vr3": _vr3_wrong},
    "swan-no-reduction": {"swan": _swan_no_reduction},
    "swan-off-by-one": {"swan": _swan_off_by_one},
    "rsw-sign": {"swan": _swan_rsw_sign},
    "rsw-zero": {"swan": _swan_rsw_zero},
    "best-form-identity": {"best_form": _best_identity},
}


def make_ops(mutation: str | None = None) -> Ops:
    if mutation is None:
        return Ops()
    try:
        return replace(Ops(), **MUTATIONS[mutation])
    except KeyError:
        raise UnknownLaw(f"unknown mutation {mutation!r}") from None


# -- laws ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Law:
    id: str
    suite: str
    gen: Callable
    check: Callable
    applies: Callable = lambda pt: True
    once: bool = False
    doc: str = ""


LAWS: dict = {}


def law(id, suite, applies=None, once=False):
    def wrap(fn):
        gen, check = fn()
        LAWS[id] = Law(id, suite, gen, check, applies or (lambda pt: True), once, fn.__doc__ or "")
        return fn
    return wrap


def _q(rng, pt):
    return rng.randint(0, pt.depth)


def _form(rng, pt, m, q, count=2):
    return random_form(rng, pt.tower(), m, q, pt.lo, pt.hi, count)


def _witt(rng, pt, m=None):
    return random_witt(rng, pt.tower(), pt.m if m is None else m, pt.lo, pt.hi)


def _sign(q):
    return -1 if q % 2 else 1


def _le(a, b):
    return a <= b


def _m1(pt):
    return pt.m == 1


def _m2(pt):
    return pt.m >= 2


# witt-ring ---------------------------------------------------------------------------

@law("witt.tables-ghost", "witt-ring", once=True)
def _():
    """Generated sum / product / negation tables satisfy the ghost equations."""
    return (lambda rng, pt: ()), (lambda ops, pt: ops.witt_tables(pt.p, pt.m).check_ghost())


@law("witt.add-intertwine", "witt-ring")
def _():
    """from_witt(a + b) = from_witt(a) + from_witt(b)."""
    return (lambda rng, pt: (_witt(rng, pt), _witt(rng, pt)),
            lambda ops, pt, a, b: ops.from_witt(ops.witt_add(a, b)) == ops.add(ops.from_witt(a), ops.from_witt(b)))


@law("witt.mul-intertwine", "witt-ring")
def _():
    """from_witt(a b) = from_witt(a) from_witt(b)."""
    return (lambda rng, pt: (_witt(rng, pt), _witt(rng, pt)),
            lambda ops, pt, a, b: ops.from_witt(ops.witt_mul(a, b)) == ops.mul(ops.from_witt(a), ops.from_witt(b)))


@law("witt.neg-intertwine", "witt-ring")
def _():
    """from_witt(-a) = -from_witt(a)."""
    return (lambda rng, pt: (_witt(rng, pt),),
            lambda ops, pt, a: ops.from_witt(ops.witt_neg(a)) == -ops.from_witt(a))


@law("witt.roundtrip", "witt-ring")
def _():
    """to_witt(from_witt(a)) = a."""
    return (lambda rng, pt: (_witt(rng, pt),),
            lambda ops, pt, a: ops.to_witt(ops.from_witt(a)) == a)


@law("witt.FV-p", "witt-ring")
def _():
    """F(V(a)) = p a on coordinates."""
    def check(ops, pt, a):
        p_vec = WittVec.from_int(a.tower, pt.p, a.m)
        return ops.witt_F(ops.witt_V(a)) == ops.witt_mul(a, p_vec)
    return (lambda rng, pt: (_witt(rng, pt),)), check


@law("witt.distributive", "witt-ring")
def _():
    """(a + b) c = a c + b c."""
    def check(ops, pt, a, b, c):
        return ops.witt_mul(ops.witt_add(a, b), c) == ops.witt_add(ops.witt_mul(a, c), ops.witt_mul(b, c))
    return (lambda rng, pt: (_witt(rng, pt), _witt(rng, pt), _witt(rng, pt))), check


# classical m = 1 ----------------------------------------------------------------------

def _pair(rng, pt):
    q1 = _q(rng, pt)
    q2 = rng.randint(0, pt.depth - q1)
    return _form(rng, pt, pt.m, q1), _form(rng, pt, pt.m, q2)


@law("m1.add", "classical-m1", applies=_m1)
def _():
    """Addition agrees with the free-module de Rham model."""
    def gen(rng, pt):
        q = _q(rng, pt)
        return _form(rng, pt, 1, q), _form(rng, pt, 1, q)
    return gen, lambda ops, pt, x, y: ops.oracle(ops.add(x, y)) == ops.oracle(x) + ops.oracle(y)


@law("m1.wedge", "classical-m1", applies=_m1)
def _():
    """Products agree with the wedge product of the free-module model."""
    return _pair, lambda ops, pt, x, y: ops.oracle(ops.mul(x, y)) == ops.oracle(x).wedge(ops.oracle(y))


@law("m1.d", "classical-m1", applies=_m1)
def _():
    """d agrees with the classical differential."""
    return (lambda rng, pt: (_form(rng, pt, 1, rng.randint(0, pt.depth - 1)),),
            lambda ops, pt, x: ops.oracle(ops.d(x)) == ops.oracle(x).d())


@law("m1.leibniz", "classical-m1", applies=_m1)
def _():
    """d(xy) = dx y + (-1)^|x| x dy."""
    def check(ops, pt, x, y):
        lhs = ops.d(ops.mul(x, y))
        rhs = ops.mul(ops.d(x), y) + ops.mul(x, ops.d(y)).scale(_sign(x.q))
        return lhs == rhs
    return _pair, check


@law("m1.dd", "classical-m1", applies=_m1)
def _():
    """d d = 0."""
    return (lambda rng, pt: (_form(rng, pt, 1, _q(rng, pt)),),
            lambda ops, pt, x: not ops.d(ops.d(x)))


# identities -----------------------------------------------------------------------------

@law("id.FV", "identities")
def _():
    """F V = p."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, _q(rng, pt)),),
            lambda ops, pt, x: ops.F(ops.V(x)) == x.scale(pt.p))


@law("id.FdV", "identities")
def _():
    """F d V = d."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, rng.randint(0, pt.depth - 1)),),
            lambda ops, pt, x: ops.F(ops.d(ops.V(x))) == ops.d(x))


@law("id.Vd", "identities")
def _():
    """V d = p d V."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, rng.randint(0, pt.depth - 1)),),
            lambda ops, pt, x: ops.V(ops.d(x)) == ops.d(ops.V(x)).scale(pt.p))


@law("id.projection", "identities")
def _():
    """x V(y) = V(F(x) y)."""
    def gen(rng, pt):
        qx = _q(rng, pt)
        qy = rng.randint(0, pt.depth - qx)
        return _form(rng, pt, pt.m + 1, qx), _form(rng, pt, pt.m, qy)
    return gen, lambda ops, pt, x, y: ops.mul(x, ops.V(y)) == ops.V(ops.mul(ops.F(x), y))


@law("id.R-commute", "identities")
def _():
    """R commutes with F, V and d."""
    def check(ops, pt, x):
        ok = ops.R(ops.F(x)) == ops.F(ops.R(x)) and ops.R(ops.V(x)) == ops.V(ops.R(x))
        if x.q < pt.depth:
            ok = ok and ops.R(ops.d(x)) == ops.d(ops.R(x))
        return ok
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),)), check


@law("id.F-teich", "identities")
def _():
    """F(d[x]) = [x]^(p-1) d[x]."""
    def check(ops, pt, x):
        lhs = ops.F(ops.d(ops.teich(x, pt.m + 1)))
        tx = ops.teich(x, pt.m)
        return lhs == ops.mul(tx ** (pt.p - 1), ops.d(tx))
    return (lambda rng, pt: (random_laurent(rng, pt.tower(), pt.lo, pt.hi, 2, 1),)), check


@law("id.dlog-add", "identities")
def _():
    """dlog(uv) = dlog u + dlog v for monomial units."""
    def gen(rng, pt):
        return random_monomial_unit(rng, pt.tower()), random_monomial_unit(rng, pt.tower())
    return gen, lambda ops, pt, u, v: ops.dlog(u * v, pt.m) == ops.dlog(u, pt.m) + ops.dlog(v, pt.m)


@law("id.F-multiplicative", "identities")
def _():
    """F(xy) = F(x) F(y)."""
    def gen(rng, pt):
        q1 = _q(rng, pt)
        return _form(rng, pt, pt.m + 1, q1), _form(rng, pt, pt.m + 1, rng.randint(0, pt.depth - q1))
    return gen, lambda ops, pt, x, y: ops.F(ops.mul(x, y)) == ops.mul(ops.F(x), ops.F(y))


@law("id.leibniz", "identities")
def _():
    """d(xy) = dx y + (-1)^|x| x dy."""
    def check(ops, pt, x, y):
        return ops.d(ops.mul(x, y)) == ops.mul(ops.d(x), y) + ops.mul(x, ops.d(y)).scale(_sign(x.q))
    return _pair, check


@law("id.dd", "identities")
def _():
    """d d = 0."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, _q(rng, pt)),),
            lambda ops, pt, x: not ops.d(ops.d(x)))


# filtration --------------------------------------------------------------------------

@law("fil.mul", "filtration")
def _():
    """fil_level(xy) <= fil_level(x) + fil_level(y)."""
    def check(ops, pt, x, y):
        xy = ops.mul(x, y)
        if not xy:
            return True
        return ops.fil_level(xy) <= ops.fil_level(x) + ops.fil_level(y)
    return _pair, check


@law("fil.d", "filtration")
def _():
    """fil_level(dx) <= fil_level(x)."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, rng.randint(0, pt.depth - 1)),),
            lambda ops, pt, x: ops.fil_level(ops.d(x)) <= ops.fil_level(x))


@law("fil.F", "filtration")
def _():
    """fil_level(Fx) <= fil_level(x)."""
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),),
            lambda ops, pt, x: ops.fil_level(ops.F(x)) <= ops.fil_level(x))


@law("fil.V", "filtration")
def _():
    """fil_level(Vx) <= fil_level(x)."""
    return (lambda rng, pt: (_form(rng, pt, pt.m, _q(rng, pt)),),
            lambda ops, pt, x: ops.fil_level(ops.V(x)) <= ops.fil_level(x))


@law("fil.R", "filtration")
def _():
    """fil_level(Rx) <= floor(fil_level(x) / p)."""
    def check(ops, pt, x):
        lx, lr = ops.fil_level(x), ops.fil_level(ops.R(x))
        if lr == filtration.NEG_INF:
            return True
        return lx != filtration.NEG_INF and lr <= lx // pt.p
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),)), check


@law("fil.shift", "filtration")
def _():
    """Multiplying by [t^l] lowers the level by exactly p^(m-1) l and is invertible."""
    def gen(rng, pt):
        return _form(rng, pt, pt.m, _q(rng, pt)), rng.randint(-4, 4)

    def check(ops, pt, x, l):
        y = ops.shift(x, l)
        if ops.shift(y, -l) != x:
            return False
        if not x:
            return not y
        return ops.fil_level(y) == ops.fil_level(x) - pt.p ** (pt.m - 1) * l
    return gen, check


@law("fil.brylinski", "filtration")
def _():
    """Coordinate valuation criterion = normal-form support criterion."""
    return (lambda rng, pt: (_witt(rng, pt),),
            lambda ops, pt, a: ops.fil_level_witt(a) == ops.fil_level(ops.from_witt(a)))


@law("fil.member-witt", "filtration")
def _():
    """fil_member_witt(a, n) iff fil_level(from_witt(a)) <= n."""
    def gen(rng, pt):
        return _witt(rng, pt), rng.randint(-40, 40)
    return gen, lambda ops, pt, a, n: ops.fil_member_witt(a, n) == (ops.fil_level(ops.from_witt(a)) <= n)


@law("fil.p-bar", "filtration", applies=_m2)
def _():
    """p-bar(w) in fil_n iff w in fil_floor(n/p)."""
    def gen(rng, pt):
        return _form(rng, pt, pt.m - 1, _q(rng, pt)), rng.randint(-12, 40)

    def check(ops, pt, w, n):
        return (ops.fil_level(ops.p_bar(w)) <= n) == (ops.fil_level(w) <= n // pt.p)
    return gen, check


@law("fil.integral-top", "filtration")
def _():
    """Top-degree forms over the polynomial ring lie in fil_-1."""
    def gen(rng, pt):
        tower = pt.tower()
        acc = DrwForm.zero(tower, pt.m, pt.depth)
        for _ in range(2):
            j = rng.randrange(pt.m)
            length = pt.m - j
            g = teich_form(random_laurent(rng, tower, 0, pt.hi, 2, 1), length)
            for _ in range(pt.depth):
                g = g * teich_form(random_laurent(rng, tower, 0, pt.hi, 2, 1), length).d()
            acc = acc + g.Vn(j)
        return (acc,)

    def check(ops, pt, x):
        return not x or ops.fil_level(x) <= -1
    return gen, check


# goodness -------------------------------------------------------------------------------

@law("good.section-witt", "goodness", applies=_m2)
def _():
    """Appending a zero deepest coordinate is a section of R: fil_floor(n/p) -> fil_n."""
    def gen(rng, pt):
        n = rng.randint(0, 12)
        y = restrict_level(from_witt(_witt(rng, pt, pt.m - 1)), n // pt.p)
        return to_witt(y), n

    def check(ops, pt, y, n):
        s = ops.r_section_witt(y)
        return ops.witt_R(s) == y and ops.fil_member_witt(s, n)
    return gen, check


@law("good.section-form", "goodness", applies=_m2)
def _():
    """The index-scaling lift is a section of R: fil_floor(n/p) -> fil_n."""
    def gen(rng, pt):
        n = rng.randint(0, 12)
        return restrict_level(_form(rng, pt, pt.m - 1, _q(rng, pt)), n // pt.p), n

    def check(ops, pt, y, n):
        s = ops.r_section(y)
        return ops.R(s) == y and ops.fil_level(s) <= n
    return gen, check


@law("good.kernel", "goodness", applies=_m2)
def _():
    """Kernel elements of R in fil_n are V^(m-1)(a) + dV^(m-1)(b) with a, b in fil_n."""
    def gen(rng, pt):
        n = rng.randint(0, 12)
        return restrict_level(_form(rng, pt, pt.m, _q(rng, pt)), n), n

    def check(ops, pt, x, n):
        k = x - ops.r_section(ops.R(x))
        if ops.R(k):
            return False
        a, b = ops.goodness(k)
        rebuilt = a.Vn(pt.m - 1)
        if k.q >= 1:
            rebuilt = rebuilt + ops.d(b.Vn(pt.m - 1))
        return rebuilt == k and ops.fil_level(a) <= n and ops.fil_level(b) <= n
    return gen, check


# cartier ----------------------------------------------------------------------------------

@law("cartier.CF-R", "cartier")
def _():
    """C(F(a)) = R(a)."""
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),),
            lambda ops, pt, a: ops.C(ops.F(a)) == ops.R(a))


@law("cartier.C-dV", "cartier")
def _():
    """C(dV^(m-1)(b)) = 0."""
    def gen(rng, pt):
        return (_form(rng, pt, 1, rng.randint(0, pt.depth - 1)),)
    return gen, lambda ops, pt, b: not ops.C(ops.d(b.Vn(pt.m - 1)))


@law("cartier.sections", "cartier")
def _():
    """C does not depend on the chosen F-preimage."""
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),),
            lambda ops, pt, a: ops.C(ops.F(a), "frobenius-inverse-lift") == ops.C(ops.F(a), "zero-pad"))


@law("cartier.fil-equivalence", "cartier")
def _():
    """For w in Z_1 and n >= 0: w in fil_n iff (1 - C)(w) in fil_n."""
    def check(ops, pt, a):
        w = ops.F(a)
        v = w - ops.C(w)
        lw, lv = ops.fil_level(w), ops.fil_level(v)
        return all((lw <= n) == (lv <= n) for n in range(0, 14 * pt.p ** pt.m))
    return (lambda rng, pt: (_form(rng, pt, pt.m + 1, _q(rng, pt)),)), check


@law("cartier.m1-inverse", "cartier", applies=_m1)
def _():
    """C([a^p] dlog t_I) = [a] dlog t_I at length 1."""
    def gen(rng, pt):
        tower = pt.tower()
        I = tuple(sorted(rng.sample(range(pt.depth), _q(rng, pt))))
        return random_laurent(rng, tower, pt.lo, pt.hi, 3, 1), I

    def check(ops, pt, a, I):
        dl = DrwForm.integer(a.tower, 1, 1)
        for j in I:
            dl = ops.mul(dl, DrwForm.dlog_var(a.tower, j, 1))
        x = ops.mul(ops.teich(a.frobenius(), 1), dl)
        return ops.C(x) == ops.mul(ops.teich(a, 1), dl)
    return gen, check


@law("cartier.additive", "cartier")
def _():
    """C(x + y) = C(x) + C(y)."""
    def gen(rng, pt):
        q = _q(rng, pt)
        return _form(rng, pt, pt.m + 1, q), _form(rng, pt, pt.m + 1, q)
    return gen, lambda ops, pt, a, b: ops.C(ops.F(a) + ops.F(b)) == ops.C(ops.F(a)) + ops.C(ops.F(b))


@law("cartier.linear", "cartier")
def _():
    """C(x F(y)) = C(x) R(y)."""
    def gen(rng, pt):
        q1 = _q(rng, pt)
        return _form(rng, pt, pt.m + 1, q1), _form(rng, pt, pt.m + 1, rng.randint(0, pt.depth - q1))

    def check(ops, pt, a, y):
        x = ops.F(a)
        return ops.C(ops.mul(x, ops.F(y))) == ops.mul(ops.C(x), ops.R(y))
    return gen, check


@law("cartier.vr3", "cartier")
def _():
    """d(w) = (1 - C)(F d x) for x = (V + V^2 R + ... + V^m R^(m-1))(w), with F d x in Z_1 fil_n."""
    def check(ops, pt, w):
        z = ops.F(ops.d(ops.vr3(w)))
        if not ops.is_Z1(z, max(0, ops.fil_level(w))):
            return False
        return ops.d(w) == z - ops.C(z)
    return (lambda rng, pt: (_form(rng, pt, pt.m, rng.randint(0, pt.depth - 1)),)), check


@law("cartier.z1-dual", "cartier")
def _():
    """F^(m-1) d x = 0 iff x has an F-preimage."""
    def gen(rng, pt):
        q = _q(rng, pt)
        if rng.random() < 0.5:
            return (_form(rng, pt, pt.m + 1, q).F(),)
        return (_form(rng, pt, pt.m, q),)
    return gen, lambda ops, pt, x: ops.is_Z1(x) == (ops.f_preimage(x) is not None)


def _zb_sample(rng, pt):
    q = _q(rng, pt)
    kind = rng.randrange(3)
    if kind == 0:
        i = rng.randint(1, 3)
        return (_form(rng, pt, 1 + i, q).Fn(i),)
    if kind == 1 and q >= 1:
        i = rng.randint(1, 3)
        return (_form(rng, pt, i, q - 1).d().Fn(i - 1),)
    return (_form(rng, pt, 1, q),)


@law("cartier.zb-monotone", "cartier", applies=_m1)
def _():
    """B_i in B_(i+1) in Z_(j+1) in Z_j at length 1."""
    def check(ops, pt, x):
        Z = [ops.f_preimage(x, i) is not None for i in range(0, 4)]
        B = [ops.b_preimage(x, i) is not None for i in range(0, 4)]
        mono = all(Z[i + 1] <= Z[i] and B[i] <= B[i + 1] for i in range(3))
        return mono and B[3] <= Z[3]
    return _zb_sample, check


@law("cartier.C-grading", "cartier", applies=_m1)
def _():
    """C maps Z_i to Z_(i-1), detects B_i exactly, and is onto via F of an R-lift."""
    def check(ops, pt, x):
        for i in range(1, 4):
            if ops.f_preimage(x, i) is None:
                continue
            c = ops.C(x)
            if ops.f_preimage(c, i - 1) is None:
                return False
            if (ops.b_preimage(x, i) is not None) != (ops.b_preimage(c, i - 1) is not None):
                return False
        y = ops.cartier_inverse(x)
        return ops.C(y) == x
    return _zb_sample, check


# conductor --------------------------------------------------------------------------------

def _character(rng, pt):
    return (_form(rng, pt, pt.m, _q(rng, pt)),)


@law("sw.class-invariance", "conductor")
def _():
    """Swan data is unchanged by adding (1 - C)(F(a))."""
    def gen(rng, pt):
        q = _q(rng, pt)
        return _form(rng, pt, pt.m, q), _form(rng, pt, pt.m + 1, q)

    def check(ops, pt, w, a):
        moved = w + ops.F(a) - ops.R(a)
        r1, r2 = ops.swan(w), ops.swan(moved)
        return r1.sw == r2.sw and r1.rsw == r2.rsw
    return gen, check


@law("sw.certificate", "conductor")
def _():
    """The stopping component is not an F-image."""
    return _character, lambda ops, pt, w: ops.is_certified(ops.swan(w))


@law("sw.bounded", "conductor")
def _():
    """sw <= max(0, fil_level(representative))."""
    def check(ops, pt, w):
        return ops.swan(w).sw <= max(0, ops.fil_level(w))
    return _character, check


@law("sw.rsw-nonzero", "conductor")
def _():
    """A certified report has a nonzero refined Swan class."""
    def check(ops, pt, w):
        rep = ops.swan(w)
        return rep.sw == 0 or bool(rep.rsw)
    return _character, check


@law("sw.h1-crosscheck", "conductor", applies=lambda pt: pt.depth == 1)
def _():
    """Form-side Swan data equals the coordinate best-form data."""
    def check(ops, pt, a):
        rep = ops.swan(ops.from_witt(a))
        best = ops.best_form(a)
        lvl = ops.fil_level_witt(best)
        sw = 0 if lvl <= 0 else int(lvl)
        if rep.sw != sw:
            return False
        if sw == 0:
            return True
        rsw, _ = ops.refined_swan(ops.from_witt(best), sw)
        return rep.rsw == rsw
    return (lambda rng, pt: (_witt(rng, pt),)), check


@law("sw.V-compat", "conductor")
def _():
    """Applying V to the representative never increases sw."""
    return _character, lambda ops, pt, w: ops.swan(ops.V(w)).sw <= ops.swan(w).sw


SUITES = {}
for _law in LAWS.values():
    SUITES.setdefault(_law.suite, []).append(_law.id)
SUITES["all"] = list(LAWS)


# -- running ----------------------------------------------------------------------------------

@dataclass
class LawSuite:
    name: str
    grid: list
    samples: int
    seed: object
    laws: list = field(default_factory=list)

    @classmethod
    def named(cls, name, seed=0, samples=100, grid=None, laws=None) -> "LawSuite":
        if name not in SUITES:
            raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
        ids = list(SUITES[name]) if laws is None else list(laws)
        for i in ids:
            if i not in LAWS:
                raise UnknownLaw(f"unknown law {i!r}")
        return cls(name, list(grid or default_grid()), samples, seed, ids)


def _describe(x):
    if isinstance(x, (DrwForm, WittVec, LaurentElem)):
        return str(x)
    return repr(x)


def _encode(x):
    if isinstance(x, (DrwForm, WittVec, LaurentElem)):
        return x.to_json()
    if isinstance(x, tuple):
        return list(x)
    return x


def _fails(law_obj, ops, pt, args):
    try:
        return not law_obj.check(ops, pt, *args), None
    except Exception as exc:  # a raising law counts as a failure
        return True, f"{type(exc).__name__}: {exc}"


def _size(args):
    comps, width = 0, 0
    for x in args:
        if isinstance(x, DrwForm):
            comps += len(x.blocks())
            width += len(x.terms)
        elif isinstance(x, WittVec):
            comps += sum(1 for c in x.coords if c.terms)
            width += sum(len(c.terms) for c in x.coords)
        elif isinstance(x, LaurentElem):
            comps += 1 if x.terms else 0
            width += len(x.terms)
    return comps, width


def _candidates(args):
    for pos, x in enumerate(args):
        if isinstance(x, DrwForm):
            for N in list(x.blocks()):
                terms = {k: c for k, c in x.terms.items() if k[0] != N}
                yield args[:pos] + (DrwForm(x.tower, x.m, x.q, terms, normalize=False),) + args[pos + 1:]
        elif isinstance(x, WittVec):
            for j, c in enumerate(x.coords):
                for e in list(c.terms):
                    nc = LaurentElem(c.tower, {k: v for k, v in c.terms.items() if k != e})
                    coords = x.coords[:j] + (nc,) + x.coords[j + 1:]
                    yield args[:pos] + (WittVec(x.tower, coords),) + args[pos + 1:]
        elif isinstance(x, LaurentElem) and len(x.terms) > 1:
            for e in list(x.terms):
                nc = LaurentElem(x.tower, {k: v for k, v in x.terms.items() if k != e})
                yield args[:pos] + (nc,) + args[pos + 1:]


def shrink(law_obj, ops, pt, args, budget=200):
    """Greedy removal of components / terms while the law still fails."""
    best = args
    steps = 0
    improved = True
    while improved and steps < budget:
        improved = False
        for cand in sorted(_candidates(best), key=_size):
            steps += 1
            if _fails(law_obj, ops, pt, cand)[0]:
                best = cand
                improved = True
                break
            if steps >= budget:
                break
    return best


def _run_law_point(task):
    law_id, pt, samples, seed, mutation = task
    law_obj = LAWS[law_id]
    ops = make_ops(mutation)
    n = 1 if law_obj.once else samples
    for idx in range(n):
        rng = rng_for(seed, law_id, pt.label(), idx)
        args = law_obj.gen(rng, pt)
        failed, err = _fails(law_obj, ops, pt, args)
        if failed:
            small = shrink(law_obj, ops, pt, args)
            _, err_small = _fails(law_obj, ops, pt, small)
            return n, idx + 1, {
                "config": pt.to_json(),
                "sample": idx,
                "inputs": [_describe(x) for x in small],
                "inputs_json": [_encode(x) for x in small],
                "original_inputs": [_describe(x) for x in args],
                "error": err_small or err,
            }
    return n, n, None


def run_suite(suite: LawSuite, mutation: str | None = None, workers: int = 1,
              timing: bool = False, progress: Callable | None = None) -> dict:
    """Run every law of the suite at every applicable grid point."""
    if mutation is not None:
        make_ops(mutation)
    start = time.perf_counter()
    tasks = []
    for law_id in suite.laws:
        law_obj = LAWS[law_id]
        for pt in suite.grid:
            if law_obj.applies(pt):
                tasks.append((law_id, pt, suite.samples, suite.seed, mutation))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_law_point, tasks, chunksize=1))
    else:
        results = []
        for t in tasks:
            results.append(_run_law_point(t))
            if progress:
                progress(t, results[-1])
    per_law: dict = {law_id: {"id": law_id, "status": "pass", "checked": 0, "configs": 0,
                              "counterexample": None} for law_id in suite.laws}
    for (law_id, pt, *_), (planned, checked, cex) in zip(tasks, results):
        entry = per_law[law_id]
        entry["checked"] += checked
        entry["configs"] += 1
        if cex is not None and entry["counterexample"] is None:
            entry["status"] = "fail"
            entry["counterexample"] = cex
    for entry in per_law.values():
        if entry["configs"] == 0:
            entry["status"] = "skipped"
    report = {
        "suite": suite.name,
        "seed": suite.seed,
        "samples": suite.samples,
        "mutation": mutation,
        "grid": [pt.to_json() for pt in suite.grid],
        "laws": [per_law[i] for i in suite.laws],
        "passed": all(e["status"] != "fail" for e in per_law.values()),
    }
    if timing:
        report["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    return report


def report_bytes(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()


def mutation_matrix(seed=0, samples=20, grid=None, workers=1) -> dict:
    """For every law, the mutations under which it fails."""
    grid = grid or default_grid()
    killed: dict = {law_id: [] for law_id in LAWS}
    for name in MUTATIONS:
        rep = run_suite(LawSuite("all", grid, samples, seed, list(LAWS)), mutation=name, workers=workers)
        for entry in rep["laws"]:
            if entry["status"] == "fail":
                killed[entry["id"]].append(name)
    return killed
