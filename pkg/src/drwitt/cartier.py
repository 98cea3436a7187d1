"""Z_1 membership, the Cartier operator and the higher groups Z_i, B_i.

F keeps component indices and acts on coefficients by the ring Frobenius,
so F-images are decided one index block at a time: a block at length m is
in the image of F^i iff its inverse-Frobenius twist is integral at length
m + i, up to a correction that F^i kills.  C is then R of that preimage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import CapExceeded, NotInZ1, ShapeMismatch
from .filtration import fil_level, r_section
from .forms import DrwForm, GhComponent, _kappa_wedge, split_kappa, vp, weight_data

ZB_CAP = 3


def _block_preimage(ring, p, m, i, N, block):
    """Coefficients at length m + i mapping to ``block`` under F^i, or None."""
    mi = m + i
    lifted = {I: ring.sigma(ring.reduce(c, m), -i) for I, c in block.items()}
    u, kappa, j0 = weight_data(N, mi, p)
    if u == 0:
        return lifted
    b, rest = split_kappa(ring, kappa, j0, lifted)
    need = min(m, u)
    if any(not ring.is_zero(c, need) for c in rest.values()):
        return None
    out = _kappa_wedge(ring, kappa, b)
    if u <= m:
        for I, c in rest.items():
            out[I] = ring.add(out.get(I, ring.zero), c)
    # u > m: rest is divisible by p^m, hence invisible after F^i at length m
    return out


def f_preimage(x: DrwForm, i: int = 1):
    """An element y of length m + i with F^i(y) = x, or None if there is none."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return x
    tower, m = x.tower, x.m
    ring, p = tower.ring, tower.p
    raw: dict = {}
    for N, block in x.blocks().items():
        pre = _block_preimage(ring, p, m, i, N, block)
        if pre is None:
            return None
        for I, c in pre.items():
            raw[(N, I)] = c
    return DrwForm(tower, m + i, x.q, raw)


def _zero_pad(x: DrwForm, y: DrwForm) -> DrwForm:
    """Another F-preimage: add V^m of the mod-p reduction of x (killed by F)."""
    ring = x.tower.ring
    z = DrwForm(x.tower, 1, x.q, {k: ring.reduce(c, 1) for k, c in x.terms.items()})
    return y + z.Vn(x.m)


@dataclass(frozen=True)
class CartierSection:
    """A named rule choosing an F-preimage one length up."""

    name: str
    rule: Callable

    def __call__(self, x: DrwForm):
        y = f_preimage(x, 1)
        if y is None:
            return None
        return self.rule(x, y)


SECTIONS = {
    "frobenius-inverse-lift": CartierSection("frobenius-inverse-lift", lambda x, y: y),
    "zero-pad": CartierSection("zero-pad", _zero_pad),
}
DEFAULT_SECTION = "frobenius-inverse-lift"


def _as_form(c):
    if isinstance(c, GhComponent):
        raise ShapeMismatch("pass the component as a form (DrwForm.restrict_outer)")
    return c


def is_F_image(c: DrwForm, i: int = 1):
    """(True, witness) if c = F^i(witness), else (False, None)."""
    c = _as_form(c)
    y = f_preimage(c, i)
    return (y is not None), y


def is_Z1(x: DrwForm, fil_bound=None) -> bool:
    """F^(m-1) d x = 0, plus fil_level(x) <= fil_bound when a bound is given."""
    if x.m == 0:
        return True
    closed = not x.d().Fn(x.m - 1)
    if fil_bound is not None:
        return closed and fil_level(x) <= fil_bound
    return closed


def cartier_C(x: DrwForm, section: str = DEFAULT_SECTION) -> DrwForm:
    """C(x) = R(y) for y with F(y) = x."""
    try:
        rule = SECTIONS[section]
    except KeyError:
        raise ValueError(f"unknown Cartier section {section!r}") from None
    y = rule(x)
    if y is None:
        raise NotInZ1("form is not in Z_1 (no F-preimage)")
    return y.R()


def one_minus_C(x: DrwForm, section: str = DEFAULT_SECTION) -> DrwForm:
    return x - cartier_C(x, section)


def cartier_inverse(y: DrwForm) -> DrwForm:
    """A form x in Z_1 with C(x) = y: F of an R-lift of y."""
    return r_section(y).F()


def vr3_witness(omega: DrwForm) -> DrwForm:
    """x = (V + V^2 R + ... + V^m R^(m-1))(omega), of length m + 1."""
    m = omega.m
    acc = DrwForm.zero(omega.tower, m + 1, omega.q)
    for k in range(1, m + 1):
        acc = acc + omega.Rn(k - 1).Vn(k)
    return acc


# -- higher groups at length 1 ---------------------------------------------------

@dataclass(frozen=True)
class ZBFlags:
    """Membership of a length-1 form in Z_i and B_i, with witnesses."""

    i: int
    in_Z: bool
    in_B: bool
    z_witness: DrwForm | None
    b_witness: DrwForm | None

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "Z": self.in_Z,
            "B": self.in_B,
            "z_witness": None if self.z_witness is None else self.z_witness.to_json(),
            "b_witness": None if self.b_witness is None else self.b_witness.to_json(),
        }


def b_preimage(x: DrwForm, i: int):
    """y of length i and degree q-1 with F^(i-1) d y = x, or None.

    Exact per index: with v = v_p(N), F^(i-1) d reaches exactly the
    forms kappa ^ (anything) when v < i, and nothing when v >= i.
    """
    if x.m != 1:
        raise ShapeMismatch("B_i is tested on length-1 forms")
    tower = x.tower
    ring, p = tower.ring, tower.p
    if i == 0 or x.q == 0:
        return DrwForm.zero(tower, max(i, 1), max(x.q - 1, 0)) if not x else None
    raw: dict = {}
    for N, block in x.blocks().items():
        v = min(vp(n, p) for n in N)
        if v >= i:
            return None
        kappa = tuple(n // p**v for n in N)
        j0 = next(j for j, k in enumerate(kappa) if k % p)
        b, rest = split_kappa(ring, kappa, j0, block)
        if any(not ring.is_zero(c, 1) for c in rest.values()):
            return None
        pu = p ** (i - 1 - v)
        for J, c in b.items():
            raw[(N, J)] = ring.scale(ring.sigma(ring.reduce(c, 1), -(i - 1)), pu)
    y = DrwForm(tower, i, x.q - 1, raw)
    if y.d().Fn(i - 1) != x:
        raise AssertionError("B_i witness does not reproduce the input")
    return y


def zb_group_test(x: DrwForm, i: int, cap: int = ZB_CAP) -> ZBFlags:
    """Decide x in Z_i and x in B_i (length 1) with explicit witnesses."""
    if x.m != 1:
        raise ShapeMismatch("zb_group_test needs a length-1 form")
    if i > cap:
        raise CapExceeded(f"i = {i} exceeds the cap {cap}")
    if i < 0:
        raise ValueError("i must be non-negative")
    z = f_preimage(x, i)
    if z is not None and z.Fn(i) != x:
        raise AssertionError("Z_i witness does not reproduce the input")
    y = b_preimage(x, i)
    return ZBFlags(i, z is not None, y is not None, z, y)
