"""Artin-Schreier-Witt characters, Swan conductors and refined Swan conductors.

A character is represented by a form modulo the image of 1 - C on Z_1.
``swan`` lowers the pole of the representative by the move
``w -> w - (F(a) - R(a))`` while the leading component is an F-image;
when it is not, that component certifies the conductor.
``asw_best_form`` is the independent coordinate route for H^1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartier import f_preimage
from .errors import ShapeMismatch, TameInput, UnsupportedShape
from .filtration import fil_level, fil_level_witt
from .forms import DrwForm, from_witt
from .laurent import LaurentElem
from .witt import WittVec, teichmuller

MAX_MOVES = 100_000


@dataclass(frozen=True)
class AswCharacter:
    """Class of ``form`` modulo (1 - C)(Z_1 W_m Omega^q)."""

    form: DrwForm

    def __post_init__(self):
        depth = self.form.tower.depth
        if depth not in (1, 2):
            raise UnsupportedShape(f"characters are supported over towers of depth 1 or 2, not {depth}")
        if self.form.q > depth:
            raise UnsupportedShape("degree exceeds the tower depth")
        if self.form.m < 1:
            raise ShapeMismatch("need length m >= 1")

    @classmethod
    def from_witt(cls, a: WittVec) -> "AswCharacter":
        return cls(from_witt(a))


@dataclass(frozen=True)
class SwanReport:
    sw: int
    reduced: DrwForm
    rsw: DrwForm | None
    rsw_modulus: int | None
    moves: int = 0

    @property
    def tame(self) -> bool:
        return self.sw == 0

    def to_json(self) -> dict:
        return {
            "sw": self.sw,
            "reduced": self.reduced.to_json(),
            "rsw": None if self.rsw is None else self.rsw.to_json(),
            "rsw_modulus": self.rsw_modulus,
            "tame": self.tame,
        }


def rsw_modulus(n: int, p: int) -> int:
    return max(n - 1, n // p)


def reduce_character(omega: DrwForm):
    """Lower the pole while the leading component is an F-image.

    Returns (reduced form, level, moves).  Every move replaces the leading
    component X by R of an F-preimage of X, which sits at a strictly higher
    index, so the loop terminates.
    """
    moves = 0
    while True:
        if not omega:
            return omega, 0, moves
        lead = omega.min_outer_index()
        if lead >= 0:
            return omega, 0, moves
        comp = omega.restrict_outer(lead)
        pre = f_preimage(comp, 1)
        if pre is None:
            return omega, -lead, moves
        omega = omega - comp + pre.R()
        moves += 1
        if moves > MAX_MOVES:
            raise RuntimeError("reduction did not terminate")


def refined_swan(reduced: DrwForm, n: int) -> tuple:
    """(-1)^(q+1) F^(m-1) d(reduced), truncated modulo fil_n'."""
    if n < 1:
        raise TameInput("refined Swan conductor needs sw >= 1")
    sign = -1 if reduced.q % 2 == 0 else 1
    raw = reduced.d().Fn(reduced.m - 1).scale(sign)
    mod = rsw_modulus(n, reduced.tower.p)
    return raw.drop_outer_at_least(-mod), mod


def swan(chi) -> SwanReport:
    if isinstance(chi, DrwForm):
        chi = AswCharacter(chi)
    reduced, sw, moves = reduce_character(chi.form)
    if sw == 0:
        return SwanReport(0, reduced, None, None, moves)
    rsw, mod = refined_swan(reduced, sw)
    return SwanReport(sw, reduced, rsw, mod, moves)


# -- coordinate route for H^1 ----------------------------------------------------------

def _pth_power_part(c: LaurentElem):
    """(root, part): part = the terms of c that are p-th powers, root^p = part."""
    p = c.tower.p
    keep = {e: v for e, v in c.terms.items() if all(x % p == 0 for x in e)}
    part = LaurentElem(c.tower, keep)
    if not keep:
        return None, part
    root = part.frobenius_root()
    return root, part


def asw_best_form(a: WittVec) -> WittVec:
    """Representative of a + (F-bar - 1) W_m of minimal Brylinski level.

    Leading terms c t^(-p j) (c a p-th power) are replaced, deepest-first
    among the coordinates attaining the current level, by c^(1/p) t^(-j)
    through subtraction of (F-bar - 1) V^k [c^(1/p) t^(-j)].
    """
    tower = a.tower
    p, m = tower.p, a.m
    if tower.depth < 1:
        raise ShapeMismatch("need a tower of depth >= 1")
    outer = tower.depth - 1
    for _ in range(MAX_MOVES):
        level = fil_level_witt(a)
        if level <= 0:
            return a
        move = None
        for i in reversed(range(m)):
            c = a.a(i)
            if not c.terms or -(p**i) * c.valuation() != level:
                continue
            e = c.valuation()
            if e % p:
                continue
            lead = LaurentElem(tower, {x: v for x, v in c.terms.items() if x[outer] == e})
            root, _ = _pth_power_part(lead)
            if root is not None:
                move = (i, root)
                break
        if move is None:
            return a
        i, root = move
        k = m - 1 - i
        y = teichmuller(root, m - k)
        for _ in range(k):
            y = y.V()
        a = a - (y.Fbar() - y)
    raise RuntimeError("best-form reduction did not terminate")


def brylinski_level(a: WittVec):
    return fil_level_witt(a)


@dataclass(frozen=True)
class CrossCheck:
    agree: bool
    sw_forms: int
    sw_coords: int
    rsw_agree: bool


def h1_crosscheck_detail(a: WittVec) -> CrossCheck:
    if a.tower.depth != 1:
        raise UnsupportedShape("the H^1 cross-check runs over depth-1 towers")
    report = swan(AswCharacter.from_witt(a))
    best = asw_best_form(a)
    level = brylinski_level(best)
    sw_coords = 0 if level <= 0 else int(level)
    rsw_ok = True
    if report.sw >= 1 and sw_coords == report.sw:
        coord_rsw, _ = refined_swan(from_witt(best), report.sw)
        rsw_ok = coord_rsw == report.rsw and bool(report.rsw)
    agree = report.sw == sw_coords and rsw_ok
    return CrossCheck(agree, report.sw, sw_coords, rsw_ok)


def h1_crosscheck(a: WittVec) -> bool:
    """Form-side Swan data equals the coordinate best-form data."""
    return h1_crosscheck_detail(a).agree


def is_certified(report: SwanReport) -> bool:
    """sw >= 1 stop is certified: leading component is not an F-image."""
    if report.sw == 0:
        return fil_level(report.reduced) <= 0
    comp = report.reduced.restrict_outer(-report.sw)
    return bool(comp) and f_preimage(comp, 1) is None
