"""Seeded random elements over a configuration grid point."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .errors import UnsupportedShape
from .forms import DrwForm, dlog, from_witt, teich_form
from .laurent import LaurentElem, TowerSpec
from .witt import WittVec

SHAPES = ("witt", "form", "z1-form", "fil-bounded")


@dataclass(frozen=True)
class GridPoint:
    p: int
    r: int = 1
    depth: int = 1
    m: int = 1
    q: int = 0
    lo: int = -12
    hi: int = 12

    def tower(self) -> TowerSpec:
        return TowerSpec(self.p, self.r, self.depth)

    def to_json(self) -> dict:
        return asdict(self)

    def label(self) -> str:
        return f"p={self.p},r={self.r},depth={self.depth},m={self.m},q={self.q}"


def rng_for(seed, *parts) -> random.Random:
    """Independent deterministic stream per (seed, parts)."""
    return random.Random(":".join(str(x) for x in (seed,) + parts))


def random_coeff(rng, ring, nonzero=True):
    while True:
        c = tuple(rng.randrange(ring.p) for _ in range(ring.r))
        if any(c) or not nonzero:
            return c


def random_laurent(rng, tower: TowerSpec, lo=-12, hi=12, max_terms=2, min_terms=0) -> LaurentElem:
    ring = tower.ring
    terms = {}
    for _ in range(rng.randint(min_terms, max_terms)):
        e = tuple(rng.randint(lo, hi) for _ in range(tower.depth))
        terms[e] = random_coeff(rng, ring)
    return LaurentElem(tower, terms)


def random_monomial_unit(rng, tower: TowerSpec, lo=-6, hi=6) -> LaurentElem:
    e = tuple(rng.randint(lo, hi) for _ in range(tower.depth))
    return LaurentElem.monomial(tower, e, random_coeff(rng, tower.ring))


def random_witt(rng, tower: TowerSpec, m: int, lo=-12, hi=12, max_terms=2) -> WittVec:
    return WittVec(tower, [random_laurent(rng, tower, lo, hi, max_terms) for _ in range(m)])


def random_generator(rng, tower: TowerSpec, m: int, q: int, lo=-12, hi=12) -> DrwForm:
    """V^j([x] dy_1 ... ) or d V^j(...) with a random split of the degree into dlog / d[y] factors."""
    if q > tower.depth:
        return DrwForm.zero(tower, m, q)
    use_d = q >= 1 and rng.random() < 0.4
    inner_q = q - 1 if use_d else q
    j = rng.randrange(m)
    length = m - j
    x = random_laurent(rng, tower, lo, hi, 2, 1)
    g = teich_form(x, length)
    for _ in range(inner_q):
        if rng.random() < 0.5:
            g = g * dlog(LaurentElem.var(tower, tower.var_names[rng.randrange(tower.depth)]), length)
        else:
            g = g * teich_form(random_laurent(rng, tower, lo, hi, 1, 1), length).d()
    g = g.Vn(j)
    if use_d:
        g = g.d()
    return g


def random_form(rng, tower: TowerSpec, m: int, q: int, lo=-12, hi=12, count=2) -> DrwForm:
    if m == 0:
        return DrwForm.zero(tower, 0, q)
    if q == 0 and rng.random() < 0.5:
        return from_witt(random_witt(rng, tower, m, lo, hi))
    acc = DrwForm.zero(tower, m, q)
    for _ in range(rng.randint(1, count)):
        acc = acc + random_generator(rng, tower, m, q, lo, hi)
    return acc


def restrict_level(x: DrwForm, n: int) -> DrwForm:
    """Drop every index block below -n (blocks are independent summands)."""
    return DrwForm(x.tower, x.m, x.q, {k: c for k, c in x.terms.items() if k[0][-1] >= -n},
                   normalize=False)


def sample_element(point: GridPoint, seed, shape: str, n: int | None = None, index: int = 0):
    """One element of the requested shape at a grid point."""
    if point.q > point.depth:
        raise UnsupportedShape("degree exceeds depth")
    tower = point.tower()
    rng = rng_for(seed, shape, point.label(), index)
    if shape == "witt":
        return random_witt(rng, tower, point.m, point.lo, point.hi)
    if shape == "form":
        return random_form(rng, tower, point.m, point.q, point.lo, point.hi)
    if shape == "z1-form":
        return random_form(rng, tower, point.m + 1, point.q, point.lo, point.hi).F()
    if shape == "fil-bounded":
        if n is None:
            n = rng.randint(0, 12)
        return restrict_level(random_form(rng, tower, point.m, point.q, point.lo, point.hi), n)
    raise UnsupportedShape(f"unknown sample shape {shape!r}")
