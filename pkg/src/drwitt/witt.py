"""Truncated p-typical Witt vectors in coordinates.

Universal sum / product / negation polynomials are generated over the
integers from the ghost equations and reduced mod p for evaluation.
Coordinates are kept in the order ``(a_{m-1}, ..., a_0)``: the first entry is
the Teichmüller-level coordinate, the last the deepest V-coordinate.  As a
Python tuple this is the same left-to-right sequence as the usual
``(x_0, ..., x_{m-1})``; only the labelling differs (``a_i = x_{m-1-i}``).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import CapExceeded, LengthMismatch, LengthUnderflow, TowerMismatch
from .laurent import LaurentElem, TowerSpec

LENGTH_CAP = 4
# p^(m-1) bounds the degree of the generated polynomials; beyond this the
# integer expansion is no longer desk-scale.
DEGREE_CAP = 49


# -- integer polynomials: dict exps -> int ------------------------------------

def _iadd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _imul(a, b):
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _ipow(a, n, nvars):
    result = {(0,) * nvars: 1}
    base = a
    while n:
        if n & 1:
            result = _imul(result, base)
        n >>= 1
        if n:
            base = _imul(base, base)
    return result


def _ivar(i, nvars, power=1):
    e = [0] * nvars
    e[i] = power
    return {tuple(e): 1}


def ghost(p: int, n: int, offset: int, nvars: int) -> dict:
    """w_n = sum_{j<=n} p^j X_j^{p^(n-j)} in variables ``offset + j``."""
    out: dict = {}
    for j in range(n + 1):
        out = _iadd(out, {e: p**j for e in _ivar(offset + j, nvars, p ** (n - j))})
    return out


def _solve_ghost(p, m, nvars, target):
    """Find polys Q_0..Q_{m-1} with w_n(Q) = target(n) for all n."""
    polys = []
    for n in range(m):
        acc = target(n)
        for j, qj in enumerate(polys):
            acc = _iadd(acc, {e: c * p**j for e, c in _ipow(qj, p ** (n - j), nvars).items()}, -1)
        pn = p**n
        for c in acc.values():
            if c % pn:
                raise ArithmeticError("ghost equation not integral")  # cannot happen
        polys.append({e: c // pn for e, c in acc.items()})
    return polys


@dataclass(frozen=True)
class WittPolyTable:
    """Universal polynomials over Z.

    ``sums``/``prods`` are in variables ``x_0..x_{m-1}, y_0..y_{m-1}``
    (standard indexing, ``x_0`` = Teichmüller level); ``negs`` in ``x`` only.
    """

    p: int
    m: int
    sums: tuple
    prods: tuple
    negs: tuple

    def check_ghost(self) -> bool:
        p, m = self.p, self.m
        nv = 2 * m
        S, P = list(self.sums), list(self.prods)
        for n in range(m):
            wx, wy = ghost(p, n, 0, nv), ghost(p, n, m, nv)
            ws = self._ghost_of(S, n, nv)
            wp = self._ghost_of(P, n, nv)
            if ws != _iadd(wx, wy) or wp != _imul(wx, wy):
                return False
            wn = self._ghost_of(list(self.negs), n, m)
            if wn != {e: -c for e, c in ghost(p, n, 0, m).items()}:
                return False
        return True

    def _ghost_of(self, polys, n, nv):
        out: dict = {}
        for j in range(n + 1):
            out = _iadd(out, {e: c * self.p**j for e, c in _ipow(polys[j], self.p ** (n - j), nv).items()})
        return out

    def to_json(self) -> dict:
        def enc(poly):
            return [[list(e), c] for e, c in sorted(poly.items())]

        return {
            "p": self.p,
            "m": self.m,
            "variables": [f"x{i}" for i in range(self.m)] + [f"y{i}" for i in range(self.m)],
            "sum": [enc(s) for s in self.sums],
            "product": [enc(s) for s in self.prods],
            "negation": [enc(s) for s in self.negs],
        }


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def gen_witt_polys(p: int, m: int) -> WittPolyTable:
    """Ghost-equation generation of the universal Witt polynomials (memoized)."""
    if m < 1 or m > LENGTH_CAP or p ** (m - 1) > DEGREE_CAP:
        raise CapExceeded(f"(p, m) = ({p}, {m}) exceeds the Witt polynomial caps")
    key = (p, m)
    table = _TABLES.get(key)
    if table is not None:
        return table
    with _TABLES_LOCK:
        table = _TABLES.get(key)
        if table is None:
            nv = 2 * m
            sums = _solve_ghost(p, m, nv, lambda n: _iadd(ghost(p, n, 0, nv), ghost(p, n, m, nv)))
            prods = _solve_ghost(p, m, nv, lambda n: _imul(ghost(p, n, 0, nv), ghost(p, n, m, nv)))
            negs = _solve_ghost(p, m, m, lambda n: {e: -c for e, c in ghost(p, n, 0, m).items()})
            table = WittPolyTable(p, m, tuple(sums), tuple(prods), tuple(negs))
            _TABLES[key] = table
    return table


def _reduce_mod_p(poly, p):
    return tuple((e, c % p) for e, c in poly.items() if c % p)


_REDUCED: dict = {}


def _reduced(p, m):
    key = (p, m)
    hit = _REDUCED.get(key)
    if hit is None:
        t = gen_witt_polys(p, m)
        hit = (
            [_reduce_mod_p(s, p) for s in t.sums],
            [_reduce_mod_p(s, p) for s in t.prods],
            [_reduce_mod_p(s, p) for s in t.negs],
        )
        _REDUCED[key] = hit
    return hit


class _Evaluator:
    """Evaluates mod-p integer polynomials at Laurent values, caching powers.

    Powers are assembled from base-p digits using the additive Frobenius,
    so x^e costs at most (p-1) * digits multiplications.
    """

    def __init__(self, values):
        self.values = values
        self.cache: dict = {}
        self.tower = values[0].tower
        self.p = self.tower.p

    def power(self, i, e):
        key = (i, e)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        x = self.values[i]
        if e == 1:
            out = x
        elif not x.terms:
            out = x
        elif e % self.p == 0:
            out = self.power(i, e // self.p).frobenius()
        else:
            out = self.power(i, e - 1) * x
        self.cache[key] = out
        return out

    def eval(self, poly):
        tower = self.tower
        acc: dict = {}
        ring = tower.ring
        zero_vars = {i for i, v in enumerate(self.values) if not v.terms}
        for exps, c in poly:
            if any(e and i in zero_vars for i, e in enumerate(exps)):
                continue
            term = None
            for i, e in enumerate(exps):
                if e:
                    f = self.power(i, e)
                    term = f if term is None else term * f
            if term is None:
                term = LaurentElem.one(tower)
            cc = ring.from_int(c, 1)
            for ex, v in term.terms.items():
                w = ring.mul(v, cc, 1)
                if ex in acc:
                    acc[ex] = ring.add(acc[ex], w, 1)
                else:
                    acc[ex] = w
        return LaurentElem(tower, acc)


class WittVec:
    """Element of W_m(R) for a tower ring R; ``coords`` = (a_{m-1}, ..., a_0)."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower: TowerSpec, coords):
        coords = tuple(coords)
        for c in coords:
            if not isinstance(c, LaurentElem) or c.tower != tower:
                raise TowerMismatch("coordinates must be Laurent elements of the given tower")
        self.tower = tower
        self.coords = coords

    @property
    def m(self) -> int:
        return len(self.coords)

    def a(self, i: int) -> LaurentElem:
        """Coordinate a_i in the external order (a_0 is the deepest V-coordinate)."""
        return self.coords[self.m - 1 - i]

    @classmethod
    def zero(cls, tower, m):
        return cls(tower, [LaurentElem.zero(tower)] * m)

    @classmethod
    def from_int(cls, tower, n: int, m: int) -> "WittVec":
        acc = cls.zero(tower, m)
        one = teichmuller(LaurentElem.one(tower), m)
        sign = 1 if n >= 0 else -1
        for _ in range(abs(n)):
            acc = acc + one if sign > 0 else acc - one
        return acc

    def _check(self, other):
        if not isinstance(other, WittVec):
            raise TypeError("expected a WittVec")
        if other.tower != self.tower:
            raise TowerMismatch("Witt vectors over different towers")
        if other.m != self.m:
            raise LengthMismatch(f"lengths {self.m} and {other.m} differ")

    def __eq__(self, other):
        return isinstance(other, WittVec) and self.tower == other.tower and self.coords == other.coords

    def __hash__(self):
        return hash((self.tower, self.coords))

    def __repr__(self):
        return "WittVec(" + ", ".join(str(c) for c in self.coords) + ")"

    def is_zero(self):
        return all(not c.terms for c in self.coords)

    def _binary(self, other, which):
        self._check(other)
        if self.m == 0:
            return self
        sums, prods, _ = _reduced(self.tower.p, self.m)
        polys = sums if which == "add" else prods
        ev = _Evaluator(list(self.coords) + list(other.coords))
        return WittVec(self.tower, [ev.eval(P) for P in polys])

    def __add__(self, other):
        return self._binary(other, "add")

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __neg__(self):
        if self.m == 0:
            return self
        _, _, negs = _reduced(self.tower.p, self.m)
        ev = _Evaluator(list(self.coords))
        return WittVec(self.tower, [ev.eval(P) for P in negs])

    def __sub__(self, other):
        return self + (-other)

    # operators ----------------------------------------------------------------
    def V(self) -> "WittVec":
        return WittVec(self.tower, (LaurentElem.zero(self.tower),) + self.coords)

    def R(self) -> "WittVec":
        if self.m == 0:
            raise LengthUnderflow("restriction of the zero ring")
        return WittVec(self.tower, self.coords[:-1])

    def Fbar(self) -> "WittVec":
        return WittVec(self.tower, [c.frobenius() for c in self.coords])

    def F(self) -> "WittVec":
        """Witt Frobenius W_{m} -> W_{m-1}; equals Fbar followed by R in characteristic p."""
        return self.Fbar().R()

    def to_json(self) -> dict:
        return {"m": self.m, "coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, tower, data) -> "WittVec":
        return cls(tower, [LaurentElem.from_json(tower, c) for c in data["coords"]])


def witt_arith(op: str, x: WittVec, y: WittVec | None = None) -> WittVec:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown Witt operation {op!r}")


def witt_map(op: str, x: WittVec) -> WittVec:
    return {"V": WittVec.V, "F": WittVec.F, "R": WittVec.R, "Fbar": WittVec.Fbar}[op](x)


def teichmuller(x: LaurentElem, m: int) -> WittVec:
    return WittVec(x.tower, (x,) + (LaurentElem.zero(x.tower),) * (m - 1))
