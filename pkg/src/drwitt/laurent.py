"""Iterated Laurent towers ``k((t_1))...((t_d))`` modelled by Laurent polynomials.

Elements are sparse maps from exponent tuples to residue-field coefficients.
Exponent tuples are ordered inner -> outer, so the last entry is the
outermost variable (the one the filtration is measured in).  The nested
JSON form groups terms by the outer exponent, recursing down the tower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .errors import LevelMismatch, NotAUnit, PrecisionUnderflow, TowerMismatch
from .field import CONWAY_DEGREE_CAP, PRIME_CAP, GaloisRing, galois_ring, is_prime

DEFAULT_NAMES = {0: (), 1: ("t",), 2: ("u", "t")}


@dataclass(frozen=True)
class TowerSpec:
    """``K_d = F_{p^r}((t_1))...((t_d))``; ``var_names`` run inner -> outer."""

    p: int
    r: int = 1
    depth: int = 1
    var_names: tuple = field(default=None)

    def __post_init__(self):
        if not is_prime(self.p) or self.p > PRIME_CAP:
            raise ValueError(f"p must be a prime <= {PRIME_CAP}, got {self.p}")
        if not 1 <= self.r <= CONWAY_DEGREE_CAP:
            raise ValueError(f"r must be in 1..{CONWAY_DEGREE_CAP}, got {self.r}")
        if not 0 <= self.depth <= 2:
            raise ValueError(f"depth must be 0, 1 or 2, got {self.depth}")
        names = self.var_names
        if names is None:
            names = DEFAULT_NAMES[self.depth]
        names = tuple(names)
        if len(names) != self.depth or len(set(names)) != len(names):
            raise ValueError(f"need {self.depth} distinct variable names, got {names}")
        object.__setattr__(self, "var_names", names)

    @property
    def ring(self) -> GaloisRing:
        return galois_ring(self.p, self.r)

    def inner(self) -> "TowerSpec":
        if self.depth == 0:
            raise LevelMismatch("the base field has no inner level")
        return TowerSpec(self.p, self.r, self.depth - 1, self.var_names[:-1])

    def var_index(self, name: str) -> int:
        return self.var_names.index(name)

    def context(self) -> dict:
        return {"p": self.p, "r": self.r, "depth": self.depth, "vars": list(self.var_names)}


# -- sparse polynomial kernels shared with the Witt/form layers --------------

def poly_add(ring: GaloisRing, a: dict, b: dict, k: int | None = None) -> dict:
    out = dict(a)
    for e, c in b.items():
        if e in out:
            s = ring.add(out[e], c, k)
            if any(s):
                out[e] = s
            else:
                del out[e]
        else:
            out[e] = ring.reduce(c, k)
    return out


_PACK = 1 << 32
_HALF = 1 << 31


def _pack(e: tuple) -> int:
    key = 0
    for x in reversed(e):
        key = key * _PACK + (x + _HALF)
    return key


def _unpack(key: int, width: int) -> tuple:
    out = []
    for _ in range(width):
        key, x = divmod(key, _PACK)
        out.append(x - _HALF)
    return tuple(out)


def poly_mul(ring: GaloisRing, a: dict, b: dict, k: int | None = None) -> dict:
    # exponents are packed into single integers and products are accumulated
    # unreduced; each output coefficient is reduced once at the end
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    width = len(next(iter(a)))
    shift = sum(_HALF * _PACK**j for j in range(width))
    r = ring.r
    out: dict = {}
    get = out.get
    if r == 1:
        bl = [(_pack(e2), c2[0]) for e2, c2 in b.items() if c2[0]]
        for e1, c1 in a.items():
            x = c1[0]
            if not x:
                continue
            k1 = _pack(e1) - shift
            for k2, y in bl:
                kk = k1 + k2
                out[kk] = get(kk, 0) + x * y
        raw = {_unpack(kk, width): (v,) for kk, v in out.items()}
        return ring.finish_raw(raw, k)
    bl = [(_pack(e2), [(j, y) for j, y in enumerate(c2) if y]) for e2, c2 in b.items()]
    for e1, c1 in a.items():
        nz = [(i, x) for i, x in enumerate(c1) if x]
        if not nz:
            continue
        k1 = _pack(e1) - shift
        for k2, c2 in bl:
            kk = k1 + k2
            acc = get(kk)
            if acc is None:
                acc = out[kk] = [0] * (2 * r - 1)
            for i, x in nz:
                for j, y in c2:
                    acc[i + j] += x * y
    raw = {_unpack(kk, width): v for kk, v in out.items()}
    return ring.finish_raw(raw, k)


def poly_pow(ring: GaloisRing, a: dict, n: int, k: int | None = None) -> dict:
    if n == 0:
        width = len(next(iter(a))) if a else 0
        return {(0,) * width: ring.from_int(1, k)}
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else poly_mul(ring, result, base, k)
        n >>= 1
        if n:
            base = poly_mul(ring, base, base, k)
    return result


class LaurentElem:
    """Immutable Laurent polynomial over a tower, optionally with a precision bound.

    With ``prec = N`` only terms of outer degree ``< N`` are known; results of
    arithmetic carry the propagated bound.
    """

    __slots__ = ("tower", "terms", "prec", "_hash")

    def __init__(self, tower: TowerSpec, terms: dict | None = None, prec: int | None = None):
        ring = tower.ring
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != tower.depth:
                raise LevelMismatch(f"exponent {e} does not match depth {tower.depth}")
            c = ring.reduce(c, 1)
            if prec is not None and tower.depth and e[-1] >= prec:
                continue
            if any(c):
                clean[e] = c
        self.tower = tower
        self.terms = dict(sorted(clean.items(), key=lambda kv: kv[0][::-1]))
        self.prec = prec
        self._hash = None

    # constructors -------------------------------------------------------------
    @classmethod
    def zero(cls, tower):
        return cls(tower, {})

    @classmethod
    def one(cls, tower):
        return cls.const(tower, tower.ring.one)

    @classmethod
    def const(cls, tower, c):
        if isinstance(c, int):
            c = tower.ring.from_int(c, 1)
        return cls(tower, {(0,) * tower.depth: c})

    @classmethod
    def monomial(cls, tower, exps: Iterable[int], c=1):
        if isinstance(c, int):
            c = tower.ring.from_int(c, 1)
        return cls(tower, {tuple(exps): c})

    @classmethod
    def var(cls, tower, name: str, power: int = 1):
        i = tower.var_index(name)
        e = [0] * tower.depth
        e[i] = power
        return cls.monomial(tower, e)

    # basic protocol ------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if not isinstance(other, LaurentElem):
            return NotImplemented
        if other.tower != self.tower:
            raise LevelMismatch("operands live in different towers")
        return other

    def _coerce(self, other):
        if isinstance(other, int):
            return LaurentElem.const(self.tower, other)
        return self._check(other)

    @staticmethod
    def _min_prec(*ps):
        ps = [p for p in ps if p is not None]
        return min(ps) if ps else None

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentElem.const(self.tower, other)
        if not isinstance(other, LaurentElem):
            return NotImplemented
        if other.tower != self.tower:
            return False
        bound = self._min_prec(self.prec, other.prec)
        if bound is None:
            return self.terms == other.terms
        a = {e: c for e, c in self.terms.items() if e[-1] < bound}
        b = {e: c for e, c in other.terms.items() if e[-1] < bound}
        return a == b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tower, tuple(self.terms.items()), self.prec))
        return self._hash

    def _finish(self, terms, prec):
        out = LaurentElem(self.tower, terms, prec)
        if prec is not None and not out.terms:
            raise PrecisionUnderflow("result has no known terms below the precision bound")
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.tower.ring
        return self._finish(poly_add(ring, self.terms, other.terms, 1), self._min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        ring = self.tower.ring
        return LaurentElem(self.tower, {e: ring.neg(c, 1) for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.tower.ring
        prec = None
        if self.prec is not None or other.prec is not None:
            inf = math.inf
            cands = []
            if self.prec is not None:
                cands.append(self.prec + (other.valuation() if other.terms else inf))
            if other.prec is not None:
                cands.append(other.prec + (self.valuation() if self.terms else inf))
            prec = min(cands)
            prec = None if prec == inf else int(prec)
        return self._finish(poly_mul(ring, self.terms, other.terms, 1), prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentElem.one(self.tower)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    # structure ----------------------------------------------------------------
    def valuation(self):
        """Minimal exponent of the outermost variable; ``inf`` for 0."""
        if not self.terms:
            return math.inf
        if self.tower.depth == 0:
            return 0
        return min(e[-1] for e in self.terms)

    def valuation_in(self, j: int):
        if not self.terms:
            return math.inf
        return min(e[j] for e in self.terms)

    def pole_order(self) -> int:
        v = self.valuation()
        return 0 if v == math.inf else max(0, -v)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading(self) -> "LaurentElem":
        """Outer-leading coefficient, as an element of the inner tower."""
        v = self.valuation()
        inner = self.tower.inner()
        return LaurentElem(inner, {e[:-1]: c for e, c in self.terms.items() if e[-1] == v})

    def outer_coefficients(self) -> dict:
        inner = self.tower.inner()
        groups: dict = {}
        for e, c in self.terms.items():
            groups.setdefault(e[-1], {})[e[:-1]] = c
        return {j: LaurentElem(inner, t) for j, t in sorted(groups.items())}

    def frobenius(self) -> "LaurentElem":
        """x -> x^p (additive in characteristic p)."""
        ring, p = self.tower.ring, self.tower.p
        return LaurentElem(
            self.tower,
            {tuple(p * x for x in e): ring.pow(c, p, 1) for e, c in self.terms.items()},
            None if self.prec is None else self.prec * p,
        )

    def frobenius_root(self):
        """The unique y with y^p = self, or None when self is not a p-th power."""
        ring, p = self.tower.ring, self.tower.p
        out = {}
        for e, c in self.terms.items():
            if any(x % p for x in e):
                return None
            out[tuple(x // p for x in e)] = ring.field_root(c)
        prec = None if self.prec is None else -(-self.prec // p)
        return LaurentElem(self.tower, out, prec)

    def inverse(self, prec: int | None = None) -> "LaurentElem":
        """Inverse of a monomial (exact), or of a unit to ``prec`` outer degrees."""
        if not self.terms:
            raise NotAUnit("0 is not a unit")
        ring = self.tower.ring
        if self.is_monomial():
            (e, c), = self.terms.items()
            return LaurentElem(self.tower, {tuple(-x for x in e): ring.field_inv(c)})
        if self.tower.depth == 0:
            raise NotAUnit("non-monomial constant")  # unreachable: constants are monomials
        lead = self.leading()
        if not lead.is_monomial():
            raise NotAUnit("leading coefficient is not a unit of the inner Laurent ring")
        if prec is None and self.prec is None:
            from .errors import PrecisionRequired

            raise PrecisionRequired("inverse of a non-monomial unit needs precision mode")
        v = self.valuation()
        bound = self._min_prec(prec, None if self.prec is None else self.prec - 2 * v)
        lead_mono = LaurentElem(self.tower, {e: c for e, c in self.terms.items() if e[-1] == v and e[:-1] in lead.terms})
        w = lead_mono.inverse()
        h = (self * w) - 1  # valuation >= 1 in the outer variable
        h = LaurentElem(self.tower, h.terms, None)
        acc = LaurentElem.one(self.tower)
        power = LaurentElem.one(self.tower)
        target = bound - (-v)  # need terms of w * sum below `bound`
        k = 0
        while True:
            k += 1
            power = LaurentElem(self.tower, (power * (-h)).terms, target)
            if not power.terms:
                break
            acc = LaurentElem(self.tower, (acc + power).terms, None)
        out = LaurentElem(self.tower, (acc * w).terms, bound)
        return out

    def truncate(self, prec: int) -> "LaurentElem":
        return LaurentElem(self.tower, self.terms, prec)

    def lift_terms(self) -> dict:
        """Teichmüller-lifted coefficients at working precision (exps -> ring element)."""
        ring = self.tower.ring
        return {e: ring.teich(c) for e, c in self.terms.items()}

    # text / JSON -----------------------------------------------------------------
    def __repr__(self):
        return f"LaurentElem({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.tower.ring
        parts = []
        for e, c in self.terms.items():
            coeff = format_field(ring, c)
            mono = "*".join(
                n if x == 1 else f"{n}^{x}" for n, x in zip(self.tower.var_names, e) if x
            )
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            else:
                parts.append(f"{_paren(coeff)}*{mono}")
        text = " + ".join(parts)
        if self.prec is not None:
            text += f" + O({self.tower.var_names[-1]}^{self.prec})"
        return text

    def to_json(self):
        return laurent_to_json(self.tower, self.terms)

    @classmethod
    def from_json(cls, tower: TowerSpec, data) -> "LaurentElem":
        return cls(tower, laurent_from_json(tower, data))


def _paren(s: str) -> str:
    return f"({s})" if "+" in s else s


def format_field(ring: GaloisRing, c) -> str:
    if ring.r == 1:
        return str(c[0])
    parts = []
    for i, x in enumerate(c):
        if x:
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            parts.append(str(x) if not mono else (mono if x == 1 else f"{x}*{mono}"))
    return " + ".join(parts) if parts else "0"


def laurent_to_json(tower: TowerSpec, terms: dict):
    if tower.depth == 0:
        c = terms.get((), tower.ring.zero)
        return list(c)
    groups: dict = {}
    for e, c in terms.items():
        groups.setdefault(e[-1], {})[e[:-1]] = c
    inner = tower.inner()
    return {
        "level": tower.depth,
        "terms": [[j, laurent_to_json(inner, t)] for j, t in sorted(groups.items())],
    }


def laurent_from_json(tower: TowerSpec, data) -> dict:
    if tower.depth == 0:
        if isinstance(data, int):
            data = [data]
        c = tuple(int(x) for x in data) + (0,) * (tower.r - len(data))
        return {(): c}
    if data.get("level") != tower.depth:
        raise TowerMismatch(f"expected level {tower.depth}, got {data.get('level')}")
    inner = tower.inner()
    out = {}
    for j, sub in data["terms"]:
        for e, c in laurent_from_json(inner, sub).items():
            out[e + (int(j),)] = c
    return out
