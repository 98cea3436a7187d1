"""Classical de Rham complex of a Laurent polynomial tower (independent oracle for m = 1).

Omega^q is the free module on ``dlog t_I`` over ``F_{p^r}[t^±]``; forms are
plain dictionaries ``(exps, I) -> field element`` with no normalization
beyond dropping zeros.
"""

from __future__ import annotations

from .errors import ShapeMismatch
from .laurent import TowerSpec


class DeRhamForm:
    __slots__ = ("tower", "q", "terms")

    def __init__(self, tower: TowerSpec, q: int, terms: dict | None = None):
        f = tower.ring
        self.tower, self.q = tower, q
        self.terms = {}
        for k, c in (terms or {}).items():
            c = f.reduce(c, 1)
            if any(c):
                self.terms[k] = c

    def __eq__(self, other):
        return (isinstance(other, DeRhamForm) and self.tower == other.tower
                and self.q == other.q and self.terms == other.terms)

    def __repr__(self):
        return f"DeRhamForm(q={self.q}, {self.terms})"

    def __add__(self, other):
        if self.q != other.q:
            raise ShapeMismatch("degree mismatch")
        f = self.tower.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = f.add(out.get(k, f.zero), c, 1)
        return DeRhamForm(self.tower, self.q, out)

    def __neg__(self):
        f = self.tower.ring
        return DeRhamForm(self.tower, self.q, {k: f.neg(c, 1) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n):
        f = self.tower.ring
        return DeRhamForm(self.tower, self.q, {k: f.scale(c, n, 1) for k, c in self.terms.items()})

    def wedge(self, other):
        f = self.tower.ring
        out: dict = {}
        for (e1, I1), c1 in self.terms.items():
            for (e2, I2), c2 in other.terms.items():
                if set(I1) & set(I2):
                    continue
                # sign of the shuffle sorting I1 + I2
                inv = sum(1 for i in I1 for j in I2 if i > j)
                c = f.mul(c1, c2, 1)
                if inv % 2:
                    c = f.neg(c, 1)
                key = (tuple(a + b for a, b in zip(e1, e2)), tuple(sorted(I1 + I2)))
                out[key] = f.add(out.get(key, f.zero), c, 1)
        return DeRhamForm(self.tower, self.q + other.q, out)

    def d(self):
        # d(c t^e dlog t_I) = sum_j e_j c t^e dlog t_j ^ dlog t_I
        f = self.tower.ring
        out: dict = {}
        for (e, I), c in self.terms.items():
            for j, ej in enumerate(e):
                if ej % self.tower.p == 0 or j in I:
                    continue
                sign = -1 if sum(1 for i in I if i < j) % 2 else 1
                key = (e, tuple(sorted(I + (j,))))
                out[key] = f.add(out.get(key, f.zero), f.scale(c, sign * ej, 1), 1)
        return DeRhamForm(self.tower, self.q + 1, out)


def de_rham_m1_oracle(x) -> DeRhamForm:
    """Translate a length-1 DrwForm into the free-module model."""
    if x.m != 1:
        raise ShapeMismatch("the classical oracle only models length 1")
    return DeRhamForm(x.tower, x.q, dict(x.terms))


def from_oracle(tower, omega: DeRhamForm):
    from .forms import DrwForm

    return DrwForm(tower, 1, omega.q, dict(omega.terms))
