from __future__ import annotations

import random
from fractions import Fraction

import pytest

from drwitt.errors import CapExceeded, LengthMismatch
from drwitt.laurent import LaurentElem, TowerSpec
from drwitt.witt import WittVec, gen_witt_polys, teichmuller

from conftest import ring_elem


def _poly(table_polys, idx):
    return dict(table_polys[idx])


def test_universal_sum_p2_m2():
    t = gen_witt_polys(2, 2)
    # variables x0, x1, y0, y1
    assert _poly(t.sums, 1) == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}
    assert _poly(t.sums, 0) == {(1, 0, 0, 0): 1, (0, 0, 1, 0): 1}


def test_universal_product_p3_m2():
    t = gen_witt_polys(3, 2)
    assert _poly(t.prods, 1) == {(3, 0, 0, 1): 1, (0, 1, 3, 0): 1, (0, 1, 0, 1): 3}


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)])
def test_tables_are_ghost_compatible(p, m):
    assert gen_witt_polys(p, m).check_ghost()


def test_caps():
    with pytest.raises(CapExceeded):
        gen_witt_polys(5, 4)
    with pytest.raises(CapExceeded):
        gen_witt_polys(2, 5)


def _ghost_sum_oracle(p, xs, ys, op):
    """Integer Witt vectors (standard order) combined through ghost components."""
    m = len(xs)

    def ghosts(v):
        return [sum(p**j * v[j] ** (p ** (n - j)) for j in range(n + 1)) for n in range(m)]

    gx, gy = ghosts(xs), ghosts(ys)
    target = [a + b if op == "add" else a * b for a, b in zip(gx, gy)]
    out = []
    for n in range(m):
        rest = target[n] - sum(p**j * out[j] ** (p ** (n - j)) for j in range(n))
        val = Fraction(rest, p**n)
        assert val.denominator == 1
        out.append(int(val))
    return out


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (3, 3), (5, 2)])
def test_arithmetic_against_integer_ghost_oracle(p, m):
    tower = TowerSpec(p, 1, 0)
    rng = random.Random(f"{p}{m}")
    for _ in range(25):
        xs = [rng.randrange(p) for _ in range(m)]
        ys = [rng.randrange(p) for _ in range(m)]
        wx = WittVec(tower, [LaurentElem.const(tower, x) for x in xs])
        wy = WittVec(tower, [LaurentElem.const(tower, y) for y in ys])
        for op in ("add", "mul"):
            exp = _ghost_sum_oracle(p, xs, ys, op)
            got = wx + wy if op == "add" else wx * wy
            assert got == WittVec(tower, [LaurentElem.const(tower, e % p) for e in exp])


def _w(tower, *coords):
    return WittVec(tower, [LaurentElem.const(tower, c) if isinstance(c, int) else c for c in coords])


def test_witt_examples():
    t3 = TowerSpec(3, 1, 0)
    assert _w(t3, 1, 0) + _w(t3, 1, 0) == _w(t3, 2, 1)
    x = _w(t3, 2, 1)
    assert x + WittVec.zero(t3, 2) == x
    t2 = TowerSpec(2)
    a = WittVec(t2, [ring_elem("t^-1", 2), ring_elem("0", 2)])
    assert a + a == WittVec(t2, [ring_elem("0", 2), ring_elem("t^-2", 2)])


def test_operators():
    t2 = TowerSpec(2)
    assert teichmuller(ring_elem("t", 2), 2).F() == teichmuller(ring_elem("t^2", 2), 1)
    t3 = TowerSpec(3, 1, 0)
    assert _w(t3, 1).V().F() == WittVec.zero(t3, 1)
    x = WittVec(t2, [ring_elem("t", 2), ring_elem("t^3", 2)])
    assert x.R() == WittVec(t2, [ring_elem("t", 2)])
    assert teichmuller(ring_elem("1", 3), 3).coords[1:] == (LaurentElem.zero(TowerSpec(3)),) * 2
    assert teichmuller(ring_elem("1 + t", 2), 2) == WittVec(t2, [ring_elem("1 + t", 2), ring_elem("0", 2)])


def test_length_mismatch():
    t = TowerSpec(3)
    with pytest.raises(LengthMismatch):
        WittVec.zero(t, 1) + WittVec.zero(t, 2)


@pytest.mark.parametrize("p", [3, 5])
def test_fv_is_p_and_projection(p):
    t = TowerSpec(p)
    rng = random.Random(p)
    for _ in range(10):
        x = WittVec(t, [ring_elem(f"t^{rng.randint(-5, 5)} + {rng.randint(1, p - 1)}", p) for _ in range(2)])
        y = WittVec(t, [ring_elem(f"t^{rng.randint(-5, 5)}", p) for _ in range(1)])
        assert x.V().F() == x * WittVec.from_int(t, p, 2)
        # x V(y) = V(F(x) y)
        assert x * y.V() == (x.F() * y).V()


def test_to_json_roundtrip():
    t = TowerSpec(5, 2, 2)
    x = WittVec(t, [ring_elem("g*u^-1*t^-2 + 3", 5, 2, 2), ring_elem("t", 5, 2, 2)])
    assert WittVec.from_json(t, x.to_json()) == x
