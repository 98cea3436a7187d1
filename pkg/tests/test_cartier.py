from __future__ import annotations

import random

import pytest

from drwitt import cartier as ca
from drwitt.errors import CapExceeded, NotInZ1
from drwitt.filtration import fil_level
from drwitt.laurent import TowerSpec
from drwitt.sampling import random_form

from conftest import ev


@pytest.mark.parametrize("p,m", [(2, 1), (3, 2), (5, 3)])
def test_z1_examples(p, m):
    assert ca.is_Z1(ev("dlog(t)", p, m=m))
    assert not ca.is_Z1(ev("T(t)", p, m=m))
    assert ca.is_Z1(ev(f"T(t^{p})", p, m=m))
    assert ca.is_Z1(ev("T(t^-2)*dlog(t)", p, m=m), fil_bound=None) == ca.is_Z1(ev("T(t^-2)*dlog(t)", p, m=m))


def test_z1_with_fil_bound():
    x = ev("T(t^-3)", 3, m=1)
    assert ca.is_Z1(x, 3) and not ca.is_Z1(x, 2)


def test_f_image_examples():
    ok, wit = ca.is_F_image(ev("T(t^2)", 2), 1)
    assert ok and wit == ev("T(t)", 2, m=2)
    assert wit.F() == ev("T(t^2)", 2)
    assert not ca.is_F_image(ev("T(t)", 2), 1)[0]
    assert not ca.is_F_image(ev("T(u*t^-3)*dlog(u)", 2, depth=2), 1)[0]


def test_cartier_examples():
    rng = random.Random(4)
    for p in (3, 5):
        tower = TowerSpec(p, 1, 2)
        for m in (1, 2):
            for q in range(3):
                a = random_form(rng, tower, m + 1, q, -8, 8)
                assert ca.cartier_C(a.F()) == a.R()
                assert ca.one_minus_C(a.F()) == a.F() - a.R()
                if q >= 1:
                    b = random_form(rng, tower, 1, q - 1, -8, 8)
                    assert not ca.cartier_C(b.Vn(m - 1).d())
    for p in (2, 3):
        x = ev("T(t^-1 + t^2)", p)
        assert ca.cartier_C(ev(f"T((t^-1 + t^2)^{p})*dlog(t)", p)) == x * ev("dlog(t)", p)
    assert not ca.one_minus_C(ev("dlog(t)", 3, m=2))


def test_cartier_rejects_non_closed():
    with pytest.raises(NotInZ1):
        ca.cartier_C(ev("T(t)", 3, m=2))


def test_sections_agree():
    rng = random.Random(8)
    tower = TowerSpec(3, 2, 1)
    for _ in range(20):
        x = random_form(rng, tower, 3, rng.randint(0, 1), -8, 8).F()
        outs = {name: ca.cartier_C(x, name) for name in ca.SECTIONS}
        assert len(set(outs.values())) == 1


def test_cartier_respects_filtration():
    rng = random.Random(11)
    for p in (3, 5):
        tower = TowerSpec(p, 1, 1)
        for _ in range(30):
            x = random_form(rng, tower, 3, rng.randint(0, 1), -12, 12).F()
            if not x:
                continue
            n = max(0, fil_level(x))
            assert fil_level(ca.cartier_C(x)) <= n // p
            assert (fil_level(x) <= n) == (fil_level(ca.one_minus_C(x)) <= n)


def test_vr3_witness():
    rng = random.Random(12)
    tower = TowerSpec(3, 1, 1)
    for _ in range(15):
        w = random_form(rng, tower, 2, 0, -9, 9)
        x = ca.vr3_witness(w)
        z = x.d().F()
        assert ca.is_Z1(z, max(0, fil_level(w)))
        assert w.d() == ca.one_minus_C(z)


def test_zb_examples():
    for i in (1, 2, 3):
        flags = ca.zb_group_test(ev("dlog(t)", 3), i)
        assert flags.in_Z
    flags = ca.zb_group_test(ev("d(T(t^-1))", 3), 1)
    assert flags.in_B and flags.in_Z
    flags = ca.zb_group_test(ev("T(t^-1)*dlog(t)", 3), 1)
    assert flags.in_Z == ca.is_Z1(ev("T(t^-1)*dlog(t)", 3))
    with pytest.raises(CapExceeded):
        ca.zb_group_test(ev("dlog(t)", 3), 4)


def test_zb_monotone_on_samples():
    rng = random.Random(13)
    tower = TowerSpec(3, 1, 1)
    for _ in range(20):
        x = random_form(rng, tower, 3, 1, -9, 9).Fn(2)
        flags = [ca.zb_group_test(x, i) for i in (1, 2, 3)]
        for lo, hi in zip(flags, flags[1:]):
            assert not (hi.in_Z and not lo.in_Z)
            assert not (lo.in_B and not hi.in_B)
        for f in flags:
            assert not (f.in_B and not f.in_Z)
