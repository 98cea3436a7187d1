from __future__ import annotations

import itertools

import pytest

from drwitt.errors import NotAUnit
from drwitt.field import GaloisRing, compute_conway, conway_polynomial, galois_ring
from drwitt.laurent import LaurentElem, TowerSpec

from conftest import ring_elem


def test_galois_ring_modulus_is_irreducible_mod_p():
    for p, r in [(2, 2), (3, 2), (5, 2), (2, 3), (3, 3)]:
        f = conway_polynomial(p, r)
        assert len(f) == r + 1
        ring = GaloisRing(p, r)
        # a degree-r polynomial is irreducible iff F_{p^r} has no zero divisors: brute force
        elems = [e for e in ring.elements() if any(e)]
        for a in elems[:40]:
            for b in elems[:40]:
                assert any(ring.mul(a, b, 1))


def test_conway_table_matches_computation():
    for p, r in [(2, 2), (3, 2), (5, 2), (7, 2), (2, 4)]:
        assert compute_conway(p, r) == conway_polynomial(p, r)


def test_sigma_is_frobenius_on_residue_field():
    ring = galois_ring(3, 2)
    for a in ring.elements():
        assert ring.sigma(a, 1, 1) == ring.pow(a, 3, 1)


def test_sigma_is_ring_automorphism_mod_p_power():
    ring = galois_ring(5, 2)
    g = ring.gen()
    x, y = ring.add(g, ring.from_int(7)), ring.mul(g, ring.from_int(11))
    k = 3
    assert ring.sigma(ring.mul(x, y, k), 1, k) == ring.mul(ring.sigma(x, 1, k), ring.sigma(y, 1, k), k)
    assert ring.sigma(ring.sigma(x, 1, k), 1, k) == ring.reduce(x, k)


def test_teichmuller_is_multiplicative():
    ring = galois_ring(3, 2)
    g = ring.gen()
    a, b = ring.teich(g, 3), ring.teich(ring.add(g, ring.one), 3)
    ab = ring.teich(ring.mul(g, ring.add(g, ring.one), 1), 3)
    assert ring.mul(a, b, 3) == ab


def test_laurent_examples():
    assert ring_elem("t + 1", 2) + ring_elem("t", 2) == ring_elem("1", 2)
    assert ring_elem("t^-1", 3) * ring_elem("t", 3) == ring_elem("1", 3)
    assert ring_elem("u*t^-1", 3, depth=2) ** 2 == ring_elem("u^2*t^-2", 3, depth=2)


def test_frobenius_root():
    assert ring_elem("t^2", 2).frobenius_root() == ring_elem("t", 2)
    assert ring_elem("u*t^2", 2, depth=2).frobenius_root() is None
    assert ring_elem("g^3*t^3", 3, r=2).frobenius_root() == ring_elem("g*t", 3, r=2)


def test_valuation():
    assert ring_elem("t^-3 + t", 3).valuation() == -3
    assert LaurentElem.zero(TowerSpec(3)).valuation() == float("inf")
    assert ring_elem("u + t^2", 3, depth=2).valuation() == 0


def test_frobenius_root_brute_force_f9():
    tower = TowerSpec(3, 2, 1)
    ring = tower.ring
    for c in ring.elements():
        x = LaurentElem.monomial(tower, (3,), c)
        root = x.frobenius_root()
        assert root is not None and root.frobenius() == x


def test_inverse_of_non_monomial_needs_precision():
    x = ring_elem("1 + t", 3)
    inv = x.inverse(prec=10)
    assert (x * inv).truncate(10) == ring_elem("1", 3)
    with pytest.raises(NotAUnit):
        LaurentElem.zero(TowerSpec(3)).inverse(prec=4)


def test_tower_validation():
    with pytest.raises(ValueError):
        TowerSpec(4)
    with pytest.raises(ValueError):
        TowerSpec(3, 1, 3)
    assert list(itertools.islice(TowerSpec(3, 1, 2).var_names, 2)) == ["u", "t"]
