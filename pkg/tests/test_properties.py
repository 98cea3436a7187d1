"""Algebraic invariants under hypothesis-generated forms."""

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from drwitt.cartier import cartier_C, is_Z1
from drwitt.derham import de_rham_m1_oracle
from drwitt.filtration import fil_level, fil_level_witt
from drwitt.forms import DrwForm, dlog, from_witt, teich_form, to_witt
from drwitt.laurent import LaurentElem, TowerSpec
from drwitt.witt import WittVec

TOWERS = [TowerSpec(3, 1, 1), TowerSpec(5, 1, 1), TowerSpec(3, 2, 2), TowerSpec(5, 1, 2)]

settings.register_profile("drwitt", max_examples=60, deadline=None)
settings.load_profile("drwitt")


@st.composite
def laurent(draw, tower, nonzero=False):
    n = draw(st.integers(1 if nonzero else 0, 2))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(-6, 6)) for _ in range(tower.depth))
        c = tuple(draw(st.integers(0, tower.p - 1)) for _ in range(tower.r))
        if not any(c):
            c = (1,) + c[1:]
        terms[e] = c
    return LaurentElem(tower, terms)


@st.composite
def generator(draw, tower, m, q):
    """V^j([x] w_1 ... w_q) or d V^j(...), each w a dlog of a variable or d of a Teichmuller."""
    use_d = q >= 1 and draw(st.booleans())
    inner_q = q - 1 if use_d else q
    j = draw(st.integers(0, m - 1))
    length = m - j
    g = teich_form(draw(laurent(tower, nonzero=True)), length)
    for _ in range(inner_q):
        if draw(st.booleans()):
            var = tower.var_names[draw(st.integers(0, tower.depth - 1))]
            g = g * dlog(LaurentElem.var(tower, var), length)
        else:
            g = g * teich_form(draw(laurent(tower, nonzero=True)), length).d()
    g = g.Vn(j)
    return g.d() if use_d else g


@st.composite
def forms(draw, tower, m, q):
    acc = DrwForm.zero(tower, m, q)
    for _ in range(draw(st.integers(0, 2))):
        acc = acc + draw(generator(tower, m, q))
    return acc


@st.composite
def setting(draw, max_m=3):
    tower = draw(st.sampled_from(TOWERS))
    m = draw(st.integers(1, max_m))
    return tower, m


@st.composite
def pair(draw, same_degree=True):
    tower, m = draw(setting())
    q1 = draw(st.integers(0, tower.depth))
    q2 = q1 if same_degree else draw(st.integers(0, tower.depth - q1))
    return draw(forms(tower, m, q1)), draw(forms(tower, m, q2))


@st.composite
def triple(draw):
    tower, m = draw(setting(max_m=2))
    qs = [draw(st.integers(0, 1)) for _ in range(3)]
    if sum(qs) > tower.depth:
        qs = [0, 0, min(1, tower.depth)]
    return tuple(draw(forms(tower, m, q)) for q in qs)


@given(pair())
def test_addition_is_commutative_group(xy):
    x, y = xy
    assert x + y == y + x
    assert (x + y) - y == x
    assert not (x - x)


@given(pair(same_degree=False))
def test_graded_commutativity(xy):
    x, y = xy
    sign = -1 if (x.q * y.q) % 2 else 1
    assert x * y == (y * x).scale(sign)


@given(triple())
def test_associativity_and_distributivity(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    if y.q == z.q:
        assert x * (y + z) == x * y + x * z


@given(pair(same_degree=False))
def test_leibniz(xy):
    x, y = xy
    if x.q + y.q + 1 > x.tower.depth:
        return
    sign = -1 if x.q % 2 else 1
    assert (x * y).d() == x.d() * y + (x * y.d()).scale(sign)


@given(st.data())
def test_dd_zero_and_FV_identities(data):
    tower, m = data.draw(setting())
    q = data.draw(st.integers(0, tower.depth))
    x = data.draw(forms(tower, m, q))
    assert not x.d().d()
    assert x.V().F() == x.scale(tower.p)
    if q < tower.depth:
        assert x.V().d().F() == x.d()
        assert x.d().V() == x.V().d().scale(tower.p)
    if m >= 2:
        assert x.F().R() == x.R().F()


@given(st.data())
def test_R_and_F_are_multiplicative(data):
    tower, m = data.draw(setting())
    m = max(m, 2)
    x = data.draw(forms(tower, m, 0))
    y = data.draw(forms(tower, m, data.draw(st.integers(0, tower.depth))))
    assert (x * y).R() == x.R() * y.R()
    assert (x * y).F() == x.F() * y.F()
    if y.q < tower.depth:
        assert y.F().d() == y.d().F().scale(tower.p)


@given(st.data())
def test_witt_intertwining(data):
    tower, m = data.draw(setting())
    a = WittVec(tower, [data.draw(laurent(tower)) for _ in range(m)])
    b = WittVec(tower, [data.draw(laurent(tower)) for _ in range(m)])
    assert from_witt(a + b) == from_witt(a) + from_witt(b)
    assert from_witt(a * b) == from_witt(a) * from_witt(b)
    assert to_witt(from_witt(a)) == a
    if not a.is_zero():
        assert fil_level(from_witt(a)) == fil_level_witt(a)


@given(st.data())
def test_m1_oracle_homomorphism(data):
    tower = data.draw(st.sampled_from(TOWERS))
    q1 = data.draw(st.integers(0, tower.depth))
    x = data.draw(forms(tower, 1, q1))
    y = data.draw(forms(tower, 1, data.draw(st.integers(0, tower.depth - q1))))
    assert de_rham_m1_oracle(x * y) == de_rham_m1_oracle(x).wedge(de_rham_m1_oracle(y))
    if q1 < tower.depth:
        assert de_rham_m1_oracle(x.d()) == de_rham_m1_oracle(x).d()


@given(st.data())
def test_filtration_invariants(data):
    tower, m = data.draw(setting())
    q = data.draw(st.integers(0, tower.depth))
    x = data.draw(forms(tower, m, q))
    y = data.draw(forms(tower, m, 0))
    if not x:
        return
    if x * y:
        assert fil_level(x * y) <= fil_level(x) + fil_level(y)
    if q < tower.depth and x.d():
        assert fil_level(x.d()) <= fil_level(x)
    if x.V():
        assert fil_level(x.V()) <= fil_level(x)


@given(st.data())
def test_cartier_inverts_frobenius(data):
    tower, m = data.draw(setting(max_m=2))
    q = data.draw(st.integers(0, tower.depth))
    a = data.draw(forms(tower, m + 1, q))
    w = a.F()
    assert is_Z1(w)
    assert cartier_C(w) == a.R()
    assert DrwForm.from_json(tower, w.to_json()) == w
