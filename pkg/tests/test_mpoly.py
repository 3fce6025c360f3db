import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ellmould.exact import Q
from ellmould.mpoly import (
    MPoly, NotDivisible, RatComponent, canonical_form, delta_forms, delta_v_forms, divide_exact, pack, poly_str,
    rat_str, rat_sum, unpack,
)
from oracles import syms

coef = st.integers(-3, 3)


def polys(arity, max_deg=3):
    exps = st.lists(st.integers(0, max_deg), min_size=arity, max_size=arity).map(tuple)
    return st.dictionaries(exps, coef, max_size=5).map(lambda t: MPoly(arity, t))


def sym(p: MPoly):
    xs = syms(p.arity)
    out = sympy.Integer(0)
    for e, c in p.items():
        t = sympy.Rational(int(c.numerator), int(c.denominator))
        for x, k in zip(xs, e):
            t *= x ** k
        out += t
    return sympy.expand(out)


def test_pack_round_trip():
    assert unpack(pack((3, 0, 7)), 3) == (3, 0, 7)


def test_printing():
    u1, u2 = MPoly.var(0, 2), MPoly.var(1, 2)
    assert poly_str((u1 + u2) ** 2) == "u1^2 + 2*u1*u2 + u2^2"
    assert poly_str(u1 - u2, "v") == "v1 - v2"


@given(polys(2), polys(2))
@settings(max_examples=50, deadline=None)
def test_ring_operations_match_sympy(p, q):
    assert sym(p * q) == sympy.expand(sym(p) * sym(q))
    assert sym(p + q) == sympy.expand(sym(p) + sym(q))
    assert sym(p - q) == sympy.expand(sym(p) - sym(q))


@given(polys(3, 2), st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_linear_substitution_matches_sympy(p, images):
    xs, ys = syms(3), syms(2)
    lin = [sum(c * y for c, y in zip(img, ys)) for img in images]
    expect = sympy.expand(sym(p).subs(dict(zip(xs, lin)), simultaneous=True))
    assert sym(p.substitute_linear(images, 2)) == expect


@given(polys(2, 2), st.lists(st.integers(-2, 2), min_size=2, max_size=2).filter(any))
@settings(max_examples=40, deadline=None)
def test_divide_exact_inverts_multiplication(p, form):
    prod = p * MPoly.linear(form)
    assert divide_exact(prod, form) == p


def test_divide_exact_failure():
    with pytest.raises(NotDivisible):
        divide_exact(MPoly.monomial((2, 0)), [1, 1])


def test_canonical_form():
    c, f = canonical_form([-2, 4])
    assert f == (1, -2) and c == -2


def test_rational_components_normalize():
    u1 = MPoly.var(0, 2)
    x = RatComponent(MPoly.monomial((3, 0)), [((1, 0), 2)])
    assert x.is_polynomial() and x.num == u1
    s = RatComponent(MPoly.const(1, 2), [((1, 0), 1)]) + RatComponent(MPoly.const(1, 2), [((0, 1), 1)])
    assert rat_str(s) == "(u1 + u2)/(u2*u1)"
    y = RatComponent(MPoly(2, {(2, 0): 1, (0, 2): -1}), [((2, 2), 1)])
    assert y == RatComponent.poly(MPoly(2, {(1, 0): Q(1, 2), (0, 1): Q(-1, 2)}))


def test_rat_sum_cancels():
    one = RatComponent(MPoly.const(1, 2), [((1, -1), 1)])
    two = RatComponent(MPoly.const(1, 2), [((-1, 1), 1)])
    assert rat_sum([one, two], 2).is_zero()
    assert rat_sum([], 3).arity == 3


def test_json_round_trip():
    x = RatComponent(MPoly(2, {(1, 1): Q(2, 3)}), [((1, 1), 2), ((1, 0), 1)])
    assert RatComponent.from_json(x.to_json()) == x
    p = MPoly(3, {(1, 0, 2): -4})
    assert MPoly.from_json(p.to_json()) == p


def test_delta_forms():
    assert delta_forms(2) == [[1, 0], [0, 1], [1, 1]]
    assert delta_v_forms(2) == [[1, 0], [1, -1], [0, 1]]


@given(polys(2, 2), polys(2, 2))
@settings(max_examples=30, deadline=None)
def test_rational_equality_by_cross_multiplication(p, q):
    x = RatComponent(p, [((1, 1), 1)])
    y = RatComponent(p * MPoly.linear([1, -1]), [((1, 1), 1), ((1, -1), 1)])
    assert x == y
    if q != p:
        assert x != RatComponent(q, [((1, 1), 1)])
