import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ellmould.exact import Q
from ellmould.mould import (
    KindMismatch, Mould, U, V, arit, arit_u, arit_v, boundary_identity_holds, check_boundary_identity,
    check_lemma_A2, is_alternal, is_bialternal, is_push_invariant, lyndon_ari_span, make_U, mould_ari,
    mould_lu, mould_mu, mould_push, mould_swap, random_mould, render, reversal_holds, shuffles,
    singularity_report, unit_mould,
)
from ellmould.mpoly import MPoly, RatComponent
from oracles import SymMould, ari_seq, arit_seq, same, syms, to_expr

u1, u2 = sympy.symbols("u1 u2")


def poly_mould(kind, r, terms, bound=None):
    return Mould(kind, {r: MPoly(r, terms)}, 0, bound)


def test_make_U():
    assert to_expr(make_U(0), 1) == 1
    assert to_expr(make_U(2), 1) == u1 ** 2
    assert same(to_expr(make_U(-2), 1), 1 / u1 ** 2)
    with pytest.raises(ValueError):
        make_U(3)
    with pytest.raises(ValueError):
        make_U(-4)


def test_mu_with_unit():
    x = mould_ari(make_U(2), make_U(4)) + make_U(2)
    assert mould_mu(x, unit_mould()) == x
    assert mould_mu(unit_mould(), x) == x


def test_mu_depth_one():
    m = mould_mu(make_U(2), make_U(4))
    assert same(to_expr(m, 2), u1 ** 2 * u2 ** 4)


def test_lu_examples():
    assert same(to_expr(mould_lu(make_U(0), make_U(2)), 2), u2 ** 2 - u1 ** 2)
    x = make_U(4)
    assert mould_lu(x, x).is_zero()


def test_arit_depth_one_formula():
    m = arit_u(make_U(2), make_U(2))
    assert same(to_expr(m, 2), (u1 + u2) ** 2 * (u1 ** 2 - u2 ** 2))
    assert m.comp(1) is None


def test_arit_v_depth_one_formula():
    v1, v2 = sympy.symbols("u1 u2")  # oracle symbols are named u regardless of kind
    a = Mould(V, {1: MPoly.monomial((3,))})
    bm = Mould(V, {1: MPoly.monomial((1,))})
    m = arit_v(bm, a)
    assert same(to_expr(m, 2), v2 ** 3 * (v1 - v2) - v1 ** 3 * (v2 - v1))


def test_ari_examples():
    assert mould_ari(make_U(0), make_U(2)).is_zero()
    x = mould_ari(make_U(2), make_U(4))
    delta = u1 * u2 * (u1 + u2)
    assert same(to_expr(x, 2), -delta * (u1 - u2) * (2 * (u1 + u2) ** 2 + u1 * u2))
    assert mould_ari(x, x).is_zero()


def test_ari_needs_zero_empty_value():
    with pytest.raises(ValueError):
        mould_ari(unit_mould(), make_U(2))


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        mould_ari(make_U(2), mould_swap(make_U(4)))
    with pytest.raises(KindMismatch):
        mould_push(mould_swap(make_U(2)))


def test_swap_example():
    m = poly_mould(U, 2, {(1, 2): 1})
    s = mould_swap(m)
    assert s.kind == V
    assert same(to_expr(s, 2), u2 * (u1 - u2) ** 2)
    assert mould_swap(s) == m


def test_push_depth_one_and_order():
    m = poly_mould(U, 1, {(3,): 1, (2,): 1})
    assert same(to_expr(mould_push(m), 1), -u1 ** 3 + u1 ** 2)
    rng = random.Random(1)
    x = random_mould(rng, 4, 3)
    for r in range(1, 5):
        y = Mould(U, {r: x[r]})
        z = y
        for _ in range(r + 1):
            z = mould_push(z)
        assert z == y


def test_alternality_examples():
    assert is_alternal(make_U(6))
    assert not is_alternal(poly_mould(U, 2, {(1, 1): 1}))
    assert is_bialternal(make_U(4))
    assert is_bialternal(mould_ari(make_U(2), make_U(4)))
    assert not is_bialternal(poly_mould(U, 2, {(1, 1): 1}))


def test_shuffles_count():
    assert len(shuffles(2, 4)) == 6
    assert shuffles(1, 2) == [(0, 1), (1, 0)]


def test_singularity_report_examples():
    assert singularity_report(make_U(-2)).numerators[1] == MPoly.const(1, 1)
    rep = singularity_report(mould_ari(make_U(2), make_U(4)))
    assert rep.flags == {2: True}
    core = -(MPoly.linear([1, -1]) * (MPoly.linear([1, 1]) ** 2 * MPoly.const(2, 2) + MPoly.monomial((1, 1))))
    delta = MPoly.monomial((1, 1)) * MPoly.linear([1, 1])
    assert rep.numerators[2] == core * delta * delta
    quotient = RatComponent(mould_ari(make_U(2), make_U(4))[2].num, [((1, 0), 1), ((0, 1), 1), ((1, 1), 1)])
    assert quotient == RatComponent.poly(core)
    bad = Mould(U, {1: RatComponent(MPoly.const(1, 1), [((1,), 3)])})
    assert singularity_report(bad).flags == {1: False}
    assert singularity_report(bad).to_json()["ok"] is False


def test_boundary_identity_examples():
    m = mould_swap(mould_ari(make_U(2), make_U(4)))
    assert check_boundary_identity(m)
    assert check_lemma_A2 is check_boundary_identity
    assert boundary_identity_holds(MPoly.const(1, 2))
    assert not boundary_identity_holds(MPoly.var(0, 2))
    with pytest.raises(ValueError):
        check_boundary_identity(Mould(V, {2: RatComponent(MPoly.var(0, 2), [((1, 0), 1), ((1, -1), 1), ((0, 1), 1)])}))


def test_json_round_trip_and_render():
    x = mould_ari(make_U(-2), make_U(4))
    assert Mould.from_json(x.to_json()) == x
    assert x.to_json()["components"].keys() == {"2"}
    assert render(make_U(-2)) == "depth 1: 1/Delta_1"
    assert "Delta_2*(" in render(mould_ari(make_U(2), make_U(4)))


def test_depth_bound_truncates():
    rng = random.Random(2)
    x, y = random_mould(rng, 4), random_mould(rng, 3)
    z = mould_ari(x, y)
    assert z.depth_bound == 3
    assert z.max_depth() <= 3


# properties ---------------------------------------------------------------------

seeds = st.integers(0, 2**32)


@given(seeds)
@settings(max_examples=8, deadline=None)
def test_arit_matches_sequence_oracle(seed):
    rng = random.Random(seed)
    a, b = random_mould(rng, 3, 2), random_mould(rng, 3, 2)
    got = arit(b, a)
    sa, sb = SymMould.from_mould(a), SymMould.from_mould(b)
    for r in (2, 3):
        assert same(to_expr(got, r), arit_seq(sb, sa, r))


@given(seeds)
@settings(max_examples=6, deadline=None)
def test_ari_of_singular_moulds_matches_oracle(seed):
    rng = random.Random(seed)
    gens = [make_U(n) for n in (-2, 2, 4, 6)]
    x = rng.choice(gens)
    y = mould_ari(rng.choice(gens), rng.choice(gens))
    got = mould_ari(x, y)
    sx, sy = SymMould.from_mould(x), SymMould.from_mould(y)
    assert same(to_expr(got, 3), ari_seq(sx, sy, 3))


@given(seeds)
@settings(max_examples=5, deadline=None)
def test_ari_jacobi(seed):
    rng = random.Random(seed)
    a, b, c = (random_mould(rng, 4, 1) for _ in range(3))
    jac = mould_ari(a, mould_ari(b, c)) + mould_ari(b, mould_ari(c, a)) + mould_ari(c, mould_ari(a, b))
    assert jac.is_zero()


@given(seeds)
@settings(max_examples=8, deadline=None)
def test_ari_bilinear_antisymmetric(seed):
    rng = random.Random(seed)
    a, b, c = (random_mould(rng, 3, 2) for _ in range(3))
    assert mould_ari(a, b) == -mould_ari(b, a)
    assert mould_ari(a.scale(3) + c, b) == mould_ari(a, b).scale(3) + mould_ari(c, b)


@given(seeds)
@settings(max_examples=5, deadline=None)
def test_arit_commutator(seed):
    rng = random.Random(seed)
    a, b, c = (random_mould(rng, 4, 2) for _ in range(3))
    assert arit(b, arit(a, c)) - arit(a, arit(b, c)) == arit(mould_ari(a, b), c)


def _alternal_samples(rng):
    from ellmould.bridge import ma
    from ellmould.ncalg import random_lie
    n = rng.randint(2, 6)
    d = rng.randint(1, min(2, n - 1))
    return ma(random_lie(rng, n, d))


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_ari_preserves_alternality(seed):
    rng = random.Random(seed)
    a, b = _alternal_samples(rng), _alternal_samples(rng)
    assert is_alternal(a) and is_alternal(b)
    assert is_alternal(mould_ari(a, b))


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_alternal_reversal(seed):
    rng = random.Random(seed)
    a, b = _alternal_samples(rng), _alternal_samples(rng)
    assert reversal_holds(mould_ari(a, b))
    assert reversal_holds(a)


def test_reversal_fails_for_non_alternal():
    assert not reversal_holds(poly_mould(U, 2, {(2, 0): 1}))


def _u_elements():
    g = [make_U(n) for n in (-2, 2, 4, 6)]
    return g + [mould_ari(g[1], g[2]), mould_ari(g[0], g[2]), mould_ari(g[0], g[3])]


def test_swap_equivariance_on_push_invariant_elements():
    elems = _u_elements()
    for i, x in enumerate(elems):
        assert is_push_invariant(x)
        for y in elems[i + 1:]:
            if x.max_depth() + y.max_depth() <= 3:
                assert mould_ari(mould_swap(x), mould_swap(y)) == mould_swap(mould_ari(x, y))


def test_singular_closure_depth3():
    span = lyndon_ari_span([make_U(n) for n in (-2, 2, 4, 6, 8)], 3)
    assert len(span) == 5 + 10 + 40
    for m in span.values():
        assert singularity_report(m).ok
        assert is_bialternal(m)
