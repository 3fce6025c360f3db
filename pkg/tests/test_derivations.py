import random

import pytest
from hypothesis import given, settings, strategies as st

from ellmould.derivations import (
    Derivation, NoFactor, NotMember, NotPushInvariant, apply, der_bracket, factor_ad_a, h_terms,
    is_highest_weight, kills_ab, make_eps, make_h, make_phi0, poisson, poisson_derivation, recover_partner,
    theta3_membership, theta3_spanning_set,
)
from ellmould.exact import Q
from ellmould.ncalg import C, NcPoly, is_lie, lie_bracket, random_lie

a, b = NcPoly.parse("a"), NcPoly.parse("b")


@pytest.mark.parametrize("i", range(9))
def test_eps_kill_ab(i):
    e = make_eps(2 * i)
    assert kills_ab(e)
    assert is_lie(e.val_a) and (i == 0 or is_lie(e.val_b))


def test_eps_values():
    assert make_eps(0).val_a == b
    assert make_eps(2).val_a == C(3)
    assert make_eps(2).val_b == lie_bracket(b, lie_bracket(a, b))
    with pytest.raises(ValueError):
        make_eps(3)


def test_eps2_commutes():
    e2 = make_eps(2)
    for n in (0, 4, 6, 8):
        assert der_bracket(e2, make_eps(n)).is_zero()


def test_phi0_kills_ab_and_sl2_flag():
    phi = make_phi0()
    assert kills_ab(phi)
    assert phi.sl2
    assert der_bracket(phi, make_eps(4)).sl2


def test_derivation_json_round_trip():
    d = der_bracket(make_eps(4), make_eps(6))
    assert Derivation.from_json(d.to_json()) == d
    assert d.weight == 10


def test_inhomogeneous_images_rejected():
    with pytest.raises(ValueError):
        Derivation(NcPoly.parse("ab + aab"), NcPoly.zero(), 1)


def test_h_terms_coefficients():
    assert h_terms(2, 8, 2) == [(1, 0, 0)]
    assert h_terms(2, 10, 3) == [(Q(1, 10), 0, 1), (Q(-1, 2), 1, 0)]


def test_h_domain():
    with pytest.raises(ValueError):
        make_h(3, 8, 2)
    with pytest.raises(ValueError):
        make_h(2, 8, 1)


@pytest.mark.parametrize("p,q,d", [(2, 8, 2), (4, 6, 2), (2, 10, 3), (4, 8, 3), (6, 6, 3)])
def test_h_is_highest_weight(p, q, d):
    assert is_highest_weight(make_h(p, q, d).derivation)


def test_eps0_not_highest_weight():
    assert not is_highest_weight(make_eps(0))


@pytest.mark.parametrize("p,q,d", [(2, 4, 2), (2, 6, 3), (4, 6, 2), (2, 8, 3), (2, 4, 4)])
def test_h_parity_symmetry(p, q, d):
    assert make_h(q, p, d).derivation == make_h(p, q, d).derivation.scale((-1) ** (d + 1))


def test_h_equal_indices_even_depth_vanish():
    assert make_h(4, 4, 2).derivation.is_zero()
    assert make_h(6, 6, 2).derivation.is_zero()
    assert not make_h(6, 6, 3).derivation.is_zero()


def test_recover_partner():
    assert recover_partner(C(3)) == lie_bracket(b, lie_bracket(a, b))
    for n in (4, 6, 8):
        e = make_eps(n)
        assert recover_partner(e.val_a) == e.val_b
    with pytest.raises(NotPushInvariant):
        recover_partner(lie_bracket(C(1), C(2)) + C(3))


def test_factor_ad_a():
    assert factor_ad_a(C(3)) == C(2)
    with pytest.raises(NoFactor):
        factor_ad_a(lie_bracket(C(1), C(2)))


@given(st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_factor_ad_a_inverts_bracket(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    q = random_lie(rng, n, rng.randint(1, min(3, n - 1)))
    assert factor_ad_a(lie_bracket(a, q)) == q


def test_theta3_spanning_set_labels():
    assert [lab for lab, _ in theta3_spanning_set(7)] == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def test_theta3_membership_round_trip():
    p = lie_bracket(C(3), lie_bracket(C(2), C(4))).scale(2) - lie_bracket(C(2), lie_bracket(C(3), C(3)))
    cert = theta3_membership(p)
    assert cert.recombine() == p
    assert cert.to_json()["degree"] == 9


def test_theta3_non_member():
    with pytest.raises(NotMember):
        theta3_membership(lie_bracket(C(1), lie_bracket(C(1), C(5))))


@given(st.integers(0, 2**32))
@settings(max_examples=15, deadline=None)
def test_poisson_matches_derivation_bracket(seed):
    rng = random.Random(seed)
    p = random_lie(rng, rng.randint(2, 4), 1)
    q = random_lie(rng, rng.randint(2, 4), rng.randint(1, 2))
    lhs = der_bracket(poisson_derivation(p), poisson_derivation(q))
    assert lhs.val_b == poisson_derivation(poisson(p, q)).val_b
    assert poisson(p, q) == -poisson(q, p)


@given(st.integers(0, 2**32))
@settings(max_examples=10, deadline=None)
def test_derivations_respect_brackets(seed):
    rng = random.Random(seed)
    d = make_eps(2 * rng.randint(1, 4))
    x = random_lie(rng, rng.randint(2, 4), 1)
    y = random_lie(rng, rng.randint(2, 4), 2) if rng.random() < .5 else b
    assert apply(d, lie_bracket(x, y)) == lie_bracket(apply(d, x), y) + lie_bracket(x, apply(d, y))
