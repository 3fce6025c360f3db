import json

import pytest
from gmpy2 import mpq
from sympy import Rational

from ellmould.bridge import psi
from ellmould.derivations import make_eps, make_h
from ellmould.mould import Mould, U, is_bialternal, make_U, mould_ari
from ellmould.mpoly import MPoly
from ellmould.relations import (
    NoLift, bialternal_space, compare_bracket_combination, express_in_family, goncharov_span_check, h_labels,
    lift_relation, mould_rank, relation_kernel, solve_lift, span_check, triple_labels, u_family_depth2,
    u_family_depth3,
)
from ellmould.suites import PUBLISHED_LIFT, PUBLISHED_LIFT_EPS4
from oracles import cusp_dimension, nullity


def ints(vec):
    return [int(x) for x in vec]


def test_h_labels():
    assert h_labels(16) == [(2, 10), (4, 8), (6, 6)]
    assert h_labels(8) == [(2, 2)]
    assert h_labels(6) == []


@pytest.mark.parametrize("n,d,expected", [
    (14, 2, [[1, -3]]),
    (12, 2, []),
    (16, 3, [[4, -25, 21]]),
    (18, 2, [[2, -7, 11]]),
    (16, 2, []),
    (12, 3, []),
    (14, 3, []),
])
def test_known_kernels(n, d, expected):
    cert = relation_kernel(n, d)
    assert [ints(v) for v in cert.kernel] == expected
    assert cert.verify()


def test_weight20_depth2_has_a_zero_column():
    cert = relation_kernel(20, 2)
    assert (8, 8) in cert.zero_labels
    assert [ints(v) for v in cert.kernel] == [[8, -25, 26, 0]]


@pytest.mark.parametrize("n", range(8, 23, 2))
def test_depth2_kernel_dimension_is_cusp_dimension(n):
    assert len(relation_kernel(n, 2).kernel) == cusp_dimension(n - 2)


@pytest.mark.parametrize("n", range(10, 19, 2))
def test_depth3_kernel_dimension_is_cusp_dimension(n):
    assert len(relation_kernel(n, 3).kernel) == cusp_dimension(n - 4)


def test_depth2_kernel_rank_independently():
    # nullity of the live h columns computed with sympy
    for n in (14, 18, 20):
        cert = relation_kernel(n, 2)
        live = [l for l in cert.labels if l not in cert.zero_labels]
        polys = [make_h(p, q, 2).derivation.val_a for p, q in live]
        words = sorted({w for p in polys for w in p.terms})
        rows = [[Rational(int(mpq(p.terms.get(w, 0)).numerator), int(mpq(p.terms.get(w, 0)).denominator))
                 for p in polys] for w in words]
        assert nullity(rows) == len(cert.kernel)


def test_relations_are_highest_weight():
    for n, d in [(14, 2), (16, 3), (18, 2)]:
        assert all(relation_kernel(n, d).highest_weight)


def test_h_parity_makes_half_the_columns_redundant():
    for p, q in [(2, 10), (4, 8)]:
        for d in (2, 3):
            sign = (-1) ** (d + 1)
            assert make_h(q, p, d).derivation == make_h(p, q, d).derivation.scale(sign)


def test_certificate_json():
    cert = relation_kernel(16, 3)
    lift_relation(cert)
    j = cert.to_json()
    assert j["kernel"] == [["4", "-25", "21"]]
    assert j["lift_free_dimension"] == 4
    assert {tuple(t["triple"]): t["coeff"] for t in j["lift"]} == {(4, 4, 8): "-231/20", (6, 4, 6): "345/8"}
    json.dumps(j)


def test_weight16_lift():
    cert = relation_kernel(16, 3)
    coeffs = lift_relation(cert)
    assert coeffs == {(4, 4, 8): mpq(-231, 20), (6, 4, 6): mpq(345, 8)}
    assert cert.verify()
    assert all(min(t) >= 4 for t in coeffs)


def test_published_lift_comparison():
    d = relation_kernel(16, 3).relation()
    printed = compare_bracket_combination(d, PUBLISHED_LIFT)
    assert not printed["equal"]
    assert printed["weights"] == [16, 14]
    fixed = compare_bracket_combination(d, PUBLISHED_LIFT_EPS4)
    assert fixed["equal"]


def test_solve_lift_failure():
    with pytest.raises(NoLift):
        solve_lift(make_eps(10))


def test_triple_labels():
    assert triple_labels(12) == [(4, 4, 4)]
    assert len(triple_labels(16)) == 6
    assert triple_labels(10) == []


def test_bialternal_space_examples():
    assert len(bialternal_space(8, 3)) == 1
    assert len(bialternal_space(10, 3)) == 2
    assert bialternal_space(4, 2) == []
    assert len(bialternal_space(6, 2)) == 1
    for m in bialternal_space(10, 3):
        assert is_bialternal(m)
    assert bialternal_space(3, 1, ls_convention=True) == []
    assert len(bialternal_space(3, 1)) == 1
    with pytest.raises(ValueError):
        bialternal_space(2, 4)


def test_u_family():
    fam = dict(u_family_depth2(6))
    assert set(fam) == {(2, 4), (4, 2)}
    assert fam[(2, 4)] == mould_ari(make_U(2), make_U(4))
    assert len(u_family_depth3(6)) == 1
    assert u_family_depth3(5) == []


def test_mould_rank():
    x = mould_ari(make_U(2), make_U(4))
    assert mould_rank([x, x.scale(3), mould_ari(make_U(4), make_U(2))], 2) == 1


@pytest.mark.parametrize("m", range(0, 14))
def test_span_checks(m):
    assert span_check(m, 3).equal
    assert span_check(m, 2).equal


def test_depth3_span_check_uses_psi_degree():
    row = goncharov_span_check(16)
    assert (row.degree, row.depth, row.bialternal_dim, row.family_rank) == (10, 3, 2, 2)


def test_express_in_family():
    d = relation_kernel(16, 3).relation()
    m = psi(d)
    coeffs = express_in_family(m, 10)
    fam = dict(u_family_depth3(10))
    total = Mould(U, {})
    for k, c in coeffs.items():
        total = total + fam[k].scale(c)
    assert total == m
    with pytest.raises(ValueError):
        express_in_family(Mould(U, {3: MPoly.monomial((11, 0, 0))}), 10)
