"""Relations among the h^d_{p,q} modulo Theta^3, their lifts to triple eps-brackets,
and the rank comparison between depth-3 bialternal moulds and ari-brackets of U's.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .derivations import (
    Derivation, NotMember, der_bracket, is_highest_weight, make_eps, make_h, theta3_membership,
    theta3_spanning_set, Theta3Certificate,
)
from .exact import ZERO, Q, canonical_vector, fmt, kernel_basis, rank, rref, solve, NoSolution
from .mould import Mould, U, alternality_defect, make_U, mould_ari, swap_images
from .mpoly import MPoly, RatComponent
from .ncalg import NcPoly


class NoLift(ValueError):
    pass


def h_labels(n: int) -> list[tuple[int, int]]:
    """Pairs (p, q), p <= q, both even >= 2, with p + q = n - 4."""
    s = n - 4
    return [(p, s - p) for p in range(2, s // 2 + 1, 2) if (s - p) >= 2 and (s - p) % 2 == 0]


def _matrix(cols: list[NcPoly]):
    words = sorted({w for c in cols for w in c.terms})
    return [[c.terms.get(w, ZERO) for c in cols] for w in words], words


def combine(coeffs, derivations) -> Derivation:
    total = None
    for c, d in zip(coeffs, derivations):
        if not c:
            continue
        t = d.scale(c)
        total = t if total is None else total + t
    if total is None:
        w = derivations[0].weight if derivations else 0
        return Derivation(NcPoly.zero(), NcPoly.zero(), w)
    return total


@dataclass
class RelationCertificate:
    weight: int
    depth: int
    labels: list[tuple[int, int]]
    zero_labels: list[tuple[int, int]]
    kernel: list[list]
    highest_weight: list[bool] = field(default_factory=list)
    theta3: list[Theta3Certificate] = field(default_factory=list)
    lift: dict | None = None
    lift_free_dimension: int | None = None
    reference_checks: dict = field(default_factory=dict)

    def relation(self, index: int = 0) -> Derivation:
        hs = [make_h(p, q, self.depth).derivation for p, q in self.labels]
        return combine(self.kernel[index], hs)

    def verify(self) -> bool:
        """Recompute every claim from the stored coefficients."""
        for idx, vec in enumerate(self.kernel):
            d = self.relation(idx)
            if self.depth == 2:
                if not d.is_zero():
                    return False
            else:
                if idx < len(self.theta3):
                    if self.theta3[idx].recombine() != d.val_a:
                        return False
                else:
                    try:
                        theta3_membership(d.val_a)
                    except NotMember:
                        return False
        for (p, q) in self.zero_labels:
            if not make_h(p, q, self.depth).derivation.is_zero():
                return False
        if self.lift is not None and self.kernel:
            if lift_derivation(self.lift) != self.relation(0):
                return False
        return True

    def to_json(self) -> dict:
        out = {
            "weight": self.weight,
            "depth": self.depth,
            "labels": [list(l) for l in self.labels],
            "zero_labels": [list(l) for l in self.zero_labels],
            "kernel": [[fmt(x) for x in v] for v in self.kernel],
            "highest_weight": self.highest_weight,
        }
        if self.depth == 3:
            out["theta3"] = [t.to_json() for t in self.theta3]
        if self.lift is not None:
            out["lift"] = [{"triple": list(k), "coeff": fmt(v)} for k, v in sorted(self.lift.items()) if v]
            out["lift_free_dimension"] = self.lift_free_dimension
        if self.reference_checks:
            out["reference_checks"] = self.reference_checks
        return out


@lru_cache(maxsize=None)
def _h_derivation(p: int, q: int, d: int) -> Derivation:
    return make_h(p, q, d).derivation


def relation_kernel(n: int, d: int) -> RelationCertificate:
    """Kernel of c -> sum c_pq h^d_pq(a), exactly for d = 2 and modulo Theta^3 for d = 3."""
    if d not in (2, 3):
        raise ValueError("relation_kernel handles depths 2 and 3")
    labels = h_labels(n)
    if not labels:
        raise ValueError(f"no h^{d}_(p,q) at weight {n}")
    hs = [_h_derivation(p, q, d) for p, q in labels]
    zero = [l for l, h in zip(labels, hs) if h.is_zero()]
    live = [i for i, h in enumerate(hs) if not h.is_zero()]
    cols = [hs[i].val_a for i in live]
    extra = [e for _, e in theta3_spanning_set(n + 1)] if d == 3 else []
    vecs: list[list] = []
    if cols:
        m, _ = _matrix(cols + extra)
        ker = kernel_basis(m, len(cols) + len(extra)) if m else \
            [[1 if i == j else 0 for i in range(len(cols) + len(extra))] for j in range(len(cols) + len(extra))]
        proj = [v[:len(cols)] for v in ker if any(v[:len(cols)])]
        if proj:
            r, piv = rref(proj)
            proj = [canonical_vector(row) for row in r[:len(piv)]]
        for v in proj:
            full = [ZERO] * len(labels)
            for x, i in zip(v, live):
                full[i] = Q(x)
            vecs.append(full)
    cert = RelationCertificate(n, d, labels, zero, vecs)
    for idx in range(len(vecs)):
        rel = cert.relation(idx)
        cert.highest_weight.append(is_highest_weight(rel))
        if d == 3:
            cert.theta3.append(theta3_membership(rel.val_a))
    return cert


# lifting ------------------------------------------------------------------------

def triple_labels(n: int) -> list[tuple[int, int, int]]:
    """Ordered eps-index triples (x, y, z), each even >= 4, summing to n."""
    out = set()
    for x in range(4, n + 1, 2):
        for y in range(4, n - x + 1, 2):
            z = n - x - y
            if z >= 4 and z % 2 == 0:
                out.update(permutations((x, y, z)))
    return sorted(out)


@lru_cache(maxsize=None)
def triple_bracket(x: int, y: int, z: int) -> Derivation:
    """[eps_x, [eps_y, eps_z]]."""
    return der_bracket(make_eps(x), der_bracket(make_eps(y), make_eps(z)))


def lift_derivation(coeffs: dict) -> Derivation:
    items = sorted(coeffs.items())
    return combine([c for _, c in items], [triple_bracket(*k) for k, _ in items])


def solve_lift(target: Derivation) -> tuple[dict, int]:
    """Coefficients on [eps_x,[eps_y,eps_z]] matching ``target`` on a, and the dimension of the solution space."""
    n = target.weight
    labels = triple_labels(n)
    if target.is_zero():
        return {}, len(labels)
    if not labels:
        raise NoLift(f"no triple brackets at weight {n}")
    cols = [triple_bracket(*l).val_a for l in labels]
    m, words = _matrix(cols + [target.val_a])
    m = [row[:-1] for row in m]
    t = [target.val_a.terms.get(w, ZERO) for w in words]
    try:
        x = solve(m, t, len(labels))
    except NoSolution as exc:
        raise NoLift("the relation is not a combination of triple brackets") from exc
    free = len(labels) - rank(m)
    return {l: c for l, c in zip(labels, x) if c}, free


def lift_relation(cert: RelationCertificate, index: int = 0) -> dict:
    """Lift the index-th depth-3 kernel relation to triple eps-brackets, storing it on the certificate."""
    if cert.depth != 3:
        raise ValueError("lifting concerns depth-3 relations")
    if not cert.kernel:
        cert.lift, cert.lift_free_dimension = {}, 0
        return {}
    target = cert.relation(index)
    coeffs, free = solve_lift(target)
    if lift_derivation(coeffs) != target:
        raise NoLift("solution does not reproduce the relation")
    cert.lift, cert.lift_free_dimension = coeffs, free
    return coeffs


def compare_bracket_combination(target: Derivation, terms: list[tuple[object, tuple[int, int, int]]]) -> dict:
    """Whether sum c [eps_x,[eps_y,eps_z]] equals ``target``, or is a multiple of it."""
    combo = combine([Q(c) for c, _ in terms], [triple_bracket(*t) for _, t in terms])
    out = {"equal": combo == target, "proportional": None}
    if not combo.is_zero() and not target.is_zero():
        w = min(target.val_a.terms)
        c = target.val_a.terms[w]
        ratio = combo.val_a.terms.get(w, ZERO) / c
        out["proportional"] = fmt(ratio) if ratio and combo == target.scale(ratio) else None
    out["weights"] = [sum(t) for _, t in terms]
    return out


# bialternal spaces ------------------------------------------------------------------

def _monomials(m: int, d: int):
    if d == 1:
        yield (m,)
        return
    for e0 in range(m, -1, -1):
        for rest in _monomials(m - e0, d - 1):
            yield (e0,) + rest


def _defect_rows(p: MPoly) -> dict:
    """Concatenated coefficients of all alternality defects of p and of its swap."""
    d = p.arity
    out = {}
    comp = RatComponent.poly(p)
    swapped = comp.substitute_linear(swap_images(d, U), d)
    for tag, c in (("a", comp), ("s", swapped)):
        for s in range(1, d):
            for e, x in alternality_defect(c, s).num.items():
                out[(tag, s, e)] = x
    return out


def bialternal_space(m: int, d: int, ls_convention: bool = False) -> list[Mould]:
    """Basis of polynomial bialternal moulds concentrated in depth d, homogeneous of degree m."""
    if d not in (1, 2, 3) or m < 0:
        raise ValueError("bialternal_space needs d in {1,2,3} and m >= 0")
    mons = list(_monomials(m, d))
    if d == 1:
        if ls_convention and m % 2:
            return []
        return [Mould(U, {1: MPoly.monomial((m,))})]
    rows = [_defect_rows(MPoly.monomial(e)) for e in mons]
    keys = sorted({k for r in rows for k in r})
    if keys:
        mat = [[r.get(k, ZERO) for r in rows] for k in keys]
        ker = kernel_basis(mat, len(mons))
    else:
        ker = [[1 if i == j else 0 for i in range(len(mons))] for j in range(len(mons))]
    return [Mould(U, {d: MPoly(d, {e: x for e, x in zip(mons, v) if x})}) for v in ker]


def mould_rank(moulds: list[Mould], depth: int) -> int:
    vecs = [dict(mo[depth].num.items()) if mo.comp(depth) is not None else {} for mo in moulds]
    for mo in moulds:
        if mo.comp(depth) is not None and not mo[depth].is_polynomial():
            raise ValueError("rank of non-polynomial moulds")
    keys = sorted({k for v in vecs for k in v})
    if not keys:
        return 0
    return rank([[v.get(k, ZERO) for k in keys] for v in vecs])


def u_family_depth2(m: int) -> list[tuple[tuple[int, int], Mould]]:
    """ari(U_2a, U_2b), a, b >= 1, 2a + 2b = m."""
    return [((2 * a, m - 2 * a), mould_ari(make_U(2 * a), make_U(m - 2 * a)))
            for a in range(1, m // 2) if m % 2 == 0 and m - 2 * a >= 2]


@lru_cache(maxsize=None)
def _ari_u(x: int, y: int) -> Mould:
    return mould_ari(make_U(x), make_U(y))


def u_family_depth3(m: int) -> list[tuple[tuple[int, int, int], Mould]]:
    """ari(U_2r, ari(U_2s, U_2t)), r, s, t >= 1, 2(r+s+t) = m."""
    out = []
    if m % 2:
        return out
    h = m // 2
    for r in range(1, h + 1):
        for s in range(1, h - r + 1):
            t = h - r - s
            if t >= 1:
                out.append(((2 * r, 2 * s, 2 * t), mould_ari(make_U(2 * r), _ari_u(2 * s, 2 * t))))
    return out


@dataclass(frozen=True)
class DimensionRow:
    degree: int
    depth: int
    bialternal_dim: int
    family_rank: int

    @property
    def equal(self) -> bool:
        return self.bialternal_dim == self.family_rank

    def to_json(self) -> dict:
        return {"degree": self.degree, "depth": self.depth, "bialternal_dim": self.bialternal_dim,
                "family_rank": self.family_rank, "equal": self.equal}


def span_check(m: int, depth: int = 3) -> DimensionRow:
    """Dimension of degree-m bialternal polynomial moulds in the given depth against the rank of the U-family."""
    fam = u_family_depth3(m) if depth == 3 else u_family_depth2(m)
    return DimensionRow(m, depth, len(bialternal_space(m, depth)), mould_rank([x for _, x in fam], depth))


def goncharov_span_check(n: int) -> DimensionRow:
    """Depth-3 span check at the degree of Psi(D) for D of weight n, namely n - 6."""
    return span_check(n - 6, 3)


def express_in_family(target: Mould, m: int) -> dict:
    """Coefficients c_rst with target = sum c_rst ari(U_2r, ari(U_2s, U_2t)) in depth 3."""
    fam = u_family_depth3(m)
    comp = target[3]
    if not comp.is_polynomial():
        raise ValueError("target is not polynomial in depth 3")
    keys = sorted({e for _, f in fam for e, _ in f[3].num.items()} | {e for e, _ in comp.num.items()})
    mat = [[dict(f[3].num.items()).get(k, ZERO) for _, f in fam] for k in keys]
    tgt = [dict(comp.num.items()).get(k, ZERO) for k in keys]
    x = solve(mat, tgt, len(fam))
    return {lab: c for (lab, _), c in zip(fam, x) if c}
