"""Passing between Lie polynomials, derivations and moulds.

``ma`` sends C_{i1}...C_{ir} to (-1)^(i1+...+ir-r) u1^(i1-1)...ur^(ir-1);
``da`` and ``Da`` divide by u1...ur and by Delta_r; ``psi`` is Da of the
a-image of a derivation killing [a,b].
"""
from __future__ import annotations

from .derivations import Derivation, kills_ab, recover_partner
from .exact import ZERO, kernel_basis
from .mould import Mould, U, is_alternal, mould_lu, arit_u
from .mpoly import MPoly, RatComponent, delta_forms
from .ncalg import (
    AB, A, NcPoly, NotInCSpan, dynkin_theta, expand_c, is_lie, lyndon_lie_basis, rewrite_in_C,
    star_projection,
)


class NotAlternal(ValueError):
    pass


class NotDerZero(ValueError):
    """The derivation is outside Der^0."""


def _ma_component(coords: dict, r: int) -> MPoly:
    terms = {}
    for comp, c in coords.items():
        e = tuple(i - 1 for i in comp)
        terms[e] = c if sum(e) % 2 == 0 else -c
    return MPoly(r, terms)


def ma(p: NcPoly) -> Mould:
    """Polynomial u-mould of a polynomial in the span of C-monomials, depth by depth."""
    comps = {}
    for r, part in p.depth_parts().items():
        if r == 0:
            raise NotInCSpan("depth-0 part (a power of a) has no mould")
        comps[r] = _ma_component(rewrite_in_C(part, r), r)
    return Mould(U, comps)


def ma_inverse(m: Mould) -> NcPoly:
    """The Lie polynomial whose ma is the alternal polynomial mould ``m``."""
    if m.kind != U or m.empty:
        raise ValueError("ma_inverse takes a u-mould with zero empty value")
    if not m.is_polynomial():
        raise ValueError("ma_inverse needs polynomial components")
    if not is_alternal(m):
        raise NotAlternal("mould is not alternal")
    coords = {}
    for r, c in m.components.items():
        for e, x in c.num.items():
            coords[tuple(i + 1 for i in e)] = x if sum(e) % 2 == 0 else -x
    p = expand_c(coords)
    if not is_lie(p):
        raise ValueError("reconstruction is not a Lie polynomial; inconsistent input")
    return p


def _divide_by_forms(m: Mould, forms_of) -> Mould:
    return Mould(m.kind, {r: RatComponent(c.num, [(tuple(f), 1) for f in forms_of(r)])
                          for r, c in m.components.items()})


def _unit_forms(r: int):
    return [[1 if t == i else 0 for t in range(r)] for i in range(r)]


def da(p: NcPoly) -> Mould:
    """ma(F) / (u1...ur) in each depth."""
    return _divide_by_forms(ma(p), _unit_forms)


def Da(p: NcPoly) -> Mould:
    """ma(F) / Delta_r in each depth."""
    return _divide_by_forms(ma(p), delta_forms)


def check_der_zero(d: Derivation) -> None:
    if d.sl2:
        raise NotDerZero("derivations involving phi_0 are not determined by their value on a")
    if not kills_ab(d):
        raise NotDerZero("D([a,b]) != 0")
    if d.val_a.coeff((A,)):
        raise NotDerZero("D(a) has a linear term in a")


def psi(d: Derivation) -> Mould:
    """Da(D(a)) for D in Der^0."""
    check_der_zero(d)
    return Da(d.val_a)


def derivation_of(u: NcPoly) -> Derivation:
    """D_U in Der^0: a -> U, with b-image fixed by D([a,b]) = 0."""
    if u.is_zero():
        return Derivation(NcPoly.zero(), NcPoly.zero(), 0)
    return Derivation(u, recover_partner(u), u.degree() - 1)


def darit(u: NcPoly, m: Mould) -> Mould:
    """Darit_U . A = -arit(Da U) . A - lu(A, Da U)."""
    if u.is_zero():
        return Mould(m.kind, {}, 0, m.depth_bound)
    du = Da(u)
    return -arit_u(du, m) - mould_lu(m, du)


# depth-one closed forms for the base case of -da(D_U(F)) = Darit_U . da(F) ------

def _sum_form(r: int, idx) -> list[int]:
    s = set(idx)
    return [1 if t in s else 0 for t in range(r)]


def _closed_form_parts(u: NcPoly, n: int):
    mu = ma(u)
    if len(mu.components) != 1:
        raise ValueError("closed forms need U of homogeneous depth")
    (r, c), = mu.components.items()
    s = r + 1
    left = c.num.substitute_linear([_sum_form(s, [t]) for t in range(r)], s)       # ma(U)(u1..ur)
    right = c.num.substitute_linear([_sum_form(s, [t + 1]) for t in range(r)], s)  # ma(U)(u2..u_{r+1})
    total = MPoly.linear(_sum_form(s, range(s)))
    u1, ulast = MPoly.var(0, s), MPoly.var(s - 1, s)
    t_first = total ** (n - 1) * u1 - u1 ** (n - 1) * total
    t_last = total ** (n - 1) * ulast - ulast ** (n - 1) * total
    delta = [tuple(f) for f in delta_forms(s)]
    head = [(f, 1) for f in delta]
    first = RatComponent(right * t_first, head + [(tuple(_sum_form(s, range(1, s))), 1)])
    last = RatComponent(left * t_last, head + [(tuple(_sum_form(s, range(r))), 1)])
    return s, first, last


def closed_form_leibniz(u: NcPoly, n: int) -> Mould:
    """-da(D_U(C_n)) summed in closed form from the Leibniz expansion."""
    s, first, last = _closed_form_parts(u, n)
    sign = 1 if (n - 1) % 2 == 0 else -1
    return Mould(U, {s: (first - last).scale(sign)})


def closed_form_flexion(u: NcPoly, n: int) -> Mould:
    """Darit_U . da(C_n) summed in closed form from the flexion formulas."""
    s, first, last = _closed_form_parts(u, n)
    sign = 1 if n % 2 == 0 else -1
    return Mould(U, {s: (last - first).scale(sign)})


# linearized double shuffle -----------------------------------------------------

def is_ls(p: NcPoly, depth: int | None = None) -> bool:
    """Whether the star projection of P is a Lie polynomial over b1, b2, ...; P of homogeneous depth >= 2."""
    if p.is_zero():
        return True
    depths = p.depths()
    if len(depths) != 1:
        raise ValueError("is_ls needs homogeneous depth")
    d = depths.pop()
    if depth is not None and depth != d:
        raise ValueError(f"input has depth {d}, not {depth}")
    if d < 2:
        raise ValueError("depth-1 membership in ls is convention-dependent; not decided here")
    if len(p.degrees()) != 1:
        raise ValueError("is_ls needs homogeneous weight")
    return is_lie(star_projection(p, d))


def ls_space(weight: int, depth: int) -> list[NcPoly]:
    """Basis of the ls elements of given weight and depth >= 2, by exact kernel over the Lyndon basis."""
    if depth < 2:
        raise ValueError("ls_space needs depth >= 2")
    basis = [e for _, e in lyndon_lie_basis(weight, depth)]
    if not basis:
        return []
    cols = []
    for e in basis:
        s = star_projection(e, depth, weight)
        cols.append(dynkin_theta(s) - s.scale(depth))
    words = sorted({w for c in cols for w in c.terms})
    if not words:
        vecs = [[1 if i == j else 0 for i in range(len(basis))] for j in range(len(basis))]
    else:
        vecs = kernel_basis([[c.terms.get(w, ZERO) for c in cols] for w in words], len(basis))
    out = []
    for v in vecs:
        p = NcPoly.zero()
        for x, e in zip(v, basis):
            if x:
                p = p + e.scale(x)
        out.append(p)
    return out
