"""Derivations of Lie[a,b] stored by their values on the generators.

Includes the elliptic generators eps_2i, the sl2 partner phi_0, the
highest-weight elements h^d_{p,q}, the depth-3 Theta^3 membership test and the
Poisson bracket on Lie[a,b].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

from .exact import ZERO, NoSolution, Q, Rational, solve, fmt
from .ncalg import (
    AB, A, B, C, NcPoly, is_push_invariant, lie_bracket, lyndon_lie_basis, monomials_start_end_b,
)


class NotPushInvariant(ValueError):
    pass


class NoFactor(ValueError):
    """P is not of the form [a, Q]."""


class NotMember(ValueError):
    """The polynomial is outside the Theta^3 spanning set."""


@dataclass(frozen=True)
class Derivation:
    """A derivation of Lie[a,b]; equal iff both generator images agree.

    ``weight`` is n when both images have degree n + 1. ``sl2`` marks phi_0 and
    anything bracketed with it: such derivations are not determined by their
    value on a, so Der^0-only maps reject them.
    """

    val_a: NcPoly
    val_b: NcPoly
    weight: int
    sl2: bool = False

    def __post_init__(self):
        degs = self.val_a.degrees() | self.val_b.degrees()
        if len(degs) > 1:
            raise ValueError(f"derivation images are not homogeneous: degrees {sorted(degs)}")
        if degs and not self.sl2 and degs.pop() != self.weight + 1:
            raise ValueError("weight does not match image degree")

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.val_a == other.val_a and self.val_b == other.val_b

    def __hash__(self):
        return hash((self.val_a, self.val_b))

    def is_zero(self) -> bool:
        return self.val_a.is_zero() and self.val_b.is_zero()

    def __call__(self, p: NcPoly) -> NcPoly:
        return apply(self, p)

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.weight != other.weight:
            raise ValueError("adding derivations of different weights")
        return Derivation(self.val_a + other.val_a, self.val_b + other.val_b, self.weight, self.sl2 or other.sl2)

    def __neg__(self):
        return Derivation(-self.val_a, -self.val_b, self.weight, self.sl2)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return Derivation(self.val_a.scale(c), self.val_b.scale(c), self.weight, self.sl2)

    __rmul__ = scale

    def to_json(self) -> dict:
        return {"val_a": self.val_a.to_json(), "val_b": self.val_b.to_json(), "weight": self.weight}

    @classmethod
    def from_json(cls, obj: dict) -> "Derivation":
        return cls(NcPoly.from_json(obj["val_a"]), NcPoly.from_json(obj["val_b"]), int(obj["weight"]))


def zero_derivation(weight: int = 0) -> Derivation:
    return Derivation(NcPoly.zero(), NcPoly.zero(), weight)


def apply(d: Derivation, p: NcPoly) -> NcPoly:
    """Leibniz extension: replace one letter at a time by its image."""
    imgs = (d.val_a.terms, d.val_b.terms)
    out: dict = {}
    get = out.get
    for w, c in p.terms.items():
        for i, x in enumerate(w):
            img = imgs[x]
            if not img:
                continue
            pre, post = w[:i], w[i + 1:]
            for u, e in img.items():
                k = pre + u + post
                out[k] = get(k, ZERO) + c * e
    return NcPoly._raw({w: c for w, c in out.items() if c}, p.alphabet)


def der_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    va = apply(d1, d2.val_a) - apply(d2, d1.val_a)
    vb = apply(d1, d2.val_b) - apply(d2, d1.val_b)
    return Derivation(va, vb, d1.weight + d2.weight, d1.sl2 or d2.sl2)


def ad_der(x: Derivation, k: int, y: Derivation) -> Derivation:
    for _ in range(k):
        y = der_bracket(x, y)
    return y


@lru_cache(maxsize=None)
def make_eps(n: int) -> Derivation:
    """eps_n for even n = 2i >= 0: a -> a^{2i}.b, b -> sum_j (-1)^j [a^j.b, a^{2i-1-j}.b]."""
    if n < 0 or n % 2:
        raise ValueError(f"eps index must be even and >= 0, got {n}")
    i = n // 2
    vb = NcPoly.zero()
    for j in range(i):
        vb = vb + lie_bracket(C(j + 1), C(2 * i - j)).scale((-1) ** j)
    return Derivation(C(n + 1), vb, n)


def make_phi0() -> Derivation:
    """phi_0(a) = 0, phi_0(b) = a."""
    return Derivation(NcPoly.zero(), NcPoly.parse("a"), 0, sl2=True)


@dataclass(frozen=True)
class HElement:
    p: int
    q: int
    d: int
    derivation: Derivation = field(compare=False, repr=False)

    @property
    def weight(self) -> int:
        return self.p + self.q + 4


def h_terms(p: int, q: int, d: int) -> list[tuple[Rational, int, int]]:
    """(coefficient, i, j) for h^d_{p,q} = sum coeff [ad(eps_0)^i eps_{p+2}, ad(eps_0)^j eps_{q+2}]."""
    out = []
    for i in range(d - 1):
        j = d - 2 - i
        c = Q((-1) ** i * factorial(d - 2)) / (comb(p, i) * comb(q, j))
        out.append((c, i, j))
    return out


@lru_cache(maxsize=None)
def _eps0_translate(n: int, i: int) -> Derivation:
    if i == 0:
        return make_eps(n)
    return der_bracket(make_eps(0), _eps0_translate(n, i - 1))


@lru_cache(maxsize=None)
def make_h(p: int, q: int, d: int) -> HElement:
    """The highest-weight element h^d_{p,q} (p, q even >= 2, d >= 2)."""
    if p < 2 or q < 2 or p % 2 or q % 2 or d < 2:
        raise ValueError(f"h^d_(p,q) needs p, q even >= 2 and d >= 2; got p={p}, q={q}, d={d}")
    total = zero_derivation(p + q + 4)
    for c, i, j in h_terms(p, q, d):
        if i > p or j > q:
            continue
        total = total + der_bracket(_eps0_translate(p + 2, i), _eps0_translate(q + 2, j)).scale(c)
    return HElement(p, q, d, total)


def is_highest_weight(d: Derivation) -> bool:
    return der_bracket(make_phi0(), d).is_zero()


def kills_ab(d: Derivation) -> bool:
    return apply(d, lie_bracket(NcPoly.parse("a"), NcPoly.parse("b"))).is_zero()


# linear solves in Lyndon coordinates ----------------------------------------

def _solve_in_lie(weight: int, depth: int, image, target: NcPoly) -> NcPoly:
    """Find Q in the weight/depth part of Lie[a,b] with image(Q) = target."""
    basis = [e for _, e in lyndon_lie_basis(weight, depth)] if weight >= 1 else []
    cols = [image(e) for e in basis]
    words = sorted({w for c in cols for w in c.terms} | set(target.terms))
    if not basis:
        if target.is_zero():
            return NcPoly.zero()
        raise NoSolution("empty Lie basis for a nonzero target")
    m = [[c.terms.get(w, ZERO) for c in cols] for w in words]
    x = solve(m, [target.terms.get(w, ZERO) for w in words], len(cols))
    out = NcPoly.zero()
    for xi, e in zip(x, basis):
        if xi:
            out = out + e.scale(xi)
    return out


def recover_partner(p: NcPoly) -> NcPoly:
    """The unique Lie Q with [P,b] + [a,Q] = 0 for push-invariant Lie P of degree >= 2."""
    if not p.terms:
        return NcPoly.zero()
    n = p.degree()
    if n < 2:
        raise ValueError("recover_partner needs degree >= 2")
    if not is_push_invariant(p):
        raise NotPushInvariant("P is not push-invariant")
    a, b = NcPoly.parse("a"), NcPoly.parse("b")
    out = NcPoly.zero()
    for dep, part in p.depth_parts().items():
        target = lie_bracket(b, part)
        out = out + _solve_in_lie(n, dep + 1, lambda e: lie_bracket(a, e), target)
    return out


def factor_ad_a(p: NcPoly) -> NcPoly:
    """Q with P = [a, Q]; NoFactor when some monomial of P starts and ends with b."""
    if not p.terms:
        return NcPoly.zero()
    n = p.degree()
    if monomials_start_end_b(p):
        raise NoFactor("P has a monomial starting and ending with b")
    a = NcPoly.parse("a")
    out = NcPoly.zero()
    for dep, part in p.depth_parts().items():
        try:
            out = out + _solve_in_lie(n - 1, dep, lambda e: lie_bracket(a, e), part)
        except NoSolution as exc:
            raise NoFactor("P is not [a, Q] for a Lie Q") from exc
    return out


# Theta^3 ----------------------------------------------------------------------

def theta3_spanning_set(degree: int) -> list[tuple[tuple[int, int, int], NcPoly]]:
    """[a^i.b, [a^j.b, a^k.b]] with i, j, k >= 1 and i + j + k = degree - 3."""
    s = degree - 3
    out = []
    for i in range(1, s - 1):
        for j in range(1, s - i):
            k = s - i - j
            out.append(((i, j, k), lie_bracket(C(i + 1), lie_bracket(C(j + 1), C(k + 1)))))
    return out


@dataclass(frozen=True)
class Theta3Certificate:
    degree: int
    coeffs: dict  # (i, j, k) -> Rational

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [{"ijk": list(k), "coeff": fmt(v)} for k, v in sorted(self.coeffs.items()) if v],
        }

    def recombine(self) -> NcPoly:
        out = NcPoly.zero()
        for (i, j, k), c in self.coeffs.items():
            if c:
                out = out + lie_bracket(C(i + 1), lie_bracket(C(j + 1), C(k + 1))).scale(c)
        return out


def theta3_membership(p: NcPoly) -> Theta3Certificate:
    """Express a depth-3 homogeneous P through the Theta^3 spanning set, or raise NotMember."""
    if not p.terms:
        return Theta3Certificate(0, {})
    n = p.degree()
    if p.depth() != 3:
        raise ValueError("theta3_membership needs depth-3 input")
    span = theta3_spanning_set(n)
    if not span:
        raise NotMember("empty spanning set")
    words = sorted({w for _, e in span for w in e.terms} | set(p.terms))
    m = [[e.terms.get(w, ZERO) for _, e in span] for w in words]
    try:
        x = solve(m, [p.terms.get(w, ZERO) for w in words], len(span))
    except NoSolution as exc:
        raise NotMember("outside the span of [a^i.b,[a^j.b,a^k.b]], i,j,k >= 1") from exc
    return Theta3Certificate(n, {lab: c for (lab, _), c in zip(span, x) if c})


# Poisson bracket ------------------------------------------------------------

def poisson_derivation(p: NcPoly) -> Derivation:
    """D_P: a -> 0, b -> [b, P]."""
    b = NcPoly.parse("b")
    vb = lie_bracket(b, p)
    w = (max(vb.degrees()) - 1) if vb.terms else 0
    return Derivation(NcPoly.zero(), vb, w)


def poisson(p: NcPoly, q: NcPoly) -> NcPoly:
    """{P,Q} = [P,Q] + D_P(Q) - D_Q(P)."""
    return lie_bracket(p, q) + apply(poisson_derivation(p), q) - apply(poisson_derivation(q), p)
