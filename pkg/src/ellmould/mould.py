"""Moulds with rational-function components and the flexion operations.

A mould is kept as its nonzero components by depth. ``depth_bound=None`` means
the mould is exactly zero beyond its listed components; an integer bound means
only depths up to the bound are known, and every operation on such a mould
reports results through the smallest bound involved.
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Mapping

from .exact import ZERO, Q, Rational, fmt
from .mpoly import (
    MPoly, RatComponent, delta_forms, delta_v_forms, rat_str, rat_sum,
)

U, V = "u", "v"


class KindMismatch(ValueError):
    pass


def _unit(r: int, i: int) -> tuple:
    return tuple(1 if t == i else 0 for t in range(r))


def _sum_of(r: int, idx: Iterable[int], sign: int = 1) -> tuple:
    s = set(idx)
    return tuple(sign if t in s else 0 for t in range(r))


def _diff(r: int, i: int, j: int) -> tuple:
    """v_i - v_j (0-based)."""
    out = [0] * r
    out[i] += 1
    out[j] -= 1
    return tuple(out)


class Mould:
    __slots__ = ("kind", "components", "empty", "depth_bound")

    def __init__(self, kind: str = U, components: Mapping[int, object] | None = None, empty=0,
                 depth_bound: int | None = None):
        if kind not in (U, V):
            raise ValueError(f"mould kind must be 'u' or 'v', got {kind!r}")
        self.kind = kind
        self.empty = Q(empty)
        self.depth_bound = depth_bound
        comps = {}
        for r, c in (components or {}).items():
            r = int(r)
            if r < 1:
                raise ValueError("components start at depth 1; use empty for depth 0")
            if isinstance(c, MPoly):
                c = RatComponent.poly(c)
            if c.arity != r:
                raise ValueError(f"depth-{r} component has arity {c.arity}")
            if depth_bound is not None and r > depth_bound:
                continue
            if not c.is_zero():
                comps[r] = c
        self.components = comps

    # access ---------------------------------------------------------------
    def comp(self, r: int) -> RatComponent | None:
        return self.components.get(r)

    def __getitem__(self, r: int) -> RatComponent:
        c = self.components.get(r)
        return c if c is not None else RatComponent.zero(r)

    def max_depth(self) -> int:
        return max(self.components, default=0)

    def depths(self) -> list[int]:
        return sorted(self.components)

    def is_zero(self) -> bool:
        return not self.components and not self.empty

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.components.values())

    def _like(self, other: "Mould"):
        if self.kind != other.kind:
            raise KindMismatch(f"{self.kind}-mould vs {other.kind}-mould")

    def __eq__(self, other):
        if not isinstance(other, Mould):
            return NotImplemented
        if self.kind != other.kind or self.empty != other.empty:
            return False
        bound = _min_bound(self.depth_bound, other.depth_bound)
        keys = set(self.components) | set(other.components)
        if bound is not None:
            keys = {r for r in keys if r <= bound}
        return all(self[r] == other[r] for r in keys)

    def __hash__(self):
        return hash((self.kind, self.empty, tuple(sorted(self.components))))

    def __add__(self, other: "Mould") -> "Mould":
        self._like(other)
        keys = set(self.components) | set(other.components)
        comps = {r: self[r] + other[r] for r in keys}
        return Mould(self.kind, comps, self.empty + other.empty, _min_bound(self.depth_bound, other.depth_bound))

    def __neg__(self):
        return Mould(self.kind, {r: -c for r, c in self.components.items()}, -self.empty, self.depth_bound)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Mould":
        c = Q(c)
        return Mould(self.kind, {r: x.scale(c) for r, x in self.components.items()}, self.empty * c,
                     self.depth_bound)

    __rmul__ = scale

    def truncate(self, bound: int) -> "Mould":
        return Mould(self.kind, self.components, self.empty, bound if self.depth_bound is None
                     else min(bound, self.depth_bound))

    def map_components(self, f: Callable[[int, RatComponent], RatComponent], kind: str | None = None) -> "Mould":
        return Mould(kind or self.kind, {r: f(r, c) for r, c in self.components.items()}, self.empty,
                     self.depth_bound)

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "empty": fmt(self.empty),
            "depth_bound": self.depth_bound,
            "components": {str(r): c.to_json() for r, c in sorted(self.components.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Mould":
        return cls(obj.get("kind", U), {int(r): RatComponent.from_json(c) for r, c in obj["components"].items()},
                   Q(obj.get("empty", "0")), obj.get("depth_bound"))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Mould({self.kind}, {self.to_json()['components'].keys()})"


def _min_bound(*bounds):
    bs = [b for b in bounds if b is not None]
    return min(bs) if bs else None


def _result_depths(a: Mould, b: Mould, with_empty: bool = False) -> range:
    bound = _min_bound(a.depth_bound, b.depth_bound)
    if bound is not None:
        return range(1, bound + 1)
    top = a.max_depth() + b.max_depth()
    if with_empty:
        if a.empty:
            top = max(top, b.max_depth())
        if b.empty:
            top = max(top, a.max_depth())
    return range(1, top + 1)


def render(m: Mould, over_delta: bool = True) -> str:
    """One line per depth; components that become polynomial after Delta_r are shown as numerator/Delta_r."""
    var = m.kind
    lines = []
    if m.empty:
        lines.append(f"depth 0: {fmt(m.empty)}")
    for r, c in sorted(m.components.items()):
        text = rat_str(c, var)
        forms = delta_forms(r) if var == U else delta_v_forms(r)
        if over_delta and not c.is_polynomial():
            cleared = c.mul_forms(forms)
            if cleared.is_polynomial():
                num = factored(cleared.num, var)
                text = f"{num}/Delta_{r}" if num.lstrip("-").isalnum() else f"({num})/Delta_{r}"
        elif over_delta and r >= 2:
            quotient = RatComponent(c.num, [(tuple(f), 1) for f in forms])
            if quotient.is_polynomial():
                text = f"Delta_{r}*({factored(quotient.num, var)})"
        lines.append(f"depth {r}: {text}")
    if m.depth_bound is not None:
        lines.append(f"(known through depth {m.depth_bound})")
    return "\n".join(lines) if lines else "0"


def factored(p: MPoly, var: str = "u") -> str:
    """Factored rendering through sympy; falls back to the expanded form."""
    from .mpoly import poly_str
    text = poly_str(p, var)
    try:
        import sympy
    except ImportError:  # pragma: no cover
        return text
    syms = sympy.symbols(" ".join(f"{var}{i + 1}" for i in range(p.arity)) + " _pad")
    expr = sympy.Integer(0)
    for e, c in p.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for i, x in enumerate(e):
            term *= syms[i] ** x
        expr += term
    return str(sympy.factor(expr)).replace("**", "^")


# constructors ---------------------------------------------------------------

def make_U(n: int) -> Mould:
    """U_n (n = 2i >= -2, even): concentrated in depth 1 with value u_1^n."""
    if n < -2 or n % 2:
        raise ValueError(f"U_n needs even n >= -2, got {n}")
    if n >= 0:
        comp = RatComponent.poly(MPoly.monomial((n,)))
    else:
        comp = RatComponent(MPoly.const(1, 1), [((1,), -n)])
    return Mould(U, {1: comp})


def delta_mould(bound: int, kind: str = U) -> Mould:
    forms = delta_forms if kind == U else delta_v_forms
    comps = {}
    for r in range(1, bound + 1):
        p = MPoly.const(1, r)
        for f in forms(r):
            p = p * MPoly.linear(f)
        comps[r] = p
    return Mould(kind, comps, 0, bound)


def unit_mould(kind: str = U) -> Mould:
    return Mould(kind, {}, 1)


# products -------------------------------------------------------------------

def _embed(c: RatComponent, r: int, offset: int) -> RatComponent:
    return c.substitute_linear([_unit(r, offset + t) for t in range(c.arity)], r)


def mould_mu(a: Mould, b: Mould) -> Mould:
    """mu(A,B)(u_1..u_r) = sum_{i=0..r} A(u_1..u_i) B(u_{i+1}..u_r)."""
    a._like(b)
    comps = {}
    for r in _result_depths(a, b, with_empty=True):
        terms = []
        if a.empty and b.comp(r) is not None:
            terms.append(b[r].scale(a.empty))
        if b.empty and a.comp(r) is not None:
            terms.append(a[r].scale(b.empty))
        for i in range(1, r):
            ca, cb = a.comp(i), b.comp(r - i)
            if ca is None or cb is None:
                continue
            terms.append(_embed(ca, r, 0) * _embed(cb, r, i))
        comps[r] = rat_sum(terms, r)
    return Mould(a.kind, comps, a.empty * b.empty, _min_bound(a.depth_bound, b.depth_bound))


def mould_lu(a: Mould, b: Mould) -> Mould:
    return mould_mu(a, b) - mould_mu(b, a)


# flexions -------------------------------------------------------------------

def _require_ari(*ms: Mould):
    for m in ms:
        if m.empty:
            raise ValueError("bracket operands must vanish at the empty sequence")


def _arit_terms_u(r: int):
    """(sign, images for A, images for B, depth of B) for the u-form arit at depth r."""
    out = []
    for k in range(0, r):
        for l in range(k + 1, r):
            ia = [_unit(r, t) for t in range(k)] + [_sum_of(r, range(k, l + 1))] + \
                 [_unit(r, t) for t in range(l + 1, r)]
            ib = [_unit(r, t) for t in range(k, l)]
            out.append((1, ia, ib))
    for k in range(1, r + 1):
        for l in range(k + 1, r + 1):
            ia = [_unit(r, t) for t in range(k - 1)] + [_sum_of(r, range(k - 1, l))] + \
                 [_unit(r, t) for t in range(l, r)]
            ib = [_unit(r, t) for t in range(k, l)]
            out.append((-1, ia, ib))
    return out


def _arit_terms_v(r: int):
    out = []
    for k in range(0, r):
        for l in range(k + 1, r):
            ia = [_unit(r, t) for t in range(k)] + [_unit(r, t) for t in range(l, r)]
            ib = [_diff(r, t, l) for t in range(k, l)]
            out.append((1, ia, ib))
    for k in range(1, r + 1):
        for l in range(k + 1, r + 1):
            ia = [_unit(r, t) for t in range(k)] + [_unit(r, t) for t in range(l, r)]
            ib = [_diff(r, t, k - 1) for t in range(k, l)]
            out.append((-1, ia, ib))
    return out


def _arit(b: Mould, a: Mould, terms_for) -> Mould:
    comps = {}
    for r in _result_depths(a, b):
        terms = []
        for sign, ia, ib in terms_for(r):
            ca, cb = a.comp(len(ia)), b.comp(len(ib))
            if ca is None or cb is None:
                continue
            t = ca.substitute_linear(ia, r) * cb.substitute_linear(ib, r)
            terms.append(t if sign > 0 else -t)
        comps[r] = rat_sum(terms, r)
    return Mould(a.kind, comps, 0, _min_bound(a.depth_bound, b.depth_bound))


def arit_u(b: Mould, a: Mould) -> Mould:
    """(arit(B).A)(u) = sum_{0<=k<l<r} A(a⌈c)B(b) - sum_{1<=k<l<=r} A(a⌉c)B(b)."""
    if a.kind != U or b.kind != U:
        raise KindMismatch("arit_u needs u-moulds")
    _require_ari(a, b)
    return _arit(b, a, _arit_terms_u)


def arit_v(b: Mould, a: Mould) -> Mould:
    """(arit(B).A)(v) = sum_{0<=k<l<r} A(ac)B(b⌋) - sum_{1<=k<l<=r} A(ac)B(⌊b)."""
    if a.kind != V or b.kind != V:
        raise KindMismatch("arit_v needs v-moulds")
    _require_ari(a, b)
    return _arit(b, a, _arit_terms_v)


def arit(b: Mould, a: Mould) -> Mould:
    b._like(a)
    return arit_u(b, a) if a.kind == U else arit_v(b, a)


def mould_ari(a: Mould, b: Mould) -> Mould:
    """ari(A,B) = arit(B).A - arit(A).B + lu(A,B)."""
    a._like(b)
    _require_ari(a, b)
    return arit(b, a) - arit(a, b) + mould_lu(a, b)


# variable changes -----------------------------------------------------------

def swap_images(r: int, kind: str) -> list[tuple]:
    if kind == U:
        # A(v_r, v_{r-1}-v_r, ..., v_1-v_2)
        return [_unit(r, r - 1)] + [_diff(r, r - 1 - j, r - j) for j in range(1, r)]
    # inverse: B(u_1+...+u_r, u_1+...+u_{r-1}, ..., u_1)
    return [_sum_of(r, range(r - i)) for i in range(r)]


def mould_swap(a: Mould) -> Mould:
    kind = V if a.kind == U else U
    return a.map_components(lambda r, c: c.substitute_linear(swap_images(r, a.kind), r), kind)


def push_images(r: int) -> list[tuple]:
    return [_sum_of(r, range(r), -1)] + [_unit(r, t) for t in range(r - 1)]


def mould_push(a: Mould) -> Mould:
    """push(A)(u_1..u_r) = A(-u_1-...-u_r, u_1, ..., u_{r-1})."""
    if a.kind != U:
        raise KindMismatch("push acts on u-moulds")
    return a.map_components(lambda r, c: c.substitute_linear(push_images(r), r))


def is_push_invariant(a: Mould) -> bool:
    return mould_push(a) == a


# alternality ------------------------------------------------------------------

def shuffles(s: int, r: int) -> list[tuple[int, ...]]:
    """All interleavings of (0..s-1) with (s..r-1)."""
    out = []
    for pos in combinations(range(r), s):
        ps = set(pos)
        left, right = iter(range(s)), iter(range(s, r))
        out.append(tuple(next(left) if i in ps else next(right) for i in range(r)))
    return out


def alternality_defect(c: RatComponent, s: int) -> RatComponent:
    r = c.arity
    terms = [c.substitute_linear([_unit(r, w[t]) for t in range(r)], r) for w in shuffles(s, r)]
    return rat_sum(terms, r)


def is_alternal(a: Mould) -> bool:
    """Every shuffle sum of every split vanishes in every depth r > 1."""
    for r, c in a.components.items():
        if r < 2:
            continue
        for s in range(1, r):
            if not alternality_defect(c, s).is_zero():
                return False
    return True


def is_bialternal(a: Mould) -> bool:
    if a.kind != U:
        raise KindMismatch("bialternality is defined for u-moulds")
    return is_alternal(a) and is_alternal(mould_swap(a))


def reversal_holds(a: Mould) -> bool:
    """A(u_1..u_r) = (-1)^(r-1) A(u_r..u_1) in every depth."""
    for r, c in a.components.items():
        rev = c.substitute_linear([_unit(r, r - 1 - t) for t in range(r)], r)
        if not (rev.scale((-1) ** (r - 1)) == c):
            return False
    return True


# singularities ----------------------------------------------------------------

class SingularityReport:
    __slots__ = ("flags", "numerators", "kind")

    def __init__(self, kind: str, flags: dict[int, bool], numerators: dict[int, MPoly]):
        self.kind = kind
        self.flags = flags
        self.numerators = numerators

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "depths": {
                str(r): {"polynomial": f, "numerator": self.numerators[r].to_json() if f else None}
                for r, f in sorted(self.flags.items())
            },
        }


def clear_delta(c: RatComponent, kind: str = U) -> RatComponent:
    r = c.arity
    return c.mul_forms(delta_forms(r) if kind == U else delta_v_forms(r))


def singularity_report(a: Mould) -> SingularityReport:
    """Whether Delta_r A_r (Delta_v for v-moulds) is polynomial in each depth."""
    flags, nums = {}, {}
    for r, c in sorted(a.components.items()):
        cleared = clear_delta(c, a.kind)
        flags[r] = cleared.is_polynomial()
        if flags[r]:
            nums[r] = cleared.num
    return SingularityReport(a.kind, flags, nums)


def boundary_identity_holds(mcheck: MPoly) -> bool:
    """M̌(0, v_2, ..., v_r) == M̌(v_2, ..., v_r, 0)."""
    r = mcheck.arity
    zero = tuple([0] * r)
    left = mcheck.substitute_linear([zero] + [_unit(r, t) for t in range(1, r)], r)
    right = mcheck.substitute_linear([_unit(r, t) for t in range(1, r)] + [zero], r)
    return left == right


def check_boundary_identity(m: Mould) -> bool:
    """Boundary identity for a v-mould M whose Delta_v-cleared components are polynomial and which is alternal."""
    if m.kind != V:
        raise KindMismatch("the boundary identity concerns v-moulds")
    rep = singularity_report(m)
    if not rep.ok:
        raise ValueError("Delta_v * M is not polynomial")
    if not is_alternal(m):
        raise ValueError("M is not alternal")
    return all(boundary_identity_holds(p) for p in rep.numerators.values())


def random_mould(rng, bound: int = 4, max_degree: int = 2, span: int = 3, kind: str = U) -> Mould:
    """Polynomial mould with random integer coefficients in depths 1..bound, known through ``bound``."""
    comps = {}
    for r in range(1, bound + 1):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            deg = rng.randint(0, max_degree)
            e = [0] * r
            for _ in range(deg):
                e[rng.randrange(r)] += 1
            terms[tuple(e)] = Q(rng.randint(-span, span))
        comps[r] = MPoly(r, terms)
    return Mould(kind, comps, 0, bound)


def lyndon_ari_span(gens: list[Mould], max_length: int) -> dict[tuple, Mould]:
    """ari-bracketings of the generators along standard factorizations of Lyndon words.

    These span every iterated ari-bracket of the generators up to ``max_length`` factors.
    """
    from .ncalg import lyndon_words, standard_factorization
    out: dict[tuple, Mould] = {(i,): g for i, g in enumerate(gens)}
    for n in range(2, max_length + 1):
        for w in lyndon_words(n, len(gens)):
            left, right = standard_factorization(w)
            out[w] = mould_ari(out[left], out[right])
    return out


check_lemma_A2 = check_boundary_identity
