"""Sparse multivariate polynomials over Q and rational functions whose
denominators are products of linear forms.

Exponent vectors are packed into one int, ``SHIFT`` bits per variable, so a
monomial product is an integer addition. Individual exponents must stay below
``2**SHIFT``.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping, Sequence

from .exact import ZERO, Q, Rational, fmt

SHIFT = 8
MASK = (1 << SHIFT) - 1
MAX_EXP = MASK


class ArityMismatch(ValueError):
    pass


class NotDivisible(ValueError):
    pass


def pack(exps: Sequence[int]) -> int:
    k = 0
    for i, e in enumerate(exps):
        if not 0 <= e <= MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        k |= e << (SHIFT * i)
    return k


def unpack(k: int, r: int) -> tuple[int, ...]:
    return tuple((k >> (SHIFT * i)) & MASK for i in range(r))


def _monomial_key(k: int, r: int):
    e = unpack(k, r)
    return (sum(e), tuple(-x for x in e))


class MPoly:
    """Polynomial in x_1..x_r (u's or v's by context) with rational coefficients."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping | None = None):
        self.arity = arity
        t = {}
        if terms:
            for e, c in terms.items():
                if isinstance(e, tuple):
                    if len(e) != arity:
                        raise ArityMismatch(f"exponent vector {e} for arity {arity}")
                    e = pack(e)
                c = Q(c)
                if c:
                    t[e] = t.get(e, ZERO) + c
            t = {e: c for e, c in t.items() if c}
        self.terms = t

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> "MPoly":
        p = cls.__new__(cls)
        p.arity = arity
        p.terms = terms
        return p

    @classmethod
    def const(cls, c, arity: int) -> "MPoly":
        c = Q(c)
        return cls._raw(arity, {0: c} if c else {})

    @classmethod
    def var(cls, i: int, arity: int) -> "MPoly":
        """x_{i+1} (0-based index)."""
        return cls._raw(arity, {1 << (SHIFT * i): Q(1)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "MPoly":
        r = len(coeffs)
        return cls._raw(r, {1 << (SHIFT * i): Q(c) for i, c in enumerate(coeffs) if c})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "MPoly":
        return cls(len(exps), {tuple(exps): coeff})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.arity == other.arity and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def items(self):
        """(exponent tuple, coeff) in graded lexicographic order, highest first."""
        r = self.arity
        return [(unpack(k, r), c) for k, c in sorted(self.terms.items(), key=lambda kv: _monomial_key(kv[0], r))]

    def degree(self) -> int:
        r = self.arity
        return max((sum(unpack(k, r)) for k in self.terms), default=-1)

    def degrees(self) -> set[int]:
        r = self.arity
        return {sum(unpack(k, r)) for k in self.terms}

    def coeff(self, exps: Sequence[int]) -> Rational:
        return self.terms.get(pack(exps), ZERO)

    def _check(self, other: "MPoly"):
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k, ZERO) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return MPoly._raw(self.arity, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MPoly":
        c = Q(c)
        if not c:
            return MPoly._raw(self.arity, {})
        return MPoly._raw(self.arity, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return MPoly._raw(self.arity, {})
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t: dict = {}
        get = t.get
        for k2, c2 in b.items():
            for k1, c1 in a.items():
                k = k1 + k2
                t[k] = get(k, ZERO) + c1 * c2
        return MPoly._raw(self.arity, {k: c for k, c in t.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = MPoly.const(1, self.arity)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def substitute_linear(self, images: Sequence[Sequence], arity: int | None = None) -> "MPoly":
        """Compose with x_i -> images[i], each image a coefficient vector over the new variables."""
        if len(images) != self.arity:
            raise ArityMismatch(f"{len(images)} images for arity {self.arity}")
        s = arity if arity is not None else (len(images[0]) if images else 0)
        if not self.terms:
            return MPoly._raw(s, {})
        r = self.arity
        # fast path: every image is a single variable with coefficient +-1
        simple = []
        for img in images:
            nz = [(j, c) for j, c in enumerate(img) if c]
            if len(nz) == 1 and nz[0][1] in (1, -1):
                simple.append(nz[0])
            else:
                simple = None
                break
        if simple is not None:
            t: dict = {}
            for k, c in self.terms.items():
                nk = 0
                sign = 1
                for i in range(r):
                    e = (k >> (SHIFT * i)) & MASK
                    if e:
                        j, cj = simple[i]
                        nk += e << (SHIFT * j)
                        if cj == -1 and e & 1:
                            sign = -sign
                t[nk] = t.get(nk, ZERO) + (c if sign == 1 else -c)
            return MPoly._raw(s, {k: c for k, c in t.items() if c})
        lin = [MPoly.linear(list(img) + [0] * (s - len(img))) if len(img) < s else MPoly.linear(img) for img in images]
        powers: list[dict[int, MPoly]] = [dict() for _ in range(r)]

        def pw(i, e):
            d = powers[i]
            if e not in d:
                d[e] = MPoly.const(1, s) if e == 0 else pw(i, e - 1) * lin[i]
            return d[e]

        def rec(i: int, terms: dict) -> MPoly:
            if i == r:
                c = terms.get(0, ZERO)
                return MPoly.const(c, s)
            groups: dict[int, dict] = {}
            sh = SHIFT * i
            for k, c in terms.items():
                e = (k >> sh) & MASK
                groups.setdefault(e, {})[k - (e << sh)] = c
            out = MPoly._raw(s, {})
            for e, sub in groups.items():
                inner = rec(i + 1, sub)
                out = out + (inner if e == 0 else inner * pw(i, e))
            return out

        return rec(0, self.terms)

    def evaluate(self, point: Sequence) -> Rational:
        total = ZERO
        pt = [Q(x) for x in point]
        for k, c in self.terms.items():
            v = c
            for i, e in enumerate(unpack(k, self.arity)):
                if e:
                    v *= pt[i] ** e
            total += v
        return total

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"MPoly({self.arity}, {str(self)!r})"

    def to_json(self) -> dict:
        return {"arity": self.arity, "terms": [{"exps": list(e), "coeff": fmt(c)} for e, c in self.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "MPoly":
        r = int(obj["arity"])
        return cls(r, {tuple(t["exps"]): Q(t["coeff"]) for t in obj["terms"]})


def poly_str(p: MPoly, var: str = "u") -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.items():
        mono = "*".join(f"{var}{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
        a = -c if c < 0 else c
        if not mono:
            body = fmt(a)
        elif a == 1:
            body = mono
        else:
            body = f"{fmt(a)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# linear forms ---------------------------------------------------------------

LinForm = tuple


def canonical_form(coeffs: Sequence) -> tuple[Rational, LinForm]:
    """Write a nonzero linear form as scalar * canonical form.

    The canonical form has coprime integer coefficients and first nonzero
    coefficient positive.
    """
    qs = [Q(c) for c in coeffs]
    nz = [c for c in qs if c]
    if not nz:
        raise ZeroDivisionError("linear form is identically zero")
    den = 1
    for c in nz:
        d = int(c.denominator)
        den = den * d // gcd(den, d)
    ints = [int(c * den) for c in qs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if nz[0] < 0:
        g = -g
    form = tuple(x // g for x in ints)
    return Q(g, den), form


def compose_form(form: LinForm, images: Sequence[Sequence], s: int) -> list:
    out = [0] * s
    for c, img in zip(form, images):
        if c:
            for j, x in enumerate(img):
                if x:
                    out[j] += c * x
    return out


def divide_exact(a: MPoly, form: Sequence) -> MPoly:
    """B with A = form * B, or raise NotDivisible.

    Synthetic division along the last variable that occurs in the form.
    """
    f = list(form)
    if len(f) != a.arity:
        raise ArityMismatch("form and polynomial arity differ")
    j = max((i for i, c in enumerate(f) if c), default=None)
    if j is None:
        raise ZeroDivisionError("division by the zero form")
    if not a.terms:
        return a
    cj = Q(f[j])
    sh = SHIFT * j
    g = {1 << (SHIFT * i): Q(c) for i, c in enumerate(f) if c and i != j}
    groups: dict[int, dict] = {}
    for k, c in a.terms.items():
        e = (k >> sh) & MASK
        groups.setdefault(e, {})[k - (e << sh)] = c
    top = max(groups)
    quot: dict = {}
    for d in range(top, 0, -1):
        rd = groups.get(d)
        if not rd:
            continue
        qd = {k: c / cj for k, c in rd.items() if c}
        if not qd:
            continue
        for k, c in qd.items():
            quot[k + ((d - 1) << sh)] = c
        lower = groups.setdefault(d - 1, {})
        for kg, cg in g.items():
            for k, c in qd.items():
                kk = k + kg
                lower[kk] = lower.get(kk, ZERO) - cg * c
    if any(groups.get(0, {}).values()):
        raise NotDivisible("nonzero remainder")
    return MPoly._raw(a.arity, quot)


def try_divide(a: MPoly, form: Sequence) -> MPoly | None:
    try:
        return divide_exact(a, form)
    except NotDivisible:
        return None


# rational components ----------------------------------------------------------

class RatComponent:
    """num / prod(form^mult) with canonical linear forms; normalized on construction.

    No denominator factor divides the numerator, so the representation is
    unique and equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Mapping[LinForm, int] | Iterable = (), normalize: bool = True):
        d: dict = {}
        items = den.items() if isinstance(den, Mapping) else den
        scale = Q(1)
        for form, m in items:
            if m <= 0:
                continue
            if len(form) != num.arity:
                raise ArityMismatch("denominator form arity differs from numerator")
            c, cf = canonical_form(form)
            if c != 1:
                scale /= c ** m
            d[cf] = d.get(cf, 0) + m
        self.num = num if scale == 1 else num.scale(scale)
        self.den = d
        if normalize:
            self._normalize()

    @classmethod
    def _raw(cls, num: MPoly, den: dict) -> "RatComponent":
        c = cls.__new__(cls)
        c.num = num
        c.den = den
        return c

    @classmethod
    def poly(cls, p: MPoly) -> "RatComponent":
        return cls._raw(p, {})

    @classmethod
    def zero(cls, arity: int) -> "RatComponent":
        return cls._raw(MPoly._raw(arity, {}), {})

    @property
    def arity(self) -> int:
        return self.num.arity

    def _normalize(self):
        if not self.num.terms:
            self.den = {}
            return
        num = self.num
        den = {}
        for form, m in self.den.items():
            while m:
                q = try_divide(num, form)
                if q is None:
                    break
                num = q
                m -= 1
            if m:
                den[form] = m
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return not self.den

    def den_items(self):
        return sorted(self.den.items())

    def __eq__(self, other):
        if isinstance(other, RatComponent):
            return (self - other).is_zero()
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.num, tuple(self.den_items())))

    def __neg__(self):
        return RatComponent._raw(-self.num, dict(self.den))

    def scale(self, c) -> "RatComponent":
        c = Q(c)
        if not c:
            return RatComponent.zero(self.arity)
        return RatComponent._raw(self.num.scale(c), dict(self.den))

    def __add__(self, other):
        if not isinstance(other, RatComponent):
            if other == 0:
                return self
            return NotImplemented
        return rat_sum([self, other])

    __radd__ = __add__

    def __sub__(self, other):
        return rat_sum([self, -other])

    def __mul__(self, other):
        if isinstance(other, MPoly):
            other = RatComponent.poly(other)
        if not isinstance(other, RatComponent):
            return self.scale(other)
        if self.arity != other.arity:
            raise ArityMismatch("arity mismatch")
        if self.is_zero() or other.is_zero():
            return RatComponent.zero(self.arity)
        den = dict(self.den)
        for f, m in other.den.items():
            den[f] = den.get(f, 0) + m
        out = RatComponent._raw(self.num * other.num, den)
        if self.den and other.num.degree() > 0 or other.den and self.num.degree() > 0:
            out._normalize()
        return out

    __rmul__ = scale

    def mul_forms(self, forms: Iterable[Sequence]) -> "RatComponent":
        """Multiply by a product of linear forms, cancelling against the denominator first."""
        num = self.num
        den = dict(self.den)
        for f in forms:
            c, cf = canonical_form(f)
            num = num.scale(c)
            if den.get(cf):
                den[cf] -= 1
                if not den[cf]:
                    del den[cf]
            else:
                num = num * MPoly.linear(cf)
        out = RatComponent._raw(num, den)
        out._normalize()
        return out

    def substitute_linear(self, images: Sequence[Sequence], arity: int | None = None) -> "RatComponent":
        s = arity if arity is not None else (len(images[0]) if images else 0)
        num = self.num.substitute_linear(images, s)
        if not self.den:
            return RatComponent._raw(num, {})
        den: dict = {}
        scale = Q(1)
        for f, m in self.den.items():
            c, cf = canonical_form(compose_form(f, images, s))
            if c != 1:
                scale /= c ** m
            den[cf] = den.get(cf, 0) + m
        if scale != 1:
            num = num.scale(scale)
        out = RatComponent._raw(num, den)
        out._normalize()
        return out

    def evaluate(self, point: Sequence) -> Rational:
        d = Q(1)
        for f, m in self.den.items():
            d *= sum((Q(c) * Q(x) for c, x in zip(f, point)), ZERO) ** m
        return self.num.evaluate(point) / d

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": [[list(f), m] for f, m in self.den_items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "RatComponent":
        return cls(MPoly.from_json(obj["num"]), [(tuple(f), int(m)) for f, m in obj["den"]])

    def __str__(self):
        return rat_str(self)

    def __repr__(self):
        return f"RatComponent({str(self)!r})"


def form_str(f: LinForm, var: str = "u") -> str:
    p = MPoly.linear(f)
    s = poly_str(p, var)
    return s if len([c for c in f if c]) == 1 else f"({s})"


def rat_str(c: RatComponent, var: str = "u") -> str:
    n = poly_str(c.num, var)
    if not c.den:
        return n
    d = "*".join(form_str(f, var) + (f"^{m}" if m > 1 else "") for f, m in c.den_items())
    if len(c.num) > 1:
        n = f"({n})"
    return f"{n}/({d})" if "*" in d else f"{n}/{d}"


def rat_sum(items: Iterable[RatComponent], arity: int | None = None) -> RatComponent:
    """Sum over one common denominator (maximal multiplicities), then normalize once."""
    items = list(items)
    if arity is None:
        if not items:
            raise ValueError("empty sum needs an arity")
        arity = items[0].arity
    items = [c for c in items if not c.is_zero()]
    if not items:
        return RatComponent.zero(arity)
    if len(items) == 1:
        return items[0]
    r = arity
    for c in items:
        if c.arity != r:
            raise ArityMismatch("arity mismatch in sum")
    lcm: dict = {}
    for c in items:
        for f, m in c.den.items():
            if m > lcm.get(f, 0):
                lcm[f] = m
    lin_cache: dict = {}
    total = MPoly._raw(r, {})
    for c in items:
        num = c.num
        for f, m in lcm.items():
            missing = m - c.den.get(f, 0)
            if missing:
                if f not in lin_cache:
                    lin_cache[f] = MPoly.linear(f)
                for _ in range(missing):
                    num = num * lin_cache[f]
        total = total + num
    out = RatComponent._raw(total, dict(lcm))
    out._normalize()
    return out


def rat_normalize(c: RatComponent) -> RatComponent:
    out = RatComponent._raw(c.num, dict(c.den))
    out._normalize()
    return out


def delta_forms(r: int) -> list[list[int]]:
    """Linear factors of Delta_r = u_1...u_r (u_1+...+u_r)."""
    forms = []
    for i in range(r):
        f = [0] * r
        f[i] = 1
        forms.append(f)
    forms.append([1] * r)
    return forms


def delta_v_forms(r: int) -> list[list[int]]:
    """Linear factors of Delta_v = v_1 (v_1-v_2) ... (v_{r-1}-v_r) v_r."""
    forms = []
    f = [0] * r
    f[0] = 1
    forms.append(f)
    for i in range(r - 1):
        f = [0] * r
        f[i], f[i + 1] = 1, -1
        forms.append(f)
    f = [0] * r
    f[-1] = 1
    forms.append(f)
    return forms


def product_of_forms(forms: Iterable[Sequence], arity: int) -> MPoly:
    out = MPoly.const(1, arity)
    for f in forms:
        out = out * MPoly.linear(f)
    return out
