"""Noncommutative polynomials over a finite alphabet.

Words are tuples of letter indices into the alphabet, so on ``AB = ("a", "b")``
the word ``aab`` is ``(0, 0, 1)``. Term order is graded lexicographic with the
alphabet order (a < b, b1 < b2 < ...).
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exact import ZERO, NoSolution, Q, Rational, fmt

Word = tuple

AB = ("a", "b")
A, B = 0, 1


class AlphabetMismatch(ValueError):
    pass


class NotInCSpan(ValueError):
    """A polynomial has a component outside the span of depth-r C-monomials."""


def b_alphabet(n: int) -> tuple[str, ...]:
    """The truncated alphabet b1 < b2 < ... < bn."""
    return tuple(f"b{i}" for i in range(1, n + 1))


def word_key(w: Word):
    return (len(w), w)


class NcPoly:
    """Finitely supported map from words to rationals; zero coefficients are never stored."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, terms: Mapping[Word, object] | None = None, alphabet: Sequence[str] = AB):
        self.alphabet = tuple(alphabet)
        t = {}
        if terms:
            n = len(self.alphabet)
            for w, c in terms.items():
                w = tuple(w)
                if any(not 0 <= x < n for x in w):
                    raise ValueError(f"word {w} outside alphabet {self.alphabet}")
                c = Q(c)
                if c:
                    t[w] = c
        self.terms = t

    @classmethod
    def _raw(cls, terms: dict, alphabet: tuple) -> "NcPoly":
        p = cls.__new__(cls)
        p.alphabet = alphabet
        p.terms = terms
        return p

    # construction -------------------------------------------------------
    @classmethod
    def word(cls, w, alphabet: Sequence[str] = AB, coeff=1) -> "NcPoly":
        if isinstance(w, str):
            w = parse_word(w, alphabet)
        return cls({tuple(w): coeff}, alphabet)

    @classmethod
    def one(cls, alphabet: Sequence[str] = AB) -> "NcPoly":
        return cls({(): 1}, alphabet)

    @classmethod
    def zero(cls, alphabet: Sequence[str] = AB) -> "NcPoly":
        return cls({}, alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str] = AB) -> "NcPoly":
        """Parse sums like ``"aab - 2*aba + 1/2 baa"``; the word ``1`` is the empty word."""
        out = {}
        s = text.replace(" ", "")
        if not s:
            return cls({}, alphabet)
        if s[0] not in "+-":
            s = "+" + s
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            m = re.fullmatch(r"(\d+(?:/\d+)?)?\*?(.*)", body)
            coeff = Q(m.group(1)) if m.group(1) else Q(1)
            wtxt = m.group(2)
            if wtxt in ("", "1"):
                if not m.group(1) and wtxt == "":
                    raise ValueError(f"empty term in {text!r}")
                w = ()
            else:
                w = parse_word(wtxt, alphabet)
            if sign == "-":
                coeff = -coeff
            out[w] = out.get(w, ZERO) + coeff
        return cls(out, alphabet)

    # basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def coeff(self, w) -> Rational:
        if isinstance(w, str):
            w = parse_word(w, self.alphabet)
        return self.terms.get(tuple(w), ZERO)

    def items(self):
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def _check(self, other: "NcPoly"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            v = t.get(w, ZERO) + c
            if v:
                t[w] = v
            else:
                t.pop(w, None)
        return NcPoly._raw(t, self.alphabet)

    def __neg__(self):
        return NcPoly._raw({w: -c for w, c in self.terms.items()}, self.alphabet)

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "NcPoly":
        c = Q(c)
        if not c:
            return NcPoly._raw({}, self.alphabet)
        return NcPoly._raw({w: c * v for w, v in self.terms.items()}, self.alphabet)

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            return nc_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # gradings -----------------------------------------------------------
    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def depths(self) -> set[int]:
        return {w.count(B) for w in self.terms}

    def degree(self) -> int:
        """The common word length; raises if not homogeneous."""
        d = self.degrees()
        if len(d) != 1:
            raise ValueError(f"not homogeneous in degree: {sorted(d)}")
        return d.pop()

    def depth(self) -> int:
        d = self.depths()
        if len(d) != 1:
            raise ValueError(f"not homogeneous in depth: {sorted(d)}")
        return d.pop()

    def homogeneous_parts(self, key=len) -> dict[int, "NcPoly"]:
        parts: dict[int, dict] = {}
        for w, c in self.terms.items():
            parts.setdefault(key(w), {})[w] = c
        return {k: NcPoly._raw(v, self.alphabet) for k, v in sorted(parts.items())}

    def depth_parts(self) -> dict[int, "NcPoly"]:
        return self.homogeneous_parts(key=lambda w: w.count(B))

    # rendering ----------------------------------------------------------
    def word_str(self, w: Word) -> str:
        return "".join(self.alphabet[x] for x in w) if w else "1"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for w, c in self.items():
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            ws = self.word_str(w)
            if a == 1:
                body = ws
            elif ws == "1":
                body = fmt(a)
            else:
                body = f"{fmt(a)}*{ws}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"NcPoly({str(self)!r})"

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "terms": [{"word": "".join(self.alphabet[x] for x in w), "coeff": fmt(c)} for w, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NcPoly":
        alphabet = tuple(obj["alphabet"])
        terms: dict = {}
        for t in obj["terms"]:
            w = parse_word(t["word"], alphabet)
            terms[w] = terms.get(w, ZERO) + Q(t["coeff"])
        return cls(terms, alphabet)


def parse_word(text: str, alphabet: Sequence[str] = AB) -> Word:
    """Greedy longest-match tokenization of a word over ``alphabet``."""
    letters = sorted(range(len(alphabet)), key=lambda i: -len(alphabet[i]))
    out = []
    i = 0
    while i < len(text):
        for k in letters:
            name = alphabet[k]
            if text.startswith(name, i):
                out.append(k)
                i += len(name)
                break
        else:
            raise ValueError(f"cannot parse {text!r} over {alphabet}")
    return tuple(out)


def nc_mul(p: NcPoly, q: NcPoly) -> NcPoly:
    """Bilinear extension of concatenation."""
    p._check(q)
    t: dict = {}
    get = t.get
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            w = w1 + w2
            t[w] = get(w, ZERO) + c1 * c2
    return NcPoly._raw({w: c for w, c in t.items() if c}, p.alphabet)


def lie_bracket(p: NcPoly, q: NcPoly) -> NcPoly:
    return nc_mul(p, q) - nc_mul(q, p)


def letter(name: str, alphabet: Sequence[str] = AB) -> NcPoly:
    return NcPoly({(tuple(alphabet).index(name),): 1}, alphabet)


def ad_power(x: NcPoly, k: int, y: NcPoly) -> NcPoly:
    for _ in range(k):
        y = lie_bracket(x, y)
    return y


# Dynkin test ----------------------------------------------------------------

def dynkin_theta(p: NcPoly) -> NcPoly:
    """Left-normed bracketing theta(x1...xn) = [..[x1,x2],..,xn], extended linearly.

    Words are grouped by their last letter before recursing, so each distinct
    suffix in the support is visited once.
    """
    if not p.terms:
        return p
    n = next(iter(p.terms))
    if len(n) <= 1:
        return p
    groups: dict[int, dict] = {}
    for w, c in p.terms.items():
        groups.setdefault(w[-1], {})[w[:-1]] = c
    out: dict = {}
    for x, sub in groups.items():
        th = dynkin_theta(NcPoly._raw(sub, p.alphabet))
        for w, c in th.terms.items():
            k1 = w + (x,)
            out[k1] = out.get(k1, ZERO) + c
            k2 = (x,) + w
            out[k2] = out.get(k2, ZERO) - c
    return NcPoly._raw({w: c for w, c in out.items() if c}, p.alphabet)


def is_lie(p: NcPoly) -> bool:
    """Dynkin criterion on each homogeneous component: theta(P_n) = n P_n."""
    for n, part in p.homogeneous_parts().items():
        if n == 0:
            return False
        if dynkin_theta(part) != part.scale(n):
            return False
    return True


# Lyndon basis ---------------------------------------------------------------

def lyndon_words(n: int, k: int = 2):
    """Lyndon words of length n over {0..k-1} in lexicographic order (Duval)."""
    w = [-1]
    out = []
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def _is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else len(w) == 1


def standard_factorization(w: Word) -> tuple[Word, Word]:
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("single letter has no factorization")


@lru_cache(maxsize=None)
def _lyndon_terms(w: Word, alphabet: tuple):
    if len(w) == 1:
        return {w: Q(1)}
    u, v = standard_factorization(w)
    pu = NcPoly._raw(_lyndon_terms(u, alphabet), alphabet)
    pv = NcPoly._raw(_lyndon_terms(v, alphabet), alphabet)
    return lie_bracket(pu, pv).terms


def lyndon_bracket(w, alphabet: Sequence[str] = AB) -> NcPoly:
    """Standard bracketing of a Lyndon word, expanded."""
    if isinstance(w, str):
        w = parse_word(w, alphabet)
    return NcPoly._raw(dict(_lyndon_terms(tuple(w), tuple(alphabet))), tuple(alphabet))


def lyndon_lie_basis(weight: int, depth: int | None = None) -> list[tuple[Word, NcPoly]]:
    """Lyndon basis of the weight-n (optionally depth-d) part of Lie[a,b].

    Returns ``(lyndon_word, expanded_bracket)`` pairs in lexicographic order.
    """
    if weight < 1:
        raise ValueError("weight must be >= 1")
    words = lyndon_words(weight, 2)
    if depth is not None:
        words = [w for w in words if w.count(B) == depth]
    return [(w, lyndon_bracket(w)) for w in words]


def witt_dimension(n: int, k: int = 2) -> int:
    """(1/n) sum_{d | n} mu(d) k^(n/d)."""
    def mobius(m):
        res, p = 1, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                res = -res
            p += 1
        return -res if m > 1 else res

    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def lyndon_coordinates(p: NcPoly) -> dict[Word, Rational]:
    """Coordinates of a Lie polynomial on the Lyndon basis by triangular elimination.

    The lexicographically smallest word of the expansion of a standard bracket
    is its Lyndon word, with coefficient 1. Raises ``NoSolution`` if ``p`` is not Lie.
    """
    if p.alphabet != AB:
        raise AlphabetMismatch("Lyndon coordinates are implemented over {a,b}")
    res = dict(p.terms)
    out: dict = {}
    while res:
        w = min(res, key=word_key)
        if not _is_lyndon(w):
            raise NoSolution("not a Lie polynomial")
        c = res[w]
        out[w] = c
        for u, d in _lyndon_terms(w, AB).items():
            v = res.get(u, ZERO) - c * d
            if v:
                res[u] = v
            else:
                res.pop(u, None)
    return out


# push -----------------------------------------------------------------------

def _a_runs(w: Word) -> list[int]:
    runs = [0]
    for x in w:
        if x == B:
            runs.append(0)
        else:
            runs[-1] += 1
    return runs


def _from_runs(runs: Sequence[int]) -> Word:
    out: list[int] = []
    for i, n in enumerate(runs):
        if i:
            out.append(B)
        out.extend([A] * n)
    return tuple(out)


def push_word(w: Word) -> Word:
    runs = _a_runs(w)
    if len(runs) == 1:
        return w
    return _from_runs([runs[-1]] + runs[:-1])


def push_poly(p: NcPoly) -> NcPoly:
    if p.alphabet != AB:
        raise AlphabetMismatch("push is defined on Q<a,b>")
    return NcPoly._raw({push_word(w): c for w, c in p.terms.items()}, AB)


def is_push_invariant(p: NcPoly) -> bool:
    return push_poly(p) == p


# C-monomials ----------------------------------------------------------------

@lru_cache(maxsize=None)
def _c_terms(i: int):
    """ad(a)^(i-1)(b) = sum_k (-1)^k binom(i-1,k) a^(i-1-k) b a^k."""
    from math import comb
    return {(A,) * (i - 1 - k) + (B,) + (A,) * k: Q((-1) ** k * comb(i - 1, k)) for k in range(i)}


def C(i: int) -> NcPoly:
    """C_i = ad(a)^(i-1)(b), i >= 1."""
    if i < 1:
        raise ValueError("C_i needs i >= 1")
    return NcPoly._raw(dict(_c_terms(i)), AB)


@lru_cache(maxsize=4096)
def _c_monomial_terms(comp: tuple):
    if len(comp) == 1:
        return _c_terms(comp[0])
    left = NcPoly._raw(_c_monomial_terms(comp[:-1]), AB)
    return nc_mul(left, NcPoly._raw(_c_terms(comp[-1]), AB)).terms


def c_monomial(comp: Sequence[int]) -> NcPoly:
    """Expanded product C_{i1} ... C_{ir}."""
    return NcPoly._raw(dict(_c_monomial_terms(tuple(comp))), AB)


def expand_c(coords: Mapping[tuple, object]) -> NcPoly:
    acc: dict = {}
    for comp, c in coords.items():
        c = Q(c)
        for w, d in _c_monomial_terms(tuple(comp)).items():
            acc[w] = acc.get(w, ZERO) + c * d
    return NcPoly._raw({w: c for w, c in acc.items() if c}, AB)


def rewrite_in_C(p: NcPoly, depth: int | None = None) -> dict[tuple, Rational]:
    """Coordinates of ``p`` on the C-monomials C_{i1}...C_{ir} of depth r.

    Eliminates the word a^{i1-1}b...a^{ir-1}b with the lexicographically
    largest composition first; C_i-monomials only contain words ending in b
    whose compositions are lexicographically <= their own, with coefficient 1
    on the diagonal.
    """
    if p.alphabet != AB:
        raise AlphabetMismatch("rewrite_in_C works over {a,b}")
    if not p.terms:
        return {}
    if depth is None:
        depths = p.depths()
        if len(depths) != 1:
            raise NotInCSpan(f"not depth-homogeneous: {sorted(depths)}")
        depth = depths.pop()
    if depth < 1:
        raise NotInCSpan("depth-0 words are not in the C-span")
    res = dict(p.terms)
    for w in res:
        if w.count(B) != depth:
            raise NotInCSpan(f"word of depth {w.count(B)} in a depth-{depth} rewrite")
    out: dict = {}
    while True:
        best = None
        for w in res:
            if w and w[-1] == B:
                comp = tuple(n + 1 for n in _a_runs(w)[:-1])
                if best is None or comp > best:
                    best = comp
        if best is None:
            break
        lead = _from_runs([i - 1 for i in best] + [0])
        c = res[lead]
        out[best] = c
        for w, d in _c_monomial_terms(best).items():
            v = res.get(w, ZERO) - c * d
            if v:
                res[w] = v
            else:
                res.pop(w, None)
    if res:
        raise NotInCSpan("nonzero residue after elimination")
    return out


# star projection ------------------------------------------------------------

def star_projection(p: NcPoly, depth: int | None = None, n: int | None = None) -> NcPoly:
    """P_*: drop words ending in a, rewrite a^{n0}b...a^{n_{d-1}}b as b_{n0+1}...b_{n_{d-1}+1},
    and add sum_i ((-1)^(i-1)/i) (P|a^(i-1)b) b_1^i.

    ``depth`` checks depth-homogeneity. The b-alphabet is truncated at ``n``
    letters (default: the maximal degree of ``p``).
    """
    if p.alphabet != AB:
        raise AlphabetMismatch("star projection starts from Q<a,b>")
    if depth is not None and p.terms and p.depths() != {depth}:
        raise ValueError(f"star_projection: input is not homogeneous of depth {depth}")
    if n is None:
        n = max(p.degrees(), default=1) or 1
    alph = b_alphabet(n)
    out: dict = {}
    for w, c in p.terms.items():
        if not w or w[-1] != B:
            continue
        runs = _a_runs(w)[:-1]
        if any(r >= n for r in runs):
            raise ValueError(f"letter b{max(runs) + 1} beyond truncation b{n}")
        nw = tuple(runs)
        out[nw] = out.get(nw, ZERO) + c
    for i in range(1, n + 1):
        c = p.terms.get((A,) * (i - 1) + (B,), ZERO)
        if c:
            nw = (0,) * i
            out[nw] = out.get(nw, ZERO) + Q((-1) ** (i - 1), i) * c
    return NcPoly({w: c for w, c in out.items() if c}, alph)


def monomials_start_end_b(p: NcPoly) -> list[Word]:
    return [w for w in p.terms if w and w[0] == B and w[-1] == B]


def random_lie(rng, weight: int, depth: int, span: int = 3) -> NcPoly:
    """Random integer combination of Lyndon basis elements of given weight and depth."""
    basis = lyndon_lie_basis(weight, depth)
    out = NcPoly.zero()
    while basis and out.is_zero():
        for _, e in basis:
            out = out + e.scale(rng.randint(-span, span))
    return out
