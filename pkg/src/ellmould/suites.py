"""Named verification suites run by ``ellmould verify``.

Each check is a zero-argument callable returning a bool; results keep the
declaration order so output is stable.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import bridge, derivations as dv, mould as md, ncalg as nc, relations as rel
from .exact import Q
from .mpoly import MPoly


@dataclass
class SuiteResult:
    name: str
    checks: list[tuple[str, bool, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [{"id": c, "pass": p} for c, p, _ in self.checks],
        }

    def lines(self, timings: bool = True) -> list[str]:
        out = []
        for cid, p, t in self.checks:
            line = f"{'PASS' if p else 'FAIL'}  {cid}"
            if timings:
                line += f"  ({t:.2f}s)"
            out.append(line)
        out.append(f"{self.name}: {'ok' if self.ok else 'FAILED'}")
        return out


def run_checks(name: str, checks: list[tuple[str, Callable[[], bool]]]) -> SuiteResult:
    res = SuiteResult(name)
    for cid, fn in checks:
        t = time.perf_counter()
        try:
            ok = bool(fn())
        except Exception:  # a crashing check is a failed check
            ok = False
        res.checks.append((cid, ok, time.perf_counter() - t))
    return res


# core -----------------------------------------------------------------------------

AB_BRACKET = nc.lie_bracket(nc.NcPoly.parse("a"), nc.NcPoly.parse("b"))


def _eps_brackets_up_to(weight: int) -> list[dv.Derivation]:
    gens = [dv.make_eps(n) for n in range(4, weight + 1, 2)]
    out = list(gens)
    layer = list(gens)
    while layer:
        nxt = []
        for g in gens:
            for x in layer:
                if g.weight + x.weight <= weight:
                    y = dv.der_bracket(g, x)
                    if not y.is_zero():
                        nxt.append(y)
        out.extend(nxt)
        layer = nxt[:12]
    return out


def eps2_central(weight: int = 16) -> bool:
    e2 = dv.make_eps(2)
    return all(dv.der_bracket(e2, x).is_zero() for x in _eps_brackets_up_to(weight - 2))


def core_checks() -> list[tuple[str, Callable[[], bool]]]:
    checks = []
    for i in range(9):
        checks.append((f"eps_{2 * i}-kills-[a,b]", lambda i=i: dv.apply(dv.make_eps(2 * i), AB_BRACKET).is_zero()))
    checks += [
        ("eps_2-central", eps2_central),
        ("eps_2i(a)-push-invariant", lambda: all(nc.is_push_invariant(dv.make_eps(n).val_a) for n in range(2, 17, 2))),
        ("lyndon-count-matches-witt", lambda: all(len(nc.lyndon_lie_basis(n)) == nc.witt_dimension(n)
                                                  for n in range(1, 13))),
        ("h-highest-weight", lambda: all(dv.is_highest_weight(dv.make_h(p, q, d).derivation)
                                         for p, q, d in [(2, 8, 2), (4, 6, 2), (2, 10, 3), (4, 8, 3), (6, 6, 3)])),
        ("h-parity-symmetry", lambda: all(dv.make_h(q, p, d).derivation ==
                                          dv.make_h(p, q, d).derivation.scale((-1) ** (d + 1))
                                          for p, q, d in [(2, 4, 2), (2, 6, 3), (4, 6, 2), (2, 8, 3)])),
        ("depth2-weight14-relation-vanishes", lambda: (
            dv.make_h(2, 8, 2).derivation - dv.make_h(4, 6, 2).derivation.scale(3)).is_zero()),
        ("poisson-bracket-matches-derivations", _poisson_vs_derivations),
    ]
    return checks


def _poisson_vs_derivations() -> bool:
    rng = random.Random(7)
    for _ in range(5):
        p = nc.random_lie(rng, rng.randint(2, 4), 1 if rng.random() < .5 else 2)
        q = nc.random_lie(rng, rng.randint(2, 4), 1)
        lhs = dv.der_bracket(dv.poisson_derivation(p), dv.poisson_derivation(q))
        rhs = dv.poisson_derivation(dv.poisson(p, q))
        if lhs.val_b != rhs.val_b or not lhs.val_a.is_zero():
            return False
    return True


# mould --------------------------------------------------------------------------

def psi_homomorphism_pairs(top: int = 6) -> bool:
    for i in range(top + 1):
        for j in range(top + 1):
            lhs = bridge.psi(dv.der_bracket(dv.make_eps(2 * i), dv.make_eps(2 * j)))
            rhs = md.mould_ari(md.make_U(2 * i - 2), md.make_U(2 * j - 2))
            if lhs != rhs:
                return False
    return True


def psi_homomorphism_depth3() -> bool:
    e4, e6 = dv.make_eps(4), dv.make_eps(6)
    lhs = bridge.psi(dv.der_bracket(e4, dv.der_bracket(e4, e6)))
    U2, U4 = md.make_U(2), md.make_U(4)
    return lhs == md.mould_ari(U2, md.mould_ari(U2, U4))


def singular_closure(gens=(-2, 2, 4, 6, 8), bound: int = 4) -> bool:
    """Delta_r times every component of the ari-brackets of the U generators is polynomial, through ``bound``."""
    span = md.lyndon_ari_span([md.make_U(g) for g in gens], bound)
    return all(md.singularity_report(m).ok for m in span.values())


def _ma_samples(rng, count: int):
    for _ in range(count):
        wp, dp = rng.randint(2, 6), rng.randint(1, 2)
        wq, dq = rng.randint(2, 6), rng.randint(1, 2)
        if dp > wp - 1:
            dp = 1
        if dq > wq - 1:
            dq = 1
        yield nc.random_lie(rng, wp, dp), nc.random_lie(rng, wq, dq)


def ma_poisson_homomorphism(count: int = 10, seed: int = 11) -> bool:
    rng = random.Random(seed)
    for p, q in _ma_samples(rng, count):
        if bridge.ma(dv.poisson(p, q)) != md.mould_ari(bridge.ma(p), bridge.ma(q)):
            return False
    return True


def mould_checks() -> list[tuple[str, Callable[[], bool]]]:
    U0, U2, U4 = md.make_U(0), md.make_U(2), md.make_U(4)
    closed = md.Mould(md.U, {2: MPoly.monomial((1, 1)) * MPoly.linear([1, 1]) * MPoly.linear([1, -1])
                             * (MPoly.linear([1, 1]) ** 2 * MPoly.const(2, 2) + MPoly.monomial((1, 1)))
                             .scale(-1)})
    return [
        ("ari(U0,U2)=0", lambda: md.mould_ari(U0, U2).is_zero()),
        ("ari(U2,U4)-closed-form", lambda: md.mould_ari(U2, U4) == closed),
        ("swap-involutive", lambda: md.mould_swap(md.mould_swap(md.mould_ari(U2, U4))) == md.mould_ari(U2, U4)),
        ("push-order", lambda: _push_order(random.Random(3))),
        ("psi-homomorphism-depth2", psi_homomorphism_pairs),
        ("psi-homomorphism-depth3", psi_homomorphism_depth3),
        ("ma-poisson-homomorphism", ma_poisson_homomorphism),
        ("singular-closure-depth3", lambda: singular_closure(bound=3)),
        ("U-bialternal", lambda: all(md.is_bialternal(md.make_U(n)) for n in (-2, 0, 2, 4))),
    ]


def _push_order(rng) -> bool:
    m = md.random_mould(rng, 4, 3)
    for r in range(1, 5):
        x = md.Mould(md.U, {r: m[r]})
        y = x
        for _ in range(r + 1):
            y = md.mould_push(y)
        if y != x:
            return False
    return True


# main pipeline --------------------------------------------------------------------

PUBLISHED_LIFT = [(Q(-345, 8), (6, 6, 4)), (Q(231, 20), (4, 8, 2))]
PUBLISHED_LIFT_EPS4 = [(Q(-345, 8), (6, 6, 4)), (Q(231, 20), (4, 8, 4))]


def weight16_pipeline() -> rel.RelationCertificate:
    cert = rel.relation_kernel(16, 3)
    if cert.kernel:
        rel.lift_relation(cert)
        d = cert.relation()
        cert.reference_checks = {
            "published_lift": rel.compare_bracket_combination(d, PUBLISHED_LIFT),
            "published_lift_eps2_as_eps4": rel.compare_bracket_combination(d, PUBLISHED_LIFT_EPS4),
        }
    return cert


def main_checks() -> list[tuple[str, Callable[[], bool]]]:
    state: dict = {}

    def cert():
        if "c" not in state:
            state["c"] = weight16_pipeline()
        return state["c"]

    def kernel_ok():
        c = cert()
        return len(c.kernel) == 1 and [int(x) for x in c.kernel[0]] == [4, -25, 21]

    def psi_in_family():
        d = cert().relation()
        m = bridge.psi(d)
        if m.depths() != [3] or not m[3].is_polynomial() or not md.is_bialternal(m):
            return False
        coeffs = rel.express_in_family(m, 10)
        fam = dict(rel.u_family_depth3(10))
        total = md.Mould(md.U, {})
        for k, c in coeffs.items():
            total = total + fam[k].scale(c)
        return total == m

    return [
        ("weight16-depth3-kernel", kernel_ok),
        ("weight16-highest-weight", lambda: all(cert().highest_weight)),
        ("weight16-theta3-witness", lambda: cert().theta3[0].recombine() == cert().relation().val_a),
        ("weight16-lift", lambda: cert().lift is not None
         and rel.lift_derivation(cert().lift) == cert().relation()),
        ("weight16-lift-uses-r,s,t>=1", lambda: all(min(k) >= 4 for k in cert().lift)),
        ("weight16-psi-in-U-family", psi_in_family),
        ("weight16-certificate-reverifies", lambda: cert().verify()),
        ("weight14-depth2-kernel", lambda: [[int(x) for x in v] for v in rel.relation_kernel(14, 2).kernel]
         == [[1, -3]]),
        ("weight12-depth2-empty", lambda: rel.relation_kernel(12, 2).kernel == []),
    ]


# flexion identities ---------------------------------------------------------------

def u_elements(max_depth: int = 3) -> list[md.Mould]:
    """A few elements of the ari-algebra generated by the U's, through depth 3."""
    U = md.make_U
    out = [U(-2), U(2), U(4), U(6)]
    if max_depth >= 2:
        out += [md.mould_ari(U(2), U(4)), md.mould_ari(U(-2), U(4)), md.mould_ari(U(-2), U(6))]
    if max_depth >= 3:
        out += [md.mould_ari(U(2), md.mould_ari(U(-2), U(4))), md.mould_ari(U(4), md.mould_ari(U(2), U(4)))]
    return out


def swap_equivariance() -> bool:
    elems = u_elements(2)
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if a.max_depth() + b.max_depth() > 3:
                continue
            lhs = md.mould_ari(md.mould_swap(a), md.mould_swap(b))
            if lhs != md.mould_swap(md.mould_ari(a, b)):
                return False
    return True


def boundary_identity_on_u() -> bool:
    return all(md.check_boundary_identity(md.mould_swap(x)) for x in u_elements(3) if x.max_depth() >= 2)


def alternality_preserved(count: int = 6, seed: int = 5) -> bool:
    rng = random.Random(seed)
    for _ in range(count):
        a = bridge.ma(nc.random_lie(rng, rng.randint(2, 5), 1 if rng.random() < .5 else 2))
        b = bridge.ma(nc.random_lie(rng, rng.randint(2, 5), 1))
        if not (md.is_alternal(a) and md.is_alternal(b) and md.is_alternal(md.mould_ari(a, b))):
            return False
    return True


def flexion_checks() -> list[tuple[str, Callable[[], bool]]]:
    return [
        ("swap-equivariance-on-U", swap_equivariance),
        ("boundary-identity-on-swapped-U", boundary_identity_on_u),
        ("alternality-preserved-by-ari", alternality_preserved),
        ("alternal-reversal", lambda: all(md.reversal_holds(x) for x in u_elements(3))),
        ("U-elements-push-invariant", lambda: all(md.is_push_invariant(x) for x in u_elements(3))),
    ]


# da and Darit ---------------------------------------------------------------------

def arit_commutator(seed: int = 2, count: int = 3) -> bool:
    rng = random.Random(seed)
    for _ in range(count):
        a, b, c = (md.random_mould(rng, 4, 2) for _ in range(3))
        lhs = md.arit(b, md.arit(a, c)) - md.arit(a, md.arit(b, c))
        if lhs != md.arit(md.mould_ari(a, b), c):
            return False
    return True


def darit_identity(sign: int, seed: int = 4, count: int = 4) -> bool:
    """sign * da(D_U(F)) == Darit_U . da(F) for U in {C3, C5} and random Lie F of depth <= 3."""
    rng = random.Random(seed)
    for u in (nc.C(3), nc.C(5)):
        du = bridge.derivation_of(u)
        samples = [nc.C(n) for n in (2, 3, 4)]
        for _ in range(count):
            d = rng.randint(1, 3)
            samples.append(nc.random_lie(rng, rng.randint(d + 1, d + 4), d))
        for f in samples:
            lhs = bridge.da(dv.apply(du, f))
            if sign < 0:
                lhs = -lhs
            if lhs != bridge.darit(u, bridge.da(f)):
                return False
    return True


def closed_forms_agree() -> bool:
    return all(bridge.closed_form_leibniz(u, n) == bridge.closed_form_flexion(u, n)
               for u in (nc.C(3), nc.C(5)) for n in (2, 3, 4, 5))


def psi_bracket_closure() -> bool:
    e = dv.make_eps
    ds = [e(4), e(6), e(8), dv.der_bracket(e(4), e(6)), dv.der_bracket(e(0), e(6))]
    for i, x in enumerate(ds):
        for y in ds[i + 1:]:
            if x.weight + y.weight > 16:
                continue
            if bridge.psi(dv.der_bracket(x, y)) != md.mould_ari(bridge.psi(x), bridge.psi(y)):
                return False
    return True


def bridge_checks() -> list[tuple[str, Callable[[], bool]]]:
    return [
        ("arit-commutator-identity", arit_commutator),
        ("da-intertwines-darit", lambda: darit_identity(+1)),
        ("depth1-closed-forms-agree", closed_forms_agree),
        ("psi-bracket-morphism", psi_bracket_closure),
    ]


SUITES = {
    "core": core_checks,
    "mould": mould_checks,
    "main": main_checks,
    "appendix-a": flexion_checks,
    "appendix-b": bridge_checks,
}


def run_suite(name: str) -> SuiteResult:
    if name == "all":
        res = SuiteResult("all")
        for key, fn in SUITES.items():
            sub = run_checks(key, fn())
            res.checks += [(f"{key}/{c}", p, t) for c, p, t in sub.checks]
        return res
    if name not in SUITES:
        raise KeyError(name)
    return run_checks(name, SUITES[name]())
