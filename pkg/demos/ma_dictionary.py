"""Moving between Lie polynomials in a, b and polynomial moulds.

Run: python3 demos/ma_dictionary.py
"""
import random

from ellmould.bridge import ma, ma_inverse, psi
from ellmould.derivations import der_bracket, make_eps, poisson
from ellmould.mould import mould_ari, mould_push, render
from ellmould.ncalg import C, NcPoly, is_push_invariant, lie_bracket, random_lie

a = NcPoly.parse("a")
for i in (1, 2, 3):
    print(f"ma(C{i}) =", render(ma(C(i))))
print("ma([C1, C2]) =", render(ma(lie_bracket(C(1), C(2)))))

rng = random.Random(1)
p, q = random_lie(rng, 3, 1), random_lie(rng, 4, 2)
print("\nP =", p)
print("Q =", q)
print("ma({P, Q}) == ari(ma P, ma Q):", ma(poisson(p, q)) == mould_ari(ma(p), ma(q)))
print("ma([a, Q]) =", render(ma(lie_bracket(a, q))))
print("ma_inverse(ma Q) == Q:", ma_inverse(ma(q)) == q)

# Push invariance is visible on both sides.
d = der_bracket(make_eps(0), make_eps(6))
f = d.val_a
print("\n[eps0, eps6](a) push-invariant:", is_push_invariant(f), "| its mould:", mould_push(ma(f)) == ma(f))
print("a random Lie element:", is_push_invariant(q), "|", mould_push(ma(q)) == ma(q))

print("\nPsi([eps4, eps6]) =", render(psi(der_bracket(make_eps(4), make_eps(6)))))
