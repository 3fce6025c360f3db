"""The ari bracket on the depth-one moulds U_n, swap, and the 1/Delta singularities.

Run: python3 demos/moulds_and_ari.py
"""
from ellmould.mould import (
    is_alternal, is_bialternal, lyndon_ari_span, make_U, mould_ari, mould_swap, render, singularity_report,
)

U = {n: make_U(n) for n in (-2, 0, 2, 4)}
for n, m in U.items():
    print(f"U{n}: {render(m)}")

# U0 is central; U2 and U4 give a polynomial depth-2 mould divisible by Delta_2.
print("\nari(U0, U2):", render(mould_ari(U[0], U[2])) or "0")
x = mould_ari(U[2], U[4])
print("ari(U2, U4):", render(x))
print("  bialternal:", is_bialternal(x))
print("  swap:", render(mould_swap(x)))

# U_-2 = 1/u1 is singular, but brackets keep the poles inside 1/Delta_r.
y = mould_ari(U[-2], U[4])
print("\nari(U-2, U4):", render(y))
print("  Delta-cleared numerators polynomial:", singularity_report(y).ok)
print("  alternal:", is_alternal(y))

span = lyndon_ari_span([U[-2], U[2], U[4]], 3)
print(f"\n{len(span)} Lyndon brackets of U-2, U2, U4 up to length 3;",
      "all singular of the allowed kind:", all(singularity_report(m).ok for m in span.values()))
