"""Find the first depth-3 relation among the highest-weight elements and lift it.

Run: python3 demos/weight16_relation.py
"""
from ellmould.bridge import psi
from ellmould.exact import fmt
from ellmould.relations import express_in_family, lift_relation, relation_kernel

# Depth 2 first: at weight 14 the two h elements are dependent.
cert = relation_kernel(14, 2)
print("weight 14, depth 2 basis:", cert.labels)
print("  kernel:", [[fmt(x) for x in v] for v in cert.kernel])
print("  relation is the zero derivation:", cert.relation().is_zero())

# Depth 3 is only a relation modulo triple brackets of ad(a)^i b.
cert = relation_kernel(16, 3)
print("\nweight 16, depth 3 basis:", cert.labels)
print("  kernel:", [[fmt(x) for x in v] for v in cert.kernel])
witness = cert.theta3[0]
print("  triple-bracket witness uses", len([c for c in witness.coeffs.values() if c]), "terms")

# The same relation, written with brackets of three eps generators.
lift = lift_relation(cert)
print("  lift:")
for (x, y, z), c in sorted(lift.items()):
    print(f"    {fmt(c)} * [eps({x}), [eps({y}), eps({z})]]")
print("  free parameters in the lift:", cert.lift_free_dimension)
print("  certificate re-verifies:", cert.verify())

# Its mould lives in depth 3 and is a combination of ari(U, ari(U, U)).
m = psi(cert.relation())
comp = m[3].num
print(f"\nmould of the relation: depth {m.depths()}, {len(dict(comp.items()))} terms of degree {comp.degrees()}")
for (r, s, t), c in sorted(express_in_family(m, 10).items()):
    print(f"    {fmt(c)} * ari(U{r}, ari(U{s}, U{t}))")
