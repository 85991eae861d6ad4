"""Hochschild cohomology of H*BD through Cliff(q), checked against the Koszul complex."""
from tamecoh.hochci import clifford_complex, degree_monomial_enumeration, hh_ci, koszul_hh

C = clifford_complex("HBD:q=2")
print("\n".join(C.relations()))
for k, v in C.differential_text().items():
    print(f"d({k}) = {v}")

keys = [(H,) + E for H, E in C.degrees(5, 16)]
a = hh_ci("HBD:q=2", degrees=keys)
b = koszul_hh("HBD:q=2", degrees=keys)
print(f"{len(keys)} slices, Clifford and Koszul routes agree: {a.dims == b.dims}")

hits = degree_monomial_enumeration("HHBD:q=2", lambda n: (-n, n - 2, 0, 0), range(3, 13))
print("monomials in degree (-n, n-2, 0, 0):", {n: m for n, m in hits.items() if m})
