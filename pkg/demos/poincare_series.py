"""Compare the semidihedral Poincare series with Ext dimensions from a minimal resolution."""
from tamecoh.ncalg import catalog
from tamecoh.resolve import graded_ext_dims
from tamecoh.series import compare_with_dims, expand, parse_series

R = catalog("HBSD:q=2")
p = parse_series(R.series)
print("series:", R.series)
print("t-coefficients:", {k: repr(v) for k, v in expand(p, 5, "t").items()})
dims = {(-k[0], k[1]): v for k, v in graded_ext_dims(R, 6, 14).items()}
bad = compare_with_dims(p, dims, 6, "t", covered=lambda e: e[1] <= 14)
print("mismatches through order 6:", bad or "none")
