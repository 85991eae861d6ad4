"""Transfer an A-infinity structure to Ext of kD8 and print the nonzero m_4 values."""
from tamecoh.ainfty import kadeishvili_transfer
from tamecoh.fdalg import FDAlgebra
from tamecoh.ncalg import catalog
from tamecoh.resolve import Module, dg_endomorphism, minimal_resolution

H = catalog("HBD:q=2")


def label(d, D, k):
    # name a class by the unique H*BD monomial in its bidegree
    P = H.piece((-d,) + tuple(H.scale * x for x in D))
    return H.word_str(P.basis[0]) if P.dim == 1 else f"c{d}_{k}{list(D)}"


B = FDAlgebra.from_presentation(catalog("kD:q=2"))
r = minimal_resolution(B, Module.simple(B), 7)
T = kadeishvili_transfer(dg_endomorphism(r, N=6), 4, 6,
                         labels=label)
sp = T.space
for args, val in sorted(T.structure.table(4, 6).items()):
    print("m4(" + ",".join(sp.label(a) for a in args) + ") =", sp.vec_str(val))
print("m3 vanishes:", not T.structure.table(3, 6))
