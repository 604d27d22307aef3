"""
The diagonal of a suspension
============================

On a suspension the Alexander-Whitney diagonal is cocommutative only up to
homotopy.  The twisting cochain has a quadratic part built from the reduced
diagonal of the desuspended space and nothing beyond it.  We print the
quadratic part for the suspended torus and compare the induced loop
comultiplication with its closed form.
"""

from cohoch.comult import aw_omega, loop_comultiplication, suspension_comult_closed_form
from cohoch.simplicial import ProductSet, simplicial_suspension, sphere

S1 = sphere(1)
K = simplicial_suspension(ProductSet(S1, S1))
A = aw_omega(K, 5)
C = A.C

for n in range(1, 6):
    for e in C.reduced_basis(n):
        comps = A.omega.components(e)
        if comps.get(2):
            terms = " ".join(f"{c:+d} [{' | '.join(A.CC.complex.label(t) for t in w)}]"
                             for w, c in sorted(comps[2].items(), key=str))
            print(f"omega_2({C.complex.label(e)}) = {terms}")
        assert not any(comps.get(k) for k in comps if k >= 3)

L = loop_comultiplication(K, 5)
closed = suspension_comult_closed_form(K, 5, H=L.H)
agree = all(closed(p) == L.psi_hat(p) for n in range(6) for p in L.H.basis(n))
print("closed form agrees with the pipeline through degree 5:", agree)
print("chain-level coassociativity:", L.coassociativity_witness() is None)
