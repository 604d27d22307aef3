"""
Free loops on odd spheres
=========================

For S^3 the coHochschild model of the free loop space has zero differential,
so its homology is read straight off the generators: one copy of H(S^3) for
every power of the loop class. The comultiplication on homology is then the
tensor-coalgebra one. S^5 shows the same pattern with the loop class in
degree 4.
"""

from cohoch.chain_core import homology
from cohoch.comult import homology_comultiplication, loop_comultiplication, tensor_coalgebra_table
from cohoch.simplicial import sphere

for m in (3, 5):
    L = loop_comultiplication(sphere(m), 9)
    zero = all(not L.H.d(p) for n in range(10) for p in L.H.basis(n))
    print(f"S^{m}: differential identically zero through degree 9? {zero}")
    print("  H =", ", ".join(str(homology(L.H, n)) for n in range(8)))

    table = homology_comultiplication(L, 7)
    print("  matches the tensor-coalgebra table:", table.same_as(tensor_coalgebra_table(m, 7)))

# the text form lists each generator's coproduct
print()
print(homology_comultiplication(loop_comultiplication(sphere(3), 7), 6).to_text())
