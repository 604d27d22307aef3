"""
A quasistrict example: the torus
================================

The torus has 1-simplices, so the free loop model is only computed with a
cap on word length. Its diagonal is not strictly coassociative at the level
of the cobar construction, but the two composites differ by a derivation
homotopy. Here the homotopy is found by solving integer linear systems
degree by degree. This takes about half a minute.
"""

import os
import time

from cohoch.comult import aw_omega, derivation_homotopy, loop_comultiplication
from cohoch.simplicial import load_simplicial_set

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "src", "cohoch", "data")
T = load_simplicial_set(os.path.join(DATA, "torus.json"))

# the cobar of the 4-torus grows quickly, so stay at words of length 2
A = aw_omega(T, 2, word_cap=2)
left, right = A.coassociativity()
lab = A.C.complex.label
differ = [e for n in (1, 2, 3) for e in A.C.reduced_basis(n)
          if {w: c for w, c in left.total(e).items() if len(w) <= 2}
          != {w: c for w, c in right.total(e).items() if len(w) <= 2}]
print("composites differ on:", ", ".join(lab(e) for e in differ))

t0 = time.perf_counter()
Phi = derivation_homotopy(left, right, 2, 2)
print(f"derivation homotopy found: {Phi.ok}  ({time.perf_counter() - t0:.0f}s)")
for e, v in Phi.values.items():
    print(f"  Phi({lab(e)}) has {len(v)} term(s)")

L = loop_comultiplication(T, 3, word_cap=2)
print("capped comultiplication is a chain map:", L.chain_witness() is None)
print("ladder commutes:", L.ladder_witness() is None)
print("counital:", L.counit_witness() is None)
