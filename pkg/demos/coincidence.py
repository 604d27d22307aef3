"""
Coincidences of maps into S^3
=============================

With g = h = id the relative model is the free loop model. Replacing h by
the constant map gives a path-type model, which is contractible. Making both
maps constant splits off S^3 and leaves the based loops.
"""

from cohoch.chain_core import homology
from cohoch.comult import relative_comultiplication
from cohoch.simplicial import constant_map, identity_simplicial_map, sphere

S3 = sphere(3)
idm, const = identity_simplicial_map(S3), constant_map(S3, S3)

for label, g, h in (("id, id", idm, idm), ("id, const", idm, const), ("const, const", const, const)):
    R = relative_comultiplication(g, h, 8)
    hs = ", ".join(str(homology(R.H, n)) for n in range(7))
    ok = all(w is None for w in (R.chain_witness(), R.counit_witness(), R.coassociativity_witness()))
    print(f"({label}): H = {hs}   comultiplication laws hold: {ok}")
