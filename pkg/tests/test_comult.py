import pytest

import cohoch.comult as comult
from cohoch.algebra import coalgebra_as_bicomodule, tensor_coalgebra, trivial_bicomodule
from cohoch.chain_core import homology, identity_map, induced_map_on_homology
from cohoch.comult import (aw_omega, assess_strictness, cohoch_extend, coassociativity_witness,
                           derivation_homotopy, homology_comultiplication, loop_comultiplication,
                           milgram_q, milgram_qhat, relative_comultiplication, relative_suspension_closed_form,
                           suspension_comult_closed_form, suspension_psi, tensor_coalgebra_table)
from cohoch.constructions import CoHochschildComplex, cobar, cohochschild
from cohoch.dcsh import strict_family
from cohoch.errors import NotReduced, StructureNotRespected
from cohoch.lincomb import add_into
from cohoch.simplicial import (STAR, ProductSet, SimplicialMap, constant_map, identity_simplicial_map, load_simplicial_set,
                               normalized_chains, simplicial_suspension, sphere, standard_simplex)

from conftest import data_path

S1, S2, S3 = sphere(1), sphere(2), sphere(3)
T2 = ProductSet(S1, S1)
SS1, SS2, ST2 = simplicial_suspension(S1), simplicial_suspension(S2), simplicial_suspension(T2)
C2 = normalized_chains(S2)


def hstr(X, upto):
    return [str(homology(X, n)) for n in range(upto + 1)]


# -- Milgram maps --------------------------------------------------------------

def _q_setup(trunc=6):
    CC = tensor_coalgebra(C2, C2)
    O, OO = cobar(C2, trunc), cobar(CC, trunc)
    return CC, O, OO, milgram_q(OO, O, O)


def test_q_generator_rules():
    CC, O, OO, q = _q_setup()
    u = C2.unit
    s = C2.reduced_basis(2)[0]
    assert q(((s, u),)) == {((s,), ()): 1}
    assert q(((u, s),)) == {((), (s,)): 1}
    mixed = [t for t in CC.reduced_basis(4) if u not in t]
    assert mixed and all(q((t,)) == {} for t in mixed)


def test_q_is_quasi_isomorphism():
    CC, O, OO, q = _q_setup(6)
    assert q.witness(5) is None
    for n in range(5):
        assert induced_map_on_homology(q, n).is_isomorphism


def _qhat(trunc=6):
    N = coalgebra_as_bicomodule(C2)
    return N, milgram_qhat(N, N, trunc)


def test_qhat_section_and_chain_map():
    N, M = _qhat()
    assert M.qhat.witness(6) is None
    for n in range(7):
        for t in M.target.basis(n):
            assert M.qhat.apply(M.sigma(t)) == {t: 1}


def test_section_is_not_a_chain_map():
    # only the composite q̂σ̂ is pinned down; σ̂ itself need not commute with d
    N, M = _qhat()
    assert M.sigma.witness(5) is not None


def test_qhat_ladder():
    N, M = _qhat()
    H, u = M.source, N.unit
    uu = (u, u)
    for n in range(7):
        for p in H.basis(n):
            (x, w) = p
            img = M.qhat(p)
            if x == uu:
                # loops part: q̂ restricted to Ω(C⊗C) is q
                expect = {((u, a), (u, b)): c for (a, b), c in M.q(w).items()}
                assert img == expect
            if w == ():
                # projection to N⊗N
                assert img == {((x[0], ()), (x[1], ())): 1}


def test_qhat_with_trivial_bicomodules_is_q():
    Z = trivial_bicomodule(C2)
    M = milgram_qhat(Z, Z, 5)
    one = Z.unit
    for n in range(6):
        for p in M.source.basis(n):
            (_, w) = p
            got = {(a, b): c for ((x, a), (y, b)), c in M.qhat(p).items()}
            assert got == M.q(w)


# -- extended naturality ---------------------------------------------------

def test_strict_family_extends_to_identity():
    H = cohochschild(None, C2, 6)
    fam = strict_family(identity_map(C2.complex), C2, C2)
    ext = cohoch_extend(fam, H, H)
    for n in range(7):
        for p in H.basis(n):
            assert ext(p) == {p: 1}


@pytest.mark.parametrize("K,trunc", [(SS1, 6), (S3, 6), (ST2, 4)])
def test_extension_is_chain_map(K, trunc):
    L = loop_comultiplication(K, trunc)
    assert L.omega_hat.witness(trunc) is None


# -- Alexander-Whitney structure -------------------------------------------

def _koszul_swap_sign(di, dj):
    return (-1) ** ((di - 1) * (dj - 1))


@pytest.mark.parametrize("Kp", [S1, S2, T2, ProductSet(S1, S2)])
def test_suspension_diagonal_components(Kp):
    K = simplicial_suspension(Kp)
    A = aw_omega(K, 5)
    C, u = A.C, A.C.unit
    pieces = comult._suspension_pieces(K)
    for n in range(1, 6):
        for e in C.reduced_basis(n):
            comps = A.omega.components(e)
            assert max(comps, default=0) <= 2
            expect = {((u, xj), (xi, u)): k * _koszul_swap_sign(C.degree(xi), C.degree(xj))
                      for xi, xj, k in pieces(e)}
            assert comps.get(2, {}) == expect
            # the first component is the reduced diagonal in word form
            d1 = {(t,): c for t, c in C.delta(e).items() if t != (u, u)}
            assert comps.get(1, {}) == d1


def test_two_sphere_suspension_has_no_second_component():
    for K in (SS1, SS2):
        A = aw_omega(K, 5)
        assert all(not A.omega.F(2, e) for n in range(1, 6) for e in A.C.reduced_basis(n))


def test_not_reduced_is_rejected():
    with pytest.raises(NotReduced):
        aw_omega(standard_simplex(2), 3)
    with pytest.raises(NotReduced):
        loop_comultiplication(sphere(0), 3)


@pytest.mark.parametrize("K", [SS1, S3])
def test_one_reduced_inputs_are_strict(K):
    A = aw_omega(K, 5)
    assert assess_strictness(A, 4) == "strict"
    assert A.evidence["exact_equality_through"] == 4


def test_delta2_mod_boundary_strict_with_trivial_homotopy():
    K = load_simplicial_set(data_path("delta2_mod_boundary"))
    A = aw_omega(K, 5)
    Lf, Rf = A.coassociativity()
    Phi = derivation_homotopy(Lf, Rf, 4, None)
    assert Phi.ok
    assert all(not v for v in Phi.values.values())
    assert assess_strictness(A, 4) == "strict"


def test_wedge_families_are_coherent():
    from cohoch.dcsh import verify_dcsh
    A = aw_omega(SS1, 4)
    Lf, Rf = A.coassociativity()
    assert verify_dcsh(Lf, 4).ok
    assert verify_dcsh(Rf, 4).ok


# -- loop comultiplication ---------------------------------------------------

@pytest.mark.parametrize("K,trunc", [(SS1, 6), (S3, 7), (ST2, 4), (S2, 5),
                                     (ProductSet(S2, S2), 4)])
def test_loop_comultiplication_laws(K, trunc):
    L = loop_comultiplication(K, trunc)
    assert L.chain_witness() is None
    assert L.ladder_witness() is None
    assert L.counit_witness() is None
    assert L.coassociativity_witness() is None


@pytest.mark.parametrize("K,trunc", [(SS1, 7), (SS2, 7), (ST2, 5)])
def test_closed_forms_match_pipeline(K, trunc):
    L = loop_comultiplication(K, trunc)
    ps = suspension_psi(K, trunc)
    for n in range(trunc + 1):
        for w in L.H.omega.complex.basis(n):
            assert ps(w) == L.psi(w)
    cf = suspension_comult_closed_form(K, trunc, H=L.H)
    for n in range(trunc + 1):
        for p in L.H.basis(n):
            assert cf(p) == L.psi_hat(p)


def test_double_suspension_is_unperturbed():
    K = simplicial_suspension(ST2)
    pieces = comult._suspension_pieces(K)
    C = normalized_chains(K)
    assert all(not pieces(e) for n in range(1, 6) for e in C.reduced_basis(n))
    L = loop_comultiplication(K, 5)
    u = C.unit
    for n in range(6):
        for p in L.H.basis(n):
            x, w = p
            # only the primitive terms survive
            for ((x1, a), (x2, b)), c in L.psi_hat(p).items():
                assert x == u and (x1, x2) == (u, u) or (x1, x2) in ((x, u), (u, x))


def test_three_sphere_table_hand_values():
    tab = tensor_coalgebra_table(3, 5)
    # degree: column of coefficients over targets (p, q) with H_p⊗H_q
    hand = {0: [1], 2: [1, 1], 3: [1, 1], 4: [1, 2, 1], 5: [1, 1, 1, 1]}
    for n, col in hand.items():
        assert [r[0] for r in tab.matrices[n]] == col
    assert tab.ranks[1] == 0


@pytest.mark.parametrize("m,upto", [(3, 7)])
def test_odd_sphere_table(m, upto):
    L = loop_comultiplication(sphere(m), upto + 1)
    for n in range(upto + 2):
        for p in L.H.basis(n):
            assert not L.H.d(p)
    tab = homology_comultiplication(L, upto)
    assert tab.same_as(tensor_coalgebra_table(m, upto))


def test_table_serializations():
    L = loop_comultiplication(S3, 5)
    tab = homology_comultiplication(L, 4)
    doc = tab.to_json()
    assert doc["valid_through"] == 4 and doc["torsion_free"]
    assert [d["rank"] for d in doc["degrees"]] == [1, 0, 1, 1, 1]
    assert "D(g2.0) = g0.0 (x) g2.0 + g2.0 (x) g0.0" in tab.to_text()


def test_homology_coassociativity_on_two_sphere():
    L = loop_comultiplication(S2, 4)
    assert coassociativity_witness(L, 3, homology=True) is None


# -- relative ------------------------------------------------------------------

def test_relative_with_identities_is_absolute():
    idm = identity_simplicial_map(S2)
    R = relative_comultiplication(idm, idm, 5)
    L = loop_comultiplication(S2, 5)
    for n in range(6):
        for p in L.H.basis(n):
            assert R.psi_hat(p) == L.psi_hat(p)


@pytest.mark.parametrize("K", [S2, S3, SS1])
def test_relative_laws(K):
    idm, const = identity_simplicial_map(K), constant_map(K, K)
    for g, h in ((idm, const), (const, idm), (const, const)):
        R = relative_comultiplication(g, h, 5)
        assert R.chain_witness() is None
        assert R.ladder_witness() is None
        assert R.counit_witness() is None
        assert R.coassociativity_witness() is None


def test_relative_homology():
    idm, const = identity_simplicial_map(S2), constant_map(S2, S2)
    # g = h: free loops; g ≠ h constant/identity: based paths, contractible
    assert hstr(relative_comultiplication(idm, idm, 6).H, 5) == ["Z", "Z", "Z + Z/2", "Z", "Z + Z/2", "Z"]
    assert hstr(relative_comultiplication(idm, const, 6).H, 5) == ["Z", "0", "0", "0", "0", "0"]
    # both constant: S^2 times the based loops, H = H(S^2) ⊗ Z[x_1]
    assert hstr(relative_comultiplication(const, const, 6).H, 4) == ["Z", "Z", "Z^2", "Z^2", "Z^2"]


def test_structure_violation_is_detected():
    A = aw_omega(S2, 4)
    C = A.C
    doubled = identity_map(C.complex) + identity_map(C.complex)
    assert comult._structure_witness(A, A, doubled, 4) is not None
    with pytest.raises(StructureNotRespected):
        relative_comultiplication(identity_simplicial_map(S2), identity_simplicial_map(S3), 3)


def _suspend(p, SK, SL):
    def img(b):
        return (STAR, (0,)) if b == STAR else SL.lift(p.on(SK.inner.nd(b[1])))
    return SimplicialMap(SK, SL, img, name="S" + p.name)


def _relative_cases():
    p1, p2 = T2.projections()
    g, h = _suspend(p1, ST2, SS1), _suspend(p2, ST2, SS1)
    idm, cst = identity_simplicial_map(ST2), constant_map(ST2, ST2)
    return [(idm, cst), (cst, idm), (g, h), (h, g), (g, g),
            (constant_map(SS2, S3), constant_map(SS2, S3))]


@pytest.mark.parametrize("g,h", _relative_cases())
def test_relative_closed_form_on_suspensions(g, h):
    assert g.witness() is None and h.witness() is None
    R = relative_comultiplication(g, h, 5)
    cf = relative_suspension_closed_form(g, h, 5, H=R.H)
    for n in range(6):
        for p in R.H.basis(n):
            assert cf(p) == R.psi_hat(p)
    assert R.coassociativity_witness() is None


def test_relative_letter_routing_matters(monkeypatch):
    # front letters go through h and back letters through g; swapping breaks d
    g, h = _relative_cases()[2]
    orig = comult.cohoch_extend
    monkeypatch.setattr(comult, "cohoch_extend",
                        lambda *a, front=None, back=None, **k: orig(*a, front=back, back=front, **k))
    assert relative_comultiplication(g, h, 5).chain_witness() is not None


def test_relative_closed_form_needs_suspension():
    with pytest.raises(TypeError):
        relative_suspension_closed_form(identity_simplicial_map(S2), identity_simplicial_map(S2), 3)


# -- capped mode ---------------------------------------------------------------

def test_capped_torus():
    K = load_simplicial_set(data_path("torus"))
    L = loop_comultiplication(K, 3, word_cap=2)
    assert L.chain_witness() is None
    assert L.ladder_witness() is None
    assert L.counit_witness() is None
    # the target drops pairs whose total word length exceeds the cap
    for n in range(4):
        for (x, a), (y, b) in L.T.basis(n):
            assert len(a) + len(b) <= 2
