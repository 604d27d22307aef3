import itertools

import pytest
from hypothesis import given, strategies as st

import cohoch.sdr_pt as sdr_pt
from cohoch.chain_core import homology_table, zero_map
from cohoch.lincomb import add_into
from cohoch.sdr_pt import basic_perturbation, em_sdr, shuffle_sign, twisting_perturbation, verify_sdr
from cohoch.simplicial import (ProductSet, TwistingFunction, _pair_normalize, constant_cyclic_group,
                               constant_map, identity_simplicial_map, is_degenerate, normalized_chains,
                               product_map, sdim, simplicial_suspension, sphere, standard_simplex,
                               theta_from_degeneracies, twisted_cartesian_product)

S1, S2 = sphere(1), sphere(2)
T2 = ProductSet(S1, S1)


def literal_h(K, L, b):
    """The homotopy summed term by term, normalizing every pair and then
    discarding degenerate ones."""
    x, y = b
    n = sdim(x)
    out = {}
    for m in range(n):
        for r in range(m + 1, n + 1):
            rng = list(range(m + 1, n + 1))
            xr = K.front(x, r)
            yv = L.pull(y, tuple(range(m + 1)) + tuple(range(r, n + 1)))
            for B in itertools.combinations(rng, r - m):
                A = tuple(j for j in rng if j not in B)
                s = shuffle_sign(B, A) * (-1) ** m
                sx = (xr[0], tuple(xr[1][v] for v in theta_from_degeneracies(set(A) | {m}, n + 1)))
                sy = (yv[0], tuple(yv[1][v] for v in theta_from_degeneracies(B, n + 1)))
                nb, th = _pair_normalize(sx, sy)
                if not is_degenerate((nb, th)):
                    add_into(out, nb, s)
    return out


def perm_sign(seq):
    # sign via cycle decomposition, independent of inversion counting
    srt = sorted(seq)
    pos = [srt.index(v) for v in seq]
    seen, sgn = set(), 1
    for i in range(len(pos)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = pos[j]
            length += 1
        sgn *= (-1) ** (length - 1)
    return sgn


@given(st.sets(st.integers(0, 9)), st.data())
def test_shuffle_sign(values, data):
    vals = sorted(values)
    first = data.draw(st.sets(st.sampled_from(vals)) if vals else st.just(set()))
    a = sorted(first)
    b = [v for v in vals if v not in first]
    assert shuffle_sign(a, b) == perm_sign(a + b)


@pytest.mark.parametrize("K,L,top", [(S1, S1, 6), (S1, S2, 6), (S2, S2, 6), (T2, S1, 4),
                                     (standard_simplex(2), standard_simplex(1), 3)])
def test_em_sdr_conditions(K, L, top):
    S = em_sdr(K, L, trunc=top)
    rep = verify_sdr(S)
    assert rep.ok, rep.failures()[:3]
    assert S.nabla.witness(top - 1) is None
    assert S.f.witness(top - 1) is None


@pytest.mark.parametrize("K,L,top", [(S1, S1, 5), (S2, sphere(3), 6), (T2, S1, 4),
                                     (standard_simplex(2), standard_simplex(1), 3)])
def test_homotopy_matches_literal_formula(K, L, top):
    S = em_sdr(K, L, trunc=top)
    for n in range(top + 1):
        for b in S.Y.basis(n):
            assert S.h(b) == literal_h(K, L, b)


def _maps():
    T = T2
    p1, p2 = T.projections()
    return [
        (T, S2, S1, S2, p1, identity_simplicial_map(S2)),
        (S2, T, S2, S1, identity_simplicial_map(S2), p2),
        (S1, S2, S1, S2, constant_map(S1, S1), identity_simplicial_map(S2)),
    ]


@pytest.mark.parametrize("case", range(3))
def test_alexander_whitney_is_natural(case):
    K, L, K2, L2, g, h = _maps()[case]
    S, S2_ = em_sdr(K, L, trunc=4), em_sdr(K2, L2, trunc=4)
    CK, CL, CK2, CL2 = (normalized_chains(X) for X in (K, L, K2, L2))
    gh = product_map(g, h, S.product, S2_.product).chain_map(normalized_chains(S.product),
                                                           normalized_chains(S2_.product))
    g_, h_ = g.chain_map(CK, CK2), h.chain_map(CL, CL2)
    for n in range(5):
        for b in S.Y.basis(n):
            lhs = S2_.f.apply(gh(b))
            rhs = {}
            for (x, y), c in S.f(b).items():
                for x2, c1 in g_(x).items():
                    for y2, c2 in h_(y).items():
                        add_into(rhs, (x2, y2), c * c1 * c2)
            assert lhs == rhs


def test_flipped_homotopy_sign_is_caught(monkeypatch):
    monkeypatch.setattr(sdr_pt, "_h_sign", lambda m, r, n, A, B: -shuffle_sign(B, A) * (-1) ** m)
    rep = verify_sdr(em_sdr(S1, S1, trunc=4))
    assert not rep.ok
    cond, n, w = rep.failures()[0]
    assert cond == "dh + hd = ∇f - Id" and w is not None


def test_zero_perturbation_changes_nothing():
    S = em_sdr(S1, S2, trunc=5)
    R = basic_perturbation(S, zero_map(S.Y, S.Y, -1))
    assert verify_sdr(R).ok
    for n in range(6):
        for y in S.Y.basis(n):
            assert R.f(y) == S.f(y)
            assert R.h(y) == S.h(y)
            assert R.Y.d(y) == S.Y.d(y)
        for x in S.X.basis(n):
            assert R.nabla(x) == S.nabla(x)
            assert R.X.d(x) == S.X.d(x)


def _double_cover():
    G = constant_cyclic_group(2)
    tau = TwistingFunction(S1, G, {S1.simplices(1)[0]: (1, (0,))})
    P = twisted_cartesian_product(S1, G, tau, G.set)
    U = em_sdr(S1, G.set)
    T = em_sdr(S1, G.set, P=P)
    return P, U, basic_perturbation(U, twisting_perturbation(T.Y, U.Y))


def test_double_cover_small_model():
    P, U, R = _double_cover()
    assert verify_sdr(R).ok
    small = [str(h) for h in homology_table(R.X)]
    direct = [str(h) for h in homology_table(normalized_chains(P).complex)]
    assert small == direct == ["Z", "Z"]
    # the unperturbed model is two circles
    assert [str(h) for h in homology_table(U.X)] == ["Z^2", "Z^2"]
    assert R.series_terms[0] <= R.series_limit


def test_perturbation_of_torus_bundles():
    # all Z/3 twistings over the torus that satisfy the axioms
    G = constant_cyclic_group(3)
    one = T2.simplices(1)
    seen = 0
    for vals in itertools.product(range(3), repeat=len(one)):
        t1 = dict(zip(one, vals))

        def v2(b):
            f = T2.face(b, 2)
            return 0 if f[1] != (0, 1) else t1[f[0]]
        tau = TwistingFunction(T2, G, {**{b: (v, (0,)) for b, v in t1.items()},
                                       **{b: (v2(b), (0, 0)) for b in T2.simplices(2)}})
        try:
            P = twisted_cartesian_product(T2, G, tau, G.set)
        except Exception:
            continue
        seen += 1
        U = em_sdr(T2, G.set)
        R = basic_perturbation(U, twisting_perturbation(em_sdr(T2, G.set, P=P).Y, U.Y))
        assert verify_sdr(R).ok
        assert [str(h) for h in homology_table(R.X)] == [str(h) for h in homology_table(normalized_chains(P).complex)]
    assert seen >= 2


def test_suspension_product_sdr():
    K = simplicial_suspension(S1)
    assert verify_sdr(em_sdr(K, K, trunc=5)).ok
