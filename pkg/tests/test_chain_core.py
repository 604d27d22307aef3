import numpy as np
import pytest
from hypothesis import given, strategies as st

from cohoch.chain_core import (ChainMap, TensorComplex, complex_from_matrices, homology,
                               homology_presentation, homology_table, identity_map,
                               induced_map_on_homology, matrix_from_json, matrix_to_json, suspend)
from cohoch.errors import DegreeOutOfRange, NotAChainMap

TOP = 3


@st.composite
def unimodular(draw, n):
    """A random unimodular matrix with its inverse, built from row operations."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    for _ in range(draw(st.integers(0, 2 * n))) if n > 1 else ():
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i == j:
            continue
        k = draw(st.integers(-2, 2))
        # P <- E P, Q <- Q E^{-1}
        P[i] = [a + k * b for a, b in zip(P[i], P[j])]
        for row in Q:
            row[j] -= k * row[i]
    return P, Q


def invariant_factors(orders):
    """Invariant factors of a sum of cyclic groups, via prime powers."""
    powers = {}
    for k in orders:
        q = 2
        while k > 1:
            e = 0
            while k % q == 0:
                k //= q
                e += 1
            if e:
                powers.setdefault(q, []).append(q ** e)
            q += 1
    for v in powers.values():
        v.sort(reverse=True)
    length = max((len(v) for v in powers.values()), default=0)
    out = []
    for i in range(length):
        f = 1
        for v in powers.values():
            if i < len(v):
                f *= v[i]
        out.append(f)
    return tuple(sorted(out))


def mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


@st.composite
def known_complexes(draw):
    """A complex assembled from elementary pieces, then scrambled degreewise.

    Returns the complex and the homology expected from the pieces.
    """
    pieces = draw(st.lists(st.one_of(
        st.tuples(st.just("free"), st.integers(0, TOP)),
        st.tuples(st.just("arrow"), st.integers(0, TOP - 1), st.integers(1, 4))), min_size=1, max_size=6))
    dims = {n: 0 for n in range(TOP + 1)}
    slots = []
    for p in pieces:
        if p[0] == "free":
            slots.append((p, dims[p[1]]))
            dims[p[1]] += 1
        else:
            n = p[1]
            slots.append((p, (dims[n], dims[n + 1])))
            dims[n] += 1
            dims[n + 1] += 1
    mats = {n: [[0] * dims[n] for _ in range(dims[n - 1])] for n in range(1, TOP + 1)}
    for p, where in slots:
        if p[0] == "arrow":
            lo, hi = where
            mats[p[1] + 1][lo][hi] = p[2]
    change = {n: draw(unimodular(dims[n])) for n in range(TOP + 1)}
    for n in range(1, TOP + 1):
        if dims[n] and dims[n - 1]:
            P_lo, _ = change[n - 1]
            _, Q_hi = change[n]
            mats[n] = mul(mul(P_lo, mats[n]), Q_hi)
    expected = {}
    for n in range(TOP):
        free = sum(1 for p in pieces if p[0] == "free" and p[1] == n)
        tors = [p[2] for p in pieces if p[0] == "arrow" and p[1] == n and p[2] > 1]
        expected[n] = (free, invariant_factors(tors))
    C = complex_from_matrices(dims, {n: M for n, M in mats.items() if dims[n] and dims[n - 1]}, trunc=TOP)
    return C, expected


@given(known_complexes())
def test_homology_matches_construction(case):
    C, expected = case
    assert C.d_squared_witness() is None
    for n in range(TOP):
        H = homology(C, n)
        assert (H.betti, H.torsion) == expected[n]


@given(known_complexes())
def test_rational_betti_numbers(case):
    C, _ = case
    rank = lambda n: np.linalg.matrix_rank(C.matrix(n).astype(float)) if C.dim(n) and C.dim(n - 1) else 0
    for n in range(TOP):
        assert homology(C, n).betti == C.dim(n) - rank(n) - rank(n + 1)


@given(known_complexes())
def test_presentation_generators_and_projection(case):
    C, _ = case
    for n in range(TOP):
        P = homology_presentation(C, n)
        assert len(P.generators) == len(P.orders)
        for i, g in enumerate(P.generators):
            assert not C.d_comb(g)
            unit = [int(i == j) for j in range(len(P.orders))]
            unit = [u % o if o else u for u, o in zip(unit, P.orders)]
            assert P.coordinates(g) == unit
            assert P.project(g) == unit
        # boundaries project to zero
        for t in C.basis(n + 1):
            assert not any(P.project(C.d(t)))


@given(known_complexes())
def test_identity_induces_identity(case):
    C, _ = case
    I = identity_map(C)
    for n in range(TOP):
        M = induced_map_on_homology(I, n)
        assert M.is_isomorphism


@given(known_complexes(), known_complexes())
def test_kunneth_on_ranks(a, b):
    (C, hc), (D, hd) = a, b
    T = TensorComplex(C, D, trunc=TOP)
    assert T.d_squared_witness() is None
    # rational Künneth; torsion contributes Tor terms so only Betti numbers are compared
    for n in range(TOP):
        assert homology(T, n).betti == sum(hc[i][0] * hd[n - i][0] for i in range(n + 1))


@given(known_complexes(), st.integers(1, 3))
def test_suspension_shifts_homology(case, k):
    C, expected = case
    S = suspend(C, k)
    assert S.d_squared_witness() is None
    for n in range(TOP):
        H = homology(S, n + k)
        assert (H.betti, H.torsion) == expected[n]


def test_matrix_json_round_trip():
    C = complex_from_matrices({0: 2, 1: 3}, {1: [[1, 0, -2], [0, 3, 1]]})
    doc = matrix_to_json(C, 1)
    assert matrix_from_json(doc).tolist() == C.matrix(1).tolist()


def test_truncation_is_enforced():
    C = complex_from_matrices({0: 1, 1: 1}, {1: [[0]]}, trunc=1)
    assert str(homology(C, 0)) == "Z"
    with pytest.raises(DegreeOutOfRange):
        homology(C, 1)
    assert [str(h) for h in homology_table(C)] == ["Z"]


def test_invariant_factor_oracle():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([2, 4, 3]) == (2, 12)


def test_torsion_is_reported():
    C = complex_from_matrices({0: 1, 1: 1}, {1: [[6]]})
    assert homology(C, 0).torsion == (6,)
    assert str(homology(C, 0)) == "Z/6"


def test_non_chain_map_is_rejected():
    C = complex_from_matrices({0: 1, 1: 1}, {1: [[2]]})
    D = complex_from_matrices({0: 1, 1: 1}, {1: [[1]]})
    f = ChainMap(C, D, lambda t: {("e", t[1], 0): 1} if t[1] == 1 else {}, 0)
    with pytest.raises(NotAChainMap):
        induced_map_on_homology(f, 0)
