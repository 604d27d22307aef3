"""Comultiplications on cobar and coHochschild complexes.

Cobar words are tuples of reduced basis terms with implicit desuspension.
Tensor products of complexes use pair terms, and the coalgebra ``C⊗C`` has
pair letters ``(a, b)``.  All maps below are evaluated on basis terms and
cached; certification of the chain-map property is explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb as binomial
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .algebra import (Bicomodule, ChainCoalgebra, coalgebra_as_bicomodule, induced_bicomodule,
                      tensor_coalgebra)
from .chain_core import (ChainMap, FreeChainComplex, TensorComplex, homology_presentation,
                         identity_map, induced_map_on_homology, tensor_maps)
from .constructions import CobarAlgebra, CoHochschildComplex, cobar, desuspension_sign
from .dcsh import DCSHFamily, gm_twisting_cochain, verify_dcsh
from .errors import NotAChainMap, NotReduced, StructureNotRespected
from .lincomb import Comb, add_comb, add_into, sign
from .sdr_pt import em_sdr
from .simplicial import (SimplicialMap, SimplicialSet, SuspensionSet, diagonal_map, is_degenerate,
                         normalized_chains)
from .snf import IntegerSolver, solve_integer

__all__ = [
    "tensor_bicomodule", "milgram_q", "MilgramHat", "milgram_qhat", "rotation_terms",
    "cohoch_extend", "AWCoalgebra", "aw_omega", "wedge_left", "wedge_right",
    "compose_families", "LoopComultiplication", "loop_comultiplication",
    "suspension_psi", "suspension_comult_closed_form", "relative_suspension_closed_form",
    "relative_comultiplication",
    "derivation_homotopy", "ComultiplicationTable", "homology_comultiplication",
    "cobar_algebra_map", "tensor_coalgebra_table", "coassociativity_witness",
    "assess_strictness", "DerivationHomotopy",
]

Word = Tuple[Hashable, ...]


def _wdeg(C: ChainCoalgebra, w: Word) -> int:
    return sum(C.degree(c) - 1 for c in w)


class CappedTensor(TensorComplex):
    """``C ⊗ D`` modulo pairs whose total word length exceeds ``cap``.

    The discarded pairs span a subcomplex because differentials never
    shorten words; this quotient is the target of capped comultiplications.
    """

    def __init__(self, C: FreeChainComplex, D: FreeChainComplex, cap: int,
                 length: Callable[[Hashable], int] = len):
        self.cap = cap
        self.length = length
        super().__init__(C, D)
        self.name = f"({C.name}⊗{D.name})≤{cap}"

    def fits(self, p) -> bool:
        return self.length(p[0]) + self.length(p[1]) <= self.cap

    def _pairs(self, n):
        return [p for p in super()._pairs(n) if self.fits(p)]

    def _tensor_d(self, p) -> Comb:
        return {q: c for q, c in super()._tensor_d(p).items() if self.fits(q)}


def _word_length(p) -> int:
    return len(p[1])


def _concat(a: Comb, b: Comb, cap: Optional[int] = None, s: int = 1) -> Comb:
    out: Comb = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            if cap is not None and len(w) > cap:
                continue
            add_into(out, w, s * c1 * c2)
    return out


def cobar_algebra_map(OC: CobarAlgebra, OD: CobarAlgebra, gen: Callable[[Hashable], Comb],
                      name: str = "") -> ChainMap:
    """The algebra map ``ΩC → ΩD`` extending ``s⁻¹c ↦ gen(c)``."""
    cap = OD.word_cap

    def fn(w):
        out: Comb = {(): 1}
        for c in w:
            out = _concat(out, gen(c), cap)
            if not out:
                break
        return out

    return ChainMap(OC.complex, OD.complex, fn, 0, name=name)


# ---------------------------------------------------------------------------
# tensor bicomodules and the Milgram maps


def tensor_bicomodule(N: Bicomodule, M: Bicomodule, CD: Optional[ChainCoalgebra] = None) -> Bicomodule:
    """``N ⊗ M`` as a bicomodule over ``C ⊗ D`` with Koszul signs."""
    C, D = N.coalgebra, M.coalgebra
    CD = CD or tensor_coalgebra(C, D)
    T = TensorComplex(N.complex, M.complex)

    def left(p):
        x, y = p
        out: Comb = {}
        for (c, x2), k1 in N.left(x).items():
            for (d, y2), k2 in M.left(y).items():
                add_into(out, ((c, d), (x2, y2)), k1 * k2 * sign(N.degree(x2) * D.degree(d)))
        return out

    def right(p):
        x, y = p
        out: Comb = {}
        for (x2, c), k1 in N.right(x).items():
            for (y2, d), k2 in M.right(y).items():
                add_into(out, ((x2, y2), (c, d)), k1 * k2 * sign(C.degree(c) * M.degree(y2)))
        return out

    unit = (N.unit, M.unit) if N.unit is not None and M.unit is not None else None
    return Bicomodule(T, CD, left, right, unit=unit, name=f"{N.name}⊗{M.name}")


def _q_word(w: Word, C: ChainCoalgebra, D: ChainCoalgebra):
    """``q`` on one word: ``(left word, right word, sign)`` or ``None``."""
    uc, ud = C.unit, D.unit
    left: List = []
    right: List = []
    rdeg = 0
    s = 1
    for (a, b) in w:
        if b == ud:
            s *= sign((C.degree(a) - 1) * rdeg)
            left.append(a)
        elif a == uc:
            right.append(b)
            rdeg += D.degree(b) - 1
        else:
            return None
    return tuple(left), tuple(right), s


def milgram_q(OCD: CobarAlgebra, OC: CobarAlgebra, OD: CobarAlgebra,
              target: Optional[TensorComplex] = None) -> ChainMap:
    """``q : Ω(C⊗D) → ΩC ⊗ ΩD``; letters ``c⊗1 ↦ c⊗1``, ``1⊗d ↦ 1⊗d``, others ``↦ 0``."""
    C, D = OC.coalgebra, OD.coalgebra
    capc, capd = OC.word_cap, OD.word_cap
    total = OCD.word_cap if capc is not None and capc == capd == OCD.word_cap else None
    T = target or (TensorComplex(OC.complex, OD.complex) if total is None
                   else CappedTensor(OC.complex, OD.complex, total))

    def fn(w):
        r = _q_word(w, C, D)
        if r is None:
            return {}
        a, b, s = r
        if (capc is not None and len(a) > capc) or (capd is not None and len(b) > capd):
            return {}
        if total is not None and len(a) + len(b) > total:
            return {}
        return {(a, b): s}

    return ChainMap(OCD.complex, T, fn, 0, name="q")


@dataclass
class MilgramHat:
    source: CoHochschildComplex
    left: CoHochschildComplex
    right: CoHochschildComplex
    target: TensorComplex
    qhat: ChainMap
    sigma: ChainMap
    q: ChainMap


def milgram_qhat(N: Bicomodule, M: Bicomodule, trunc: int, word_cap: Optional[int] = None,
                 source: Optional[CoHochschildComplex] = None,
                 left: Optional[CoHochschildComplex] = None,
                 right: Optional[CoHochschildComplex] = None) -> MilgramHat:
    """``q̂ : ĤH(N⊗M, C⊗D) → ĤH(N,C) ⊗ ĤH(M,D)`` and its section ``σ̂``.

    ``q̂`` is the map of right ``Ω(C⊗D)``-modules with
    ``q̂(x⊗y⊗[]) = (x⊗[])⊗(y⊗[])``; ``σ̂`` includes both cobar factors into
    ``Ω(C⊗D)`` and multiplies.
    """
    C, D = N.coalgebra, M.coalgebra
    HN = left or CoHochschildComplex(N, C, trunc, word_cap)
    HM = right or CoHochschildComplex(M, D, trunc, word_cap)
    if source is None:
        CD = tensor_coalgebra(C, D)
        source = CoHochschildComplex(tensor_bicomodule(N, M, CD), CD, trunc, word_cap)
    H = source
    uc, ud = C.unit, D.unit
    capc, capd, cap = HN.word_cap, HM.word_cap, H.word_cap
    total = cap if capc is not None and capc == capd == cap else None
    T = TensorComplex(HN, HM) if total is None else CappedTensor(HN, HM, total, _word_length)

    def qh(p):
        (x, y), w = p
        r = _q_word(w, C, D)
        if r is None:
            return {}
        a, b, s = r
        if (capc is not None and len(a) > capc) or (capd is not None and len(b) > capd):
            return {}
        if total is not None and len(a) + len(b) > total:
            return {}
        return {((x, a), (y, b)): s * sign(M.degree(y) * _wdeg(C, a))}

    def sg(t):
        (x, a), (y, b) = t
        w = tuple((c, ud) for c in a) + tuple((uc, d) for d in b)
        if cap is not None and len(w) > cap:
            return {}
        return {((x, y), w): sign(M.degree(y) * _wdeg(C, a))}

    OC, OD = HN.omega, HM.omega
    q = milgram_q(H.omega, OC, OD)
    return MilgramHat(H, HN, HM, T, ChainMap(H, T, qh, 0, name="q̂"), ChainMap(T, H, sg, 0, name="σ̂"), q)


# ---------------------------------------------------------------------------
# extended naturality


def _rotation_sign(A: int, ci: int, B: int, W: int) -> int:
    """Sign attached to ``c_i ⊗ [β | ω(w) | α]`` from the word ``[α|c_i|β]``.

    ``A`` and ``B`` are the cobar degrees of ``α`` and ``β``, ``ci`` the
    degree of the unsuspended letter and ``W`` the degree of ``ω(w)``.
    """
    return sign(A * (ci - 1 + B + W))


def rotation_terms(comps: Dict[int, Comb], ww: Comb, degree: Callable[[Hashable], int],
                   wdeg: Callable[[Word], int], front: Callable[[Hashable], Comb],
                   back: Callable[[Hashable], Comb], cap: Optional[int] = None) -> Comb:
    """``Σ_{k,i} ± c_i ⊗ front(c_{i+1}..c_k) · ω(w) · back(c_1..c_{i-1})``.

    ``comps`` is ``{k: F_k(e)}`` in word form and ``ww`` the image ``ω(w)``;
    ``front`` and ``back`` send a letter to a combination of words of length
    at most one.  Output terms are pairs ``(c_i, word)``.
    """
    out: Comb = {}
    for k, Fk in comps.items():
        for word, coeff in Fk.items():
            degs = [degree(c) - 1 for c in word]
            for i in range(k):
                alpha, ci, beta = word[:i], word[i], word[i + 1:]
                A, B = sum(degs[:i]), sum(degs[i + 1:])
                fr: Comb = {(): 1}
                for c in beta:
                    fr = _concat(fr, front(c), cap)
                bk: Comb = {(): 1}
                for c in alpha:
                    bk = _concat(bk, back(c), cap)
                if not fr or not bk:
                    continue
                for wv, cw in ww.items():
                    s = coeff * cw * _rotation_sign(A, degs[i] + 1, B, wdeg(wv))
                    for f1, a1 in fr.items():
                        for b1, a2 in bk.items():
                            nw = f1 + wv + b1
                            if cap is not None and len(nw) > cap:
                                continue
                            add_into(out, (ci, nw), s * a1 * a2)
    return out


def cohoch_extend(fam: DCSHFamily, H1: CoHochschildComplex, H2: CoHochschildComplex,
                  omega: Optional[ChainMap] = None, front: Optional[Callable] = None,
                  back: Optional[Callable] = None, check: bool = False) -> ChainMap:
    """``ω̂ : ĤH(N, C') → ĤH(N⊗N, C'⊗C')`` redistributing ``ω_k(e)`` around ``ω'(w)``.

    ``fam`` realizes the comultiplication of ``N``.  Letters of ``ω_k(e)``
    after ``c_i`` are pushed to the front of the word by ``front`` and those
    before ``c_i`` to the back by ``back``; both default to the identity,
    which is the absolute case ``N = C = C'``.  ``omega`` is the algebra map
    ``ΩC' → Ω(C'⊗C')`` on the word coordinate.
    """
    D = fam.target
    uc, ud = fam.source.unit, D.unit
    O2 = H2.omega
    om = omega or cobar_algebra_map(H1.omega, O2, fam.total)
    cap = H2.word_cap
    one = lambda c: {(c,): 1}
    front = front or one
    back = back or one

    def fn(p):
        e, w = p
        ww = om(w)
        if not ww:
            return {}
        if e == uc:
            return {(ud, v): c for v, c in ww.items()}
        return rotation_terms(fam.components(e), ww, D.degree, O2.word_degree, front, back, cap)

    m = ChainMap(H1, H2, fn, 0, name="ω̂")
    if check:
        w = m.witness()
        if w is not None:
            raise NotAChainMap(f"ω̂ fails to commute with d at {H1.label(w)}", witness=w)
    return m


# ---------------------------------------------------------------------------
# Alexander–Whitney structure


def _unit_aware(fam: DCSHFamily, C: ChainCoalgebra, CC: ChainCoalgebra):
    """``ω_k`` in tensor form, extended by ``ω_1(1) = 1⊗1``."""
    def fn(k, e):
        if e == C.unit:
            return {(CC.unit,): 1} if k == 1 else {}
        return fam.omega(k, e)
    return fn


def _iterated_delta(C: ChainCoalgebra, c, k: int) -> Comb:
    cur: Comb = {(c,): 1}
    for _ in range(k - 1):
        nxt: Comb = {}
        for t, v in cur.items():
            for (a, b), k2 in C.delta(t[-1]).items():
                add_into(nxt, t[:-1] + (a, b), v * k2)
        cur = nxt
    return cur


def _interleave_sign(first: List[int], second: List[int], first_left: bool) -> int:
    """Koszul sign of ``(a1..ak)⊗(b1..bk) ↦ (a1 b1)..(ak bk)`` (or ``(b1 a1)..``)."""
    s = 0
    k = len(first)
    if first_left:
        for i in range(k):
            for j in range(i):
                s += first[i] * second[j]
    else:
        for i in range(k):
            for j in range(i + 1, k):
                s += first[i] * second[j]
    return sign(s)


def _wedge(fam: DCSHFamily, C: ChainCoalgebra, CC: ChainCoalgebra, CCC: ChainCoalgebra,
           left: bool) -> DCSHFamily:
    om = _unit_aware(fam, C, CC)
    deg, u3 = C.degree, CCC.unit

    def comps(p):
        a, b = p
        out: Dict[int, Comb] = {}
        for k in range(1, fam.cap + 1):
            acc: Comb = {}
            if left:
                pre = sign((k - 1) * deg(a))
                for ts, c1 in _iterated_delta(C, a, k).items():
                    for ws, c2 in om(k, b).items():
                        s = pre * _interleave_sign([deg(x) for x in ts], [deg(x) + deg(y) for x, y in ws], True)
                        word = tuple(((x, y), z) for x, (y, z) in zip(ts, ws))
                        if u3 in word:
                            continue
                        add_into(acc, word, s * c1 * c2)
            else:
                for ws, c2 in om(k, a).items():
                    for ts, c1 in _iterated_delta(C, b, k).items():
                        s = _interleave_sign([deg(x) for x in ts], [deg(x) + deg(y) for x, y in ws], False)
                        word = tuple(((x, y), z) for (x, y), z in zip(ws, ts))
                        if u3 in word:
                            continue
                        add_into(acc, word, s * c1 * c2)
            if acc:
                out[k] = {w: v * desuspension_sign([CCC.degree(t) for t in w]) for w, v in acc.items()}
        return out

    return DCSHFamily(CC, CCC, comps, fam.cap, name="Id∧ω" if left else "ω∧Id")


def wedge_left(fam: DCSHFamily, C: ChainCoalgebra, CC: ChainCoalgebra, CCC: ChainCoalgebra) -> DCSHFamily:
    """``Id ∧ ω`` realizing ``Id ⊗ Δ : C⊗C → C⊗C⊗C``; triples are ``((a, b), c)``."""
    return _wedge(fam, C, CC, CCC, True)


def wedge_right(fam: DCSHFamily, C: ChainCoalgebra, CC: ChainCoalgebra, CCC: ChainCoalgebra) -> DCSHFamily:
    """``ω ∧ Id`` realizing ``Δ ⊗ Id``."""
    return _wedge(fam, C, CC, CCC, False)


def compose_families(second: DCSHFamily, first: DCSHFamily, cap: Optional[int] = None) -> DCSHFamily:
    """The family of the composite algebra map ``α(second) ∘ α(first)``."""
    def comps(e):
        out: Dict[int, Comb] = {}
        for w, c in first.total(e).items():
            img: Comb = {(): c}
            for x in w:
                img = _concat(img, second.total(x))
            for v, k in img.items():
                out.setdefault(len(v), {})
                add_into(out[len(v)], v, k)
        return {k: v for k, v in out.items() if v}
    top = cap if cap is not None else first.cap * second.cap
    return DCSHFamily(first.source, second.target, comps, top, name=f"{second.name}∘{first.name}")


@dataclass
class AWCoalgebra:
    """``C_*K`` with the chosen realization ``ω`` of its diagonal."""

    K: SimplicialSet
    C: ChainCoalgebra
    CC: ChainCoalgebra
    omega: DCSHFamily
    trunc: int
    word_cap: Optional[int] = None
    strictness: str = "weak"
    evidence: dict = field(default_factory=dict)
    CCC: Optional[ChainCoalgebra] = None

    def coassociativity(self) -> Tuple[DCSHFamily, DCSHFamily]:
        """``(Id∧ω)ω`` and ``(ω∧Id)ω`` as families ``C → (C⊗C⊗C)^{⊗k}``."""
        if self.CCC is None:
            self.CCC = tensor_coalgebra(self.CC, self.C)
        L = compose_families(wedge_left(self.omega, self.C, self.CC, self.CCC), self.omega)
        R = compose_families(wedge_right(self.omega, self.C, self.CC, self.CCC), self.omega)
        return L, R


def aw_omega(K: SimplicialSet, trunc: int, word_cap: Optional[int] = None,
             assess: bool = False) -> AWCoalgebra:
    """The Alexander–Whitney structure ``ω_K = F ∘ Ω C_*(diagonal)`` on ``C_*K``.

    ``F`` is the Gugenheim–Munkholm twisting cochain of the Eilenberg–MacLane
    data for ``K × K``.  With ``assess`` the strictness is measured: exact
    equality of the two coassociativity composites, else a derivation
    homotopy solved degree by degree.
    """
    if not K.is_reduced:
        raise NotReduced(f"{K.name} has {len(K.simplices(0))} vertices")
    S = em_sdr(K, K, trunc=min(trunc + 1, 2 * K.top))
    F = gm_twisting_cochain(S, trunc=min(trunc + 1, S.top))
    CK = normalized_chains(K)
    XC, YC = S.coalgebras
    diag = diagonal_map(K, S.product)

    def comps(e):
        img = diag.image(e)
        if is_degenerate(img):
            return {}
        return F.components(img[0])

    # the coalgebra C_*K ⊗ C_*K is the X of the datum
    fam = DCSHFamily(CK, XC, comps, F.cap, name="ω_K")
    fam.twisting = F
    A = AWCoalgebra(K, CK, XC, fam, trunc, word_cap)
    if assess:
        assess_strictness(A)
    return A


def assess_strictness(A: AWCoalgebra, upto: Optional[int] = None) -> str:
    upto = A.trunc if upto is None else upto
    L, R = A.coassociativity()
    diff = None
    cap = A.word_cap
    cut = (lambda c: c) if cap is None else (lambda c: {w: v for w, v in c.items() if len(w) <= cap})
    for n in range(1, upto + 2):
        for e in A.C.reduced_basis(n):
            if cut(L.total(e)) != cut(R.total(e)):
                diff = e
                break
        if diff is not None:
            break
    if diff is None:
        A.strictness = "strict"
        A.evidence = {"exact_equality_through": upto}
        return A.strictness
    Phi = derivation_homotopy(L, R, upto, A.word_cap)
    if Phi.ok:
        A.strictness = "quasistrict"
        A.evidence = {"derivation_homotopy_through": upto, "first_difference": diff}
    else:
        A.strictness = "weak"
        A.evidence = {"unsolved_at": Phi.failed, "first_difference": diff}
    return A.strictness


# ---------------------------------------------------------------------------
# derivation homotopies


@dataclass
class DerivationHomotopy:
    values: Dict[Hashable, Comb]
    ok: bool
    failed: Optional[Hashable] = None
    upto: int = 0

    def on_word(self, w: Word, alpha, beta, deg) -> Comb:
        out: Comb = {}
        pre = 0
        for i, c in enumerate(w):
            a = {(): 1}
            for x in w[:i]:
                a = _concat(a, alpha(x))
            b = {(): 1}
            for x in w[i + 1:]:
                b = _concat(b, beta(x))
            mid = self.values.get(c, {})
            add_comb(out, _concat(_concat(a, mid), b), sign(pre))
            pre += deg(c) - 1
        return out


def derivation_homotopy(alpha: DCSHFamily, beta: DCSHFamily, upto: int,
                        word_cap: Optional[int] = None) -> DerivationHomotopy:
    """Solve ``dΦ + Φd = α - β`` for an ``(α, β)``-derivation ``Φ`` of degree +1.

    ``Φ`` is determined by its values on generators; these are found in
    increasing degree by integral linear solving against ``d`` on ``ΩD``.
    Generators of ``C`` run through degree ``upto + 1``.
    """
    C, D = alpha.source, alpha.target
    OC = cobar(C, upto, word_cap)
    OD = cobar(D, upto + 1, word_cap)
    Dm = OD.complex
    deg = C.degree
    Phi = DerivationHomotopy({}, True, upto=upto)
    solvers: Dict[int, IntegerSolver] = {}
    for n in range(2, upto + 2):
        m = n - 1
        for e in C.reduced_basis(n):
            rhs = dict(alpha.total(e))
            add_comb(rhs, beta.total(e), -1)
            add_comb(rhs, _phi_on_comb(Phi, OC.letter_d(e), alpha.total, beta.total, deg), -1)
            if word_cap is not None:
                rhs = {w: c for w, c in rhs.items() if len(w) <= word_cap}
            if not rhs:
                continue
            if m not in solvers:
                solvers[m] = IntegerSolver(Dm.matrix_lists(m + 1))
            x = solvers[m].solve(Dm.vector(rhs, m))
            if x is None:
                Phi.ok = False
                Phi.failed = e
                return Phi
            Phi.values[e] = Dm.comb(x, m + 1)
    return Phi


def _phi_on_comb(Phi: DerivationHomotopy, comb: Comb, alpha, beta, deg) -> Comb:
    out: Comb = {}
    for w, c in comb.items():
        add_comb(out, Phi.on_word(w, alpha, beta, deg), c)
    return out


# ---------------------------------------------------------------------------
# loop comultiplications


def _triple_left(p) -> Tuple:
    (a, b), c = p
    return (a, b, c)


def _triple_right(p) -> Tuple:
    a, (b, c) = p
    return (a, b, c)


@dataclass
class LoopComultiplication:
    """``ψ = q∘ω`` on ``ΩC`` and ``ψ̂ = q̂∘ω̂`` on ``ĤH``."""

    H: CoHochschildComplex
    T: TensorComplex
    psi: ChainMap
    psi_hat: ChainMap
    omega_hat: ChainMap
    milgram: MilgramHat
    trunc: int
    aw: Optional[AWCoalgebra] = None
    bicomodule: Optional[Bicomodule] = None

    @property
    def coalgebra(self) -> ChainCoalgebra:
        return self.H.C

    def chain_witness(self):
        return self.psi_hat.witness(self.trunc)

    def ladder_witness(self):
        """First failure of: ψ̂ on ``1⊗w`` is ψ, and ψ̂ on ``x⊗[]`` has ``N⊗N`` part ``Δx``."""
        H = self.H
        N = H.N
        un = N.unit
        for n in range(self.trunc + 1):
            for p in H.basis(n):
                x, w = p
                img = self.psi_hat(p)
                if x == un:
                    got = {}
                    for ((x1, a), (x2, b)), c in img.items():
                        if (x1, x2) != (un, un):
                            return ("loops", p)
                        add_into(got, (a, b), c)
                    if got != self.psi(w):
                        return ("loops", p)
                if w == ():
                    got = {}
                    for ((x1, a), (x2, b)), c in img.items():
                        if a == () and b == ():
                            add_into(got, (x1, x2), c)
                    if got != _base_delta(self, x):
                        return ("base", p)
        return None

    def counit_witness(self):
        """``(ε⊗1)ψ̂ = Id`` and ``(1⊗ε)ψ̂ = Id``; ``ε`` keeps ``unit⊗[]`` only."""
        un = self.H.N.unit
        for n in range(self.trunc + 1):
            for p in self.H.basis(n):
                l, r = {}, {}
                for (s1, s2), c in self.psi_hat(p).items():
                    if s1 == (un, ()):
                        add_into(l, s2, c)
                    if s2 == (un, ()):
                        add_into(r, s1, c)
                if l != {p: 1} or r != {p: 1}:
                    return p
        return None

    def coassociativity_witness(self, upto: Optional[int] = None):
        """First generator where ``(ψ̂⊗1)ψ̂`` and ``(1⊗ψ̂)ψ̂`` differ on chains."""
        top = self.trunc if upto is None else upto
        for n in range(top + 1):
            for p in self.H.basis(n):
                if self.triple(p, True) != self.triple(p, False):
                    return p
        return None

    def triple(self, p, left: bool) -> Comb:
        out: Comb = {}
        for (s1, s2), c in self.psi_hat(p).items():
            if left:
                for (t1, t2), k in self.psi_hat(s1).items():
                    add_into(out, (t1, t2, s2), c * k)
            else:
                for (t1, t2), k in self.psi_hat(s2).items():
                    add_into(out, (s1, t1, t2), c * k)
        return out

    def triple_maps(self) -> Tuple[ChainMap, ChainMap]:
        """Both composites into ``(ĤH⊗ĤH)⊗ĤH``."""
        T3 = TensorComplex(self.T, self.H)
        L = ChainMap(self.H, T3, lambda p: {((a, b), c): k for (a, b, c), k in self.triple(p, True).items()},
                     0, name="(ψ̂⊗1)ψ̂")
        R = ChainMap(self.H, T3, lambda p: {((a, b), c): k for (a, b, c), k in self.triple(p, False).items()},
                     0, name="(1⊗ψ̂)ψ̂")
        return L, R


def _base_delta(L: LoopComultiplication, x) -> Comb:
    N = L.H.N
    if L.bicomodule is not None:
        return L.bicomodule.delta(x)
    return N.coalgebra.delta(x)


def loop_comultiplication(K: SimplicialSet, trunc: int, word_cap: Optional[int] = None,
                          aw: Optional[AWCoalgebra] = None) -> LoopComultiplication:
    """``ψ`` and ``ψ̂`` for a reduced simplicial set ``K`` through degree ``trunc``."""
    A = aw or aw_omega(K, trunc, word_cap)
    C, CC = A.C, A.CC
    N = coalgebra_as_bicomodule(C)
    H = CoHochschildComplex(N, C, trunc, word_cap)
    M = milgram_qhat(N, N, trunc, word_cap, left=H, right=H,
                     source=CoHochschildComplex(tensor_bicomodule(N, N, CC), CC, trunc, word_cap))
    om = cobar_algebra_map(H.omega, M.source.omega, A.omega.total, name="Ωω")
    oh = cohoch_extend(A.omega, H, M.source, omega=om)
    psi = ChainMap(H.omega.complex, M.q.target, lambda w: M.q.apply(om(w)), 0, name="ψ")
    ph = ChainMap(H, M.target, lambda p: M.qhat.apply(oh(p)), 0, name="ψ̂")
    return LoopComultiplication(H, M.target, psi, ph, oh, M, trunc, aw=A)


def relative_comultiplication(g: SimplicialMap, h: SimplicialMap, trunc: int,
                              word_cap: Optional[int] = None, check: bool = True,
                              aw_K: Optional[AWCoalgebra] = None,
                              aw_L: Optional[AWCoalgebra] = None) -> LoopComultiplication:
    """``ψ̂_{g,h}`` on ``ĤH(C_*K, C_*L)`` with coactions through ``C_*g`` (left) and ``C_*h`` (right).

    Letters following ``c_i`` in ``ω_k(c)`` land at the front of the word,
    next to where the right coaction places its letter, so they are mapped by
    ``h``; the earlier letters go to the back and are mapped by ``g``.
    """
    K, L = g.source, g.target
    if h.source is not K or h.target is not L:
        raise StructureNotRespected("g and h must share source and target")
    for S in (K, L):
        if not S.is_reduced:
            raise NotReduced(f"{S.name} has {len(S.simplices(0))} vertices")
    AK = aw_K or aw_omega(K, trunc, word_cap)
    AL = aw_L or aw_omega(L, trunc, word_cap)
    CK, CL, CCK, CCL = AK.C, AL.C, AK.CC, AL.CC
    cg, ch = g.chain_map(CK, CL), h.chain_map(CK, CL)
    if check:
        for m, nm in ((cg, "g"), (ch, "h")):
            w = _structure_witness(AK, AL, m, trunc)
            if w is not None:
                raise StructureNotRespected(f"C_*{nm} does not commute with ω at {CK.complex.label(w)}",
                                            witness=w)
    N = induced_bicomodule(CK, CL, cg, ch, name=f"{g.name or 'g'}C{h.name or 'h'}")
    H = CoHochschildComplex(N, CL, trunc, word_cap)
    NN = tensor_bicomodule(N, N, CCL)
    M = milgram_qhat(N, N, trunc, word_cap, left=H, right=H,
                     source=CoHochschildComplex(NN, CCL, trunc, word_cap))
    om = cobar_algebra_map(H.omega, M.source.omega, AL.omega.total, name="Ωω'")
    uu = CCL.unit

    def via(m):
        def fn(letter):
            a, b = letter
            out: Comb = {}
            for a2, k1 in m(a).items():
                for b2, k2 in m(b).items():
                    if (a2, b2) != uu:
                        add_into(out, ((a2, b2),), k1 * k2)
            return out
        return fn

    oh = cohoch_extend(AK.omega, H, M.source, omega=om, front=via(ch), back=via(cg))
    psi = ChainMap(H.omega.complex, M.q.target, lambda w: M.q.apply(om(w)), 0, name="ψ'")
    ph = ChainMap(H, M.target, lambda p: M.qhat.apply(oh(p)), 0, name="ψ̂_{g,h}")
    out = LoopComultiplication(H, M.target, psi, ph, oh, M, trunc, aw=AL)
    out.bicomodule = CK
    return out


def _structure_witness(AK: AWCoalgebra, AL: AWCoalgebra, m: ChainMap, trunc: int):
    """First generator where ``Ω(m⊗m)∘ω_K ≠ ω_L∘Ωm``."""
    uu = AL.CC.unit
    for n in range(1, trunc + 2):
        for e in AK.C.reduced_basis(n):
            lhs: Comb = {}
            for w, c in AK.omega.total(e).items():
                img: Comb = {(): c}
                for a, b in w:
                    step: Comb = {}
                    for a2, k1 in m(a).items():
                        for b2, k2 in m(b).items():
                            if (a2, b2) != uu:
                                add_into(step, ((a2, b2),), k1 * k2)
                    img = _concat(img, step)
                add_comb(lhs, img)
            rhs: Comb = {}
            for e2, c in m(e).items():
                if e2 != AL.C.unit:
                    add_comb(rhs, AL.omega.total(e2), c)
            if lhs != rhs:
                return e
    return None


# ---------------------------------------------------------------------------
# suspension closed forms


def _tensor_word_mul(a: Comb, b: Comb, ldeg: Callable[[Word], int]) -> Comb:
    """Product in ``ΩC ⊗ ΩC``: ``(w1⊗w2)(v1⊗v2) = (-1)^{|w2||v1|} w1v1 ⊗ w2v2``."""
    out: Comb = {}
    for (w1, w2), c1 in a.items():
        for (v1, v2), c2 in b.items():
            add_into(out, (w1 + v1, w2 + v2), c1 * c2 * sign(ldeg(w2) * ldeg(v1)))
    return out


def _suspension_pieces(K: SuspensionSet):
    """``x ↦ [(e(x_i), e(x^i))]`` from the reduced diagonal of ``C_*K'``."""
    if not isinstance(K, SuspensionSet):
        raise TypeError("closed forms need a simplicial suspension")
    Kp = K.inner
    CKp = normalized_chains(Kp)
    bp = Kp.basepoint()

    def pieces(b):
        x = b[1]
        out = []
        for (a, c), k in CKp.delta(x).items():
            if (a == x and c == bp) or (a == bp and c == x) or a == bp or c == bp:
                continue
            out.append((("e", a), ("e", c), k))
        return out

    return pieces


def suspension_psi(K: SuspensionSet, trunc: int, word_cap: Optional[int] = None) -> ChainMap:
    """``ψ`` on ``ΩC_*(ΣK')`` from ``s⁻¹e(x) ↦ s⁻¹e(x)⊗1 + 1⊗s⁻¹e(x) + s⁻¹e(x_i)⊗s⁻¹e(x^i)``."""
    pieces = _suspension_pieces(K)
    C = normalized_chains(K)
    O = cobar(C, trunc, word_cap)
    T = TensorComplex(O.complex, O.complex)
    wd = O.word_degree

    def gen(b):
        out: Comb = {((b,), ()): 1, ((), (b,)): 1}
        for a, c, k in pieces(b):
            add_into(out, ((a,), (c,)), k)
        return out

    def fn(w):
        out: Comb = {((), ()): 1}
        for b in w:
            out = _tensor_word_mul(out, gen(b), wd)
        return out

    m = ChainMap(O.complex, T, fn, 0, name="ψ (closed form)")
    m.cobar = O
    return m


def suspension_comult_closed_form(K: SuspensionSet, trunc: int, word_cap: Optional[int] = None,
                                  H: Optional[CoHochschildComplex] = None) -> ChainMap:
    """``ψ̂`` on ``ĤH(C_*(ΣK'))`` from the four-term formula.

    With ``ψ(w) = w_j⊗w^j`` and ``Δ̄x = x_i⊗x^i``,

    ``ψ̂(e(x)⊗w) = (e(x)⊗w_j)⊗(1⊗w^j) ± (1⊗w_j)⊗(e(x)⊗w^j)
    ± (1⊗[e(x_i)]w_j)⊗(e(x^i)⊗w^j) ± (e(x_i)⊗w_j)⊗(1⊗w^j[e(x^i)])``

    with Koszul signs, and ``ψ̂(1⊗w) = (1⊗w_j)⊗(1⊗w^j)``.
    """
    pieces = _suspension_pieces(K)
    C = normalized_chains(K)
    if H is None:
        H = CoHochschildComplex(coalgebra_as_bicomodule(C), C, trunc, word_cap)
    psi = suspension_psi(K, trunc, word_cap)
    wd = H.omega.word_degree
    deg = C.degree
    u = C.unit
    cap = H.word_cap
    T = TensorComplex(H, H)

    def fits(*ws):
        return cap is None or all(len(w) <= cap for w in ws)

    def fn(p):
        x, w = p
        out: Comb = {}
        for (a, b), c in psi(w).items():
            if x == u:
                add_into(out, ((u, a), (u, b)), c)
                continue
            ex = deg(x)
            add_into(out, ((x, a), (u, b)), c)
            add_into(out, ((u, a), (x, b)), c * sign(ex * wd(a)))
            for xi, xj, k in pieces(x):
                di, dj = deg(xi), deg(xj)
                if fits((xi,) + a):
                    add_into(out, ((u, (xi,) + a), (xj, b)), c * k * sign(_S3(di, dj, wd(a), wd(b))))
                if fits(b + (xj,)):
                    add_into(out, ((xi, a), (u, b + (xj,))), c * k * sign(_S4(di, dj, wd(a), wd(b))))
        return out

    return ChainMap(H, T, fn, 0, name="ψ̂ (closed form)")


def relative_suspension_closed_form(g: SimplicialMap, h: SimplicialMap, trunc: int,
                                    word_cap: Optional[int] = None,
                                    H: Optional[CoHochschildComplex] = None,
                                    psi: Optional[ChainMap] = None) -> ChainMap:
    """``ψ̂_{g,h}`` on ``ĤH(C_*(ΣK'), C_*L)`` from the four-term formula.

    As in the absolute case, except that ``w`` is split by the loop
    comultiplication ``ψ`` of ``L``, the letter inserted in front is
    ``s⁻¹h(e(x_i))`` and the one appended is ``s⁻¹g(e(x^i))``.
    """
    K, L = g.source, g.target
    if not isinstance(K, SuspensionSet):
        raise TypeError("the closed form needs a simplicial suspension as source")
    pieces = _suspension_pieces(K)
    CK, CL = normalized_chains(K), normalized_chains(L)
    cg, ch = g.chain_map(CK, CL), h.chain_map(CK, CL)
    if H is None:
        H = CoHochschildComplex(induced_bicomodule(CK, CL, cg, ch), CL, trunc, word_cap)
    if psi is None:
        psi = (suspension_psi(L, trunc, word_cap) if isinstance(L, SuspensionSet)
               else loop_comultiplication(L, trunc, word_cap).psi)
    wd = H.omega.word_degree
    deg = CK.degree
    u, uL = CK.unit, CL.unit
    cap = H.word_cap

    def fits(*ws):
        return cap is None or all(len(w) <= cap for w in ws)

    def letters(m, y):
        return [(z, k) for z, k in m(y).items() if z != uL]

    def fn(p):
        x, w = p
        out: Comb = {}
        for (a, b), c in psi(w).items():
            if x == u:
                add_into(out, ((u, a), (u, b)), c)
                continue
            add_into(out, ((x, a), (u, b)), c)
            add_into(out, ((u, a), (x, b)), c * sign(deg(x) * wd(a)))
            for xi, xj, k in pieces(x):
                di, dj = deg(xi), deg(xj)
                if fits((None,) + a):
                    s3 = c * k * sign(_S3(di, dj, wd(a), wd(b)))
                    for z, kz in letters(ch, xi):
                        add_into(out, ((u, (z,) + a), (xj, b)), s3 * kz)
                if fits(b + (None,)):
                    s4 = c * k * sign(_S4(di, dj, wd(a), wd(b)))
                    for z, kz in letters(cg, xj):
                        add_into(out, ((xi, a), (u, b + (z,))), s4 * kz)
        return out

    return ChainMap(H, TensorComplex(H, H), fn, 0, name="ψ̂_{g,h} (closed form)")


def _S3(di: int, dj: int, a: int, b: int) -> int:
    # e(x^i) passes w_j; the letter s⁻¹e(x_i) contributes 1 + |e(x_i)|
    return 1 + di + dj * a


def _S4(di: int, dj: int, a: int, b: int) -> int:
    # s⁻¹e(x^i) passes w_j and w^j
    return (dj - 1) * (a + b)


# ---------------------------------------------------------------------------
# homology tables


@dataclass
class ComultiplicationTable:
    """Per degree, the matrix of ``H_n → ⊕_{p+q=n} H_p⊗H_q``.

    Rows are indexed by ``targets[n]``, a list of ``(p, i, q, j)`` meaning
    ``g_p^i ⊗ g_q^j``; columns by the homology generators of degree ``n``.
    ``basis[n]`` records each generator as a labelled cycle.
    """

    ranks: Dict[int, int]
    targets: Dict[int, List[Tuple[int, int, int, int]]]
    matrices: Dict[int, List[List[int]]]
    basis: Dict[int, List[Dict[str, int]]] = field(default_factory=dict)
    valid_through: int = 0
    torsion_free: bool = True

    def entries(self, n: int) -> Dict[Tuple[int, Tuple], int]:
        out = {}
        for i, row in enumerate(self.matrices.get(n, [])):
            for j, v in enumerate(row):
                if v:
                    out[(j, self.targets[n][i])] = v
        return out

    def same_as(self, other: "ComultiplicationTable", upto: Optional[int] = None) -> bool:
        top = min(self.valid_through, other.valid_through) if upto is None else upto
        for n in range(top + 1):
            if self.ranks.get(n, 0) != other.ranks.get(n, 0) or self.entries(n) != other.entries(n):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "valid_through": self.valid_through,
            "torsion_free": self.torsion_free,
            "degrees": [
                {"degree": n, "rank": self.ranks[n],
                 "targets": [list(t) for t in self.targets[n]],
                 "matrix": self.matrices[n],
                 "basis": self.basis.get(n, [])}
                for n in sorted(self.ranks)
            ],
        }

    def to_text(self) -> str:
        lines = [f"comultiplication on homology (valid through degree {self.valid_through})"]
        for n in sorted(self.ranks):
            if not self.ranks[n]:
                continue
            for j in range(self.ranks[n]):
                terms = []
                for i, t in enumerate(self.targets[n]):
                    v = self.matrices[n][i][j]
                    if v:
                        p, a, q, b = t
                        coef = "" if v == 1 else ("-" if v == -1 else f"{v}*")
                        terms.append(f"{coef}g{p}.{a} (x) g{q}.{b}")
                rhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
                lines.append(f"  D(g{n}.{j}) = {rhs}")
        return "\n".join(lines)


def _normalized_generators(C: FreeChainComplex, n: int):
    """SNF generators signed so the first basis term is positive, plus the flips."""
    P = homology_presentation(C, n)
    gens, flips = [], []
    idx = C.index(n)
    for g in P.generators:
        lead = min(g, key=lambda t: idx[t])
        f = 1 if g[lead] > 0 else -1
        gens.append(g if f > 0 else {t: -c for t, c in g.items()})
        flips.append(f)
    return P, gens, flips


def homology_comultiplication(L, upto: Optional[int] = None) -> ComultiplicationTable:
    """Homology table of ``L.psi_hat`` (any degree-0 chain map ``H → H⊗H``).

    Generators are the SNF representatives with the sign fixed so that the
    first basis term has positive coefficient.  Images are read off through
    the tensor square of the chain-level projections onto homology, which
    computes the Künneth coordinates when homology is torsion-free.
    """
    H, m = L.H, L.psi_hat
    top = (H.trunc - 1) if H.trunc is not None else H.top
    if upto is not None:
        top = min(top, upto)
    pres = {n: _normalized_generators(H, n) for n in range(top + 1)}
    tf = all(not P.group.torsion for P, _, _ in pres.values())
    tab = ComultiplicationTable({}, {}, {}, valid_through=top, torsion_free=tf)
    lab = H.label
    memo: Dict[Hashable, List[int]] = {}

    def proj(t):
        r = memo.get(t)
        if r is None:
            P, _, fl = pres[H.degree(t)]
            r = [c * f for c, f in zip(P.project({t: 1}), fl)]
            memo[t] = r
        return r

    for n in range(top + 1):
        P, gens, _ = pres[n]
        tab.ranks[n] = len(gens)
        order = H.index(n)
        tab.basis[n] = [{lab(t): c for t, c in sorted(g.items(), key=lambda tc: order[tc[0]])} for g in gens]
        targets = [(p, i, n - p, j) for p in range(n + 1)
                   for i in range(len(pres[p][1])) for j in range(len(pres[n - p][1]))]
        tab.targets[n] = targets
        row = {t: r for r, t in enumerate(targets)}
        M = [[0] * len(gens) for _ in targets]
        for j, g in enumerate(gens):
            for (a, b), c in m.apply(g).items():
                pa, pb = proj(a), proj(b)
                if not any(pa) or not any(pb):
                    continue
                p = H.degree(a)
                for i1, x in enumerate(pa):
                    if x:
                        for i2, y in enumerate(pb):
                            if y:
                                M[row[(p, i1, n - p, i2)]][j] += c * x * y
        tab.matrices[n] = M
    return tab


def tensor_coalgebra_table(m: int, upto: int) -> ComultiplicationTable:
    """``H(S^m) ⊗ T(u)``, ``|u| = m - 1`` even, with ``x`` and ``u`` primitive.

    Generators are ``x^ε u^k``; ``Δ(x^ε u^k) = Σ_j C(k, j) (...)``, all signs
    positive because ``u`` has even degree.
    """
    if m % 2 == 0:
        raise ValueError("the table is for odd spheres")
    gens: Dict[int, Tuple[int, int]] = {}
    for k in range(upto + 1):
        for e in (0, 1):
            d = (m - 1) * k + e * m
            if d <= upto:
                gens[d] = (e, k)
    ranks = {n: (1 if n in gens else 0) for n in range(upto + 1)}
    tab = ComultiplicationTable(ranks, {}, {}, valid_through=upto)
    for n in range(upto + 1):
        targets = [(p, 0, n - p, 0) for p in range(n + 1) if p in gens and n - p in gens]
        tab.targets[n] = targets
        if n not in gens:
            tab.matrices[n] = [[] for _ in targets]
            continue
        e, k = gens[n]
        col = []
        for (p, _, q, _) in targets:
            (e1, k1), (e2, k2) = gens[p], gens[q]
            col.append(binomial(k, k1) if e1 + e2 == e and k1 + k2 == k else 0)
        tab.matrices[n] = [[c] for c in col]
    return tab


def coassociativity_witness(L: LoopComultiplication, upto: Optional[int] = None,
                            homology: bool = False):
    """Chain-level (default) or homology-level comparison of the two triple composites.

    Returns ``None`` or the first failing generator (chain level) / degree
    (homology level).
    """
    if not homology:
        return L.coassociativity_witness(upto)
    A, B = L.triple_maps()
    top = (L.H.trunc - 1) if L.H.trunc is not None else L.H.top
    if upto is not None:
        top = min(top, upto)
    for n in range(top + 1):
        MA = induced_map_on_homology(A, n, check=False).matrix
        MB = induced_map_on_homology(B, n, check=False).matrix
        if MA.shape != MB.shape or (MA != MB).any():
            return n
    return None
