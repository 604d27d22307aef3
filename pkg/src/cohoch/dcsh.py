"""Coalgebra maps up to strong homotopy.

A family ``ω_k : C̄ → (C̄')^{⊗k}`` is stored in desuspended form, i.e. as
``F_k(e) = (s⁻¹)^{⊗k} ω_k(e)``, a combination of cobar words of length ``k``
over ``C̄'``.  The associated algebra map ``ΩC → ΩC'`` sends the letter ``e``
to ``Σ_k F_k(e)``.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .algebra import ChainCoalgebra
from .chain_core import ChainMap
from .constructions import CobarAlgebra, cobar, desuspension_sign
from .errors import IncoherentFamily, NoLocalFiniteness
from .lincomb import Comb, add_comb, add_into, sign
from .sdr_pt import SDRData

__all__ = ["DCSHFamily", "strict_family", "gm_twisting_cochain", "realize", "verify_dcsh",
           "DCSHReport", "gm_closed_form", "to_tensor", "from_tensor",
           "vanishing_certificate", "degeneracy_weight"]

Word = Tuple[Hashable, ...]


def to_tensor(C: ChainCoalgebra, word_comb: Comb) -> Comb:
    """Undo ``(s⁻¹)^{⊗k}``: words ``[c1|...|ck]`` to tensors ``c1⊗...⊗ck``."""
    out: Comb = {}
    for w, k in word_comb.items():
        add_into(out, w, k * desuspension_sign([C.degree(c) for c in w]))
    return out


def from_tensor(C: ChainCoalgebra, tensor_comb: Comb) -> Comb:
    return to_tensor(C, tensor_comb)


class DCSHFamily:
    """Components ``F_k`` with ``1 <= k <= cap`` between two coalgebras.

    ``components(e)`` returns ``{k: combination of words of length k}``.
    """

    def __init__(self, source: ChainCoalgebra, target: ChainCoalgebra,
                 components: Callable[[Hashable], Dict[int, Comb]], cap: int, name: str = ""):
        self.source, self.target = source, target
        self._fn = components
        self.cap = cap
        self.name = name
        self._cache: Dict[Hashable, Dict[int, Comb]] = {}

    def components(self, e) -> Dict[int, Comb]:
        r = self._cache.get(e)
        if r is None:
            r = {k: v for k, v in self._fn(e).items() if v and k <= self.cap}
            self._cache[e] = r
        return r

    def F(self, k: int, e) -> Comb:
        return self.components(e).get(k, {})

    def omega(self, k: int, e) -> Comb:
        """``ω_k(e)`` as a combination of ``k``-fold tensors."""
        return to_tensor(self.target, self.F(k, e))

    def total(self, e) -> Comb:
        out: Comb = {}
        for v in self.components(e).values():
            add_comb(out, v)
        return out

    def vanishing_index(self, e) -> int:
        c = self.components(e)
        return max(c) if c else 0

    def drop_term(self, k: int, e, word) -> "DCSHFamily":
        """A copy with one summand of ``F_k(e)`` removed (negative controls)."""
        def fn(x, base=self):
            comps = {j: dict(v) for j, v in base.components(x).items()}
            if x == e and k in comps:
                comps[k].pop(word, None)
            return comps
        return DCSHFamily(self.source, self.target, fn, self.cap, name=f"{self.name}-dropped")


def strict_family(g: ChainMap, source: ChainCoalgebra, target: ChainCoalgebra, cap: int = 1) -> DCSHFamily:
    """``ω_1 = g`` and ``ω_k = 0`` for ``k >= 2``."""
    u = target.unit

    def fn(e):
        return {1: {(x,): c for x, c in g(e).items() if x != u}}
    return DCSHFamily(source, target, fn, cap, name=g.name or "strict")


# ---------------------------------------------------------------------------
# Gugenheim–Munkholm


def _tensor_comb_mul(a: Comb, b: Comb, twist: int) -> Comb:
    out: Comb = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            add_into(out, w1 + w2, c1 * c2 * twist)
    return out


def gm_twisting_cochain(S: SDRData, cap: Optional[int] = None, trunc: Optional[int] = None,
                        check: bool = True) -> DCSHFamily:
    """The twisting cochain ``F = ΣF_k : Y → ΩX`` of an Eilenberg–Zilber datum.

    ``F_1 = s⁻¹f`` and ``F_k = -Σ_{i+j=k} (F_i ⊗ F_j) Δ_Y h``.  Every
    element inspected up to ``trunc`` must have ``F_k = 0`` beyond ``cap``;
    otherwise ``NoLocalFiniteness`` is raised with the element as witness.
    """
    XC, YC = S.coalgebras
    top = S.top if trunc is None else min(trunc, S.top)
    cap = top + 1 if cap is None else cap
    ux = XC.unit
    h = S.h
    memo: Dict[Tuple[int, Hashable], Comb] = {}
    dh_memo: Dict[Hashable, Comb] = {}

    def delta_h(y) -> Comb:
        r = dh_memo.get(y)
        if r is None:
            r = {}
            for z, c in h(y).items():
                for (a, b), k in YC.reduced_delta(z).items():
                    add_into(r, (a, b), c * k)
            dh_memo[y] = r
        return r

    def Fk(k: int, y) -> Comb:
        key = (k, y)
        r = memo.get(key)
        if r is not None:
            return r
        if YC.degree(y) == 0:
            r = {}
        elif k == 1:
            r = {(x,): c for x, c in S.f(y).items() if x != ux}
        else:
            r = {}
            for (a, b), c in delta_h(y).items():
                s = -c * sign(YC.degree(a))
                for i in range(1, k):
                    fa = Fk(i, a)
                    if not fa:
                        continue
                    fb = Fk(k - i, b)
                    if fb:
                        add_comb(r, _tensor_comb_mul(fa, fb, s))
        memo[key] = r
        return r

    def comps(y):
        out = {}
        for k in range(1, cap + 1):
            v = Fk(k, y)
            if v:
                out[k] = v
        if check and Fk(cap + 1, y):
            raise NoLocalFiniteness(f"F_{cap + 1} does not vanish on {YC.complex.label(y)}", witness=y)
        return out

    fam = DCSHFamily(YC, XC, comps, cap, name="F")
    fam.recursive = Fk
    fam.sdr = S
    if check:
        for n in range(1, top + 1):
            for y in YC.reduced_basis(n):
                fam.components(y)
    return fam


def gm_closed_form(S: SDRData, k: int, y) -> Comb:
    """``F_k(y) = ±(s⁻¹f)^{⊗k} H_k(y)`` evaluated independently of the recursion.

    ``H_k`` applies ``Δ_Y h`` factor by factor with Koszul signs; with that
    convention the overall sign is ``(-1)^{k(k-1)/2}``.  Tensor factors of
    degree 0 are pruned as soon as they appear: ``s⁻¹f`` vanishes on them.
    """
    XC, YC = S.coalgebras
    ux = XC.unit
    deg = YC.degree
    cur: Comb = {(y,): 1}
    for _ in range(2, k + 1):
        nxt: Comb = {}
        for t, c in cur.items():
            pre = 0
            for i, z in enumerate(t):
                s = sign(pre) * c
                for w, k1 in S.h(z).items():
                    for (a, b), k2 in YC.reduced_delta(w).items():
                        add_into(nxt, t[:i] + (a, b) + t[i + 1:], s * k1 * k2)
                pre += deg(z)
        cur = {t: c for t, c in nxt.items() if all(deg(z) > 0 for z in t)}
    out: Comb = {}
    for t, c in cur.items():
        parts: List[Comb] = [{(): 1}]
        for z in t:
            fz = {x: v for x, v in S.f(z).items() if x != ux}
            parts = [{w + (x,): a * v for w, a in p.items() for x, v in fz.items()} for p in parts]
        for p in parts:
            for w, a in p.items():
                add_into(out, w, a * c * desuspension_sign([deg(z) for z in t]))
    return {w: v * sign(k * (k - 1) // 2) for w, v in out.items() if v}


# ---------------------------------------------------------------------------
# realization and coherence


def realize(fam: DCSHFamily, trunc: int, word_cap: Optional[int] = None,
            source_cobar: Optional[CobarAlgebra] = None, target_cobar: Optional[CobarAlgebra] = None,
            check: bool = True) -> ChainMap:
    """The algebra map ``ΩC → ΩC'`` extending ``s⁻¹e ↦ Σ_k F_k(e)``."""
    OC = source_cobar or cobar(fam.source, trunc, word_cap)
    OD = target_cobar or cobar(fam.target, trunc, word_cap)
    wc = OD.word_cap

    def fn(w):
        out: Comb = {(): 1}
        for e in w:
            img = fam.total(e)
            nxt: Comb = {}
            for a, c1 in out.items():
                for b, c2 in img.items():
                    ab = a + b
                    if wc is not None and len(ab) > wc:
                        continue
                    add_into(nxt, ab, c1 * c2)
            out = nxt
            if not out:
                break
        return out

    m = ChainMap(OC.complex, OD.complex, fn, 0, name=f"α({fam.name})")
    m.source_algebra, m.target_algebra = OC, OD
    if check:
        rep = verify_dcsh(fam, trunc, OC, OD)
        if not rep.ok:
            e, k = rep.first
            raise IncoherentFamily(f"coherence fails at {fam.source.complex.label(e)} in length {k}",
                                   witness=(e, k))
    return m


class DCSHReport:
    """Nonzero residuals keyed by ``(generator, word length)``."""

    def __init__(self):
        self.residuals: Dict[Tuple[Hashable, int], Comb] = {}
        self.checked = 0

    @property
    def ok(self) -> bool:
        return not self.residuals

    @property
    def first(self):
        return next(iter(self.residuals)) if self.residuals else None


def verify_dcsh(fam: DCSHFamily, trunc: int, OC: Optional[CobarAlgebra] = None,
                OD: Optional[CobarAlgebra] = None, word_cap: Optional[int] = None) -> DCSHReport:
    """Residual of the coherence identity, per generator and word length.

    After desuspension the identity for ``{ω_k}`` reads
    ``d_{ΩC'}(ΣF(e)) = α(d_{ΩC}[e])``; the length-``k`` part of the
    difference is the residual for ``(e, k)``.
    """
    OC = OC or cobar(fam.source, trunc, word_cap)
    OD = OD or cobar(fam.target, trunc, word_cap)
    wc = OD.word_cap
    rep = DCSHReport()
    C = fam.source

    def alpha_word(w):
        out: Comb = {(): 1}
        for e in w:
            nxt: Comb = {}
            for a, c1 in out.items():
                for b, c2 in fam.total(e).items():
                    ab = a + b
                    if wc is not None and len(ab) > wc:
                        continue
                    add_into(nxt, ab, c1 * c2)
            out = nxt
        return out

    for n in range(1, trunc + 2):
        for e in C.reduced_basis(n):
            rep.checked += 1
            lhs = _d_comb(OD, fam.total(e))
            for w, c in OC.letter_d(e).items():
                add_comb(lhs, alpha_word(w), -c)
            by_len: Dict[int, Comb] = {}
            for w, c in lhs.items():
                by_len.setdefault(len(w), {})[w] = c
            for k in sorted(by_len):
                rep.residuals[(e, k)] = by_len[k]
    return rep


def _d_comb(O: CobarAlgebra, comb: Comb) -> Comb:
    out: Comb = {}
    for w, c in comb.items():
        add_comb(out, O.word_d(w), c)
    return out


def degeneracy_weight(y) -> int:
    """Total number of degeneracies in the two components of a product simplex."""
    (x, tx), (z, tz) = y
    n = len(tx) - 1
    return (n - tx[-1]) + (n - tz[-1])


def vanishing_certificate(fam: DCSHFamily, upto: int):
    """Check ``F_k(y) = 0`` for ``k > n - p + 1`` on every product simplex.

    ``n`` is the dimension of ``y`` and ``p`` its degeneracy weight.  Returns
    ``(inspected, violations)`` with violations as ``(y, index, bound)``.
    """
    C = fam.source
    bad = []
    count = 0
    for n in range(1, upto + 1):
        for y in C.reduced_basis(n):
            count += 1
            bound = n - degeneracy_weight(y) + 1
            idx = fam.vanishing_index(y)
            if idx > bound:
                bad.append((y, idx, bound))
    return count, bad
