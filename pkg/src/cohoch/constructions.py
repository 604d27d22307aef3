"""Bar, cobar, Hochschild and coHochschild complexes.

Words are tuples of basis terms.  In a cobar word ``(c1, ..., ck)`` stands
for ``s⁻¹c1|...|s⁻¹ck`` and has degree ``Σ(|ci| - 1)``; in a bar word
``(a1, ..., an)`` stands for ``sa1|...|san`` with degree ``Σ(|ai| + 1)``.

All signs come from the rules

* ``d(s⁻¹c) = -s⁻¹ dc`` and ``(s⁻¹ ⊗ s⁻¹)(a ⊗ b) = (-1)^{|a|} s⁻¹a|s⁻¹b``,
* the cobar differential is extended as a derivation,
* the analogous suspension rules on the bar side,

and every coaction term is obtained by commuting desuspended letters past
the elements they jump, using :func:`cohoch.lincomb.koszul`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .algebra import (Bicomodule, Bimodule, ChainAlgebra, ChainCoalgebra, algebra_as_bimodule,
                      coalgebra_as_bicomodule, trivial_bicomodule, trivial_bimodule)
from .chain_core import ChainMap, FreeChainComplex, TensorComplex, min_trunc
from .errors import InfiniteLevel, NotABicomodule, NotABimodule, NotConnected
from .lincomb import Comb, add_comb, add_into, sign

Word = Tuple[Hashable, ...]

__all__ = [
    "cobar", "bar", "hochschild", "cohochschild", "two_sided_cobar", "bar_cobar_unit",
    "norm_operator", "CobarAlgebra", "BarCoalgebra", "CoHochschildComplex",
    "HochschildComplex", "words_of_degree", "acyclic_bicomodule", "TwoSidedCobar",
    "tensor_square_bicomodule", "rotation_isomorphism", "iterated_reduced_delta",
    "desuspension_sign", "derivation_on_word",
]


def words_of_degree(letters: Dict[int, Sequence[Hashable]], n: int,
                    cap: Optional[int] = None) -> List[Word]:
    """All words whose letter weights sum to ``n``.

    ``letters`` maps a weight to the letters of that weight.  Weight-0
    letters require a length ``cap``.
    """
    weights = sorted(w for w, ls in letters.items() if ls)
    if weights and weights[0] < 0:
        raise ValueError("negative letter weight")
    if weights and weights[0] == 0 and cap is None:
        raise InfiniteLevel("weight-0 letters make every level infinite; a word cap is needed")
    out: List[Word] = []

    def rec(prefix: List[Hashable], remaining: int):
        if remaining == 0:
            out.append(tuple(prefix))
        if cap is not None and len(prefix) >= cap:
            return
        for w in weights:
            if w > remaining:
                break
            if w == 0 and remaining == 0 and cap is None:
                continue
            for L in letters[w]:
                prefix.append(L)
                rec(prefix, remaining - w)
                prefix.pop()

    rec([], n)
    return out


# ---------------------------------------------------------------------------
# cobar


class CobarAlgebra(ChainAlgebra):
    """``ΩC = T(s⁻¹C̄)`` with concatenation and the cobar differential."""

    def __init__(self, C: ChainCoalgebra, trunc: int, word_cap: Optional[int] = None):
        if not C.is_connected():
            raise NotConnected(f"{C.name} has reduced classes in degree 0")
        self.coalgebra = C
        self.word_cap = word_cap
        has_zero = len(C.reduced_basis(1)) > 0
        if has_zero and word_cap is None:
            raise InfiniteLevel(f"{C.name} has degree-1 reduced classes; pass a word cap")
        self.mode = "capped" if has_zero else "full"
        ctop = C.complex.top if C.trunc is None else C.trunc
        self._letters = {k - 1: C.reduced_basis(k) for k in range(1, min(ctop, trunc + 1) + 1)}
        complex = FreeChainComplex(
            lambda n: words_of_degree(self._letters, n, word_cap),
            self.word_d, trunc=trunc, degree_of=self.word_degree,
            name=f"Ω{C.name}", label=self.word_label)
        super().__init__(complex, self._concat, (), lambda w: 1 if w == () else 0, name=complex.name)

    def _concat(self, a: Word, b: Word) -> Comb:
        w = a + b
        if self.word_cap is not None and len(w) > self.word_cap:
            return {}
        return {w: 1}

    def word_degree(self, w: Word) -> int:
        deg = self.coalgebra.degree
        return sum(deg(c) - 1 for c in w)

    def word_label(self, w: Word) -> str:
        if not w:
            return "[]"
        lab = self.coalgebra.complex.label
        return "[" + "|".join(lab(c) for c in w) + "]"

    def letter_d(self, c: Hashable) -> Comb:
        """``d(s⁻¹c)`` as a combination of words of length 1 and 2."""
        C = self.coalgebra
        out: Comb = {}
        for c2, k in C.reduced_d(c).items():
            if C.degree(c2) >= 1:
                add_into(out, (c2,), -k)
        for (a, b), k in C.reduced_delta(c).items():
            add_into(out, (a, b), sign(C.degree(a)) * k)
        return out

    def word_d(self, w: Word) -> Comb:
        return derivation_on_word(w, self.letter_d, lambda c: self.coalgebra.degree(c) - 1,
                                  self.word_cap)

    def realize_generator(self, c: Hashable) -> Word:
        return (c,)


def derivation_on_word(w: Word, letter_d: Callable[[Hashable], Comb],
                       weight: Callable[[Hashable], int], cap: Optional[int] = None) -> Comb:
    """Extend a letter differential to a word as a derivation."""
    out: Comb = {}
    pre = 0
    for i, c in enumerate(w):
        s = sign(pre)
        head, tail = w[:i], w[i + 1:]
        for v, k in letter_d(c).items():
            nw = head + v + tail
            if cap is not None and len(nw) > cap:
                continue
            add_into(out, nw, s * k)
        pre += weight(c)
    return out


def cobar(C: ChainCoalgebra, trunc: int, word_cap: Optional[int] = None) -> CobarAlgebra:
    return CobarAlgebra(C, trunc, word_cap)


def desuspension_sign(degrees: Sequence[int]) -> int:
    """Sign of ``(s⁻¹)^{⊗k}(c1⊗...⊗ck) = ± s⁻¹c1|...|s⁻¹ck``."""
    k = len(degrees)
    return sign(sum((k - 1 - i) * d for i, d in enumerate(degrees)))


# ---------------------------------------------------------------------------
# bar


class BarCoalgebra(ChainCoalgebra):
    """``BA = T(sĀ)`` with the bar differential and deconcatenation."""

    def __init__(self, A: ChainAlgebra, trunc: int):
        if not A.is_connected():
            raise NotConnected(f"{A.name} has augmentation-ideal classes in degree 0")
        self.algebra = A
        atop = A.complex.top
        self._letters = {k + 1: A.reduced_basis(k) for k in range(1, min(atop, trunc) + 1)}
        complex = FreeChainComplex(
            lambda n: words_of_degree(self._letters, n), self.word_d, trunc=trunc,
            degree_of=self.word_degree, name=f"B{A.name}", label=self.word_label)
        super().__init__(complex, self._split, lambda w: 1 if w == () else 0, unit=(),
                         name=complex.name)

    def word_degree(self, w: Word) -> int:
        deg = self.algebra.degree
        return sum(deg(a) + 1 for a in w)

    def word_label(self, w: Word) -> str:
        lab = self.algebra.complex.label
        return "[" + "|".join(lab(a) for a in w) + "]"

    def _split(self, w: Word) -> Comb:
        return {(w[:i], w[i:]): 1 for i in range(len(w) + 1)}

    def word_d(self, w: Word) -> Comb:
        A = self.algebra
        out: Comb = {}
        eps = 0
        for i, a in enumerate(w):
            s = -sign(eps)
            for a2, k in A.reduced_d(a).items():
                if A.degree(a2) >= 1:
                    add_into(out, w[:i] + (a2,) + w[i + 1:], s * k)
            eps += A.degree(a) + 1
            if i + 1 < len(w):
                s2 = sign(eps)
                for ab, k in A.reduced_mul(a, w[i + 1]).items():
                    add_into(out, w[:i] + (ab,) + w[i + 2:], s2 * k)
        return out


def bar(A: ChainAlgebra, trunc: int) -> BarCoalgebra:
    return BarCoalgebra(A, trunc)


# ---------------------------------------------------------------------------
# Hochschild


class HochschildComplex(FreeChainComplex):
    """``T(sĀ) ⊗ M`` with terms ``(word, x)``.

    Besides the bar and internal parts the differential has the two action
    terms ``[a2..an] ⊗ x·a1`` and ``[a1..a(n-1)] ⊗ an·x``.
    """

    def __init__(self, A: ChainAlgebra, M: Bimodule, trunc: int):
        self.B = BarCoalgebra(A, trunc)
        self.A, self.M = A, M
        t = min_trunc(trunc, M.complex.trunc)
        super().__init__(self._basis, self._d, trunc=t, degree_of=self._deg,
                         name=f"H({A.name},{M.name})", label=self._lab)
        if t is None:
            self.trunc = trunc

    def _deg(self, p) -> int:
        return self.B.word_degree(p[0]) + self.M.degree(p[1])

    def _lab(self, p) -> str:
        return f"{self.B.word_label(p[0])}⊗{self.M.complex.label(p[1])}"

    def _basis(self, n):
        out = []
        for i in range(n + 1):
            for w in self.B.complex.basis(i):
                for x in self.M.complex.basis(n - i):
                    out.append((w, x))
        return out

    def _d(self, p) -> Comb:
        w, x = p
        A, M = self.A, self.M
        out: Comb = {}
        for w2, k in self.B.word_d(w).items():
            add_into(out, (w2, x), k)
        sw = sign(self.B.word_degree(w))
        for x2, k in M.complex.d(x).items():
            add_into(out, (w, x2), sw * k)
        if w:
            xd = M.degree(x)
            # an · x
            eps = self.B.word_degree(w[:-1])
            for y, k in M.act_left(w[-1], x).items():
                add_into(out, (w[:-1], y), -sign(eps) * k)
            # x · a1, with sa1 rotated past the rest and x
            a1 = w[0]
            rest = self.B.word_degree(w[1:])
            s = sign((A.degree(a1) + 1) * (rest + xd)) * sign(rest + xd)
            for y, k in M.act_right(x, a1).items():
                add_into(out, (w[1:], y), s * k)
        return out

    def inclusion(self) -> ChainMap:
        """``M -> H(A, M)``, ``x ↦ [] ⊗ x``."""
        return ChainMap(self.M.complex, self, lambda x: {((), x): 1}, 0, name="incl")

    def projection(self) -> ChainMap:
        """``H(A, M) -> BA`` through the augmentation of ``M``."""
        def fn(p):
            e = self.M.augmentation(p[1])
            return {p[0]: e} if e else {}
        return ChainMap(self, self.B.complex, fn, 0, name="proj")


def hochschild(A: ChainAlgebra, M: Optional[Bimodule] = None, trunc: int = 6,
               check: bool = False) -> HochschildComplex:
    if M is None:
        M = algebra_as_bimodule(A)
    if check:
        w = M.axiom_witness(min(trunc, 3))
        if w is not None:
            raise NotABimodule(f"bimodule law '{w[0]}' fails at {w[1]!r}")
    return HochschildComplex(A, M, trunc)


# ---------------------------------------------------------------------------
# coHochschild


class CoHochschildComplex(FreeChainComplex):
    """``N ⊗ T(s⁻¹C̄)`` with terms ``(x, word)``.

    ``d(x⊗w) = dx⊗w + (-1)^{|x|} x⊗d_Ω w + R + L`` where, writing
    ``ρ(x) = x_j⊗e^j`` and ``λ(x) = e_i⊗x^i``,

    * ``R = -Σ (-1)^{|x_j|} x_j ⊗ [e^j|w]``,
    * ``L = Σ (-1)^{(|e_i|-1)(|x^i|+|w|)} x^i ⊗ [w|e_i]``.

    The sign of ``L`` is the Koszul sign of moving ``s⁻¹e_i`` past ``x^i``
    and ``w``; the relative sign between ``R`` and ``L`` is what makes the
    constant loops on an even sphere into cycles.
    """

    def __init__(self, N: Bicomodule, C: ChainCoalgebra, trunc: int,
                 word_cap: Optional[int] = None, omega: Optional[CobarAlgebra] = None):
        self.N, self.C = N, C
        self.omega = omega if omega is not None else CobarAlgebra(C, trunc, word_cap)
        self.word_cap = self.omega.word_cap
        self.mode = self.omega.mode
        t = min_trunc(trunc, N.complex.trunc)
        super().__init__(self._basis, self._d, trunc=t, degree_of=self._deg,
                         name=f"HH({N.name},{C.name})", label=self._lab)

    def _deg(self, p) -> int:
        return self.N.degree(p[0]) + self.omega.word_degree(p[1])

    def _lab(self, p) -> str:
        return f"{self.N.complex.label(p[0])}⊗{self.omega.word_label(p[1])}"

    def _basis(self, n):
        out = []
        Ntop = self.N.complex.top
        for i in range(min(n, Ntop) + 1):
            xs = self.N.complex.basis(i)
            if not xs:
                continue
            ws = self.omega.complex.basis(n - i)
            for x in xs:
                for w in ws:
                    out.append((x, w))
        return out

    def _fits(self, w: Word) -> bool:
        return self.word_cap is None or len(w) <= self.word_cap

    def _d(self, p) -> Comb:
        x, w = p
        N, C, O = self.N, self.C, self.omega
        out: Comb = {}
        for x2, k in N.complex.d(x).items():
            add_into(out, (x2, w), k)
        sx = sign(N.degree(x))
        for w2, k in O.word_d(w).items():
            add_into(out, (x, w2), sx * k)
        u = C.unit
        wdeg = O.word_degree(w)
        for (xj, e), k in N.right(x).items():
            if e == u or C.degree(e) < 1:
                continue
            nw = (e,) + w
            if self._fits(nw):
                add_into(out, (xj, nw), -sign(N.degree(xj)) * k)
        for (e, xi), k in N.left(x).items():
            if e == u or C.degree(e) < 1:
                continue
            nw = w + (e,)
            if self._fits(nw):
                s = sign((C.degree(e) - 1) * (N.degree(xi) + wdeg))
                add_into(out, (xi, nw), s * k)
        return out

    def inclusion(self) -> ChainMap:
        """``ΩC -> ĤH``, ``w ↦ 1_N ⊗ w`` (needs a coaugmented ``N``)."""
        u = self.N.unit
        if u is None:
            raise ValueError("bicomodule has no unit term")
        return ChainMap(self.omega.complex, self, lambda w: {(u, w): 1}, 0, name="incl")

    def projection(self) -> ChainMap:
        """``ĤH -> N``, killing every term with a nonempty word."""
        return ChainMap(self, self.N.complex, lambda p: {p[0]: 1} if p[1] == () else {}, 0,
                        name="proj")


def cohochschild(N: Optional[Bicomodule], C: ChainCoalgebra, trunc: int,
                 word_cap: Optional[int] = None, check: bool = False) -> CoHochschildComplex:
    """``ĤH(N, C)``; ``N=None`` means ``C`` over itself."""
    if N is None:
        N = coalgebra_as_bicomodule(C)
    if check:
        w = N.axiom_witness(min(trunc, N.complex.top))
        if w is not None:
            raise NotABicomodule(f"bicomodule law '{w[0]}' fails at {w[1]!r}")
    return CoHochschildComplex(N, C, trunc, word_cap)


def acyclic_bicomodule(C: ChainCoalgebra) -> Bicomodule:
    """``C`` with left coaction ``Δ`` and right coaction ``x ↦ x ⊗ 1``.

    Its coHochschild complex is the usual acyclic cobar construction.
    """
    u = C.unit

    def right(x):
        return {(x, u): 1}

    return Bicomodule(C.complex, C, C.delta, right, unit=u, name=f"η{C.name}")


# ---------------------------------------------------------------------------
# two-sided cobar


class TwoSidedCobar(FreeChainComplex):
    """``Ω(M; C; N) = M ⊗ ΩC ⊗ N`` for a right comodule ``M`` and a left comodule ``N``.

    ``right_M(m)`` returns pairs ``(m', c)``; ``left_N(n)`` returns ``(c, n')``.
    """

    def __init__(self, Mc: FreeChainComplex, right_M, C: ChainCoalgebra, Nc: FreeChainComplex,
                 left_N, trunc: int, word_cap: Optional[int] = None,
                 omega: Optional[CobarAlgebra] = None):
        self.Mc, self.Nc, self.C = Mc, Nc, C
        self.rho, self.lam = right_M, left_N
        self.omega = omega if omega is not None else CobarAlgebra(C, trunc, word_cap)
        self.word_cap = self.omega.word_cap
        super().__init__(self._basis, self._d, trunc=trunc, degree_of=self._deg,
                         name=f"Ω({Mc.name};{C.name};{Nc.name})", label=self._lab)

    def _deg(self, t) -> int:
        return self.Mc.degree(t[0]) + self.omega.word_degree(t[1]) + self.Nc.degree(t[2])

    def _lab(self, t) -> str:
        return f"{self.Mc.label(t[0])}⊗{self.omega.word_label(t[1])}⊗{self.Nc.label(t[2])}"

    def _basis(self, n):
        out = []
        for i in range(min(n, self.Mc.top) + 1):
            for j in range(min(n - i, self.Nc.top) + 1):
                ws = self.omega.complex.basis(n - i - j)
                for m in self.Mc.basis(i):
                    for w in ws:
                        for x in self.Nc.basis(j):
                            out.append((m, w, x))
        return out

    def _d(self, t) -> Comb:
        m, w, x = t
        C, O = self.C, self.omega
        out: Comb = {}
        md, wd = self.Mc.degree(m), O.word_degree(w)
        for m2, k in self.Mc.d(m).items():
            add_into(out, (m2, w, x), k)
        for w2, k in O.word_d(w).items():
            add_into(out, (m, w2, x), sign(md) * k)
        for x2, k in self.Nc.d(x).items():
            add_into(out, (m, w, x2), sign(md + wd) * k)
        u = C.unit
        cap = self.word_cap
        for (m2, e), k in self.rho(m).items():
            if e == u or C.degree(e) < 1:
                continue
            nw = (e,) + w
            if cap is None or len(nw) <= cap:
                add_into(out, (m2, nw, x), -sign(self.Mc.degree(m2)) * k)
        for (e, x2), k in self.lam(x).items():
            if e == u or C.degree(e) < 1:
                continue
            nw = w + (e,)
            if cap is None or len(nw) <= cap:
                add_into(out, (m, nw, x2), sign(md + wd) * k)
        return out


def two_sided_cobar(C: ChainCoalgebra, trunc: int, word_cap: Optional[int] = None) -> TwoSidedCobar:
    """``Ω(C; C; C)`` with both coactions given by ``Δ``."""
    return TwoSidedCobar(C.complex, C.delta, C, C.complex, C.delta, trunc, word_cap)


def tensor_square_bicomodule(C: ChainCoalgebra) -> Bicomodule:
    """``C ⊗ C`` with ``λ(a⊗b) = a'⊗(a''⊗b)`` and ``ρ(a⊗b) = (a⊗b')⊗b''``."""
    T = TensorComplex(C.complex, C.complex)

    def left(p):
        a, b = p
        return {(a1, (a2, b)): k for (a1, a2), k in C.delta(a).items()}

    def right(p):
        a, b = p
        return {((a, b1), b2): k for (b1, b2), k in C.delta(b).items()}

    return Bicomodule(T, C, left, right, unit=(C.unit, C.unit), name=f"{C.name}⊗{C.name}")


def rotation_isomorphism(H: CoHochschildComplex, T: TwoSidedCobar) -> ChainMap:
    """``(a⊗b)⊗w ↦ (-1)^{|a|(|b|+|w|)} b⊗w⊗a`` from ``ĤH(C⊗C, C)`` to ``Ω(C;C;C)``."""
    deg = H.C.degree

    def fn(p):
        (a, b), w = p
        s = sign(deg(a) * (deg(b) + H.omega.word_degree(w)))
        return {(b, w, a): s}

    return ChainMap(H, T, fn, 0, name="rot")


# ---------------------------------------------------------------------------
# bar-cobar unit


def iterated_reduced_delta(C: ChainCoalgebra, c: Hashable, k: int) -> Comb:
    """``Δ̄^{(k-1)} c`` as a combination of ``k``-tuples of reduced terms."""
    cur: Comb = {(c,): 1}
    for _ in range(k - 1):
        nxt: Comb = {}
        for t, v in cur.items():
            for (a, b), k2 in C.reduced_delta(t[-1]).items():
                add_into(nxt, t[:-1] + (a, b), v * k2)
        cur = nxt
        if not cur:
            break
    return cur


def bar_cobar_unit(C: ChainCoalgebra, trunc: int,
                   BO: Optional[BarCoalgebra] = None) -> Tuple[ChainMap, BarCoalgebra]:
    """``η_C : C -> BΩC``, ``c ↦ Σ [[c1]|...|[cn]]`` over the iterated ``Δ̄``.

    With the sign rules of this module every term comes with coefficient +1.
    """
    O = CobarAlgebra(C, trunc)
    B = BO if BO is not None else BarCoalgebra(O, trunc)

    def fn(c):
        if c == C.unit:
            return {(): 1}
        out: Comb = {}
        for k in range(1, C.degree(c) + 1):
            parts = iterated_reduced_delta(C, c, k)
            if not parts:
                break
            for t, v in parts.items():
                add_into(out, tuple((a,) for a in t), v)
        return out

    return ChainMap(C.complex, B.complex, fn, 0, name="η"), B


# ---------------------------------------------------------------------------
# norm operator


def norm_operator(word: Sequence[Hashable], degree: Callable[[Hashable], int]) -> Comb:
    """Signed sum of the cyclic rotations of ``word``.

    The rotation starting at letter ``j`` carries the Koszul sign of moving
    ``v1..v(j-1)`` past ``vj..vn`` times the sign of the cyclic permutation.
    """
    w = tuple(word)
    n = len(w)
    out: Comb = {}
    degs = [degree(v) for v in w]
    for j in range(n):
        a = sum(degs[:j])
        b = sum(degs[j:])
        s = sign(a * b) * sign(j * (n - j))
        add_into(out, w[j:] + w[:j], s)
    return out
