"""Chain coalgebras, chain algebras and their (co)modules.

Structure maps are given on basis terms and return sparse combinations.  A
comultiplication returns a combination of pairs ``(x, y)`` meaning ``x ⊗ y``;
a product takes two terms and returns a combination.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Optional

from .chain_core import ChainMap, FreeChainComplex, TensorComplex
from .lincomb import Comb, add_comb, add_into, sign

Term = Hashable


class ChainCoalgebra:
    """A complex with a counital comultiplication and a chosen unit term.

    ``unit`` is the basis term spanning the coaugmentation ``Z -> C``; the
    coaugmentation coideal is spanned by the remaining basis terms.
    """

    def __init__(self, complex: FreeChainComplex, delta: Callable[[Term], Comb],
                 counit: Callable[[Term], int], unit: Optional[Term] = None, name: str = ""):
        self.complex = complex
        self._delta = delta
        self._counit = counit
        self.unit = unit
        self.name = name or complex.name
        self._dcache: Dict[Term, Comb] = {}
        self._rcache: Dict[Term, Comb] = {}
        self._sq: Optional[TensorComplex] = None

    @property
    def trunc(self):
        return self.complex.trunc

    def degree(self, t: Term) -> int:
        return self.complex.degree(t)

    def d(self, t: Term) -> Comb:
        return self.complex.d(t)

    def delta(self, t: Term) -> Comb:
        r = self._dcache.get(t)
        if r is None:
            r = self._delta(t)
            self._dcache[t] = r
        return r

    def counit(self, t: Term) -> int:
        return self._counit(t)

    def is_reduced_term(self, t: Term) -> bool:
        return t != self.unit

    def reduced_basis(self, n: int):
        return tuple(t for t in self.complex.basis(n) if t != self.unit)

    def reduced_delta(self, t: Term) -> Comb:
        """The reduced diagonal: ``Δ`` projected to ``C̄ ⊗ C̄``."""
        r = self._rcache.get(t)
        if r is None:
            u = self.unit
            r = {p: c for p, c in self.delta(t).items() if p[0] != u and p[1] != u}
            self._rcache[t] = r
        return r

    def reduced_d(self, t: Term) -> Comb:
        u = self.unit
        return {s: c for s, c in self.d(t).items() if s != u}

    @property
    def square(self) -> TensorComplex:
        if self._sq is None:
            self._sq = TensorComplex(self.complex, self.complex)
        return self._sq

    def delta_map(self) -> ChainMap:
        return ChainMap(self.complex, self.square, self.delta, 0, name="Δ")

    def is_connected(self) -> bool:
        return len(self.reduced_basis(0)) == 0

    # -- axiom checks, each returning a witness term or None ------------
    def coassociativity_witness(self, upto: Optional[int] = None):
        top = self.complex.top if upto is None else upto
        for n in range(top + 1):
            for t in self.complex.basis(n):
                left: Comb = {}
                right: Comb = {}
                for (a, b), c in self.delta(t).items():
                    for (a1, a2), c1 in self.delta(a).items():
                        add_into(left, (a1, a2, b), c * c1)
                    for (b1, b2), c2 in self.delta(b).items():
                        add_into(right, (a, b1, b2), c * c2)
                if left != right:
                    return t
        return None

    def counit_witness(self, upto: Optional[int] = None):
        top = self.complex.top if upto is None else upto
        for n in range(top + 1):
            for t in self.complex.basis(n):
                left: Comb = {}
                right: Comb = {}
                for (a, b), c in self.delta(t).items():
                    add_into(left, b, c * self.counit(a))
                    add_into(right, a, c * self.counit(b))
                if left != {t: 1} or right != {t: 1}:
                    return t
        return None

    def coderivation_witness(self, upto: Optional[int] = None):
        return self.delta_map().witness(upto)


def tensor_coalgebra(C: ChainCoalgebra, D: ChainCoalgebra, name: str = "") -> ChainCoalgebra:
    """``C ⊗ D`` with ``Δ(x⊗y) = Σ ± (x'⊗y') ⊗ (x''⊗y'')``."""
    T = TensorComplex(C.complex, D.complex)

    def delta(p):
        x, y = p
        out: Comb = {}
        dy = D.delta(y)
        for (x1, x2), c1 in C.delta(x).items():
            e2 = C.degree(x2)
            for (y1, y2), c2 in dy.items():
                s = sign(e2 * D.degree(y1))
                add_into(out, ((x1, y1), (x2, y2)), s * c1 * c2)
        return out

    unit = (C.unit, D.unit) if C.unit is not None and D.unit is not None else None
    return ChainCoalgebra(T, delta, lambda p: C.counit(p[0]) * D.counit(p[1]), unit,
                          name=name or f"{C.name}⊗{D.name}")


class ChainAlgebra:
    """A complex with an associative unital product.

    ``unit`` is the basis term of the unit, ``augmentation`` sends a basis
    term to an integer.
    """

    def __init__(self, complex: FreeChainComplex, mul: Callable[[Term, Term], Comb],
                 unit: Term, augmentation: Callable[[Term], int], name: str = ""):
        self.complex = complex
        self._mul = mul
        self.unit = unit
        self._aug = augmentation
        self.name = name or complex.name

    @property
    def trunc(self):
        return self.complex.trunc

    def degree(self, t: Term) -> int:
        return self.complex.degree(t)

    def d(self, t: Term) -> Comb:
        return self.complex.d(t)

    def mul(self, a: Term, b: Term) -> Comb:
        return self._mul(a, b)

    def mul_comb(self, x: Comb, y: Comb) -> Comb:
        out: Comb = {}
        for a, c in x.items():
            for b, e in y.items():
                add_comb(out, self._mul(a, b), c * e)
        return out

    def augmentation(self, t: Term) -> int:
        return self._aug(t)

    def reduced_basis(self, n: int):
        return tuple(t for t in self.complex.basis(n) if t != self.unit)

    def reduced_mul(self, a: Term, b: Term) -> Comb:
        """Product projected to the augmentation ideal (unit term dropped)."""
        return {t: c for t, c in self._mul(a, b).items() if t != self.unit}

    def reduced_d(self, t: Term) -> Comb:
        return {s: c for s, c in self.d(t).items() if s != self.unit}

    def is_connected(self) -> bool:
        return len(self.reduced_basis(0)) == 0

    def derivation_witness(self, upto: Optional[int] = None):
        """First pair ``(a, b)`` with ``d(ab) != d(a)b + (-1)^|a| a d(b)``."""
        top = self.complex.top if upto is None else upto
        for n in range(top + 1):
            for i in range(n + 1):
                for a in self.complex.basis(i):
                    for b in self.complex.basis(n - i):
                        lhs = self.complex.d_comb(self.mul(a, b))
                        rhs = self.mul_comb(self.d(a), {b: 1})
                        add_comb(rhs, self.mul_comb({a: 1}, self.d(b)), sign(i))
                        if lhs != rhs:
                            return (a, b)
        return None


class Bicomodule:
    """A complex ``N`` with left and right coactions of a coalgebra ``C``.

    ``left(x)`` returns pairs ``(c, y)`` for ``c ⊗ y`` and ``right(x)``
    returns pairs ``(y, c)`` for ``y ⊗ c``.
    """

    def __init__(self, complex: FreeChainComplex, C: ChainCoalgebra,
                 left: Callable[[Term], Comb], right: Callable[[Term], Comb],
                 unit: Optional[Term] = None, name: str = ""):
        self.complex = complex
        self.coalgebra = C
        self._left = left
        self._right = right
        self.unit = unit
        self.name = name or complex.name
        self._lc: Dict[Term, Comb] = {}
        self._rc: Dict[Term, Comb] = {}

    @property
    def trunc(self):
        return self.complex.trunc

    def degree(self, t: Term) -> int:
        return self.complex.degree(t)

    def left(self, x: Term) -> Comb:
        r = self._lc.get(x)
        if r is None:
            r = self._left(x)
            self._lc[x] = r
        return r

    def right(self, x: Term) -> Comb:
        r = self._rc.get(x)
        if r is None:
            r = self._right(x)
            self._rc[x] = r
        return r

    def axiom_witness(self, upto: Optional[int] = None):
        """Return ``(law, term)`` for the first failing bicomodule law."""
        C = self.coalgebra
        top = self.complex.top if upto is None else upto
        for n in range(top + 1):
            for x in self.complex.basis(n):
                # coassociativity of each coaction
                a: Comb = {}
                b: Comb = {}
                for (c, y), k in self.left(x).items():
                    for (c1, c2), k1 in C.delta(c).items():
                        add_into(a, (c1, c2, y), k * k1)
                    for (c2, y2), k2 in self.left(y).items():
                        add_into(b, (c, c2, y2), k * k2)
                if a != b:
                    return ("left coassociativity", x)
                a, b = {}, {}
                for (y, c), k in self.right(x).items():
                    for (c1, c2), k1 in C.delta(c).items():
                        add_into(a, (y, c1, c2), k * k1)
                    for (y2, c1), k2 in self.right(y).items():
                        add_into(b, (y2, c1, c), k * k2)
                if a != b:
                    return ("right coassociativity", x)
                # counit laws
                a = {}
                for (c, y), k in self.left(x).items():
                    add_into(a, y, k * C.counit(c))
                b = {}
                for (y, c), k in self.right(x).items():
                    add_into(b, y, k * C.counit(c))
                if a != {x: 1} or b != {x: 1}:
                    return ("counit", x)
                # the two coactions commute
                a, b = {}, {}
                for (y, c2), k in self.right(x).items():
                    for (c1, z), k1 in self.left(y).items():
                        add_into(a, (c1, z, c2), k * k1)
                for (c1, y), k in self.left(x).items():
                    for (z, c2), k2 in self.right(y).items():
                        add_into(b, (c1, z, c2), k * k2)
                if a != b:
                    return ("commuting coactions", x)
                # coactions are chain maps
                if not self._coaction_is_chain(x):
                    return ("coaction chain map", x)
        return None

    def _coaction_is_chain(self, x: Term) -> bool:
        C = self.coalgebra
        N = self.complex
        for act, first_is_c in ((self.left, True), (self.right, False)):
            lhs: Comb = {}
            for p, k in act(x).items():
                u, v = p
                du = C.d(u) if first_is_c else N.d(u)
                for u2, c in du.items():
                    add_into(lhs, (u2, v), k * c)
                s = sign(C.degree(u) if first_is_c else N.degree(u))
                dv = N.d(v) if first_is_c else C.d(v)
                for v2, c in dv.items():
                    add_into(lhs, (u, v2), s * k * c)
            rhs: Comb = {}
            for y, k in N.d(x).items():
                add_comb(rhs, act(y), k)
            if lhs != rhs:
                return False
        return True


def coalgebra_as_bicomodule(C: ChainCoalgebra) -> Bicomodule:
    """``C`` over itself, both coactions given by ``Δ``."""
    return Bicomodule(C.complex, C, C.delta, C.delta, unit=C.unit, name=C.name)


def trivial_bicomodule(C: ChainCoalgebra) -> Bicomodule:
    """``Z`` in degree 0 with coactions through the coaugmentation."""
    from .chain_core import FreeChainComplex as _F

    if C.unit is None:
        raise ValueError("trivial bicomodule needs a coaugmented coalgebra")
    one = ("1",)
    Z = _F({0: [one]}, lambda t: {}, name="Z")
    u = C.unit
    return Bicomodule(Z, C, lambda x: {(u, one): 1}, lambda x: {(one, u): 1}, unit=one, name="Z")


def induced_bicomodule(C: ChainCoalgebra, D: ChainCoalgebra, g: ChainMap, h: ChainMap,
                       name: str = "") -> Bicomodule:
    """``C`` as a ``D``-bicomodule through coalgebra maps ``g`` and ``h``.

    The left coaction is ``(g ⊗ 1)Δ`` and the right coaction ``(1 ⊗ h)Δ``.
    """

    def left(x):
        out: Comb = {}
        for (a, b), k in C.delta(x).items():
            for a2, c in g(a).items():
                add_into(out, (a2, b), k * c)
        return out

    def right(x):
        out: Comb = {}
        for (a, b), k in C.delta(x).items():
            for b2, c in h(b).items():
                add_into(out, (a, b2), k * c)
        return out

    return Bicomodule(C.complex, D, left, right, unit=C.unit, name=name or C.name)


class Bimodule:
    """A complex ``M`` with left and right actions of an algebra ``A``."""

    def __init__(self, complex: FreeChainComplex, A: ChainAlgebra,
                 left: Callable[[Term, Term], Comb], right: Callable[[Term, Term], Comb],
                 augmentation: Callable[[Term], int], name: str = ""):
        self.complex = complex
        self.algebra = A
        self._left = left
        self._right = right
        self._aug = augmentation
        self.name = name or complex.name

    @property
    def trunc(self):
        return self.complex.trunc

    def degree(self, t: Term) -> int:
        return self.complex.degree(t)

    def act_left(self, a: Term, x: Term) -> Comb:
        return self._left(a, x)

    def act_right(self, x: Term, a: Term) -> Comb:
        return self._right(x, a)

    def augmentation(self, x: Term) -> int:
        return self._aug(x)

    def axiom_witness(self, upto: Optional[int] = None):
        A = self.algebra
        M = self.complex
        top = M.top if upto is None else upto
        amax = A.complex.top
        for n in range(top + 1):
            for x in M.basis(n):
                if self.act_left(A.unit, x) != {x: 1} or self.act_right(x, A.unit) != {x: 1}:
                    return ("unit", x)
                for i in range(1, min(amax, top) + 1):
                    for a in A.complex.basis(i):
                        for b in A.complex.basis(i):
                            lhs: Comb = {}
                            for ab, c in A.mul(a, b).items():
                                add_comb(lhs, self.act_left(ab, x), c)
                            rhs: Comb = {}
                            for bx, c in self.act_left(b, x).items():
                                add_comb(rhs, self.act_left(a, bx), c)
                            if lhs != rhs:
                                return ("left associativity", (a, b, x))
                            l2: Comb = {}
                            for ax, c in self.act_left(a, x).items():
                                add_comb(l2, self.act_right(ax, b), c)
                            r2: Comb = {}
                            for xb, c in self.act_right(x, b).items():
                                add_comb(r2, self.act_left(a, xb), c)
                            if l2 != r2:
                                return ("commuting actions", (a, b, x))
        return None


def algebra_as_bimodule(A: ChainAlgebra) -> Bimodule:
    return Bimodule(A.complex, A, A.mul, A.mul, A.augmentation, name=A.name)


def trivial_bimodule(A: ChainAlgebra) -> Bimodule:
    one = ("1",)
    Z = FreeChainComplex({0: [one]}, lambda t: {}, name="Z")

    def left(a, x):
        e = A.augmentation(a)
        return {x: e} if e else {}

    def right(x, a):
        e = A.augmentation(a)
        return {x: e} if e else {}

    return Bimodule(Z, A, left, right, lambda x: 1, name="Z")
