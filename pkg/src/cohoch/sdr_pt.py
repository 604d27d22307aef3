"""Strong deformation retracts, the Eilenberg–MacLane SDR and perturbation.

An SDR ``(X) <=[∇, f]=> (Y), h`` satisfies ``f∇ = Id``, ``dh + hd = ∇f - Id``,
``h∇ = 0``, ``fh = 0`` and ``hh = 0``.  For normalized chains of a product the
three maps are the shuffle map, the Alexander–Whitney map and the
Eilenberg–MacLane homotopy, each evaluated symbol by symbol.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .algebra import ChainCoalgebra, tensor_coalgebra
from .chain_core import ChainMap, FreeChainComplex, TensorComplex, identity_map, zero_map, min_trunc
from .errors import PerturbationNotLowering, SquareNotZero
from .lincomb import Comb, add_comb, add_into, mapped, sign
from .simplicial import (ProductSet, SimplicialSet, _pair_normalize, degeneracies_of, is_degenerate,
                         normalized_chains, sdim, theta_from_degeneracies)

__all__ = ["SDRData", "em_sdr", "verify_sdr", "basic_perturbation", "identity_sdr",
           "shuffle_sign", "twisting_perturbation", "SDRReport"]


def shuffle_sign(first, second) -> int:
    """Sign of the permutation listing ``first`` then ``second`` in order."""
    seq = list(first) + list(second)
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return sign(inv)


@dataclass
class SDRData:
    X: FreeChainComplex
    Y: FreeChainComplex
    nabla: ChainMap
    f: ChainMap
    h: ChainMap
    filtration: Callable[[Hashable], int]
    x_filtration: Optional[Callable[[Hashable], int]] = None
    trunc: Optional[int] = None
    coalgebras: Optional[Tuple[ChainCoalgebra, ChainCoalgebra]] = None

    @property
    def top(self) -> int:
        return min(self.X.top, self.Y.top) if self.trunc is None else self.trunc


@dataclass
class SDRReport:
    """Per condition and per degree: ``None`` for pass, else the witness."""

    results: Dict[str, Dict[int, Optional[Hashable]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(w is None for r in self.results.values() for w in r.values())

    def failures(self) -> List[Tuple[str, int, Hashable]]:
        return [(c, n, w) for c, r in self.results.items() for n, w in sorted(r.items()) if w is not None]

    def to_json(self, label=str) -> dict:
        return {
            "ok": self.ok,
            "conditions": {
                c: [{"degree": n, "ok": w is None, "witness": None if w is None else label(w)}
                    for n, w in sorted(r.items())]
                for c, r in self.results.items()
            },
        }


CONDITIONS = ("f∇ = Id", "dh + hd = ∇f - Id", "h∇ = 0", "fh = 0", "hh = 0")


def verify_sdr(S: SDRData, upto: Optional[int] = None) -> SDRReport:
    """Check the five SDR identities degree by degree."""
    top = S.top if upto is None else min(upto, S.top)
    X, Y = S.X, S.Y
    rep = SDRReport({c: {} for c in CONDITIONS})
    for n in range(top + 1):
        w = None
        for x in X.basis(n):
            if S.f.apply(S.nabla(x)) != {x: 1}:
                w = x
                break
        rep.results["f∇ = Id"][n] = w
        w = None
        for x in X.basis(n):
            if S.h.apply(S.nabla(x)):
                w = x
                break
        rep.results["h∇ = 0"][n] = w
        w1 = w2 = w3 = None
        for y in Y.basis(n):
            hy = S.h(y)
            if w1 is None and n + 1 <= Y.top:
                lhs = Y.d_comb(hy)
                add_comb(lhs, S.h.apply(Y.d(y)))
                rhs = S.nabla.apply(S.f(y))
                add_into(rhs, y, -1)
                if lhs != rhs:
                    w1 = y
            if w2 is None and S.f.apply(hy):
                w2 = y
            if w3 is None and S.h.apply(hy):
                w3 = y
        rep.results["dh + hd = ∇f - Id"][n] = w1
        rep.results["fh = 0"][n] = w2
        rep.results["hh = 0"][n] = w3
    return rep


def identity_sdr(C: FreeChainComplex, filtration=None) -> SDRData:
    I = identity_map(C)
    return SDRData(C, C, I, I, zero_map(C, C, 1), filtration or (lambda t: 0))


# ---------------------------------------------------------------------------
# Eilenberg–MacLane data


def em_sdr(K: SimplicialSet, L: SimplicialSet, trunc: Optional[int] = None,
           CK: Optional[ChainCoalgebra] = None, CL: Optional[ChainCoalgebra] = None,
           P: Optional[SimplicialSet] = None,
           filtration: Optional[Callable[[Hashable], int]] = None) -> SDRData:
    """The shuffle / Alexander–Whitney / Eilenberg–MacLane SDR.

    ``X = C_*K ⊗ C_*L`` and ``Y = C_*(K × L)``.  ``P`` may be a twisted
    product with the same simplices; its faces are then used for ``d`` on
    ``Y`` while ``∇, f, h`` are the untwisted formulas.  The default
    filtration weighs a simplex by the dimension of its ``K`` component.
    """
    CK = CK or normalized_chains(K)
    CL = CL or normalized_chains(L)
    prod = P or ProductSet(K, L)
    CP = normalized_chains(prod)
    XC = tensor_coalgebra(CK, CL)
    X, Y = XC.complex, CP.complex

    def f(b):
        x, y = b
        n = sdim(x)
        out: Comb = {}
        for r in range(n + 1):
            a = K.front(x, r)
            if is_degenerate(a):
                continue
            c = L.back(y, r)
            if is_degenerate(c):
                continue
            add_into(out, (a[0], c[0]), 1)
        return out

    def nabla(p):
        x, y = p
        pd, qd = K.dim_of(x), L.dim_of(y)
        n = pd + qd
        out: Comb = {}
        for B in itertools.combinations(range(n), pd):
            A = tuple(j for j in range(n) if j not in B)
            s = shuffle_sign(B, A)
            sx = (x, theta_from_degeneracies(A, n))
            sy = (y, theta_from_degeneracies(B, n))
            b, th = _pair_normalize(sx, sy)
            if not is_degenerate((b, th)):
                add_into(out, b, s)
        return out

    def h(b):
        x, y = b
        n = sdim(x)
        out: Comb = {}
        for m in range(n):
            rng = list(range(m + 1, n + 1))
            for r in range(m + 1, n + 1):
                xr = K.front(x, r)
                yv = L.pull(y, tuple(range(m + 1)) + tuple(range(r, n + 1)))
                Dx, Dy = _degeneracy_set(xr[1]), _degeneracy_set(yv[1])
                # below m both degeneracy operators fix indices
                if any(j < m and j in Dy for j in Dx):
                    continue
                for B in itertools.combinations(rng, r - m):
                    J = (m,) + tuple(j for j in rng if j not in B)
                    if _collides(B, J, Dx) or _collides(J, B, Dy):
                        continue
                    s = _h_sign(m, r, n, J[1:], B)
                    add_into(out, (_degenerate(xr, J, n + 1), _degenerate(yv, B, n + 1)), s)
        return out

    S = SDRData(
        X, Y,
        ChainMap(X, Y, nabla, 0, name="∇"),
        ChainMap(Y, X, f, 0, name="f"),
        ChainMap(Y, Y, h, 1, name="h"),
        filtration=filtration or (lambda b: b[0][1][-1]),
        x_filtration=lambda p: CK.degree(p[0]),
        trunc=trunc,
        coalgebras=(XC, CP),
    )
    S.K, S.L, S.product = K, L, prod
    return S


def _degenerate(s, J, n: int):
    """Apply ``s_J`` (set of indices, all below ``n``) to the general simplex ``s``.

    The output has dimension ``n``; its degeneracy set is ``J`` joined with
    the degeneracies ``s`` already has, shifted through ``J``.
    """
    base, th = s
    sig = theta_from_degeneracies(J, n)
    return (base, tuple(th[v] for v in sig))


def _degeneracy_set(th) -> set:
    return {j for j in range(len(th) - 1) if th[j] == th[j + 1]}


def _collides(P, J, D) -> bool:
    """Whether ``s_J`` of a simplex with degeneracies ``D`` is degenerate at some ``p`` in ``P``.

    ``P`` and ``J`` are disjoint and sorted.
    """
    k = 0
    for p in P:
        while k < len(J) and J[k] < p:
            k += 1
        if p - k in D:
            return True
    return False


def _h_sign(m: int, r: int, n: int, A, B) -> int:
    return shuffle_sign(B, A) * sign(m)


# ---------------------------------------------------------------------------
# perturbation


def twisting_perturbation(twisted: FreeChainComplex, untwisted: FreeChainComplex) -> ChainMap:
    """``θ = d_twisted - d_untwisted`` on complexes sharing one basis."""
    def fn(b):
        out = dict(twisted.d(b))
        add_comb(out, untwisted.d(b), -1)
        return out
    return ChainMap(untwisted, untwisted, fn, -1, name="θ")


def basic_perturbation(S: SDRData, theta: ChainMap, trunc: Optional[int] = None,
                       check: bool = True) -> SDRData:
    """Perturb ``S`` by ``θ`` using the geometric series of the lemma.

    Each series is summed until it vanishes; termination within
    (filtration weight + 1) terms is enforced.
    """
    Y = S.Y
    top = S.top if trunc is None else min(trunc, S.top)
    wt = S.filtration

    bound = [0]

    def note_bound(t):
        bound[0] = max(bound[0], wt(t))

    if check:
        for n in range(top + 1):
            for y in Y.basis(n):
                w = wt(y)
                note_bound(y)
                for z in theta(y):
                    if wt(z) >= w:
                        raise PerturbationNotLowering(f"θ does not lower the filtration at {Y.label(y)}")
                dd = Y.d_comb(Y.d(y))
                dd2 = theta.apply(Y.d(y))
                add_comb(dd, Y.d_comb(theta(y)))
                add_comb(dd, theta.apply(theta(y)))
                add_comb(dd, dd2)
                if dd:
                    raise SquareNotZero(f"(d + θ)² ≠ 0 at {Y.label(y)}")
    limit = max(bound[0], max((wt(y) for n in range(top + 1) for y in Y.basis(n)), default=0)) + 2
    terms_used = [0]

    def series(start: Comb, step: Callable[[Comb], Comb]) -> Comb:
        out: Comb = {}
        cur = start
        k = 0
        while cur:
            k += 1
            if k > limit:
                raise PerturbationNotLowering("perturbation series did not terminate")
            cur = step(cur)
            add_comb(out, cur)
        terms_used[0] = max(terms_used[0], k - 1)
        return out

    h, f, nab = S.h, S.f, S.nabla

    def h_theta(c):
        return h.apply(theta.apply(c))

    def theta_h(c):
        return theta.apply(h.apply(c))

    def nabla_inf(x):
        base = nab(x)
        out = dict(base)
        add_comb(out, series(base, h_theta))
        return out

    def f_inf(y):
        out = dict(f(y))
        add_comb(out, f.apply(series({y: 1}, theta_h)))
        return out

    def h_inf(y):
        hy = h(y)
        out = dict(hy)
        add_comb(out, series(hy, h_theta))
        return out

    def dX_inf(x):
        out = dict(S.X.d(x))
        tn = theta.apply(nab(x))
        add_comb(out, f.apply(tn))
        add_comb(out, f.apply(series(tn, theta_h)))
        return out

    X2 = FreeChainComplex(lambda n: S.X.basis(n), dX_inf, trunc=S.X.trunc, degree_of=S.X.degree,
                          name=f"{S.X.name}∞", label=S.X.label)
    if S.X.trunc is None:
        X2._top = S.X.top
        X2._basis_fn = lambda n: S.X.basis(n) if n <= S.X.top else ()

    def dY(y):
        out = dict(Y.d(y))
        add_comb(out, theta(y))
        return out

    Y2 = FreeChainComplex(lambda n: Y.basis(n), dY, trunc=Y.trunc, degree_of=Y.degree,
                          name=f"{Y.name}+θ", label=Y.label)
    if Y.trunc is None:
        Y2._top = Y.top
        Y2._basis_fn = lambda n: Y.basis(n) if n <= Y.top else ()
    out = SDRData(X2, Y2, ChainMap(X2, Y2, nabla_inf, 0, name="∇∞"),
                  ChainMap(Y2, X2, f_inf, 0, name="f∞"), ChainMap(Y2, Y2, h_inf, 1, name="h∞"),
                  S.filtration, S.x_filtration, trunc=S.trunc)
    out.series_terms = terms_used
    out.series_limit = limit
    return out
