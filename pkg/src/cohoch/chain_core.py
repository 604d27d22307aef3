"""Free chain complexes over the integers, chain maps, and integral homology.

Basis terms are arbitrary hashable values (usually nested tuples).  A complex
knows the degree of each of its terms and the differential of each term as a
sparse combination.  Everything that is infinite overall carries a ``trunc``:
bases and differentials are exact in degrees ``<= trunc`` and homology is only
reported below it.  ``trunc=None`` means the complex is finite and exact in
every degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeOutOfRange, NotAChainMap
from .lincomb import Comb, add_comb, add_into, mapped, sign
from .snf import matmul, snf_data, smith_normal_form, to_array

__all__ = [
    "FreeChainComplex",
    "ChainMap",
    "ChainHomotopy",
    "HomologyGroup",
    "HomologyPresentation",
    "InducedMap",
    "homology",
    "homology_presentation",
    "induced_map_on_homology",
    "tensor_complex",
    "suspend",
    "identity_map",
    "zero_map",
    "smith_normal_form",
    "matrix_to_json",
    "complex_from_matrices",
    "min_trunc",
]


def min_trunc(*truncs: Optional[int]) -> Optional[int]:
    vals = [t for t in truncs if t is not None]
    return min(vals) if vals else None


class FreeChainComplex:
    """A degreewise finite free complex with a basis-level differential.

    ``basis`` is either a mapping ``degree -> list of terms`` or a callable
    producing that list on demand.  ``differential`` maps a term to a
    combination (``dict``) of terms one degree lower.
    """

    def __init__(
        self,
        basis,
        differential: Callable[[Hashable], Comb],
        trunc: Optional[int] = None,
        degree_of: Optional[Callable[[Hashable], int]] = None,
        name: str = "",
        label: Optional[Callable[[Hashable], str]] = None,
    ):
        self.name = name
        self.trunc = trunc
        self._diff = differential
        self._label = label
        self._bases: Dict[int, Tuple] = {}
        self._index: Dict[int, Dict[Hashable, int]] = {}
        self._dcache: Dict[Hashable, Comb] = {}
        self._mcache: Dict[int, np.ndarray] = {}
        if callable(basis):
            self._basis_fn = basis
            self._top = None
            if degree_of is None:
                raise ValueError("a lazily generated basis needs degree_of")
            self._degree_of = degree_of
        else:
            self._basis_fn = None
            table = {int(n): tuple(b) for n, b in basis.items() if len(b)}
            self._bases.update(table)
            self._top = max(table) if table else -1
            self._degmap = {t: n for n, b in table.items() for t in b}
            if len(self._degmap) != sum(len(b) for b in table.values()):
                raise ValueError("basis terms must be distinct")
            self._degree_of = degree_of or self._degmap.__getitem__
            if trunc is None:
                self.trunc = None

    # -- basis -----------------------------------------------------------
    def basis(self, n: int) -> Tuple:
        if n < 0:
            return ()
        b = self._bases.get(n)
        if b is None:
            if self._basis_fn is None:
                return ()
            b = tuple(self._basis_fn(n))
            self._bases[n] = b
        return b

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def index(self, n: int) -> Dict[Hashable, int]:
        idx = self._index.get(n)
        if idx is None:
            idx = {t: i for i, t in enumerate(self.basis(n))}
            self._index[n] = idx
        return idx

    def degree(self, term: Hashable) -> int:
        return self._degree_of(term)

    @property
    def top(self) -> int:
        """Highest degree whose data is exact and meaningful."""
        if self.trunc is not None:
            return self.trunc
        if self._top is None:
            raise ValueError("complex has neither trunc nor a finite basis")
        return self._top

    def label(self, term: Hashable) -> str:
        if self._label is not None:
            return self._label(term)
        return str(term)

    # -- differential ----------------------------------------------------
    def d(self, term: Hashable) -> Comb:
        r = self._dcache.get(term)
        if r is None:
            r = self._diff(term)
            self._dcache[term] = r
        return r

    def d_comb(self, comb: Comb) -> Comb:
        return mapped(comb, self.d)

    def vector(self, comb: Comb, n: int) -> List[int]:
        idx = self.index(n)
        v = [0] * len(idx)
        for t, c in comb.items():
            try:
                v[idx[t]] += c
            except KeyError:
                raise KeyError(f"term {t!r} is not a degree {n} basis element of {self.name or 'complex'}")
        return v

    def comb(self, vec: Sequence[int], n: int) -> Comb:
        b = self.basis(n)
        return {b[i]: int(c) for i, c in enumerate(vec) if c}

    def matrix_lists(self, n: int) -> List[List[int]]:
        rows = self.dim(n - 1)
        src = self.basis(n)
        M = [[0] * len(src) for _ in range(rows)]
        if rows == 0:
            return M
        idx = self.index(n - 1)
        for j, t in enumerate(src):
            for s, c in self.d(t).items():
                M[idx[s]][j] += c
        return M

    def matrix(self, n: int) -> np.ndarray:
        """The differential ``C_n -> C_{n-1}`` as an object-dtype array."""
        M = self._mcache.get(n)
        if M is None:
            M = to_array(self.matrix_lists(n), self.dim(n - 1), self.dim(n))
            self._mcache[n] = M
        return M

    def d_squared_witness(self, upto: Optional[int] = None):
        """Return the first term ``x`` with ``d(d(x)) != 0``, or ``None``."""
        top = self.top if upto is None else upto
        for n in range(2, top + 1):
            for t in self.basis(n):
                if self.d_comb(self.d(t)):
                    return t
        return None

    def euler_characteristic(self, upto: Optional[int] = None) -> int:
        top = self.top if upto is None else upto
        return sum(sign(n) * self.dim(n) for n in range(top + 1))

    def __repr__(self) -> str:
        return f"FreeChainComplex({self.name!r}, trunc={self.trunc})"


def complex_from_matrices(dims: Mapping[int, int], matrices: Mapping[int, Sequence[Sequence[int]]],
                          trunc: Optional[int] = None, name: str = "", prefix: str = "e") -> FreeChainComplex:
    """Build a complex with basis ``(prefix, n, i)`` from explicit matrices.

    ``matrices[n]`` is the differential from degree ``n`` to ``n - 1``.
    """
    basis = {n: [(prefix, n, i) for i in range(k)] for n, k in dims.items()}
    mats = {n: [list(map(int, r)) for r in M] for n, M in matrices.items()}

    def diff(t):
        _, n, i = t
        M = mats.get(n)
        if M is None:
            return {}
        return {(prefix, n - 1, r): row[i] for r, row in enumerate(M) if row[i]}

    return FreeChainComplex(basis, diff, trunc=trunc, name=name,
                            label=lambda t: f"{t[0]}{t[1]}_{t[2]}")


# ---------------------------------------------------------------------------
# maps


class ChainMap:
    """A linear map of some degree given on basis terms.

    Being a chain map is a checked obligation (see :meth:`witness`), not an
    assumption.  The convention is ``d f = (-1)^shift f d``.
    """

    def __init__(self, source: FreeChainComplex, target: FreeChainComplex,
                 fn: Callable[[Hashable], Comb], degree_shift: int = 0, name: str = ""):
        self.source = source
        self.target = target
        self.shift = degree_shift
        self._fn = fn
        self._cache: Dict[Hashable, Comb] = {}
        self.name = name

    @property
    def degree_shift(self) -> int:
        return self.shift

    def __call__(self, term: Hashable) -> Comb:
        r = self._cache.get(term)
        if r is None:
            r = self._fn(term)
            self._cache[term] = r
        return r

    def apply(self, comb: Comb) -> Comb:
        return mapped(comb, self)

    @property
    def top(self) -> int:
        """Highest source degree on which the commuting square is checkable."""
        t = self.target.top - self.shift
        return min(self.source.top, t)

    def matrix(self, n: int) -> np.ndarray:
        src = self.source.basis(n)
        tdeg = n + self.shift
        idx = self.target.index(tdeg)
        M = np.zeros((len(idx), len(src)), dtype=object)
        for j, t in enumerate(src):
            for s, c in self(t).items():
                M[idx[s], j] += c
        return M

    def square_residual(self, term: Hashable) -> Comb:
        lhs = self.target.d_comb(self(term))
        out = dict(lhs)
        add_comb(out, self.apply(self.source.d(term)), -sign(self.shift))
        return out

    def witness(self, upto: Optional[int] = None, lo: int = 0):
        """First source term where ``d f != (-1)^shift f d``, else ``None``."""
        top = self.top if upto is None else min(upto, self.top)
        for n in range(lo, top + 1):
            for t in self.source.basis(n):
                if self.square_residual(t):
                    return t
        return None

    def is_chain_map(self, upto: Optional[int] = None) -> bool:
        return self.witness(upto) is None

    def compose(self, first: "ChainMap") -> "ChainMap":
        """Return ``self o first``."""
        return ChainMap(first.source, self.target, lambda t: self.apply(first(t)),
                        self.shift + first.shift, name=f"{self.name}*{first.name}")

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        def fn(t):
            out = dict(self(t))
            add_comb(out, other(t), -1)
            return out
        return ChainMap(self.source, self.target, fn, self.shift)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        def fn(t):
            out = dict(self(t))
            add_comb(out, other(t))
            return out
        return ChainMap(self.source, self.target, fn, self.shift)

    def differs_from(self, other: "ChainMap", upto: Optional[int] = None):
        """First source term on which the two maps disagree, or ``None``."""
        top = self.source.top if upto is None else upto
        for n in range(top + 1):
            for t in self.source.basis(n):
                if self(t) != other(t):
                    return t
        return None


def identity_map(C: FreeChainComplex) -> ChainMap:
    return ChainMap(C, C, lambda t: {t: 1}, 0, name="id")


def zero_map(C: FreeChainComplex, D: FreeChainComplex, shift: int = 0) -> ChainMap:
    return ChainMap(C, D, lambda t: {}, shift, name="0")


@dataclass
class ChainHomotopy:
    """``H`` of degree +1 with ``dH + Hd = g - f``."""

    H: ChainMap
    f: ChainMap
    g: ChainMap

    def residual(self, term: Hashable) -> Comb:
        C, D = self.H.source, self.H.target
        out = dict(D.d_comb(self.H(term)))
        add_comb(out, self.H.apply(C.d(term)))
        add_comb(out, self.g(term), -1)
        add_comb(out, self.f(term))
        return out

    def witness(self, upto: Optional[int] = None):
        top = min(self.H.source.top, self.H.target.top - 1)
        if upto is not None:
            top = min(top, upto)
        for n in range(top + 1):
            for t in self.H.source.basis(n):
                if self.residual(t):
                    return t
        return None


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def rank(self) -> int:
        return self.betti + len(self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}


@dataclass
class HomologyPresentation:
    """SNF-adapted presentation of ``H_n``.

    Summands are ordered torsion first (ascending order), then free.
    ``generators[i]`` is a cycle representing summand ``i``.
    """

    complex: FreeChainComplex
    group: HomologyGroup
    orders: List[int]
    generators: List[Comb]
    _rank_out: int = 0
    _Vinv: List[List[int]] = field(default_factory=list)
    _U2: List[List[int]] = field(default_factory=list)
    _skip: int = 0

    def coordinates(self, cycle: Comb) -> List[int]:
        """Coordinates of a cycle in the chosen summands (torsion reduced)."""
        n = self.group.degree
        v = self.complex.vector(cycle, n)
        z = [sum(row[k] * v[k] for k in range(len(v)) if row[k]) for row in self._Vinv]
        if any(z[: self._rank_out]):
            raise ValueError("element is not a cycle")
        z = z[self._rank_out:]
        y = [sum(row[k] * z[k] for k in range(len(z)) if row[k]) for row in self._U2]
        out = y[self._skip:]
        return [c % o if o else c for c, o in zip(out, self.orders)]

    def project(self, chain: Comb) -> List[int]:
        """A chain-level projection ``C_n → H_n``: zero on boundaries and on
        the chosen complement of the cycles, the class map on cycles."""
        if not self.orders:
            return []
        n = self.group.degree
        v = self.complex.vector(chain, n)
        nz = [(k, c) for k, c in enumerate(v) if c]
        z = [sum(row[k] * c for k, c in nz) for row in self._Vinv[self._rank_out:]]
        y = [sum(row[k] * z[k] for k in range(len(z)) if row[k]) for row in self._U2[self._skip:]]
        return [c % o if o else c for c, o in zip(y, self.orders)]


def _check_degree(C: FreeChainComplex, n: int) -> None:
    if n < 0:
        raise DegreeOutOfRange(f"negative degree {n}")
    if C.trunc is not None and n >= C.trunc:
        raise DegreeOutOfRange(
            f"H_{n} needs degree {n + 1} data but {C.name or 'the complex'} is truncated at {C.trunc}")


def homology_presentation(C: FreeChainComplex, n: int) -> HomologyPresentation:
    _check_degree(C, n)
    dim = C.dim(n)
    A = C.matrix_lists(n)
    if dim == 0:
        return HomologyPresentation(C, HomologyGroup(n, 0, ()), [], [])
    if A:
        r1 = snf_data(A)
        r = r1.rank
        V, Vinv = r1.V, r1.Vinv
    else:
        r = 0
        V = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        Vinv = [row[:] for row in V]
    k = dim - r
    if k == 0:
        return HomologyPresentation(C, HomologyGroup(n, 0, ()), [], [], r, Vinv, [], 0)
    B = C.matrix_lists(n + 1)
    Bz = [row for row in matmul(Vinv, B)[r:]] if B and B[0] else [[] for _ in range(k)]
    ncols = len(B[0]) if B and B[0] else 0
    if ncols:
        r2 = snf_data(Bz)
        diag = r2.diagonal + [0] * (k - len(r2.diagonal))
        U2, U2inv = r2.U, r2.Uinv
    else:
        diag = [0] * k
        U2 = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        U2inv = [row[:] for row in U2]
    skip = sum(1 for d in diag if d == 1)
    orders = [d for d in diag[skip:]]
    torsion = tuple(d for d in orders if d > 1)
    betti = sum(1 for d in orders if d == 0)
    # kernel basis columns of V beyond the rank, then change basis by U2^{-1}
    Z = [row[r:] for row in V]
    reps = matmul(Z, U2inv)
    gens = []
    for j in range(skip, k):
        gens.append(C.comb([reps[i][j] for i in range(dim)], n))
    return HomologyPresentation(C, HomologyGroup(n, betti, torsion), orders, gens, r, Vinv, U2, skip)


def homology(C: FreeChainComplex, n: int) -> HomologyGroup:
    """Integral homology ``H_n(C)`` computed by Smith normal form."""
    return homology_presentation(C, n).group


def homology_table(C: FreeChainComplex, upto: Optional[int] = None) -> List[HomologyGroup]:
    top = (C.trunc - 1) if C.trunc is not None else C.top
    if upto is not None:
        top = min(top, upto)
    return [homology(C, n) for n in range(top + 1)]


@dataclass
class InducedMap:
    matrix: np.ndarray
    source: HomologyGroup
    target: HomologyGroup
    target_orders: List[int]

    @property
    def is_isomorphism(self) -> bool:
        if (self.source.betti, self.source.torsion) != (self.target.betti, self.target.torsion):
            return False
        m = self.target.rank()
        if m == 0:
            return True
        cols = [[int(x) for x in row] for row in self.matrix.tolist()]
        for i, o in enumerate(self.target_orders):
            for j, row in enumerate(cols):
                row.append(o if i == j else 0)
        divs = [d for d in snf_data(cols, track=False).diagonal if d]
        return len(divs) == m and all(d == 1 for d in divs)


def induced_map_on_homology(f: ChainMap, n: int, check: bool = True) -> InducedMap:
    """Matrix of ``H_n(f)`` in the SNF-adapted homology bases."""
    if check:
        for deg in (n, n + 1):
            if deg <= f.top:
                for t in f.source.basis(deg):
                    if f.square_residual(t):
                        raise NotAChainMap(f"map fails to commute with d at {t!r}", witness=t)
    P = homology_presentation(f.source, n)
    Q = homology_presentation(f.target, n + f.shift)
    M = np.zeros((len(Q.orders), len(P.orders)), dtype=object)
    for j, g in enumerate(P.generators):
        for i, c in enumerate(Q.coordinates(f.apply(g))):
            M[i, j] = c
    return InducedMap(M, P.group, Q.group, Q.orders)


# ---------------------------------------------------------------------------
# tensor products and suspension


class TensorComplex(FreeChainComplex):
    """``C ⊗ D`` with basis pairs ``(x, y)`` and the Koszul differential."""

    def __init__(self, C: FreeChainComplex, D: FreeChainComplex, trunc: Optional[int] = None):
        self.left = C
        self.right = D
        t = min_trunc(C.trunc, D.trunc) if trunc is None else trunc
        if t is None:
            top = C.top + D.top

            def basis(n):
                return self._pairs(n) if n <= top else ()
        else:
            basis = self._pairs
        super().__init__(basis, self._tensor_d, trunc=t, degree_of=self._deg,
                         name=f"({C.name}⊗{D.name})",
                         label=lambda p: f"{C.label(p[0])}⊗{D.label(p[1])}")
        if t is None:
            self._top = top
            self._basis_fn = basis

    def _deg(self, p) -> int:
        return self.left.degree(p[0]) + self.right.degree(p[1])

    def _pairs(self, n):
        out = []
        for i in range(n + 1):
            for x in self.left.basis(i):
                for y in self.right.basis(n - i):
                    out.append((x, y))
        return out

    def _tensor_d(self, p) -> Comb:
        x, y = p
        out: Comb = {}
        for x2, c in self.left.d(x).items():
            add_into(out, (x2, y), c)
        s = sign(self.left.degree(x))
        for y2, c in self.right.d(y).items():
            add_into(out, (x, y2), s * c)
        return out


def tensor_complex(C: FreeChainComplex, D: FreeChainComplex) -> TensorComplex:
    return TensorComplex(C, D)


def tensor_maps(f: ChainMap, g: ChainMap, source: Optional[TensorComplex] = None,
                target: Optional[TensorComplex] = None) -> ChainMap:
    """``f ⊗ g`` with ``(f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)⊗g(y)``."""
    src = source or TensorComplex(f.source, g.source)
    tgt = target or TensorComplex(f.target, g.target)

    def fn(p):
        x, y = p
        s = sign(g.shift * f.source.degree(x))
        out: Comb = {}
        fx = f(x)
        if not fx:
            return out
        for y2, c2 in g(y).items():
            for x2, c1 in fx.items():
                add_into(out, (x2, y2), s * c1 * c2)
        return out

    return ChainMap(src, tgt, fn, f.shift + g.shift)


SUSP = "s"


def _susp_term(k: int, x):
    if isinstance(x, tuple) and len(x) == 3 and x[0] == SUSP:
        k += x[1]
        x = x[2]
    return x if k == 0 else (SUSP, k, x)


class SuspendedComplex(FreeChainComplex):
    """``s^k C`` with ``d(s^k x) = (-1)^k s^k dx``.

    Terms are ``("s", k, x)``; stacking suspensions merges exponents, so
    ``s^{-1} s C`` has exactly the terms of ``C``.  Basis elements that would
    land in negative degree are dropped.
    """

    def __init__(self, C: FreeChainComplex, k: int):
        self.inner = C
        self.k = k
        nested = isinstance(C, SuspendedComplex)
        self._base = C._base if nested else C
        self._total = k + (C._total if nested else 0)
        t = None if C.trunc is None else C.trunc + k
        super().__init__(self._basis, self._susp_d, trunc=t, degree_of=self._deg,
                         name=f"s^{k}{C.name}", label=self._lab)
        if C.trunc is None:
            self._top = C.top + k

    def _lab(self, t):
        if isinstance(t, tuple) and len(t) == 3 and t[0] == SUSP:
            return f"s^{t[1]}({self._base.label(t[2])})"
        return self._base.label(t)

    def _wrap(self, x):
        return _susp_term(self._total, x)

    def _unwrap(self, t):
        if self._total == 0:
            return t
        return t[2]

    def _deg(self, t) -> int:
        return self._base.degree(self._unwrap(t)) + self._total

    def _basis(self, n):
        m = n - self._total
        if m < 0 or n < 0:
            return ()
        if self.trunc is None and n > self._top:
            return ()
        return [self._wrap(x) for x in self._base.basis(m)]

    def _susp_d(self, t) -> Comb:
        x = self._unwrap(t)
        s = sign(self._total)
        out: Comb = {}
        for y, c in self._base.d(x).items():
            if self._base.degree(y) + self._total >= 0:
                add_into(out, self._wrap(y), s * c)
        return out


def suspend(C: FreeChainComplex, k: int = 1) -> SuspendedComplex:
    return SuspendedComplex(C, k)


# ---------------------------------------------------------------------------
# serialization


def matrix_to_json(C: FreeChainComplex, n: int) -> dict:
    """Sparse-triple JSON form of the degree ``n`` differential.

    ``entries`` lists ``[row, col, value]`` with rows indexing degree
    ``n - 1`` and columns degree ``n``, both in basis order.
    """
    M = C.matrix_lists(n)
    entries = [[i, j, v] for i, row in enumerate(M) for j, v in enumerate(row) if v]
    return {
        "complex": C.name,
        "degree": n,
        "rows": C.dim(n - 1),
        "cols": C.dim(n),
        "row_basis": [C.label(t) for t in C.basis(n - 1)],
        "col_basis": [C.label(t) for t in C.basis(n)],
        "entries": entries,
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    M = np.zeros((doc["rows"], doc["cols"]), dtype=object)
    for i, j, v in doc["entries"]:
        M[i, j] = int(v)
    return M
