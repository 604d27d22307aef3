"""Finite simplicial sets, their normalized chains, products and suspensions.

A *general* simplex is a pair ``(base, theta)`` where ``base`` is a
nondegenerate simplex and ``theta`` is a nondecreasing surjection
``[n] -> [dim base]`` stored as a tuple of length ``n + 1``.  The simplex is
``base`` pulled back along ``theta``; it is degenerate unless ``theta`` is the
identity.  The degeneracy indices of ``theta`` are the ``j`` with
``theta[j] == theta[j + 1]``; listed decreasingly they give the usual
``s_J`` normal form.
"""

from __future__ import annotations

import itertools
import json
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .algebra import ChainCoalgebra
from .chain_core import ChainMap, FreeChainComplex
from .errors import (MalformedDocument, NotReduced, SimplicialIdentityViolation,
                     TwistingAxiomViolation)
from .lincomb import Comb, add_into, sign

Simplex = Tuple[Hashable, Tuple[int, ...]]

DEFAULT_MAX_DIM = 12


# ---------------------------------------------------------------------------
# monotone map arithmetic


def ident(n: int) -> Tuple[int, ...]:
    return tuple(range(n + 1))


def theta_from_degeneracies(J: Iterable[int], n: int) -> Tuple[int, ...]:
    """Surjection ``[n] -> [n - |J|]`` collapsing ``j, j+1`` for ``j in J``."""
    J = set(J)
    out = [0]
    for j in range(n):
        out.append(out[-1] + (0 if j in J else 1))
    return tuple(out)


def degeneracies_of(theta: Sequence[int]) -> List[int]:
    return [j for j in range(len(theta) - 2, -1, -1) if theta[j] == theta[j + 1]]


def coface(i: int, n: int) -> Tuple[int, ...]:
    """``δ_i : [n-1] -> [n]`` skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(j: int, n: int) -> Tuple[int, ...]:
    """``σ_j : [n+1] -> [n]`` hitting ``j`` twice."""
    return tuple(i if i <= j else i - 1 for i in range(n + 2))


def is_degenerate(s: Simplex) -> bool:
    th = s[1]
    return th[-1] != len(th) - 1


def sdim(s: Simplex) -> int:
    return len(s[1]) - 1


def simplex_label(s: Simplex, name=str) -> str:
    J = degeneracies_of(s[1])
    if not J:
        return name(s[0])
    return "s" + "".join(f"_{j}" for j in J) + " " + name(s[0])


# ---------------------------------------------------------------------------
# simplicial sets


class SimplicialSet:
    """Base class: subclasses provide ``simplices(n)``, ``_face(b, i)`` and
    ``dim_of(b)`` for nondegenerate simplices ``b``.

    The face of a nondegenerate simplex is returned as a general simplex.
    """

    name = ""
    top = 0

    def __init__(self):
        self._fcache: Dict[Tuple[Hashable, int], Simplex] = {}

    def simplices(self, n: int) -> Tuple:
        raise NotImplementedError

    def dim_of(self, b: Hashable) -> int:
        raise NotImplementedError

    def _face(self, b: Hashable, i: int) -> Simplex:
        raise NotImplementedError

    def label(self, b: Hashable) -> str:
        return str(b)

    def face(self, b: Hashable, i: int) -> Simplex:
        key = (b, i)
        r = self._fcache.get(key)
        if r is None:
            r = self._face(b, i)
            self._fcache[key] = r
        return r

    # -- general simplices ----------------------------------------------
    def pull(self, s: Simplex, alpha: Sequence[int]) -> Simplex:
        """Pull back the general simplex ``s`` along a monotone ``alpha``."""
        base, theta = s
        phi = tuple(theta[a] for a in alpha)
        return self._pull_base(base, phi)

    def _pull_base(self, base, phi: Tuple[int, ...]) -> Simplex:
        m = self.dim_of(base)
        while True:
            present = set(phi)
            if len(present) == m + 1:
                return (base, phi)
            k = max(v for v in range(m + 1) if v not in present)
            b2, th2 = self.face(base, k)
            phi = tuple(th2[v if v < k else v - 1] for v in phi)
            base, m = b2, self.dim_of(b2)

    def gface(self, s: Simplex, i: int) -> Simplex:
        return self.pull(s, coface(i, sdim(s)))

    def gdegen(self, s: Simplex, j: int) -> Simplex:
        base, theta = s
        n = len(theta) - 1
        return (base, tuple(theta[k] for k in codegeneracy(j, n)))

    def front(self, s: Simplex, r: int) -> Simplex:
        return self.pull(s, tuple(range(r + 1)))

    def back(self, s: Simplex, r: int) -> Simplex:
        return self.pull(s, tuple(range(r, sdim(s) + 1)))

    def nd(self, b: Hashable) -> Simplex:
        return (b, ident(self.dim_of(b)))

    def basepoint(self):
        vs = self.simplices(0)
        return vs[0] if vs else None

    def vertex_simplex(self, v, n: int) -> Simplex:
        return (v, (0,) * (n + 1))

    # -- properties -------------------------------------------------------
    def counts(self, upto: Optional[int] = None) -> List[int]:
        top = self.top if upto is None else upto
        return [len(self.simplices(n)) for n in range(top + 1)]

    @property
    def is_reduced(self) -> bool:
        return len(self.simplices(0)) == 1

    @property
    def is_1_reduced(self) -> bool:
        return self.is_reduced and len(self.simplices(1)) == 0

    def identity_witness(self, upto: Optional[int] = None):
        """First ``(b, i, j)`` with ``∂_i ∂_j b != ∂_{j-1} ∂_i b``, ``i < j``."""
        top = self.top if upto is None else min(upto, self.top)
        for n in range(2, top + 1):
            for b in self.simplices(n):
                for j in range(1, n + 1):
                    fj = self.face(b, j)
                    for i in range(j):
                        lhs = self.gface(fj, i)
                        rhs = self.gface(self.face(b, i), j - 1)
                        if lhs != rhs:
                            return (b, i, j)
        return None

    def check_identities(self, upto: Optional[int] = None) -> None:
        w = self.identity_witness(upto)
        if w is not None:
            b, i, j = w
            raise SimplicialIdentityViolation(
                f"{self.name}: d_{i} d_{j} != d_{j - 1} d_{i} on {self.label(b)}", witness=w)

    def to_document(self) -> dict:
        lab = self.label
        doc = {"name": self.name, "simplices": {}, "faces": {}}
        for n in range(self.top + 1):
            ss = self.simplices(n)
            if ss:
                doc["simplices"][str(n)] = [lab(b) for b in ss]
            if n == 0:
                continue
            for b in ss:
                doc["faces"][lab(b)] = [
                    {"degeneracies": degeneracies_of(th), "base": lab(fb)}
                    for fb, th in (self.face(b, i) for i in range(n + 1))
                ]
        return doc


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


class FiniteSimplicialSet(SimplicialSet):
    """Simplicial set given by explicit face tables."""

    def __init__(self, name: str, simplices: Dict[int, List[Hashable]],
                 faces: Dict[Hashable, List[Simplex]], labels: Optional[Dict] = None):
        super().__init__()
        self.name = name
        self._s = {n: tuple(v) for n, v in simplices.items() if v}
        self.top = max(self._s) if self._s else 0
        self._dim = {b: n for n, v in self._s.items() for b in v}
        self._faces = faces
        self._labels = labels or {}

    def simplices(self, n):
        return self._s.get(n, ())

    def dim_of(self, b):
        return self._dim[b]

    def _face(self, b, i):
        return self._faces[b][i]

    def label(self, b):
        return self._labels.get(b, str(b))


def parse_simplicial_set(document, max_dim: int = DEFAULT_MAX_DIM,
                         check: bool = True) -> FiniteSimplicialSet:
    """Parse and validate a simplicial-set JSON document (dict or string)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedDocument(f"invalid JSON: {e}") from e
    if not isinstance(document, dict):
        raise MalformedDocument("document must be a JSON object")
    for key in ("simplices",):
        if key not in document:
            raise MalformedDocument(f"missing key '{key}'")
    name = document.get("name", "")
    if not isinstance(name, str):
        raise MalformedDocument("'name' must be a string")
    raw = document["simplices"]
    if not isinstance(raw, dict):
        raise MalformedDocument("'simplices' must map dimension strings to name lists")
    simplices: Dict[int, List[str]] = {}
    dims: Dict[str, int] = {}
    for k, names in raw.items():
        try:
            n = int(k)
        except (TypeError, ValueError):
            raise MalformedDocument(f"dimension key {k!r} is not an integer")
        if n < 0:
            raise MalformedDocument(f"negative dimension {n}")
        if n > max_dim:
            raise MalformedDocument(f"dimension {n} exceeds the cap {max_dim}")
        if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
            raise MalformedDocument(f"simplices in dimension {n} must be a list of strings")
        for s in names:
            if s in dims:
                raise MalformedDocument(f"simplex name {s!r} is used twice")
            dims[s] = n
        simplices[n] = list(names)
    if not simplices.get(0):
        raise MalformedDocument("dimension 0 must be nonempty")
    faces_raw = document.get("faces", {})
    if not isinstance(faces_raw, dict):
        raise MalformedDocument("'faces' must be an object")
    faces: Dict[str, List[Simplex]] = {}
    for s, n in dims.items():
        if n == 0:
            continue
        entries = faces_raw.get(s)
        if entries is None:
            raise MalformedDocument(f"faces of {s!r} are missing")
        if not isinstance(entries, list) or len(entries) != n + 1:
            raise MalformedDocument(f"{s!r} has dimension {n} and needs {n + 1} faces")
        out = []
        for i, e in enumerate(entries):
            where = f"face {i} of {s!r}"
            if not isinstance(e, dict) or "base" not in e:
                raise MalformedDocument(f"{where}: expected an object with 'base'")
            base = e["base"]
            J = e.get("degeneracies", [])
            if base not in dims:
                raise MalformedDocument(f"{where}: unknown base simplex {base!r}")
            if not isinstance(J, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in J):
                raise MalformedDocument(f"{where}: degeneracies must be a list of integers")
            if any(J[a] <= J[a + 1] for a in range(len(J) - 1)):
                raise MalformedDocument(f"{where}: degeneracies must be strictly decreasing")
            m = dims[base]
            if m + len(J) != n - 1:
                raise MalformedDocument(
                    f"{where}: base of dimension {m} with {len(J)} degeneracies is not {n - 1}-dimensional")
            if J and (J[-1] < 0 or J[0] > n - 2):
                raise MalformedDocument(f"{where}: degeneracy index out of range")
            out.append((base, theta_from_degeneracies(J, n - 1)))
        faces[s] = out
    extra = set(faces_raw) - set(faces)
    if extra:
        raise MalformedDocument(f"faces given for unknown or 0-dimensional simplices: {sorted(extra)}")
    K = FiniteSimplicialSet(name, simplices, faces)
    if check:
        K.check_identities()
    return K


def load_simplicial_set(path: str, **kw) -> FiniteSimplicialSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_simplicial_set(fh.read(), **kw)


# ---------------------------------------------------------------------------
# small standard models


def sphere(n: int, name: Optional[str] = None) -> FiniteSimplicialSet:
    """One vertex ``v`` and one nondegenerate ``n``-simplex with all faces at ``v``."""
    if n == 0:
        return FiniteSimplicialSet(name or "S0", {0: ["v", "w"]}, {})
    top = f"sigma{n}"
    faces = {top: [("v", (0,) * n)] * (n + 1)}
    return FiniteSimplicialSet(name or f"S{n}", {0: ["v"], n: [top]}, faces)


def standard_simplex(n: int) -> FiniteSimplicialSet:
    """``Δ[n]``: nondegenerate simplices are the nonempty subsets of ``[n]``."""
    simplices: Dict[int, List] = {}
    faces: Dict = {}
    for k in range(n + 1):
        for c in itertools.combinations(range(n + 1), k + 1):
            simplices.setdefault(k, []).append(c)
            if k:
                faces[c] = [(c[:i] + c[i + 1:], ident(k - 1)) for i in range(k + 1)]
    labels = {c: "".join(map(str, c)) for cs in simplices.values() for c in cs}
    return FiniteSimplicialSet(f"Delta{n}", simplices, faces, labels)


def point() -> FiniteSimplicialSet:
    return FiniteSimplicialSet("pt", {0: ["*"]}, {})


# ---------------------------------------------------------------------------
# products


def _pair_normalize(x: Simplex, y: Simplex) -> Simplex:
    tx, ty = x[1], y[1]
    n = len(tx) - 1
    common = {j for j in range(n) if tx[j] == tx[j + 1] and ty[j] == ty[j + 1]}
    theta = theta_from_degeneracies(common, n)
    sec = [j for j in range(n + 1) if j == 0 or (j - 1) not in common]
    bx = (x[0], tuple(tx[j] for j in sec))
    by = (y[0], tuple(ty[j] for j in sec))
    return ((bx, by), theta)


def _product_simplices(K: SimplicialSet, L: SimplicialSet, n: int) -> List:
    out = []
    rng = range(n)
    for p in range(n + 1):
        xs = K.simplices(p)
        if not xs:
            continue
        for q in range(n - p, n + 1):
            ys = L.simplices(q)
            if not ys:
                continue
            for A in itertools.combinations(rng, n - p):
                rest = [j for j in rng if j not in A]
                for B in itertools.combinations(rest, n - q):
                    ta = theta_from_degeneracies(A, n)
                    tb = theta_from_degeneracies(B, n)
                    for x in xs:
                        for y in ys:
                            out.append(((x, ta), (y, tb)))
    return out


class ProductSet(SimplicialSet):
    """``K × L``; nondegenerate simplices are pairs with no common degeneracy."""

    def __init__(self, K: SimplicialSet, L: SimplicialSet, name: str = ""):
        super().__init__()
        self.K, self.L = K, L
        self.name = name or f"{K.name}x{L.name}"
        self.top = K.top + L.top
        self._s: Dict[int, Tuple] = {}

    def simplices(self, n):
        r = self._s.get(n)
        if r is None:
            r = tuple(_product_simplices(self.K, self.L, n)) if 0 <= n <= self.top else ()
            self._s[n] = r
        return r

    def dim_of(self, b):
        return len(b[0][1]) - 1

    def _face(self, b, i):
        x, y = b
        return _pair_normalize(self.K.gface(x, i), self.L.gface(y, i))

    def label(self, b):
        x, y = b
        return f"({simplex_label(x, self.K.label)}, {simplex_label(y, self.L.label)})"

    def pair(self, x: Simplex, y: Simplex) -> Simplex:
        return _pair_normalize(x, y)

    def projections(self) -> Tuple["SimplicialMap", "SimplicialMap"]:
        return (SimplicialMap(self, self.K, lambda b: b[0], name="pr1"),
                SimplicialMap(self, self.L, lambda b: b[1], name="pr2"))


def cartesian_product(K: SimplicialSet, L: SimplicialSet, name: str = "") -> ProductSet:
    return ProductSet(K, L, name)


# ---------------------------------------------------------------------------
# suspension

STAR = "*"


class SuspensionSet(SimplicialSet):
    """Reduced suspension with one vertex ``*`` and simplices ``("e", x)``.

    ``∂_0 e(x) = *`` and ``∂_{i+1} e(x) = e(∂_i x)``, where ``e`` sends the
    basepoint of ``K'`` (and its degeneracies) to degeneracies of ``*``.
    """

    def __init__(self, Kp: SimplicialSet, name: str = ""):
        super().__init__()
        self.inner = Kp
        self.name = name or f"S({Kp.name})"
        self.top = Kp.top + 1
        self._bp = Kp.basepoint()

    def simplices(self, n):
        if n == 0:
            return (STAR,)
        return tuple(("e", x) for x in self.inner.simplices(n - 1) if x != self._bp)

    def dim_of(self, b):
        if b == STAR:
            return 0
        return self.inner.dim_of(b[1]) + 1

    def lift(self, s: Simplex) -> Simplex:
        """``e`` applied to a general simplex of ``K'``."""
        b, th = s
        if b == self._bp:
            return (STAR, (0,) * (len(th) + 1))
        return (("e", b), (0,) + tuple(t + 1 for t in th))

    def _face(self, b, i):
        x = b[1]
        n = self.inner.dim_of(x)
        if i == 0 or n == 0:
            return (STAR, (0,) * (n + 1))
        return self.lift(self.inner.face(x, i - 1))

    def label(self, b):
        if b == STAR:
            return STAR
        return f"e({self.inner.label(b[1])})"


def simplicial_suspension(Kp: SimplicialSet, require_reduced: bool = False,
                          name: str = "") -> SuspensionSet:
    """The pointed suspension, using the first vertex of ``Kp`` as basepoint."""
    if require_reduced and not Kp.is_reduced:
        raise NotReduced(f"{Kp.name} has {len(Kp.simplices(0))} vertices")
    return SuspensionSet(Kp, name)


# ---------------------------------------------------------------------------
# maps


class SimplicialMap:
    """A map given on nondegenerate simplices, valued in general simplices."""

    def __init__(self, K: SimplicialSet, L: SimplicialSet, images, name: str = ""):
        self.source, self.target = K, L
        self._img = images
        self.name = name

    def image(self, b) -> Simplex:
        return self._img(b) if callable(self._img) else self._img[b]

    def on(self, s: Simplex) -> Simplex:
        b, th = s
        return self.target.pull(self.image(b), th)

    def witness(self, upto: Optional[int] = None):
        K, L = self.source, self.target
        top = K.top if upto is None else min(upto, K.top)
        for n in range(top + 1):
            for b in K.simplices(n):
                fb = self.image(b)
                if sdim(fb) != n:
                    return (b, None)
                for i in range(n + 1 if n else 0):
                    if L.gface(fb, i) != self.on(K.face(b, i)):
                        return (b, i)
        return None

    def chain_map(self, CK: "ChainCoalgebra", CL: "ChainCoalgebra") -> ChainMap:
        def fn(b):
            s = self.image(b)
            return {} if is_degenerate(s) else {s[0]: 1}
        return ChainMap(CK.complex, CL.complex, fn, 0, name=self.name)

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(first.source, self.target, lambda b: self.on(first.image(b)))


def identity_simplicial_map(K: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(K, K, K.nd, name="id")


def constant_map(K: SimplicialSet, L: SimplicialSet, vertex=None) -> SimplicialMap:
    v = L.basepoint() if vertex is None else vertex
    return SimplicialMap(K, L, lambda b: (v, (0,) * (K.dim_of(b) + 1)), name="const")


def diagonal_map(K: SimplicialSet, KK: Optional[ProductSet] = None) -> SimplicialMap:
    P = KK or ProductSet(K, K)
    return SimplicialMap(K, P, lambda b: _pair_normalize(K.nd(b), K.nd(b)), name="diag")


def product_map(a: SimplicialMap, b: SimplicialMap, source: Optional[ProductSet] = None,
                target: Optional[ProductSet] = None) -> SimplicialMap:
    S = source or ProductSet(a.source, b.source)
    T = target or ProductSet(a.target, b.target)
    return SimplicialMap(S, T, lambda p: _pair_normalize(a.on(p[0]), b.on(p[1])), name="prod")


def parse_simplicial_map(document, K: SimplicialSet, L: SimplicialSet, check: bool = True) -> SimplicialMap:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedDocument(f"invalid JSON: {e}") from e
    if not isinstance(document, dict) or not isinstance(document.get("map"), dict):
        raise MalformedDocument("map document needs a 'map' object")
    names_K = {K.label(b): b for n in range(K.top + 1) for b in K.simplices(n)}
    names_L = {L.label(b): b for n in range(L.top + 1) for b in L.simplices(n)}
    images = {}
    for key, val in document["map"].items():
        if key not in names_K:
            raise MalformedDocument(f"map: unknown source simplex {key!r}")
        if not isinstance(val, dict) or val.get("base") not in names_L:
            raise MalformedDocument(f"map: image of {key!r} has an unknown base")
        J = val.get("degeneracies", [])
        base = names_L[val["base"]]
        n = K.dim_of(names_K[key])
        if L.dim_of(base) + len(J) != n or any(J[a] <= J[a + 1] for a in range(len(J) - 1)) \
                or (J and (J[-1] < 0 or J[0] > n - 1)):
            raise MalformedDocument(f"map: image of {key!r} is not a valid {n}-simplex")
        images[names_K[key]] = (base, theta_from_degeneracies(J, n))
    missing = [k for k in names_K if names_K[k] not in images]
    if missing:
        raise MalformedDocument(f"map: no image given for {missing}")
    f = SimplicialMap(K, L, images, name=document.get("name", ""))
    if check:
        w = f.witness()
        if w is not None:
            b, i = w
            what = "dimension" if i is None else f"face {i}"
            raise SimplicialIdentityViolation(f"map does not commute with {what} at {K.label(b)}", witness=w)
    return f


# ---------------------------------------------------------------------------
# normalized chains


def normalized_chains(K: SimplicialSet, trunc: Optional[int] = None, name: str = "") -> ChainCoalgebra:
    """``C_*K`` with the Alexander–Whitney diagonal.

    The unit term is the first vertex; it is the coaugmentation when ``K`` is
    reduced.
    """
    top = K.top if trunc is None else min(trunc, K.top)
    basis = {n: list(K.simplices(n)) for n in range(top + 1)}

    def d(b):
        n = K.dim_of(b)
        out: Comb = {}
        if n == 0:
            return out
        for i in range(n + 1):
            s = K.face(b, i)
            if not is_degenerate(s):
                add_into(out, s[0], sign(i))
        return out

    C = FreeChainComplex(basis, d, trunc=trunc, name=name or f"C({K.name})", label=K.label)
    C.simplicial_set = K

    def delta(b):
        n = K.dim_of(b)
        s = K.nd(b)
        out: Comb = {}
        for r in range(n + 1):
            a = K.front(s, r)
            if is_degenerate(a):
                continue
            c = K.back(s, r)
            if is_degenerate(c):
                continue
            add_into(out, (a[0], c[0]), 1)
        return out

    def counit(b):
        return 1 if K.dim_of(b) == 0 else 0

    return ChainCoalgebra(C, delta, counit, unit=K.basepoint(), name=C.name)


# ---------------------------------------------------------------------------
# simplicial groups and twisted products


class SimplicialGroup:
    """A simplicial set whose levels are groups.

    ``mul(a, b)`` multiplies two general simplices of the same dimension and
    ``unit(n)`` is the neutral element of level ``n``; ``inv`` inverts.
    """

    def __init__(self, G: SimplicialSet, mul, unit, inv, name: str = ""):
        self.set = G
        self.mul = mul
        self.unit = unit
        self.inv = inv
        self.name = name or G.name

    def level(self, n: int) -> List[Simplex]:
        """All simplices of level ``n`` (degenerate ones included)."""
        G = self.set
        out = []
        for m in range(min(n, G.top) + 1):
            for J in itertools.combinations(range(n), n - m):
                th = theta_from_degeneracies(J, n)
                for b in G.simplices(m):
                    out.append((b, th))
        return out

    def table(self, n: int) -> Dict[Tuple[Simplex, Simplex], Simplex]:
        L = self.level(n)
        return {(a, b): self.mul(a, b) for a in L for b in L}

    def axiom_witness(self, upto: int):
        G = self.set
        for n in range(upto + 1):
            L = self.level(n)
            e = self.unit(n)
            for a in L:
                if self.mul(a, e) != a or self.mul(e, a) != a or self.mul(a, self.inv(a)) != e:
                    return ("unit/inverse", n, a)
                for b in L:
                    ab = self.mul(a, b)
                    for c in L:
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                            return ("associativity", n, (a, b, c))
                    for i in range(n + 1 if n else 0):
                        if G.gface(ab, i) != self.mul(G.gface(a, i), G.gface(b, i)):
                            return ("face homomorphism", n, (a, b, i))
                    for j in range(n + 1):
                        if G.gdegen(ab, j) != self.mul(G.gdegen(a, j), G.gdegen(b, j)):
                            return ("degeneracy homomorphism", n, (a, b, j))
        return None


def constant_cyclic_group(k: int) -> SimplicialGroup:
    """The constant simplicial group ``Z/k`` (vertices ``0..k-1``)."""
    G = FiniteSimplicialSet(f"Z{k}", {0: list(range(k))}, {})

    def mul(a, b):
        return ((a[0] + b[0]) % k, a[1])

    return SimplicialGroup(G, mul, lambda n: (0, (0,) * (n + 1)),
                           lambda a: ((-a[0]) % k, a[1]), name=f"Z/{k}")


class TwistingFunction:
    """``τ`` on nondegenerate simplices of positive dimension.

    Extended to general simplices by ``τ(s_0 x) = e`` and
    ``τ(s_{j+1} x) = s_j τ(x)``.
    """

    def __init__(self, K: SimplicialSet, G: SimplicialGroup, values):
        self.K, self.G = K, G
        self._v = values

    def value(self, b) -> Simplex:
        return self._v(b) if callable(self._v) else self._v[b]

    def __call__(self, s: Simplex) -> Simplex:
        b, th = s
        n = len(th) - 1
        if th[0] == th[1]:
            return self.G.unit(n - 1)
        t = self.value(b)
        J = degeneracies_of(th)
        for j in sorted(J):
            t = self.G.set.gdegen(t, j - 1)
        return t

    def witness(self, upto: Optional[int] = None):
        K, G = self.K, self.G
        GS = G.set
        top = K.top if upto is None else min(upto, K.top)
        for n in range(1, top + 1):
            for b in K.simplices(n):
                t = self.value(b)
                if sdim(t) != n - 1:
                    return ("dimension", b)
                if n < 2:
                    continue
                x = K.nd(b)
                lhs = GS.gface(t, 0)
                rhs = G.mul(G.inv(self(K.gface(x, 0))), self(K.gface(x, 1)))
                if lhs != rhs:
                    return ("d0", b)
                for i in range(1, n):
                    if GS.gface(t, i) != self(K.gface(x, i + 1)):
                        return (f"d{i}", b)
        return None


class TwistedProduct(SimplicialSet):
    """``K ×_τ F`` with ``∂_0(x, y) = (∂_0 x, τ(x)·∂_0 y)``."""

    def __init__(self, K: SimplicialSet, G: SimplicialGroup, tau: TwistingFunction,
                 F: SimplicialSet, action, name: str = ""):
        super().__init__()
        self.K, self.G, self.tau, self.F = K, G, tau, F
        self.action = action
        self.name = name or f"{K.name}x_t{F.name}"
        self.top = K.top + F.top
        self._s: Dict[int, Tuple] = {}

    def simplices(self, n):
        r = self._s.get(n)
        if r is None:
            r = tuple(_product_simplices(self.K, self.F, n)) if 0 <= n <= self.top else ()
            self._s[n] = r
        return r

    def dim_of(self, b):
        return len(b[0][1]) - 1

    def _face(self, b, i):
        x, y = b
        if i == 0:
            y0 = self.action(self.tau(x), self.F.gface(y, 0))
            return _pair_normalize(self.K.gface(x, 0), y0)
        return _pair_normalize(self.K.gface(x, i), self.F.gface(y, i))

    def label(self, b):
        x, y = b
        return f"({simplex_label(x, self.K.label)}, {simplex_label(y, self.F.label)})"


def twisted_cartesian_product(K: SimplicialSet, G: SimplicialGroup, tau: TwistingFunction,
                              F: SimplicialSet, action=None, check_upto: Optional[int] = None,
                              name: str = "") -> TwistedProduct:
    """Build ``K ×_τ F``; ``action`` defaults to left multiplication on ``F = G``."""
    if action is None:
        action = G.mul
    top = K.top if check_upto is None else check_upto
    w = tau.witness(top)
    if w is not None:
        raise TwistingAxiomViolation(f"twisting identity {w[0]} fails at {K.label(w[1])}", witness=w)
    P = TwistedProduct(K, G, tau, F, action, name)
    w = P.identity_witness(top + F.top)
    if w is not None:
        raise TwistingAxiomViolation(f"twisted product breaks d_{w[1]} d_{w[2]} at {P.label(w[0])}", witness=w)
    return P
