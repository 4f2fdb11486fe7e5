"""Exact reduced simplicial cohomology over Q or F_p.

Everything works on the augmented cochain complex, so the empty complex
``{∅}`` has a single class in degree -1.  A d-cochain is supported on faces
with ``d + 1`` vertices; faces are oriented by increasing vertex label and

    (δf)(v_0 < ... < v_{d+1}) = Σ_i (-1)^i f(v_0 .. v̂_i .. v_{d+1}).

Bases are deterministic: kernels and images are reduced in shortlex face
order, so the same complex always yields the same representatives.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex import SimplicialComplex, members, popcount

__all__ = [
    "Field", "QQ", "GF", "Cochain", "CohomologyBasis", "CocycleError",
    "reduced_cohomology", "betti_numbers", "pullback", "restrict",
    "join_class", "express", "rank", "coboundary_matrix", "reduced_euler",
    "is_cocycle", "combination", "pullback_vector", "clear_caches",
]


class CocycleError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field F_p.

    Elements are ``Fraction`` for Q and plain ints in ``range(p)`` for F_p.
    """

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"F_{self.p}: characteristic must be prime")

    @classmethod
    def parse(cls, tag: str) -> "Field":
        tag = tag.strip()
        if tag in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", tag)
        if not m:
            raise ValueError(f"unknown field {tag!r}; use 'Q' or 'F<p>'")
        return cls(int(m.group(1)))

    @property
    def tag(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> Fraction | int:
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def reduce(self, x):
        return x % self.p if self.p else x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p) if self.p else 1 / x

    def parse_element(self, text) -> Fraction | int:
        return self(Fraction(str(text)))

    def format(self, x) -> str:
        return str(x)

    def __repr__(self) -> str:
        return f"Field({self.tag})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# -- dense exact elimination -------------------------------------------------

def rank(rows: Sequence[Sequence], field: Field) -> int:
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = field.inv(mat[r][c])
        prow = [field.reduce(x * inv) for x in mat[r]]
        mat[r] = prow
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                mat[i] = [field.reduce(a - f * b) for a, b in zip(mat[i], prow)]
        r += 1
        if r == len(mat):
            break
    return r


def _kernel_basis(rows: Sequence[Sequence], ncols: int, field: Field) -> list[list]:
    """Basis of {x : A x = 0} from the reduced row echelon form of ``A``."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.reduce(x * inv) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [field.reduce(a - f * b) for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for row_i, pc in enumerate(pivots):
            vec[pc] = field.reduce(-mat[row_i][fc])
        basis.append(vec)
    return basis


class _Reducer:
    """Incremental echelon basis whose rows remember a class label.

    Rows coming from coboundaries carry the zero tag; the i-th cohomology
    representative carries the unit tag ``e_i``.  Reducing a cocycle against
    the rows accumulates its coordinates in the cohomology basis.
    """

    def __init__(self, ncols: int, ntags: int, field: Field):
        self.ncols = ncols
        self.ntags = ntags
        self.field = field
        self.rows: list[tuple[int, list, list]] = []

    def _reduce(self, vec, tag):
        f = self.field
        vec = list(vec)
        tag = list(tag)
        for pc, row, rtag in self.rows:
            a = vec[pc]
            if a:
                vec = [f.reduce(x - a * y) for x, y in zip(vec, row)]
                tag = [f.reduce(x - a * y) for x, y in zip(tag, rtag)]
        return vec, tag

    def add(self, vec, tag=None) -> bool:
        f = self.field
        if tag is None:
            tag = [f.zero] * self.ntags
        vec, tag = self._reduce(vec, tag)
        pc = next((i for i, x in enumerate(vec) if x), None)
        if pc is None:
            return False
        inv = f.inv(vec[pc])
        vec = [f.reduce(x * inv) for x in vec]
        tag = [f.reduce(x * inv) for x in tag]
        # keep rows fully reduced so later pivots never reintroduce earlier ones
        new_rows = []
        for opc, orow, otag in self.rows:
            a = orow[pc]
            if a:
                orow = [f.reduce(x - a * y) for x, y in zip(orow, vec)]
                otag = [f.reduce(x - a * y) for x, y in zip(otag, tag)]
            new_rows.append((opc, orow, otag))
        new_rows.append((pc, vec, tag))
        self.rows = new_rows
        return True

    def coordinates(self, vec):
        f = self.field
        residual, tag = self._reduce(vec, [f.zero] * self.ntags)
        if any(residual):
            return None
        return [f.reduce(-x) for x in tag]


# -- cochains -----------------------------------------------------------------

@dataclass(frozen=True)
class Cochain:
    """A homogeneous cochain: face mask -> nonzero coefficient."""

    degree: int
    values: dict = field(default_factory=dict, hash=False, compare=True)

    def __getitem__(self, face: int):
        return self.values.get(face, 0)

    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> list[int]:
        return sorted(self.values)


def _boundary_terms(face: int):
    """(sign, facet) pairs of the boundary of ``face``."""
    verts = members(face)
    for i, v in enumerate(verts):
        yield (-1) ** i, face & ~(1 << (v - 1))


def coboundary_matrix(faces_lo: Sequence[int], faces_hi: Sequence[int], field: Field) -> list[list]:
    """Matrix of δ from cochains on ``faces_lo`` to cochains on ``faces_hi``."""
    index = {f: j for j, f in enumerate(faces_lo)}
    rows = []
    for h in faces_hi:
        row = [field.zero] * len(faces_lo)
        for sign, g in _boundary_terms(h):
            j = index.get(g)
            if j is not None:
                row[j] = field(sign)
        rows.append(row)
    return rows


def _faces_by_degree(faces: frozenset[int]) -> dict[int, list[int]]:
    from .complex import shortlex_key

    out: dict[int, list[int]] = {}
    for f in sorted(faces, key=shortlex_key):
        out.setdefault(popcount(f) - 1, []).append(f)
    return out


@dataclass(frozen=True, eq=False)
class CohomologyBasis:
    """Reduced cohomology of ``complex`` with explicit cocycle representatives.

    ``classes[d]`` lists the representatives in degree ``d``; the i-th one is
    basis vector ``i`` in every coordinate vector produced by :func:`express`.
    """

    complex: SimplicialComplex
    field: Field
    faces: dict[int, list[int]]
    classes: dict[int, list[Cochain]]
    _reducers: dict = field(repr=False)

    def dim(self, d: int) -> int:
        return len(self.classes.get(d, ()))

    def dims(self) -> dict[int, int]:
        return {d: len(c) for d, c in sorted(self.classes.items()) if c}

    def is_zero(self) -> bool:
        return not any(self.classes.values())

    def unit(self) -> Cochain:
        """The generator of H̃^{-1} of the empty complex."""
        if not self.complex.is_empty_complex():
            raise ValueError("only the empty complex has a degree -1 class")
        return self.classes[-1][0]


_BASIS_CACHE: dict = {}
_BETTI_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _cochain_vector(c: Cochain, faces: Sequence[int], field: Field) -> list:
    return [field(c.values.get(f, 0)) for f in faces]


def _compute_core(faces: frozenset[int], field: Field):
    by_deg = _faces_by_degree(faces)
    top = max(by_deg)
    classes: dict[int, list[Cochain]] = {}
    reducers: dict[int, _Reducer] = {}
    for d in range(-1, top + 1):
        lo = by_deg.get(d, [])
        hi = by_deg.get(d + 1, [])
        prev = by_deg.get(d - 1, [])
        delta = coboundary_matrix(lo, hi, field)
        kernel = _kernel_basis(delta, len(lo), field) if hi else [
            [field.one if i == j else field.zero for i in range(len(lo))] for j in range(len(lo))
        ]
        image_cols = []
        if prev:
            dprev = coboundary_matrix(prev, lo, field)
            image_cols = [[dprev[r][c] for r in range(len(lo))] for c in range(len(prev))]
        # first pass: how many classes, so tags have a fixed length
        probe = _Reducer(len(lo), 0, field)
        for col in image_cols:
            probe.add(col, [])
        reps = []
        for z in kernel:
            if probe.add(z, []):
                reps.append(z)
        red = _Reducer(len(lo), len(reps), field)
        for col in image_cols:
            red.add(col)
        for i, z in enumerate(reps):
            tag = [field.zero] * len(reps)
            tag[i] = field.one
            red.add(z, tag)
        classes[d] = [
            Cochain(d, {f: x for f, x in zip(lo, z) if x}) for z in reps
        ]
        reducers[d] = red
    return by_deg, classes, reducers


def reduced_cohomology(K: SimplicialComplex, field: Field = QQ) -> CohomologyBasis:
    """Basis of H̃*(K; field) with cocycle representatives (memoized)."""
    key = (K.face_masks, field)
    with _CACHE_LOCK:
        core = _BASIS_CACHE.get(key)
    if core is None:
        core = _compute_core(K.face_masks, field)
        with _CACHE_LOCK:
            core = _BASIS_CACHE.setdefault(key, core)
    by_deg, classes, reducers = core
    return CohomologyBasis(K, field, by_deg, classes, reducers)


def betti_numbers(K: SimplicialComplex, field: Field = QQ) -> dict[int, int]:
    """``{d: dim H̃^d(K)}`` for the nonzero degrees, via ranks only."""
    key = (K.face_masks, field)
    with _CACHE_LOCK:
        cached = _BETTI_CACHE.get(key)
    if cached is not None:
        return dict(cached)
    by_deg = _faces_by_degree(K.face_masks)
    top = max(by_deg)
    ranks = {}
    for d in range(-1, top + 1):
        hi = by_deg.get(d + 1, [])
        ranks[d] = rank(coboundary_matrix(by_deg[d], hi, field), field) if hi else 0
    out = {}
    for d in range(-1, top + 1):
        b = len(by_deg[d]) - ranks[d] - ranks.get(d - 1, 0)
        if b:
            out[d] = b
    with _CACHE_LOCK:
        _BETTI_CACHE[key] = out
    return dict(out)


def reduced_euler(K: SimplicialComplex) -> int:
    """χ̃(K) = Σ_faces (-1)^dim, counting the empty face in dimension -1."""
    return sum((-1) ** (popcount(f) - 1) for f in K.face_masks)


def clear_caches() -> None:
    with _CACHE_LOCK:
        _BASIS_CACHE.clear()
        _BETTI_CACHE.clear()


# -- class arithmetic ---------------------------------------------------------

def is_cocycle(c: Cochain, K: SimplicialComplex, field: Field) -> bool:
    d = c.degree
    for h in K.face_masks:
        if popcount(h) != d + 2:
            continue
        total = field.zero
        for sign, g in _boundary_terms(h):
            x = c.values.get(g)
            if x:
                total = field.reduce(total + sign * x)
        if total:
            return False
    return True


def express(c: Cochain, basis: CohomologyBasis) -> list:
    """Coordinates of the class of the cocycle ``c`` in ``basis``."""
    d = c.degree
    faces = basis.faces.get(d, [])
    stray = [f for f in c.values if f not in set(faces)]
    if stray:
        raise CocycleError(f"cochain is supported off the {d}-faces of the complex: {[members(f) for f in stray]}")
    red = basis._reducers.get(d)
    if red is None:
        if c.is_zero():
            return []
        raise CocycleError(f"complex has no faces in degree {d}")
    coords = red.coordinates(_cochain_vector(c, faces, basis.field))
    if coords is None:
        raise CocycleError("cochain is not a cocycle")
    return coords


def combination(basis: CohomologyBasis, d: int, coords: Sequence) -> Cochain:
    """The cochain Σ coords[i] · (representative i in degree d)."""
    f = basis.field
    acc: dict[int, object] = {}
    for a, rep in zip(coords, basis.classes.get(d, [])):
        if not a:
            continue
        for face, x in rep.values.items():
            acc[face] = f.reduce(acc.get(face, 0) + a * x)
    return Cochain(d, {k: v for k, v in acc.items() if v})


def restrict(c: Cochain, sub: SimplicialComplex) -> Cochain:
    return Cochain(c.degree, {f: x for f, x in c.values.items() if f in sub.face_masks})


def pullback(source: CohomologyBasis, target: CohomologyBasis) -> dict[int, list[list]]:
    """Matrices of the restriction H̃*(source) -> H̃*(target).

    ``target.complex`` must be a subcomplex of ``source.complex`` (same
    ambient labels).  Entry ``[j][i]`` is the coefficient of target class
    ``j`` in the restriction of source class ``i``.
    """
    small, big = target.complex, source.complex
    if not small.face_masks <= big.face_masks:
        raise ValueError("pullback needs an inclusion of complexes")
    out = {}
    for d in sorted(set(source.classes) | set(target.classes)):
        n_src, n_tgt = source.dim(d), target.dim(d)
        if n_src == 0 and n_tgt == 0:
            continue
        cols = []
        for rep in source.classes.get(d, []):
            r = restrict(rep, small)
            try:
                cols.append(express(r, target) if n_tgt else [])
            except CocycleError as exc:  # pragma: no cover - impossible for true inclusions
                raise CocycleError(f"restricted class is not a cocycle: {exc}") from exc
        out[d] = [[cols[i][j] for i in range(n_src)] for j in range(n_tgt)]
    return out


def pullback_vector(source: CohomologyBasis, target: CohomologyBasis, d: int, coords: Sequence) -> list:
    c = combination(source, d, coords)
    r = restrict(c, target.complex)
    if target.dim(d) == 0:
        return []
    return express(r, target)


def _shuffle_sign(a: int, b: int) -> int:
    """Sign of the permutation sorting (vertices of a) ++ (vertices of b)."""
    inv = 0
    for x in members(a):
        inv += sum(1 for y in members(b) if y < x)
    return -1 if inv % 2 else 1


def join_class(alpha: Cochain, beta: Cochain, K1: SimplicialComplex, K2: SimplicialComplex,
               field: Field) -> Cochain:
    """Künneth class α ⊛ β on the join of ``K1`` and ``K2`` (disjoint labels).

    On the face σ1 ⊔ σ2 the value is α(σ1)·β(σ2), read with all vertices of
    σ1 before those of σ2 and then re-oriented to increasing labels.  Degree
    is ``deg α + deg β + 1``; the degree -1 unit of ``{∅}`` acts as identity.
    """
    if K1.vertex_mask & K2.vertex_mask:
        raise ValueError("join_class needs disjoint vertex labels")
    vals = {}
    for s1, a in alpha.values.items():
        for s2, b in beta.values.items():
            x = field.reduce(_shuffle_sign(s1, s2) * a * b)
            if x:
                vals[s1 | s2] = x
    return Cochain(alpha.degree + beta.degree + 1, vals)


def unit_vector(n: int, i: int, field: Field) -> list:
    return [field.one if j == i else field.zero for j in range(n)]


def matmul(a: list[list], b: list[list], field: Field, ncols: int) -> list[list]:
    """Product of ``a`` (n x k) and ``b`` (k x ncols); shapes may be empty."""
    return [
        [field.reduce(sum(row[k] * b[k][j] for k in range(len(row)))) for j in range(ncols)]
        for row in a
    ]
