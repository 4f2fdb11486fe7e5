"""Finite abstract simplicial complexes with labelled vertices.

Faces are stored as integer bitmasks over the *ambient* vertex labels
(bit ``v - 1`` stands for vertex ``v``).  A complex also records its vertex
set, which may contain ghost vertices that are not faces.  Full subcomplexes
and links keep the ambient labels, so a subcomplex of a subcomplex can be
compared face-by-face with its parent; the sorted vertex tuple doubles as the
index map from local positions ``1..m`` back to ambient labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if v < 1:
            raise ValueError(f"vertex labels start at 1, got {v}")
        mask |= 1 << (v - 1)
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Vertex labels of ``mask`` in increasing order."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def shortlex_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return popcount(mask), members(mask)


def submasks(mask: int) -> list[int]:
    """All subsets of ``mask`` in increasing binary order (``0`` first)."""
    subs = []
    sub = 0
    while True:
        subs.append(sub)
        if sub == mask:
            return subs
        sub = (sub - mask) & mask


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex on an explicit vertex set.

    ``vertices`` are sorted ambient labels; ``face_masks`` is downward closed
    and always contains the empty face ``0``.  Instances compare and hash
    structurally.  Build them with :func:`validate_complex` or
    :meth:`from_facets` rather than by hand.
    """

    vertices: tuple[int, ...]
    face_masks: frozenset[int] = field(repr=False)

    @classmethod
    def from_facets(cls, vertices: int | Iterable[int], facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        if isinstance(vertices, int):
            vertices = range(1, vertices + 1)
        vertices = tuple(sorted(set(vertices)))
        vmask = to_mask(vertices)
        gens = []
        for facet in facets:
            facet = tuple(facet)
            fmask = to_mask(facet) if facet else 0
            if fmask & ~vmask:
                raise ComplexError(f"face {list(facet)} has vertices outside {list(vertices)}")
            gens.append(fmask)
        return cls(vertices, _closure(gens))

    @property
    def m(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_mask(self) -> int:
        return to_mask(self.vertices)

    @cached_property
    def ordered_masks(self) -> tuple[int, ...]:
        return tuple(sorted(self.face_masks, key=shortlex_key))

    @property
    def faces(self) -> list[tuple[int, ...]]:
        """Faces as sorted label tuples, in shortlex order."""
        return [members(f) for f in self.ordered_masks]

    @cached_property
    def dimension(self) -> int:
        return max(popcount(f) for f in self.face_masks) - 1

    @cached_property
    def facet_masks(self) -> tuple[int, ...]:
        faces = self.ordered_masks
        return tuple(
            f for f in faces
            if not any(g != f and g & f == f for g in faces)
        )

    @property
    def facets(self) -> list[tuple[int, ...]]:
        return [members(f) for f in self.facet_masks]

    @property
    def ghost_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if (1 << (v - 1)) not in self.face_masks)

    @property
    def index_map(self) -> dict[int, int]:
        """Local position (1-based) -> ambient label."""
        return {i + 1: v for i, v in enumerate(self.vertices)}

    def masks_of_size(self, k: int) -> list[int]:
        return [f for f in self.ordered_masks if popcount(f) == k]

    def is_empty_complex(self) -> bool:
        return self.face_masks == frozenset((0,))

    def __contains__(self, face) -> bool:
        if isinstance(face, int):
            return face in self.face_masks
        return to_mask(face) in self.face_masks

    def __len__(self) -> int:
        return len(self.face_masks)

    def relabel(self) -> "SimplicialComplex":
        """The same complex with vertices renumbered to ``1..m``."""
        pos = {v: i + 1 for i, v in enumerate(self.vertices)}
        faces = frozenset(to_mask(pos[v] for v in members(f)) for f in self.face_masks)
        return SimplicialComplex(tuple(range(1, self.m + 1)), faces)

    def shifted(self, offset: int) -> "SimplicialComplex":
        return SimplicialComplex(
            tuple(v + offset for v in self.vertices),
            frozenset(f << offset for f in self.face_masks),
        )

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={list(self.vertices)}, facets={self.facets})"


def _closure(generators: Iterable[int]) -> frozenset[int]:
    faces = {0}
    for g in generators:
        if g in faces:
            continue
        verts = members(g)
        for k in range(1, len(verts) + 1):
            for sub in combinations(verts, k):
                faces.add(to_mask(sub))
    return frozenset(faces)


def validate_complex(m: int, generating_faces: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of ``generating_faces`` on the vertex set ``1..m``."""
    if m < 0:
        raise ComplexError(f"vertex count must be non-negative, got {m}")
    checked = []
    for face in generating_faces:
        face = tuple(face)
        bad = [v for v in face if not 1 <= v <= m]
        if bad:
            raise ComplexError(f"face {list(face)} has vertices outside 1..{m}: {bad}")
        checked.append(face)
    return SimplicialComplex.from_facets(m, checked)


def shortlex_faces(K: SimplicialComplex) -> list[tuple[int, ...]]:
    return K.faces


def full_subcomplex(K: SimplicialComplex, I: Iterable[int] | int) -> SimplicialComplex:
    imask = I if isinstance(I, int) else to_mask(I)
    if imask & ~K.vertex_mask:
        raise ComplexError(f"subset {list(members(imask))} is not inside {list(K.vertices)}")
    faces = frozenset(f for f in K.face_masks if f & ~imask == 0)
    return SimplicialComplex(members(imask), faces)


def link(K: SimplicialComplex, sigma: Iterable[int] | int) -> SimplicialComplex:
    smask = sigma if isinstance(sigma, int) else to_mask(sigma)
    if smask not in K.face_masks:
        raise ComplexError(f"{list(members(smask))} is not a face of {K!r}")
    faces = frozenset(
        t for t in K.face_masks if t & smask == 0 and (t | smask) in K.face_masks
    )
    return SimplicialComplex(members(K.vertex_mask & ~smask), faces)


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Join of two complexes.

    If the vertex sets are disjoint the ambient labels are kept.  Otherwise
    ``K2`` is shifted so that its labels follow the largest label of ``K1``.
    """
    if K1.vertex_mask & K2.vertex_mask:
        K2 = K2.shifted(max(K1.vertices))
    faces = frozenset(a | b for a in K1.face_masks for b in K2.face_masks)
    return SimplicialComplex(tuple(sorted(K1.vertices + K2.vertices)), faces)


# Named families used by tests, demos and the oracle corpus.

def empty_complex(m: int = 0) -> SimplicialComplex:
    return SimplicialComplex(tuple(range(1, m + 1)), frozenset((0,)))


def discrete(m: int) -> SimplicialComplex:
    return validate_complex(m, [[i] for i in range(1, m + 1)])


def simplex(m: int) -> SimplicialComplex:
    return validate_complex(m, [range(1, m + 1)])


def simplex_boundary(m: int) -> SimplicialComplex:
    """Boundary of the ``(m-1)``-simplex; ``m = 2`` gives two points."""
    return validate_complex(m, [[v for v in range(1, m + 1) if v != i] for i in range(1, m + 1)])


def cycle(m: int) -> SimplicialComplex:
    if m < 3:
        raise ComplexError("a cycle needs at least 3 vertices")
    return validate_complex(m, [[i, i % m + 1] for i in range(1, m + 1)])
