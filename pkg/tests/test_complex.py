import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polyprod.complex import (ComplexError, SimplicialComplex, cycle, discrete, empty_complex,
                              full_subcomplex, join, link, members, shortlex_faces, simplex,
                              simplex_boundary, submasks, to_mask, validate_complex)
from polyprod.oracle import corpus


def faces_of(K):
    return {members(f) for f in K.face_masks}


def test_closure_of_two_edges(two_edges):
    assert faces_of(two_edges) == {(), (1,), (2,), (3,), (1, 3), (2, 3)}


def test_closure_of_nothing_has_ghosts():
    K = validate_complex(2, [])
    assert faces_of(K) == {()}
    assert K.ghost_vertices == (1, 2)
    assert K.m == 2


def test_square_face_count(square):
    assert len(square) == 9


def test_out_of_range_face_is_named():
    with pytest.raises(ComplexError, match=r"\[1, 7\]"):
        validate_complex(4, [[1, 7]])


def test_shortlex_examples(two_edges):
    assert shortlex_faces(two_edges) == [(), (1,), (2,), (3,), (1, 3), (2, 3)]
    assert shortlex_faces(simplex(3)) == [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]
    assert shortlex_faces(empty_complex(0)) == [()]


def test_full_subcomplex_examples(square):
    edge = full_subcomplex(square, [1, 2])
    assert (1, 2) in faces_of(edge)
    pts = full_subcomplex(square, [1, 3])
    assert faces_of(pts) == {(), (1,), (3,)}
    assert pts.index_map == {1: 1, 2: 3}
    nothing = full_subcomplex(square, [])
    assert nothing.m == 0 and nothing.is_empty_complex()


def test_full_subcomplex_keeps_ghosts():
    K = validate_complex(3, [[1]])
    sub = full_subcomplex(K, [1, 2])
    assert sub.vertices == (1, 2) and sub.ghost_vertices == (2,)


def test_link_examples(two_edges, square):
    assert faces_of(link(two_edges, [3])) == {(), (1,), (2,)}
    assert link(square, []).face_masks == square.face_masks
    top = link(simplex(3), [1, 2, 3])
    assert top.is_empty_complex()
    with pytest.raises(ComplexError):
        link(square, [1, 3])


def test_link_is_disjoint():
    K = simplex(3)
    lk = link(K, [1])
    assert all(not f & 1 for f in lk.face_masks)
    assert lk.vertices == (2, 3)


def test_join_examples(square):
    two = discrete(2)
    J = join(two, two)
    assert J.relabel().face_masks == validate_complex(4, [[1, 3], [1, 4], [2, 3], [2, 4]]).face_masks
    assert join(square, empty_complex(0)) == square
    assert join(discrete(1), discrete(1)).facets == [(1, 2)]


def test_join_keeps_disjoint_labels():
    a = validate_complex(3, [[1], [3]])
    b = SimplicialComplex.from_facets([2, 4], [[2], [4]])
    assert join(full_subcomplex(a, [1, 3]), b) == cycle(4)


def test_families():
    assert simplex_boundary(2).facets == [(1,), (2,)]
    assert len(simplex_boundary(4).facets) == 4
    with pytest.raises(ComplexError):
        cycle(2)


def test_submasks_in_binary_order():
    assert submasks(0b101) == [0, 1, 4, 5]
    assert submasks(0) == [0]


# -- properties over the corpus ----------------------------------------------

def test_closure_idempotent(seeded_corpus):
    for inst in seeded_corpus:
        K = inst.K
        again = validate_complex(K.m, K.faces)
        assert again == validate_complex(again.m, again.facets) == K


def test_shortlex_total_order(seeded_corpus):
    for inst in seeded_corpus:
        faces = shortlex_faces(inst.K)
        keys = [(len(f), f) for f in faces]
        assert keys == sorted(set(keys))
        assert len(faces) == len(inst.K)


def test_link_full_subcomplex_compatibility(seeded_corpus):
    for inst in seeded_corpus:
        K = inst.K
        for I in submasks(K.vertex_mask):
            KI = full_subcomplex(K, I)
            for s in KI.face_masks:
                restricted = full_subcomplex(link(K, s), I & ~s)
                assert restricted.face_masks == link(KI, s).face_masks


def test_rho_inclusion(seeded_corpus):
    for inst in seeded_corpus:
        K = inst.K
        if K.m > 5:
            continue
        for I in submasks(K.vertex_mask):
            KI = full_subcomplex(K, I)
            for s in KI.face_masks:
                small = link(KI, s)
                for v in members(K.vertex_mask & ~I):
                    bit = 1 << (v - 1)
                    if s | bit in K.face_masks:
                        big = link(full_subcomplex(K, I | bit), s | bit)
                        assert big.face_masks <= small.face_masks


def test_join_identity_and_associativity():
    parts = [discrete(1), discrete(2), simplex(2), empty_complex(1), simplex_boundary(3)]
    for a, b, c in itertools.product(parts, repeat=3):
        if a.m + b.m + c.m > 6:
            continue
        left = join(join(a, b), c)
        right = join(a, join(b, c))
        assert left.relabel() == right.relabel()
        assert join(a, empty_complex(0)) == a


facets = st.lists(st.lists(st.integers(1, 6), min_size=1, max_size=4), max_size=8)


@settings(max_examples=80, deadline=None)
@given(facets)
def test_generated_closure_is_downward_closed(fs):
    K = validate_complex(6, fs)
    for f in K.face_masks:
        for sub in submasks(f):
            assert sub in K.face_masks
    for face in fs:
        assert to_mask(face) in K.face_masks
