from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyprod.complex import (cycle, discrete, empty_complex, full_subcomplex, join, members,
                              popcount, simplex, simplex_boundary, submasks, validate_complex)
from polyprod.homalg import (GF, QQ, Cochain, CocycleError, Field, betti_numbers, coboundary_matrix,
                             combination, express, is_cocycle, join_class, matmul, pullback, rank,
                             reduced_cohomology, reduced_euler, restrict, unit_vector)

from conftest import SMALL


def test_field_parsing():
    assert Field.parse("Q") == QQ
    assert Field.parse("F2") == GF(2)
    assert Field.parse("GF(5)").p == 5
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        Field.parse("R")
    assert GF(5)(Fraction(1, 2)) == 3
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)


def test_rank_over_fields():
    rows = [[1, 1], [1, -1]]
    assert rank(rows, QQ) == 2
    assert rank([[x % 2 for x in r] for r in rows], GF(2)) == 1


def test_examples(field):
    assert betti_numbers(empty_complex(0), field) == {-1: 1}
    assert betti_numbers(discrete(2), field) == {0: 1}
    assert betti_numbers(cycle(4), field) == {1: 1}
    assert betti_numbers(simplex(3), field) == {}
    assert betti_numbers(simplex_boundary(4), field) == {2: 1}


def test_ghosts_do_not_matter():
    assert betti_numbers(validate_complex(3, []), QQ) == {-1: 1}
    assert betti_numbers(validate_complex(4, [[1, 2]]), QQ) == {}


def test_representatives_are_cocycles(seeded_corpus, field):
    for inst in seeded_corpus[:120]:
        B = reduced_cohomology(inst.K, field)
        for d, reps in B.classes.items():
            for i, rep in enumerate(reps):
                assert is_cocycle(rep, inst.K, field)
                assert express(rep, B) == unit_vector(len(reps), i, field)


def test_rank_nullity_and_euler(seeded_corpus):
    for inst in seeded_corpus:
        K = inst.K
        B = reduced_cohomology(K, QQ)
        by_deg = B.faces
        for d in range(-1, K.dimension + 1):
            lo, hi, prev = by_deg.get(d, []), by_deg.get(d + 1, []), by_deg.get(d - 1, [])
            r_out = rank(coboundary_matrix(lo, hi, QQ), QQ) if hi and lo else 0
            r_in = rank(coboundary_matrix(prev, lo, QQ), QQ) if prev and lo else 0
            assert B.dim(d) == len(lo) - r_out - r_in
        chi = sum((-1) ** d * n for d, n in B.dims().items())
        assert chi == reduced_euler(K)
        assert betti_numbers(K, QQ) == B.dims()


def test_torsion_free_agreement(seeded_corpus):
    for inst in seeded_corpus:
        assert betti_numbers(inst.K, QQ) == betti_numbers(inst.K, GF(2)) == betti_numbers(inst.K, GF(3))


def test_coboundary_expresses_as_zero(square):
    B = reduced_cohomology(square, QQ)
    point = Cochain(0, {1: Fraction(1)})
    dpoint = Cochain(1, {f: Fraction(-1 if members(f)[0] == 1 else 1) for f in square.face_masks
                         if popcount(f) == 2 and f & 1})
    assert is_cocycle(dpoint, square, QQ)
    assert express(dpoint, B) == [0]
    with pytest.raises(CocycleError):
        express(point, B)


def test_express_is_linear():
    K = discrete(4)
    B = reduced_cohomology(K, QQ)
    reps = B.classes[0]
    vals = {}
    for rep in reps[:2]:
        for f, x in rep.values.items():
            vals[f] = vals.get(f, 0) + x
    total = Cochain(0, {f: x for f, x in vals.items() if x})
    assert express(total, B) == [1, 1, 0]
    assert combination(B, 0, [1, 1, 0]).values == total.values


def test_pullback_examples():
    sq = cycle(4)
    edge = full_subcomplex(sq, [1, 2])
    mats = pullback(reduced_cohomology(sq, QQ), reduced_cohomology(edge, QQ))
    assert mats[1] == []  # zero map into a zero group
    B = reduced_cohomology(sq, QQ)
    assert pullback(B, B)[1] == [[1]]
    three = discrete(3)
    two = full_subcomplex(three, [1, 3])
    m = pullback(reduced_cohomology(three, QQ), reduced_cohomology(two, QQ))[0]
    assert len(m) == 1 and len(m[0]) == 2 and rank(m, QQ) == 1


def _identity(n, f):
    return [unit_vector(n, i, f) for i in range(n)]


def test_functoriality(seeded_corpus):
    checked = 0
    for inst in seeded_corpus:
        K = inst.K
        if K.m > 5:
            continue
        full = reduced_cohomology(K, QQ)
        for d, mat in pullback(full, full).items():
            assert mat == _identity(full.dim(d), QQ)
        subs = submasks(K.vertex_mask)
        for I in subs[::3]:
            for I2 in submasks(I)[::2]:
                a = reduced_cohomology(full_subcomplex(K, I), QQ)
                b = reduced_cohomology(full_subcomplex(K, I2), QQ)
                direct = pullback(full, b)
                f = pullback(full, a)
                g = pullback(a, b)
                for d in direct:
                    comp = matmul(g.get(d, []), f.get(d, []), QQ, full.dim(d)) if b.dim(d) else []
                    if a.dim(d) == 0:
                        comp = [[0] * full.dim(d) for _ in range(b.dim(d))]
                    assert comp == direct[d]
                    checked += 1
    assert checked > 100


def test_join_class_examples():
    two_a = validate_complex(3, [[1], [3]])
    two_a = full_subcomplex(two_a, [1, 3])
    two_b = full_subcomplex(validate_complex(4, [[2], [4]]), [2, 4])
    sq = join(two_a, two_b)
    assert sq == cycle(4)
    alpha = reduced_cohomology(two_a, QQ).classes[0][0]
    beta = reduced_cohomology(two_b, QQ).classes[0][0]
    c = join_class(alpha, beta, two_a, two_b, QQ)
    assert c.degree == 1 and is_cocycle(c, sq, QQ)
    assert express(c, reduced_cohomology(sq, QQ)) in ([1], [-1])
    zero = join_class(alpha, Cochain(0, {}), two_a, two_b, QQ)
    assert zero.is_zero()


def test_join_class_unit_is_identity():
    e = empty_complex(0)
    unit = reduced_cohomology(e, QQ).unit()
    K = cycle(4)
    beta = reduced_cohomology(K, QQ).classes[1][0]
    assert join_class(unit, beta, e, K, QQ).values == beta.values


def test_join_kunneth_dimensions():
    parts = [discrete(1), discrete(2), discrete(3), simplex_boundary(3), empty_complex(1), cycle(4)]
    for a in parts:
        for b in parts:
            if a.m + b.m > 7:
                continue
            J = join(a, b)
            ba, bb = betti_numbers(a, QQ), betti_numbers(b, QQ)
            want = {}
            for p, x in ba.items():
                for q, y in bb.items():
                    want[p + q + 1] = want.get(p + q + 1, 0) + x * y
            assert betti_numbers(J, QQ) == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(1, 5), min_size=1, max_size=3), max_size=7))
def test_euler_matches_face_count(fs):
    K = validate_complex(5, fs)
    dims = betti_numbers(K, QQ)
    assert sum((-1) ** d * n for d, n in dims.items()) == reduced_euler(K)
