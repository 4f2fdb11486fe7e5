from fractions import Fraction

import pytest

from polyprod.homalg import GF, QQ
from polyprod.pairdata import (CATALOG, CatalogError, CWPair, GradedGen, PairDecomposition,
                               PairValidationError, builtin, builtin_pair, pair_from_betti,
                               validate_cwpair, validate_pair, wedge_model)

from corruptions import CORRUPTIONS, decomposition


def test_mf_cp3_accepted_with_paper_products():
    mf = builtin_pair("mf-cp3")
    c8, c16 = mf.gen("c8"), mf.gen("c16")
    e2, b4, b6 = mf.gen("e2"), mf.gen("b4"), mf.gen("b6")
    assert mf.product("X", c8, c8, QQ) == [(1, c16)]
    assert mf.product("A", e2, b4, QQ) == [(1, b6)]
    assert mf.product("A", b4, e2, QQ) == [(1, b6)]  # filled in by commutativity
    validate_pair(builtin("mf-cp3", 3))


def test_zero_tables_accepted():
    pair = CWPair("zero", (GradedGen("b", 2, "B"), GradedGen("c", 3, "C"), GradedGen("e", 1, "E")))
    validate_cwpair(pair)


@pytest.mark.parametrize("name", sorted(CORRUPTIONS))
def test_single_rule_corruptions(name):
    make, rule = CORRUPTIONS[name]
    pair, fld = make()
    with pytest.raises(PairValidationError) as info:
        validate_pair(decomposition(pair, fld))
    assert info.value.rules == {rule}
    assert {v.vertex for v in info.value.violations} == {1, 2}


def test_e_times_b_into_c_rejected():
    mf = builtin_pair("mf-cp3")
    a = dict(mf.a_products)
    a[("e2", "b4")] = {"c8": Fraction(1)}
    bad = CWPair(mf.name, mf.gens, mf.x_products, a, betti=mf.betti)
    with pytest.raises(PairValidationError) as info:
        validate_cwpair(bad)
    assert "module-target" in info.value.rules
    assert any(v.entry == ("A", "e2", "b4") for v in info.value.violations)


def test_odd_square_must_vanish_away_from_two():
    pair = CWPair("odd", (GradedGen("e", 1, "E"), GradedGen("f", 2, "E")), {},
                  {("e", "e"): {"f": Fraction(1)}})
    with pytest.raises(PairValidationError) as info:
        validate_cwpair(pair, QQ)
    assert info.value.rules == {"commutativity"}
    validate_cwpair(pair, GF(2))


def test_degree_zero_needs_flag():
    pair = CWPair("s0", (GradedGen("e", 0, "E"),))
    with pytest.raises(PairValidationError):
        validate_cwpair(pair)
    validate_cwpair(CWPair("s0", (GradedGen("e", 0, "E"),), non_connected=True))


def test_e_on_x_side_rejected():
    pair = CWPair("bad", (GradedGen("e", 1, "E"),), {("e", "e"): {}})
    with pytest.raises(PairValidationError) as info:
        validate_cwpair(pair)
    assert info.value.rules == {"module-target"}


def test_unknown_generator_and_duplicate_names():
    pair = CWPair("bad", (GradedGen("e", 1, "E"), GradedGen("e", 1, "E")))
    with pytest.raises(PairValidationError):
        validate_cwpair(pair)
    pair = CWPair("bad", (GradedGen("e", 1, "E"),), {}, {("e", "zz"): {"e": 1}})
    with pytest.raises(PairValidationError):
        validate_cwpair(pair)


def test_wedge_models():
    assert wedge_model(builtin("mf-cp3", 2), 1).B == (4, 6)
    assert wedge_model(builtin("mf-cp3", 2), 2).C == (8, 10, 12, 14, 16)
    assert wedge_model(builtin("mf-cp3", 2)).E == (2,)
    assert str(wedge_model(builtin("moment-angle", 1))) == "B = *, C = *, E = S^1"
    s0 = wedge_model(builtin("s0-pair", 1))
    assert (s0.B, s0.C, s0.E) == ((), (0,), (0,))


def test_catalog_entries():
    ma = builtin_pair("moment-angle")
    assert [(g.degree, g.module) for g in ma.gens] == [(1, "E")]
    rma = builtin_pair("real-moment-angle")
    assert [(g.degree, g.module) for g in rma.gens] == [(0, "E")]
    so3 = builtin_pair("so3-rp2", GF(2))
    assert [(g.degree, g.module) for g in so3.gens] == [(1, "B"), (2, "B"), (3, "C")]
    assert [(g.degree, g.module) for g in builtin_pair("so3-rp2", QQ).gens] == [(3, "C")]
    with pytest.raises(CatalogError):
        builtin_pair("torus")
    with pytest.raises(CatalogError):
        builtin_pair("moment-angle", "Q")


def test_per_vertex_copies_are_independent():
    p = builtin("moment-angle", 3)
    assert p.m == 3 and all(pr == p.at(1) for pr in p.pairs)
    q = PairDecomposition(QQ, (p.at(1), builtin_pair("mf-cp3")))
    assert validate_pair(q) is q


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_exactness(name):
    for fld in (QQ, GF(2), GF(3)):
        pair = builtin_pair(name, fld)
        assert pair.betti is not None
        validate_cwpair(pair, fld)


def test_importer_splits_by_rank():
    pair = pair_from_betti("cp3-in-cp8", {2: 1, 4: 1, 6: 1, 8: 1}, {2: 1, 4: 1, 6: 1}, {2: 1, 4: 1, 6: 1})
    assert [(g.name, g.module) for g in pair.gens] == [("b2", "B"), ("b4", "B"), ("b6", "B"), ("c8", "C")]
    validate_cwpair(pair)
    disc = pair_from_betti("disc", {}, {1: 1}, {})
    assert disc.betti["X/A"] == {2: 1}
    with pytest.raises(ValueError):
        pair_from_betti("bad", {1: 1}, {}, {1: 1})
