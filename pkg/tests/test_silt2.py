import pytest

from helpers import example_poset
from taumute import models, silt2, taut
from taumute.repcat import decompose, hom_dim, is_isomorphic, min_presentation, regular, registry, simple, tau
from taumute.silt2 import TwoTermComplex


def stalk0(alg, v):
    return TwoTermComplex(alg, (), (v,), ((),))


def stalk1(alg, v):
    return TwoTermComplex(alg, (v,), (), ())


def presentation_complex(m):
    pres = min_presentation(m)
    return TwoTermComplex(m.algebra, pres.p1, pres.p0, pres.elements)


def test_stalk_projective_is_presilting(kqba):
    for v in kqba.quiver.vertices:
        assert silt2.hom_shift1_dim(stalk0(kqba, v), stalk0(kqba, v)) == 0


def test_shifted_stalk_against_stalk(kqba):
    for v in kqba.quiver.vertices:
        assert silt2.hom_shift1_dim(stalk1(kqba, v), stalk0(kqba, v)) == 1
        assert silt2.hom_shift1_dim(stalk0(kqba, v), stalk1(kqba, v)) == 0


def test_presentation_of_s1(kqba):
    c = presentation_complex(simple(kqba, 1))
    assert c.src == (2,) and c.tgt == (1,)
    assert silt2.is_presilting(c)
    # Hom(P2, P2) with no homotopy since Hom(P1, P2) = 0; equals dim Hom(P2, tau S1)
    assert silt2.hom_shift1_dim(c, stalk0(kqba, 2)) == 1
    assert silt2.hom_shift1_dim(stalk0(kqba, 1), c) == 0


@pytest.mark.parametrize("name", ["a3-mod-ba", "a3", "preproj:A2", "cyclic:3,2"])
def test_shift_hom_matches_tau_duality(name):
    alg = models.preset(name)
    reg = registry(alg)
    ids = taut.probe_ids(example_poset(name))
    cx = {i: presentation_complex(reg[i]) for i in ids}
    for x in ids:
        tx = tau(reg[x])
        for y in ids:
            assert silt2.hom_shift1_dim(cx[x], cx[y]) == hom_dim(reg[y], tx)


def test_from_pair_extremes(kqba):
    top = silt2.from_pair(taut.regular_pair(kqba))
    assert top.pm1 == (0, 0, 0) and top.p0 == (1, 1, 1)
    assert is_isomorphic(silt2.h0(top), regular(kqba))
    bottom = silt2.from_pair(taut.zero_pair(kqba))
    assert bottom.pm1 == (1, 1, 1) and bottom.p0 == (0, 0, 0)
    assert silt2.h0(bottom).dim == 0


def test_from_pair_tau_tilting_example(kqba):
    p = taut.parse_pair(kqba, "P1+S1+P3")
    c = silt2.from_pair(p)
    assert c.pm1 == (0, 1, 0) and c.p0 == (2, 0, 1)
    assert tuple(sorted(i for i, _ in decompose(silt2.h0(c)))) == p.module
    assert silt2.is_two_term_silting(c)


def test_summand_counts(kqba):
    assert silt2.summand_count(silt2.from_pair(taut.regular_pair(kqba))) == 3
    contractible = TwoTermComplex(kqba, (1,), (1,), (({0: 1},),))
    assert silt2.summand_count(contractible) == 0
    assert silt2.is_presilting(contractible)
    assert not silt2.is_two_term_silting(contractible)


def test_non_presilting_complex(kqba):
    c = TwoTermComplex(kqba, (2,), (2,), (({},),))  # P2 -0-> P2
    assert not silt2.is_presilting(c)
    assert silt2.summand_count(c) == 2


def test_shape_mismatch_rejected(kqba):
    with pytest.raises(ValueError):
        TwoTermComplex(kqba, (1,), (2,), ())


@pytest.mark.parametrize("name,count", [("a3-mod-ba", 12), ("preproj:A2", 6), ("cyclic:3,2", 14)])
def test_silting_bijection(name, count):
    poset = example_poset(name)
    rep = silt2.check_silting_bijection(poset)
    assert rep.passed, rep.violations[:5]
    assert rep.details["silting"] == count


@pytest.mark.parametrize("name", ["a3-mod-ba", "preproj:A2", "a3"])
def test_dual_complex_matches_dagger(name):
    rep = silt2.check_dual_matches_dagger(example_poset(name))
    assert rep.passed, rep.violations[:5]


def test_dual_is_an_involution(kqba):
    c = silt2.from_pair(taut.parse_pair(kqba, "P1+S1;3"))
    dd = c.dual().dual()
    assert dd.algebra is kqba and dd.src == c.src and dd.tgt == c.tgt and dd.d == c.d
