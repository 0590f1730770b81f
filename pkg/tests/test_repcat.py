import threading

import pytest

from taumute import models, taut
from taumute.bqa import AlgebraError
from taumute.exactla import Matrix, rank
from taumute.repcat import (Representation, apr_tilt, cokernel, decompose, direct_sum, ext1_dim, hom_basis,
                            hom_dim, identity, image, injections, is_isomorphic, is_projective, kernel,
                            min_presentation, power, projective, radical, registry, simple, stable_hom_dim,
                            tau, tau_minus, top, top_vector, transpose, zero_morphism, zero_rep)
from taumute.repcat import regular as regular_module

from helpers import EXAMPLES, example_poset


def conjugated(m: Representation, seed: int) -> Representation:
    """The same module written in another basis at every vertex."""
    import random
    rng = random.Random(seed)
    bases = []
    for d in m.dims:
        while True:
            g = Matrix(d, d, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
            if rank(g) == d:
                break
        bases.append(g)
    from taumute.exactla import solve
    inv = [solve(g, Matrix.identity(g.rows)) for g in bases]
    q = m.algebra.quiver
    maps = [bases[x.target - 1] @ mat @ inv[x.source - 1] for x, mat in zip(q.arrows, m.maps)]
    return Representation(m.algebra, m.dims, maps)


def test_hom_examples(a3, kqba):
    assert hom_dim(simple(a3, 1), simple(a3, 2)) == 0
    assert hom_dim(projective(kqba, 1), projective(kqba, 2)) == 0
    assert hom_dim(projective(kqba, 2), projective(kqba, 1)) == 1


def test_hom_basis_elements_intertwine(kqba):
    m = regular_module(kqba)
    for f in hom_basis(m, m):
        assert f.is_intertwining()


def test_kernel_cokernel_examples(a3):
    m = projective(a3, 1)
    assert kernel(identity(m))[0].dim == 0
    z = zero_rep(a3)
    assert is_isomorphic(cokernel(zero_morphism(z, m))[0], m)
    s3, p2 = projective(a3, 3), projective(a3, 2)
    (f,) = hom_basis(s3, p2)
    assert is_isomorphic(cokernel(f)[0], simple(a3, 2))


def test_ranks_add_up(kqba):
    m = regular_module(kqba)
    for f in hom_basis(m, m):
        k, _ = kernel(f)
        im, _ = image(f)
        c, _ = cokernel(f)
        for v in range(kqba.n):
            assert k.dims[v] + im.dims[v] == m.dims[v]
            assert im.dims[v] + c.dims[v] == m.dims[v]


def test_radical_and_top(a3):
    assert radical(projective(a3, 1))[0].dims == (0, 1, 1)
    assert top_vector(regular_module(a3)) == (1, 1, 1)
    assert top(regular_module(a3))[0].dims == (1, 1, 1)
    for v in a3.quiver.vertices:
        assert radical(simple(a3, v))[0].dim == 0


def test_presentation_of_projective_is_trivial(kqba):
    pres = min_presentation(projective(kqba, 2))
    assert pres.p1 == () and pres.p0 == (2,)


@pytest.mark.parametrize("name", ["a3", "a3-mod-ba"])
def test_presentation_of_s1(name):
    alg = models.preset(name)
    pres = min_presentation(simple(alg, 1))
    assert pres.p0 == (1,) and pres.p1 == (2,)


@pytest.mark.parametrize("name", ["a3", "a3-mod-ba", "cyclic:3,2", "preproj:A2"])
def test_presentations_are_exact_and_radical(name):
    alg = models.preset(name)
    reg = registry(alg)
    for i in taut.probe_ids(example_poset(name)):
        pres = min_presentation(reg[i])
        assert pres.d0.is_surjective()
        assert pres.d1.rank() == pres.syzygy.dim
        for row in pres.elements:
            for x in row:
                assert all(alg.basis[k].length > 0 for k in x)


def test_decompose_regular(a3):
    reg = registry(a3)
    d = decompose(regular_module(a3))
    assert sorted(reg.label(i) for i, _ in d) == ["P1", "P2", "P3"]
    assert all(c == 1 for _, c in d)


def test_decompose_multiplicity(a3):
    (entry,) = decompose(power(projective(a3, 1), 2))
    assert registry(a3).label(entry[0]) == "P1" and entry[1] == 2


def test_decompose_radical_plus_simple(a3):
    m = direct_sum([radical(projective(a3, 1))[0], simple(a3, 1)], a3)
    reg = registry(a3)
    labels = {taut.summand_name(a3, i) for i, _ in decompose(m)}
    assert labels == {"P2", "S1"}


def test_decompose_is_krull_schmidt(kqba):
    reg = registry(kqba)
    ids = taut.probe_ids(example_poset("a3-mod-ba"))
    for x in ids:
        for y in ids:
            total = decompose(direct_sum([reg[x], reg[y]], kqba))
            expect = {}
            for i in (x, y):
                expect[i] = expect.get(i, 0) + 1
            assert dict(total) == expect


def test_isomorphism_examples(a3):
    assert is_isomorphic(projective(a3, 1), projective(a3, 1))
    assert not is_isomorphic(simple(a3, 1), simple(a3, 2))
    pi = models.preprojective("A2")
    assert not is_isomorphic(projective(pi, 1), Representation(pi, (1, 1)))


@pytest.mark.parametrize("name", ["a3", "a3-mod-ba", "preproj:A2"])
def test_isomorphism_survives_change_of_basis(name):
    alg = models.preset(name)
    reg = registry(alg)
    ids = taut.probe_ids(example_poset(name))
    for seed, i in enumerate(ids):
        m = direct_sum([reg[i], reg[ids[0]]], alg)
        assert is_isomorphic(m, conjugated(m, seed))
        assert decompose(conjugated(m, seed + 100)) == decompose(m)


def test_transpose_examples(kqba):
    assert transpose(projective(kqba, 2)).dim == 0
    op = kqba.opposite()
    tr = transpose(simple(kqba, 1))
    assert tr.algebra is op
    assert is_isomorphic(tr, simple(op, 2))


@pytest.mark.parametrize("name", ["a3", "a3-mod-ba", "cyclic:3,2", "preproj:A2"])
def test_transpose_is_an_involution_on_non_projectives(name):
    alg = models.preset(name)
    reg = registry(alg)
    for i in taut.probe_ids(example_poset(name)):
        m = reg[i]
        if is_projective(m):
            continue
        assert is_isomorphic(transpose(transpose(m)), m)


def test_tau_examples(a3, kqba):
    assert is_isomorphic(tau(simple(a3, 1)), simple(a3, 2))
    assert is_isomorphic(tau(simple(a3, 2)), simple(a3, 3))
    assert is_isomorphic(tau(simple(kqba, 1)), simple(kqba, 2))
    for v in a3.quiver.vertices:
        assert tau(projective(a3, v)).dim == 0


@pytest.mark.parametrize("name", EXAMPLES)
def test_tau_is_bijective_on_the_registry(name):
    alg = models.preset(name)
    assert taut.check_tau_bijection(alg, taut.probe_ids(example_poset(name))).passed


def test_tau_minus_inverts_tau(a3):
    s1 = simple(a3, 1)
    assert is_isomorphic(tau_minus(tau(s1)), s1)


def test_ext_examples(a3):
    for v in a3.quiver.vertices:
        assert ext1_dim(projective(a3, v), simple(a3, 1)) == 0
    assert ext1_dim(simple(a3, 1), simple(a3, 2)) == 1
    assert ext1_dim(simple(a3, 2), simple(a3, 1)) == 0


def test_stable_hom_kills_projective_factorisations(a3):
    assert stable_hom_dim(projective(a3, 1), simple(a3, 1)) == 0
    assert stable_hom_dim(simple(a3, 1), simple(a3, 1)) == 1


@pytest.mark.parametrize("name", ["a3", "a3-mod-ba", "cyclic:3,2", "preproj:A2"])
def test_ar_duality(name):
    alg = models.preset(name)
    rep = taut.check_ar_duality(alg, taut.probe_ids(example_poset(name)))
    assert rep.passed, rep.violations


def test_apr_tilt_examples(a3):
    t = apr_tilt(a3, 3)
    assert taut.is_tilting(t)
    reg = registry(a3)
    labels = sorted(taut.summand_name(a3, i) for i, _ in decompose(t))
    assert labels[:2] == ["P1", "P2"] and len(labels) == 3
    a2 = models.linear_An(2)
    assert {taut.summand_name(a2, i) for i, _ in decompose(apr_tilt(a2, 2))} == {"P1", "S1"}
    with pytest.raises(AlgebraError):
        apr_tilt(a3, 1)


def test_registry_prenames_projectives(kqba):
    reg = registry(kqba)
    assert [reg.label(i) for i in range(3)] == ["P1", "P2", "P3"]
    assert [reg.projective_vertex(i) for i in range(3)] == [1, 2, 3]


def test_registry_concurrent_inserts_agree():
    alg = models.linear_An(4)
    reg = registry(alg)
    base = tau_minus(simple(alg, 4))
    copies = [conjugated(base, s) for s in range(8)]
    ids = []
    lock = threading.Lock()

    def worker(m):
        i = reg.insert(m)
        with lock:
            ids.append(i)

    threads = [threading.Thread(target=worker, args=(m,)) for m in copies]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(ids)) == 1


def test_injections_split(kqba):
    parts = [projective(kqba, 1), simple(kqba, 1)]
    total = direct_sum(parts, kqba)
    for inc in injections(parts, total):
        assert inc.is_injective()
