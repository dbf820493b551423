import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gaugelie.algebra import (
    LInftyMorphism, check_morphism, compose_morphisms, identity_morphism, zero_morphism,
)
from gaugelie.convolution import Convolution, find_homotopy, gauge_action
from gaugelie.errors import (
    BadContraction, InvalidStructure, NotAnEmbedding, NotQuasiIso, SingularLinearPart,
    UnsupportedStructure,
)
from gaugelie.fixtures import (
    fix_a, fix_b, fix_c, fix_d, random_acyclic_extension, random_basis_change, transport,
)
from gaugelie.graded import GradedLinearMap, cohomology_contraction
from gaugelie.inversion import (
    cohomology_map, contraction_from_inclusion, embedding_inverse, formal_inverse,
    homotopy_inverse, invert_linear,
)
from gaugelie.transfer import transfer


def inclusion(g0, g):
    lin = GradedLinearMap.from_labels(g0.space, g.space, 0, {x: {x: 1} for x in g0.space.labels()})
    return LInftyMorphism.strict(g0, g, lin)


def gauged_identity(seed, g):
    H = Convolution(g, g).random_element(random.Random(seed), 0)
    return gauge_action(identity_morphism(g), H)


# linear and formal inverses -----------------------------------------------------


def test_invert_linear_scaling():
    sp = fix_a(3).space
    two = GradedLinearMap.identity(sp).scale(2)
    assert invert_linear(two) == GradedLinearMap.identity(sp).scale(Fraction(1, 2))


def test_formal_inverse_of_scaling():
    g = fix_a(3)
    F = LInftyMorphism.strict(g, g, GradedLinearMap.identity(g.space).scale(2))
    G = formal_inverse(F)
    assert G == LInftyMorphism.strict(g, g, GradedLinearMap.identity(g.space).scale(Fraction(1, 2)))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15)
def test_formal_inverse_is_two_sided(seed):
    g = fix_b(3)
    F = gauged_identity(seed, g)
    G = formal_inverse(F)
    assert compose_morphisms(F, G) == identity_morphism(g)
    assert compose_morphisms(G, F) == identity_morphism(g)
    assert not check_morphism(G)


def test_formal_inverse_with_quadratic_part():
    g = fix_b(3)
    F = gauged_identity(3, g)
    assert F.truncated(1) != F, "needs a nonzero higher component"
    G = formal_inverse(F)
    assert compose_morphisms(F, G) == identity_morphism(g)


def test_singular_linear_part():
    g = fix_b(3)
    with pytest.raises(SingularLinearPart):
        formal_inverse(zero_morphism(g, g))


# embeddings ------------------------------------------------------------------------


def test_embedding_inverse_of_identity():
    g = fix_b(3)
    tr = embedding_inverse(identity_morphism(g))
    assert tr.result == identity_morphism(g)
    assert all(c.verify() for c in tr.certificates)


def test_embedding_inverse_fix_b_in_fix_c():
    i = inclusion(fix_b(4), fix_c(4))
    tr = embedding_inverse(i)
    c = tr.contraction
    assert tr.iterates[1].linear_part() == c.i.compose(c.p)
    assert tr.result.linear_part() == c.p
    # FIX-A is an abelian acyclic summand: nothing beyond p survives
    assert tr.result.is_strict()
    assert compose_morphisms(i, tr.result) == identity_morphism(i.source)
    assert all(c.verify() for c in tr.certificates)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10)
def test_embedding_iteration_stabilises(seed):
    g0, g = random_acyclic_extension(random.Random(seed), 3)
    i = inclusion(g0, g)
    tr = embedding_inverse(i)
    for k in range(1, len(tr.iterates) - 1):
        assert tr.iterates[k].truncated(k) == tr.iterates[k + 1].truncated(k)
    inside = {g.space.index(x) for x in g0.space.labels()}
    assert all(set(v) <= inside for v in tr.iterates[-1].comps.values())
    assert not check_morphism(tr.result)
    assert compose_morphisms(i, tr.result) == identity_morphism(g0)
    assert all(c.verify() for c in tr.certificates)


def test_embedding_rejects_non_strict():
    g = fix_b(3)
    with pytest.raises(NotAnEmbedding):
        embedding_inverse(gauged_identity(3, g))


def test_embedding_rejects_non_injective():
    g = fix_b(3)
    with pytest.raises(NotAnEmbedding):
        embedding_inverse(zero_morphism(g, g))


def test_embedding_rejects_non_quasi_iso():
    with pytest.raises(NotQuasiIso):
        embedding_inverse(inclusion(fix_a(3), fix_c(3)))


def test_embedding_rejects_bad_contraction():
    i = inclusion(fix_b(3), fix_c(3))
    c = contraction_from_inclusion(i.linear_part(), i.target.differential, i.source.differential)
    broken = replace(c, h=GradedLinearMap.zero(c.ambient, c.ambient, -1))
    with pytest.raises(BadContraction):
        embedding_inverse(i, broken)


# homotopy inverses -------------------------------------------------------------------


def test_homotopy_inverse_of_identity():
    g = fix_b(3)
    G, certs = homotopy_inverse(identity_morphism(g))
    assert G == identity_morphism(g)
    assert all(c.verify() for c in certs)


def test_homotopy_inverse_of_acyclic_identity_is_zero():
    g = fix_a(3)
    G, certs = homotopy_inverse(identity_morphism(g))
    assert not G.comps
    assert all(c.verify() for c in certs)


def test_homotopy_inverse_agrees_with_embedding_inverse():
    i = inclusion(fix_b(3), fix_c(3))
    G, certs = homotopy_inverse(i)
    assert all(c.verify() for c in certs)
    assert find_homotopy(G, embedding_inverse(i).result).verify()


def test_homotopy_inverse_of_strict_iso():
    D = fix_d(3)
    T = random_basis_change(random.Random(2), D.space)
    iso = LInftyMorphism.strict(transport(D, T), D, T)
    G, certs = homotopy_inverse(iso)
    assert not check_morphism(G)
    assert all(c.verify() for c in certs)
    # through the minimal model G_1 inverts T on cohomology only
    D2 = iso.source
    c = cohomology_contraction(D2.space, D2.differential)
    back = cohomology_map(G.linear_part().compose(T), c, c)
    assert back == GradedLinearMap.identity(c.cohomology)


def test_homotopy_inverse_with_l_infinity_source():
    r = transfer(fix_d(3))
    G, certs = homotopy_inverse(r.M)
    assert all(c.verify() for c in certs)


def test_homotopy_inverse_errors():
    r = transfer(fix_d(3))
    with pytest.raises(UnsupportedStructure):
        homotopy_inverse(r.P)
    with pytest.raises(NotQuasiIso):
        homotopy_inverse(inclusion(fix_a(3), fix_c(3)))
    g = fix_b(3)
    bogus = LInftyMorphism.strict(g, g, GradedLinearMap.identity(g.space).scale(2))
    with pytest.raises(InvalidStructure):
        homotopy_inverse(bogus)
