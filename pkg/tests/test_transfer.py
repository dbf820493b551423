import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gaugelie.algebra import check_morphism, compose_morphisms, identity_morphism
from gaugelie.convolution import find_homotopy
from gaugelie.errors import InvalidContraction
from gaugelie.fixtures import FIXTURES, fix_a, fix_b, fix_c, fix_d, random_dg_lie
from gaugelie.graded import GradedLinearMap, cohomology_contraction
from gaugelie.transfer import transfer, tree_transfer


def test_acyclic_transfers_to_zero():
    r = transfer(fix_a(4))
    assert r.transferred.space.dim == 0
    assert not r.transferred.brackets
    assert not r.M.comps and not r.P.comps
    assert r.violations() == []


def test_zero_differential_is_identity():
    g = fix_b(4)
    r = transfer(g)
    assert r.transferred.brackets == g.brackets
    assert r.M.comps == identity_morphism(g).comps
    assert r.P.comps == identity_morphism(g).comps


def test_fix_c_transfers_to_fix_b():
    r = transfer(fix_c(3))
    H = r.transferred
    assert sorted(H.space.labels()) == ["a", "b", "z"]
    assert H.bracket(("z", "a")) == {"b": 1}
    assert r.violations() == []


def test_fix_d_massey_bracket():
    D = fix_d(4)
    r = transfer(D)
    H = r.transferred
    assert sorted(H.space.labels()) == ["a", "b", "w"]
    assert not H.arity(2)
    assert H.bracket(("a", "a", "b")) == {"w": Fraction(-2)}
    assert r.violations() == []


@pytest.mark.parametrize("root", ["p", "h"])
def test_tree_oracle_on_fix_d(root):
    D = fix_d(4)
    r = transfer(D)
    H = r.transferred
    for n in (2, 3, 4):
        for m in H.monomials(n):
            want = H.brackets.get(m, {}) if root == "p" else r.M.comps.get(m, {})
            assert tree_transfer(D, r.contraction, m, root) == want, (n, m)


@given(st.integers(0, 10 ** 6))
def test_random_dg_lie_transfer(seed):
    g = random_dg_lie(random.Random(seed), 3)
    r = transfer(g)
    assert r.violations() == []
    for n in (2, 3):
        for m in r.transferred.monomials(n):
            assert tree_transfer(g, r.contraction, m) == r.transferred.brackets.get(m, {})


def test_m_and_p_are_morphisms_and_split():
    r = transfer(fix_d(3))
    assert not check_morphism(r.M) and not check_morphism(r.P)
    assert r.M.linear_part() == r.contraction.i
    assert r.P.linear_part() == r.contraction.p


def test_contraction_for_another_space_rejected():
    c = cohomology_contraction(fix_a(3).space, fix_a(3).differential)
    with pytest.raises(InvalidContraction):
        transfer(fix_b(3), c)


def test_broken_homotopy_rejected():
    D = fix_d(3)
    c = cohomology_contraction(D.space, D.differential)
    with pytest.raises(InvalidContraction):
        transfer(D, replace(c, h=GradedLinearMap.zero(D.space, D.space, -1)))


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_m_after_p_is_homotopic_to_identity_on_fixtures(name, N):
    g = FIXTURES[name](N)
    r = transfer(g)
    cert = find_homotopy(compose_morphisms(r.P, r.M), identity_morphism(g))
    assert cert.verify()
