import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gaugelie import cylinder
from gaugelie.acceptance import PAIRS, base_morphisms, random_morphism
from gaugelie.algebra import (
    LInftyAlgebra, check_morphism, check_structure, compose_morphisms, identity_morphism,
    zero_algebra,
)
from gaugelie.convolution import Convolution, gauge_action, mc_curvature
from gaugelie.cylinder import build_cylinder, cylinder_morphism, endpoint, evaluate_at, section
from gaugelie.errors import InvalidStructure, MalformedInput, TDegreeTooSmall
from gaugelie.fixtures import FIXTURES, fix_a, fix_b, fix_d
from gaugelie.graded import GradedVectorSpace, cohomology_contraction
from gaugelie.transfer import transfer


def cohomology_dims(g):
    H = cohomology_contraction(g.space, g.differential).cohomology
    return {n: len(H.indices_in_degree(n)) for n in H.degrees()}


def test_cylinder_of_zero():
    C = build_cylinder(zero_algebra(3), 2)
    assert C.space.dim == 0


def test_cylinder_of_line():
    g = LInftyAlgebra.from_exterior(GradedVectorSpace({0: ["x"]}), 3)
    C = build_cylinder(g, 2)
    assert sorted(C.space.labels()) == ["x.t0", "x.t0dt", "x.t1", "x.t1dt", "x.t2"]
    # d(t^j x) = j t^{j-1} dt x
    assert C.algebra.differential.to_labels()["x.t2"] == {"x.t1dt": 2}
    assert cohomology_dims(C.algebra) == {0: 1}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_cylinder_is_quasi_isomorphic(name):
    g = FIXTURES[name](3)
    C = build_cylinder(g, 3)
    assert check_structure(C.algebra) == []
    assert cohomology_dims(C.algebra) == cohomology_dims(g)


def test_decode_labels():
    C = build_cylinder(fix_b(3), 3)
    assert C.decode(C.index("a", 2, 1)) == ("a", 2, 1)
    assert C.t_degree({C.index("z", 3): 1, C.index("b", 1, 1): 1}) == 3


def test_form_sign_in_bracket():
    # [z dt, a] with |z| = 0, |a| = 1: dt ⊗ [z, a], which is -[z, a] dt
    C = build_cylinder(fix_b(3), 3)
    assert C.algebra.bracket(("z.t0dt", "a.t0")) == {"b.t0dt": 1}
    assert C.algebra.bracket(("a.t0", "z.t0dt")) == {"b.t0dt": 1}
    assert C.algebra.bracket(("z.t1", "a.t2")) == {"b.t3": 1}
    assert C.algebra.bracket(("z.t2", "a.t2")) == {}


def test_evaluation_examples():
    C = build_cylinder(fix_b(3), 3)
    p = evaluate_at(C, Fraction(1, 3)).linear_part()
    assert p({C.index("a", 2): 1}) == {fix_b(3).space.index("a"): Fraction(1, 9)}
    assert p({C.index("a", 1, 1): 1}) == {}
    p0 = evaluate_at(C, 0).linear_part()
    assert p0({C.index("z", 1): 1}) == {}
    assert p0({C.index("z", 0): 1}) == {fix_b(3).space.index("z"): 1}


@pytest.mark.parametrize("s", [0, Fraction(1, 3), 1])
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_evaluation_splits_section(name, s):
    C = build_cylinder(FIXTURES[name](3), 3)
    assert compose_morphisms(section(C), evaluate_at(C, s)) == identity_morphism(C.base)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_section_and_p0_are_morphisms(name):
    C = build_cylinder(FIXTURES[name](3), 3)
    assert check_morphism(section(C)) == []
    assert check_morphism(evaluate_at(C, 0)) == []


def test_p_s_multiplicative_inside_window():
    g = fix_b(3)
    C = build_cylinder(g, 3)
    s = Fraction(1, 3)
    p = evaluate_at(C, s).linear_part()
    lab = C.space.label
    for u in range(C.space.dim):
        for v in range(C.space.dim):
            (_, ju, _), (_, jv, _) = C.decode(u), C.decode(v)
            if ju + jv > C.D:
                continue
            lhs = C.algebra.bracket((lab(u), lab(v)))
            lhs = p({C.space.index(k): c for k, c in lhs.items()})
            pu, pv = p({u: 1}), p({v: 1})
            rhs = {}
            for a, x in pu.items():
                for b, y in pv.items():
                    for k, c in g.bracket((g.space.label(a), g.space.label(b))).items():
                        i = g.space.index(k)
                        rhs[i] = rhs.get(i, 0) + x * y * c
            assert lhs == {k: c for k, c in rhs.items() if c}


def test_closed_constants_stay_closed():
    g = fix_a(3)
    C = build_cylinder(g, 2)
    sig = section(C).linear_part()
    y = {g.space.index("y"): 1}
    assert C.algebra.differential(sig(y)) == {}


def test_rejects_l_infinity_base():
    with pytest.raises(InvalidStructure):
        build_cylinder(transfer(fix_d(3)).transferred, 3)


def test_rejects_small_bounds():
    with pytest.raises(MalformedInput):
        build_cylinder(fix_b(3), 0)
    F = identity_morphism(fix_b(3))
    with pytest.raises(TDegreeTooSmall):
        cylinder_morphism(F, Convolution(F.source, F.target).zero(0), 2)


# paths ---------------------------------------------------------------------------


def test_zero_gauge_gives_constant_path():
    F = identity_morphism(fix_b(3))
    C, U = cylinder_morphism(F, Convolution(F.source, F.target).zero(0), 3)
    assert all(C.decode(a)[1:] == (0, 0) for v in U.comps.values() for a in v)
    for s in (0, Fraction(1, 2), 1):
        assert endpoint(C, U, s) == F


def test_abelian_target_gives_linear_path():
    F = base_morphisms("FIX-A", "FIX-A", 3)[1]
    H = Convolution(F.source, F.target).random_element(random.Random(1), 0)
    C, U = cylinder_morphism(F, H, 3)
    assert max(C.t_degree(v) for v in U.comps.values()) <= 1
    assert not mc_curvature(U)
    assert endpoint(C, U, 1) == gauge_action(F, H)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15)
def test_random_paths(seed):
    rng = random.Random(seed)
    s, t = PAIRS[seed % len(PAIRS)]
    U0 = random_morphism(rng, s, t, 3)
    H = Convolution(U0.source, U0.target).random_element(rng, 0)
    C, U = cylinder_morphism(U0, H, 3)
    assert not mc_curvature(U)
    assert endpoint(C, U, 0) == U0
    assert endpoint(C, U, 1) == gauge_action(U0, H)


def test_wrong_form_sign_breaks_the_path(monkeypatch):
    U0 = base_morphisms("FIX-B", "FIX-B", 3)[1]
    H = Convolution(U0.source, U0.target).random_element(random.Random(4), 0)
    assert not mc_curvature(cylinder_morphism(U0, H, 3)[1])
    monkeypatch.setattr(cylinder, "OMEGA_SIGN", 1)
    assert mc_curvature(cylinder_morphism(U0, H, 3)[1])
