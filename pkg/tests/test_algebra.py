import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gaugelie.acceptance import random_morphism
from gaugelie.algebra import (
    LInftyAlgebra, LInftyMorphism, chain_coalgebra, check_morphism, check_structure,
    coalgebra_map_injective, compose_morphisms, decalage_sign, exterior_basis,
    identity_morphism, induced_coalgebra_map, jacobi_violations, zero_algebra, zero_morphism,
)
from gaugelie.errors import InvalidStructure, MalformedInput, ShapeMismatch, TruncationMismatch
from gaugelie.fixtures import FIXTURES, fix_a, fix_b, fix_d, random_dg_lie
from gaugelie.graded import GradedLinearMap, GradedVectorSpace
from gaugelie.symmetric import vec_product


def test_exterior_basis_examples():
    assert exterior_basis(fix_a().space, 2) == [("x", "y"), ("y", "y")]
    assert exterior_basis(fix_a().space, 1) == [("x",), ("y",)]
    got = set(exterior_basis(fix_b().space, 2))
    assert got == {("z", "a"), ("z", "b"), ("a", "a"), ("a", "b"), ("b", "b")}


@given(st.lists(st.integers(-2, 3), min_size=1, max_size=4), st.integers(1, 4))
def test_exterior_basis_count(degrees, k):
    # dim S^k(V[1]) = Σ_j C(even, k-j) · C(odd, j) with repetition only for even shifted degree
    from math import comb

    space = GradedVectorSpace([(f"e{n}", d) for n, d in enumerate(degrees)])
    sym = sum(1 for d in degrees if (d - 1) % 2 == 0)
    ext = len(degrees) - sym
    def multichoose(n, r):
        return 1 if r == 0 else comb(n + r - 1, r)

    want = sum(multichoose(sym, k - j) * comb(ext, j) for j in range(0, k + 1))
    assert len(exterior_basis(space, k)) == want


def test_decalage_sign_small_cases():
    assert decalage_sign([0]) == 1
    assert decalage_sign([1, 1]) in (1, -1)
    # the sign is determined by the parities only
    assert decalage_sign([3, 2, 5]) == decalage_sign([1, 0, 1])


def test_fixtures_valid(fixture_name):
    g = FIXTURES[fixture_name](3)
    assert check_structure(g) == []
    assert jacobi_violations(g) == []


def test_degree_violation_is_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        LInftyAlgebra.from_exterior(GradedVectorSpace({0: ["z"], 1: ["a", "b"]}), 3,
                                    brackets=[(("z", "a"), {"z": 1})])


def test_antisymmetry_violation_is_malformed():
    with pytest.raises(MalformedInput):
        LInftyAlgebra.from_exterior(GradedVectorSpace({0: ["z"]}), 3, brackets=[(("z", "z"), {"z": 1})])


@given(st.lists(st.integers(-1, 1), min_size=9, max_size=9))
def test_structure_check_agrees_with_brute_jacobi(consts):
    # arbitrary antisymmetric brackets on three degree-0 vectors
    labels = ["p", "q", "r"]
    space = GradedVectorSpace({0: labels})
    brackets = []
    for n, (x, y) in enumerate([("p", "q"), ("p", "r"), ("q", "r")]):
        val = {z: consts[3 * n + k] for k, z in enumerate(labels)}
        brackets += [((x, y), val), ((y, x), {z: -c for z, c in val.items()})]
    g = LInftyAlgebra.from_exterior(space, 3, brackets=brackets)
    assert bool(check_structure(g)) == bool(jacobi_violations(g))


@given(st.integers(0, 10**6))
def test_random_dg_lie_are_valid(seed):
    g = random_dg_lie(random.Random(seed), N=3)
    assert check_structure(g) == [] and jacobi_violations(g) == []


def test_exterior_round_trip(fixture_name):
    g = FIXTURES[fixture_name](3)
    differential = {lab[0]: v for lab, v in g.to_exterior() if len(lab) == 1}
    brackets = [(lab, v) for lab, v in g.to_exterior() if len(lab) > 1]
    h = LInftyAlgebra.from_exterior(g.space, 3, differential=differential, brackets=brackets)
    assert h.brackets == g.brackets


def test_fix_b_bracket_in_exterior_form():
    assert fix_b(3).bracket(("z", "a")) == {"b": 1}


def test_chain_coalgebra_of_fix_a():
    C = chain_coalgebra(fix_a(3))
    g = C.base
    x, y = g.space.index("x"), g.space.index("y")
    cop = C.coproduct((x, y))
    assert set(cop) == {((x,), (y,)), ((y,), (x,))}
    assert all(abs(v) == 1 for v in cop.values())
    # x has odd shifted degree, y even: the two tensor orders carry equal signs
    assert cop[((x,), (y,))] == cop[((y,), (x,))]


def test_chain_coalgebra_abelian_has_no_differential():
    g = LInftyAlgebra(GradedVectorSpace({0: ["p"], 1: ["q"]}), 3)
    C = chain_coalgebra(g)
    for k in range(1, 4):
        assert all(not v for v in C.differential_matrix(k).values())


def test_chain_coalgebra_differential_of_fix_b():
    g = fix_b(3)
    z, a, b = (g.space.index(s) for s in "zab")
    D = chain_coalgebra(g).differential((z, a))
    assert set(D) == {(b,)} and abs(D[(b,)]) == 1


def test_chain_coalgebra_rejects_invalid():
    V = GradedVectorSpace({0: ["u"], 1: ["v"], 2: ["w"]})
    bad = LInftyAlgebra.from_exterior(V, 2, differential={"u": {"v": 1}, "v": {"w": 1}})
    with pytest.raises(InvalidStructure):
        chain_coalgebra(bad)


def test_compose_with_identity(fixture_name):
    rng = random.Random(7)
    F = random_morphism(rng, "FIX-B", fixture_name, 3)
    assert compose_morphisms(F, identity_morphism(F.target)) == F
    assert compose_morphisms(identity_morphism(F.source), F) == F


def test_compose_strict():
    g = fix_b(3)
    f = GradedLinearMap.from_labels(g.space, g.space, 0, {"z": {"z": 2}, "a": {"a": 3}, "b": {"b": 6}})
    F = LInftyMorphism.strict(g, g, f)
    FF = compose_morphisms(F, F)
    assert FF.is_strict() and FF.linear_part() == f.compose(f)
    assert check_morphism(FF) == []


def test_compose_arity_two_formula():
    # abelian algebras with d = 0: every collection of maps is a morphism
    V = GradedVectorSpace({0: ["p"], 1: ["q"]})
    g = LInftyAlgebra(V, 2)
    rng = random.Random(3)

    def rand():
        comps = {}
        for m in g.basis_upto(2):
            for i in range(2):
                if g.sdeg[i] == g.mono_degree(m) and rng.random() < 0.8:
                    comps.setdefault(m, {})[i] = Fraction(rng.randint(-3, 3))
        return LInftyMorphism(g, g, comps)

    F, G = rand(), rand()
    GF = compose_morphisms(F, G)
    for m in g.monomials(2):
        want = {}
        for i, c in F.comps.get(m, {}).items():
            for j, e in G.comps.get((i,), {}).items():
                want[j] = want.get(j, 0) + c * e
        prod = vec_product([F.comps.get((m[0],), {}), F.comps.get((m[1],), {})], g.par)
        for mm, c in prod.items():
            for j, e in G.comps.get(mm, {}).items():
                want[j] = want.get(j, 0) + c * e
        assert GF.comps.get(m, {}) == {j: v for j, v in want.items() if v}


def test_compose_is_associative():
    rng = random.Random(11)
    names = sorted(FIXTURES)
    for _ in range(6):
        a, b, c, d = (rng.choice(names) for _ in range(4))
        F, G, H = (random_morphism(rng, s, t, 3) for s, t in ((a, b), (b, c), (c, d)))
        left = compose_morphisms(compose_morphisms(F, G), H)
        right = compose_morphisms(F, compose_morphisms(G, H))
        assert left == right
        assert check_morphism(left) == []


def test_compose_rejects_mismatches():
    with pytest.raises(TruncationMismatch):
        compose_morphisms(identity_morphism(fix_b(3)), identity_morphism(fix_b(4)))
    with pytest.raises(ShapeMismatch):
        compose_morphisms(identity_morphism(fix_b(3)), identity_morphism(fix_a(3)))


def test_check_morphism_examples():
    assert check_morphism(identity_morphism(fix_b(3))) == []
    g = fix_a(3)
    assert check_morphism(zero_morphism(g, zero_algebra(3))) == []
    # F_1 = projection onto x does not commute with d
    f = GradedLinearMap.from_labels(g.space, g.space, 0, {"x": {"x": 1}})
    assert check_morphism(LInftyMorphism.strict(g, g, f)) == [("x",)]


def test_induced_map_of_strict_is_diagonal():
    g = fix_d(3)
    F = identity_morphism(g)
    blocks = induced_coalgebra_map(F)
    for k, block in blocks.items():
        for m, img in block.items():
            assert img == {m: 1}


def test_induced_map_of_zero_morphism():
    V = GradedVectorSpace({0: ["p"], 1: ["q"]})
    g = LInftyAlgebra(V, 3)
    blocks = induced_coalgebra_map(zero_morphism(g, g))
    assert all(not img for block in blocks.values() for img in block.values())


@given(st.integers(0, 10**6))
def test_injective_first_component_gives_injective_coalgebra_map(seed):
    rng = random.Random(seed)
    s = rng.choice(["FIX-B", "FIX-A"])
    F = random_morphism(rng, s, "FIX-C", 3)
    if F.linear_part().is_injective():
        assert all(coalgebra_map_injective(F).values())
