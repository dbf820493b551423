import random
from dataclasses import replace
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from gaugelie import linalg
from gaugelie.acceptance import PAIRS, random_morphism
from gaugelie.algebra import LInftyAlgebra, LInftyMorphism, identity_morphism, zero_algebra
from gaugelie.errors import InvalidCoalgebra, TruncationMismatch, UnsupportedStructure
from gaugelie.fixtures import FIXTURES, fix_a, fix_b, fix_d
from gaugelie.freelie import FreeLieAlgebra, lyndon_words, standard_tree
from gaugelie.graded import GradedLinearMap, GradedVectorSpace, cohomology_contraction
from gaugelie.quillen import (
    UNIT, CoalgebraLie, adjunction_maps, counit_lie, functor_C, functor_L, hom_set_bijection,
    _y_bracket, lie_map_is_chain, q_backward, q_forward, trivial_coalgebra,
)
from gaugelie.transfer import transfer


def mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def necklace(k, n):
    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


# free Lie algebras -------------------------------------------------------------------


@pytest.mark.parametrize("k,n", [(1, 4), (2, 6), (3, 4)])
def test_lyndon_counts(k, n):
    words = lyndon_words(k, n)
    for length in range(1, n + 1):
        assert sum(len(w) == length for w in words) == necklace(k, length)


def test_standard_bracketing():
    assert standard_tree((0, 1)) == (0, 1)
    assert standard_tree((0, 0, 1)) == (0, (0, 1))
    assert standard_tree((0, 1, 1)) == ((0, 1), 1)


def free(degrees, N):
    return FreeLieAlgebra(GradedVectorSpace([(f"x{k}", d) for k, d in enumerate(degrees)]), N)


def spanned_dims(L):
    # independent count: left-normed brackets span the free Lie algebra
    out = {}
    n_gens = L.generators.dim
    for n in range(1, L.N + 1):
        rows, index = [], {}
        for word in product(range(n_gens), repeat=n):
            u = {(word[-1],): Fraction(1)}
            for g in reversed(word[:-1]):
                u = L.bracket({(g,): Fraction(1)}, u)
            rows.append({index.setdefault(w, len(index)): c for w, c in u.items()})
        r = linalg.rank(rows)
        if r:
            out[n] = r
    return out


def test_one_generator():
    assert free([0], 4).dims() == {1: 1}
    odd = free([1], 4)
    assert odd.dims() == {1: 1, 2: 1}
    assert odd.space.labels() == ["x0", "[x0,x0]"]


@given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(2, 4))
@settings(max_examples=20)
def test_basis_size_matches_spanning_set(degrees, N):
    L = free(degrees, N)
    assert L.dims() == spanned_dims(L)


def test_even_dims_are_witt_numbers():
    assert free([0, 0], 5).dims() == {n: necklace(2, n) for n in range(1, 6)}


def degree(L, u):
    return L.word_degree(next(iter(u)))


@pytest.mark.parametrize("degrees", list(product([0, 1], repeat=3)) + [(0, 1, 2)])
def test_graded_antisymmetry_and_jacobi_exhaustive(degrees):
    # every pair and every triple of basis brackets of total length ≤ 4
    L = free(list(degrees), 4)
    basis = [(ten, degree(L, ten), n) for n in range(1, 5) for _, _, ten in L.basis_of_length(n)]
    for x, dx, nx in basis:
        for y, dy, ny in basis:
            if nx + ny > L.N:
                continue
            s = -1 if dx * dy % 2 else 1
            assert L.bracket(x, y) == {w: -s * c for w, c in L.bracket(y, x).items()}
            for z, dz, nz in basis:
                if nx + ny + nz > L.N:
                    continue
                total = {}
                for (a, da), (b, _), (c, dc) in (((x, dx), (y, dy), (z, dz)),
                                                 ((y, dy), (z, dz), (x, dx)),
                                                 ((z, dz), (x, dx), (y, dy))):
                    sign = -1 if da * dc % 2 else 1
                    for w, v in L.bracket(a, L.bracket(b, c)).items():
                        total[w] = total.get(w, 0) + sign * v
                assert not any(total.values())


def test_coordinates_round_trip():
    L = free([0, 1], 3)
    for lab, _, ten in L.basis:
        assert L.coordinates(ten) == {lab: 1}
    with pytest.raises(ValueError):
        L.coordinates({(0, 1): Fraction(1)})


# the functor C ----------------------------------------------------------------------


def test_c_of_zero_is_trivial():
    X = functor_C(zero_algebra(2))
    assert X.space.labels() == [UNIT]
    assert X.violations() == []


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_c_is_a_dg_coalgebra(name, N):
    assert functor_C(FIXTURES[name](N)).violations() == []


def test_c_of_l_infinity_algebra():
    assert functor_C(transfer(fix_d(3)).transferred).violations() == []


def test_weight_one_is_the_shift():
    Y = fix_b(3)
    X = functor_C(Y)
    ones = [i for i in X.generators if X.weight[i] == 1]
    assert [X.space.label(i) for i in ones] == Y.space.labels()
    assert [X.space.degree(i) for i in ones] == [Y.space.degree(k) - 1 for k in range(Y.space.dim)]


def test_c_of_acyclic_is_trivial_in_cohomology():
    X = functor_C(fix_a(3))
    H = cohomology_contraction(X.space, X.differential).cohomology
    assert H.labels() == [UNIT]


def test_broken_coalgebra_rejected():
    X = functor_C(fix_b(2))
    i = X.space.index("z·a")
    reduced = dict(X.reduced)
    reduced[i] = {k: 2 * c if k[0] < k[1] else c for k, c in reduced[i].items()}
    bad = replace(X, reduced=reduced)
    assert any("cocommutative" in v for v in bad.violations())
    with pytest.raises(InvalidCoalgebra):
        CoalgebraLie(bad)


# the functor L and the adjunction ----------------------------------------------------


def test_l_of_trivial_is_zero():
    L = functor_L(trivial_coalgebra(3))
    assert L.generators.dim == 0 and L.basis == []


def test_l_differential_of_c_fix_b():
    X = functor_C(fix_b(2))
    L = functor_L(X)
    k = L.gen_index[X.space.index("z·a")]
    dk = L.d({(k,): Fraction(1)})
    b = L.gen_index[X.space.index("b")]
    z, a = L.gen_index[X.space.index("z")], L.gen_index[X.space.index("a")]
    assert dk.get((b,))
    assert dk.get((z, a)) or dk.get((a, z))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_l_differential_squares_to_zero(name):
    L = functor_L(functor_C(FIXTURES[name](2)))
    for lab, _, ten in L.basis:
        assert L.d(L.d(ten)) == {}, lab


def test_counit_for_a_line():
    Y = LInftyAlgebra.from_exterior(GradedVectorSpace({0: ["x"]}), 2)
    L, values = counit_lie(Y)
    assert values == {L.gen_index[functor_C(Y).space.index("x")]: {0: 1}}
    assert lie_map_is_chain(L, values, Y)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_counit_is_a_dg_lie_map(name):
    Y = FIXTURES[name](2)
    L, values = counit_lie(Y)
    assert lie_map_is_chain(L, values, Y)


def test_counit_needs_dg_lie():
    with pytest.raises(UnsupportedStructure):
        counit_lie(transfer(fix_d(3)).transferred)


def test_adjunction_unit_on_weight_two():
    X = functor_C(fix_b(2))
    unit, _ = adjunction_maps(X, fix_b(2))
    assert unit(X.unit) == {(): 1}
    img = unit(X.space.index("z·a"))
    assert img[("z·a",)] == 1
    assert set(img) == {("z·a",), ("a", "z")}
    with pytest.raises(TruncationMismatch):
        adjunction_maps(X, fix_b(3))


def test_naturality_of_the_counit():
    Y = fix_b(2)
    phi = GradedLinearMap.from_labels(Y.space, Y.space, 0, {"z": {"z": 1}, "a": {"a": 3}, "b": {"b": 3}})
    M = LInftyMorphism.strict(Y, Y, phi)
    Q = q_forward(M)
    L, eps = counit_lie(Y)
    br = _y_bracket(Y)
    for k in range(L.generators.dim):
        lhs = L.evaluate(Q({(k,): Fraction(1)}), eps, br)
        assert lhs == phi(eps.get(k, {}))


def test_hom_set_of_trivial_coalgebra_is_a_point():
    assert hom_set_bijection(trivial_coalgebra(2), fix_b(2)) == (1, 1, [])


def test_hom_set_bijection_exhaustive():
    tried, good, bad = hom_set_bijection(functor_C(fix_a(2)), fix_b(2))
    assert bad == [] and tried > 1 and 1 <= good < tried


# the Q correspondence ---------------------------------------------------------------


def test_q_of_identity_is_identity():
    g = fix_b(3)
    Q = q_forward(identity_morphism(g))
    assert Q.values == {k: {(k,): 1} for k in range(Q.source.generators.dim)}
    assert Q.is_chain_map() and Q.is_injective()


def test_q_round_trip_for_strict_map():
    Y = fix_b(3)
    phi = GradedLinearMap.from_labels(Y.space, Y.space, 0, {"z": {"z": 1}, "a": {"a": 2}, "b": {"b": 2}})
    M = LInftyMorphism.strict(Y, Y, phi)
    assert q_backward(q_forward(M), Y, Y) == M


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10)
def test_q_round_trip_random(seed):
    rng = random.Random(seed)
    s, t = PAIRS[seed % len(PAIRS)]
    M = random_morphism(rng, s, t, 3)
    Q = q_forward(M)
    assert Q.is_chain_map()
    assert q_backward(Q, M.source, M.target) == M
