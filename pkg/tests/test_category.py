import random

import numpy as np
import pytest
from hypothesis import given

from cobalg.category import (
    AInfCategory,
    check_a_infinity,
    check_functor,
    check_homology_associative,
    check_homotopic,
    check_natural_transformation,
    compose_pre_natural,
    dg_category,
    functor_mu1,
    homology_category,
    is_strictly_unital,
    matrix_to_hom_vector,
)
from cobalg.chain import ChainComplex, induced_on_homology
from cobalg.cobordism import (
    snake_category,
    snake_homotopy_transformation,
    snake_projection_functor,
)
from cobalg.errors import ObjectActionMismatch
from cobalg.f2 import BitMatrix, inverse, vec_from_array
from cobalg.generators import flip_entry, random_complex, random_dg_category, random_invertible, rng
from cobalg.multilinear import ExtendedMap, PreNaturalTransformation

import oracles
from strategies import seeds


def idempotent_algebra(mu1=False):
    comps = {("x", "x", "x"): np.ones((1, 1, 1), dtype=np.uint8)}
    if mu1:
        comps[("x", "x")] = np.ones((1, 1), dtype=np.uint8)
    return AInfCategory("E", ("x",), {("x", "x"): 1}, comps)


def conjugation_functor(c: ChainComplex, p: BitMatrix):
    """F(f) = p f p^-1 between End(c) and End(p c p^-1)."""
    pi = inverse(p)
    c2 = ChainComplex(c.dim, p @ c.d @ pi)
    A, B = dg_category("A", {"X": c}), dg_category("B", {"X": c2})
    n = c.dim
    table = np.zeros((n * n, n * n), dtype=np.uint8)
    for r in range(n):
        for s in range(n):
            e = BitMatrix.from_columns([(1 << r) if j == s else 0 for j in range(n)], n)
            table[r * n + s] = matrix_to_hom_vector(p @ e @ pi)
    F = ExtendedMap(A.hom, B.hom, {"X": "X"}, {("X", "X"): table})
    return A, B, F


# the A∞ relation


def test_dg_category_passes():
    A = dg_category("Ch", {"X": ChainComplex.from_images([0, 1]), "Y": ChainComplex.trivial(1)})
    assert check_a_infinity(A).passed


def test_idempotent_algebra_passes():
    assert check_a_infinity(idempotent_algebra()).passed


def test_nonzero_mu1_square_fails():
    rep = check_a_infinity(idempotent_algebra(mu1=True))
    assert not rep.passed
    assert any("mu*mu" in f for f in rep.findings)


def test_report_records_cap():
    rep = check_a_infinity(idempotent_algebra())
    assert any("arity cap 4" in n for n in rep.notes)


@given(seeds)
def test_random_dg_categories_pass(seed):
    A = random_dg_category(rng(seed), n_objects=2)
    assert check_a_infinity(A).passed
    for x in A.objects:
        for y in A.objects:
            assert (A.mu1(x, y) @ A.mu1(x, y)).is_zero()


@given(seeds)
def test_checker_agrees_with_oracle_on_flips(seed):
    r = rng(seed)
    B = flip_entry(r, random_dg_category(r, n_objects=2))
    assert check_a_infinity(B).passed == oracles.ainf_valid(B)


# functors


def test_identity_functor():
    A = random_dg_category(rng(1))
    assert check_functor(ExtendedMap.identity(A.hom), A, A).passed


def test_conjugation_is_functor():
    r = rng(2)
    c = random_complex(r, 3)
    A, B, F = conjugation_functor(c, random_invertible(r, 3))
    assert check_functor(F, A, B).passed


def test_non_multiplicative_linear_map_fails():
    c = ChainComplex.trivial(2)
    A = dg_category("A", {"X": c})
    # transpose is a chain map on End(c) (d = 0) but reverses products
    table = np.zeros((4, 4), dtype=np.uint8)
    for r_ in range(2):
        for s in range(2):
            table[r_ * 2 + s, s * 2 + r_] = 1
    F = ExtendedMap(A.hom, A.hom, {"X": "X"}, {("X", "X"): table})
    assert not check_functor(F, A, A).passed


# natural transformations and homotopies


def test_zero_transformation_is_natural():
    A = random_dg_category(rng(3))
    ident = ExtendedMap.identity(A.hom)
    assert check_natural_transformation(PreNaturalTransformation.zero(ident, ident), A, A).passed


def test_difference_of_functors_is_natural():
    r = rng(4)
    c = random_complex(r, 2)
    A, _, F = conjugation_functor(c, BitMatrix.identity(2))
    # an automorphism of c commuting with d gives a second functor End(c) -> End(c)
    for _ in range(50):
        p = random_invertible(r, 2)
        if p @ c.d == c.d @ p:
            break
    _, _, G = conjugation_functor(c, p)
    G = ExtendedMap(A.hom, A.hom, G.index_map, G.components)
    assert check_functor(G, A, A).passed
    D = PreNaturalTransformation.difference(F, G)
    assert check_natural_transformation(D, A, A).passed


def test_non_cycle_t0_fails():
    A = dg_category("A", {"X": ChainComplex.from_images([0, 1])})
    ident = ExtendedMap.identity(A.hom)
    t0 = np.zeros(4, dtype=np.uint8)
    t0[0] = 1  # E_00 is not a cycle of End(c)
    T = PreNaturalTransformation(ident, ident, {"X": t0}, {})
    assert not check_natural_transformation(T, A, A).passed


def test_compose_with_zero():
    A = random_dg_category(rng(5))
    ident = ExtendedMap.identity(A.hom)
    Z = PreNaturalTransformation.zero(ident, ident)
    out = compose_pre_natural(Z, Z, A)
    assert not out.T0 and not out.Tprime


def test_compose_degree_zero_parts_is_pointwise_mu2():
    c = ChainComplex.trivial(2)
    A = dg_category("A", {"X": c})
    ident = ExtendedMap.identity(A.hom)
    r = np.random.default_rng(6)
    s0, t0 = r.integers(0, 2, 4), r.integers(0, 2, 4)
    S = PreNaturalTransformation(ident, ident, {"X": s0}, {})
    T = PreNaturalTransformation(ident, ident, {"X": t0}, {})
    out = compose_pre_natural(S, T, A)
    want = A.mu.evaluate(("X", "X", "X"), [t0, s0])
    assert np.array_equal(out.T0.get("X", np.zeros(4, dtype=np.uint8)), want)


def test_composite_of_natural_is_natural():
    A = random_dg_category(rng(7), n_objects=2, twist=False)
    ident = ExtendedMap.identity(A.hom)
    # identity matrices: a natural transformation id -> id
    t0 = {}
    for x in A.objects:
        n = int(round(A.dim(x, x) ** 0.5))
        t0[x] = matrix_to_hom_vector(BitMatrix.identity(n))
    E = PreNaturalTransformation(ident, ident, t0, {})
    assert check_natural_transformation(E, A, A).passed
    assert check_natural_transformation(compose_pre_natural(E, E, A), A, A).passed


def test_homotopic_same_functor():
    A = random_dg_category(rng(8))
    ident = ExtendedMap.identity(A.hom)
    assert check_homotopic(ident, ident, PreNaturalTransformation.zero(ident, ident), A, A)


def test_snake_projections_homotopic():
    A = random_dg_category(rng(9), n_objects=2)
    B = snake_category(A, 3)
    c1, c3 = snake_projection_functor(A, B, 3, 1), snake_projection_functor(A, B, 3, 3)
    T = snake_homotopy_transformation(A, B, c1, c3, 3)
    assert check_homotopic(c1, c3, T, B, A)
    # homotopic functors agree on homology
    for x in A.objects:
        for y in A.objects:
            f1 = _hom_map(B, A, c1, x, y)
            f3 = _hom_map(B, A, c3, x, y)
            assert induced_on_homology(f1) == induced_on_homology(f3)


def _hom_map(A, B, F, x, y):
    from cobalg.chain import ChainMap

    arr = F.component((x, y))
    return ChainMap(A.hom_complex(x, y), B.hom_complex(F.index_map[x], F.index_map[y]), BitMatrix.from_array(arr.T))


def test_functors_different_on_homology_not_homotopic():
    c = ChainComplex.trivial(1)
    A = dg_category("A", {"X": c})
    ident = ExtendedMap.identity(A.hom)
    zero = ExtendedMap.zero(A.hom, A.hom)
    r = random.Random(10)
    for _ in range(5):
        tp = {("X", "X"): np.array([[r.randint(0, 1)]], dtype=np.uint8)}
        T = PreNaturalTransformation(ident, zero, {}, tp)
        assert not check_homotopic(ident, zero, T, A, A)


def test_homotopy_rejects_different_object_action():
    A = dg_category("A", {"X": ChainComplex.trivial(1), "Y": ChainComplex.trivial(1)})
    ident = ExtendedMap.identity(A.hom)
    swap = ExtendedMap(A.hom, A.hom, {"X": "Y", "Y": "X"}, {})
    with pytest.raises(ObjectActionMismatch):
        check_homotopic(ident, swap, PreNaturalTransformation.zero(ident, ident), A, A)


def test_functor_mu1_squares_to_zero():
    A = random_dg_category(rng(11), n_objects=2)
    ident = ExtendedMap.identity(A.hom)
    r = np.random.default_rng(11)
    t0 = {x: r.integers(0, 2, A.dim(x, x)) for x in A.objects if A.dim(x, x)}
    tp = {(x, y): r.integers(0, 2, (A.dim(x, y), A.dim(x, y))) for x in A.objects for y in A.objects if A.dim(x, y)}
    T = PreNaturalTransformation(ident, ident, t0, tp)
    twice = functor_mu1(functor_mu1(T, A, A), A, A)
    assert not twice.T0 and not twice.Tprime


# homology category


def test_acyclic_homs_have_zero_homology():
    p = ChainComplex.from_images([0, 1])
    hc = homology_category(dg_category("A", {"X": p, "Y": p}))
    assert all(h.rank == 0 for h in hc.homology.values())


def test_idempotent_unit():
    hc = homology_category(idempotent_algebra())
    assert hc.homology[("x", "x")].rank == 1
    assert hc.units["x"] == 1


@given(seeds)
def test_dg_categories_are_unital_and_associative(seed):
    A = random_dg_category(rng(seed), n_objects=2)
    hc = homology_category(A)
    for x in A.objects:
        if hc.homology[(x, x)].rank:
            assert hc.units[x] is not None
    assert check_homology_associative(hc, A.objects)


def test_strict_unit_recognised():
    A = dg_category("A", {"X": random_complex(rng(12), 2)})
    eye = vec_from_array(matrix_to_hom_vector(BitMatrix.identity(2)))
    assert is_strictly_unital(A, {"X": eye})
    assert not is_strictly_unital(A, {"X": 1})
