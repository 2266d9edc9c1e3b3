import itertools
import time

import pytest
from hypothesis import given, settings

from cobalg.chain import ChainComplex, ChainMap, induced_on_homology, is_quasi_iso
from cobalg.cones import (
    ConeDecomposition,
    MorseIndexProfile,
    TSMorphism,
    TSTriple,
    Triangle,
    all_profiles,
    check_cone_decomposition,
    check_equivalence,
    check_ts_equivalent,
    classify_nonconstant,
    compose_ts,
    constant_index_zero,
    fredholm_index,
    identity_ts,
    lift_iso,
    predicted_index,
    project_ts,
    strict_decomposition,
    strictify,
    sum_ts,
    trivial_decomposition,
)
from cobalg.errors import LengthMismatch, NoHomotopyInverse, TupleMismatch
from cobalg.f2 import BitMatrix, inverse
from cobalg.generators import (
    random_complex,
    random_composable_chain,
    random_invertible,
    random_strict_decomposition,
    random_triple,
    rng,
)

from strategies import seeds

PAIR = ChainComplex.from_images([0, 1])
ONE = ChainComplex.trivial(1)


def permuted(eta: ConeDecomposition, p: BitMatrix) -> ConeDecomposition:
    """Same decomposition with the last stage written in a new basis."""
    *head, last = eta.triangles
    pi = inverse(p)
    Z = ChainComplex(last.Z.dim, p @ last.Z.d @ pi)
    v = ChainMap(last.Y, Z, p @ last.v.f)
    w = ChainMap(Z, last.X, last.w.f @ pi)
    t = ChainMap(Z, last.t.target, last.t.f @ pi)
    return ConeDecomposition(tuple(head) + (Triangle(last.u, v, w, t),))


# decompositions


def test_trivial_decomposition():
    a = random_complex(rng(1), 3)
    eta = trivial_decomposition(a)
    assert check_cone_decomposition(eta).passed
    assert eta.linearization == (a,)
    assert eta.total == a


def test_length_two_cone():
    x1, x2 = ONE, ChainComplex.trivial(1)
    # A = Cone(f: X2 -> X1): first stage X1, then attach X2 along f
    eta = strict_decomposition([x1, x2], [BitMatrix.zeros(0, 1), BitMatrix.identity(1)])
    assert check_cone_decomposition(eta).passed
    assert eta.linearization == (x1, x2)
    assert eta.total.homology.rank == 0


def test_nonzero_first_stage_fails():
    u = ChainMap(ONE, ONE, BitMatrix.identity(1))
    c = ChainComplex(2, BitMatrix.from_rows(["00", "10"]))
    inc = ChainMap(ONE, c, BitMatrix.from_rows(["0", "1"]))
    proj = ChainMap(c, ONE, BitMatrix.from_rows(["10"]))
    eta = ConeDecomposition((Triangle(u, inc, proj, c.identity()),))
    rep = check_cone_decomposition(eta)
    assert not rep.passed and "Y_1" in rep.findings[0]


def test_broken_chain_fails():
    a = strict_decomposition([ONE], [BitMatrix.zeros(0, 1)])
    b = strict_decomposition([PAIR, ONE], [BitMatrix.zeros(0, 2), BitMatrix.zeros(2, 1)])
    eta = ConeDecomposition((a.triangles[0], b.triangles[1]))
    assert not check_cone_decomposition(eta).passed


def test_missing_witness_fails():
    eta = trivial_decomposition(ONE)
    tri = eta.triangles[0]
    assert not check_cone_decomposition(ConeDecomposition((Triangle(tri.u, tri.v, tri.w),))).passed


@given(seeds)
def test_strictify_gives_quasi_iso(seed):
    r = rng(seed)
    pieces = [random_complex(r, r.randint(1, 2)) for _ in range(3)]
    eta = permuted(random_strict_decomposition(r, pieces), random_invertible(r, sum(p.dim for p in pieces)))
    assert check_cone_decomposition(eta).passed
    strict, J = strictify(eta)
    assert strict.is_strict() and strict.linearization == eta.linearization
    assert is_quasi_iso(J)


# equivalence


@given(seeds)
def test_equivalent_to_itself(seed):
    r = rng(seed)
    eta = random_strict_decomposition(r, [random_complex(r, 2) for _ in range(2)])
    ids = [eta.stage(i).identity() for i in range(eta.length + 1)]
    assert check_equivalence(eta, eta, ids)


def test_mismatched_linearization():
    a = trivial_decomposition(ONE)
    b = trivial_decomposition(PAIR)
    assert not check_equivalence(a, b, [ChainComplex.zero().identity(), ChainMap(ONE, PAIR, BitMatrix.zeros(2, 1))])


def test_length_mismatch():
    a = trivial_decomposition(ONE)
    b = strict_decomposition([ONE, ONE], [BitMatrix.zeros(0, 1), BitMatrix.zeros(1, 1)])
    with pytest.raises(LengthMismatch):
        check_equivalence(a, b, [])


@given(seeds)
def test_permuted_decomposition_equivalent(seed):
    r = rng(seed)
    pieces = [random_complex(r, r.randint(1, 2)) for _ in range(2)]
    eta = random_strict_decomposition(r, pieces)
    n = eta.total.dim
    perm = list(range(n))
    r.shuffle(perm)
    p = BitMatrix.from_columns([1 << perm[j] for j in range(n)], n)
    eta2 = permuted(eta, p)
    ids = [eta.stage(i).identity() for i in range(eta.length)]
    assert check_equivalence(eta, eta2, ids + [ChainMap(eta.total, eta2.total, p)])
    assert eta2.linearization == eta.linearization


# T^S morphisms


def test_tuple_mismatch():
    t = TSTriple(ONE.identity(), trivial_decomposition(ONE))
    with pytest.raises(TupleMismatch):
        TSMorphism((ONE,), (PAIR,), (t,))
    with pytest.raises(TupleMismatch):
        compose_ts(identity_ts([ONE]), identity_ts([PAIR]))


@given(seeds)
def test_unit_laws_exact(seed):
    (Phi,) = random_composable_chain(rng(seed), 1)
    assert compose_ts(identity_ts(Phi.target), Phi) == Phi
    assert compose_ts(Phi, identity_ts(Phi.source)) == Phi


def test_length_one_then_length_two():
    r = rng(3)
    zs = [random_complex(r, 2), random_complex(r, 1)]
    outer = random_triple(r, zs)
    y = outer.source
    inner = random_triple(r, [y])
    Phi = TSMorphism((y,), tuple(zs), (outer,))
    Phi_p = TSMorphism((inner.source,), (y,), (inner,))
    comp = compose_ts(Phi, Phi_p)
    assert comp.summands[0].pieces == tuple(zs)
    assert check_cone_decomposition(comp.summands[0].eta).passed


@settings(max_examples=30)
@given(seeds)
def test_composite_valid_and_projection_functorial(seed):
    F1, F2 = random_composable_chain(rng(seed), 2)
    comp = compose_ts(F2, F1)
    for s in comp.summands:
        assert check_cone_decomposition(s.eta).passed
        assert s.phi.is_chain_map()
    lhs = induced_on_homology(project_ts(comp))
    rhs = induced_on_homology(project_ts(F2) @ project_ts(F1))
    assert lhs == rhs


@settings(max_examples=20)
@given(seeds)
def test_associativity_up_to_equivalence(seed):
    F1, F2, F3 = random_composable_chain(rng(seed), 3)
    left = compose_ts(F3, compose_ts(F2, F1))
    right = compose_ts(compose_ts(F3, F2), F1)
    assert check_ts_equivalent(left, right).passed


def test_non_quasi_iso_raises():
    z = ChainMap(ONE, ONE, BitMatrix.zeros(1, 1))
    Phi = TSMorphism((ONE,), (ONE,), (TSTriple(z, trivial_decomposition(ONE)),))
    split = strict_decomposition([ONE, ONE], [BitMatrix.zeros(0, 1), BitMatrix.zeros(1, 1)])
    inner = TSTriple(ChainMap(ONE, split.total, BitMatrix.from_rows(["1", "0"])), split)
    Phi2 = TSMorphism((ONE,), (ONE, ONE), (inner,))
    with pytest.raises(NoHomotopyInverse):
        compose_ts(sum_ts(Phi, Phi), Phi2)


def test_sum_with_empty_and_identities():
    (Phi,) = random_composable_chain(rng(4), 1)
    empty = identity_ts([])
    assert sum_ts(Phi, empty) == Phi == sum_ts(empty, Phi)
    a, b = [ONE, PAIR], [random_complex(rng(5), 3)]
    assert sum_ts(identity_ts(a), identity_ts(b)) == identity_ts(a + b)


@given(seeds)
def test_interchange_law(seed):
    r = rng(seed)
    A1, A2 = random_composable_chain(r, 2)
    B1, B2 = random_composable_chain(r, 2)
    assert compose_ts(sum_ts(A2, B2), sum_ts(A1, B1)) == sum_ts(compose_ts(A2, A1), compose_ts(B2, B1))


def test_projection_of_identity_and_lift():
    c = random_complex(rng(6), 3)
    assert project_ts(identity_ts([c])).f == BitMatrix.identity(3)
    r = rng(7)
    p = random_invertible(r, 3)
    target = ChainComplex(3, p @ c.d @ inverse(p))
    phi = ChainMap(c, target, p)
    assert project_ts(lift_iso(phi)) == phi


# index arithmetic


@pytest.mark.parametrize("entries,exit_,want", [((1,), 1, 0), ((1, 1), 1, 0), ((1, 1), 0, 1)])
def test_index_examples(entries, exit_, want):
    assert fredholm_index(MorseIndexProfile(entries, exit_)) == want


def test_index_rejects_bad_profiles():
    with pytest.raises(ValueError):
        MorseIndexProfile((), 0)
    with pytest.raises(ValueError):
        MorseIndexProfile((2,), 0)


def test_index_classification_exhaustive():
    t = time.perf_counter()
    n = 0
    for k in range(1, 6):
        for p in all_profiles(k):
            n += 1
            cases = classify_nonconstant(p)
            pred = predicted_index(cases)
            idx = fredholm_index(p)
            if pred is not None:
                assert pred == idx
            else:
                # no non-constant solution can exist: index is not 0 or 1
                assert idx not in (0, 1)
            assert constant_index_zero(p) == (idx == 0 and (p.k == 1 or p.exit == 1))
    assert n == sum(2 ** (k + 1) for k in range(1, 6))
    assert time.perf_counter() - t < 1.0


def test_all_profiles_count():
    assert len(list(all_profiles(3))) == 16
    assert all(len(p.entries) == 3 for p in all_profiles(3))
    assert len(set(itertools.chain.from_iterable((p.entries + (p.exit,),) for p in all_profiles(3)))) == 16
