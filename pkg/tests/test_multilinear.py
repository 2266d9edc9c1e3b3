"""Compositions of extended maps against brute-force enumeration."""

import random

import numpy as np
from hypothesis import given
import pytest

from cobalg.errors import CollectionMismatch
from cobalg.multilinear import (
    ExtendedMap,
    HomCollection,
    MixedExtendedMap,
    SpaceCollection,
    compose_circle,
    compose_mixed,
    compose_mixed_star,
    compose_star,
)

import oracles
from strategies import extended_map, hom_collection, mixed_map, seeds, space_collection

OBJS = ("a", "b")


def upto(comps, k, mixed=False):
    off = 0 if mixed else 1
    return {key: v for key, v in comps.items() if len(key) - off <= k}


def one_object(n):
    return HomCollection("C", ("x",), {("x", "x"): n})


def rand_table(rng, *shape):
    return rng.integers(0, 2, shape).astype(np.uint8)


# worked cases


def test_identity_circle_identity():
    c = hom_collection(random.Random(0), "C", OBJS)
    ident = ExtendedMap.identity(c)
    assert compose_circle(ident, ident) == ident


def test_linear_circle_is_matrix_product():
    c = one_object(3)
    rng = np.random.default_rng(1)
    f1, g1 = rand_table(rng, 3, 3), rand_table(rng, 3, 3)
    F = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): f1})
    G = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): g1})
    out = compose_circle(G, F)
    # tables are (in, out): value on e_i is row i
    assert set(out.components) == {("x", "x")}
    assert np.array_equal(out.components[("x", "x")], (f1.astype(int) @ g1) & 1)


def test_arity_two_circle_formula():
    c = one_object(2)
    rng = np.random.default_rng(2)
    f1, f2 = rand_table(rng, 2, 2), rand_table(rng, 2, 2, 2)
    g1, g2 = rand_table(rng, 2, 2), rand_table(rng, 2, 2, 2)
    F = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): f1, ("x", "x", "x"): f2}, cap=2)
    G = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): g1, ("x", "x", "x"): g2}, cap=2)
    got = compose_circle(G, F).component(("x", "x", "x"))
    # g1∘f2 + g2∘(f1⊗f1)
    want = np.einsum("abk,kc->abc", f2, g1) + np.einsum("ai,bj,ijc->abc", f1, f1, g2)
    assert np.array_equal(got, want & 1)


def test_star_with_zero_is_zero():
    c = hom_collection(random.Random(3), "C", OBJS)
    G = extended_map(random.Random(4), c, c)
    assert compose_star(G, ExtendedMap.zero(c, c)).is_zero()


def test_star_linear_case():
    c = one_object(2)
    rng = np.random.default_rng(5)
    f1, g1 = rand_table(rng, 2, 2), rand_table(rng, 2, 2)
    F = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): f1})
    G = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): g1})
    assert np.array_equal(compose_star(G, F).component(("x", "x")), (f1.astype(int) @ g1) & 1)


def test_star_leibniz_expression():
    c = one_object(2)
    rng = np.random.default_rng(6)
    m1, m2 = rand_table(rng, 2, 2), rand_table(rng, 2, 2, 2)
    mu = ExtendedMap(c, c, {"x": "x"}, {("x", "x"): m1, ("x", "x", "x"): m2}, cap=2)
    got = compose_star(mu, mu).component(("x", "x", "x"))
    # μ1μ2 + μ2(μ1⊗id) + μ2(id⊗μ1)
    want = (np.einsum("abk,kc->abc", m2, m1) + np.einsum("ai,ibc->abc", m1, m2)
            + np.einsum("bj,ajc->abc", m1, m2))
    assert np.array_equal(got, want & 1)


def test_star_requires_identity_object_map():
    r = random.Random(7)
    a = hom_collection(r, "A", OBJS)
    F = extended_map(r, a, a, {"a": "b", "b": "a"})
    with pytest.raises(CollectionMismatch):
        compose_star(F, F)


def test_mixed_identity_is_neutral():
    r = random.Random(8)
    cat = hom_collection(r, "C", OBJS)
    m = space_collection(r, "M", OBJS)
    P = mixed_map(r, cat, m, m)
    ident = MixedExtendedMap.identity(cat, m)
    assert compose_mixed(P, ident) == P
    assert compose_mixed(ident, P) == P


def test_mixed_linear_case_composes_endomorphisms():
    cat = one_object(1)
    m = SpaceCollection("M", ("x",), {"x": 3})
    rng = np.random.default_rng(9)
    p, q = rand_table(rng, 3, 3), rand_table(rng, 3, 3)
    P = MixedExtendedMap(cat, m, m, {("x",): p})
    Q = MixedExtendedMap(cat, m, m, {("x",): q})
    assert np.array_equal(compose_mixed(P, Q).component(("x",)), (q.astype(int) @ p) & 1)


def test_mixed_star_zero_and_linear():
    r = random.Random(10)
    cat = hom_collection(r, "C", OBJS)
    m = space_collection(r, "M", OBJS)
    Q = mixed_map(r, cat, m, m)
    assert compose_mixed_star(Q, ExtendedMap.zero(cat, cat)).is_zero()
    # arity-1 Q has no category slot to insert into
    assert compose_mixed_star(Q.arity_part(1), ExtendedMap.identity(cat)).is_zero()


def test_mixed_collection_mismatch():
    r = random.Random(11)
    cat = hom_collection(r, "C", OBJS)
    m1 = SpaceCollection("M1", OBJS, {"a": 1, "b": 1})
    m2 = SpaceCollection("M2", OBJS, {"a": 2, "b": 2})
    P = MixedExtendedMap.zero(cat, m1, m1)
    Q = MixedExtendedMap.zero(cat, m2, m2)
    with pytest.raises(CollectionMismatch):
        compose_mixed(P, Q)


# agreement with the brute-force enumerator


@given(seeds)
def test_circle_matches_oracle(seed):
    r = random.Random(seed)
    a = hom_collection(r, "A", OBJS)
    b = hom_collection(r, "B", ("p", "q"))
    imap = {x: r.choice(("p", "q")) for x in OBJS}
    F = extended_map(r, a, b, imap)
    G = extended_map(r, b, b)
    want = oracles.tabulate_regular(lambda k, v: oracles.circle_value(G, F, k, v), a, OBJS, 4,
                                    lambda k: b.dim(imap[k[0]], imap[k[-1]]))
    assert oracles.components_equal(upto(compose_circle(G, F).components, 4), want)


@given(seeds)
def test_star_matches_oracle(seed):
    r = random.Random(seed)
    a = hom_collection(r, "A", OBJS)
    F = extended_map(r, a, a)
    G = extended_map(r, a, a)
    want = oracles.tabulate_regular(lambda k, v: oracles.star_value(G, F, k, v), a, OBJS, 4,
                                    lambda k: a.dim(k[0], k[-1]))
    assert oracles.components_equal(upto(compose_star(G, F).components, 4), want)


@given(seeds)
def test_mixed_matches_oracle(seed):
    r = random.Random(seed)
    cat = hom_collection(r, "C", OBJS)
    m1, m2, m3 = (space_collection(r, n, OBJS) for n in ("M1", "M2", "M3"))
    Q = mixed_map(r, cat, m1, m2)
    P = mixed_map(r, cat, m2, m3)
    want = oracles.tabulate_mixed(lambda k, v: oracles.mixed_value(P, Q, k, v), cat, m1, OBJS, 4,
                                  lambda k: m3.dim(k[0]))
    assert oracles.components_equal(upto(compose_mixed(P, Q).components, 4, mixed=True), want)


@given(seeds)
def test_mixed_star_matches_oracle(seed):
    r = random.Random(seed)
    cat = hom_collection(r, "C", OBJS)
    m1, m2 = space_collection(r, "M1", OBJS), space_collection(r, "M2", OBJS)
    Q = mixed_map(r, cat, m1, m2)
    F = extended_map(r, cat, cat)
    want = oracles.tabulate_mixed(lambda k, v: oracles.mixed_star_value(Q, F, k, v), cat, m1, OBJS, 4,
                                  lambda k: m2.dim(k[0]))
    assert oracles.components_equal(upto(compose_mixed_star(Q, F).components, 4, mixed=True), want)


# algebraic laws


@given(seeds)
def test_circle_associative(seed):
    r = random.Random(seed)
    a = hom_collection(r, "A", OBJS)
    F, G, H = (extended_map(r, a, a, max_arity=2) for _ in range(3))
    assert compose_circle(H, compose_circle(G, F)) == compose_circle(compose_circle(H, G), F)


@given(seeds)
def test_circle_identity_laws(seed):
    r = random.Random(seed)
    a = hom_collection(r, "A", OBJS)
    F = extended_map(r, a, a)
    ident = ExtendedMap.identity(a)
    assert compose_circle(ident, F) == F == compose_circle(F, ident)


@given(seeds)
def test_mixed_associative(seed):
    r = random.Random(seed)
    cat = hom_collection(r, "C", OBJS)
    ms = [space_collection(r, f"M{i}", OBJS) for i in range(4)]
    P, Q, S = (mixed_map(r, cat, ms[i], ms[i + 1], max_arity=2) for i in range(3))
    assert compose_mixed(S, compose_mixed(Q, P)) == compose_mixed(compose_mixed(S, Q), P)


@given(seeds)
def test_star_is_bilinear(seed):
    r = random.Random(seed)
    a = hom_collection(r, "A", OBJS)
    G, F1, F2 = (extended_map(r, a, a, max_arity=2) for _ in range(3))
    assert compose_star(G, F1 + F2) == compose_star(G, F1) + compose_star(G, F2)
