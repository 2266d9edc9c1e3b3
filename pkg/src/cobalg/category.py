"""A∞-categories over F2: the A∞ relation, functors, natural transformations,
homotopies and the homology category."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainComplex, HomologyData
from .errors import CollectionMismatch, ObjectActionMismatch
from .f2 import BitMatrix, bits, solve, vec_from_array, vec_to_array
from .multilinear import (
    ExtendedMap,
    HomCollection,
    PreNaturalTransformation,
    circ_star_circ,
    circ_star_circ_star_circ,
    compose_circle,
    compose_star,
    star_components,
)
from .report import Report

DEFAULT_CAP = 4


@dataclass(eq=False)
class AInfCategory:
    """Objects, hom dimensions and the composition maps μ_k as one extended map."""

    name: str
    objects: tuple
    dims: dict
    components: dict
    cap: int = DEFAULT_CAP
    mu: ExtendedMap = field(init=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.hom = HomCollection(self.name, self.objects, dict(self.dims))
        self.mu = ExtendedMap(self.hom, self.hom, {x: x for x in self.objects}, self.components, self.cap)
        self.components = self.mu.components

    def dim(self, x, y) -> int:
        return self.hom.dim(x, y)

    def mu1(self, x, y) -> BitMatrix:
        """Differential on hom(x, y) as a BitMatrix (column j = μ1(e_j))."""
        n = self.dim(x, y)
        arr = self.mu.components.get((x, y))
        if arr is None:
            return BitMatrix.zeros(n, n)
        return BitMatrix.from_array(arr.T)

    def hom_complex(self, x, y) -> ChainComplex:
        return ChainComplex(self.dim(x, y), self.mu1(x, y))

    def mu_value(self, key, indices) -> np.ndarray:
        return self.mu.component(key)[tuple(indices)]

    def with_components(self, comps: dict, name: str | None = None) -> "AInfCategory":
        return AInfCategory(name or self.name, self.objects, self.dims, comps, self.cap)

    def full_subcategory(self, objects, name: str | None = None) -> "AInfCategory":
        keep = set(objects)
        dims = {k: v for k, v in self.dims.items() if k[0] in keep and k[1] in keep}
        comps = {k: v for k, v in self.components.items() if all(o in keep for o in k)}
        return AInfCategory(name or f"{self.name}|sub", tuple(o for o in self.objects if o in keep), dims, comps, self.cap)


def _report_components(rep: Report, comps: dict, label: str) -> None:
    for key in sorted(comps, key=lambda k: (len(k), repr(k))):
        arr = comps[key]
        for idx in zip(*np.nonzero(arr)):
            rep.fail(f"{label} key={key} inputs={tuple(int(i) for i in idx[:-1])} out={int(idx[-1])}")


def check_a_infinity(A: AInfCategory) -> Report:
    """μ⋆μ = 0 on every basis tuple; exact when μ_k vanishes above the cap."""
    rep = Report("ainf")
    rel = compose_star(A.mu, A.mu)
    rep.checked = sum(int(np.prod(A.mu.shape(k))) for k in A.mu.components)
    _report_components(rep, rel.components, "mu*mu")
    rep.notes.append(f"arity cap {A.cap}: relation complete through total arity {2 * A.cap}")
    return rep


def check_functor(F: ExtendedMap, A: AInfCategory, B: AInfCategory) -> Report:
    """F⋆μ^A = μ^B∘F on all basis tuples."""
    rep = Report("functor")
    if not F.source.same_as(A.hom) or not F.target.same_as(B.hom):
        rep.fail("collections do not match the categories")
        return rep
    lhs = compose_star(F, A.mu)
    rhs = compose_circle(B.mu, F)
    diff = lhs + rhs.with_components(rhs.components)
    rep.checked = len(lhs.components) + len(rhs.components)
    _report_components(rep, diff.components, "F*mu+mu.F")
    return rep


def functor_mu1(T: PreNaturalTransformation, A: AInfCategory, B: AInfCategory) -> PreNaturalTransformation:
    """μ1 of T in the functor category."""
    csc = circ_star_circ(B.mu, T.F, T, T.G)
    t0 = {k[0]: v for k, v in csc.items() if len(k) == 1}
    prime = {k: v for k, v in csc.items() if len(k) > 1}
    for k, v in star_components(T.Tprime, A.mu).items():
        prime[k] = prime[k] ^ v if k in prime else v
    return PreNaturalTransformation(T.F, T.G, t0, prime, T.cap)


def check_natural_transformation(T: PreNaturalTransformation, A: AInfCategory, B: AInfCategory) -> Report:
    rep = Report("natural")
    if set(T.F.index_map.items()) ^ set(T.G.index_map.items()) and set(T.F.index_map) != set(T.G.index_map):
        rep.fail("functors act on different object sets")
        return rep
    m = functor_mu1(T, A, B)
    for x, v in sorted(m.T0.items(), key=lambda kv: repr(kv[0])):
        rep.fail(f"mu1(T0) at {x} = {np.flatnonzero(v).tolist()}")
    _report_components(rep, m.Tprime, "mu.T.G+T*mu")
    rep.checked = len(T.T0) + len(T.Tprime)
    return rep


def compose_pre_natural(S: PreNaturalTransformation, T: PreNaturalTransformation, B: AInfCategory) -> PreNaturalTransformation:
    """S∘T: (S∘T)^0 = μ2(T0, S0), primed part from μ∘⋆∘⋆∘(F, T, G, S, H)."""
    if T.G.index_map != S.F.index_map:
        raise CollectionMismatch("transformations are not composable")
    raw = circ_star_circ_star_circ(B.mu, T.F, T, T.G, S, S.G)
    t0 = {k[0]: v for k, v in raw.items() if len(k) == 1}
    prime = {k: v for k, v in raw.items() if len(k) > 1}
    return PreNaturalTransformation(T.F, S.G, t0, prime, max(S.cap, T.cap))


def check_homotopic(F: ExtendedMap, G: ExtendedMap, T: PreNaturalTransformation, A: AInfCategory, B: AInfCategory) -> bool:
    """True iff D = (0, F - G) equals μ1(T) with T0 = 0."""
    if F.index_map != G.index_map:
        raise ObjectActionMismatch("homotopy needs equal object actions")
    if T.T0:
        return False
    D = PreNaturalTransformation.difference(F, G)
    return functor_mu1(T, A, B) == D


# ---------------------------------------------------------------------------
# homology category


@dataclass
class HomologyCategory:
    homology: dict
    products: dict  # (x, y, z) -> array (h_xy, h_yz, h_xz)
    units: dict  # object -> coordinate bitset or None

    def product(self, x, y, z, a: int, b: int) -> int:
        arr = self.products[(x, y, z)]
        out = np.zeros(arr.shape[2], dtype=np.int64)
        for i in bits(a):
            for j in bits(b):
                out ^= arr[i, j]
        return vec_from_array(out & 1)


def homology_category(A: AInfCategory) -> HomologyCategory:
    H: dict[tuple, HomologyData] = {}
    for x in A.objects:
        for y in A.objects:
            H[(x, y)] = A.hom_complex(x, y).homology
    products = {}
    for x, y, z in itertools.product(A.objects, repeat=3):
        hxy, hyz, hxz = H[(x, y)], H[(y, z)], H[(x, z)]
        arr = np.zeros((hxy.rank, hyz.rank, hxz.rank), dtype=np.uint8)
        comp = A.mu.components.get((x, y, z))
        if comp is not None:
            for i, a in enumerate(hxy.harmonic):
                va = vec_to_array(a, A.dim(x, y)).astype(np.int64)
                for j, b in enumerate(hyz.harmonic):
                    vb = vec_to_array(b, A.dim(y, z)).astype(np.int64)
                    out = np.tensordot(vb, np.tensordot(va, comp.astype(np.int64), axes=([0], [0])), axes=([0], [0]))
                    arr[i, j] = vec_to_array(hxz.representative_map(vec_from_array(out & 1)), hxz.rank)
        products[(x, y, z)] = arr
    hc = HomologyCategory(H, products, {})
    for x in A.objects:
        hc.units[x] = _find_unit(hc, A.objects, x)
    return hc


def _find_unit(hc: HomologyCategory, objects, x) -> int | None:
    """Class e in H(x, x) with [a]·e = [a] and e·[b] = [b] for all a, b."""
    h = hc.homology[(x, x)].rank
    cols = [0] * h
    rhs = 0
    shift = 0
    for k in objects:
        hk = hc.homology[(k, x)].rank
        for i in range(hk):
            for e in range(h):
                cols[e] |= hc.product(k, x, x, 1 << i, 1 << e) << shift
            rhs |= (1 << i) << shift
            shift += hk
        hk2 = hc.homology[(x, k)].rank
        for i in range(hk2):
            for e in range(h):
                cols[e] |= hc.product(x, x, k, 1 << e, 1 << i) << shift
            rhs |= (1 << i) << shift
            shift += hk2
    mat = BitMatrix.from_columns(cols, shift)
    return solve(mat, rhs)


def check_homology_associative(hc: HomologyCategory, objects) -> bool:
    for x, y, z, w in itertools.product(objects, repeat=4):
        ra, rb, rc = (hc.homology[p].rank for p in ((x, y), (y, z), (z, w)))
        for i in range(ra):
            for j in range(rb):
                for k in range(rc):
                    left = hc.product(x, z, w, hc.product(x, y, z, 1 << i, 1 << j), 1 << k)
                    right = hc.product(x, y, w, 1 << i, hc.product(y, z, w, 1 << j, 1 << k))
                    if left != right:
                        return False
    return True


def is_strictly_unital(A: AInfCategory, units: dict) -> bool:
    """μ2(e, ·) = μ2(·, e) = id and μ_k with a unit input vanishes for k ≥ 3."""
    for key, arr in A.mu.components.items():
        k = len(key) - 1
        for pos in range(k):
            src = key[pos]
            if key[pos + 1] != src or src not in units:
                continue
            e = np.array(vec_to_array(units[src], A.dim(src, src)), dtype=np.int64)
            sl = np.tensordot(e, np.moveaxis(arr.astype(np.int64), pos, 0), axes=([0], [0])) & 1
            if k >= 3:
                if sl.any():
                    return False
            elif k == 2:
                if not np.array_equal(sl, np.eye(sl.shape[0], dtype=np.int64)):
                    return False
    for x, e in units.items():
        for y in A.objects:
            for key in ((x, x, y), (y, x, x)):
                if A.dim(*key[:2]) and A.dim(*key[1:]) and key not in A.mu.components:
                    return False
    return True


# ---------------------------------------------------------------------------
# dg-category of chain complexes


def hom_index(r: int, c: int, dim_source: int) -> int:
    """Matrix unit E_rc (e_c of the source to e_r of the target)."""
    return r * dim_source + c


def dg_category(name: str, complexes: dict, cap: int = DEFAULT_CAP) -> AInfCategory:
    """Hom(X, Y) = all linear maps X -> Y, μ1(f) = d f + f d, μ2(f, g) = g∘f."""
    objs = tuple(complexes)
    dims = {}
    comps = {}
    for x in objs:
        for y in objs:
            dims[(x, y)] = complexes[x].dim * complexes[y].dim
    for x in objs:
        cx = complexes[x]
        dx = cx.d.to_array().astype(np.int64)
        for y in objs:
            cy = complexes[y]
            n = dims[(x, y)]
            if not n:
                continue
            dy = cy.d.to_array().astype(np.int64)
            # vec(d_Y E + E d_X) for each unit E
            ex, ey = np.eye(cx.dim, dtype=np.int64), np.eye(cy.dim, dtype=np.int64)
            # entry [(r,c), (r',c')] = dy[r', r] δ(c', c) + δ(r', r) dx[c, c']
            m1 = np.einsum("pr,cq->rcpq", dy, ex) + np.einsum("rp,cq->rcpq", ey, dx)
            comps[(x, y)] = (m1.reshape(n, n) & 1).astype(np.uint8)
    for x, y, z in itertools.product(objs, repeat=3):
        nx, ny, nz = complexes[x].dim, complexes[y].dim, complexes[z].dim
        if not (nx and ny and nz):
            continue
        # f = E_rc (x -> y), g = E_st (y -> z), g∘f = δ(t, r) E_sc
        arr = np.einsum("tr,sS,cC->rcstSC", np.eye(ny, dtype=np.uint8), np.eye(nz, dtype=np.uint8), np.eye(nx, dtype=np.uint8))
        comps[(x, y, z)] = arr.reshape(ny * nx, nz * ny, nz * nx)
    return AInfCategory(name, objs, dims, comps, cap)


def matrix_to_hom_vector(m: BitMatrix) -> np.ndarray:
    """Flatten a linear map into hom-space coordinates."""
    return m.to_array().reshape(-1)


def hom_vector_to_matrix(v: np.ndarray, rows: int, cols: int) -> BitMatrix:
    return BitMatrix.from_array(np.asarray(v, dtype=np.uint8).reshape(rows, cols))


def change_basis(A: AInfCategory, gens: dict) -> AInfCategory:
    """Transport μ along invertible matrices g[(x, y)] acting on hom(x, y).

    The new structure is μ'(a_1..a_k) = g μ(g^{-1} a_1, ..., g^{-1} a_k).
    """
    from .f2 import inverse

    inv = {}
    for key, g in gens.items():
        gi = inverse(g)
        if gi is None:
            raise ValueError(f"basis change at {key} is singular")
        inv[key] = gi.to_array().astype(np.int64)
    comps = {}
    for key, arr in A.mu.components.items():
        out = arr.astype(np.int64)
        k = len(key) - 1
        for i in range(k):
            pair = (key[i], key[i + 1])
            if pair in inv:
                # input axis i: new coordinates b -> old g^{-1} b
                out = np.moveaxis(np.tensordot(inv[pair], out, axes=([0], [i])), 0, i) & 1
        pair = (key[0], key[-1])
        if pair in gens:
            out = np.tensordot(out, gens[pair].to_array().astype(np.int64), axes=([k], [1])) & 1
        comps[key] = out.astype(np.uint8)
    return A.with_components(comps)
