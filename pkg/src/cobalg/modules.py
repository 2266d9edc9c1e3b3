"""A∞-modules, module morphisms, cones, pullbacks and the Yoneda embedding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import AInfCategory, check_functor
from .chain import ChainComplex, ChainMap, induced_on_homology, is_quasi_iso
from .errors import CollectionMismatch, MissingWitness, NotFunctor, NotModuleMorphism
from .f2 import BitMatrix, rank
from .multilinear import (
    ExtendedMap,
    MixedExtendedMap,
    SpaceCollection,
    compose_mixed,
    compose_mixed_star,
    pullback_action,
)
from .report import Report


@dataclass(eq=False)
class AInfModule:
    """Spaces M(x) and the action μ^M as a mixed extended map."""

    base: AInfCategory
    spaces: SpaceCollection
    action: MixedExtendedMap

    @classmethod
    def build(cls, base: AInfCategory, name: str, dims: dict, comps: dict) -> "AInfModule":
        spaces = SpaceCollection(name, base.objects, dict(dims))
        return cls(base, spaces, MixedExtendedMap(base.hom, spaces, spaces, comps, base.cap))

    @property
    def name(self) -> str:
        return self.spaces.name

    def dim(self, x) -> int:
        return self.spaces.dim(x)

    def differential(self, x) -> BitMatrix:
        n = self.dim(x)
        arr = self.action.components.get((x,))
        return BitMatrix.from_array(arr.T) if arr is not None else BitMatrix.zeros(n, n)

    def complex_at(self, x) -> ChainComplex:
        return ChainComplex(self.dim(x), self.differential(x))


@dataclass(eq=False)
class ModuleMorphism:
    source: AInfModule
    target: AInfModule
    nu: MixedExtendedMap

    @classmethod
    def build(cls, source: AInfModule, target: AInfModule, comps: dict) -> "ModuleMorphism":
        m = MixedExtendedMap(source.base.hom, source.spaces, target.spaces, comps, source.base.cap)
        return cls(source, target, m)

    def degree_one(self, x) -> BitMatrix:
        """Matrix of ν_1 at x (column j = image of basis vector j)."""
        arr = self.nu.components.get((x,))
        if arr is None:
            return BitMatrix.zeros(self.target.dim(x), self.source.dim(x))
        return BitMatrix.from_array(arr.T)

    def chain_map_at(self, x) -> ChainMap:
        return ChainMap(self.source.complex_at(x), self.target.complex_at(x), self.degree_one(x))

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, self.nu + other.nu)

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleMorphism) and self.nu == other.nu


def _report(rep: Report, comps: dict, label: str) -> None:
    for key in sorted(comps, key=lambda k: (len(k), repr(k))):
        for idx in zip(*np.nonzero(comps[key])):
            rep.fail(f"{label} key={key} inputs={tuple(int(i) for i in idx[:-1])} out={int(idx[-1])}")


def module_relation(M: AInfModule) -> MixedExtendedMap:
    return compose_mixed(M.action, M.action) + compose_mixed_star(M.action, M.base.mu)


def check_module(M: AInfModule) -> Report:
    """(μ^M⊣μ^M) + (μ^M⋆μ^A) = 0 on every basis tuple."""
    rep = Report("module")
    if not M.action.category.same_as(M.base.hom):
        rep.fail("action is not over the base category")
        return rep
    rel = module_relation(M)
    rep.checked = len(M.action.components)
    _report(rep, rel.components, "relation")
    rep.notes.append(f"arity cap {M.action.cap}")
    return rep


def module_mu1(rho: ModuleMorphism) -> ModuleMorphism:
    """Differential of the module category on a pre-morphism."""
    A = rho.source.base
    val = (compose_mixed(rho.target.action, rho.nu) + compose_mixed(rho.nu, rho.source.action)
           + compose_mixed_star(rho.nu, A.mu))
    return ModuleMorphism(rho.source, rho.target, val)


def check_module_morphism(nu: ModuleMorphism) -> Report:
    rep = Report("module-morphism")
    if not (nu.nu.module_in.same_as(nu.source.spaces) and nu.nu.module_out.same_as(nu.target.spaces)):
        rep.fail("spaces do not match source/target modules")
        return rep
    rep.checked = len(nu.nu.components)
    _report(rep, module_mu1(nu).nu.components, "relation")
    return rep


def identity_morphism(M: AInfModule) -> ModuleMorphism:
    return ModuleMorphism(M, M, MixedExtendedMap.identity(M.base.hom, M.spaces, M.action.cap))


def zero_morphism(Ms: AInfModule, Mt: AInfModule) -> ModuleMorphism:
    return ModuleMorphism(Ms, Mt, MixedExtendedMap.zero(Ms.base.hom, Ms.spaces, Mt.spaces, Ms.action.cap))


def compose_module_morphisms(eta: ModuleMorphism, nu: ModuleMorphism) -> ModuleMorphism:
    """η⊣ν: source(ν) -> target(η)."""
    if not nu.target.spaces.same_as(eta.source.spaces):
        raise CollectionMismatch("morphisms are not composable")
    out = compose_mixed(eta.nu, nu.nu)
    cap = max(eta.nu.cap, nu.nu.cap)
    return ModuleMorphism(nu.source, eta.target, out.with_components(out.components, cap))


def direct_sum_spaces(name: str, a: SpaceCollection, b: SpaceCollection) -> SpaceCollection:
    return SpaceCollection(name, a.objects, {x: a.dim(x) + b.dim(x) for x in a.objects})


def cone(nu: ModuleMorphism, name: str | None = None, check: bool = True):
    """Cone(ν) = M' ⊕ M'' with the inclusion i of M'' and the projection π to M'."""
    if check:
        rep = check_module_morphism(nu)
        if not rep.passed:
            raise NotModuleMorphism(rep.findings[0])
    Mp, Mpp = nu.source, nu.target
    A = Mp.base
    name = name or f"Cone({Mp.name}->{Mpp.name})"
    spaces = direct_sum_spaces(name, Mp.spaces, Mpp.spaces)
    keys = set(Mp.action.components) | set(Mpp.action.components) | set(nu.nu.components)
    comps = {}
    for key in keys:
        first, last = key[0], key[-1]
        a1, a2 = Mp.dim(last), Mpp.dim(last)
        o1, o2 = Mp.dim(first), Mpp.dim(first)
        cat = tuple(A.dim(key[i], key[i + 1]) for i in range(len(key) - 1))
        arr = np.zeros(cat + (a1 + a2, o1 + o2), dtype=np.uint8)
        if key in Mp.action.components:
            arr[..., :a1, :o1] ^= Mp.action.components[key]
        if key in Mpp.action.components:
            arr[..., a1:, o1:] ^= Mpp.action.components[key]
        if key in nu.nu.components:
            arr[..., :a1, o1:] ^= nu.nu.components[key]
        comps[key] = arr
    C = AInfModule(A, spaces, MixedExtendedMap(A.hom, spaces, spaces, comps, nu.nu.cap))
    inc = {}
    proj = {}
    for x in A.objects:
        a1, a2 = Mp.dim(x), Mpp.dim(x)
        if a2:
            m = np.zeros((a2, a1 + a2), dtype=np.uint8)
            m[:, a1:] = np.eye(a2, dtype=np.uint8)
            inc[(x,)] = m
        if a1:
            m = np.zeros((a1 + a2, a1), dtype=np.uint8)
            m[:a1, :] = np.eye(a1, dtype=np.uint8)
            proj[(x,)] = m
    i = ModuleMorphism(Mpp, C, MixedExtendedMap(A.hom, Mpp.spaces, spaces, inc, nu.nu.cap))
    p = ModuleMorphism(C, Mp, MixedExtendedMap(A.hom, spaces, Mp.spaces, proj, nu.nu.cap))
    return C, i, p


def pullback(phi: ExtendedMap, M: AInfModule, source: AInfCategory, check: bool = True) -> AInfModule:
    """φ*M over ``source``: spaces M(φ(x)), action summed over splittings."""
    if check:
        rep = check_functor(phi, source, M.base)
        if not rep.passed:
            raise NotFunctor(rep.findings[0])
    spaces = SpaceCollection(f"{phi.target.name}*{M.name}", source.objects,
                             {x: M.dim(phi.index_map[x]) for x in source.objects})
    act = pullback_action(M.action, phi, spaces)
    return AInfModule(source, spaces, act)


def pullback_morphism(phi: ExtendedMap, nu: ModuleMorphism, source: AInfCategory,
                      src: AInfModule, tgt: AInfModule) -> ModuleMorphism:
    """φ*ν between already pulled back modules."""
    raw = pullback_action(nu.nu, phi, src.spaces, tgt.spaces)
    return ModuleMorphism(src, tgt, MixedExtendedMap(source.hom, src.spaces, tgt.spaces, raw.components, raw.cap))


# ---------------------------------------------------------------------------
# Yoneda


def yoneda_module(A: AInfCategory, L, objects=None) -> AInfModule:
    """M_L(K) = hom(K, L) with action μ^A, over the full subcategory on ``objects``."""
    objs = tuple(A.objects if objects is None else objects)
    base = A if objects is None else A.full_subcategory(objs, f"{A.name}|test")
    dims = {K: A.dim(K, L) for K in objs}
    comps = {}
    for key, arr in A.mu.components.items():
        if key[-1] == L and all(o in objs for o in key[:-1]):
            comps[key[:-1]] = arr
    return AInfModule.build(base, f"Y({L})", dims, comps)


def yoneda(A: AInfCategory, objects=None) -> dict:
    return {L: yoneda_module(A, L, objects) for L in A.objects}


def yoneda_morphism(A: AInfCategory, chain: tuple, vectors: list, source: AInfModule,
                    target: AInfModule) -> ModuleMorphism:
    """𝒴(a_1..a_k): M_{L_0} -> M_{L_k}, ν(c.., b) = μ^A(c.., b, a_1..a_k).

    ``chain`` = (L_0..L_k); vectors[j] lies in hom(L_j, L_{j+1}).
    """
    objs = source.base.objects
    k = len(chain) - 1
    comps = {}
    for key, arr in A.mu.components.items():
        d = len(key) - 1 - k  # number of inputs before the a's, including b
        if d < 1 or tuple(key[d:]) != tuple(chain):
            continue
        if not all(o in objs for o in key[:d]):
            continue
        out = arr.astype(np.int64)
        for j in range(k - 1, -1, -1):
            v = np.asarray(vectors[j], dtype=np.int64)
            out = np.tensordot(out, v, axes=([d + j], [0]))
            # contracted axis removed; the output axis stays last
        comps[key[:d]] = (out & 1).astype(np.uint8)
    return ModuleMorphism.build(source, target, comps)


def yoneda_unit_probe(A: AInfCategory, L, Lp, unit_vec, a_vec) -> tuple[int, int]:
    """Degree-1 part of 𝒴(a) on a unit representative, as homology classes.

    Returns (class of ν_1(e) in H(L, L'), class of a); faithfulness says
    they agree when [e] is the unit.
    """
    from .f2 import vec_from_array

    arr = A.mu.components.get((L, L, Lp))
    hc = A.hom_complex(L, Lp).homology
    if arr is None:
        val = 0
    else:
        e = np.asarray(unit_vec, dtype=np.int64)
        a = np.asarray(a_vec, dtype=np.int64)
        out = np.tensordot(a, np.tensordot(e, arr.astype(np.int64), axes=([0], [0])), axes=([0], [0])) & 1
        val = vec_from_array(out)
    return hc.representative_map(val), hc.representative_map(vec_from_array(np.asarray(a_vec)))


# ---------------------------------------------------------------------------
# exact triangles


@dataclass
class ExactTriangleCertificate:
    """M' -ν-> M'' -j-> C -p-> M' with a witness t: C -> Cone(ν)."""

    nu: ModuleMorphism
    j: ModuleMorphism
    p: ModuleMorphism
    t: ModuleMorphism | None


def _homology_map(f: ChainMap) -> BitMatrix:
    return induced_on_homology(f)


def verify_exact_triangle(cert: ExactTriangleCertificate, objects=None) -> Report:
    rep = Report("exact-triangle")
    if cert.t is None:
        raise MissingWitness("exact triangle needs a witness t")
    C, i, pi = cone(cert.nu, check=False)
    for label, m in (("nu", cert.nu), ("j", cert.j), ("p", cert.p), ("t", cert.t)):
        r = check_module_morphism(m)
        if not r.passed:
            rep.fail(f"{label} is not a module morphism: {r.findings[0]}")
    if not rep.passed:
        return rep
    if not cert.t.target.spaces.same_as(C.spaces):
        rep.fail("witness does not land in Cone(nu)")
        return rep
    objs = cert.nu.source.base.objects if objects is None else objects
    for x in objs:
        tx = cert.t.chain_map_at(x)
        if not is_quasi_iso(tx):
            rep.fail(f"t is not a quasi-isomorphism at {x}")
            continue
        tj = ChainMap(cert.j.source.complex_at(x), C.complex_at(x), tx.f @ cert.j.degree_one(x))
        if _homology_map(tj) != _homology_map(i.chain_map_at(x)):
            rep.fail(f"[t][j] != [i] at {x}")
        pit = ChainMap(cert.t.source.complex_at(x), cert.nu.source.complex_at(x), pi.degree_one(x) @ tx.f)
        if _homology_map(pit) != _homology_map(cert.p.chain_map_at(x)):
            rep.fail(f"[pi][t] != [p] at {x}")
        rep.checked += 1
    return rep


def strict_triangle(nu: ModuleMorphism) -> ExactTriangleCertificate:
    C, i, p = cone(nu)
    return ExactTriangleCertificate(nu, i, p, identity_morphism(C))


def objectwise_cone_rank(nu: ModuleMorphism, x) -> tuple[int, int, int, int]:
    """(dim H(Cone(ν)(x)), dim H(M'(x)), dim H(M''(x)), rank H(ν_1(x)))."""
    C, _, _ = cone(nu, check=False)
    f = nu.chain_map_at(x)
    return (C.complex_at(x).homology.rank, f.source.homology.rank, f.target.homology.rank,
            rank(induced_on_homology(f)))
