"""Chain-level combinatorial model of cobordisms.

Snake complexes: l copies x^(1)..x^(l) of a base complex with the zig-zag
differential (odd copies talk to their even neighbours).  Basis index of
x^(i) for base vector b is (i-1)*dim + b.  The copies are the cochains of a
path graph (odd positions are vertices, even positions are edges), so the
snake construction extends to an A∞-category S⊗A with μ_k = cup⊗μ_k.

A cobordism datum is modelled by its ends and connecting module morphisms
over a finite list of test objects; it compiles to iterated cones of
Yoneda modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .category import AInfCategory
from .chain import ChainComplex, ChainMap, is_quasi_iso
from .cones import TSMorphism, TSTriple, check_ts_equivalent, compose_ts, identity_ts, strict_decomposition, sum_ts
from .errors import (EvenIndex, EvenL, LTooSmall, MissingEndComparison, MissingWitness, NotACycle, NotModuleMorphism,
                     NotQuasiIso)
from .f2 import BitMatrix, inverse, vec_from_array
from .modules import (
    AInfModule,
    ExactTriangleCertificate,
    ModuleMorphism,
    check_module_morphism,
    compose_module_morphisms,
    cone,
    identity_morphism,
    yoneda_module,
)
from .multilinear import ExtendedMap, MixedExtendedMap, PreNaturalTransformation
from .report import Report

# ---------------------------------------------------------------------------
# snake complexes


@dataclass(frozen=True)
class SnakeComplex:
    base: ChainComplex
    l: int
    total: ChainComplex

    def index(self, i: int, b: int) -> int:
        """Basis index of x^(i) for base vector b (i is 1-based)."""
        return (i - 1) * self.base.dim + b


def _require_odd(l: int) -> None:
    if l < 3 or l % 2 == 0:
        raise EvenL(f"l must be odd and at least 3, got {l}")


def snake_differential(base: ChainComplex, l: int) -> BitMatrix:
    n = base.dim
    zero = BitMatrix.zeros(n, n)
    eye = BitMatrix.identity(n)
    grid = []
    for i in range(1, l + 1):  # block row i: component x^(i) of the image
        row = []
        for j in range(1, l + 1):  # block column j: image of x^(j)
            m = base.d if i == j else zero
            if j % 2 == 1 and abs(i - j) == 1:
                m = m + eye
            row.append(m)
        grid.append(row)
    return BitMatrix.blocks(grid)


def build_snake(base: ChainComplex, l: int) -> SnakeComplex:
    _require_odd(l)
    n = base.dim
    d = snake_differential(base, l) if n else BitMatrix.zeros(0, 0)
    return SnakeComplex(base, l, ChainComplex(l * n, d))


def snake_projection(s: SnakeComplex, j: int) -> ChainMap:
    """c_j: x^(i) -> x when i = j, else 0."""
    if j % 2 == 0 or not 1 <= j <= s.l:
        raise EvenIndex(f"projection index must be odd in 1..{s.l}, got {j}")
    n = s.base.dim
    blocks = [[BitMatrix.identity(n) if i == j else BitMatrix.zeros(n, n) for i in range(1, s.l + 1)]]
    f = BitMatrix.blocks(blocks) if n else BitMatrix.zeros(0, 0)
    return ChainMap(s.total, s.base, f)


def snake_inclusion(s: SnakeComplex) -> ChainMap:
    """e: x -> x^(1) + x^(3) + ... + x^(l)."""
    n = s.base.dim
    blocks = [[BitMatrix.identity(n) if i % 2 else BitMatrix.zeros(n, n)] for i in range(1, s.l + 1)]
    f = BitMatrix.blocks(blocks) if n else BitMatrix.zeros(0, 0)
    return ChainMap(s.base, s.total, f)


def snake_truncation(s: SnakeComplex) -> ChainMap:
    """p: x^(i) -> x^(i) for i <= l-2, else 0, into the l-2 snake."""
    if s.l < 5:
        raise LTooSmall("truncation needs l >= 5")
    t = build_snake(s.base, s.l - 2)
    n = s.base.dim
    grid = []
    for i in range(1, s.l - 1):
        grid.append([BitMatrix.identity(n) if i == j else BitMatrix.zeros(n, n) for j in range(1, s.l + 1)])
    f = BitMatrix.blocks(grid) if n else BitMatrix.zeros(0, 0)
    return ChainMap(s.total, t.total, f)


def snake_homotopy(s: SnakeComplex, j: int = 3) -> BitMatrix:
    """h with c_1 + c_j = d h + h d: x^(i) -> x for even i < j."""
    n = s.base.dim
    blocks = [[BitMatrix.identity(n) if (i % 2 == 0 and i < j) else BitMatrix.zeros(n, n) for i in range(1, s.l + 1)]]
    return BitMatrix.blocks(blocks) if n else BitMatrix.zeros(0, 0)


# path-graph cochain algebra


def _cup(l: int) -> np.ndarray:
    """Product table of the cochain algebra on positions 1..l (0-based axes)."""
    t = np.zeros((l, l, l), dtype=np.uint8)
    for s in range(1, l + 1, 2):
        t[s - 1, s - 1, s - 1] = 1
    for e in range(2, l, 2):
        t[e - 2, e - 1, e - 1] = 1  # v_{e-1} ∪ e_e
        t[e - 1, e, e - 1] = 1  # e_e ∪ v_{e+1}
    return t


def _cup_power(l: int, k: int) -> np.ndarray:
    """k-fold product table, shape (l,)*k + (l,)."""
    t = _cup(l).astype(np.int64)
    out = np.eye(l, dtype=np.int64)
    for _ in range(k - 1):
        out = np.tensordot(out, t, axes=([out.ndim - 1], [0])) & 1
    return out.astype(np.uint8)


def _coboundary(l: int) -> np.ndarray:
    """δ as an (l, l) table: δ(v_s) = e_{s-1} + e_{s+1}."""
    t = np.zeros((l, l), dtype=np.uint8)
    for s in range(1, l + 1, 2):
        for e in (s - 1, s + 1):
            if 1 <= e <= l:
                t[s - 1, e - 1] = 1
    return t


def _interleave(sarr: np.ndarray, aarr: np.ndarray) -> np.ndarray:
    """Tensor product of tables with combined index (i, b) -> i*dim + b."""
    k = sarr.ndim
    outer = np.multiply.outer(sarr, aarr)
    order = [ax for pair in zip(range(k), range(k, 2 * k)) for ax in pair]
    outer = outer.transpose(order)
    shape = tuple(sarr.shape[i] * aarr.shape[i] for i in range(k))
    return outer.reshape(shape)


def snake_category(A: AInfCategory, l: int, name: str | None = None) -> AInfCategory:
    """S⊗A with μ_1 = δ⊗1 + 1⊗μ_1 and μ_k = cup^k⊗μ_k for k >= 2."""
    _require_odd(l)
    dims = {k: l * v for k, v in A.dims.items()}
    comps = {}
    delta = _coboundary(l)
    eye_l = np.eye(l, dtype=np.uint8)
    for key, arr in A.mu.components.items():
        k = len(key) - 1
        s = eye_l if k == 1 else _cup_power(l, k)
        comps[key] = _interleave(s, arr)
    for (x, y), n in A.dims.items():
        if not n:
            continue
        extra = _interleave(delta, np.eye(n, dtype=np.uint8))
        comps[(x, y)] = comps[(x, y)] ^ extra if (x, y) in comps else extra
    return AInfCategory(name or f"{A.name}#snake{l}", A.objects, dims, comps, A.cap)


def _strict_functor(A: AInfCategory, B: AInfCategory, mats: dict, cap: int) -> ExtendedMap:
    comps = {k: m for k, m in mats.items() if m.size}
    return ExtendedMap(A.hom, B.hom, {x: x for x in A.objects}, comps, cap)


def snake_projection_functor(A: AInfCategory, B: AInfCategory, l: int, j: int) -> ExtendedMap:
    """c_j = ev_j⊗id: S⊗A -> A as a degree-one functor."""
    if j % 2 == 0 or not 1 <= j <= l:
        raise EvenIndex(f"projection index must be odd in 1..{l}")
    ev = np.zeros((l, 1), dtype=np.uint8)
    ev[j - 1, 0] = 1
    mats = {}
    for (x, y), n in A.dims.items():
        if n:
            mats[(x, y)] = _interleave(ev, np.eye(n, dtype=np.uint8))
    return _strict_functor(B, A, mats, A.cap)


def snake_inclusion_functor(A: AInfCategory, B: AInfCategory, l: int) -> ExtendedMap:
    """e = 1_S⊗id: A -> S⊗A."""
    unit = np.zeros((1, l), dtype=np.uint8)
    unit[0, 0::2] = 1
    mats = {}
    for (x, y), n in A.dims.items():
        if n:
            mats[(x, y)] = _interleave(unit, np.eye(n, dtype=np.uint8))
    return _strict_functor(A, B, mats, A.cap)


def snake_truncation_functor(A: AInfCategory, B: AInfCategory, B2: AInfCategory, l: int) -> ExtendedMap:
    """p⊗id: S_l⊗A -> S_{l-2}⊗A."""
    if l < 5:
        raise LTooSmall("truncation needs l >= 5")
    p = np.zeros((l, l - 2), dtype=np.uint8)
    for i in range(l - 2):
        p[i, i] = 1
    mats = {}
    for (x, y), n in A.dims.items():
        if n:
            mats[(x, y)] = _interleave(p, np.eye(n, dtype=np.uint8))
    return _strict_functor(B, B2, mats, A.cap)


def snake_homotopy_transformation(A: AInfCategory, B: AInfCategory, c1: ExtendedMap, cj: ExtendedMap,
                                  l: int, j: int = 3) -> PreNaturalTransformation:
    """T0 = 0, T'_1 = h⊗id with h dual to the edges strictly between v_1 and v_j."""
    h = np.zeros((l, 1), dtype=np.uint8)
    for e in range(2, j, 2):
        h[e - 1, 0] = 1
    prime = {}
    for (x, y), n in A.dims.items():
        if n:
            prime[(x, y)] = _interleave(h, np.eye(n, dtype=np.uint8))
    return PreNaturalTransformation(c1, cj, {}, prime, A.cap)


# ---------------------------------------------------------------------------
# filtrations


@dataclass
class FiltrationProfile:
    """Type index of every module generator per object; optionally types of
    morphism inputs (an entry must vanish when an input type exceeds 2s+1)."""

    types: dict
    input_types: dict = field(default_factory=dict)

    def parity(self, x, b) -> str:
        return "positive" if self.types[x][b] % 2 else "negative"


def check_filtration(M: AInfModule, profile: FiltrationProfile) -> Report:
    rep = Report("filtration")
    for key, arr in M.action.components.items():
        tin = profile.types.get(key[-1])
        tout = profile.types.get(key[0])
        if tin is None or tout is None:
            rep.fail(f"no filtration types at {key}")
            continue
        k = len(key)
        in_types = [profile.input_types.get((key[i], key[i + 1])) for i in range(k - 1)]
        for idx in zip(*np.nonzero(arr)):
            s = tin[idx[k - 1]]
            o = tout[idx[k]]
            if o > s:
                rep.fail(f"action raises filtration at {key}: input type {s}, output type {o}")
            for i, it in enumerate(in_types):
                if it is not None and it[idx[i]] > 2 * s + 1:
                    rep.fail(f"nonzero action with input type {it[idx[i]]} > 2*{s}+1 at {key}")
        rep.checked += 1
    return rep


# ---------------------------------------------------------------------------
# cobordism data


@dataclass(eq=False)
class CobordismDatum:
    """Ends of a cobordism and its connecting morphisms.

    ``connecting[j]`` holds the components of φ_{j+2}: Y(L_{j+2}) -> M_{j+1}
    (a mixed map over the test objects).  ``comparison`` holds φ_V: Y(L) -> M_m.
    """

    category: AInfCategory
    tests: tuple
    ends: tuple
    connecting: list
    positive: object = None
    comparison: dict | None = None
    name: str = "V"

    def __post_init__(self):
        if len(self.connecting) != max(len(self.ends) - 1, 0):
            raise ValueError("need one connecting morphism per end after the first")


@dataclass
class IteratedCones:
    modules: list
    morphisms: list  # φ_j as ModuleMorphism, j = 2..m
    triangles: list  # ExactTriangleCertificate per j = 2..m
    profiles: list  # FiltrationProfile per module
    yonedas: dict

    @property
    def top(self) -> AInfModule:
        return self.modules[-1]


def build_iterated_cones(V: CobordismDatum, check: bool = True) -> IteratedCones:
    A = V.category
    tests = tuple(V.tests)
    Y = {L: yoneda_module(A, L, tests) for L in set(V.ends) | ({V.positive} if V.positive is not None else set())}
    M = Y[V.ends[0]]
    base = M.base
    modules = [M]
    types = {x: (1,) * M.dim(x) for x in tests}
    profiles = [FiltrationProfile(types)]
    morphisms, triangles = [], []
    for j, comps in enumerate(V.connecting, start=2):
        src = Y[V.ends[j - 1]]
        src = AInfModule(base, src.spaces, MixedExtendedMap(base.hom, src.spaces, src.spaces,
                                                            src.action.components, src.action.cap))
        phi = ModuleMorphism.build(src, M, comps)
        if check:
            rep = check_module_morphism(phi)
            if not rep.passed:
                raise NotModuleMorphism(f"phi_{j}: {rep.findings[0]}")
        C, inc, proj = cone(phi, name=f"M{j}", check=False)
        triangles.append(ExactTriangleCertificate(phi, inc, proj, identity_morphism(C)))
        morphisms.append(phi)
        types = {x: (j,) * src.dim(x) + types[x] for x in tests}
        profiles.append(FiltrationProfile(types))
        modules.append(C)
        M = C
    return IteratedCones(modules, morphisms, triangles, profiles, Y)


def comparison_morphism(V: CobordismDatum, cones: IteratedCones) -> ModuleMorphism:
    if V.comparison is None or V.positive is None:
        raise MissingEndComparison("datum has no end comparison morphism")
    src = cones.yonedas[V.positive]
    base = cones.top.base
    src = AInfModule(base, src.spaces, MixedExtendedMap(base.hom, src.spaces, src.spaces,
                                                        src.action.components, src.action.cap))
    return ModuleMorphism.build(src, cones.top, V.comparison)


def check_datum(V: CobordismDatum) -> Report:
    rep = Report("cobordism-datum")
    try:
        cones = build_iterated_cones(V)
    except NotModuleMorphism as exc:
        rep.fail(str(exc))
        return rep
    rep.checked += len(cones.morphisms)
    if V.comparison is not None:
        phi = comparison_morphism(V, cones)
        r = check_module_morphism(phi)
        rep.merge(r, prefix="phi_V: ")
        for x in V.tests:
            if r.passed and not is_quasi_iso(phi.chain_map_at(x)):
                rep.fail(f"phi_V is not a quasi-isomorphism at {x}")
    return rep


def assemble_functor_value(V: CobordismDatum, N, cones: IteratedCones | None = None) -> TSMorphism:
    """(φ_V, M_m, η) at test object N as a morphism CF(N, L) -> (CF(N, L_1), ..., CF(N, L_m))."""
    cones = cones or build_iterated_cones(V)
    phi = comparison_morphism(V, cones)
    if N not in V.tests:
        raise MissingEndComparison(f"{N} is not a test object")
    phiN = phi.chain_map_at(N)
    if not phiN.is_chain_map() or not is_quasi_iso(phiN):
        raise NotQuasiIso(f"phi_V is not a quasi-isomorphism at {N}")
    pieces = [cones.yonedas[L].complex_at(N) for L in V.ends]
    attach = [BitMatrix.zeros(0, pieces[0].dim)] + [m.degree_one(N) for m in cones.morphisms]
    eta = strict_decomposition(pieces, attach)
    if eta.total != cones.top.complex_at(N):  # pragma: no cover - same construction
        raise NotQuasiIso("strict decomposition does not reproduce M_m")
    trip = TSTriple(ChainMap(phiN.source, eta.total, phiN.f), eta)
    return TSMorphism((phiN.source,), tuple(pieces), (trip,))


def functor_class_from_unit(V: CobordismDatum, unit, cones: IteratedCones | None = None) -> int:
    """Class of π_last∘φ_V(e) in H(CF(L, L_m)) for a unit cycle e in CF(L, L)."""
    cones = cones or build_iterated_cones(V)
    L = V.positive
    phi = comparison_morphism(V, cones)
    src = phi.source.complex_at(L)
    e = vec_from_array(np.asarray(unit)) if not isinstance(unit, int) else unit
    if src.apply(e):
        raise NotACycle("supplied unit is not a cycle")
    img = phi.degree_one(L).apply(e)
    last = cones.yonedas[V.ends[-1]].complex_at(L)
    mask = (1 << last.dim) - 1
    return last.homology.representative_map(img & mask)


# ---------------------------------------------------------------------------
# gluing


def _cat_shape(base, key) -> tuple:
    return tuple(base.dim(key[i], key[i + 1]) for i in range(len(key) - 1))


def _direct_sum_morphism(src: AInfModule, tgt: AInfModule, lead: dict, theta: ModuleMorphism,
                         lead_map: dict | None = None) -> ModuleMorphism:
    """A ⊕ Θ between modules split as (leading block) ⊕ (trailing block).

    ``lead`` gives the leading dimension per object on both sides (identity
    there unless ``lead_map`` supplies arity-1 matrices (src x tgt arrays)).
    """
    base = src.base
    comps = {}
    for key, arr in theta.nu.components.items():
        x0, xl = key[0], key[-1]
        out = np.zeros(_cat_shape(base, key) + (src.dim(xl), tgt.dim(x0)), dtype=np.uint8)
        out[..., lead[xl][0]:, lead[x0][1]:] = arr
        comps[key] = out
    for x in base.objects:
        a, b = lead[x]
        if not a:
            continue
        key = (x,)
        if key not in comps:
            comps[key] = np.zeros((src.dim(x), tgt.dim(x)), dtype=np.uint8)
        block = lead_map[x] if lead_map is not None else np.eye(a, dtype=np.uint8)
        comps[key][:a, :b] ^= block
    return ModuleMorphism.build(src, tgt, comps)


def _invert_degree_one(nu: ModuleMorphism) -> ModuleMorphism:
    """Inverse of a module isomorphism that has only an arity-1 part."""
    if any(len(k) > 1 for k in nu.nu.components):
        raise NotQuasiIso("gluing needs an end comparison without higher components")
    comps = {}
    for x in nu.source.base.objects:
        inv = inverse(nu.degree_one(x))
        if inv is None:
            raise NotQuasiIso(f"end comparison is not invertible at {x}")
        if inv.rows:
            comps[(x,)] = inv.to_array().T
    return ModuleMorphism.build(nu.target, nu.source, comps)


def _rebase(M: AInfModule, base: AInfCategory) -> AInfModule:
    return AInfModule(base, M.spaces, MixedExtendedMap(base.hom, M.spaces, M.spaces,
                                                       M.action.components, M.action.cap))


def glue(V: CobordismDatum, Vp: CobordismDatum, i: int, name: str | None = None) -> CobordismDatum:
    """Replace end L_i of V (1-based) by the ends of V′.

    V′ must start at L_i, share the ambient category and test objects of V,
    and have an end comparison with only an arity-1 part (an isomorphism).
    """
    if Vp.positive != V.ends[i - 1]:
        raise ValueError("V' must start at the glued end")
    if tuple(Vp.tests) != tuple(V.tests) or Vp.category is not V.category:
        raise ValueError("V and V' must share category and test objects")
    cones = build_iterated_cones(V)
    cones_p = build_iterated_cones(Vp)
    base = cones.top.base
    objs = base.objects
    psi_p = comparison_morphism(Vp, cones_p)  # Y(L_i) -> M'_r
    inv = _invert_degree_one(psi_p)
    r = len(Vp.ends)
    ydim = [{x: cones_p.yonedas[L].dim(x) for x in objs} for L in Vp.ends]

    connecting = [dict(c) for c in V.connecting[: max(i - 2, 0)]]
    if i == 1:
        connecting += [dict(c) for c in Vp.connecting]
        current = cones_p.top
    else:
        # ũ_q = (φ'_q, ψ∘β_q on Y(L'_q)) with ψ = φ_i∘ψ_p^{-1}: M'_r -> M_{i-1}
        psi = compose_module_morphisms(cones.morphisms[i - 2], _rebase_morphism(inv, base))
        current = cones.modules[i - 2]
        for q in range(r):
            offs = {x: sum(ydim[t][x] for t in range(q + 1, r)) for x in objs}
            src = _rebase(cones_p.yonedas[Vp.ends[q]], base)
            lead = cones_p.modules[q - 1] if q else None
            comps = {}
            for key, arr in psi.nu.components.items():
                xl, x0 = key[-1], key[0]
                sub = arr[..., offs[xl]:offs[xl] + ydim[q][xl], :]
                if not sub.any():
                    continue
                a = lead.dim(x0) if lead is not None else 0
                out = np.zeros(sub.shape[:-1] + (current.dim(x0),), dtype=np.uint8)
                out[..., a:] = sub
                comps[key] = out
            if q:
                for key, arr in Vp.connecting[q - 1].items():
                    x0 = key[0]
                    if key not in comps:
                        comps[key] = np.zeros(arr.shape[:-1] + (current.dim(x0),), dtype=np.uint8)
                    comps[key][..., : arr.shape[-1]] ^= arr
            connecting.append(comps)
            current = cone(ModuleMorphism.build(src, current, comps), check=False)[0]
    # G: M_i -> current, ψ_p ⊕ id, then id ⊕ G along the remaining ends
    if i == 1:
        G = ModuleMorphism.build(cones.modules[0], current, psi_p.nu.components)
    else:
        Mi = cones.modules[i - 1]
        lead = {x: (psi_p.source.dim(x), psi_p.target.dim(x)) for x in objs}
        G = _direct_sum_morphism(Mi, current, lead, identity_morphism(cones.modules[i - 2]),
                                 {x: psi_p.degree_one(x).to_array().T for x in objs})
    for j in range(i + 1, len(V.ends) + 1):
        phi_j = compose_module_morphisms(G, cones.morphisms[j - 2])
        connecting.append(phi_j.nu.components)
        nxt = cone(ModuleMorphism.build(phi_j.source, current, phi_j.nu.components), check=False)[0]
        lead = {x: (phi_j.source.dim(x),) * 2 for x in objs}
        G = _direct_sum_morphism(cones.modules[j - 1], nxt, lead, G)
        current = nxt
    comparison = None
    if V.comparison is not None:
        comparison = compose_module_morphisms(G, comparison_morphism(V, cones)).nu.components
    ends = tuple(V.ends[: i - 1]) + tuple(Vp.ends) + tuple(V.ends[i:])
    return CobordismDatum(V.category, V.tests, ends, connecting, V.positive, comparison,
                          name or f"{V.name}#{Vp.name}")


def _rebase_morphism(nu: ModuleMorphism, base: AInfCategory) -> ModuleMorphism:
    return ModuleMorphism(_rebase(nu.source, base), _rebase(nu.target, base),
                          MixedExtendedMap(base.hom, nu.source.spaces, nu.target.spaces,
                                           nu.nu.components, nu.nu.cap))


def glued_composite(V: CobordismDatum, Vp: CobordismDatum, i: int, N) -> TSMorphism:
    """(id + ... + 𝒱′ + ... + id) ∘ 𝒱 at test object N."""
    outer = assemble_functor_value(Vp, N)
    cones = build_iterated_cones(V)
    pieces = [cones.yonedas[L].complex_at(N) for L in V.ends]
    total = None
    for j, c in enumerate(pieces, start=1):
        part = outer if j == i else identity_ts([c])
        total = part if total is None else sum_ts(total, part)
    return compose_ts(total, assemble_functor_value(V, N, cones))


def check_composition_compatibility(V: CobordismDatum, Vp: CobordismDatum, i: int,
                                    Vpp: CobordismDatum | None = None, witnesses: dict | None = None) -> Report:
    """assemble(V″) ≃ (id + 𝒱′ + id)∘assemble(V) at every test object.

    ``witnesses`` maps a test object to per-summand unipotent witnesses (as
    returned by ``ts_equivalence_witnesses``); objects without an entry get
    witnesses constructed by a linear solve.
    """
    rep = Report("composition-compatibility")
    Vpp = Vpp if Vpp is not None else glue(V, Vp, i)
    expected = tuple(V.ends[: i - 1]) + tuple(Vp.ends) + tuple(V.ends[i:])
    if tuple(Vpp.ends) != expected:
        rep.fail("glued datum has the wrong ends")
        return rep
    witnesses = witnesses or {}
    for N in V.tests:
        lhs = assemble_functor_value(Vpp, N)
        rhs = glued_composite(V, Vp, i, N)
        if N in witnesses:
            rep.merge(_supplied_equivalence(lhs, rhs, witnesses[N]), prefix=f"{N}: ")
        else:
            rep.merge(check_ts_equivalent(lhs, rhs), prefix=f"{N}: ")
    return rep


def _supplied_equivalence(lhs: TSMorphism, rhs: TSMorphism, wit) -> Report:
    from .chain import find_homotopy
    from .cones import equivalence_report, strictify

    rep = Report("supplied-witnesses")
    if wit is None or len(wit) != len(lhs.summands):
        raise MissingWitness("need one witness family per summand")
    for j, (a, b, w) in enumerate(zip(lhs.summands, rhs.summands, wit)):
        sa, Ja = strictify(a.eta)
        sb, Jb = strictify(b.eta)
        rep.merge(equivalence_report(sa, sb, w), prefix=f"summand {j}: ")
        if rep.passed:
            pa, pb = Ja @ a.phi, Jb @ b.phi
            if find_homotopy(ChainMap(pa.source, sb.total, w[-1].f @ pa.f), pb) is None:
                rep.fail(f"summand {j}: I_(k+1) phi is not homotopic to phi'")
    return rep


def check_datum_filtration(V: CobordismDatum, cones: IteratedCones | None = None) -> Report:
    """Filtration check on every module of the iterated cone."""
    cones = cones or build_iterated_cones(V)
    rep = Report("filtration")
    for j, (M, prof) in enumerate(zip(cones.modules, cones.profiles), start=1):
        rep.merge(check_filtration(M, prof), prefix=f"M{j}: ")
    rep.notes.append("higher snake compositions are user data; only the filtration pattern is checked")
    return rep


def identity_datum(A: AInfCategory, tests, L, name: str = "id") -> CobordismDatum:
    """Trivial cobordism L ⇝ (L) with φ_V = id."""
    comps = {}
    for x in tests:
        n = A.dim(x, L)
        if n:
            comps[(x,)] = np.eye(n, dtype=np.uint8)
    return CobordismDatum(A, tuple(tests), (L,), [], L, comps, name)
