"""Cone decompositions in the homotopy category of chain complexes and the
category of triangle resolutions built on them.

Translation is the identity (ungraded), so every shift index is 0.  A cone
decomposition is a tower of triangles X_i -u-> Y_i -v-> Y_{i+1} -w-> X_i with
Y_1 = 0.  Each triangle carries a witness t: Y_{i+1} -> Cone(u_i).  A strict
decomposition has Y_{i+1} = Cone(u_i) on X_i ⊕ Y_i and t = id, so the total
complex has basis X_k ⊕ X_{k-1} ⊕ ... ⊕ X_1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chain import (
    ChainComplex,
    ChainMap,
    cone_of_chain_map,
    find_homotopy,
    homotopy_inverse,
    induced_on_homology,
    is_quasi_iso,
    mat_of,
)
from .errors import LengthMismatch, NoHomotopyInverse, TupleMismatch
from .f2 import BitMatrix, Reducer, inverse
from .report import Report


@dataclass(frozen=True)
class Triangle:
    u: ChainMap  # X -> Y
    v: ChainMap  # Y -> Z
    w: ChainMap  # Z -> X
    t: ChainMap | None = None  # Z -> Cone(u)

    @property
    def X(self) -> ChainComplex:
        return self.u.source

    @property
    def Y(self) -> ChainComplex:
        return self.u.target

    @property
    def Z(self) -> ChainComplex:
        return self.v.target


@dataclass(frozen=True)
class ConeDecomposition:
    triangles: tuple
    shifts: tuple = ()

    @property
    def length(self) -> int:
        return len(self.triangles)

    @property
    def linearization(self) -> tuple:
        return tuple(t.X for t in self.triangles)

    @property
    def total(self) -> ChainComplex:
        return self.triangles[-1].Z if self.triangles else ChainComplex.zero()

    def stage(self, i: int) -> ChainComplex:
        """Y_{i+1} for 0-based i (stage(0) = Y_1)."""
        if i == 0:
            return self.triangles[0].Y if self.triangles else ChainComplex.zero()
        return self.triangles[i - 1].Z

    def attaching_maps(self) -> list[BitMatrix]:
        return [t.u.f for t in self.triangles]

    def is_strict(self) -> bool:
        if not self.triangles or self.triangles[0].Y.dim:
            return False
        for tri in self.triangles:
            c, inc, proj = cone_of_chain_map(tri.u)
            if tri.Z != c or tri.v.f != inc.f or tri.w.f != proj.f:
                return False
            if tri.t is not None and tri.t.f != BitMatrix.identity(c.dim):
                return False
        return True


def strict_decomposition(pieces, attach) -> ConeDecomposition:
    """Iterated strict cones: Y_1 = 0 and Y_{i+1} = Cone(attach[i]: X_i -> Y_i)."""
    if len(pieces) != len(attach):
        raise LengthMismatch("one attaching map per piece")
    tris = []
    Y = ChainComplex.zero()
    for X, u in zip(pieces, attach):
        um = ChainMap(X, Y, u)
        c, inc, proj = cone_of_chain_map(um)
        tris.append(Triangle(um, inc, proj, c.identity()))
        Y = c
    return ConeDecomposition(tuple(tris))


def trivial_decomposition(x: ChainComplex) -> ConeDecomposition:
    """Length-one decomposition Cone(0: x -> 0) = x."""
    return strict_decomposition([x], [BitMatrix.zeros(0, x.dim)])


def check_cone_decomposition(eta: ConeDecomposition) -> Report:
    rep = Report("cone-decomposition")
    if not eta.triangles:
        rep.fail("empty decomposition")
        return rep
    if eta.triangles[0].Y.dim != 0:
        rep.fail("Y_1 is not zero")
    for i, tri in enumerate(eta.triangles, start=1):
        if i > 1 and eta.triangles[i - 2].Z != tri.Y:
            rep.fail(f"broken chain: Y_{i} differs between triangles {i - 1} and {i}")
            continue
        if not (tri.v.source == tri.Y and tri.w.source == tri.Z and tri.w.target == tri.X):
            rep.fail(f"triangle {i}: maps do not connect")
            continue
        for label, m in (("u", tri.u), ("v", tri.v), ("w", tri.w)):
            if not m.is_chain_map():
                rep.fail(f"triangle {i}: {label} is not a chain map")
        if tri.t is None:
            rep.fail(f"triangle {i}: missing witness")
            continue
        if not rep.passed:
            continue
        c, inc, proj = cone_of_chain_map(tri.u)
        if tri.t.source != tri.Z or tri.t.target != c or not tri.t.is_chain_map():
            rep.fail(f"triangle {i}: witness is not a chain map into Cone(u)")
            continue
        if not is_quasi_iso(tri.t):
            rep.fail(f"triangle {i}: witness is not a quasi-isomorphism")
            continue
        if induced_on_homology(tri.t @ tri.v) != induced_on_homology(inc):
            rep.fail(f"triangle {i}: [t][v] != [i]")
        if induced_on_homology(proj @ tri.t) != induced_on_homology(tri.w):
            rep.fail(f"triangle {i}: [pi][t] != [w]")
        rep.checked += 1
    return rep


def _cone_map(u: ChainMap, J: BitMatrix, target_cone: ChainComplex) -> BitMatrix:
    """id ⊕ J: Cone(u) -> Cone(J u)."""
    nx = u.source.dim
    return BitMatrix.blocks([
        [BitMatrix.identity(nx), BitMatrix.zeros(nx, J.cols)],
        [BitMatrix.zeros(J.rows, nx), J],
    ])


def strictify(eta: ConeDecomposition) -> tuple[ConeDecomposition, ChainMap]:
    """Strict decomposition with the same pieces and J: total -> strict total.

    J_{i+1} = (id ⊕ J_i)∘t_i carries each stage to its strict model.
    """
    J = BitMatrix.zeros(0, eta.stage(0).dim)
    pieces, attach = [], []
    for tri in eta.triangles:
        pieces.append(tri.X)
        attach.append(J @ tri.u.f)
        cone_map = _cone_map(tri.u, J, None)
        t = tri.t.f if tri.t is not None else BitMatrix.identity(tri.Z.dim)
        J = cone_map @ t
    strict = strict_decomposition(pieces, attach)
    return strict, ChainMap(eta.total, strict.total, J)


# ---------------------------------------------------------------------------
# equivalence


def equivalence_report(eta: ConeDecomposition, eta2: ConeDecomposition, witnesses) -> Report:
    """Squares of the comparison diagram commute up to homotopy, I_i quasi-isos."""
    rep = Report("equivalence")
    if eta.length != eta2.length:
        raise LengthMismatch(f"lengths {eta.length} and {eta2.length}")
    if eta.linearization != eta2.linearization:
        rep.fail("linearizations differ")
        return rep
    k = eta.length
    if len(witnesses) != k + 1:
        rep.fail("need k+1 witnesses")
        return rep
    I = []
    for i in range(k + 1):
        m = witnesses[i]
        m = m.f if isinstance(m, ChainMap) else m
        cm = ChainMap(eta.stage(i), eta2.stage(i), m)
        if not cm.is_chain_map():
            rep.fail(f"I_{i + 1} is not a chain map")
            return rep
        if not is_quasi_iso(cm):
            rep.fail(f"I_{i + 1} is not an isomorphism in the homotopy category")
        I.append(cm)
    for i, (t1, t2) in enumerate(zip(eta.triangles, eta2.triangles)):
        checks = (
            ("u", ChainMap(t1.X, t2.Y, I[i].f @ t1.u.f), t2.u),
            ("v", ChainMap(t1.Y, t2.Z, I[i + 1].f @ t1.v.f), ChainMap(t1.Y, t2.Z, t2.v.f @ I[i].f)),
            ("w", ChainMap(t1.Z, t2.X, t2.w.f @ I[i + 1].f), t1.w),
        )
        for label, a, b in checks:
            if find_homotopy(a, b) is None:
                rep.fail(f"square {label} at step {i + 1} does not commute up to homotopy")
        rep.checked += 1
    return rep


def check_equivalence(eta: ConeDecomposition, eta2: ConeDecomposition, witnesses) -> bool:
    return equivalence_report(eta, eta2, witnesses).passed


def _affine_solve(residual, sizes: list[int]):
    """Solve residual(x) = 0 for an affine residual over F2 by probing."""
    n = sum(sizes)
    r0 = residual(0)
    cols = [residual(1 << j) ^ r0 for j in range(n)]
    red = Reducer()
    for c in cols:
        red.add(c)
    return red.express(r0)


def _vec(m: BitMatrix) -> int:
    v = 0
    for r, row in enumerate(m.data):
        v |= row << (r * m.cols)
    return v


def unipotent_witnesses(eta: ConeDecomposition, eta2: ConeDecomposition,
                        phi: ChainMap | None = None, phi2: ChainMap | None = None):
    """Witnesses I_{i+1}(x, y) = (x, I_i y + K_i x) between strict decompositions.

    All K_i (and a homotopy for I_{k+1}φ ≃ φ2 when given) come from one
    linear system.  Returns the list of I's or None.
    """
    if eta.linearization != eta2.linearization or not (eta.is_strict() and eta2.is_strict()):
        return None
    pieces = eta.linearization
    k = len(pieces)
    ydims = [eta.stage(i).dim for i in range(k + 1)]
    sizes = [ydims[i] * pieces[i].dim for i in range(k)]
    if phi is not None:
        sizes.append(eta2.total.dim * phi.source.dim)
    offsets = list(itertools.accumulate([0] + sizes))

    def build(x: int):
        Ks = [mat_of((x >> offsets[i]) & ((1 << sizes[i]) - 1), ydims[i], pieces[i].dim) for i in range(k)]
        Is = [BitMatrix.zeros(0, 0)]
        for i in range(k):
            nx = pieces[i].dim
            Is.append(BitMatrix.blocks([
                [BitMatrix.identity(nx), BitMatrix.zeros(nx, ydims[i])],
                [Ks[i], Is[i]],
            ]))
        return Ks, Is

    def residual(x: int) -> int:
        Ks, Is = build(x)
        out, shift = 0, 0
        for i, (t1, t2) in enumerate(zip(eta.triangles, eta2.triangles)):
            r = Is[i] @ t1.u.f + t2.u.f + t2.Y.d @ Ks[i] + Ks[i] @ t1.X.d
            out |= _vec(r) << shift
            shift += r.rows * r.cols
        if phi is not None:
            H = mat_of((x >> offsets[k]) & ((1 << sizes[k]) - 1), eta2.total.dim, phi.source.dim)
            r = Is[k] @ phi.f + phi2.f + eta2.total.d @ H + H @ phi.source.d
            out |= _vec(r) << shift
        return out

    sol = _affine_solve(residual, sizes)
    if sol is None:
        return None
    _, Is = build(sol)
    return [ChainMap(eta.stage(i), eta2.stage(i), Is[i]) for i in range(k + 1)]


# ---------------------------------------------------------------------------
# triangle resolutions


@dataclass(frozen=True)
class TSTriple:
    """(φ: x -> a, a, η) with η a cone decomposition of a."""

    phi: ChainMap
    eta: ConeDecomposition
    shift: int = 0

    @property
    def source(self) -> ChainComplex:
        return self.phi.source

    @property
    def pieces(self) -> tuple:
        return self.eta.linearization


@dataclass(frozen=True)
class TSMorphism:
    """(x_1..x_n) -> (y_1..y_q): one triple per source object, blocks in order."""

    source: tuple
    target: tuple
    summands: tuple

    def __post_init__(self):
        if len(self.source) != len(self.summands):
            raise TupleMismatch("one summand per source object")
        pieces = tuple(p for s in self.summands for p in s.pieces)
        if pieces != tuple(self.target):
            raise TupleMismatch("linearizations do not concatenate to the target")
        for x, s in zip(self.source, self.summands):
            if s.phi.source != x:
                raise TupleMismatch("summand source differs from the source object")
            if s.phi.target != s.eta.total:
                raise TupleMismatch("phi does not land in the decomposed object")

    def blocks(self) -> list[tuple[int, int]]:
        """(alpha, length) per summand, 0-based."""
        out, pos = [], 0
        for s in self.summands:
            out.append((pos, s.eta.length))
            pos += s.eta.length
        return out


def identity_ts(objects) -> TSMorphism:
    objs = tuple(objects)
    return TSMorphism(objs, objs, tuple(TSTriple(x.identity(), trivial_decomposition(x)) for x in objs))


def lift_iso(phi: ChainMap) -> TSMorphism:
    """The morphism x -> (y) given by (φ, y, trivial)."""
    if not is_quasi_iso(phi):
        raise NoHomotopyInverse("lift needs an isomorphism")
    return TSMorphism((phi.source,), (phi.target,), (TSTriple(phi, trivial_decomposition(phi.target)),))


def sum_ts(a: TSMorphism, b: TSMorphism) -> TSMorphism:
    return TSMorphism(a.source + b.source, a.target + b.target, a.summands + b.summands)


def _inverse_data(phi: ChainMap):
    """(φ^{-1}, K) with φ^{-1}φ = id + dK + Kd; exact inverse when φ is invertible."""
    inv = inverse(phi.f)
    n = phi.source.dim
    if inv is not None:
        return inv, BitMatrix.zeros(n, n)
    g = homotopy_inverse(phi)
    K = find_homotopy(g @ phi, phi.source.identity())
    if K is None:  # pragma: no cover - guaranteed for quasi-isos over a field
        raise NoHomotopyInverse("no homotopy for the inverse")
    return g.f, K


def _step(phi_p: BitMatrix, pieces: list, attach: list, h: int, psi: TSTriple):
    """Replace piece h of a strict decomposition by the decomposition of psi."""
    strict_psi, J = strictify(psi.eta)
    phi = ChainMap(psi.phi.source, strict_psi.total, J.f @ psi.phi.f)
    ginv, K = _inverse_data(phi)
    base = strict_decomposition(pieces, attach)
    Yh = base.stage(h)
    uh = attach[h]
    zs = list(strict_psi.linearization)
    us = strict_psi.attaching_maps()
    l = len(zs)
    adim = strict_psi.total.dim
    new_pieces = list(pieces[:h])
    new_attach = list(attach[:h])
    stage_dims = [strict_psi.stage(q).dim for q in range(l + 1)]

    def alpha(q: int) -> BitMatrix:
        # α_q = u'_h φ^{-1} β_q, β_q the inclusion of the trailing a_q
        aq = stage_dims[q]
        beta = BitMatrix.blocks([[BitMatrix.zeros(adim - aq, aq)], [BitMatrix.identity(aq)]])
        return uh @ ginv @ beta

    for q in range(l):
        z = zs[q]
        a_next = alpha(q + 1)
        tail = a_next.block(0, a_next.rows, 0, z.dim)
        new_pieces.append(z)
        new_attach.append(BitMatrix.blocks([[us[q]], [tail]]))
    # G_{h+1}: y_h ⊕ Y'_h -> a ⊕ Y'_h
    G = BitMatrix.blocks([
        [phi.f, BitMatrix.zeros(adim, Yh.dim)],
        [uh @ K, BitMatrix.identity(Yh.dim)],
    ])
    for j in range(h + 1, len(pieces)):
        new_pieces.append(pieces[j])
        new_attach.append(G @ attach[j])
        nx = pieces[j].dim
        G = BitMatrix.blocks([
            [BitMatrix.identity(nx), BitMatrix.zeros(nx, G.cols)],
            [BitMatrix.zeros(G.rows, nx), G],
        ])
    return G @ phi_p, new_pieces, new_attach


def _is_identity_triple(t: TSTriple) -> bool:
    return (t.eta.length == 1 and t.eta.is_strict() and t.phi.f == BitMatrix.identity(t.phi.source.dim))


def compose_ts(Phi: TSMorphism, Phi_p: TSMorphism) -> TSMorphism:
    """Φ∘Φ′ for Φ′: x -> y and Φ: y -> z."""
    if tuple(Phi_p.target) != tuple(Phi.source):
        raise TupleMismatch("target of the first morphism is not the source of the second")
    out = []
    for (alpha, length), trip in zip(Phi_p.blocks(), Phi_p.summands):
        strict, J = strictify(trip.eta)
        phi = (J @ trip.phi).f
        pieces = list(strict.linearization)
        attach = strict.attaching_maps()
        for h in range(length - 1, -1, -1):
            psi = Phi.summands[alpha + h]
            if _is_identity_triple(psi):
                continue
            phi, pieces, attach = _step(phi, pieces, attach, h, psi)
        eta = strict_decomposition(pieces, attach)
        out.append(TSTriple(ChainMap(trip.source, eta.total, phi), eta))
    return TSMorphism(Phi_p.source, Phi.target, tuple(out))


def project_ts(Phi: TSMorphism) -> ChainMap:
    """𝒫(Φ) = w_k∘φ of the last summand: x_n -> y_q."""
    last = Phi.summands[-1]
    w = last.eta.triangles[-1].w
    return w @ last.phi


def ts_equivalence_witnesses(Phi: TSMorphism, Phi2: TSMorphism):
    """Per-summand unipotent witnesses after strictification, or None."""
    if Phi.source != Phi2.source or Phi.target != Phi2.target:
        return None
    out = []
    for a, b in zip(Phi.summands, Phi2.summands):
        sa, Ja = strictify(a.eta)
        sb, Jb = strictify(b.eta)
        w = unipotent_witnesses(sa, sb, Ja @ a.phi, Jb @ b.phi)
        if w is None:
            return None
        out.append((sa, sb, Ja @ a.phi, Jb @ b.phi, w))
    return out


def check_ts_equivalent(Phi: TSMorphism, Phi2: TSMorphism) -> Report:
    """Certificate-checked equivalence of two morphisms with constructed witnesses."""
    rep = Report("ts-equivalence")
    data = ts_equivalence_witnesses(Phi, Phi2)
    if data is None:
        rep.fail("no unipotent equivalence witnesses found")
        return rep
    for j, (sa, sb, pa, pb, w) in enumerate(data):
        r = equivalence_report(sa, sb, w)
        rep.merge(r, prefix=f"summand {j}: ")
        phi_ok = find_homotopy(ChainMap(pa.source, sb.total, w[-1].f @ pa.f), pb) is not None
        if not phi_ok:
            rep.fail(f"summand {j}: I_(k+1) phi is not homotopic to phi'")
    return rep


# ---------------------------------------------------------------------------
# index arithmetic


@dataclass(frozen=True)
class MorseIndexProfile:
    entries: tuple
    exit: int

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("need k >= 1")
        if any(e not in (0, 1) for e in self.entries) or self.exit not in (0, 1):
            raise ValueError("indices must be 0 or 1")

    @property
    def k(self) -> int:
        return len(self.entries)


def fredholm_index(p: MorseIndexProfile) -> int:
    return sum(p.entries) - p.exit - (p.k - 1)


def classify_nonconstant(p: MorseIndexProfile) -> list[str]:
    """Cases of the non-constant classification that apply to the profile.

    '0a': k = 1 and equal indices; '0b': k >= 2 and every index 1;
    '0c': exit 0 and exactly one entry 0; '1': entries all 1 and exit 0.
    An empty list means no non-constant solution can have this profile.
    """
    cases = []
    e, x = p.entries, p.exit
    if p.k == 1 and e[0] == x:
        cases.append("0a")
    if p.k >= 2 and all(v == 1 for v in e) and x == 1:
        cases.append("0b")
    if x == 0 and sum(1 for v in e if v == 0) == 1:
        cases.append("0c")
    if all(v == 1 for v in e) and x == 0:
        cases.append("1")
    return cases


def predicted_index(cases: list[str]) -> int | None:
    if not cases:
        return None
    vals = {0 if c.startswith("0") else 1 for c in cases}
    return vals.pop() if len(vals) == 1 else -1


def constant_index_zero(p: MorseIndexProfile) -> bool:
    """The two cases where a constant solution has index 0."""
    return (p.k == 1 and p.entries[0] == p.exit) or (p.k >= 2 and all(v == 1 for v in p.entries) and p.exit == 1)


def all_profiles(k: int):
    for bits_ in itertools.product((0, 1), repeat=k + 1):
        yield MorseIndexProfile(tuple(bits_[:k]), bits_[k])
