"""Seeded random instances for property tests and experiment scripts."""

from __future__ import annotations

import itertools
import random

import numpy as np

from .category import DEFAULT_CAP, AInfCategory, change_basis, dg_category, matrix_to_hom_vector
from .chain import ChainComplex, ChainMap, cone_of_chain_map
from .cones import TSMorphism, TSTriple, strict_decomposition
from .f2 import BitMatrix, inverse


def rng(seed=None) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_matrix(r: random.Random, rows: int, cols: int) -> BitMatrix:
    return BitMatrix(rows, cols, tuple(r.getrandbits(cols) if cols else 0 for _ in range(rows)))


def random_invertible(r: random.Random, n: int) -> BitMatrix:
    while True:
        m = random_matrix(r, n, n)
        if inverse(m) is not None:
            return m


def random_complex(r: random.Random, dim: int) -> ChainComplex:
    """Random d with d·d = 0: a conjugated block of elementary pairs."""
    r = rng(r)
    k = r.randint(0, dim // 2)
    cols = [0] * dim
    for i in range(k):
        cols[2 * i + 1] = 1 << (2 * i)
    std = BitMatrix.from_columns(cols, dim)
    if dim == 0:
        return ChainComplex.zero()
    p = random_invertible(r, dim)
    return ChainComplex(dim, p @ std @ inverse(p))


def random_chain_map(r: random.Random, x: ChainComplex, y: ChainComplex) -> ChainMap:
    """Random homology-level map plus a random null-homotopic part."""
    r = rng(r)
    hx, hy = x.homology, y.homology
    m = random_matrix(r, hy.rank, hx.rank)
    f = hy.inclusion @ m @ hx.proj
    h = random_matrix(r, y.dim, x.dim)
    return ChainMap(x, y, f + y.d @ h + h @ x.d)


def random_strict_decomposition(r: random.Random, pieces):
    r = rng(r)
    attach = []
    y = ChainComplex.zero()
    for x in pieces:
        u = random_chain_map(r, x, y)
        attach.append(u.f)
        y = cone_of_chain_map(u)[0]
    return strict_decomposition(list(pieces), attach)


def random_quasi_iso_into(r: random.Random, a: ChainComplex) -> ChainMap:
    """A quasi-isomorphism x -> a, x = a or a ⊕ (acyclic pair), perturbed by a homotopy."""
    r = rng(r)
    if r.random() < 0.5:
        x = a.direct_sum(ChainComplex.from_images([0, 1]))
        f = BitMatrix.blocks([[BitMatrix.identity(a.dim), BitMatrix.zeros(a.dim, 2)]])
    else:
        x = a
        f = BitMatrix.identity(a.dim)
    h = random_matrix(r, a.dim, x.dim)
    return ChainMap(x, a, f + a.d @ h + h @ x.d)


def random_triple(r: random.Random, pieces) -> TSTriple:
    r = rng(r)
    eta = random_strict_decomposition(r, pieces)
    return TSTriple(random_quasi_iso_into(r, eta.total), eta)


def random_ts_morphism(r: random.Random, target, block_sizes) -> TSMorphism:
    """Morphism into ``target`` whose summands cover consecutive blocks."""
    r = rng(r)
    trips, pos = [], 0
    for n in block_sizes:
        trips.append(random_triple(r, target[pos:pos + n]))
        pos += n
    return TSMorphism(tuple(t.source for t in trips), tuple(target), tuple(trips))


def random_partition(r: random.Random, n: int) -> list[int]:
    sizes, left = [], n
    while left:
        s = r.randint(1, left)
        sizes.append(s)
        left -= s
    return sizes


def random_composable_chain(r: random.Random, length: int, max_dim: int = 2, max_final: int = 3):
    """Morphisms [Φ_1, ..., Φ_length] with Φ_{i+1}∘Φ_i defined; the last one
    lands in a tuple of random complexes."""
    r = rng(r)
    target = [random_complex(r, r.randint(1, max_dim)) for _ in range(r.randint(1, max_final))]
    out = []
    for _ in range(length):
        phi = random_ts_morphism(r, target, random_partition(r, len(target)))
        out.append(phi)
        target = list(phi.source)
    return list(reversed(out))


def random_dg_category(r: random.Random, n_objects: int = 3, dims=(1, 2), twist: bool = True,
                       name: str = "A", cap: int = 4) -> AInfCategory:
    """dg-category of random complexes with a random basis change on each hom."""
    r = rng(r)
    cs = {f"X{i}": random_complex(r, r.choice(dims)) for i in range(n_objects)}
    A = dg_category(name, cs, cap)
    if twist:
        gens = {k: random_invertible(r, n) for k, n in A.dims.items() if n}
        A = change_basis(A, gens)
    return A


def flip_entry(r: random.Random, A: AInfCategory) -> AInfCategory:
    """Flip one table entry of one stored component."""
    r = rng(r)
    key = r.choice(sorted(A.components, key=repr))
    arr = A.components[key].copy()
    idx = tuple(r.randrange(s) for s in arr.shape)
    arr[idx] ^= 1
    comps = dict(A.components)
    comps[key] = arr
    return A.with_components(comps)


def random_array(r: random.Random, shape) -> np.ndarray:
    r = rng(r)
    n = int(np.prod(shape)) if shape else 1
    return np.array([r.getrandbits(1) for _ in range(n)], dtype=np.uint8).reshape(shape)


# ---------------------------------------------------------------------------
# cobordism data


def _chain_tower(r, complexes: dict, ends: list, prefix: str):
    """Chain maps f_j: L_j -> C_{j-1} and cones C_j = Cone(f_j); C_1 = L_1."""
    names = [ends[0]]
    fs = []
    for j in range(1, len(ends)):
        f = random_chain_map(r, complexes[ends[j]], complexes[names[-1]])
        c = cone_of_chain_map(f)[0]
        name = f"{prefix}{j + 1}"
        complexes[name] = c
        names.append(name)
        fs.append(f.f)
    return names, fs


def random_premorphism(r, source, target, max_arity: int = 2, density: float = 0.3) -> dict:
    r = rng(r)
    base = source.base
    comps = {}
    for k in range(1, max_arity + 1):
        for key in itertools.product(base.objects, repeat=k):
            shape = tuple(base.dim(key[i], key[i + 1]) for i in range(k - 1)) + (source.dim(key[-1]), target.dim(key[0]))
            if 0 in shape:
                continue
            n = int(np.prod(shape))
            arr = np.array([r.random() < density for _ in range(n)], dtype=np.uint8).reshape(shape)
            if arr.any():
                comps[key] = arr
    return comps


def _datum(r, A, tests, ends, cone_names, fs, perturb: bool, name: str, null_end: bool = False):
    from .cobordism import CobordismDatum, _direct_sum_morphism, _rebase
    from .modules import (ModuleMorphism, compose_module_morphisms, cone, identity_morphism, module_mu1,
                          yoneda_module, yoneda_morphism)

    Y = {L: yoneda_module(A, L, tests) for L in set(ends) | set(cone_names)}
    base = Y[ends[0]].base
    Y = {k: _rebase(v, base) for k, v in Y.items()}
    M = Y[ends[0]]
    theta = identity_morphism(M)
    connecting = []
    for j in range(1, len(ends)):
        src = Y[ends[j]]
        yf = yoneda_morphism(A, (ends[j], cone_names[j - 1]), [matrix_to_hom_vector(fs[j - 1])],
                             src, Y[cone_names[j - 1]])
        nu = compose_module_morphisms(theta, yf)
        if perturb:
            rho = ModuleMorphism.build(src, M, random_premorphism(r, src, M))
            nu = nu + module_mu1(rho)
        connecting.append(nu.nu.components)
        Cn = cone(ModuleMorphism.build(src, M, nu.nu.components), check=False)[0]
        Cy = Y[cone_names[j]]
        Cmid = cone(ModuleMorphism.build(src, M, compose_module_morphisms(theta, yf).nu.components), check=False)[0]
        lead = {x: (src.dim(x),) * 2 for x in base.objects}
        step = _direct_sum_morphism(Cy, Cmid, lead, theta)
        if perturb:
            comps = {}
            for key, arr in rho.nu.components.items():
                x0, xl = key[0], key[-1]
                out = np.zeros(arr.shape[:-2] + (Cn.dim(xl), Cn.dim(x0)), dtype=np.uint8)
                out[..., : src.dim(xl), src.dim(x0):] = arr
                comps[key] = out
            for x in base.objects:
                if Cn.dim(x):
                    comps[(x,)] = comps.get((x,), np.zeros((Cn.dim(x),) * 2, dtype=np.uint8)) ^ np.eye(Cn.dim(x), dtype=np.uint8)
            tilde = ModuleMorphism.build(Cmid, Cn, comps)
            theta = compose_module_morphisms(tilde, step)
        else:
            theta = step
        theta = ModuleMorphism.build(Cy, Cn, theta.nu.components)
        M = Cn
    if null_end:
        top = cone_names[-1]
        connecting.append(theta.nu.components)
        return CobordismDatum(A, tuple(tests), tuple(ends) + (top,), connecting, None, None, name)
    return CobordismDatum(A, tuple(tests), tuple(ends), connecting, cone_names[-1], theta.nu.components, name)


def _fitting_cap(n_ends: int, cap: int | None = None) -> int:
    # composed connecting maps reach arity n_ends + 1; a smaller cap would truncate them
    need = max(DEFAULT_CAP, n_ends + 1)
    if cap is not None and cap < need:
        raise ValueError(f"cap {cap} truncates a datum with {n_ends} ends (need {need})")
    return cap if cap is not None else need


def random_cobordism_datum(r, n_tests: int = 2, m: int = 3, perturb: bool = True, dims=(1, 2),
                           null: bool = False, cap: int | None = None):
    """Random datum L ⇝ (L_1..L_m) in a dg-category of complexes.

    With ``null`` the last end is the top cone itself, attached by an
    isomorphism, so the final module is acyclic and there is no positive end.
    The default cap fits every generated component (arity grows with m).
    """
    r = rng(r)
    cap = _fitting_cap(m + int(null), cap)
    complexes = {f"N{i}": random_complex(r, r.choice(dims)) for i in range(n_tests)}
    ends = [f"L{j + 1}" for j in range(m)]
    for e in ends:
        complexes[e] = random_complex(r, r.choice(dims))
    names, fs = _chain_tower(r, complexes, ends, "C")
    A = dg_category("Ch", complexes, cap)
    return _datum(r, A, list(complexes)[:n_tests], ends, names, fs, perturb, "V", null)


def random_gluing_pair(r, n_tests: int = 2, m: int = 2, r_ends: int = 2, i: int | None = None,
                       perturb: bool = True, dims=(1, 2), cap: int | None = None):
    """(V, V′, i) with V′ starting at the i-th end of V; V′ has an arity-1 end comparison."""
    r = rng(r)
    cap = _fitting_cap(m + r_ends - 1, cap)
    complexes = {f"N{t}": random_complex(r, r.choice(dims)) for t in range(n_tests)}
    k_ends = [f"K{q + 1}" for q in range(r_ends)]
    for e in k_ends:
        complexes[e] = random_complex(r, r.choice(dims))
    k_names, k_fs = _chain_tower(r, complexes, k_ends, "D")
    i = i if i is not None else r.randint(1, m)
    ends = []
    for j in range(m):
        if j + 1 == i:
            ends.append(k_names[-1])
        else:
            ends.append(f"L{j + 1}")
            complexes[ends[-1]] = random_complex(r, r.choice(dims))
    names, fs = _chain_tower(r, complexes, ends, "C")
    A = dg_category("Ch", complexes, cap)
    tests = list(complexes)[:n_tests]
    V = _datum(r, A, tests, ends, names, fs, perturb, "V")
    Vp = _datum(r, A, tests, k_ends, k_names, k_fs, False, "W")
    return V, Vp, i
