"""Extended multilinear maps and the compositions between them.

A component of arity k is a dense uint8 array of shape
``(in_1, ..., in_k, out)``; entry ``[b_1, ..., b_k, c]`` is the coefficient
of output basis vector c in the value on the basis tuple (b_1, ..., b_k).
Regular maps key components by the object tuple (i_0, ..., i_k), so input j
lives in hom(i_{j-1}, i_j).  Mixed maps key by (i_0, ..., i_{k-1}): the first
k-1 inputs are morphisms and the last input lies in the module space at
i_{k-1}; the output lies in the output space at i_0.

Every composition reduces to one substitution routine: walk over the
components of an outer map, assign a block kind to each of its slots
according to a pattern, chain inner components whose objects line up and
contract.  Arithmetic is uint8; wrap-around is modulo 256, which preserves
parity, and results are reduced with ``& 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Mapping

import numpy as np

from .errors import CollectionMismatch

Obj = Hashable
Key = tuple


@dataclass(frozen=True)
class HomCollection:
    """Hom spaces hom(x, y) of dimension dims[(x, y)] (missing pairs are 0)."""

    name: str
    objects: tuple
    dims: Mapping = field(hash=False, compare=False)

    def dim(self, x, y) -> int:
        return self.dims.get((x, y), 0)

    def same_as(self, other: "HomCollection") -> bool:
        return self.objects == other.objects and all(
            self.dim(x, y) == other.dim(x, y) for x in self.objects for y in self.objects
        )


@dataclass(frozen=True)
class SpaceCollection:
    """Vector spaces M(x) of dimension dims[x], one per object."""

    name: str
    objects: tuple
    dims: Mapping = field(hash=False, compare=False)

    def dim(self, x) -> int:
        return self.dims.get(x, 0)

    def same_as(self, other: "SpaceCollection") -> bool:
        return self.objects == other.objects and all(self.dim(x) == other.dim(x) for x in self.objects)


def _prune(comps: dict) -> dict:
    return {k: (v & 1).astype(np.uint8) for k, v in comps.items() if (v & 1).any()}


def _add_into(acc: dict, key, arr) -> None:
    if key in acc:
        acc[key] = acc[key] ^ arr
    else:
        acc[key] = arr


class _MapBase:
    components: dict
    cap: int

    def arities(self) -> set[int]:
        return {self.arity_of(k) for k in self.components}

    def component(self, key) -> np.ndarray:
        c = self.components.get(tuple(key))
        return c if c is not None else np.zeros(self.shape(tuple(key)), dtype=np.uint8)

    def is_zero(self) -> bool:
        return not self.components

    def _same_comps(self, other) -> bool:
        if set(self.components) != set(other.components):
            return False
        return all(np.array_equal(self.components[k], other.components[k]) for k in self.components)


@dataclass(eq=False)
class ExtendedMap(_MapBase):
    """F: source hom collection -> target hom collection with an object map."""

    source: HomCollection
    target: HomCollection
    index_map: dict
    components: dict
    cap: int = 4

    def __post_init__(self):
        self.components = _prune({tuple(k): np.asarray(v, dtype=np.uint8) for k, v in self.components.items()})
        for k, v in self.components.items():
            if len(k) < 2:
                raise CollectionMismatch(f"component key {k} has arity 0")
            if v.shape != self.shape(k):
                raise CollectionMismatch(f"component {k} has shape {v.shape}, expected {self.shape(k)}")
        self.components = {k: v for k, v in self.components.items() if len(k) - 1 <= self.cap}

    @staticmethod
    def arity_of(key) -> int:
        return len(key) - 1

    def shape(self, key) -> tuple:
        f = self.index_map
        ins = tuple(self.source.dim(key[i], key[i + 1]) for i in range(len(key) - 1))
        return ins + (self.target.dim(f[key[0]], f[key[-1]]),)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtendedMap)
            and self.index_map == other.index_map
            and self._same_comps(other)
        )

    def __add__(self, other: "ExtendedMap") -> "ExtendedMap":
        if self.index_map != other.index_map:
            raise CollectionMismatch("cannot add maps with different object actions")
        comps = dict(self.components)
        for k, v in other.components.items():
            _add_into(comps, k, v)
        return ExtendedMap(self.source, self.target, self.index_map, comps, max(self.cap, other.cap))

    __sub__ = __add__

    def with_components(self, comps: dict, cap: int | None = None) -> "ExtendedMap":
        return ExtendedMap(self.source, self.target, self.index_map, comps, self.cap if cap is None else cap)

    def truncate(self, cap: int) -> "ExtendedMap":
        return ExtendedMap(self.source, self.target, self.index_map,
                           {k: v for k, v in self.components.items() if len(k) - 1 <= cap}, cap)

    def arity_part(self, k: int) -> "ExtendedMap":
        return self.with_components({key: v for key, v in self.components.items() if len(key) - 1 == k})

    @classmethod
    def identity(cls, coll: HomCollection, cap: int = 4) -> "ExtendedMap":
        comps = {}
        for x in coll.objects:
            for y in coll.objects:
                n = coll.dim(x, y)
                if n:
                    comps[(x, y)] = np.eye(n, dtype=np.uint8)
        return cls(coll, coll, {x: x for x in coll.objects}, comps, cap)

    @classmethod
    def zero(cls, source: HomCollection, target: HomCollection, index_map=None, cap: int = 4) -> "ExtendedMap":
        if index_map is None:
            index_map = {x: x for x in source.objects}
        return cls(source, target, dict(index_map), {}, cap)

    def evaluate(self, key, vectors) -> np.ndarray:
        """Value on a tuple of input vectors (dense 0/1 arrays)."""
        arr = self.components.get(tuple(key))
        if arr is None:
            return np.zeros(self.shape(tuple(key))[-1], dtype=np.uint8)
        out = arr.astype(np.int64)
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=np.int64), out, axes=([0], [0]))
        return (out & 1).astype(np.uint8)


@dataclass(eq=False)
class MixedExtendedMap(_MapBase):
    """Q: (category inputs..., module input) -> output space; identity on objects."""

    category: HomCollection
    module_in: SpaceCollection
    module_out: SpaceCollection
    components: dict
    cap: int = 4

    def __post_init__(self):
        self.components = _prune({tuple(k): np.asarray(v, dtype=np.uint8) for k, v in self.components.items()})
        for k, v in self.components.items():
            if len(k) < 1:
                raise CollectionMismatch("empty mixed key")
            if v.shape != self.shape(k):
                raise CollectionMismatch(f"component {k} has shape {v.shape}, expected {self.shape(k)}")
        self.components = {k: v for k, v in self.components.items() if len(k) <= self.cap}

    @staticmethod
    def arity_of(key) -> int:
        return len(key)

    def shape(self, key) -> tuple:
        ins = tuple(self.category.dim(key[i], key[i + 1]) for i in range(len(key) - 1))
        return ins + (self.module_in.dim(key[-1]), self.module_out.dim(key[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, MixedExtendedMap) and self._same_comps(other)

    def __add__(self, other: "MixedExtendedMap") -> "MixedExtendedMap":
        comps = dict(self.components)
        for k, v in other.components.items():
            _add_into(comps, k, v)
        return MixedExtendedMap(self.category, self.module_in, self.module_out, comps, max(self.cap, other.cap))

    __sub__ = __add__

    def with_components(self, comps: dict, cap: int | None = None) -> "MixedExtendedMap":
        return MixedExtendedMap(self.category, self.module_in, self.module_out, comps,
                                self.cap if cap is None else cap)

    def arity_part(self, k: int) -> "MixedExtendedMap":
        return self.with_components({key: v for key, v in self.components.items() if len(key) == k})

    def degree_one(self, x) -> np.ndarray:
        """Matrix (out x in) of the arity-1 part at object x."""
        return self.component((x,)).T

    @classmethod
    def identity(cls, category: HomCollection, spaces: SpaceCollection, cap: int = 4) -> "MixedExtendedMap":
        comps = {(x,): np.eye(spaces.dim(x), dtype=np.uint8) for x in spaces.objects if spaces.dim(x)}
        return cls(category, spaces, spaces, comps, cap)

    @classmethod
    def zero(cls, category, module_in, module_out, cap: int = 4) -> "MixedExtendedMap":
        return cls(category, module_in, module_out, {}, cap)


# ---------------------------------------------------------------------------
# substitution engine


@dataclass
class Block:
    """One kind of slot filler.

    kind: 'map' (components of a regular or mixed map), 'id' (passes one
    morphism input through), 'zero' (zero-ary element per object), 'modid'
    (passes the module input through).  ``start``/``end`` send the actual
    input objects to the outer map's objects.
    """

    kind: str
    comps: dict = field(default_factory=dict)
    start: Callable = lambda o: o
    end: Callable = lambda o: o
    coll: HomCollection | None = None
    mixed: bool = False
    by_start: dict = field(default_factory=dict, init=False)

    def __post_init__(self):
        if self.kind == "map":
            for k, arr in self.comps.items():
                self.by_start.setdefault(k[0], []).append((k, arr))


@lru_cache(maxsize=None)
def _assignments(pattern: tuple, m: int) -> tuple:
    """All sequences of pattern indices of length m respecting multiplicities."""
    out = []

    def rec(stage: int, acc: tuple):
        if stage == len(pattern):
            if len(acc) == m:
                out.append(acc)
            return
        mult = pattern[stage]
        room = m - len(acc)
        lo = 1 if mult in ("1", "+") else 0
        hi = 1 if mult == "1" else room
        for c in range(lo, hi + 1):
            if c <= room:
                rec(stage + 1, acc + (stage,) * c)

    rec(0, ())
    return tuple(out)


def substitute(outer_comps: dict, outer_mixed: bool, pattern, blocks: list[Block]) -> dict:
    """Sum over outer components and block fillings; returns raw components.

    ``pattern`` is a tuple of multiplicities ('1', '+', '*'), one per block.
    Output keys are the actual object sequences visited by the inputs; for a
    mixed outer map the last slot consumes the module input and the output
    key ends at the module's object.
    """
    result: dict = {}
    mults = tuple(pattern)
    for okey, oarr in outer_comps.items():
        m = len(okey) if outer_mixed else len(okey) - 1
        for assign in _assignments(mults, m):
            _fill(okey, oarr, outer_mixed, [blocks[s] for s in assign], result)
    return result


def _fill(okey, oarr, outer_mixed, slot_blocks, result):
    m = len(slot_blocks)

    def bounds(j):
        # outer objects bracketing slot j (0-based)
        if outer_mixed and j == m - 1:
            return okey[j], None
        return okey[j], okey[j + 1]

    def rec(j, cur, arr, pos, objs):
        if j == m:
            _add_into(result, tuple(objs), arr & 1)
            return
        blk = slot_blocks[j]
        b0, b1 = bounds(j)
        last_mod = outer_mixed and j == m - 1
        if blk.kind == "id":
            if cur is None:
                cur = b0
            if cur != b0:
                return
            rec(j + 1, b1, arr, pos + 1, objs_start(objs, cur) + [b1])
        elif blk.kind == "modid":
            if cur is None:
                starts = [o for o in _objects_mapping_to(blk, b0)]
            else:
                starts = [cur] if blk.start(cur) == b0 else []
            for o in starts:
                rec(j + 1, o, arr, pos + 1, objs_start(objs, o))
        elif blk.kind == "zero":
            cands = blk.comps.items() if cur is None else ([(cur, blk.comps[cur])] if cur in blk.comps else [])
            for o, vec in cands:
                if blk.start(o) != b0 or blk.end(o) != b1:
                    continue
                new = np.tensordot(vec, arr, axes=([0], [pos]))
                rec(j + 1, o, new, pos, objs_start(objs, o))
        else:
            if cur is None:
                cands = [c for lst in blk.by_start.values() for c in lst]
            else:
                cands = blk.by_start.get(cur, ())
            for k, inner in cands:
                if blk.start(k[0]) != b0:
                    continue
                if last_mod:
                    if not blk.mixed:
                        continue
                elif blk.mixed or blk.end(k[-1]) != b1:
                    continue
                p = inner.ndim - 1
                new = np.tensordot(inner, arr, axes=([p], [pos]))
                if p > 1 and pos:
                    new = np.moveaxis(new, tuple(range(p)), tuple(range(pos, pos + p)))
                elif p == 1 and pos:
                    new = np.moveaxis(new, 0, pos)
                nxt = k[-1]
                rec(j + 1, nxt, new, pos + p, objs_start(objs, k[0]) + list(k[1:]))

    rec(0, None, oarr, 0, [])


def objs_start(objs: list, o) -> list:
    return objs if objs else [o]


def _objects_mapping_to(blk: Block, b):
    return [o for o in blk.coll.objects if blk.start(o) == b] if blk.coll is not None else [b]


# ---------------------------------------------------------------------------
# public compositions


def _check_same(a, b, what: str) -> None:
    if not a.same_as(b):
        raise CollectionMismatch(f"{what}: {a.name} does not match {b.name}")


def _is_identity(index_map, objects) -> bool:
    return all(index_map.get(o, o) == o for o in objects)


def _map_block(F: ExtendedMap) -> Block:
    f = F.index_map
    return Block("map", F.components, start=f.__getitem__, end=f.__getitem__)


def compose_circle(G: ExtendedMap, F: ExtendedMap) -> ExtendedMap:
    """(G∘F)(a_1..a_k): split inputs into consecutive blocks, F on each, then G."""
    _check_same(F.target, G.source, "compose_circle")
    raw = substitute(G.components, False, ("+",), [_map_block(F)])
    index = {x: G.index_map[F.index_map[x]] for x in F.source.objects}
    return ExtendedMap(F.source, G.target, index, raw, G.cap * F.cap)


def compose_star(G: ExtendedMap, F: ExtendedMap) -> ExtendedMap:
    """(G⋆F): insert F on one consecutive window of inputs of G."""
    _check_same(F.target, G.source, "compose_star")
    if not _is_identity(F.index_map, F.source.objects):
        raise CollectionMismatch("compose_star needs F with identity object map")
    _check_same(F.source, F.target, "compose_star")
    ident = Block("id")
    raw = substitute(G.components, False, ("*", "1", "*"), [ident, _map_block(F), ident])
    return ExtendedMap(F.source, G.target, dict(G.index_map), raw, G.cap + F.cap - 1)


def compose_mixed(P: MixedExtendedMap, Q: MixedExtendedMap) -> MixedExtendedMap:
    """(P⊣Q)(a_1..a_{k-1}, b) = Σ_i P(a_1..a_{i-1}, Q(a_i..a_{k-1}, b))."""
    _check_same(Q.module_out, P.module_in, "compose_mixed")
    _check_same(P.category, Q.category, "compose_mixed")
    qb = Block("map", Q.components, mixed=True)
    raw = substitute(P.components, True, ("*", "1"), [Block("id"), qb])
    return MixedExtendedMap(P.category, Q.module_in, P.module_out, raw, P.cap + Q.cap - 1)


def compose_mixed_star(Q: MixedExtendedMap, F: ExtendedMap) -> MixedExtendedMap:
    """(Q⋆F): insert F into the morphism inputs of Q, never the module input."""
    _check_same(F.target, Q.category, "compose_mixed_star")
    _check_same(F.source, F.target, "compose_mixed_star")
    if not _is_identity(F.index_map, F.source.objects):
        raise CollectionMismatch("compose_mixed_star needs F with identity object map")
    ident = Block("id")
    modid = Block("modid")
    raw = substitute(Q.components, True, ("*", "1", "*", "1"), [ident, _map_block(F), ident, modid])
    return MixedExtendedMap(Q.category, Q.module_in, Q.module_out, raw, Q.cap + F.cap - 1)


def pullback_action(action: MixedExtendedMap, phi: ExtendedMap, spaces: SpaceCollection,
                    out_spaces: SpaceCollection | None = None) -> MixedExtendedMap:
    """Σ action(φ(block_1), ..., φ(block_r), m) over splittings of the morphism inputs.

    ``spaces`` is the pulled back input collection, spaces(x) = M(φ(x));
    ``out_spaces`` defaults to it (module actions).
    """
    _check_same(phi.target, action.category, "pullback")
    f = phi.index_map
    modid = Block("modid", start=f.__getitem__, coll=phi.source)
    raw = substitute(action.components, True, ("*", "1"), [_map_block(phi), modid])
    return MixedExtendedMap(phi.source, spaces, out_spaces or spaces, raw, action.cap * phi.cap)


@dataclass(eq=False)
class PreNaturalTransformation:
    """T: F -> G with T0[x] in hom_B(F x, G x) and T' components keyed by
    A-object tuples (x_0..x_k) with values in hom_B(F x_0, G x_k)."""

    F: ExtendedMap
    G: ExtendedMap
    T0: dict
    Tprime: dict
    cap: int = 4

    def __post_init__(self):
        if self.F.index_map != self.G.index_map and set(self.F.index_map) != set(self.G.index_map):
            raise CollectionMismatch("functors have different object sets")
        self.T0 = {x: np.asarray(v, dtype=np.uint8) & 1 for x, v in self.T0.items()}
        self.T0 = {x: v for x, v in self.T0.items() if v.any()}
        self.Tprime = _prune({tuple(k): np.asarray(v, dtype=np.uint8) for k, v in self.Tprime.items()})
        for x, v in self.T0.items():
            if v.shape != (self.target.dim(self.F.index_map[x], self.G.index_map[x]),):
                raise CollectionMismatch(f"T0 at {x} has wrong length")
        for k, v in self.Tprime.items():
            if v.shape != self.shape(k):
                raise CollectionMismatch(f"T' component {k} has wrong shape")

    @property
    def source(self) -> HomCollection:
        return self.F.source

    @property
    def target(self) -> HomCollection:
        return self.F.target

    def shape(self, key) -> tuple:
        a, b = self.source, self.target
        ins = tuple(a.dim(key[i], key[i + 1]) for i in range(len(key) - 1))
        return ins + (b.dim(self.F.index_map[key[0]], self.G.index_map[key[-1]]),)

    def block(self) -> tuple[Block, Block]:
        f, g = self.F.index_map, self.G.index_map
        zero = Block("zero", self.T0, start=f.__getitem__, end=g.__getitem__)
        prime = Block("map", self.Tprime, start=f.__getitem__, end=g.__getitem__)
        return zero, prime

    def __eq__(self, other) -> bool:
        if set(self.T0) != set(other.T0) or set(self.Tprime) != set(other.Tprime):
            return False
        return all(np.array_equal(self.T0[x], other.T0[x]) for x in self.T0) and all(
            np.array_equal(self.Tprime[k], other.Tprime[k]) for k in self.Tprime
        )

    def __add__(self, other: "PreNaturalTransformation") -> "PreNaturalTransformation":
        t0 = dict(self.T0)
        for x, v in other.T0.items():
            t0[x] = t0[x] ^ v if x in t0 else v
        tp = dict(self.Tprime)
        for k, v in other.Tprime.items():
            _add_into(tp, k, v)
        return PreNaturalTransformation(self.F, self.G, t0, tp, max(self.cap, other.cap))

    @classmethod
    def zero(cls, F: ExtendedMap, G: ExtendedMap) -> "PreNaturalTransformation":
        return cls(F, G, {}, {}, max(F.cap, G.cap))

    @classmethod
    def difference(cls, F: ExtendedMap, G: ExtendedMap) -> "PreNaturalTransformation":
        """D = (0, F - G); requires equal object actions."""
        diff = F + G
        return cls(F, G, {}, diff.components, max(F.cap, G.cap))


def circ_star_circ(mu: ExtendedMap, F: ExtendedMap, T: PreNaturalTransformation, G: ExtendedMap) -> dict:
    """Components of μ∘⋆∘(F, T, G): F-blocks, then one T block, then G-blocks.

    Keys of length 1 are zero-ary outputs (one per object).
    """
    zero, prime = T.block()
    bf, bg = _map_block(F), _map_block(G)
    raw = {}
    for blk in (zero, prime):
        part = substitute(mu.components, False, ("*", "1", "*"), [bf, blk, bg])
        for k, v in part.items():
            _add_into(raw, k, v)
    return _prune(raw)


def circ_star_circ_star_circ(mu: ExtendedMap, F, T: PreNaturalTransformation, G, S: PreNaturalTransformation, H) -> dict:
    """Components of μ∘⋆∘⋆∘(F, T, G, S, H)."""
    tz, tp = T.block()
    sz, sp = S.block()
    bf, bg, bh = _map_block(F), _map_block(G), _map_block(H)
    raw = {}
    for b1 in (tz, tp):
        for b2 in (sz, sp):
            part = substitute(mu.components, False, ("*", "1", "*", "1", "*"), [bf, b1, bg, b2, bh])
            for k, v in part.items():
                _add_into(raw, k, v)
    return _prune(raw)


def star_components(T_prime: dict, mu: ExtendedMap) -> dict:
    """T'⋆μ^A: insert μ^A into one window of inputs of the primed part."""
    ident = Block("id")
    raw = substitute(T_prime, False, ("*", "1", "*"), [ident, _map_block(mu), ident])
    return _prune(raw)
