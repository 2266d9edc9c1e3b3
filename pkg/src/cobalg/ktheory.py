"""Presentations of F2-vector-space groups and the comparison of cobordism
and triangle relations.

Group elements are bitsets over the generator list.  The zero object is
spelled ``"0"`` and contributes nothing to a relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cobordism import CobordismDatum, build_iterated_cones
from .errors import NotAcyclic, UnknownObject
from .f2 import Reducer
from .report import Report

ZERO = "0"


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relations: tuple = ()

    def index(self, name) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownObject(f"unknown object {name!r}") from None

    def vector(self, names) -> int:
        """Sum of the named generators (repeats cancel, zero object ignored)."""
        v = 0
        for n in names:
            if n != ZERO:
                v ^= 1 << self.index(n)
        return v

    def _reducer(self) -> Reducer:
        red = Reducer()
        for rel in self.relations:
            red.add(rel)
        return red

    def in_span(self, v: int) -> bool:
        return self._reducer().express(v) is not None

    def witness(self, v: int) -> int | None:
        """Bitset of relations summing to ``v``."""
        return self._reducer().express(v)

    def with_relations(self, rels) -> "GroupPresentation":
        return GroupPresentation(self.generators, tuple(self.relations) + tuple(rels))


def quotient_rank(p: GroupPresentation) -> int:
    """Dimension of F2^generators / span(relations)."""
    return len(p.generators) - p._reducer().rank


@dataclass(frozen=True)
class K0Presentation(GroupPresentation):
    triangles: tuple = field(default=())


def k0_from_triangles(objects, triangles) -> K0Presentation:
    """One relation [x] + [y] + [z] per exact triangle (x, y, z)."""
    gens = tuple(o for o in objects if o != ZERO)
    base = GroupPresentation(gens)
    rels = []
    for tri in triangles:
        if len(tri) != 3:
            raise ValueError("triangles are triples of object names")
        rels.append(base.vector(tri))
    return K0Presentation(gens, tuple(rels), tuple(tuple(t) for t in triangles))


def decomposition_triangles(pieces, stages) -> list:
    """(X_i, Y_i, Y_{i+1}) for an iterated cone with Y_1 = 0; ``stages`` names Y_2..Y_{k+1}."""
    out, prev = [], ZERO
    for x, y in zip(pieces, stages):
        out.append((x, prev, y))
        prev = y
    return out


def cobordism_group(ends_of_null_data, generators=None) -> GroupPresentation:
    """Generators are objects, one relation Σ[L_i] per null-cobordant datum."""
    gens = generators
    if gens is None:
        seen = []
        for ends in ends_of_null_data:
            for e in ends:
                if e not in seen and e != ZERO:
                    seen.append(e)
        gens = tuple(seen)
    p = GroupPresentation(tuple(gens))
    return p.with_relations([p.vector(ends) for ends in ends_of_null_data])


def theta_well_defined(gcob: GroupPresentation, k0: GroupPresentation, object_map=None) -> Report:
    """Each cobordism relation maps into the span of the triangle relations."""
    rep = Report("theta")
    object_map = object_map or {}
    for n, rel in enumerate(gcob.relations):
        names = [object_map.get(g, g) for i, g in enumerate(gcob.generators) if rel >> i & 1]
        try:
            v = k0.vector(names)
        except UnknownObject as exc:
            rep.fail(f"relation {n}: {exc}")
            continue
        if not k0.in_span(v):
            rep.fail(f"relation {n} ({' + '.join(map(str, names))}) is not a triangle relation")
        rep.checked += 1
    return rep


def datum_triangles(V: CobordismDatum, prefix: str | None = None) -> tuple[list, list]:
    """Objects and triangles of the iterated cone of a datum; stages are named <prefix>M<j>."""
    prefix = prefix if prefix is not None else f"{V.name}."
    stages = [f"{prefix}M{j}" for j in range(1, len(V.ends) + 1)]
    tris = decomposition_triangles(list(V.ends), stages)
    objects = []
    for o in list(V.ends) + stages:
        if o not in objects:
            objects.append(o)
    return objects, tris


def verify_null_cobordism(V: CobordismDatum, k0: K0Presentation | None = None) -> Report:
    """Check the final module is acyclic and Σ[L_i] is a triangle relation."""
    rep = Report("null-cobordism")
    cones = build_iterated_cones(V)
    for x in V.tests:
        if cones.top.complex_at(x).homology.rank:
            raise NotAcyclic(f"final module has homology at {x}")
    objs, tris = datum_triangles(V)
    tris.append((objs[-1], ZERO, ZERO))  # acyclic, so isomorphic to 0
    if k0 is not None:
        gens = list(k0.generators) + [o for o in objs if o not in k0.generators]
        k0 = k0_from_triangles(gens, list(k0.triangles) + tris)
    else:
        k0 = k0_from_triangles(objs, tris)
    if not k0.in_span(k0.vector(V.ends)):
        rep.fail("sum of the ends is not in the span of the triangle relations")
    rep.checked += 1
    return rep
