"""Ungraded chain complexes over F2, homology, chain maps and mapping cones."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import NoHomotopyInverse, NotChainComplex, NotChainMap
from .f2 import BitMatrix, Reducer, bits, inverse, kernel, rank


@dataclass(frozen=True)
class ChainComplex:
    """A vector space F2^dim with a differential ``d`` satisfying d·d = 0.

    Column j of ``d`` is the image of basis vector e_j.
    """

    dim: int
    d: BitMatrix

    def __post_init__(self):
        if self.d.rows != self.dim or self.d.cols != self.dim:
            raise NotChainComplex(f"differential must be {self.dim}x{self.dim}")
        if not (self.d @ self.d).is_zero():
            raise NotChainComplex("d*d != 0")

    @classmethod
    def zero(cls) -> "ChainComplex":
        return cls(0, BitMatrix.zeros(0, 0))

    @classmethod
    def trivial(cls, dim: int) -> "ChainComplex":
        return cls(dim, BitMatrix.zeros(dim, dim))

    @classmethod
    def from_images(cls, images: list[int], dim: int | None = None) -> "ChainComplex":
        n = len(images) if dim is None else dim
        return cls(n, BitMatrix.from_columns(images, n))

    def apply(self, v: int) -> int:
        return self.d.apply(v)

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        z1 = BitMatrix.zeros(self.dim, other.dim)
        z2 = BitMatrix.zeros(other.dim, self.dim)
        return ChainComplex(self.dim + other.dim, BitMatrix.blocks([[self.d, z1], [z2, other.d]]))

    @cached_property
    def homology(self) -> "HomologyData":
        return homology(self)

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, BitMatrix.identity(self.dim))


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    f: BitMatrix

    def __post_init__(self):
        if self.f.rows != self.target.dim or self.f.cols != self.source.dim:
            raise NotChainMap("matrix shape does not match complexes")

    def is_chain_map(self) -> bool:
        return self.f @ self.source.d == self.target.d @ self.f

    def require_chain_map(self) -> None:
        if not self.is_chain_map():
            raise NotChainMap("f*d != d*f")

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self ∘ other."""
        if other.target.dim != self.source.dim:
            raise NotChainMap("maps are not composable")
        return ChainMap(other.source, self.target, self.f @ other.f)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, self.f + other.f)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, BitMatrix.zeros(target.dim, source.dim))


@dataclass(frozen=True)
class HomologyData:
    """Deterministic splitting C = B ⊕ H' ⊕ B'.

    ``boundary_basis`` spans im d, ``harmonic`` complements it inside ker d
    and ``lifts[i]`` satisfies d(lifts[i]) = boundary_basis[i].
    ``proj`` sends a vector to its H'-coordinates; it is a chain map onto
    homology with zero differential.
    """

    rank: int
    cycle_basis: tuple[int, ...]
    boundary_basis: tuple[int, ...]
    harmonic: tuple[int, ...]
    lifts: tuple[int, ...]
    proj: BitMatrix

    def representative_map(self, v: int) -> int:
        """Homology coordinates (bitset of length ``rank``) of a vector."""
        return self.proj.apply(v)

    def representative(self, coords: int) -> int:
        out = 0
        for i in bits(coords):
            out ^= self.harmonic[i]
        return out

    @property
    def inclusion(self) -> BitMatrix:
        return BitMatrix.from_columns(list(self.harmonic), self.proj.cols)

    def contraction(self) -> BitMatrix:
        """h with id + ι·proj = d h + h d (sends boundaries to their lifts)."""
        n = self.proj.cols
        basis = list(self.boundary_basis) + list(self.harmonic) + list(self.lifts)
        inv = inverse(BitMatrix.from_columns(basis, n))
        nb = len(self.boundary_basis)
        # h = L · (B-coordinates)
        rows_b = BitMatrix(nb, n, inv.data[:nb])
        lift_mat = BitMatrix.from_columns(list(self.lifts), n)
        return lift_mat @ rows_b


def homology(c: ChainComplex) -> HomologyData:
    n = c.dim
    cols = c.d.columns
    bred = Reducer()
    boundary, lifts = [], []
    for j, col in enumerate(cols):
        if bred.add(col):
            boundary.append(col)
            lifts.append(1 << j)
    cycles = kernel(c.d)
    harmonic = []
    for z in cycles:
        if bred.add(z):
            harmonic.append(z)
    basis = boundary + harmonic + lifts
    if len(basis) != n:  # pragma: no cover - guaranteed by d*d = 0
        raise NotChainComplex("inconsistent splitting")
    inv = inverse(BitMatrix.from_columns(basis, n)) if n else BitMatrix.zeros(0, 0)
    nb, nh = len(boundary), len(harmonic)
    proj = BitMatrix(nh, n, inv.data[nb:nb + nh])
    return HomologyData(nh, tuple(cycles), tuple(boundary), tuple(harmonic), tuple(lifts), proj)


def homology_rank(c: ChainComplex) -> int:
    return c.dim - 2 * rank(c.d)


def induced_on_homology(f: ChainMap) -> BitMatrix:
    f.require_chain_map()
    hs, ht = f.source.homology, f.target.homology
    cols = [ht.representative_map(f.f.apply(z)) for z in hs.harmonic]
    return BitMatrix.from_columns(cols, ht.rank)


def is_quasi_iso(f: ChainMap) -> bool:
    h = induced_on_homology(f)
    return h.is_square() and rank(h) == h.rows


def cone_of_chain_map(f: ChainMap) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Cone on source ⊕ target with d(b', b'') = (d b', d b'' + f b')."""
    f.require_chain_map()
    s, t = f.source, f.target
    d = BitMatrix.blocks([[s.d, BitMatrix.zeros(s.dim, t.dim)], [f.f, t.d]])
    cone = ChainComplex(s.dim + t.dim, d)
    inc = ChainMap(t, cone, BitMatrix.blocks([[BitMatrix.zeros(s.dim, t.dim)], [BitMatrix.identity(t.dim)]]))
    proj = ChainMap(cone, s, BitMatrix.blocks([[BitMatrix.identity(s.dim), BitMatrix.zeros(s.dim, t.dim)]]))
    return cone, inc, proj


def homotopy_inverse(f: ChainMap) -> ChainMap:
    """g: target -> source with g∘f ≃ id and f∘g ≃ id."""
    if not is_quasi_iso(f):
        raise NoHomotopyInverse("map is not a quasi-isomorphism")
    hinv = inverse(induced_on_homology(f))
    hs, ht = f.source.homology, f.target.homology
    g = hs.inclusion @ hinv @ ht.proj
    return ChainMap(f.target, f.source, g)


def _homotopy_operator(x: ChainComplex, y: ChainComplex) -> BitMatrix:
    """Matrix of h -> d_Y h + h d_X on vec(h), vec index r*dimX + c."""
    nx, ny = x.dim, y.dim
    dxc = x.d.data  # row i of d_X
    dy_cols = y.d.columns
    cols = []
    for r in range(ny):
        for c in range(nx):
            v = 0
            # d_Y E_rc: column c equals column r of d_Y
            for i in bits(dy_cols[r]):
                v ^= 1 << (i * nx + c)
            # E_rc d_X: row r equals row c of d_X
            for j in bits(dxc[c]):
                v ^= 1 << (r * nx + j)
            cols.append(v)
    return BitMatrix.from_columns(cols, nx * ny)


def vec_of(m: BitMatrix) -> int:
    v = 0
    for r, row in enumerate(m.data):
        v |= row << (r * m.cols)
    return v


def mat_of(v: int, rows: int, cols: int) -> BitMatrix:
    mask = (1 << cols) - 1
    return BitMatrix(rows, cols, tuple((v >> (r * cols)) & mask for r in range(rows)))


def find_homotopy(f: ChainMap, g: ChainMap) -> BitMatrix | None:
    """Some h with f + g = d h + h d, or None when f and g are not homotopic."""
    from .f2 import solve

    x, y = f.source, f.target
    op = _homotopy_operator(x, y)
    sol = solve(op, vec_of(f.f + g.f))
    return None if sol is None else mat_of(sol, y.dim, x.dim)


def are_homotopic(f: ChainMap, g: ChainMap) -> bool:
    return find_homotopy(f, g) is not None


def check_homotopy(f: ChainMap, g: ChainMap, h: BitMatrix) -> bool:
    return f.f + g.f == f.target.d @ h + h @ f.source.d
