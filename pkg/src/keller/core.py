"""Cube vectors, Keller graphs, and their automorphisms.

A cube class in a 4Z^n-periodic tiling by side-2 cubes is named by a vector
over {0,1,2,3}, one digit per coordinate.  Two graphs live on the 4^n such
vectors:

* ``G_n`` (PLAIN): edge iff some coordinate pair differs by exactly 2.
* ``G*_n`` (STAR): additionally the vectors differ in at least two
  coordinates.

A 2^n-vector set tiles the torus iff it is a clique in G_n, and does so with
no two cubes sharing a complete facet iff it is a clique in G*_n.

Vectors are stored packed, 2 bits per coordinate, coordinate 0 in the low
bits.  The packed value doubles as the canonical vertex index
``index(m) = sum_i m_i * 4**i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "GraphVariant",
    "KellerGraphSpec",
    "CubeVector",
    "Automorphism",
    "MaterializedGraph",
    "digit_gap",
    "has_edge",
    "apply_automorphism",
    "materialize",
    "plain_degree",
    "star_degree",
    "DIHEDRAL_LABEL_MAPS",
    "MAX_MATERIALIZE_DIM",
]

# 4**8 vertices is ~512 MB of adjacency bitsets; beyond that use the
# implicit predicate.
MAX_MATERIALIZE_DIM = 8


class GraphVariant(Enum):
    """PLAIN is G_n (tiling criterion), STAR is G*_n (facet-free criterion)."""

    PLAIN = "G"
    STAR = "Gstar"


@dataclass(frozen=True)
class KellerGraphSpec:
    """A Keller graph: dimension plus variant. Vertices are all 4^dim vectors."""

    dim: int
    variant: GraphVariant

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if not isinstance(self.variant, GraphVariant):
            raise TypeError(f"variant must be a GraphVariant, got {self.variant!r}")

    @property
    def num_vertices(self) -> int:
        return 4**self.dim


def digit_gap(a: int, b: int) -> int:
    """Absolute difference of two digits on representatives 0..3.

    The gap is 2 exactly for the pairs {0,2} and {1,3}; no mod-4 reduction
    is applied (|0-3| is 3, not 1).
    """
    return abs(a - b)


def _low_mask(dim: int) -> int:
    # bit 0 of every 2-bit coordinate field: 0b...010101
    return sum(1 << (2 * i) for i in range(dim))


def _pack_digits(digits: Sequence[int]) -> int:
    packed = 0
    for i, d in enumerate(digits):
        if not 0 <= d <= 3:
            raise ValueError(f"digit out of range at coordinate {i}: {d}")
        packed |= d << (2 * i)
    return packed


@dataclass(frozen=True)
class CubeVector:
    """An n-tuple over {0,1,2,3}, stored packed (2 bits per coordinate).

    Equality and hashing use the packed form.  ``packed`` equals the
    little-endian base-4 vertex index of the vector.
    """

    dim: int
    packed: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if not 0 <= self.packed < (1 << (2 * self.dim)):
            raise ValueError(f"packed value {self.packed} out of range for dim {self.dim}")

    @classmethod
    def from_digits(cls, digits: Iterable[int]) -> "CubeVector":
        ds = tuple(digits)
        return cls(len(ds), _pack_digits(ds))

    @classmethod
    def from_string(cls, s: str) -> "CubeVector":
        """Parse a contiguous digit string such as ``"0213"``."""
        if not s or any(c not in "0123" for c in s):
            raise ValueError(f"not a cube vector string: {s!r}")
        return cls.from_digits(int(c) for c in s)

    @classmethod
    def from_index(cls, dim: int, index: int) -> "CubeVector":
        return cls(dim, index)

    @property
    def index(self) -> int:
        """Vertex index: sum of digit_i * 4**i over coordinates."""
        return self.packed

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple((self.packed >> (2 * i)) & 3 for i in range(self.dim))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.dim:
            raise IndexError(i)
        return (self.packed >> (2 * i)) & 3

    def __len__(self) -> int:
        return self.dim

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)

    def __repr__(self) -> str:
        return f"CubeVector({self})"


def _packed_edge(x: int, dim: int, star: bool) -> bool:
    # x is the packed xor of the two vectors: a field equals 0b10 iff the
    # digit pair is {0,2} or {1,3} (gap 2); any nonzero field marks a
    # differing coordinate.
    low = _low_mask(dim)
    if (x >> 1) & ~x & low == 0:
        return False
    if not star:
        return True
    d = (x | (x >> 1)) & low
    return d & (d - 1) != 0


def has_edge(spec: KellerGraphSpec, m: CubeVector, m2: CubeVector) -> bool:
    """Edge predicate for G_n / G*_n.

    PLAIN: some coordinate with digit gap exactly 2.  STAR: additionally at
    least two coordinates differ.  Irreflexive and symmetric.
    """
    if m.dim != spec.dim or m2.dim != spec.dim:
        raise ValueError(
            f"dimension mismatch: spec dim {spec.dim}, vectors {m.dim} and {m2.dim}"
        )
    return _packed_edge(m.packed ^ m2.packed, spec.dim, spec.variant is GraphVariant.STAR)


def _edge_rows(packed: int, others: np.ndarray, dim: int, star: bool) -> np.ndarray:
    """Vectorized edge test of one packed vector against an uint64 array."""
    low = np.uint64(_low_mask(dim))
    one = np.uint64(1)
    x = np.uint64(packed) ^ others
    adj = ((x >> one) & ~x & low) != 0
    if star:
        d = (x | (x >> one)) & low
        adj &= (d & (d - one)) != 0
    return adj


# ---------------------------------------------------------------------------
# Automorphisms
# ---------------------------------------------------------------------------

def _dihedral_label_maps() -> tuple[tuple[int, int, int, int], ...]:
    # symmetries of the 4-cycle 0-1-2-3-0: x -> s*x + c (mod 4), s in {1,3}
    maps = []
    for s in (1, 3):
        for c in range(4):
            maps.append(tuple((s * x + c) % 4 for x in range(4)))
    return tuple(sorted(maps))


#: The 8 digit permutations usable per coordinate: the group generated by the
#: rotation (0123) and the reflection (13).  Each preserves the pair
#: partition {{0,2},{1,3}}, so edge relations are preserved coordinatewise.
DIHEDRAL_LABEL_MAPS = _dihedral_label_maps()

_IDENTITY_MAP = (0, 1, 2, 3)


@dataclass(frozen=True)
class Automorphism:
    """A Keller-graph automorphism: permute coordinates, then relabel digits.

    ``coord_perm[src] = dest`` gives the coordinate permutation;
    ``label_maps[dest]`` is the digit permutation applied at destination
    coordinate ``dest``.  Applied to a vector m, coordinate j of the image is
    ``label_maps[j][m[coord_perm^-1(j)]]``.  This composition order (move the
    coordinate, then relabel at its new position) is fixed everywhere.
    """

    coord_perm: tuple[int, ...]
    label_maps: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.coord_perm)
        if sorted(self.coord_perm) != list(range(n)):
            raise ValueError(f"not a coordinate permutation: {self.coord_perm}")
        if len(self.label_maps) != n:
            raise ValueError("need one label map per coordinate")
        for j, lm in enumerate(self.label_maps):
            if lm not in DIHEDRAL_LABEL_MAPS:
                raise ValueError(
                    f"label map at coordinate {j} is not a 4-cycle symmetry: {lm}"
                )

    @property
    def dim(self) -> int:
        return len(self.coord_perm)

    @classmethod
    def identity(cls, dim: int) -> "Automorphism":
        return cls(tuple(range(dim)), (_IDENTITY_MAP,) * dim)

    @classmethod
    def rotation(cls, dim: int, coord: int, steps: int = 1) -> "Automorphism":
        """Relabel one coordinate by x -> x + steps (mod 4), e.g. 0->1->2->3->0."""
        if not 0 <= coord < dim:
            raise ValueError(f"coordinate {coord} out of range for dim {dim}")
        lm = tuple((x + steps) % 4 for x in range(4))
        maps = [_IDENTITY_MAP] * dim
        maps[coord] = lm
        return cls(tuple(range(dim)), tuple(maps))

    def _src_of_dest(self) -> tuple[int, ...]:
        inv = [0] * self.dim
        for src, dest in enumerate(self.coord_perm):
            inv[dest] = src
        return tuple(inv)

    def apply(self, m: CubeVector) -> CubeVector:
        if m.dim != self.dim:
            raise ValueError(f"dimension mismatch: automorphism {self.dim}, vector {m.dim}")
        src = self._src_of_dest()
        digits = m.digits
        return CubeVector.from_digits(
            self.label_maps[j][digits[src[j]]] for j in range(self.dim)
        )

    def compose(self, other: "Automorphism") -> "Automorphism":
        """Return self after other: (self.compose(other)).apply(m) == self.apply(other.apply(m))."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in composition")
        src = self._src_of_dest()
        perm = tuple(self.coord_perm[other.coord_perm[i]] for i in range(self.dim))
        maps = tuple(
            tuple(self.label_maps[k][other.label_maps[src[k]][x]] for x in range(4))
            for k in range(self.dim)
        )
        return Automorphism(perm, maps)

    def inverse(self) -> "Automorphism":
        inv_perm = self._src_of_dest()
        maps = [None] * self.dim  # type: ignore[list-item]
        for i in range(self.dim):
            lm = self.label_maps[self.coord_perm[i]]
            inv_lm = [0] * 4
            for x in range(4):
                inv_lm[lm[x]] = x
            maps[i] = tuple(inv_lm)
        return Automorphism(tuple(inv_perm), tuple(maps))


def apply_automorphism(a: Automorphism, m: CubeVector) -> CubeVector:
    """Image of m under a; see Automorphism for the composition order."""
    return a.apply(m)


# ---------------------------------------------------------------------------
# Materialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaterializedGraph:
    """Adjacency bitsets for every vertex of a Keller graph.

    Vertex i is the vector with index i (little-endian base 4); bit j of
    ``adjacency[i]`` says whether {i, j} is an edge.  Immutable and
    shareable once built.
    """

    spec: KellerGraphSpec
    adjacency: tuple[int, ...] = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def has_edge_index(self, u: int, v: int) -> bool:
        return (self.adjacency[u] >> v) & 1 == 1

    def vector(self, v: int) -> CubeVector:
        return CubeVector.from_index(self.spec.dim, v)

    def index_of(self, m: CubeVector) -> int:
        if m.dim != self.spec.dim:
            raise ValueError("dimension mismatch")
        return m.index

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, ascending."""
        for u, row in enumerate(self.adjacency):
            rest = row >> (u + 1)
            while rest:
                lsb = rest & -rest
                yield u, u + 1 + (lsb.bit_length() - 1)
                rest ^= lsb


def materialize(spec: KellerGraphSpec, *, max_dim: int = MAX_MATERIALIZE_DIM) -> MaterializedGraph:
    """Build the full adjacency bit-matrix of a Keller graph.

    Guarded at ``max_dim`` (default 8): 4^8 vertices already cost ~512 MB of
    bitsets.  Use the implicit predicate for larger dimensions.
    """
    if spec.dim > max_dim:
        raise ValueError(
            f"dim {spec.dim} exceeds materialization guard {max_dim} "
            f"(4**{spec.dim} = {4**spec.dim} vertices)"
        )
    n = spec.dim
    nverts = 4**n
    star = spec.variant is GraphVariant.STAR
    packed = np.arange(nverts, dtype=np.uint64)
    rows = []
    for u in range(nverts):
        adj = _edge_rows(u, packed, n, star)
        rows.append(int.from_bytes(np.packbits(adj, bitorder="little").tobytes(), "little"))
    return MaterializedGraph(spec=spec, adjacency=tuple(rows))


def plain_degree(dim: int) -> int:
    """Degree of every G_n vertex: 4^n - 3^n (vertex-transitive)."""
    return 4**dim - 3**dim


def star_degree(dim: int) -> int:
    """Degree of every G*_n vertex: 4^n - 3^n - n.

    Non-neighbors of m are the 3^n vectors with no gap-2 coordinate
    (including m itself) plus the n vectors differing from m in a single
    gap-2 coordinate.
    """
    return 4**dim - 3**dim - dim


def all_vectors(dim: int) -> Iterator[CubeVector]:
    """All 4^dim vectors in index order."""
    for i in range(4**dim):
        yield CubeVector.from_index(dim, i)


def random_automorphism(dim: int, rng) -> Automorphism:
    """Uniform element of the 8^n n! automorphism group (rng: random.Random)."""
    perm = list(range(dim))
    rng.shuffle(perm)
    maps = tuple(rng.choice(DIHEDRAL_LABEL_MAPS) for _ in range(dim))
    return Automorphism(tuple(perm), maps)


def enumerate_automorphisms(dim: int) -> Iterator[Automorphism]:
    """All 8^n n! automorphisms (intended for tiny dims only)."""
    for perm in itertools.permutations(range(dim)):
        for maps in itertools.product(DIHEDRAL_LABEL_MAPS, repeat=dim):
            yield Automorphism(perm, maps)
