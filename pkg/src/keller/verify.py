"""Independent certification of vector sets.

Two routes certify a counterexample: an exhaustive pairwise clique check
against the graph predicates, and a discrete torus cell-cover oracle that
never consults the graph layer.  The oracle models each vector m as the
half-open cube prod_i [m_i - 1, m_i + 1) on (R/4Z)^n, discretized to the
4^n unit cells; a set tiles iff every cell is covered exactly once.

Face statistics report, over all pairs whose coordinates differ only by 0
or 2, how many coordinates agree; the maximum such count bounds the largest
shared-face dimension of the tiling.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .core import CubeVector, GraphVariant, KellerGraphSpec, _edge_rows, _low_mask, has_edge
from .construction import VectorSet

__all__ = [
    "MissingEdgeReport",
    "CellCoverStatus",
    "CellCoverResult",
    "FaceHistogram",
    "verify_clique",
    "verify_tiling_cells",
    "face_statistics",
    "facet_free",
    "MAX_CELL_DIM",
]

# 4^12 cells is a 134 MB counter array; one dimension more would quadruple it.
MAX_CELL_DIM = 12

_PACKED_DIM_LIMIT = 32  # uint64 holds 32 two-bit coordinates

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def _popcount64(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    return _POP8[np.ascontiguousarray(a).view(np.uint8).reshape(a.shape + (8,))].sum(
        axis=-1, dtype=np.int64
    )


@dataclass(frozen=True)
class MissingEdgeReport:
    """All unordered pairs of a set that are not adjacent in the given graph.

    Pairs are internally ordered and listed lexicographically; an empty
    report certifies the set is a clique.
    """

    spec: KellerGraphSpec
    pairs: tuple[tuple[CubeVector, CubeVector], ...]

    @property
    def is_clique(self) -> bool:
        return not self.pairs


class CellCoverStatus(Enum):
    EXACT_COVER = "EXACT_COVER"
    GAP = "GAP"
    OVERLAP = "OVERLAP"


@dataclass(frozen=True)
class CellCoverResult:
    """Cell-cover outcome; witness is the first bad cell in index order."""

    status: CellCoverStatus
    witness: Optional[CubeVector] = None


@dataclass(frozen=True)
class FaceHistogram:
    """Counts of shared-face dimensions over all qualifying cube pairs.

    A pair qualifies when every coordinate gap is 0 or 2; it shares a face
    of dimension k when exactly k coordinates have gap 0.
    """

    dim: int
    counts: tuple[tuple[int, int], ...]

    @property
    def max_shared(self) -> Optional[int]:
        return max((k for k, c in self.counts if c), default=None)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)


def verify_clique(s: VectorSet, spec: KellerGraphSpec) -> MissingEdgeReport:
    """Exhaustive pairwise clique check of s against spec."""
    if s.dim != spec.dim:
        raise ValueError(f"dimension mismatch: set {s.dim}, graph {spec.dim}")
    star = spec.variant is GraphVariant.STAR
    pairs: list[tuple[CubeVector, CubeVector]] = []
    members = s.members
    if s.dim <= _PACKED_DIM_LIMIT:
        packed = s.packed_array()
        for i in range(len(members) - 1):
            adj = _edge_rows(int(packed[i]), packed[i + 1 :], s.dim, star)
            for j in np.nonzero(~adj)[0]:
                pairs.append((members[i], members[i + 1 + int(j)]))
    else:
        for i in range(len(members) - 1):
            for j in range(i + 1, len(members)):
                if not has_edge(spec, members[i], members[j]):
                    pairs.append((members[i], members[j]))
    return MissingEdgeReport(spec=spec, pairs=tuple(pairs))


def _digit_matrix(s: VectorSet) -> np.ndarray:
    packed = s.packed_array()[:, None]
    shifts = (2 * np.arange(s.dim, dtype=np.uint64))[None, :]
    return ((packed >> shifts) & np.uint64(3)).astype(np.int64)


def verify_tiling_cells(s: VectorSet, *, max_dim: int = MAX_CELL_DIM) -> CellCoverResult:
    """Exact cover check of the 4^n torus cells by the half-open cubes of s.

    Each cube covers the 2^n cells at per-coordinate offsets {-1, 0} mod 4
    from its center.  Independent of the graph predicates.
    """
    n = s.dim
    if n > max_dim:
        raise ValueError(
            f"cell oracle guarded at dim {max_dim} (4**{n} cells would need "
            f"{4**n:.2e} counters)"
        )
    ncells = 4**n
    counts = np.zeros(ncells, dtype=np.int64)
    if len(s):
        digits = _digit_matrix(s)
        pow4 = 4 ** np.arange(n, dtype=np.int64)
        corner = ((digits + 3) % 4) @ pow4  # cell at offset -1 in every coordinate
        # stepping coordinate i from offset -1 to 0 adds 4^i, except when the
        # digit is 0 and the cell index wraps from 3*4^i down to 0
        deltas = np.where(digits == 0, -3 * pow4, pow4)
        chunk = max(1, 2**22 >> n)
        for lo in range(0, len(s), chunk):
            idx = corner[lo : lo + chunk, None]
            dl = deltas[lo : lo + chunk]
            for i in range(n):
                idx = np.concatenate([idx, idx + dl[:, i : i + 1]], axis=1)
            counts += np.bincount(idx.ravel(), minlength=ncells)
    bad = np.nonzero(counts != 1)[0]
    if bad.size == 0:
        return CellCoverResult(CellCoverStatus.EXACT_COVER)
    first = int(bad[0])
    status = CellCoverStatus.GAP if counts[first] == 0 else CellCoverStatus.OVERLAP
    return CellCoverResult(status, witness=CubeVector.from_index(n, first))


def face_statistics(s: VectorSet) -> FaceHistogram:
    """Histogram of shared-face dimensions over all unordered pairs of s."""
    n = s.dim
    acc = np.zeros(n + 1, dtype=np.int64)
    if n <= _PACKED_DIM_LIMIT:
        packed = s.packed_array()
        low = np.uint64(_low_mask(n))
        for i in range(len(packed) - 1):
            x = packed[i] ^ packed[i + 1 :]
            q = (x & low) == 0
            if q.any():
                shared = n - _popcount64(x[q])
                acc += np.bincount(shared, minlength=n + 1)
    else:
        for i, u in enumerate(s.members):
            for v in s.members[i + 1 :]:
                gaps = [abs(a - b) for a, b in zip(u.digits, v.digits)]
                if all(g in (0, 2) for g in gaps):
                    acc[gaps.count(0)] += 1
    counts = tuple((k, int(acc[k])) for k in range(n + 1) if acc[k])
    return FaceHistogram(dim=n, counts=counts)


def facet_free(s: VectorSet) -> bool:
    """True when no pair differs in exactly one coordinate by exactly 2.

    For a 2^n set that is a clique in G_n this coincides with being a clique
    in G*_n.
    """
    n = s.dim
    if n <= _PACKED_DIM_LIMIT:
        packed = s.packed_array()
        low = np.uint64(_low_mask(n))
        for i in range(len(packed) - 1):
            x = packed[i] ^ packed[i + 1 :]
            eligible = (x & low) == 0
            if eligible.any() and (_popcount64(x[eligible]) == 1).any():
                return False
        return True
    for i, u in enumerate(s.members):
        for v in s.members[i + 1 :]:
            gaps = [abs(a - b) for a, b in zip(u.digits, v.digits)]
            if sum(1 for g in gaps if g) == 1 and 2 in gaps:
                return False
    return True
