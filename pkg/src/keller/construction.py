"""Block substitution: templates, block tables, and the counterexample sets.

The construction starts from an 8-row template clique in G_3 (with
two labels 0 and 0' that both behave like the digit 0), assigns to each label
a disjoint set of 4-digit blocks, and concatenates blocks independently per
column.  With block counts a = b = 12, c = d = 4 this yields
a^3 + 3abc + 3acd + c^3 = 2^12 vectors forming a clique in G*_12.  A 16-row
4-column variant with labels 0,0',1,1',2,3 and only the middle two columns
expanded yields 2^10 vectors forming a clique in G*_10.  Stacking two
translated copies lifts any counterexample one dimension up.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .core import Automorphism, CubeVector, GraphVariant, KellerGraphSpec, has_edge

__all__ = [
    "Label",
    "TemplateVector",
    "BlockSystem",
    "VectorSet",
    "BlockConditionReport",
    "table1",
    "table2",
    "block_swap_automorphism",
    "check_block_conditions",
    "substitute",
    "build_counterexample",
    "lift",
    "find_lift_shift",
]


@dataclass(frozen=True)
class Label:
    """A template symbol: a digit, optionally primed (0' and 1' only).

    A primed label differs by 2 from the same digits its plain form does,
    but counts as a distinct value when counting differing coordinates.
    Primes exist only at the template/block layer; graphs never see them.
    """

    digit: int
    primed: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.digit <= 3:
            raise ValueError(f"label digit out of range: {self.digit}")
        if self.primed and self.digit not in (0, 1):
            raise ValueError(f"only 0 and 1 may be primed, got {self.digit}'")

    @classmethod
    def parse(cls, token: str) -> "Label":
        if len(token) == 2 and token[1] == "'":
            return cls(int(token[0]), True)
        if len(token) == 1 and token in "0123":
            return cls(int(token))
        raise ValueError(f"bad label token: {token!r}")

    def __str__(self) -> str:
        return f"{self.digit}'" if self.primed else str(self.digit)


@dataclass(frozen=True)
class TemplateVector:
    """A row of a substitution template: a tuple of labels."""

    labels: tuple[Label, ...]

    @classmethod
    def from_string(cls, s: str) -> "TemplateVector":
        labels = []
        i = 0
        while i < len(s):
            if i + 1 < len(s) and s[i + 1] == "'":
                labels.append(Label.parse(s[i : i + 2]))
                i += 2
            else:
                labels.append(Label.parse(s[i]))
                i += 1
        return cls(tuple(labels))

    def stripped(self) -> CubeVector:
        """The underlying digit vector, primes ignored."""
        return CubeVector.from_digits(lab.digit for lab in self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.labels)

    def __str__(self) -> str:
        return "".join(str(lab) for lab in self.labels)


class BlockSystem:
    """Label-indexed sets of k-digit blocks used by substitution."""

    def __init__(self, k: int, sets: Mapping[Label, Iterable[CubeVector]]):
        self.k = k
        self._sets: dict[Label, tuple[CubeVector, ...]] = {}
        for label, vecs in sets.items():
            vt = tuple(vecs)
            for v in vt:
                if v.dim != k:
                    raise ValueError(f"block {v} in S_{label} has dim {v.dim}, expected {k}")
            if len(set(vt)) != len(vt):
                raise ValueError(f"duplicate block inside S_{label}")
            self._sets[label] = vt

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(self._sets)

    def get(self, label: Label) -> tuple[CubeVector, ...]:
        try:
            return self._sets[label]
        except KeyError:
            raise KeyError(f"no block set for label {label}") from None

    def __contains__(self, label: Label) -> bool:
        return label in self._sets

    def sizes(self) -> dict[Label, int]:
        return {lab: len(vs) for lab, vs in self._sets.items()}

    def replace(self, label: Label, vecs: Iterable[CubeVector]) -> "BlockSystem":
        """Copy with one set swapped out (handy for adversarial checks)."""
        new = dict(self._sets)
        new[label] = tuple(vecs)
        return BlockSystem(self.k, new)


class VectorSet:
    """A duplicate-free set of equal-dimension cube vectors.

    Members are kept sorted lexicographically by digit sequence; equality is
    set equality.
    """

    __slots__ = ("dim", "members")

    def __init__(self, dim: int, members: Iterable[CubeVector]):
        mt = tuple(sorted(members, key=lambda v: v.digits))
        for v in mt:
            if v.dim != dim:
                raise ValueError(f"vector {v} has dim {v.dim}, expected {dim}")
        for a, b in zip(mt, mt[1:]):
            if a == b:
                raise ValueError(f"duplicate vector {a}")
        self.dim = dim
        self.members = mt

    @classmethod
    def from_strings(cls, dim: int, strings: Iterable[str]) -> "VectorSet":
        return cls(dim, (CubeVector.from_string(s) for s in strings))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[CubeVector]:
        return iter(self.members)

    def __contains__(self, v: CubeVector) -> bool:
        return v in set(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorSet):
            return NotImplemented
        return self.dim == other.dim and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.dim, self.members))

    def __repr__(self) -> str:
        return f"VectorSet(dim={self.dim}, count={len(self.members)})"

    def packed_array(self):
        """Members as a sorted-order numpy uint64 array of packed values."""
        import numpy as np

        return np.fromiter((v.packed for v in self.members), dtype=np.uint64, count=len(self.members))

    def apply(self, a: Automorphism) -> "VectorSet":
        return VectorSet(self.dim, (a.apply(v) for v in self.members))


# ---------------------------------------------------------------------------
# Canonical table data
# ---------------------------------------------------------------------------

# 8 template rows of the G_3 clique; 0' is the primed-zero label.
_TABLE1_ROWS = ("000", "201", "120", "012", "20'3", "320'", "0'32", "222")

# Block columns of 4-digit vectors, in the order S_0, S_0', S_2, S_1, S_1',
# S_3.  S_1, S_3 are the images of S_0, S_2 under the first-coordinate
# rotation 0->1->2->3->0; S_1' relates to S_1 as S_0' does to S_0.
_TABLE2_COLUMNS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("0", ("0000", "0012", "0213", "0230", "0332", "1020",
           "2100", "2112", "2220", "2301", "2322", "3132")),
    ("0'", ("0303", "1011", "1113", "1130", "1323", "1331",
            "2211", "3001", "3022", "3103", "3223", "3231")),
    ("2", ("0211", "1132", "2303", "3020")),
    ("1", ("1000", "1012", "1213", "1230", "1332", "2020",
           "3100", "3112", "3220", "3301", "3322", "0132")),
    ("1'", ("1303", "2011", "2113", "2130", "2323", "2331",
            "3211", "0001", "0022", "0103", "0223", "0231")),
    ("3", ("1211", "2132", "3303", "0020")),
)

# The 16-row 4-column template for the 10-dimensional construction: the S_0
# rows taken verbatim plus the four S_2 rows rewritten with primes.  Primes
# occur only in columns 1 and 2, the expanded ones.
_PRIMED_S2_ROWS = ("021'1", "11'32", "230'3", "30'20")

# Guards the embedded tables against accidental edits.
_TABLE_SHA256 = "da76c275460440b229a0af99507de494669c51a363b1a2026c3319d7fd6925f3"


def _table_digest() -> str:
    blob = "|".join(_TABLE1_ROWS)
    for name, col in _TABLE2_COLUMNS:
        blob += f";{name}:" + ",".join(col)
    blob += "|" + ",".join(_PRIMED_S2_ROWS)
    return hashlib.sha256(blob.encode()).hexdigest()


@lru_cache(maxsize=1)
def _check_tables() -> None:
    digest = _table_digest()
    if digest != _TABLE_SHA256:
        raise RuntimeError(f"embedded table data corrupted (sha256 {digest})")


@lru_cache(maxsize=1)
def table1() -> tuple[TemplateVector, ...]:
    """The 8 length-3 template rows (000, 201, 120, 012, 20'3, 320', 0'32, 222)."""
    _check_tables()
    return tuple(TemplateVector.from_string(s) for s in _TABLE1_ROWS)


@lru_cache(maxsize=1)
def table2() -> BlockSystem:
    """The six block columns S_0, S_0', S_2, S_1, S_1', S_3 (k = 4)."""
    _check_tables()
    sets = {
        Label.parse(name): tuple(CubeVector.from_string(s) for s in col)
        for name, col in _TABLE2_COLUMNS
    }
    return BlockSystem(4, sets)


def block_swap_automorphism() -> Automorphism:
    """The dim-4 automorphism that fixes S_2 pointwise and maps S_0 onto S_0'.

    Rotate the first coordinate 0->1->2->3->0 and the last 0->3->2->1->0,
    then exchange those two coordinates.  Conjugating by the S_0 -> S_1
    first-coordinate rotation gives the analogous map S_1 -> S_1'.
    """
    inc = (1, 2, 3, 0)
    dec = (3, 0, 1, 2)
    ident = (0, 1, 2, 3)
    # destination 0 receives the relabeled last coordinate and vice versa
    return Automorphism(coord_perm=(3, 1, 2, 0), label_maps=(dec, ident, ident, inc))


# ---------------------------------------------------------------------------
# Condition checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockConditionReport:
    """Witnessed outcome of the three block-system conditions.

    (i) each set is a clique in G*_k; (ii) the sets are pairwise disjoint;
    (iii) each requested union is a clique in G_k.  Empty tuples mean the
    condition holds.
    """

    clique_failures: tuple[tuple[Label, CubeVector, CubeVector], ...]
    overlap_failures: tuple[tuple[Label, Label, CubeVector], ...]
    union_failures: tuple[tuple[Label, Label, CubeVector, CubeVector], ...]

    @property
    def ok(self) -> bool:
        return not (self.clique_failures or self.overlap_failures or self.union_failures)


def _missing_pairs(vecs: Sequence[CubeVector], spec: KellerGraphSpec):
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if not has_edge(spec, vecs[i], vecs[j]):
                yield vecs[i], vecs[j]


def check_block_conditions(
    bs: BlockSystem, pairs_for_iii: Sequence[tuple[Label, Label]]
) -> BlockConditionReport:
    """Check conditions (i)-(iii) over all sets present in the system."""
    star_k = KellerGraphSpec(bs.k, GraphVariant.STAR)
    plain_k = KellerGraphSpec(bs.k, GraphVariant.PLAIN)

    clique_failures = []
    for label in bs.labels:
        for u, v in _missing_pairs(bs.get(label), star_k):
            clique_failures.append((label, u, v))

    overlap_failures = []
    labels = bs.labels
    for i in range(len(labels)):
        si = set(bs.get(labels[i]))
        for j in range(i + 1, len(labels)):
            for v in sorted(si & set(bs.get(labels[j])), key=lambda v: v.digits):
                overlap_failures.append((labels[i], labels[j], v))

    union_failures = []
    for la, lb in pairs_for_iii:
        union = sorted(set(bs.get(la)) | set(bs.get(lb)), key=lambda v: v.digits)
        for u, v in _missing_pairs(union, plain_k):
            union_failures.append((la, lb, u, v))

    return BlockConditionReport(
        tuple(clique_failures), tuple(overlap_failures), tuple(union_failures)
    )


# ---------------------------------------------------------------------------
# Substitution and the two counterexamples
# ---------------------------------------------------------------------------

def substitute(
    templates: Sequence[TemplateVector],
    bs: BlockSystem,
    expand_columns: Iterable[int],
) -> VectorSet:
    """Expand template columns into blocks, concatenating all combinations.

    Columns named in ``expand_columns`` (0-based) are replaced by every block
    of the column label's set, independently per column; other columns must
    hold unprimed labels and are emitted as literal digits.  The result has
    dimension (#literal columns) + k * (#expanded columns) and exactly
    sum over templates of prod over expanded columns of |S_label| members.
    """
    expand = frozenset(expand_columns)
    if not templates:
        raise ValueError("no templates to substitute")
    ncols = len(templates[0])
    for t in templates:
        if len(t) != ncols:
            raise ValueError("templates differ in length")
    if any(c < 0 or c >= ncols for c in expand):
        raise ValueError(f"expand column out of range for {ncols}-column templates")

    out_dim = (ncols - len(expand)) + bs.k * len(expand)
    expected = 0
    members: list[CubeVector] = []
    for t in templates:
        count = 1
        for c in expand:
            count *= len(bs.get(t.labels[c]))
        expected += count
        partial: list[tuple[int, ...]] = [()]
        for c, label in enumerate(t.labels):
            if c in expand:
                blocks = bs.get(label)
                partial = [p + blk.digits for p in partial for blk in blocks]
            else:
                if label.primed:
                    raise ValueError(
                        f"primed label {label} in non-expanded column {c} of template {t}"
                    )
                partial = [p + (label.digit,) for p in partial]
        members.extend(CubeVector.from_digits(p) for p in partial)

    if len(set(members)) != expected:
        raise ValueError(
            "substitution produced colliding vectors; block sets are not disjoint"
        )
    return VectorSet(out_dim, members)


def _templates_10() -> tuple[TemplateVector, ...]:
    _check_tables()
    s0_rows = dict(_TABLE2_COLUMNS)["0"]
    rows = tuple(s0_rows) + _PRIMED_S2_ROWS
    return tuple(TemplateVector.from_string(s) for s in rows)


def build_counterexample(n: int) -> VectorSet:
    """The canned facet-free tiling set for n = 10 or 12 (2^n vectors)."""
    if n == 12:
        return substitute(table1(), table2(), (0, 1, 2))
    if n == 10:
        return substitute(_templates_10(), table2(), (1, 2))
    raise ValueError(f"no construction for dimension {n}; supported: 10, 12")


# ---------------------------------------------------------------------------
# Lifting one dimension up
# ---------------------------------------------------------------------------

def lift(s: VectorSet, a: Automorphism) -> VectorSet:
    """Stack two layers: {(m, 0)} union {(a(m), 2)}, one dimension up.

    Requires s and a(s) disjoint; when s is a clique in G*_dim the result is
    a clique of twice the size in G*_(dim+1): cross pairs get their gap-2
    coordinate from the last digit (|0-2| = 2) and a second differing
    coordinate from disjointness.
    """
    if a.dim != s.dim:
        raise ValueError(f"dimension mismatch: set {s.dim}, automorphism {a.dim}")
    image = s.apply(a)
    overlap = set(s.members) & set(image.members)
    if overlap:
        witness = min(overlap, key=lambda v: v.digits)
        raise ValueError(f"set and its image overlap, e.g. {witness}")
    members = [CubeVector.from_digits(m.digits + (0,)) for m in s]
    members += [CubeVector.from_digits(m.digits + (2,)) for m in image]
    return VectorSet(s.dim + 1, members)


def find_lift_shift(s: VectorSet) -> Optional[Automorphism]:
    """First single-coordinate rotation a with s and a(s) disjoint.

    Candidate order is fixed: rotations 0->1->2->3->0 by ascending
    coordinate, then their inverses in the same coordinate order.  Returns
    None when every candidate collides.
    """
    packed = set(v.packed for v in s.members)
    for steps in (1, 3):
        for coord in range(s.dim):
            a = Automorphism.rotation(s.dim, coord, steps)
            if all(a.apply(v).packed not in packed for v in s.members):
                return a
    return None
