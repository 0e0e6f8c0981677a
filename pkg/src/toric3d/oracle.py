"""Exact GF(2) reference computations.

Everything here goes through Gaussian elimination on packed-bit rows and
deliberately shares nothing with the combinatorial decoder.  It backs the
property tests, the acceptance checks and the decoders' optional exact
fallback.  It is not meant for large lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cellsets import EdgeSet, FaceSet
from .lattice import ChainComplex3

MAX_NULLITY = 24


class InfeasibleSyndrome(ValueError):
    """No face set restricted to the given columns has the requested boundary."""


class Gf2Matrix:
    """Dense GF(2) matrix; row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    def __init__(self, rows: Iterable[int], n_cols: int):
        self.rows = list(rows)
        self.n_cols = n_cols
        for r in self.rows:
            if r >> n_cols:
                raise ValueError("row has bits beyond n_cols")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def _eliminate(self, rhs: int | None = None):
        """Reduced row echelon form.

        Returns (pivot rows, pivot columns, reduced rhs bits, consistent).  The
        right-hand side is carried as one extra bit per row.
        """
        rows = self.rows[:]
        aug = [(rhs >> i) & 1 if rhs is not None else 0 for i in range(len(rows))]
        pivots: list[int] = []
        r = 0
        for col in range(self.n_cols):
            bit = 1 << col
            pivot = None
            for i in range(r, len(rows)):
                if rows[i] & bit:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            aug[r], aug[pivot] = aug[pivot], aug[r]
            pr, pa = rows[r], aug[r]
            for i in range(len(rows)):
                if i != r and rows[i] & bit:
                    rows[i] ^= pr
                    aug[i] ^= pa
            pivots.append(col)
            r += 1
            if r == len(rows):
                break
        consistent = not any(aug[i] for i in range(r, len(rows)))
        return rows[:r], pivots, aug[:r], consistent

    def rank(self) -> int:
        return len(self._eliminate()[1])

    def nullity(self) -> int:
        return self.n_cols - self.rank()

    def solve(self, rhs: int) -> int:
        """One solution ``x`` (free variables zero) of ``A x = rhs``."""
        rows, pivots, aug, ok = self._eliminate(rhs)
        if not ok:
            raise InfeasibleSyndrome("inconsistent system")
        x = 0
        for col, bit in zip(pivots, aug):
            if bit:
                x |= 1 << col
        return x

    def nullspace(self) -> list[int]:
        rows, pivots, _, _ = self._eliminate()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.n_cols):
            if free in pivot_set:
                continue
            v = 1 << free
            for row, col in zip(rows, pivots):
                if (row >> free) & 1:
                    v |= 1 << col
            basis.append(v)
        return basis


def _spread(local_bits: int, columns: Sequence[int]) -> int:
    out = 0
    j = 0
    while local_bits:
        if local_bits & 1:
            out |= 1 << columns[j]
        local_bits >>= 1
        j += 1
    return out


def _boundary_matrix(c: ChainComplex3, columns: Sequence[int]) -> Gf2Matrix:
    """Edge-by-face incidence restricted to ``columns`` (face ids)."""
    local = {f: j for j, f in enumerate(columns)}
    rows = []
    for e in range(c.n_edges):
        r = 0
        for f in c.edge_faces[e]:
            j = local.get(f)
            if j is not None:
                r |= 1 << j
        rows.append(r)
    return Gf2Matrix(rows, len(columns))


@dataclass(frozen=True)
class SolveResult:
    solution: FaceSet
    nullity: int

    @property
    def unique(self) -> bool:
        return self.nullity == 0


def solve_syndrome(c: ChainComplex3, syndrome: EdgeSet, column_mask: FaceSet | None = None) -> SolveResult:
    """Solve boundary(x) = syndrome over GF(2) with x inside ``column_mask``.

    ``nullity`` is the dimension of the solution space; zero means unique.
    Raises :class:`InfeasibleSyndrome` when no solution exists.
    """
    columns = list(column_mask) if column_mask is not None else list(range(c.n_faces))
    mat = _boundary_matrix(c, columns)
    x = mat.solve(syndrome.bits)
    return SolveResult(FaceSet(c.n_faces, _spread(x, columns)), mat.nullity())


def cycle_space_dimension(c: ChainComplex3, column_mask: FaceSet) -> int:
    """Dimension of zero-syndrome face sets inside the mask."""
    return _boundary_matrix(c, list(column_mask)).nullity()


def supports_stabilizer_or_logical(c: ChainComplex3, K: FaceSet) -> bool:
    """Whether some nonempty zero-syndrome face set (X stabilizer or logical) lies in ``K``."""
    return cycle_space_dimension(c, K) > 0


def _volume_kernel_dim(volume_faces: Sequence[Iterable[int]], face_rows: Iterable[int]) -> int:
    cols = len(volume_faces)
    by_face: dict[int, int] = {}
    for j, bd in enumerate(volume_faces):
        for f in bd:
            by_face[f] = by_face.get(f, 0) ^ (1 << j)
    rows = [by_face.get(f, 0) for f in face_rows]
    return Gf2Matrix(rows, cols).nullity()


def has_volume_boundary_within(
    volume_faces: Sequence[Iterable[int]], n_faces: int, K: FaceSet | Iterable[int]
) -> bool:
    """Whether a volume set V has a nonempty boundary contained in ``K``.

    ``volume_faces`` lists each volume's boundary faces (dummy volumes of an
    augmented lattice may be appended).  Compares the kernel of the volume
    boundary map with the rows outside ``K`` removed against the full kernel.
    """
    banned = set(K)
    full = _volume_kernel_dim(volume_faces, range(n_faces))
    restricted = _volume_kernel_dim(volume_faces, (f for f in range(n_faces) if f not in banned))
    return restricted > full


def is_stabilizer_support(c: ChainComplex3, F: FaceSet) -> bool:
    """Whether ``F`` is the boundary of some set of volumes of ``c``."""
    syn = 0
    for f in F:
        syn ^= c.face_boundary_mask(f)
    if syn:
        raise ValueError("face set has a nonzero syndrome; it is not in the centralizer")
    n_vol = c.n_volumes
    rows = []
    for f in range(c.n_faces):
        r = 0
        for vol in c.face_volumes[f]:
            r ^= 1 << vol
        rows.append(r)
    try:
        Gf2Matrix(rows, n_vol).solve(F.bits)
    except InfeasibleSyndrome:
        return False
    return True


def min_weight_decode(c: ChainComplex3, syndrome: EdgeSet, max_nullity: int = MAX_NULLITY) -> FaceSet:
    """Exhaustive minimum-weight face set with the given boundary."""
    columns = list(range(c.n_faces))
    mat = _boundary_matrix(c, columns)
    x0 = mat.solve(syndrome.bits)
    basis = mat.nullspace()
    if len(basis) > max_nullity:
        raise ValueError(f"nullspace dimension {len(basis)} exceeds guard {max_nullity}")
    best = x = x0
    best_w = x0.bit_count()
    # Gray-code walk over the coset
    for i in range(1, 1 << len(basis)):
        x ^= basis[(i & -i).bit_length() - 1]
        w = x.bit_count()
        if w < best_w:
            best, best_w = x, w
    return FaceSet(c.n_faces, best)
