"""Syndromes, boundary face classes, the augmented lattice and logical operators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cellsets import EdgeSet, FaceSet
from .lattice import (
    ChainComplex3,
    LatticeError,
    VolumeGraph,
    boundary_of_faces,
    torus_face,
)


class UnsupportedLattice(LatticeError):
    """No logical basis is known for this lattice."""


def syndrome(c: ChainComplex3, error: FaceSet) -> EdgeSet:
    """Edges whose Z check anticommutes with an X error on ``error``."""
    return boundary_of_faces(c, error)


@dataclass(frozen=True)
class BoundaryClasses:
    """Partition of the degree-one faces into face-equivalence classes."""

    classes: tuple[FaceSet, ...]

    @property
    def K(self) -> int:
        return len(self.classes)

    def class_of(self, f: int) -> int | None:
        for i, cls in enumerate(self.classes):
            if f in cls:
                return i
        return None


def face_equivalence_classes(c: ChainComplex3) -> BoundaryClasses:
    """Classes of degree-one faces linked through the free ends of edge face paths.

    For an edge whose incident faces form an open face path, the two
    terminal faces are equivalent (the path is the edge's own check).  The
    classes are the transitive closure of these links, ordered by smallest
    member.
    """
    boundary = [f for f, vols in enumerate(c.face_volumes) if len(vols) == 1]
    if not boundary:
        return BoundaryClasses(())
    local = {f: i for i, f in enumerate(boundary)}
    rows, cols = [], []
    for e in range(c.n_edges):
        ends = [local[f] for f in c.edge_faces[e] if f in local]
        for a, b in zip(ends, ends[1:]):
            rows.append(a)
            cols.append(b)
    n = len(boundary)
    mat = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(mat, directed=False)
    groups: dict[int, list[int]] = {}
    for f, lab in zip(boundary, labels):
        groups.setdefault(int(lab), []).append(f)
    ordered = sorted(groups.values(), key=min)
    return BoundaryClasses(tuple(c.face_set(g) for g in ordered))


@dataclass(frozen=True)
class AugmentedLattice:
    """Lattice plus one dummy volume per boundary class.

    Dummy volume ``i`` has id ``base.n_volumes + i`` in :attr:`graph`.
    """

    base: ChainComplex3
    dummies: tuple[FaceSet, ...]
    graph: VolumeGraph

    @property
    def n_volumes(self) -> int:
        return self.base.n_volumes + len(self.dummies)

    def volume_faces(self) -> list[tuple[int, ...]]:
        return list(self.base.volumes) + [tuple(d) for d in self.dummies]

    def volume_graph(self) -> VolumeGraph:
        return self.graph


def augment(c: ChainComplex3, classes: BoundaryClasses | None = None) -> AugmentedLattice:
    if classes is None:
        classes = face_equivalence_classes(c)
    arcs: list[tuple[int, int] | None] = []
    owner = {}
    for i, cls in enumerate(classes.classes):
        for f in cls:
            owner[f] = c.n_volumes + i
    for f, vols in enumerate(c.face_volumes):
        if len(vols) == 2:
            arcs.append((vols[0], vols[1]))
        elif len(vols) == 1:
            arcs.append((vols[0], owner[f]))
        else:
            arcs.append(None)
    graph = VolumeGraph.from_arcs(c.n_volumes + classes.K, arcs)
    return AugmentedLattice(c, classes.classes, graph)


# ---------------------------------------------------------------------------
# logical operators


@dataclass(frozen=True)
class LogicalBasis:
    """Paired X and Z logical representatives.

    ``x_reps[i]`` overlaps ``z_reps[j]`` an odd number of times iff i == j.
    """

    x_reps: tuple[FaceSet, ...]
    z_reps: tuple[FaceSet, ...]

    @property
    def k(self) -> int:
        return len(self.x_reps)


def torus_plane(L: int, normal: int, offset: int = 0) -> FaceSet:
    """The L^2 faces perpendicular to ``normal`` at coordinate ``offset``."""
    ids = []
    for u in range(L):
        for v in range(L):
            p = [0, 0, 0]
            p[normal] = offset
            p[(normal + 1) % 3] = u
            p[(normal + 2) % 3] = v
            ids.append(torus_face(L, *p, normal))
    return FaceSet.from_ids(3 * L**3, ids)


def torus_winding_path(L: int, axis: int, origin: tuple[int, int, int] = (0, 0, 0)) -> FaceSet:
    """Faces perpendicular to ``axis`` stacked along it through ``origin``'s column."""
    ids = []
    for t in range(L):
        p = list(origin)
        p[axis] = t
        ids.append(torus_face(L, *p, axis))
    return FaceSet.from_ids(3 * L**3, ids)


def _shortest_face_path(c: ChainComplex3, f_start: int, f_end: int) -> list[int]:
    """Face path from one degree-one face to another through shortest volume hops."""
    graph = c.volume_graph()
    (src,) = c.face_volumes[f_start]
    (dst,) = c.face_volumes[f_end]
    prev: dict[int, tuple[int, int] | None] = {src: None}
    queue = deque([src])
    while queue and dst not in prev:
        u = queue.popleft()
        for f, w in graph.adjacency[u]:
            if w not in prev:
                prev[w] = (f, u)
                queue.append(w)
    if dst not in prev:
        raise LatticeError("boundary faces are not connected through the lattice")
    middle = []
    node = dst
    while prev[node] is not None:
        f, node = prev[node]
        middle.append(f)
    return [f_start] + middle[::-1] + [f_end]


def check_basis(c: ChainComplex3, basis: LogicalBasis) -> list[str]:
    """Problems with ``basis``; empty when it is a valid paired basis."""
    problems = []
    for i, x in enumerate(basis.x_reps):
        if boundary_of_faces(c, x):
            problems.append(f"x logical {i} has a nonzero syndrome")
    for j, z in enumerate(basis.z_reps):
        for vol, bd in enumerate(c.volumes):
            if sum(1 for f in bd if f in z) % 2:
                problems.append(f"z logical {j} overlaps volume {vol} oddly")
                break
    for i, x in enumerate(basis.x_reps):
        for j, z in enumerate(basis.z_reps):
            parity = len(x & z) % 2
            if parity != (i == j):
                problems.append(f"pairing of x logical {i} with z logical {j} is {parity}")
    return problems


def logical_basis(c: ChainComplex3, classes: BoundaryClasses | None = None) -> LogicalBasis:
    """Paired logical basis for built-in families or from the lattice's own records."""
    fam = c.family
    if fam is not None and fam.name == "cubic-torus":
        L = fam.dims[0]
        return LogicalBasis(
            tuple(torus_plane(L, a, 0) for a in range(3)),
            tuple(torus_winding_path(L, a) for a in range(3)),
        )
    if fam is not None and fam.name == "slab":
        if classes is None:
            classes = face_equivalence_classes(c)
        if classes.K <= 1:
            return LogicalBasis((), ())
        last = classes.classes[-1]
        anchor = min(last)
        xs, zs = [], []
        for cls in classes.classes[:-1]:
            xs.append(cls)
            zs.append(c.face_set(_shortest_face_path(c, min(cls), anchor)))
        return LogicalBasis(tuple(xs), tuple(zs))
    if c.xlogical:
        basis = LogicalBasis(
            tuple(c.face_set(r) for r in c.xlogical),
            tuple(c.face_set(r) for r in c.zlogical),
        )
        problems = check_basis(c, basis)
        if problems:
            raise UnsupportedLattice("supplied logical basis is invalid: " + "; ".join(problems))
        return basis
    if not c.periodic:
        # a lattice without boundary classes beyond one encodes nothing
        if classes is None:
            classes = face_equivalence_classes(c)
        if classes.K <= 1:
            return LogicalBasis((), ())
    raise UnsupportedLattice("no logical basis known; supply xlogical/zlogical records")


@dataclass(frozen=True)
class HomologyClass:
    """Parities of a zero-syndrome residual against each Z logical."""

    parity: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return not any(self.parity)

    def __str__(self) -> str:
        if self.trivial:
            return "trivial"
        return "logical(" + ",".join(map(str, self.parity)) + ")"


def classify_zero_syndrome(c: ChainComplex3, basis: LogicalBasis, residual: FaceSet) -> HomologyClass:
    """Trivial iff ``residual`` is a stabilizer, else which logicals it flips."""
    if boundary_of_faces(c, residual):
        raise ValueError("residual has a nonzero syndrome")
    return HomologyClass(tuple(len(residual & z) % 2 for z in basis.z_reps))
