"""Combinatorial 3D cell complexes carrying a toric code.

Qubits live on faces, Z checks on edges and X checks on volumes.  A
complex is purely combinatorial: vertices are counted, edges list their
one or two endpoint vertices (one endpoint marks a partial edge), faces
list their boundary edges and volumes list their boundary faces.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cellsets import EdgeSet, FaceSet

AXES = (0, 1, 2)


class LatticeError(ValueError):
    """Raised for structurally invalid complexes or bad construction requests."""


@dataclass(frozen=True)
class Family:
    """Provenance of a complex built by one of the builders in this module."""

    name: str
    dims: tuple[int, int, int]
    rough_axes: tuple[int, ...] = ()


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class VolumeGraph:
    """Volumes as nodes, faces incident on two volumes as arcs.

    ``arcs[f]`` is the pair of volumes joined by face ``f`` or ``None`` when
    the face is not an arc.  Parallel arcs are allowed (a face pair can join
    the same two volumes on small tori).
    """

    node_count: int
    arcs: tuple[tuple[int, int] | None, ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)

    @classmethod
    def from_arcs(cls, node_count: int, arcs: Sequence[tuple[int, int] | None]) -> "VolumeGraph":
        adj: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
        for f, arc in enumerate(arcs):
            if arc is None:
                continue
            u, v = arc
            adj[u].append((f, v))
            adj[v].append((f, u))
        return cls(node_count, tuple(arcs), tuple(tuple(a) for a in adj))

    @property
    def face_count(self) -> int:
        return len(self.arcs)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, arc face, neighbour) arrays of the adjacency lists."""
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        for u, nbrs in enumerate(self.adjacency):
            indptr[u + 1] = indptr[u] + len(nbrs)
        flat = [pair for nbrs in self.adjacency for pair in nbrs]
        faces = np.array([f for f, _ in flat], dtype=np.int64)
        nbrs = np.array([w for _, w in flat], dtype=np.int64)
        return indptr, faces, nbrs


@dataclass(frozen=True)
class Components:
    labels: np.ndarray
    count: int

    def component_of(self, node: int) -> list[int]:
        return np.flatnonzero(self.labels == self.labels[node]).tolist()


class ChainComplex3:
    """Immutable 3D lattice with its incidence maps.

    Boundary maps are stored as given (``edges``, ``faces``, ``volumes``);
    the coboundary maps ``edge_faces`` and ``face_volumes`` are derived.
    ``xlogical``/``zlogical`` optionally carry a user-supplied logical basis
    for lattices that are not built in.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Sequence[int]],
        faces: Iterable[Iterable[int]],
        volumes: Iterable[Iterable[int]],
        periodic: bool = False,
        family: Family | None = None,
        xlogical: Iterable[Iterable[int]] = (),
        zlogical: Iterable[Iterable[int]] = (),
    ):
        self.vertex_count = int(vertex_count)
        self.edges: tuple[tuple[int, ...], ...] = tuple(tuple(e) for e in edges)
        self.faces: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(f))) for f in faces)
        self.volumes: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(v))) for v in volumes)
        self.periodic = bool(periodic)
        self.family = family
        self.xlogical: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(r))) for r in xlogical)
        self.zlogical: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(r))) for r in zlogical)

        for e, ends in enumerate(self.edges):
            if not 1 <= len(ends) <= 2:
                raise LatticeError(f"edge {e} has {len(ends)} endpoints; expected 1 or 2")
            for v in ends:
                if not 0 <= v < self.vertex_count:
                    raise LatticeError(f"edge {e} references vertex {v} out of range")
        for f, bd in enumerate(self.faces):
            for e in bd:
                if not 0 <= e < len(self.edges):
                    raise LatticeError(f"face {f} references edge {e} out of range")
        for vol, bd in enumerate(self.volumes):
            for f in bd:
                if not 0 <= f < len(self.faces):
                    raise LatticeError(f"volume {vol} references face {f} out of range")
        for r in itertools.chain(self.xlogical, self.zlogical):
            for f in r:
                if not 0 <= f < len(self.faces):
                    raise LatticeError(f"logical representative references face {f} out of range")

        edge_faces: list[list[int]] = [[] for _ in self.edges]
        for f, bd in enumerate(self.faces):
            for e in bd:
                edge_faces[e].append(f)
        face_volumes: list[list[int]] = [[] for _ in self.faces]
        for vol, bd in enumerate(self.volumes):
            for f in bd:
                face_volumes[f].append(vol)
        self.edge_faces: tuple[tuple[int, ...], ...] = tuple(tuple(x) for x in edge_faces)
        self.face_volumes: tuple[tuple[int, ...], ...] = tuple(tuple(x) for x in face_volumes)
        self._face_masks = tuple(sum(1 << e for e in bd) for bd in self.faces)
        self._graph: VolumeGraph | None = None

    @property
    def n_vertices(self) -> int:
        return self.vertex_count

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_volumes(self) -> int:
        return len(self.volumes)

    @property
    def l1_verified(self) -> bool:
        """Whether "no interior boundaries" holds by construction."""
        return self.family is not None

    def is_partial(self, e: int) -> bool:
        return len(self.edges[e]) == 1

    def face_set(self, ids: Iterable[int] = ()) -> FaceSet:
        return FaceSet.from_ids(self.n_faces, ids)

    def edge_set(self, ids: Iterable[int] = ()) -> EdgeSet:
        return EdgeSet.from_ids(self.n_edges, ids)

    def face_boundary_mask(self, f: int) -> int:
        return self._face_masks[f]

    def degree_one_faces(self) -> FaceSet:
        return self.face_set(f for f, vols in enumerate(self.face_volumes) if len(vols) == 1)

    def volume_boundary(self, vol: int) -> FaceSet:
        return self.face_set(self.volumes[vol])

    def volume_graph(self) -> VolumeGraph:
        """Adjacency of volumes through faces incident on exactly two volumes."""
        if self._graph is None:
            arcs = [tuple(vols) if len(vols) == 2 else None for vols in self.face_volumes]
            self._graph = VolumeGraph.from_arcs(self.n_volumes, arcs)
        return self._graph

    def same_structure(self, other: "ChainComplex3") -> bool:
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.faces == other.faces
            and self.volumes == other.volumes
            and self.periodic == other.periodic
        )

    def __repr__(self) -> str:
        kind = self.family.name if self.family else "loaded"
        return (
            f"ChainComplex3({kind}, V={self.n_vertices}, E={self.n_edges}, "
            f"F={self.n_faces}, C={self.n_volumes}, periodic={self.periodic})"
        )


# ---------------------------------------------------------------------------
# builders


def torus_vertex(L: int, x: int, y: int, z: int) -> int:
    return (x % L) + L * ((y % L) + L * (z % L))


def torus_edge(L: int, x: int, y: int, z: int, axis: int) -> int:
    """Edge leaving vertex (x, y, z) along ``axis``."""
    return 3 * torus_vertex(L, x, y, z) + axis


def torus_face(L: int, x: int, y: int, z: int, normal: int) -> int:
    """Face anchored at (x, y, z) perpendicular to ``normal``."""
    return 3 * torus_vertex(L, x, y, z) + normal


def torus_volume(L: int, x: int, y: int, z: int) -> int:
    return torus_vertex(L, x, y, z)


def _unit(axis: int) -> tuple[int, int, int]:
    u = [0, 0, 0]
    u[axis] = 1
    return u[0], u[1], u[2]


def _add(p, q):
    return p[0] + q[0], p[1] + q[1], p[2] + q[2]


def build_cubic_torus(L: int) -> ChainComplex3:
    """Periodic L x L x L cubic lattice (3L^3 qubits)."""
    if L < 2:
        raise LatticeError(f"cubic torus needs L >= 2, got {L}")
    edges = []
    faces = []
    volumes = []
    for z, y, x in itertools.product(range(L), repeat=3):
        p = (x, y, z)
        for a in AXES:
            q = _add(p, _unit(a))
            edges.append((torus_vertex(L, *p), torus_vertex(L, *q)))
        for a in AXES:
            b, c = (a + 1) % 3, (a + 2) % 3
            faces.append(
                (
                    torus_edge(L, *p, b),
                    torus_edge(L, *_add(p, _unit(c)), b),
                    torus_edge(L, *p, c),
                    torus_edge(L, *_add(p, _unit(b)), c),
                )
            )
        volumes.append(
            tuple(torus_face(L, *p, a) for a in AXES)
            + tuple(torus_face(L, *_add(p, _unit(a)), a) for a in AXES)
        )
    return ChainComplex3(L**3, edges, faces, volumes, periodic=True, family=Family("cubic-torus", (L, L, L)))


def build_boundary_slab(Lx: int, Ly: int, Lz: int, rough_axes: Iterable[int] = ()) -> ChainComplex3:
    """Non-periodic Lx x Ly x Lz block of cubes.

    By default every outer face is kept, so the whole surface forms a
    single boundary class.  Each axis listed in ``rough_axes`` instead has
    its two end walls removed together with the vertices and edges lying in
    them; edges crossing into a removed wall become partial edges.  Rough
    axes need at least two cubes along them.
    """
    dims = (Lx, Ly, Lz)
    if min(dims) < 1:
        raise LatticeError(f"slab sides must be >= 1, got {dims}")
    rough = tuple(sorted(set(rough_axes)))
    for a in rough:
        if a not in AXES:
            raise LatticeError(f"rough axis {a} is not 0, 1 or 2")
        if dims[a] < 2:
            raise LatticeError(f"rough axis {a} needs at least 2 cubes, got {dims[a]}")

    def on_wall(p, a):
        return p[a] == 0 or p[a] == dims[a]

    def vertex_kept(p):
        return not any(on_wall(p, a) for a in rough)

    vertex_ids: dict[tuple[int, int, int], int] = {}
    for z in range(Lz + 1):
        for y in range(Ly + 1):
            for x in range(Lx + 1):
                p = (x, y, z)
                if vertex_kept(p):
                    vertex_ids[p] = len(vertex_ids)

    edge_ids: dict[tuple[tuple[int, int, int], int], int] = {}
    edges: list[tuple[int, ...]] = []
    for z in range(Lz + 1):
        for y in range(Ly + 1):
            for x in range(Lx + 1):
                p = (x, y, z)
                for a in AXES:
                    q = _add(p, _unit(a))
                    if q[a] > dims[a]:
                        continue
                    if any(on_wall(p, b) for b in rough if b != a):
                        continue
                    ends = tuple(vertex_ids[v] for v in (p, q) if v in vertex_ids)
                    edge_ids[(p, a)] = len(edges)
                    edges.append(ends)

    face_ids: dict[tuple[tuple[int, int, int], int], int] = {}
    faces: list[tuple[int, ...]] = []
    for z in range(Lz + 1):
        for y in range(Ly + 1):
            for x in range(Lx + 1):
                p = (x, y, z)
                for a in AXES:
                    b, c = (a + 1) % 3, (a + 2) % 3
                    if p[b] >= dims[b] or p[c] >= dims[c]:
                        continue
                    if a in rough and on_wall(p, a):
                        continue
                    candidates = (
                        (p, b),
                        (_add(p, _unit(c)), b),
                        (p, c),
                        (_add(p, _unit(b)), c),
                    )
                    face_ids[(p, a)] = len(faces)
                    faces.append(tuple(edge_ids[k] for k in candidates if k in edge_ids))

    volumes: list[tuple[int, ...]] = []
    for z in range(Lz):
        for y in range(Ly):
            for x in range(Lx):
                p = (x, y, z)
                keys = [(p, a) for a in AXES] + [(_add(p, _unit(a)), a) for a in AXES]
                volumes.append(tuple(face_ids[k] for k in keys if k in face_ids))

    return ChainComplex3(
        len(vertex_ids), edges, faces, volumes, periodic=False, family=Family("slab", dims, rough)
    )


def rebuild_family(family: Family) -> ChainComplex3:
    if family.name == "cubic-torus":
        return build_cubic_torus(family.dims[0])
    if family.name == "slab":
        return build_boundary_slab(*family.dims, rough_axes=family.rough_axes)
    raise LatticeError(f"unknown lattice family {family.name!r}")


# ---------------------------------------------------------------------------
# boundary operators


def boundary_of_faces(c: ChainComplex3, F: FaceSet | Iterable[int]) -> EdgeSet:
    """Symmetric difference of the face boundaries; the bit-flip syndrome of ``F``."""
    ids = F if isinstance(F, FaceSet) else list(F)
    if isinstance(F, FaceSet) and F.universe != c.n_faces:
        raise LatticeError("face set belongs to a different lattice")
    bits = 0
    masks = c._face_masks
    for f in ids:
        if not 0 <= f < c.n_faces:
            raise LatticeError(f"face id {f} out of range")
        bits ^= masks[f]
    return EdgeSet(c.n_edges, bits)


def coboundary_of_edges(c: ChainComplex3, A: EdgeSet | Iterable[int]) -> FaceSet:
    """Symmetric difference of the faces incident on each edge of ``A``."""
    if isinstance(A, EdgeSet) and A.universe != c.n_edges:
        raise LatticeError("edge set belongs to a different lattice")
    bits = 0
    for e in A:
        if not 0 <= e < c.n_edges:
            raise LatticeError(f"edge id {e} out of range")
        for f in c.edge_faces[e]:
            bits ^= 1 << f
    return FaceSet(c.n_faces, bits)


def boundary_of_volumes(c: ChainComplex3, V: Iterable[int]) -> FaceSet:
    bits = 0
    for vol in V:
        for f in c.volumes[vol]:
            bits ^= 1 << f
    return FaceSet(c.n_faces, bits)


def volume_adjacency(target: ChainComplex3 | VolumeGraph, excluded: FaceSet | Iterable[int] = ()) -> Components:
    """Connected components of the volume graph with ``excluded`` faces removed."""
    graph = target.volume_graph() if isinstance(target, ChainComplex3) else target
    banned = set(excluded)
    rows, cols = [], []
    for f, arc in enumerate(graph.arcs):
        if arc is None or f in banned:
            continue
        rows.append(arc[0])
        cols.append(arc[1])
    n = graph.node_count
    mat = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    count, labels = connected_components(mat, directed=False)
    return Components(labels, int(count))


# ---------------------------------------------------------------------------
# validation


def _face_boundary_violation(c: ChainComplex3, f: int) -> str | None:
    bd = c.faces[f]
    if not bd:
        return "face has an empty boundary"
    partial = [e for e in bd if c.is_partial(e)]
    degree: dict[int, int] = defaultdict(int)
    for e in bd:
        for v in c.edges[e]:
            degree[v] += 1
    if any(d != 2 for d in degree.values()):
        return "boundary edges do not form a single path or loop"
    if len(partial) not in (0, 2):
        return f"boundary has {len(partial)} partial edges; expected 0 or 2"
    # connectivity of the boundary edges through shared vertices
    seen = {bd[0]}
    stack = [bd[0]]
    by_vertex: dict[int, list[int]] = defaultdict(list)
    for e in bd:
        for v in c.edges[e]:
            by_vertex[v].append(e)
    while stack:
        e = stack.pop()
        for v in c.edges[e]:
            for e2 in by_vertex[v]:
                if e2 not in seen:
                    seen.add(e2)
                    stack.append(e2)
    if len(seen) != len(bd):
        return "boundary is a disjoint union of paths"
    return None


def _edge_violation(c: ChainComplex3, e: int) -> str | None:
    """Check that the faces around ``e`` arrange into one face path or cycle."""
    around = c.edge_faces[e]
    if not around:
        return "edge is not on any face"
    members = set(around)
    links: dict[int, list[int]] = defaultdict(list)
    for f in around:
        for vol in c.face_volumes[f]:
            links[vol].append(f)
    adj: dict[int, list[int]] = defaultdict(list)
    for vol, fs in links.items():
        if len(fs) != 2:
            return f"volume {vol} holds {len(fs)} faces around the edge; expected 2"
        a, b = fs
        adj[a].append(b)
        adj[b].append(a)
    terminals = [f for f in around if len(c.face_volumes[f]) == 1]
    if any(len(c.face_volumes[f]) == 0 for f in around):
        return "edge touches a face that bounds no volume"
    if len(terminals) not in (0, 2):
        return f"faces around the edge have {len(terminals)} free ends; expected 0 or 2"
    start = around[0]
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    if seen != members:
        return "faces around the edge split into several face paths"
    return None


def validate(c: ChainComplex3) -> list[Violation]:
    """Structural and L2 violations of ``c``; empty when the lattice is usable.

    Absence of interior boundaries is not checked here; it holds by
    construction for built-in families (see ``ChainComplex3.l1_verified``).
    """
    out: list[Violation] = []
    for f, vols in enumerate(c.face_volumes):
        if len(vols) > 2:
            out.append(Violation("face-degree", (f,), f"face {f} is incident on {len(vols)} volumes"))
        elif len(vols) == 0:
            out.append(Violation("face-degree", (f,), f"face {f} bounds no volume"))
    for vol, bd in enumerate(c.volumes):
        count: dict[int, int] = defaultdict(int)
        for f in bd:
            for e in c.faces[f]:
                count[e] += 1
        odd = sorted(e for e, k in count.items() if k % 2)
        if odd:
            out.append(
                Violation(
                    "volume-not-closed",
                    (vol, *odd),
                    f"volume {vol} boundary has odd incidence on edges {odd}",
                )
            )
    for f in range(c.n_faces):
        msg = _face_boundary_violation(c, f)
        if msg:
            out.append(Violation("L2-face", (f,), f"face {f}: {msg}"))
    for e in range(c.n_edges):
        msg = _edge_violation(c, e)
        if msg:
            out.append(Violation("L2-edge", (e,), f"edge {e} (L2): {msg}"))
    return out
