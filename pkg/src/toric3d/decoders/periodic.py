"""Bit-flip decoding for periodic lattices.

Some logical supports are not cut sets on a periodic lattice, so the
exploration runs with an artificial boundary: a union of X logical
representatives that holds no stabilizer.  The erasure grows outside it,
peeling pushes the error onto it, and a separate estimator clears what
is left on the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..cellsets import EdgeSet, FaceSet
from ..cutset import CutSession
from ..lattice import ChainComplex3, LatticeError, boundary_of_faces, volume_adjacency
from ..stabilizer import LogicalBasis, logical_basis, torus_plane
from .core import (
    DecodeOutcome,
    DecodeStatus,
    Exploration,
    explore_waves,
    peel_erasure,
    syndrome_bits,
)

ESTIMATORS = ("cubic", "general")


class ResidualEstimationError(RuntimeError):
    """The residual syndrome on the artificial boundary could not be cleared."""


@dataclass(frozen=True)
class ArtificialBoundary:
    """Union of X logical representatives used as an artificial boundary.

    ``shared_edges`` holds the edges touched by more than two boundary
    faces.  ``disjoint_planes`` records that the representatives are face
    disjoint; ``acyclic`` that the shared edges carry no homologically
    trivial cycle (known only for built-in constructions).
    """

    faces: FaceSet
    reps: tuple[FaceSet, ...]
    shared_edges: EdgeSet
    touched_edges: EdgeSet
    disjoint_planes: bool
    acyclic: bool

    @property
    def supports_cubic_estimator(self) -> bool:
        return self.disjoint_planes and self.acyclic


def _shared_edges(c: ChainComplex3, faces: FaceSet) -> EdgeSet:
    touched = set()
    for f in faces:
        touched.update(c.faces[f])
    return c.edge_set(e for e in touched if sum(1 for g in c.edge_faces[e] if g in faces) > 2)


def _touched_edges(c: ChainComplex3, faces: FaceSet) -> EdgeSet:
    bits = 0
    for f in faces:
        for e in c.faces[f]:
            bits |= 1 << e
    return EdgeSet(c.n_edges, bits)


def _stabilizer_inside(c: ChainComplex3, faces: FaceSet) -> FaceSet | None:
    """Boundary of the smallest volume component left when ``faces`` are removed."""
    comps = volume_adjacency(c, faces)
    if comps.count <= 1:
        return None
    sizes = {}
    for lab in comps.labels.tolist():
        sizes[lab] = sizes.get(lab, 0) + 1
    smallest = min(sizes, key=lambda lab: (sizes[lab], lab))
    bits = 0
    for vol, lab in enumerate(comps.labels.tolist()):
        if lab == smallest:
            for f in c.volumes[vol]:
                bits ^= 1 << f
    return FaceSet(c.n_faces, bits)


def reduce_representatives(c: ChainComplex3, reps: Sequence[FaceSet], max_rounds: int = 1000) -> list[FaceSet]:
    """Swap representatives for equivalent ones until their union holds no stabilizer.

    Each round finds a stabilizer support S inside the union, narrows a
    face set T inside S by intersecting with successive representatives,
    and multiplies by S every representative that meets T.  The union
    shrinks strictly, so this terminates.
    """
    reps = list(reps)
    for _ in range(max_rounds):
        union = FaceSet(c.n_faces, 0)
        for r in reps:
            union = union | r
        S = _stabilizer_inside(c, union)
        if S is None:
            return reps
        T = None
        for r in reps:
            if T is None:
                if not r.isdisjoint(S):
                    T = r & S
            elif not r.isdisjoint(T):
                T = r & T
        if T is None:
            raise LatticeError("stabilizer inside the boundary meets no representative")
        reps = [r ^ S if not r.isdisjoint(T) else r for r in reps]
    raise LatticeError("could not remove stabilizers from the artificial boundary")


def build_artificial_boundary(
    c: ChainComplex3,
    basis: LogicalBasis | None = None,
    origin: tuple[int, int, int] = (0, 0, 0),
) -> ArtificialBoundary:
    """Artificial boundary from X logical representatives.

    On the cubic torus this is the three coordinate planes through the cube
    at ``origin``; otherwise the basis' X representatives, reduced until
    their union holds no stabilizer.
    """
    fam = c.family
    if fam is not None and fam.name == "cubic-torus":
        L = fam.dims[0]
        reps = [torus_plane(L, a, origin[a] % L) for a in range(3)]
        acyclic = True
    else:
        if basis is None:
            basis = logical_basis(c)
        if not basis.x_reps:
            raise LatticeError("lattice encodes no logical qubits; no artificial boundary needed")
        reps = reduce_representatives(c, basis.x_reps)
        acyclic = False
    faces = FaceSet(c.n_faces, 0)
    disjoint = True
    for r in reps:
        if not faces.isdisjoint(r):
            disjoint = False
        faces = faces | r
    if _stabilizer_inside(c, faces) is not None:
        raise LatticeError("artificial boundary contains a stabilizer support")
    return ArtificialBoundary(
        faces, tuple(reps), _shared_edges(c, faces), _touched_edges(c, faces), disjoint, acyclic
    )


def explore_periodic(c: ChainComplex3, boundary: ArtificialBoundary, syndrome: EdgeSet) -> Exploration:
    """Grow the erasure outside the artificial boundary, refusing cuts of boundary + erasure."""
    session = CutSession(c.volume_graph(), boundary.faces)
    eligible = (f for f in range(c.n_faces) if f not in boundary.faces)
    return explore_waves(c, syndrome, eligible, lambda f: not session.try_add(f))


@dataclass
class Projection:
    estimate: FaceSet
    residual: EdgeSet
    ok: bool
    remaining: list[int]
    peeled: int


def peel_project(
    c: ChainComplex3, boundary: ArtificialBoundary, erasure: FaceSet, syndrome: EdgeSet
) -> Projection:
    """Peel the erasure with the boundary faces held in place.

    Succeeds when every leftover syndrome edge touches the boundary, i.e.
    the error has been pushed onto it.
    """
    result = peel_erasure(c, erasure, syndrome, blockers=boundary.faces)
    residual = result.residual_set(c.n_edges)
    ok = residual.issubset(boundary.touched_edges)
    return Projection(c.face_set(result.estimate), residual, ok, result.remaining, result.peeled)


PlaneLinks = list[dict[int, list[tuple[int, int]]]]


def cubic_plane_links(c: ChainComplex3, boundary: ArtificialBoundary) -> PlaneLinks:
    """Per plane, each face's (neighbour, check edge) pairs, skipping shared edges."""
    shared = boundary.shared_edges
    planes = []
    for plane in boundary.reps:
        links: dict[int, list[tuple[int, int]]] = {f: [] for f in plane}
        for f in plane:
            for e in c.faces[f]:
                if e in shared:
                    continue
                others = [g for g in c.edge_faces[e] if g in plane and g != f]
                if len(others) != 1:
                    raise ResidualEstimationError(f"edge {e} does not join exactly two plane faces")
                links[f].append((others[0], e))
        planes.append(links)
    return planes


def estimate_residual_cubic(
    c: ChainComplex3, boundary: ArtificialBoundary, residual: EdgeSet, links: PlaneLinks | None = None
) -> FaceSet:
    """Two-colour each boundary plane from the residual syndrome and keep the lighter colour.

    Checks on shared edges are dependent and skipped.  Within a plane each
    remaining check touches exactly two plane faces and fixes whether they
    agree, so a plane has exactly two consistent assignments.
    """
    if links is None:
        links = cubic_plane_links(c, boundary)
    syn = residual.bits
    out = 0
    for plane in links:
        value: dict[int, int] = {}
        for seed in sorted(plane):
            if seed in value:
                continue
            value[seed] = 1
            component = [seed]
            stack = [seed]
            while stack:
                f = stack.pop()
                for g, e in plane[f]:
                    want = value[f] ^ ((syn >> e) & 1)
                    got = value.get(g)
                    if got is None:
                        value[g] = want
                        component.append(g)
                        stack.append(g)
                    elif got != want:
                        raise ResidualEstimationError("inconsistent residual syndrome on a boundary plane")
            chosen = [f for f in component if value[f]]
            if 2 * len(chosen) > len(component):
                chosen = [f for f in component if not value[f]]
            for f in chosen:
                out |= 1 << f
    return FaceSet(c.n_faces, out)


def explore_residual_general(c: ChainComplex3, boundary: ArtificialBoundary, residual: EdgeSet) -> Exploration:
    """Grow an erasure inside the boundary from the residual syndrome.

    A face is refused when, with the faces already taken, it would complete
    a zero-syndrome set (a logical, since the boundary holds no stabilizer).
    Independence of face boundaries is tracked with an XOR basis keyed by
    leading edge.
    """
    basis: dict[int, int] = {}

    def independent(f: int) -> bool:
        v = c.face_boundary_mask(f)
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                return True
            v ^= b
        return False

    return explore_waves(c, residual, boundary.faces, independent)


def estimate_residual_general(c: ChainComplex3, boundary: ArtificialBoundary, residual: EdgeSet) -> FaceSet:
    """Erasure decoding restricted to the boundary: explore, then peel."""
    exploration = explore_residual_general(c, boundary, residual)
    result = peel_erasure(c, exploration.accepted, residual)
    if any(result.residual):
        raise ResidualEstimationError("peeling on the boundary left syndrome behind")
    return c.face_set(result.estimate)


class PeriodicDecoder:
    """Decoder bound to one periodic lattice.

    ``estimator`` picks the residual estimator ("cubic" needs face-disjoint
    planes with acyclic shared edges).  ``retries`` extra artificial
    boundaries are tried when projection fails; ``gf2_fallback`` then
    solves the remaining system exactly instead of reporting failure.
    """

    def __init__(
        self,
        c: ChainComplex3,
        basis: LogicalBasis | None = None,
        estimator: str = "cubic",
        retries: int = 1,
        gf2_fallback: bool = False,
    ):
        if not c.periodic:
            raise LatticeError("periodic decoder needs a periodic lattice")
        if estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {estimator!r}")
        if volume_adjacency(c).count != 1:
            raise LatticeError("decoder needs a lattice whose volumes are connected")
        self.lattice = c
        self.basis = basis if basis is not None else logical_basis(c)
        self.retries = retries
        self.gf2_fallback = gf2_fallback
        self.boundaries = self._boundaries(retries)
        if estimator == "cubic" and not all(b.supports_cubic_estimator for b in self.boundaries):
            raise LatticeError("cubic estimator needs disjoint planes with acyclic shared edges")
        self.estimator = estimator
        self._links = [cubic_plane_links(c, b) for b in self.boundaries] if estimator == "cubic" else None

    def _boundaries(self, retries: int) -> list[ArtificialBoundary]:
        c = self.lattice
        fam = c.family
        if fam is not None and fam.name == "cubic-torus":
            L = fam.dims[0]
            shift = L // 2
            origins = [(0, 0, 0)] + [((i * shift) % L,) * 3 for i in range(1, retries + 1)]
            # tiny tori repeat origins; keep distinct ones only
            seen, unique = set(), []
            for o in origins:
                if o not in seen:
                    seen.add(o)
                    unique.append(o)
            return [build_artificial_boundary(c, self.basis, o) for o in unique]
        return [build_artificial_boundary(c, self.basis)]

    @property
    def boundary(self) -> ArtificialBoundary:
        return self.boundaries[0]

    def estimate_residual(self, boundary: ArtificialBoundary, residual: EdgeSet) -> FaceSet:
        if self.estimator == "cubic":
            links = self._links[self.boundaries.index(boundary)] if self._links else None
            return estimate_residual_cubic(self.lattice, boundary, residual, links)
        return estimate_residual_general(self.lattice, boundary, residual)

    def decode(self, syndrome: EdgeSet) -> DecodeOutcome:
        c = self.lattice
        estimate = 0
        current = syndrome
        diag = {"attempts": 0, "projection_failures": 0, "fallback": False, "frozen": 0, "reseeds": 0}
        boundary = self.boundaries[0]
        projected = False
        exploration = None
        for boundary in self.boundaries:
            diag["attempts"] += 1
            exploration = explore_periodic(c, boundary, current)
            diag["frozen"] += exploration.frozen
            diag["reseeds"] += exploration.reseeds
            proj = peel_project(c, boundary, exploration.accepted, current)
            estimate ^= proj.estimate.bits
            current = proj.residual
            if proj.ok:
                projected = True
                break
            diag["projection_failures"] += 1
        diag["retry_used"] = diag["attempts"] > 1
        if not projected:
            if not self.gf2_fallback:
                return DecodeOutcome(DecodeStatus.KLEIN_BOTTLE_SUSPECTED, FaceSet(c.n_faces, estimate), diag)
            from ..oracle import InfeasibleSyndrome, solve_syndrome

            try:
                solved = solve_syndrome(c, current, exploration.accepted | boundary.faces)
            except InfeasibleSyndrome:
                return DecodeOutcome(DecodeStatus.KLEIN_BOTTLE_SUSPECTED, FaceSet(c.n_faces, estimate), diag)
            diag["fallback"] = True
            estimate ^= solved.solution.bits
            current = EdgeSet(c.n_edges, 0)
        try:
            on_boundary = self.estimate_residual(boundary, current)
        except ResidualEstimationError as exc:
            diag["error"] = str(exc)
            return DecodeOutcome(DecodeStatus.RESIDUAL_SYNDROME, FaceSet(c.n_faces, estimate), diag)
        estimate ^= on_boundary.bits
        result = FaceSet(c.n_faces, estimate)
        if syndrome_bits(c, result) != syndrome.bits:
            diag["residual"] = (boundary_of_faces(c, result) ^ syndrome).ids()
            return DecodeOutcome(DecodeStatus.RESIDUAL_SYNDROME, result, diag)
        return DecodeOutcome(DecodeStatus.SUCCESS, result, diag)


def decode_periodic(c: ChainComplex3, syndrome: EdgeSet, **options) -> DecodeOutcome:
    return PeriodicDecoder(c, **options).decode(syndrome)
