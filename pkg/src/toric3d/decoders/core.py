"""Pieces shared by both decoders: wave exploration, peeling and outcomes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..cellsets import EdgeSet, FaceSet
from ..lattice import ChainComplex3


class DecodeStatus(enum.Enum):
    SUCCESS = "Success"
    PEELING_STUCK = "PeelingStuck"
    RESIDUAL_SYNDROME = "ResidualSyndrome"
    KLEIN_BOTTLE_SUSPECTED = "KleinBottleSuspected"

    def __str__(self) -> str:
        return self.value


@dataclass
class DecodeOutcome:
    status: DecodeStatus
    estimate: FaceSet
    diagnostics: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.status is DecodeStatus.SUCCESS

    def to_dict(self) -> dict:
        return {
            "status": str(self.status),
            "estimate": self.estimate.ids(),
            "diagnostics": dict(self.diagnostics),
        }


class InternalError(AssertionError):
    """A decoder broke one of its own guarantees; this is a bug, not noise."""


@dataclass
class Exploration:
    """Result of growing the erasure from the syndrome.

    ``accepted`` is the erasure set, ``order`` the acceptance order,
    ``waves`` the number of frontier rounds and ``reseeds`` how often the
    frontier died with faces still unexplored.
    """

    accepted: FaceSet
    order: list[int]
    explored: int
    waves: int
    reseeds: int
    frozen: int


def explore_waves(
    c: ChainComplex3,
    syndrome: EdgeSet,
    eligible: Iterable[int] | None,
    accept: Callable[[int], bool],
) -> Exploration:
    """Breadth-first growth from the syndrome, one frontier wave at a time.

    Every eligible face is explored exactly once, in ascending id order
    within a wave; ``accept(f)`` decides whether it joins the erasure.  The
    next frontier is the boundary of the faces accepted in this wave minus
    the current frontier.  If the frontier reaches no unexplored face while
    some remain, the lowest-id unexplored face reseeds it.
    """
    n = c.n_faces
    if eligible is None:
        done = bytearray(n)
        remaining = n
    else:
        done = bytearray(b"\x01") * n
        remaining = 0
        for f in eligible:
            if done[f]:
                done[f] = 0
                remaining += 1
    edge_faces = c.edge_faces
    faces = c.faces
    frontier = set(syndrome)
    order: list[int] = []
    waves = reseeds = frozen = 0
    cursor = 0
    explored = 0
    while remaining:
        candidates = {f for e in frontier for f in edge_faces[e] if not done[f]}
        if not candidates:
            while done[cursor]:
                cursor += 1
            frontier = set(faces[cursor])
            reseeds += 1
            continue
        waves += 1
        grown: set[int] = set()
        for f in sorted(candidates):
            done[f] = 1
            remaining -= 1
            explored += 1
            if accept(f):
                order.append(f)
                grown.update(faces[f])
            else:
                frozen += 1
        frontier = grown - frontier
    return Exploration(FaceSet.from_ids(n, order), order, explored, waves, reseeds, frozen)


@dataclass
class PeelResult:
    estimate: list[int]
    residual: bytearray
    remaining: list[int]
    peeled: int

    def residual_set(self, n_edges: int) -> EdgeSet:
        return EdgeSet.from_ids(n_edges, (e for e, s in enumerate(self.residual) if s))


def peel_erasure(
    c: ChainComplex3,
    erasure: Iterable[int],
    syndrome: EdgeSet | bytearray,
    blockers: FaceSet | None = None,
) -> PeelResult:
    """Leaf-elimination over the erasure.

    An edge touched by exactly one face of ``erasure`` (counting the
    ``blockers`` faces too, which are never peeled) fixes that face: it is
    in the estimate iff the edge still carries syndrome.  The face is then
    removed and its boundary toggled out of the syndrome.
    """
    faces = c.faces
    edge_faces = c.edge_faces
    if isinstance(syndrome, EdgeSet):
        syn = bytearray(c.n_edges)
        for e in syndrome:
            syn[e] = 1
    else:
        syn = bytearray(syndrome)
    live = bytearray(c.n_faces)
    for f in erasure:
        live[f] = 1
    blocked = bytearray(c.n_faces)
    if blockers is not None:
        for f in blockers:
            blocked[f] = 1
    count: dict[int, int] = {}
    for f, on in enumerate(live):
        if on:
            for e in faces[f]:
                if e not in count:
                    count[e] = sum(1 for g in edge_faces[e] if live[g] or blocked[g])
    stack = sorted((e for e, k in count.items() if k == 1), reverse=True)
    estimate: list[int] = []
    peeled = 0
    while stack:
        e = stack.pop()
        if count[e] != 1:
            continue
        leaf = -1
        for g in edge_faces[e]:
            if live[g]:
                leaf = g
                break
        if leaf < 0:
            continue  # the single face left on this edge is a blocker
        if syn[e]:
            estimate.append(leaf)
            for e2 in faces[leaf]:
                syn[e2] ^= 1
        live[leaf] = 0
        peeled += 1
        for e2 in faces[leaf]:
            k = count[e2] - 1
            count[e2] = k
            if k == 1:
                stack.append(e2)
    remaining = [f for f, on in enumerate(live) if on]
    return PeelResult(sorted(estimate), syn, remaining, peeled)


def syndrome_bits(c: ChainComplex3, faces: Iterable[int]) -> int:
    bits = 0
    for f in faces:
        bits ^= c.face_boundary_mask(f)
    return bits
