"""Bit-flip decoding for lattices with boundaries.

The syndrome is turned into an erasure by growing a face set that never
supports an X stabilizer or logical (checked as a cut set of the augmented
lattice); the unique error inside it is then recovered by peeling.
"""

from __future__ import annotations

from ..cellsets import EdgeSet, FaceSet
from ..cutset import CutSession
from ..lattice import ChainComplex3, LatticeError, volume_adjacency
from ..stabilizer import AugmentedLattice, augment, face_equivalence_classes
from .core import (
    DecodeOutcome,
    DecodeStatus,
    Exploration,
    InternalError,
    explore_waves,
    peel_erasure,
    syndrome_bits,
)


def explore_boundary(aug: AugmentedLattice, syndrome: EdgeSet) -> Exploration:
    """Grow the erasure from ``syndrome``, freezing faces that would close a cut."""
    session = CutSession(aug.graph)
    return explore_waves(aug.base, syndrome, None, lambda f: not session.try_add(f))


def peel(c: ChainComplex3, erasure: FaceSet, syndrome: EdgeSet) -> DecodeOutcome:
    """Recover the error inside ``erasure`` by leaf elimination."""
    result = peel_erasure(c, erasure, syndrome)
    diagnostics = {"peeled": result.peeled, "stuck_faces": len(result.remaining)}
    estimate = c.face_set(result.estimate)
    if not any(result.residual):
        return DecodeOutcome(DecodeStatus.SUCCESS, estimate, diagnostics)
    status = DecodeStatus.PEELING_STUCK if result.remaining else DecodeStatus.RESIDUAL_SYNDROME
    diagnostics["residual"] = result.residual_set(c.n_edges).ids()
    diagnostics["remaining"] = result.remaining
    return DecodeOutcome(status, estimate, diagnostics)


class BoundaryDecoder:
    """Decoder bound to one lattice; classes and augmentation are computed once.

    With ``gf2_fallback`` a peeling stall is resolved by solving the linear
    system restricted to the stuck part of the erasure.
    """

    def __init__(self, c: ChainComplex3, gf2_fallback: bool = True):
        if volume_adjacency(c).count != 1:
            raise LatticeError("decoder needs a lattice whose volumes are connected")
        self.lattice = c
        self.classes = face_equivalence_classes(c)
        self.augmented = augment(c, self.classes)
        self.gf2_fallback = gf2_fallback

    def explore(self, syndrome: EdgeSet) -> Exploration:
        return explore_boundary(self.augmented, syndrome)

    def decode(self, syndrome: EdgeSet) -> DecodeOutcome:
        c = self.lattice
        exploration = self.explore(syndrome)
        outcome = peel(c, exploration.accepted, syndrome)
        diag = outcome.diagnostics
        diag.update(
            waves=exploration.waves,
            erasure=len(exploration.accepted),
            frozen=exploration.frozen,
            reseeds=exploration.reseeds,
            fallback=False,
        )
        if outcome.status is DecodeStatus.PEELING_STUCK and self.gf2_fallback:
            from ..oracle import InfeasibleSyndrome, solve_syndrome

            residual = c.edge_set(diag["residual"])
            try:
                solved = solve_syndrome(c, residual, c.face_set(diag["remaining"]))
            except InfeasibleSyndrome:
                return outcome
            outcome = DecodeOutcome(DecodeStatus.SUCCESS, outcome.estimate ^ solved.solution, diag)
            diag["fallback"] = True
            del diag["residual"], diag["remaining"]
        if outcome.success and syndrome_bits(c, outcome.estimate) != syndrome.bits:
            raise InternalError("boundary decoder returned an estimate with the wrong syndrome")
        return outcome


def decode_with_boundaries(c: ChainComplex3, syndrome: EdgeSet, gf2_fallback: bool = True) -> DecodeOutcome:
    return BoundaryDecoder(c, gf2_fallback=gf2_fallback).decode(syndrome)
