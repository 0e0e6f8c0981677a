"""Bit-flip decoding for 3D toric codes on arbitrary lattices."""

from .cellsets import EdgeSet, FaceSet
from .cutset import CutSession, is_cut_set, is_cut_set_incremental
from .decoders import (
    BoundaryDecoder,
    DecodeOutcome,
    DecodeStatus,
    PeriodicDecoder,
    build_artificial_boundary,
    decode_periodic,
    decode_with_boundaries,
)
from .lattice import (
    ChainComplex3,
    LatticeError,
    boundary_of_faces,
    build_boundary_slab,
    build_cubic_torus,
    coboundary_of_edges,
    validate,
    volume_adjacency,
)
from .latticefile import dumps, load_lattice, loads, read_lattice, write_lattice
from .stabilizer import (
    augment,
    classify_zero_syndrome,
    face_equivalence_classes,
    logical_basis,
    syndrome,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryDecoder",
    "ChainComplex3",
    "CutSession",
    "DecodeOutcome",
    "DecodeStatus",
    "EdgeSet",
    "FaceSet",
    "LatticeError",
    "PeriodicDecoder",
    "augment",
    "boundary_of_faces",
    "build_artificial_boundary",
    "build_boundary_slab",
    "build_cubic_torus",
    "classify_zero_syndrome",
    "coboundary_of_edges",
    "decode_periodic",
    "decode_with_boundaries",
    "dumps",
    "face_equivalence_classes",
    "is_cut_set",
    "is_cut_set_incremental",
    "load_lattice",
    "loads",
    "logical_basis",
    "read_lattice",
    "syndrome",
    "validate",
    "volume_adjacency",
    "write_lattice",
]
