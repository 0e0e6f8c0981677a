import itertools
import random

import pytest

from conftest import cube_complex, random_error, slab
from toric3d.cutset import is_cut_set
from toric3d.decoders import (
    BoundaryDecoder,
    DecodeStatus,
    Exploration,
    decode_with_boundaries,
    explore_boundary,
    peel,
)
from toric3d.lattice import boundary_of_faces
from toric3d.oracle import is_stabilizer_support, solve_syndrome, supports_stabilizer_or_logical
from toric3d.stabilizer import augment, syndrome


def interior_faces(c):
    return [f for f in range(c.n_faces) if len(c.face_volumes[f]) == 2]


def test_explore_empty_syndrome():
    c = slab(2)
    aug = augment(c)
    ex = explore_boundary(aug, c.edge_set())
    assert not supports_stabilizer_or_logical(c, ex.accepted)
    out = peel(c, ex.accepted, c.edge_set())
    assert out.success and len(out.estimate) == 0


def test_interior_face_is_erased():
    c = slab(2)
    aug = augment(c)
    for f in interior_faces(c):
        ex = explore_boundary(aug, syndrome(c, c.face_set([f])))
        assert f in ex.accepted


@pytest.mark.parametrize("L,rough", [(2, False), (3, False), (2, True), (3, True)])
def test_full_sweep_freezes_something(L, rough):
    c = slab(L, rough)
    ex = explore_boundary(augment(c), c.edge_set())
    assert len(ex.accepted) < c.n_faces
    assert ex.frozen == c.n_faces - len(ex.accepted)
    assert ex.explored == c.n_faces


def test_acceptance_order_lists_the_erasure():
    c = slab(3)
    r = random.Random(3)
    e = random_error(c, 4, r)
    ex = explore_boundary(augment(c), syndrome(c, e))
    assert ex.waves >= 1
    assert set(ex.order) == set(ex.accepted)


def test_peel_examples():
    c = slab(2)
    out = peel(c, c.face_set(), c.edge_set())
    assert out.success and len(out.estimate) == 0
    for f in (0, 5, 17):
        F = c.face_set([f])
        out = peel(c, F, syndrome(c, F))
        assert out.success and out.estimate == F


def test_peel_planted_error_in_random_erasure():
    c = slab(2)
    r = random.Random(11)
    checked = 0
    while checked < 200:
        erasure = c.face_set(r.sample(range(c.n_faces), r.randint(1, c.n_faces // 2)))
        if supports_stabilizer_or_logical(c, erasure):
            continue
        ids = erasure.ids()
        E = c.face_set(r.sample(ids, r.randint(0, len(ids))))
        s = syndrome(c, E)
        out = peel(c, erasure, s)
        ref = solve_syndrome(c, s, erasure)
        assert ref.unique
        if out.status is DecodeStatus.PEELING_STUCK:
            continue
        assert out.success
        assert out.estimate == E == ref.solution
        checked += 1


def test_peel_stuck_and_residual_statuses():
    c = slab(2)
    # a closed volume boundary has no leaf edge
    bd = c.volume_boundary(0)
    f = bd.ids()[0]
    out = peel(c, bd, syndrome(c, c.face_set([f])))
    assert out.status is DecodeStatus.PEELING_STUCK
    assert out.diagnostics["stuck_faces"] == len(bd)
    # syndrome lying outside the erasure drains it without clearing
    g = next(g for g in range(c.n_faces) if g != f and boundary_of_faces(c, [g]).isdisjoint(boundary_of_faces(c, [f])))
    out = peel(c, c.face_set([g]), syndrome(c, c.face_set([f])))
    assert out.status is DecodeStatus.RESIDUAL_SYNDROME


@pytest.mark.parametrize("L,rough", [(2, False), (3, False), (2, True), (3, True)])
def test_every_weight_one_error_decodes(L, rough):
    c = slab(L, rough)
    dec = BoundaryDecoder(c)
    for f in range(c.n_faces):
        E = c.face_set([f])
        out = dec.decode(syndrome(c, E))
        assert out.success
        assert is_stabilizer_support(c, E ^ out.estimate)


def test_empty_syndrome_and_stabilizer_error():
    c = slab(2)
    out = decode_with_boundaries(c, c.edge_set())
    assert out.success and len(out.estimate) == 0
    E = c.volume_boundary(3)
    out = decode_with_boundaries(c, syndrome(c, E))
    assert out.success
    assert is_stabilizer_support(c, E ^ out.estimate)


def _freeze_cases(c, r):
    n = c.n_faces
    yield c.face_set()
    for f in range(n):
        yield c.face_set([f])
    for pair in itertools.combinations(range(n), 2):
        yield c.face_set(pair)
    for _ in range(100):
        yield random_error(c, r.randint(1, n // 3), r)


@pytest.mark.parametrize("L,rough", [(2, False), (2, True)])
def test_freeze_soundness(L, rough):
    c = slab(L, rough)
    aug = augment(c)
    r = random.Random(5)
    seen = {}
    for E in _freeze_cases(c, r):
        s = syndrome(c, E)
        if s.bits in seen:
            continue
        ex = explore_boundary(aug, s)
        seen[s.bits] = ex
        assert not supports_stabilizer_or_logical(c, ex.accepted)
        assert not is_cut_set(aug.graph, ex.accepted)


@pytest.mark.parametrize("L,rough", [(2, False), (3, True)])
def test_maximality(L, rough):
    c = slab(L, rough)
    aug = augment(c)
    r = random.Random(9)
    ex = explore_boundary(aug, syndrome(c, random_error(c, 3, r)))
    outside = [f for f in range(c.n_faces) if f not in ex.accepted]
    for f in r.sample(outside, min(50, len(outside))):
        assert is_cut_set(aug.graph, ex.accepted | c.face_set([f]))
        assert supports_stabilizer_or_logical(c, ex.accepted | c.face_set([f]))


@pytest.mark.parametrize("L,rough", [(2, False), (3, False), (3, True)])
def test_erasure_solution_is_unique_and_peeled(L, rough):
    c = slab(L, rough)
    dec = BoundaryDecoder(c, gf2_fallback=False)
    r = random.Random(13)
    for _ in range(60):
        E = random_error(c, r.randint(0, 4), r)
        s = syndrome(c, E)
        ex = dec.explore(s)
        ref = solve_syndrome(c, s, ex.accepted)
        assert ref.unique
        out = peel(c, ex.accepted, s)
        assert out.success
        assert out.estimate == ref.solution


def test_fallback_resolves_a_stall():
    c = slab(2)
    f = c.volume_boundary(0).ids()[0]

    class Stalling(BoundaryDecoder):
        def explore(self, s):
            bd = c.volume_boundary(0) ^ c.face_set([f])
            return Exploration(bd | c.face_set([f]), [], 0, 0, 0, 0)

    s = syndrome(c, c.face_set([f]))
    stuck = Stalling(c, gf2_fallback=False).decode(s)
    assert stuck.status is DecodeStatus.PEELING_STUCK
    out = Stalling(c, gf2_fallback=True).decode(s)
    assert out.success and out.diagnostics["fallback"]
    assert boundary_of_faces(c, out.estimate) == s


def test_pinched_lattice_decodes():
    c = cube_complex([(0, 0, 0), (1, 0, 0), (1, 1, 0)])
    dec = BoundaryDecoder(c)
    for f in range(c.n_faces):
        E = c.face_set([f])
        out = dec.decode(syndrome(c, E))
        assert out.success
        assert is_stabilizer_support(c, E ^ out.estimate)
