import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cube_complex, slab, torus
from toric3d.lattice import (
    LatticeError,
    boundary_of_faces,
    boundary_of_volumes,
    build_boundary_slab,
    build_cubic_torus,
    coboundary_of_edges,
    torus_face,
    validate,
    volume_adjacency,
)
from toric3d.stabilizer import torus_plane


# builders -------------------------------------------------------------------


def test_torus_counts_L2():
    c = build_cubic_torus(2)
    assert (c.n_vertices, c.n_edges, c.n_faces, c.n_volumes) == (8, 24, 24, 8)
    assert c.periodic


def test_torus_L4_has_192_faces():
    assert build_cubic_torus(4).n_faces == 192


@pytest.mark.parametrize("L", [2, 3, 4])
def test_torus_regularity(L):
    c = torus(L)
    assert all(len(fs) == 4 for fs in c.edge_faces)
    assert all(len(vs) == 2 for vs in c.face_volumes)
    assert all(len(bd) == 4 for bd in c.faces)
    assert all(len(bd) == 6 for bd in c.volumes)


def test_torus_rejects_small_sides():
    with pytest.raises(LatticeError):
        build_cubic_torus(1)


def test_single_cube_slab():
    c = build_boundary_slab(1, 1, 1)
    assert c.n_volumes == 1 and c.n_faces == 6
    assert len(c.degree_one_faces()) == 6


def test_slab_2x2x2_outer_faces():
    c = slab(2)
    assert c.n_volumes == 8
    # brute-force count of unit squares on the surface of a 2x2x2 block: 6 sides x 4
    outer = sum(1 for vols in c.face_volumes if len(vols) == 1)
    assert outer == 6 * 4


def test_slab_sizes_checked():
    with pytest.raises(LatticeError):
        build_boundary_slab(0, 1, 1)
    with pytest.raises(LatticeError):
        build_boundary_slab(1, 2, 2, rough_axes=(0,))


def test_rough_slab_has_partial_edges():
    c = slab(2, rough=True)
    partial = [e for e in range(c.n_edges) if c.is_partial(e)]
    assert partial
    # an open face boundary ends in exactly two partial edges
    for bd in c.faces:
        k = sum(1 for e in bd if c.is_partial(e))
        assert k in (0, 2)


@pytest.mark.parametrize(
    "c",
    [torus(2), torus(3), torus(4), slab(1), slab(2), slab(3), slab(2, True), slab(3, True),
     build_boundary_slab(3, 2, 1), build_boundary_slab(2, 3, 4, rough_axes=(2,))],
    ids=["t2", "t3", "t4", "s1", "s2", "s3", "r2", "r3", "s321", "r234"],
)
def test_built_in_lattices_validate(c):
    assert validate(c) == []
    assert volume_adjacency(c).count == 1
    assert c.l1_verified


@pytest.mark.parametrize("c", [slab(2), slab(3, True), build_boundary_slab(2, 3, 4, rough_axes=(2,))])
def test_slab_edge_paths_end_on_degree_one_faces(c):
    for e, around in enumerate(c.edge_faces):
        degrees = sorted(len(c.face_volumes[f]) for f in around)
        ends = degrees.count(1)
        assert ends in (0, 2), e


def test_pinched_edge_gives_one_L2_violation():
    # two cubes meeting only along an edge: the faces around it form two separate paths
    c = cube_complex([(0, 0, 0), (1, 1, 0)])
    problems = validate(c)
    assert len(problems) == 1
    (v,) = problems
    assert v.kind == "L2-edge"
    shared = v.cells[0]
    assert len(c.edge_faces[shared]) == 4


def test_face_on_three_volumes_reported():
    c = cube_complex([(0, 0, 0), (1, 0, 0)])
    from toric3d.lattice import ChainComplex3

    shared = next(f for f, vs in enumerate(c.face_volumes) if len(vs) == 2)
    bad = ChainComplex3(c.vertex_count, c.edges, c.faces, list(c.volumes) + [[shared]])
    kinds = {(v.kind, v.cells[0]) for v in validate(bad)}
    assert ("face-degree", shared) in kinds


def test_glued_cubes_validate():
    assert validate(cube_complex([(0, 0, 0), (1, 0, 0), (1, 1, 0)])) == []


# boundary operators ----------------------------------------------------------


def test_boundary_of_empty_and_single():
    c = torus(3)
    assert not boundary_of_faces(c, c.face_set())
    assert boundary_of_faces(c, c.face_set([7])).ids() == sorted(c.faces[7])


def test_boundary_of_two_adjacent_faces():
    c = torus(3)
    f = torus_face(3, 0, 0, 0, 2)  # square in the xy plane at the origin
    g = torus_face(3, 1, 0, 0, 2)  # its neighbour along x
    shared = set(c.faces[f]) & set(c.faces[g])
    assert len(shared) == 1
    expected = (set(c.faces[f]) | set(c.faces[g])) - shared
    assert set(boundary_of_faces(c, [f, g])) == expected
    assert len(expected) == 6


def test_boundary_rejects_out_of_range():
    with pytest.raises(LatticeError):
        boundary_of_faces(torus(2), [24])


def test_coboundary_examples():
    c = torus(3)
    assert not coboundary_of_edges(c, c.edge_set())
    assert len(coboundary_of_edges(c, [0])) == 4
    e1, e2 = c.faces[10][:2]
    expected = set(c.edge_faces[e1]) ^ set(c.edge_faces[e2])
    assert set(coboundary_of_edges(c, [e1, e2])) == expected
    assert len(expected) == 6


@pytest.mark.parametrize("c", [torus(3), slab(2), slab(3, True)], ids=["t3", "s2", "r3"])
def test_boundary_of_boundary_vanishes(c):
    for vol in range(c.n_volumes):
        assert not boundary_of_faces(c, c.volume_boundary(vol))
    rnd = random.Random(3)
    vols = rnd.sample(range(c.n_volumes), max(1, c.n_volumes // 3))
    assert not boundary_of_faces(c, boundary_of_volumes(c, vols))


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 80)), st.sets(st.integers(0, 80)))
def test_boundary_is_linear(a, b):
    c = torus(3)
    A, B = c.face_set(a), c.face_set(b)
    assert boundary_of_faces(c, A ^ B) == boundary_of_faces(c, A) ^ boundary_of_faces(c, B)


def test_volume_adjacency_examples():
    c = torus(4)
    assert volume_adjacency(c).count == 1
    comps = volume_adjacency(c, c.volume_boundary(5))
    assert comps.count == 2
    assert comps.component_of(5) == [5]
    # a single plane wraps around the torus without separating anything
    assert volume_adjacency(c, torus_plane(4, 0, 0)).count == 1
    # two parallel planes cut the torus into two slabs
    assert volume_adjacency(c, torus_plane(4, 0, 0) | torus_plane(4, 0, 2)).count == 2
