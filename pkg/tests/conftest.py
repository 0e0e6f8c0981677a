import random
from functools import lru_cache

import pytest

from toric3d.lattice import ChainComplex3, build_boundary_slab, build_cubic_torus


@lru_cache(maxsize=None)
def torus(L):
    return build_cubic_torus(L)


@lru_cache(maxsize=None)
def slab(L, rough=False):
    return build_boundary_slab(L, L, L, rough_axes=(0, 1) if rough else ())


def cube_complex(cubes):
    """Glue unit cubes at integer positions into a complex (shared cells merged)."""
    verts, edges, faces = {}, {}, {}
    edge_list, face_list, volumes = [], [], []

    def vid(p):
        return verts.setdefault(p, len(verts))

    def eid(p, a):
        key = (p, a)
        if key not in edges:
            q = tuple(p[i] + (i == a) for i in range(3))
            edges[key] = len(edge_list)
            edge_list.append((vid(p), vid(q)))
        return edges[key]

    def fid(p, a):
        key = (p, a)
        if key not in faces:
            b, c = (a + 1) % 3, (a + 2) % 3
            pc = tuple(p[i] + (i == c) for i in range(3))
            pb = tuple(p[i] + (i == b) for i in range(3))
            faces[key] = len(face_list)
            face_list.append((eid(p, b), eid(pc, b), eid(p, c), eid(pb, c)))
        return faces[key]

    for p in cubes:
        vol = []
        for a in range(3):
            vol.append(fid(p, a))
            vol.append(fid(tuple(p[i] + (i == a) for i in range(3)), a))
        volumes.append(vol)
    return ChainComplex3(len(verts), edge_list, face_list, volumes)


def random_error(c, weight, rng):
    return c.face_set(rng.sample(range(c.n_faces), weight))


@pytest.fixture
def rng():
    return random.Random(20261017)
