"""Cut-set tests on volume graphs.

A face set is a cut set when removing it disconnects the volumes.  On an
augmented lattice this happens exactly when the set supports an X
stabilizer or logical operator, which is how the decoders decide to
freeze a face.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np
from numba import njit

from .cellsets import FaceSet
from .lattice import VolumeGraph


def _graph(target) -> VolumeGraph:
    return target if isinstance(target, VolumeGraph) else target.volume_graph()


def is_cut_set(target, K: FaceSet | Iterable[int]) -> bool:
    """Breadth-first reachability from volume 0 with the faces of ``K`` removed."""
    graph = _graph(target)
    n = graph.node_count
    if n <= 1:
        return False
    banned = bytearray(graph.face_count)
    for f in K:
        banned[f] = 1
    seen = bytearray(n)
    seen[0] = 1
    reached = 1
    queue = deque([0])
    adjacency = graph.adjacency
    while queue:
        u = queue.popleft()
        for f, w in adjacency[u]:
            if not banned[f] and not seen[w]:
                seen[w] = 1
                reached += 1
                queue.append(w)
    return reached < n


@njit(cache=True)
def _split_search(indptr, arc_face, nbr, excluded, mark, stamp, u, v, f, qa, qb):
    """True when u and v are disconnected once arc ``f`` and excluded faces are gone.

    Two breadth-first searches grow from u and v, always advancing the one
    with the shorter pending queue; they stop when they touch or one side
    runs dry.
    """
    side_a = stamp
    side_b = stamp + 1
    mark[u] = side_a
    mark[v] = side_b
    qa[0] = u
    qb[0] = v
    na = 1
    nb = 1
    ia = 0
    ib = 0
    while True:
        if na - ia <= nb - ib:
            if ia == na:
                return True
            x = qa[ia]
            ia += 1
            for k in range(indptr[x], indptr[x + 1]):
                g = arc_face[k]
                if g == f or excluded[g]:
                    continue
                y = nbr[k]
                m = mark[y]
                if m == side_b:
                    return False
                if m != side_a:
                    mark[y] = side_a
                    qa[na] = y
                    na += 1
        else:
            if ib == nb:
                return True
            x = qb[ib]
            ib += 1
            for k in range(indptr[x], indptr[x + 1]):
                g = arc_face[k]
                if g == f or excluded[g]:
                    continue
                y = nbr[k]
                m = mark[y]
                if m == side_a:
                    return False
                if m != side_b:
                    mark[y] = side_b
                    qb[nb] = y
                    nb += 1


class CutSession:
    """Grows an excluded face set one face at a time, refusing faces that cut.

    ``try_add(f)`` answers ``is_cut_set(target, excluded | {f})`` and adds
    ``f`` only when the answer is False.  Since the excluded set never
    disconnects the graph, removing arc (u, v) disconnects it iff u and v
    lose their last connection; a bidirectional search from both ends
    settles that while touching at most about twice the smaller side.
    """

    def __init__(self, target, base: FaceSet | Iterable[int] = ()):
        graph = _graph(target)
        self._arcs = graph.arcs
        self._indptr, self._arc_face, self._nbr = graph.csr
        self._excluded = np.zeros(graph.face_count, dtype=np.uint8)
        for f in base:
            self._excluded[f] = 1
        self._broken = is_cut_set(graph, base)
        n = graph.node_count
        self._mark = np.zeros(n, dtype=np.int64)
        self._qa = np.empty(max(n, 1), dtype=np.int64)
        self._qb = np.empty(max(n, 1), dtype=np.int64)
        self._stamp = 0
        self.searches = 0

    @property
    def excluded(self) -> np.ndarray:
        return self._excluded

    def excluded_set(self) -> FaceSet:
        return FaceSet.from_ids(len(self._excluded), np.flatnonzero(self._excluded).tolist())

    def would_cut(self, f: int) -> bool:
        if self._broken:
            return True
        if self._excluded[f]:
            return False
        arc = self._arcs[f]
        if arc is None:
            return False
        u, v = arc
        if u == v:
            return False
        self.searches += 1
        self._stamp += 2
        return bool(
            _split_search(
                self._indptr, self._arc_face, self._nbr, self._excluded,
                self._mark, self._stamp, u, v, f, self._qa, self._qb,
            )
        )

    def try_add(self, f: int) -> bool:
        """Return True (and leave the state alone) if adding ``f`` would cut."""
        if self.would_cut(f):
            return True
        self._excluded[f] = 1
        return False


def is_cut_set_incremental(session: CutSession, add_face: int) -> bool:
    return session.try_add(add_face)
