"""Topological and metric invariants of a complex.

Distances are plain ints with ``math.inf`` as the distinguished unreachable
value, so infinities propagate through max/min arithmetic.  Homology is
computed over GF(2): unsigned boundary matrices need no orientation data and
the chain condition (boundary of boundary vanishes) stays checkable.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .complex import (
    CombinatorialComplex,
    NeighborhoodSpec,
    SimpleGraph,
    SparseBinaryMatrix,
    augmented_hasse_graph,
    hasse_graph,
    incidence_down,
    incidence_up,
)
from .errors import (
    CellWithoutFaces,
    DimensionTooLow,
    EmptySkeleton,
    NotAChainComplex,
    WrongKind,
)

INFINITE = math.inf
Distance = int | float


def graph_components(g: SimpleGraph) -> list[int]:
    """Component label per node, labels numbered by first appearance."""
    labels = [-1] * g.num_nodes
    adj = g.adjacency_lists()
    comp = 0
    for start in range(g.num_nodes):
        if labels[start] != -1:
            continue
        labels[start] = comp
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if labels[v] == -1:
                    labels[v] = comp
                    queue.append(v)
        comp += 1
    return labels


def connected_components(cc: CombinatorialComplex) -> tuple[int, list[list[int]]]:
    """Component count of the Hasse graph plus a label per cell, per rank."""
    g, _ranks = hasse_graph(cc)
    labels = graph_components(g)
    count = max(labels) + 1 if labels else 0
    per_rank: list[list[int]] = []
    pos = 0
    for r in range(cc.dimension + 1):
        n = len(cc.skeletons[r])
        per_rank.append(labels[pos : pos + n])
        pos += n
    return count, per_rank


def graph_bfs(adj: list[list[int]], source: int) -> list[Distance]:
    dist: list[Distance] = [INFINITE] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adj[u]:
            if dist[v] == INFINITE:
                dist[v] = du + 1
                queue.append(v)
    return dist


def shortest_paths(cc: CombinatorialComplex, spec: NeighborhoodSpec) -> list[list[Distance]]:
    """All-pairs BFS metric on the augmented Hasse graph of a (co)adjacency."""
    if not spec.is_adjacency_like:
        raise WrongKind(f"shortest paths need a (co)adjacency spec, got {spec}")
    g = augmented_hasse_graph(cc, spec)
    adj = g.adjacency_lists()
    return [graph_bfs(adj, s) for s in range(g.num_nodes)]


def diameter(cc: CombinatorialComplex, spec: NeighborhoodSpec) -> Distance:
    """Largest pairwise distance in skeleton r1; infinite if disconnected."""
    if not spec.is_adjacency_like:
        raise WrongKind(f"diameter needs a (co)adjacency spec, got {spec}")
    if not cc.cells(spec.r1):
        raise EmptySkeleton(f"skeleton {spec.r1} is empty")
    dist = shortest_paths(cc, spec)
    return max(max(row) for row in dist)


def cross_diameter(cc: CombinatorialComplex, spec: NeighborhoodSpec, k: int) -> Distance:
    """Worst distance from an r1-cell to the nearest r1-face of a k-cell."""
    if not spec.is_adjacency_like:
        raise WrongKind(f"cross diameter needs a (co)adjacency spec, got {spec}")
    if not cc.cells(spec.r1):
        raise EmptySkeleton(f"skeleton {spec.r1} is empty")
    if not cc.cells(k):
        raise EmptySkeleton(f"skeleton {k} is empty")
    faces = cc.contained_lists(k, spec.r1)
    for y, fs in enumerate(faces):
        if not fs:
            raise CellWithoutFaces(
                f"rank-{k} cell {cc.skeletons[k][y]} has no rank-{spec.r1} faces"
            )
    dist = shortest_paths(cc, spec)
    best: Distance = 0
    for row in dist:
        for fs in faces:
            d = min(row[x] for x in fs)
            if d > best:
                best = d
    return best


def euler_characteristic(cc: CombinatorialComplex) -> int:
    return sum((-1) ** r * n for r, n in enumerate(cc.skeleton_sizes()))


@dataclass(frozen=True)
class BoundaryData:
    """Boundary matrices d_1..d_l (rows = rank r, cols = rank r-1) over GF(2)."""

    matrices: tuple[SparseBinaryMatrix, ...]
    is_chain_complex: bool
    violation: tuple[int, int, int] | None  # (r, row in X_{r+1}, col in X_{r-1})


def boundary_matrices(cc: CombinatorialComplex) -> BoundaryData:
    """Unsigned boundary operators; reports whether they compose to zero."""
    mats = []
    for r in range(1, cc.dimension + 1):
        down = cc.neighbor_lists(incidence_down(r, r - 1))
        entries = frozenset((i, j) for i, subs in enumerate(down) for j in subs)
        mats.append(SparseBinaryMatrix(len(cc.cells(r)), len(cc.cells(r - 1)), entries))
    violation = None
    for r in range(1, cc.dimension):
        hi, lo = mats[r].to_dense(), mats[r - 1].to_dense()
        comp = (hi.astype(np.int64) @ lo.astype(np.int64)) % 2
        nz = np.argwhere(comp)
        if len(nz):
            violation = (r, int(nz[0][0]), int(nz[0][1]))
            break
    return BoundaryData(tuple(mats), violation is None, violation)


def gf2_rank(m: np.ndarray) -> int:
    """Gaussian elimination over GF(2) on a uint8 copy."""
    a = (m % 2).astype(np.uint8).copy()
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        pivot = -1
        for row in range(rank, rows):
            if a[row, col]:
                pivot = row
                break
        if pivot == -1:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        mask = a[:, col].copy()
        mask[rank] = 0
        a[mask == 1] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class BettiVector:
    b: tuple[int, ...]

    def __iter__(self):
        return iter(self.b)


def betti_gf2(cc: CombinatorialComplex) -> BettiVector:
    """Mod-2 Betti numbers b_r = dim ker d_r - rank d_{r+1}."""
    data = boundary_matrices(cc)
    if not data.is_chain_complex:
        raise NotAChainComplex(
            f"boundary composition nonzero at {data.violation}"
        )
    sizes = cc.skeleton_sizes()
    ranks = [0] * (cc.dimension + 2)  # ranks[r] = rank of d_r; d_0 and d_{l+1} are zero
    for r in range(1, cc.dimension + 1):
        ranks[r] = gf2_rank(data.matrices[r - 1].to_dense())
    b = tuple(
        (sizes[r] - ranks[r]) - ranks[r + 1] for r in range(cc.dimension + 1)
    )
    return BettiVector(b)


class Orientability(Enum):
    ORIENTABLE = "orientable"
    NON_ORIENTABLE = "non-orientable"
    NOT_A_SURFACE = "not-a-surface"


@dataclass(frozen=True)
class OrientabilityVerdict:
    verdict: Orientability
    # NON_ORIENTABLE: sequence of 2-cell indices forming the odd flip cycle;
    # NOT_A_SURFACE: (rank, index) of the offending cell.
    witness: tuple | None = None


def _face_boundary_cycle(cc: CombinatorialComplex, face: int) -> list[int] | None:
    """Vertices of a 2-cell's boundary in cyclic order, or None if not a polygon."""
    verts = cc.skeletons[2][face]
    edge_idx = cc.neighbor_lists(incidence_down(2, 1))[face]
    edges = [cc.skeletons[1][e] for e in edge_idx]
    if len(edges) != len(verts):
        return None
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in edges:
        if u not in adj or v not in adj:
            return None
        adj[u].append(v)
        adj[v].append(u)
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        return None
    start = verts[0]
    cycle = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
        if len(cycle) > len(verts):
            return None
    if len(cycle) != len(verts):
        return None
    return cycle


def orientability_2d(cc: CombinatorialComplex) -> OrientabilityVerdict:
    """Decide if boundary-cycle directions of 2-cells can be made consistent.

    Requires every 1-cell to lie in at most two 2-cells and every 2-cell's
    1-faces to form one cycle through its 0-faces; two faces sharing an edge
    must traverse it in opposite directions.  Propagates orientations across
    face adjacency and reports the first contradiction cycle.
    """
    if cc.dimension < 2:
        raise DimensionTooLow(f"dimension {cc.dimension} < 2")
    up = cc.neighbor_lists(incidence_up(1, 2))
    for e, faces in enumerate(up):
        if len(faces) > 2:
            return OrientabilityVerdict(Orientability.NOT_A_SURFACE, (1, e))
    n_faces = len(cc.cells(2))
    cycles: list[list[int]] = []
    for f in range(n_faces):
        cyc = _face_boundary_cycle(cc, f)
        if cyc is None:
            return OrientabilityVerdict(Orientability.NOT_A_SURFACE, (2, f))
        cycles.append(cyc)

    # direction of each boundary edge under the face's reference cycle
    def edge_dir(f: int, u: int, v: int) -> bool:
        """True when the reference cycle of f traverses u -> v."""
        cyc = cycles[f]
        i = cyc.index(u)
        return cyc[(i + 1) % len(cyc)] == v

    # flip[f] in {0,1}; constraint per shared edge: faces must disagree in direction
    flip = [-1] * n_faces
    parent: list[tuple[int, int] | None] = [None] * n_faces
    for root in range(n_faces):
        if flip[root] != -1:
            continue
        flip[root] = 0
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for e in cc.neighbor_lists(incidence_down(2, 1))[f]:
                faces = up[e]
                if len(faces) != 2:
                    continue
                g = faces[0] if faces[1] == f else faces[1]
                if g == f:
                    continue
                u, v = cc.skeletons[1][e]
                same_dir = edge_dir(f, u, v) == edge_dir(g, u, v)
                needed = flip[f] ^ (1 if same_dir else 0)
                if flip[g] == -1:
                    flip[g] = needed
                    parent[g] = (f, e)
                    queue.append(g)
                elif flip[g] != needed:
                    witness = _flip_cycle(parent, f, g)
                    return OrientabilityVerdict(
                        Orientability.NON_ORIENTABLE, tuple(witness)
                    )
    return OrientabilityVerdict(Orientability.ORIENTABLE)


def _flip_cycle(parent: list, f: int, g: int) -> list[int]:
    """Face path from f and g back to their common ancestor, as one cycle."""
    anc_f = [f]
    while parent[anc_f[-1]] is not None:
        anc_f.append(parent[anc_f[-1]][0])
    anc_g = [g]
    seen = set(anc_f)
    while anc_g[-1] not in seen and parent[anc_g[-1]] is not None:
        anc_g.append(parent[anc_g[-1]][0])
    join = anc_g[-1]
    path_f = anc_f[: anc_f.index(join) + 1]
    return path_f + anc_g[-2::-1]


def boundary_edge_graph(cc: CombinatorialComplex) -> SimpleGraph:
    """Graph of the 1-cells lying in exactly one 2-cell, on the original nodes."""
    if cc.dimension < 2:
        raise DimensionTooLow(f"dimension {cc.dimension} < 2")
    up = cc.neighbor_lists(incidence_up(1, 2))
    edges = [
        cc.skeletons[1][e] for e, faces in enumerate(up) if len(faces) == 1
    ]
    return SimpleGraph.from_edges(cc.num_nodes, edges)


def cycle_lengths(g: SimpleGraph) -> list[int] | None:
    """Component sizes when the graph is a disjoint union of cycles, else None."""
    adj = g.adjacency_lists()
    active = [v for v in range(g.num_nodes) if adj[v]]
    if any(len(adj[v]) != 2 for v in active):
        return None
    labels = graph_components(g)
    sizes: dict[int, int] = {}
    for v in active:
        sizes[labels[v]] = sizes.get(labels[v], 0) + 1
    return sorted(sizes.values())
