"""Independent oracles for expected-value computation.

Everything here recomputes quantities straight from definitions (exhaustive
set arithmetic, list-based row reduction) without touching the library's own
neighborhood / rank / cycle machinery, so tests cross two separate routes.
"""

from __future__ import annotations

from itertools import combinations, permutations

from cckit.complex import CombinatorialComplex, NeighborhoodKind, NeighborhoodSpec, SimpleGraph, build_cc


def brute_neighborhood(
    cc: CombinatorialComplex, spec: NeighborhoodSpec, verts: tuple[int, ...], rank: int
) -> set[tuple[tuple[int, ...], int]]:
    """Neighborhood computed directly from the set-comprehension definitions."""
    x = frozenset(verts)
    if rank != spec.r1:
        return set()
    cells = [
        (frozenset(v), v, r)
        for r in range(cc.dimension + 1)
        for v in cc.skeletons[r]
    ]
    r1_cells = [(s, v) for s, v, r in cells if r == spec.r1]
    r2_cells = [(s, v) for s, v, r in cells if r == spec.r2]
    out = set()
    if spec.kind is NeighborhoodKind.ADJACENCY:
        for s, v in r1_cells:
            if v == verts:
                continue
            if any(x <= z and s <= z for z, _ in r2_cells):
                out.add((v, spec.r1))
    elif spec.kind is NeighborhoodKind.CO_ADJACENCY:
        for s, v in r1_cells:
            if v == verts:
                continue
            if any(z <= x and z <= s for z, _ in r2_cells):
                out.add((v, spec.r1))
    elif spec.kind is NeighborhoodKind.INCIDENCE_UP:
        for s, v in r2_cells:
            if x <= s:
                out.add((v, spec.r2))
    else:
        for s, v in r2_cells:
            if s <= x:
                out.add((v, spec.r2))
    return out


def brute_induced_cycles(g: SimpleGraph, max_len: int) -> set[tuple[int, ...]]:
    """All chordless cycle vertex sets by checking every subset up to max_len."""
    adj = {v: set() for v in range(g.num_nodes)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    out = set()
    for size in range(3, min(max_len, g.num_nodes) + 1):
        for subset in combinations(range(g.num_nodes), size):
            inside = [
                (u, v) for u, v in combinations(subset, 2) if v in adj[u]
            ]
            # induced cycle: every vertex sees exactly 2 others, connected
            if len(inside) != size:
                continue
            deg = {v: 0 for v in subset}
            for u, v in inside:
                deg[u] += 1
                deg[v] += 1
            if any(d != 2 for d in deg.values()):
                continue
            # connectivity of the induced 2-regular graph
            start = subset[0]
            seen = {start}
            stack = [start]
            nbr = {v: [] for v in subset}
            for u, v in inside:
                nbr[u].append(v)
                nbr[v].append(u)
            while stack:
                u = stack.pop()
                for w in nbr[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) == size:
                out.add(subset)
    return out


def gf2_rank_lists(rows: list[list[int]]) -> int:
    """Row reduction over GF(2) on plain python lists."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(a ^ b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def brute_betti(cc: CombinatorialComplex) -> tuple[int, ...]:
    """Betti numbers from independently built boundary matrices."""
    sizes = cc.skeleton_sizes()
    ranks = [0] * (cc.dimension + 2)
    for r in range(1, cc.dimension + 1):
        lower = {v: i for i, v in enumerate(cc.skeletons[r - 1])}
        rows = []
        for verts in cc.skeletons[r]:
            vset = set(verts)
            row = [0] * sizes[r - 1]
            for sub, j in lower.items():
                if set(sub) <= vset:
                    row[j] = 1
            rows.append(row)
        ranks[r] = gf2_rank_lists(rows) if rows else 0
    return tuple((sizes[r] - ranks[r]) - ranks[r + 1] for r in range(cc.dimension + 1))


def brute_graph_distances(g: SimpleGraph, source: int) -> list[float]:
    """Plain BFS used as the metric oracle."""
    adj = {v: [] for v in range(g.num_nodes)}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = [float("inf")] * g.num_nodes
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if dist[w] == float("inf"):
                    dist[w] = d + 1
                    nxt.append(w)
        frontier = nxt
        d += 1
    return dist


def graph_automorphisms(g: SimpleGraph) -> list[tuple[int, ...]]:
    """All node permutations preserving the edge set (tiny graphs only)."""
    edges = g.edges
    out = []
    for perm in permutations(range(g.num_nodes)):
        mapped = frozenset(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges
        )
        if mapped == edges:
            out.append(perm)
    return out


def relabel_complex(cc: CombinatorialComplex, perm: list[int]) -> CombinatorialComplex:
    """Apply a node permutation; build_cc re-canonicalizes the skeletons."""
    cells = [
        (tuple(sorted(perm[v] for v in verts)), r)
        for r in range(1, cc.dimension + 1)
        for verts in cc.skeletons[r]
    ]
    return build_cc(cells, cc.num_nodes)


def example_two_dim_complex() -> CombinatorialComplex:
    """Eight nodes: a square face, two stacked triangles, one apex triangle.

    Nodes A..H as 0..7: A=0 B=1 C=2 D=3 E=4 F=5 G=6 H=7.
    """
    edges = [
        (0, 1), (0, 2), (2, 3), (1, 3), (2, 4), (3, 4),
        (4, 5), (4, 7), (5, 7), (5, 6), (6, 7),
    ]
    faces = [(0, 1, 2, 3), (2, 3, 4), (4, 5, 7), (5, 6, 7)]
    cells = [(tuple(sorted(e)), 1) for e in edges]
    cells += [(tuple(sorted(f)), 2) for f in faces]
    return build_cc(cells, 8)


def random_graph(rng, num_nodes: int, edge_prob: float) -> SimpleGraph:
    edges = [
        (u, v)
        for u in range(num_nodes)
        for v in range(u + 1, num_nodes)
        if rng.random() < edge_prob
    ]
    return SimpleGraph.from_edges(num_nodes, edges)


def brute_is_covering(m) -> bool:
    """Covering check straight from the definition, via brute_neighborhood.

    Surjectivity onto every target skeleton, then bijectivity of the image of
    every cell's neighborhood for every natural function.
    """
    src, tgt = m.source, m.target
    if src.dimension != tgt.dimension:
        return False
    for r in range(tgt.dimension + 1):
        if set(m.assignment[r]) != set(range(len(tgt.skeletons[r]))):
            return False
    specs = []
    for kind in NeighborhoodKind:
        for r1 in range(src.dimension + 1):
            for r2 in range(src.dimension + 1):
                specs.append(NeighborhoodSpec(kind, r1, r2))
    for rank in range(src.dimension + 1):
        for i, verts in enumerate(src.skeletons[rank]):
            img_verts = tgt.skeletons[rank][m.assignment[rank][i]]
            for spec in specs:
                if spec.r1 != rank:
                    continue
                nbrs = brute_neighborhood(src, spec, verts, rank)
                image_cells = {
                    (tgt.skeletons[r][m.assignment[r][src.cell_position(v, r)]], r)
                    for v, r in nbrs
                }
                expected = brute_neighborhood(tgt, spec, img_verts, rank)
                if len(image_cells) != len(nbrs) or image_cells != expected:
                    return False
    return True
