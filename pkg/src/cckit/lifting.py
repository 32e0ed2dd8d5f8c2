"""Graph-to-complex constructions: triangle lift, chordless-cycle lift, Mapper pooling.

All three keep the graph itself as ranks 0-1 and add rank-2 cells on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .complex import CombinatorialComplex, SimpleGraph, Verts, build_cc
from .errors import BadParams, DegenerateCover
from .invariants import graph_bfs, graph_components

Rational = Fraction | int


@dataclass(frozen=True)
class CyclicLiftParams:
    """Upper bound on the length of cycles added as 2-cells; at least 3."""

    max_len: int = 18

    def __post_init__(self) -> None:
        if self.max_len < 3:
            raise BadParams(f"max cycle length {self.max_len} < 3")


@dataclass(frozen=True)
class MogParams:
    """Interval cover (eta*i, eta*i + eps), i over all integers, plus the lens."""

    eta: Fraction
    eps: Fraction
    lens: str = "avg_spd"

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.eps <= 0 or self.eta <= 0:
            raise DegenerateCover(f"cover needs eta, eps > 0, got ({self.eta}, {self.eps})")
        if self.lens != "avg_spd":
            raise BadParams(f"unknown lens {self.lens!r}")


def triangular_lift(g: SimpleGraph) -> CombinatorialComplex:
    """Add every triangle of the graph as a 2-cell."""
    adj = [set() for _ in range(g.num_nodes)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    cells: list[tuple[Verts, int]] = [(e, 1) for e in g.sorted_edges()]
    for u, v in g.sorted_edges():
        for w in sorted(adj[u] & adj[v]):
            if w > v:
                cells.append(((u, v, w), 2))
    return build_cc(cells, g.num_nodes)


def chordless_cycles(g: SimpleGraph, max_len: int) -> list[Verts]:
    """All induced simple cycles with 3..max_len vertices, as sorted vertex tuples.

    DFS from each minimal vertex; a path is extended only through vertices
    larger than the start and non-adjacent to the path interior, so every
    recorded cycle is chordless.  Direction duplicates are removed by
    requiring the second vertex to be smaller than the last.
    """
    adj = [set() for _ in range(g.num_nodes)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    out: list[Verts] = []

    def extend(path: list[int]) -> None:
        s, last = path[0], path[-1]
        interior = path[1:-1]
        for w in sorted(adj[last]):
            if w <= s or w in path:
                continue
            if any(w in adj[p] for p in interior):
                continue
            closes = w in adj[s]
            if closes:
                if len(path) >= 2 and path[1] < w:
                    out.append(tuple(sorted(path + [w])))
                continue  # extending past w would keep the chord w-s
            if len(path) + 1 < max_len:
                extend(path + [w])

    for s in range(g.num_nodes):
        for v in sorted(adj[s]):
            if v > s:
                extend([s, v])
    return sorted(set(out))


def cyclic_lift(g: SimpleGraph, params: CyclicLiftParams | int = CyclicLiftParams()) -> CombinatorialComplex:
    """Add every chordless cycle of bounded length as a 2-cell."""
    if isinstance(params, int):
        params = CyclicLiftParams(params)
    cells: list[tuple[Verts, int]] = [(e, 1) for e in g.sorted_edges()]
    cells.extend((cyc, 2) for cyc in chordless_cycles(g, params.max_len))
    return build_cc(cells, g.num_nodes)


def avg_spd_lens(g: SimpleGraph) -> list[Fraction]:
    """Average shortest-path distance per node, exact; disconnected graphs
    average over the node's own component."""
    adj = g.adjacency_lists()
    comp = graph_components(g)
    comp_sizes: dict[int, int] = {}
    for c in comp:
        comp_sizes[c] = comp_sizes.get(c, 0) + 1
    values = []
    for v in range(g.num_nodes):
        dist = graph_bfs(adj, v)
        total = sum(int(d) for d in dist if d != float("inf"))
        values.append(Fraction(total, comp_sizes[comp[v]]))
    return values


def fine_cover_params(g: SimpleGraph) -> MogParams:
    """Cover parameters fine enough to separate every distinct lens value.

    Picks eta = gap/2 and eps = 3*gap/4 for the minimal gap between distinct
    lens values: eta < eps guarantees the intervals cover every value, and
    eps < gap keeps distinct values in distinct intervals.
    """
    values = sorted(set(avg_spd_lens(g)))
    if len(values) >= 2:
        gap = min(b - a for a, b in zip(values, values[1:]))
    else:
        gap = Fraction(1)
    return MogParams(eta=gap / 2, eps=gap * 3 / 4)


def mog_pool(g: SimpleGraph, params: MogParams | None = None) -> CombinatorialComplex:
    """Mapper pooling: one 2-cell per connected component of each lens preimage.

    Preimages are taken over every interval (eta*i, eta*i+eps) with i ranging
    over all integers; duplicate 2-cells from overlapping intervals are
    deduplicated, and single-node components are dropped (a one-vertex rank-2
    cell cannot satisfy rank monotonicity next to the node's edges).
    """
    if g.num_nodes == 0:
        raise BadParams("pooling needs a non-empty graph")
    if params is None:
        params = fine_cover_params(g)
    lens = avg_spd_lens(g)
    eta, eps = params.eta, params.eps

    # integer interval indices that can contain at least one lens value
    index_set: set[int] = set()
    for v in set(lens):
        lo = (v - eps) / eta  # i > lo
        hi = v / eta          # i < hi
        i_min = floor(lo) + 1
        i_max = ceil(hi) - 1
        for i in range(i_min, i_max + 1):
            if eta * i < v < eta * i + eps:
                index_set.add(i)

    adj = g.adjacency_lists()
    pooled: set[Verts] = set()
    for i in sorted(index_set):
        lo_v, hi_v = eta * i, eta * i + eps
        members = [v for v in range(g.num_nodes) if lo_v < lens[v] < hi_v]
        if not members:
            continue
        member_set = set(members)
        seen: set[int] = set()
        for start in members:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w in member_set and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            if len(comp) > 1:
                pooled.add(tuple(sorted(comp)))

    cells: list[tuple[Verts, int]] = [(e, 1) for e in g.sorted_edges()]
    cells.extend((verts, 2) for verts in sorted(pooled))
    return build_cc(cells, g.num_nodes)
