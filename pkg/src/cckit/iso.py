"""Exact isomorphism of combinatorial complexes.

Isomorphism means a rank-preserving bijection on cells that preserves
vertex-set containment in both directions.  The decision procedure first
splits both complexes into node-connectivity components (cells sharing a
vertex; invariant under any containment-preserving bijection) and matches
components, then decides each component pair by individualization-refinement:
cells are partitioned by stable joint refinement colors over all natural
neighborhoods, pairs of same-colored cells are tentatively identified and the
partition re-refined, backtracking on histogram mismatches.  Positive answers
carry a witness map that is re-verified against the definition before being
returned.
"""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass

from .complex import CombinatorialComplex, Verts, build_cc, natural_specs
from .covering import CellMap
from .errors import MapNotWellDefined

DEFAULT_BUDGET = 200_000
BUDGET_ENV_VAR = "CCKIT_ORACLE_BUDGET"


@dataclass(frozen=True)
class IsoResult:
    """isomorphic is None when the search budget ran out (unknown)."""

    isomorphic: bool | None
    witness: CellMap | None = None
    nodes_explored: int = 0


def check_isomorphism(m: CellMap) -> str | None:
    """Verify a cell map is an isomorphism; returns the first violation or None.

    Checks bijectivity per rank, rank preservation (structural in CellMap),
    and containment preservation in both directions across all rank pairs.
    """
    src, tgt = m.source, m.target
    if src.dimension != tgt.dimension:
        return f"dimension {src.dimension} != {tgt.dimension}"
    for r in range(src.dimension + 1):
        n_s, n_t = len(src.skeletons[r]), len(tgt.skeletons[r])
        if n_s != n_t:
            return f"skeleton {r} sizes differ: {n_s} != {n_t}"
        if len(set(m.assignment[r])) != n_s:
            return f"not injective on skeleton {r}"
    for r_sub in range(src.dimension + 1):
        for r_sup in range(src.dimension + 1):
            fwd_s = src.contains_lists(r_sub, r_sup)
            fwd_t = tgt.contains_lists(r_sub, r_sup)
            for i, sups in enumerate(fwd_s):
                img = sorted(m.assignment[r_sup][j] for j in sups)
                expected = list(fwd_t[m.assignment[r_sub][i]])
                if img != expected:
                    return (
                        f"containment not preserved at rank-{r_sub} cell "
                        f"{src.skeletons[r_sub][i]} into rank {r_sup}"
                    )
    return None


class _Budget(Exception):
    pass


class _Counter:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise _Budget()


class _Search:
    """Individualization-refinement over one pair of connected complexes."""

    def __init__(self, a: CombinatorialComplex, b: CombinatorialComplex, counter: _Counter):
        self.a = a
        self.b = b
        self.ell = a.dimension
        self.specs = natural_specs(self.ell)
        self.specs_by_rank: dict[int, list] = defaultdict(list)
        for s in self.specs:
            self.specs_by_rank[s.r1].append(s)
        self.nbrs = [[cc.neighbor_lists(s) for s in self.specs] for cc in (a, b)]
        self.spec_index = {s: k for k, s in enumerate(self.specs)}
        self.counter = counter

    def refine(self, colors):
        """Joint refinement to stability; bails out early when the two
        histograms diverge (a divergence can never heal, colors only split).

        Returns (colors, histograms_equal).
        """
        while True:
            palette: dict = {}

            def intern(sig):
                c = palette.get(sig)
                if c is None:
                    c = len(palette)
                    palette[sig] = c
                return c

            new_colors = []
            for ci in range(2):
                per_rank = []
                for r in range(self.ell + 1):
                    rank_specs = self.specs_by_rank[r]
                    tables = [
                        (self.nbrs[ci][self.spec_index[s]], colors[ci][s.target_rank])
                        for s in rank_specs
                    ]
                    row = []
                    for i, old in enumerate(colors[ci][r]):
                        sig = (
                            old,
                            tuple(
                                tuple(sorted(tgt[j] for j in nbr[i]))
                                for nbr, tgt in tables
                            ),
                        )
                        row.append(intern(sig))
                    per_rank.append(row)
                new_colors.append(per_rank)
            before = len({c for pr in colors for row in pr for c in row})
            after = len(palette)
            colors = new_colors
            hist = self.histograms(colors)
            if hist[0] != hist[1]:
                return colors, False
            if after == before:
                return colors, True

    @staticmethod
    def histograms(colors):
        return [
            tuple(tuple(sorted(Counter(row).items())) for row in per_rank)
            for per_rank in colors
        ]

    def run(self) -> CellMap | None:
        init = [
            [[r] * len(cc.cells(r)) for r in range(cc.dimension + 1)]
            for cc in (self.a, self.b)
        ]
        return self._search(init)

    def _search(self, colors):
        self.counter.spend()
        colors, consistent = self.refine(colors)
        if not consistent:
            return None
        classes_a: dict[tuple[int, int], list[int]] = defaultdict(list)
        classes_b: dict[tuple[int, int], list[int]] = defaultdict(list)
        for r in range(self.ell + 1):
            for i, c in enumerate(colors[0][r]):
                classes_a[(r, c)].append(i)
            for i, c in enumerate(colors[1][r]):
                classes_b[(r, c)].append(i)
        split = None
        for key in sorted(classes_a, key=lambda k: (len(classes_a[k]), k)):
            if len(classes_a[key]) > 1:
                split = key
                break
        if split is None:
            # discrete partition: the color-induced bijection is forced
            mapping = [[0] * len(self.a.skeletons[r]) for r in range(self.ell + 1)]
            for (r, c), cells_a in classes_a.items():
                mapping[r][cells_a[0]] = classes_b[(r, c)][0]
            candidate = CellMap(self.a, self.b, tuple(tuple(row) for row in mapping))
            if check_isomorphism(candidate) is None:
                return candidate
            return None
        r, c = split
        x = classes_a[split][0]
        # unique int mark; the next refine pass re-interns everything anyway
        fresh = 1_000_000_000 + self.counter.used
        for y in classes_b[split]:
            trial = [[list(row) for row in per_rank] for per_rank in colors]
            trial[0][r][x] = fresh
            trial[1][r][y] = fresh
            found = self._search(trial)
            if found is not None:
                return found
        return None


def node_components(cc: CombinatorialComplex) -> list[int]:
    """Node labels under cells-share-a-vertex connectivity."""
    parent = list(range(cc.num_nodes))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for r in range(1, cc.dimension + 1):
        for verts in cc.skeletons[r]:
            root = find(verts[0])
            for v in verts[1:]:
                rv = find(v)
                if rv != root:
                    parent[rv] = root
    labels = [find(v) for v in range(cc.num_nodes)]
    relabel: dict[int, int] = {}
    out = []
    for lbl in labels:
        if lbl not in relabel:
            relabel[lbl] = len(relabel)
        out.append(relabel[lbl])
    return out


@dataclass(frozen=True)
class _Component:
    complex: CombinatorialComplex
    nodes: tuple[int, ...]                      # parent node ids, sorted
    cell_parent: tuple[tuple[int, ...], ...]    # per rank, local -> parent index


def split_components(cc: CombinatorialComplex) -> list[_Component]:
    labels = node_components(cc)
    count = max(labels) + 1
    if count == 1:
        ident = tuple(
            tuple(range(len(cc.skeletons[r]))) for r in range(cc.dimension + 1)
        )
        return [_Component(cc, tuple(range(cc.num_nodes)), ident)]
    comps = []
    for comp_id in range(count):
        nodes = tuple(v for v in range(cc.num_nodes) if labels[v] == comp_id)
        local = {v: i for i, v in enumerate(nodes)}
        raw: list[tuple[Verts, int]] = []
        parent_idx: list[list[int]] = [[] for _ in range(cc.dimension + 1)]
        for r in range(cc.dimension + 1):
            for i, verts in enumerate(cc.skeletons[r]):
                if labels[verts[0]] == comp_id:
                    raw.append((tuple(local[v] for v in verts), r))
                    parent_idx[r].append(i)
        sub = build_cc([c for c in raw if c[1] > 0], len(nodes))
        # build_cc re-sorts, but relabeling preserves vertex order, so the
        # local skeleton order matches the parent's restriction
        comps.append(_Component(sub, nodes, tuple(tuple(p) for p in parent_idx)))
    return comps


def cc_isomorphic(
    a: CombinatorialComplex,
    b: CombinatorialComplex,
    budget: int | None = None,
) -> IsoResult:
    """Decide isomorphism with a verified witness on success.

    The search budget caps explored refinement nodes; on exhaustion the
    result is unknown (isomorphic=None) rather than hanging.  Budget defaults
    to the CCKIT_ORACLE_BUDGET environment variable.
    """
    if budget is None:
        budget = int(os.environ.get(BUDGET_ENV_VAR, DEFAULT_BUDGET))
    counter = _Counter(budget)
    if a.dimension != b.dimension or a.skeleton_sizes() != b.skeleton_sizes():
        return IsoResult(isomorphic=False)
    comps_a = split_components(a)
    comps_b = split_components(b)
    if len(comps_a) != len(comps_b):
        return IsoResult(isomorphic=False)

    try:
        if len(comps_a) == 1:
            witness = _Search(a, b, counter).run()
            matching = None if witness is None else [(0, 0, witness)]
        else:
            matching = _match_components(comps_a, comps_b, counter)
    except _Budget:
        return IsoResult(isomorphic=None, nodes_explored=counter.used)
    if matching is None:
        return IsoResult(isomorphic=False, nodes_explored=counter.used)
    witness = _assemble_witness(a, b, comps_a, comps_b, matching)
    violation = check_isomorphism(witness)
    if violation is not None:
        raise MapNotWellDefined(f"search produced an invalid witness: {violation}")
    return IsoResult(isomorphic=True, witness=witness, nodes_explored=counter.used)


def _match_components(comps_a, comps_b, counter):
    """Backtracking multiset matching; component pair results are memoized."""
    memo: dict[tuple[int, int], CellMap | None] = {}

    def pair_witness(i: int, j: int) -> CellMap | None:
        key = (i, j)
        if key not in memo:
            ca, cb = comps_a[i].complex, comps_b[j].complex
            if ca.dimension != cb.dimension or ca.skeleton_sizes() != cb.skeleton_sizes():
                memo[key] = None
            else:
                memo[key] = _Search(ca, cb, counter).run()
        return memo[key]

    used = [False] * len(comps_b)
    matching: list[tuple[int, int, CellMap]] = []

    def assign(i: int) -> bool:
        if i == len(comps_a):
            return True
        for j in range(len(comps_b)):
            if used[j]:
                continue
            w = pair_witness(i, j)
            if w is not None:
                used[j] = True
                matching.append((i, j, w))
                if assign(i + 1):
                    return True
                matching.pop()
                used[j] = False
        return False

    return matching if assign(0) else None


def _assemble_witness(a, b, comps_a, comps_b, matching) -> CellMap:
    assignment = [[0] * len(a.skeletons[r]) for r in range(a.dimension + 1)]
    for i, j, w in matching:
        ca, cb = comps_a[i], comps_b[j]
        for r in range(a.dimension + 1):
            row = w.assignment[r] if r < len(w.assignment) else ()
            for local_i, local_j in enumerate(row):
                assignment[r][ca.cell_parent[r][local_i]] = cb.cell_parent[r][local_j]
    return CellMap(a, b, tuple(tuple(row) for row in assignment))
