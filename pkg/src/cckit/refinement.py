"""Color-refinement distinguishability engines.

Message-passing updates with injective aggregation are abstracted to
Weisfeiler-Leman style refinement: the new color of a cell is the interned
tuple of its old color and one neighbor-color multiset per configured
neighborhood function.  Complexes are refined jointly in a shared palette, so
their color histograms are directly comparable.

Three engines are exposed: plain cell refinement over the natural
neighborhoods ("homp"), pair-space refinement over X_{r1} x X_{r2} with
incidence- or distance-based markings ("scl"), and staged diagrams mixing the
two with pooling ("smcn").  The exact-isomorphism oracle lives in
:mod:`cckit.iso`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .complex import (
    CombinatorialComplex,
    NeighborhoodKind,
    NeighborhoodSpec,
    adjacency,
    co_adjacency,
    natural_specs,
)
from .errors import MarkingUnsupported, PoolWithoutScl, RankOutOfRange
from .invariants import INFINITE, shortest_paths

Hist = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Coloring:
    """Refinement colors per rank, indexed by skeleton position."""

    by_rank: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PairColoring:
    """Colors over the pair space X_{r1} x X_{r2}."""

    r1: int
    r2: int
    colors: tuple[tuple[int, ...], ...]

    def histogram(self) -> Hist:
        return _hist(c for row in self.colors for c in row)


@dataclass(frozen=True)
class Fingerprint:
    """Per-rank color histograms plus any pair-space histograms, with sizes."""

    skeleton_sizes: tuple[int, ...]
    rank_histograms: tuple[Hist, ...]
    pair_histograms: tuple[Hist, ...] = ()


@dataclass(frozen=True)
class HompBlock:
    """Cell-refinement stage; specs None means every natural neighborhood."""

    specs: tuple[NeighborhoodSpec, ...] | None = None
    rounds: int | None = 1  # None = refine to stability


@dataclass(frozen=True)
class SclBlock:
    """Pair-refinement stage over X_{r1} x X_{r2}, seeded from cell colors."""

    r1: int
    r2: int
    marking: str = "distance"  # "binary" | "distance"
    rounds: int | None = 1


@dataclass(frozen=True)
class PoolStage:
    """Fold the most recent pair coloring back into cell colors."""


Stage = HompBlock | SclBlock | PoolStage


def default_smcn_diagram() -> tuple[Stage, ...]:
    """Benchmark diagram: full block, four distance-marked (0,1) pair rounds,
    pooling, full block."""
    return (
        HompBlock(None, 1),
        SclBlock(0, 1, "distance", 4),
        PoolStage(),
        HompBlock(None, 1),
    )


def _hist(colors) -> Hist:
    return tuple(sorted(Counter(colors).items()))


class _PairState:
    """Live pair coloring of one SclBlock across all complexes."""

    __slots__ = ("r1", "r2", "mats", "num_colors", "gathers")

    def __init__(self, r1: int, r2: int, mats: list[np.ndarray], num_colors: int, gathers):
        self.r1 = r1
        self.r2 = r2
        self.mats = mats
        self.num_colors = num_colors
        self.gathers = gathers


class _JointState:
    """Shared palette plus per-complex colors for one refinement run."""

    def __init__(self, ccs: Sequence[CombinatorialComplex]):
        self.ccs = list(ccs)
        self.ell = max(cc.dimension for cc in ccs)
        self.palette: dict = {}
        self.colors: list[list[list[int]]] = []
        for cc in ccs:
            per_rank = []
            for r in range(self.ell + 1):
                c = self.intern(("rank", r))
                per_rank.append([c] * len(cc.cells(r)))
            self.colors.append(per_rank)
        self.pair_states: list[_PairState] = []

    def intern(self, sig) -> int:
        table = self.palette
        c = table.get(sig)
        if c is None:
            c = len(table)
            table[sig] = c
        return c

    def distinct_cell_colors(self) -> int:
        return len({c for per_rank in self.colors for row in per_rank for c in row})

    def snapshot(self) -> list[tuple]:
        """Comparable view per complex: rank histograms + live pair histograms."""
        out = []
        for ci, cc in enumerate(self.ccs):
            ranks = tuple(_hist(self.colors[ci][r]) for r in range(self.ell + 1))
            pairs = tuple(
                _hist(ps.mats[ci].ravel().tolist()) for ps in self.pair_states
            )
            out.append((ranks, pairs))
        return out

    # -- cell refinement ------------------------------------------------------

    def homp_round(self, specs: Sequence[NeighborhoodSpec]) -> bool:
        """One simultaneous update; returns False once the partition is stable."""
        before = self.distinct_cell_colors()
        specs_by_rank: dict[int, list[NeighborhoodSpec]] = {}
        for s in specs:
            specs_by_rank.setdefault(s.r1, []).append(s)
        new_all = []
        for ci, cc in enumerate(self.ccs):
            per_rank = []
            for r in range(self.ell + 1):
                old_row = self.colors[ci][r]
                row = []
                rank_specs = specs_by_rank.get(r, ())
                nbr_tables = [
                    (cc.neighbor_lists(s), self.colors[ci][s.target_rank])
                    for s in rank_specs
                ]
                for i, old in enumerate(old_row):
                    sig = (
                        old,
                        tuple(
                            tuple(sorted(tgt_colors[j] for j in nbrs[i]))
                            for nbrs, tgt_colors in nbr_tables
                        ),
                    )
                    row.append(self.intern(sig))
                per_rank.append(row)
            new_all.append(per_rank)
        self.colors = new_all
        return self.distinct_cell_colors() > before

    # -- pair refinement --------------------------------------------------------

    def seed_pairs(self, block: SclBlock) -> _PairState:
        r1, r2 = block.r1, block.r2
        rows = []
        shapes = []
        for ci, cc in enumerate(self.ccs):
            n1, n2 = len(cc.cells(r1)), len(cc.cells(r2))
            shapes.append((n1, n2))
            c1 = np.asarray(self.colors[ci][r1], dtype=np.int64)
            c2 = np.asarray(self.colors[ci][r2], dtype=np.int64)
            mark = _marking_matrix(cc, r1, r2, block.marking)
            sig = np.empty((n1 * n2, 3), dtype=np.int64)
            sig[:, 0] = np.repeat(c1, n2)
            sig[:, 1] = np.tile(c2, n1)
            sig[:, 2] = mark.ravel()
            rows.append(sig)
        joint = np.concatenate(rows, axis=0)
        _, inverse = np.unique(joint, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)  # 1-D on every numpy version
        num_colors = int(inverse.max()) + 1 if len(inverse) else 0
        mats = []
        pos = 0
        for n1, n2 in shapes:
            mats.append(inverse[pos : pos + n1 * n2].reshape(n1, n2).astype(np.int64))
            pos += n1 * n2
        gathers = _build_gathers(self.ccs, r1, r2, self.ell)
        state = _PairState(r1, r2, mats, num_colors, gathers)
        self.pair_states.append(state)
        return state

    def scl_round(self, state: _PairState) -> bool:
        """One pair-space update; exact multiset encoding via padded sorting."""
        blocks_per_cc = []
        for ci, cc in enumerate(self.ccs):
            C = state.mats[ci]
            n1, n2 = C.shape
            parts = [C[:, :, None]]
            row_ext = np.concatenate([C, np.full((1, n2), -1, dtype=np.int64)], axis=0)
            col_ext = np.concatenate([C, np.full((n1, 1), -1, dtype=np.int64)], axis=1)
            ct_ext = np.concatenate([C.T, np.full((n2, 1), -1, dtype=np.int64)], axis=1)
            for slot, pad in state.gathers[ci]:
                if slot == "x":  # multiset of C[x', y] over neighbors x' of x
                    g = row_ext[pad]            # (n1, w, n2)
                    g = np.sort(g, axis=1)
                    parts.append(np.moveaxis(g, 1, 2))
                elif slot == "y":  # multiset of C[x, y'] over neighbors y' of y
                    g = col_ext[:, pad]         # (n1, n2, w)
                    parts.append(np.sort(g, axis=2))
                elif slot == "bx":  # per-x multiset of C[x, y'] over up-incidences
                    g = np.take_along_axis(col_ext, pad, axis=1)  # (n1, w)
                    g = np.sort(g, axis=1)
                    parts.append(np.broadcast_to(g[:, None, :], (n1, n2, g.shape[1])))
                else:  # "by": per-y multiset of C[x', y] over down-incidences
                    g = np.take_along_axis(ct_ext, pad, axis=1)  # (n2, w)
                    g = np.sort(g, axis=1)
                    parts.append(np.broadcast_to(g[None, :, :], (n1, n2, g.shape[1])))
            sig = np.concatenate(parts, axis=2)
            blocks_per_cc.append(sig.reshape(n1 * n2, sig.shape[2]))
        joint = np.concatenate(blocks_per_cc, axis=0)
        _, inverse = np.unique(joint, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)  # 1-D on every numpy version
        num_colors = int(inverse.max()) + 1 if len(inverse) else 0
        pos = 0
        for ci in range(len(self.ccs)):
            n1, n2 = state.mats[ci].shape
            state.mats[ci] = inverse[pos : pos + n1 * n2].reshape(n1, n2).astype(np.int64)
            pos += n1 * n2
        changed = num_colors > state.num_colors
        state.num_colors = num_colors
        return changed

    def pool(self) -> None:
        """Fold the latest pair coloring into the cell colors of its two ranks."""
        if not self.pair_states:
            raise PoolWithoutScl("pool stage with no preceding pair block")
        state = self.pair_states[-1]
        r1, r2 = state.r1, state.r2
        for ci in range(len(self.ccs)):
            C = state.mats[ci]
            rows = [tuple(np.sort(C[i, :]).tolist()) for i in range(C.shape[0])]
            cols = [tuple(np.sort(C[:, j]).tolist()) for j in range(C.shape[1])]
            if r1 == r2:
                self.colors[ci][r1] = [
                    self.intern((old, rows[i], cols[i]))
                    for i, old in enumerate(self.colors[ci][r1])
                ]
            else:
                self.colors[ci][r1] = [
                    self.intern((old, "row", rows[i]))
                    for i, old in enumerate(self.colors[ci][r1])
                ]
                self.colors[ci][r2] = [
                    self.intern((old, "col", cols[j]))
                    for j, old in enumerate(self.colors[ci][r2])
                ]


def _marking_matrix(cc: CombinatorialComplex, r1: int, r2: int, marking: str) -> np.ndarray:
    n1, n2 = len(cc.cells(r1)), len(cc.cells(r2))
    if marking == "binary":
        mark = np.zeros((n1, n2), dtype=np.int64)
        for i, sups in enumerate(cc.contains_lists(r1, r2)):
            mark[i, list(sups)] = 1
        return mark
    if marking == "distance":
        if r1 != 0:
            raise MarkingUnsupported(
                f"distance marking needs r1 = 0 (a node metric), got r1 = {r1}"
            )
        dist = shortest_paths(cc, adjacency(0, 1))
        d = np.array(
            [[-1 if x == INFINITE else int(x) for x in row] for row in dist],
            dtype=np.int64,
        )
        mark = np.empty((n1, n2), dtype=np.int64)
        for j, verts in enumerate(cc.skeletons[r2]):
            cols = d[:, list(verts)]
            # min over finite distances when any exists; -1 only if all unreachable
            has_finite = (cols >= 0).any(axis=1)
            finite = np.where(cols == -1, np.iinfo(np.int64).max, cols).min(axis=1)
            mark[:, j] = np.where(has_finite, finite, -1)
        return mark
    raise MarkingUnsupported(f"unknown marking {marking!r}")


def _build_gathers(ccs, r1: int, r2: int, ell: int):
    """Padded neighbor-index arrays per complex, with joint widths per slot."""
    specs: list[tuple[str, NeighborhoodSpec]] = []
    for r in range(ell + 1):
        specs.append(("x", adjacency(r1, r)))
        specs.append(("x", co_adjacency(r1, r)))
    for r in range(ell + 1):
        specs.append(("y", adjacency(r2, r)))
        specs.append(("y", co_adjacency(r2, r)))
    specs.append(("bx", NeighborhoodSpec(NeighborhoodKind.INCIDENCE_UP, r1, r2)))
    specs.append(("by", NeighborhoodSpec(NeighborhoodKind.INCIDENCE_DOWN, r2, r1)))

    widths = []
    lists_per_cc = []
    for cc in ccs:
        lists = [cc.neighbor_lists(spec) for _, spec in specs]
        lists_per_cc.append(lists)
    for si in range(len(specs)):
        widths.append(
            max(
                (len(nbrs) for lists in lists_per_cc for nbrs in lists[si]),
                default=0,
            )
        )

    gathers = []
    for ci, cc in enumerate(ccs):
        n1, n2 = len(cc.cells(r1)), len(cc.cells(r2))
        per_cc = []
        for si, (slot, spec) in enumerate(specs):
            w = widths[si]
            if w == 0:
                continue
            nbr = lists_per_cc[ci][si]
            if slot == "x":
                pad_value = n1  # sentinel row in row_ext
            elif slot == "y":
                pad_value = n2
            elif slot == "bx":
                pad_value = n2  # sentinel column in col_ext
            else:
                pad_value = n1  # sentinel column in ct_ext
            mat = np.full((len(nbr), w), pad_value, dtype=np.int64)
            for i, ns in enumerate(nbr):
                if ns:
                    mat[i, : len(ns)] = ns
            per_cc.append((slot, mat))
        gathers.append(per_cc)
    return gathers


def _validate_stages(ccs, stages: Sequence[Stage], ell: int) -> None:
    for st in stages:
        if isinstance(st, HompBlock):
            if st.specs is not None:
                for s in st.specs:
                    if not (0 <= s.r1 <= ell and 0 <= s.r2 <= ell):
                        raise RankOutOfRange(f"spec {s} beyond dimension {ell}")
            if st.rounds is not None and st.rounds < 1:
                raise RankOutOfRange("block rounds must be >= 1 or None")
        elif isinstance(st, SclBlock):
            if not 0 <= st.r1 <= st.r2:
                raise RankOutOfRange(
                    f"pair block needs 0 <= r1 <= r2, got ({st.r1},{st.r2})"
                )
            for cc in ccs:
                if st.r2 > cc.dimension:
                    raise RankOutOfRange(
                        f"pair block ({st.r1},{st.r2}) beyond dimension {cc.dimension}"
                    )
            if st.rounds is not None and st.rounds < 1:
                raise RankOutOfRange("block rounds must be >= 1 or None")


def run_diagram(
    ccs: Sequence[CombinatorialComplex],
    stages: Sequence[Stage],
) -> Iterator[tuple[int, list[tuple], _JointState]]:
    """Execute stages jointly, yielding (round, comparable snapshots, state).

    Round 0 is the initial uniform coloring; every update (cell round, pair
    seeding, pair round, pooling) advances the counter by one.
    """
    state = _JointState(ccs)
    _validate_stages(ccs, stages, state.ell)
    total_cells = sum(cc.num_cells() for cc in ccs)
    tick = 0
    yield tick, state.snapshot(), state
    for st in stages:
        if isinstance(st, HompBlock):
            specs = tuple(st.specs) if st.specs is not None else tuple(
                natural_specs(state.ell)
            )
            rounds = st.rounds if st.rounds is not None else total_cells + 1
            for k in range(rounds):
                changed = state.homp_round(specs)
                tick += 1
                yield tick, state.snapshot(), state
                if st.rounds is None and not changed:
                    break
            else:
                if st.rounds is None:
                    raise AssertionError("refinement exceeded the cell-count bound")
        elif isinstance(st, SclBlock):
            pair = state.seed_pairs(st)
            tick += 1
            yield tick, state.snapshot(), state
            pair_space = sum(m.size for m in pair.mats)
            rounds = st.rounds if st.rounds is not None else pair_space + 1
            for k in range(rounds):
                changed = state.scl_round(pair)
                tick += 1
                yield tick, state.snapshot(), state
                if st.rounds is None and not changed:
                    break
            else:
                if st.rounds is None:
                    raise AssertionError("pair refinement exceeded the pair-space bound")
        else:
            state.pool()
            tick += 1
            yield tick, state.snapshot(), state


def _final_state(ccs, stages) -> _JointState:
    state = None
    for _, _, state in run_diagram(ccs, stages):
        pass
    assert state is not None
    return state


def _fingerprints_of(state: _JointState) -> list[Fingerprint]:
    out = []
    for ci, cc in enumerate(state.ccs):
        ranks = tuple(_hist(state.colors[ci][r]) for r in range(cc.dimension + 1))
        pairs = tuple(_hist(ps.mats[ci].ravel().tolist()) for ps in state.pair_states)
        out.append(
            Fingerprint(
                skeleton_sizes=cc.skeleton_sizes(),
                rank_histograms=ranks,
                pair_histograms=pairs,
            )
        )
    return out


def homp_refine(
    ccs: Sequence[CombinatorialComplex],
    config: Sequence[Stage] | HompBlock | None = None,
) -> list[tuple[Coloring, Fingerprint]]:
    """Jointly refine cell colors; default config is all natural neighborhoods
    iterated to stability."""
    if config is None:
        stages: Sequence[Stage] = (HompBlock(None, None),)
    elif isinstance(config, HompBlock):
        stages = (config,)
    else:
        stages = tuple(config)
        if not all(isinstance(s, HompBlock) for s in stages):
            raise RankOutOfRange("homp_refine accepts cell-refinement blocks only")
    state = _final_state(ccs, stages)
    prints = _fingerprints_of(state)
    results = []
    for ci, cc in enumerate(state.ccs):
        coloring = Coloring(
            tuple(tuple(state.colors[ci][r]) for r in range(cc.dimension + 1))
        )
        results.append((coloring, prints[ci]))
    return results


def scl_refine(
    cc: CombinatorialComplex,
    r1: int,
    r2: int,
    marking: str = "distance",
    rounds: int | None = None,
) -> PairColoring:
    """Pair-space refinement of a single complex, seeded from rank colors."""
    state = _final_state([cc], (SclBlock(r1, r2, marking, rounds),))
    mat = state.pair_states[-1].mats[0]
    return PairColoring(r1, r2, tuple(tuple(row) for row in mat.tolist()))


def smcn_refine(
    ccs: Sequence[CombinatorialComplex],
    diagram: Sequence[Stage] | None = None,
) -> list[Fingerprint]:
    """Run a staged diagram jointly and return the final fingerprints."""
    stages = tuple(diagram) if diagram is not None else default_smcn_diagram()
    return _fingerprints_of(_final_state(ccs, stages))


@dataclass(frozen=True)
class Verdict:
    distinguished: bool
    round: int | None = None
    engine: str = ""

    def __str__(self) -> str:
        if self.distinguished:
            return f"distinguished (engine {self.engine}, round {self.round})"
        return f"indistinguishable (engine {self.engine})"


@dataclass(frozen=True)
class Engine:
    """Distinguishability engine name plus its stages (None for the oracle)."""

    name: str
    stages: tuple[Stage, ...] | None

    @staticmethod
    def homp_full() -> "Engine":
        return Engine("homp", (HompBlock(None, None),))

    @staticmethod
    def scl(r1: int, r2: int, marking: str = "distance") -> "Engine":
        return Engine(
            f"scl:{r1},{r2},{'dist' if marking == 'distance' else 'bin'}",
            (SclBlock(r1, r2, marking, None), PoolStage()),
        )

    @staticmethod
    def smcn(stages: Sequence[Stage] | None = None) -> "Engine":
        return Engine(
            "smcn:default" if stages is None else "smcn:custom",
            tuple(stages) if stages is not None else default_smcn_diagram(),
        )

    @staticmethod
    def oracle() -> "Engine":
        return Engine("oracle", None)


def distinguish(
    a: CombinatorialComplex,
    b: CombinatorialComplex,
    engine: Engine,
) -> Verdict:
    """Compare two complexes; report the earliest separating round.

    For refinement engines, "indistinguishable" certifies only the engine's
    power; the oracle decides exact isomorphism.
    """
    if engine.stages is None:
        from .iso import cc_isomorphic

        res = cc_isomorphic(a, b)
        if res.isomorphic is None:
            return Verdict(distinguished=False, round=None, engine="oracle:unknown")
        return Verdict(distinguished=not res.isomorphic, round=None, engine="oracle")
    for tick, snaps, _state in run_diagram([a, b], engine.stages):
        if snaps[0] != snaps[1]:
            return Verdict(distinguished=True, round=tick, engine=engine.name)
    return Verdict(distinguished=False, round=None, engine=engine.name)
