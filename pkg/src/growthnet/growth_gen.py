"""Seeded generators: spatial growth, partial growth, and matched random.

The growth pipeline builds a sector by center-out insertion with distance-
and degree-dependent connection probability, then assembles each higher
level by tiling the lower block along the diagonal and wiring cross-cell
edges to a fixed set of high-degree winner targets, with per-source chance
counts driven by live degree extremes.

Randomness is drawn from counter-based Philox streams keyed by
(seed, level, source node); each stream is consumed in one documented
order, so results do not depend on platform or evaluation batching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from .graph_core import (
    HierarchySpec,
    InvalidArgumentError,
    SpatialGraph,
    positions_for_hierarchy,
    tile_along_diagonal,
)

# level tag for the random generator's stream (no hierarchy level involved)
_RANDOM_STREAM = 15


def node_stream(seed: int, level: int, source: int) -> Generator:
    """Philox stream for (seed, level, source), 128-bit key packing."""
    key = (int(seed) & ((1 << 64) - 1)) | (int(level) << 64) | (int(source) << 72)
    return Generator(Philox(key=key))


@dataclass(frozen=True)
class GrowthParams:
    p0_sector: float = 1.0
    p0_higher: float = 0.3
    alpha: float = 1.5
    beta: float = 1.5
    delta: float = 1.5
    lam: float = 0.45
    n_min_chances: int = 1
    xi: float = 0.75
    n_win_per_level: tuple[int, ...] = (41, 51)
    l_min: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.p0_sector <= 1.0 and 0.0 < self.p0_higher <= 1.0):
            raise InvalidArgumentError("p0 must be in (0, 1]")
        if self.lam <= 0:
            raise InvalidArgumentError("lambda scale must be positive")
        if not (0.0 < self.xi <= 1.0):
            raise InvalidArgumentError("xi must be in (0, 1]")
        if self.l_min <= 0:
            raise InvalidArgumentError("l_min must be positive")


@dataclass
class GenerationReport:
    edges_created: int
    reciprocal_edges: int
    per_level_edges: tuple[int, ...]

    @classmethod
    def of(cls, graph: SpatialGraph) -> "GenerationReport":
        e = graph.edges
        n = graph.n_nodes
        fwd = e[:, 0] * n + e[:, 1]
        rev = e[:, 1] * n + e[:, 0]
        recip = int(np.isin(fwd, rev).sum()) // 2
        levels = []
        for lv in range(graph.hierarchy.n_levels):
            bs = graph.hierarchy.block_size(lv)
            same = e[:, 0] // bs == e[:, 1] // bs
            levels.append(same)
        per_level = []
        prev = np.zeros(len(e), dtype=bool)
        for same in levels:
            per_level.append(int((same & ~prev).sum()))
            prev = same
        return cls(len(e), recip, tuple(per_level))


def effective_length(L: float, k_in: int, k_in_max: int, params: GrowthParams) -> float:
    """Degree-shortened distance; saturates to l_min at k_in = lambda*k_in_max."""
    if L < params.l_min:
        raise InvalidArgumentError(f"L={L} below l_min={params.l_min}")
    ratio = k_in / (params.lam * k_in_max)
    return L - (L - params.l_min) * ratio**params.beta


def connection_probability(
    L: float, k_in: int, k_in_max: int, params: GrowthParams, p0: float
) -> float:
    leff = effective_length(L, k_in, k_in_max, params)
    if leff <= params.l_min:
        # over-saturated degree pushes leff at or below l_min; clamp to p0
        p = p0
    else:
        p = p0 * (params.l_min / leff) ** params.alpha
    return min(1.0, max(0.0, p))


def chance_count(k: int, k_min: int, k_max: int, n_s: int, params: GrowthParams) -> int:
    """Connection chances for a source of total degree k, rounded half-up."""
    if k_max <= k_min:
        return params.n_min_chances
    x = (k - k_min) / (k_max - k_min)
    raw = params.n_min_chances - (params.n_min_chances - params.xi * n_s) * x**params.delta
    return max(params.n_min_chances, int(math.floor(raw + 0.5)))


def _insertion_order(positions: np.ndarray) -> np.ndarray:
    center = (positions.max(axis=0) + positions.min(axis=0)) / 2.0
    d2 = ((positions - center) ** 2).sum(axis=1)
    return np.lexsort((np.arange(len(positions)), d2))


def grow_sector(grid: tuple[int, int], params: GrowthParams) -> SpatialGraph:
    """Center-out growth of one sector.

    Nodes enter in order of Euclidean distance from the grid center (ties by
    node id). Each insertion runs one new->existing and one independent
    existing->new trial per existing node, both at the probability given by
    the existing node's current in-degree.
    """
    spec = HierarchySpec((tuple(grid),))
    n = spec.n_nodes
    positions, _ = positions_for_hierarchy(spec)
    order = _insertion_order(positions)
    k_in_max = max(1, n - 1)
    in_deg = np.zeros(n, dtype=np.int64)
    adj = np.zeros((n, n), dtype=bool)
    placed: list[int] = []
    lam_k = params.lam * k_in_max
    for step, node in enumerate(order):
        node = int(node)
        if step == 0:
            placed.append(node)
            continue
        ex = np.array(placed, dtype=np.int64)
        dx = positions[ex, 0] - positions[node, 0]
        dy = positions[ex, 1] - positions[node, 1]
        L = np.sqrt((dx * dx + dy * dy).astype(np.float64)) * params.l_min
        ratio = (in_deg[ex] / lam_k) ** params.beta
        leff = L - (L - params.l_min) * ratio
        p = np.where(
            leff <= params.l_min,
            params.p0_sector,
            params.p0_sector * (params.l_min / np.maximum(leff, params.l_min)) ** params.alpha,
        )
        p = np.clip(p, 0.0, 1.0)
        u = node_stream(params.seed, 0, node).random((len(ex), 2))
        fwd = ex[u[:, 0] < p]
        rev = ex[u[:, 1] < p]
        adj[node, fwd] = True
        in_deg[fwd] += 1
        adj[rev, node] = True
        in_deg[node] += len(rev)
        placed.append(node)
    src, dst = np.nonzero(adj)
    return SpatialGraph(spec, np.stack([src, dst], axis=1))


def _cell_origin_probs(spec: HierarchySpec, level: int, p0: float, params: GrowthParams) -> np.ndarray:
    """p for every ordered cell pair at `level`, from cell-origin distances."""
    rows, cols = spec.levels[level]
    px, py = spec.pitch_xy(level)
    cells = np.arange(rows * cols)
    ox = (cells % cols) * px
    oy = (cells // cols) * py
    dx = ox[:, None] - ox[None, :]
    dy = oy[:, None] - oy[None, :]
    L = np.sqrt((dx * dx + dy * dy).astype(np.float64)) * params.l_min
    with np.errstate(divide="ignore"):
        p = p0 * (params.l_min / L) ** params.alpha
    np.fill_diagonal(p, 0.0)
    return np.clip(p, 0.0, 1.0)


def assemble_level(
    block: SpatialGraph,
    grid: tuple[int, int],
    n_win: int,
    params: GrowthParams,
    level: int,
) -> SpatialGraph:
    """Tile `block` over `grid` and wire cross-cell edges.

    Winners are the n_win highest-total-degree nodes of the block (ties by
    lower id), fixed for the whole pass. Sources run cell by cell (cells
    row-major, nodes within a cell by descending block degree); each source
    draws chance_count(k) consolidated trials against every winner of every
    other cell at the cell-pair probability. Degree anchors are the live
    extremes of the source's own original sector, so hub sectors keep a
    tight bracket while the global range widens. Forward successes at the
    region level are mirrored; deeper levels stay forward-only (the
    decisions ledger records the calibration behind both choices).

    Each source consumes one uniform per (other cell, winner) pair from its
    stream, cells in ascending id order, winners in ascending id order.
    """
    nb = block.n_nodes
    if n_win > nb:
        raise InvalidArgumentError(f"n_win={n_win} exceeds block size {nb}")
    tiled = tile_along_diagonal(block, grid)
    spec = tiled.hierarchy
    n_cells = grid[0] * grid[1]
    n = tiled.n_nodes
    sec = block.hierarchy.block_size(0)

    block_tot = block.total_degree()
    win_local = np.sort(np.lexsort((np.arange(nb), -block_tot))[:n_win])
    within_order = np.lexsort((np.arange(nb), -block_tot))

    P = _cell_origin_probs(spec, spec.n_levels - 1, params.p0_higher, params)

    adj = np.zeros((n, n), dtype=bool)
    e = tiled.edges
    adj[e[:, 0], e[:, 1]] = True
    tot = np.asarray(adj.sum(0) + adj.sum(1), dtype=np.int64)

    other_cells = [np.array([t for t in range(n_cells) if t != c]) for c in range(n_cells)]
    cell_winners = np.array([c * nb + win_local for c in range(n_cells)])
    mirror = level == 1

    for c in range(n_cells):
        tcs = other_cells[c]
        targets = cell_winners[tcs]  # (n_other, n_win) global ids
        pc = P[c, tcs]
        for local in within_order:
            s = c * nb + int(local)
            seg = tot[(s // sec) * sec : (s // sec + 1) * sec]
            nch = chance_count(int(tot[s]), int(seg.min()), int(seg.max()), nb, params)
            q = 1.0 - (1.0 - pc) ** nch
            u = node_stream(params.seed, level, s).random((len(tcs), n_win))
            hits = targets[u < q[:, None]]
            new = np.unique(hits[~adj[s, hits]])
            if len(new):
                adj[s, new] = True
                tot[s] += len(new)
                tot[new] += 1
            if mirror:
                back = np.unique(hits[~adj[hits, s]])
                if len(back):
                    adj[back, s] = True
                    tot[s] += len(back)
                    tot[back] += 1
    src, dst = np.nonzero(adj)
    return SpatialGraph(spec, np.stack([src, dst], axis=1))


def generate_growth(spec: HierarchySpec, params: GrowthParams) -> SpatialGraph:
    """Full pipeline: grow the sector, then assemble each level in turn."""
    g = grow_sector(spec.levels[0], params)
    for lv in range(1, spec.n_levels):
        idx = lv - 1
        if idx >= len(params.n_win_per_level):
            raise InvalidArgumentError(f"no n_win configured for level {lv}")
        g = assemble_level(g, spec.levels[lv], params.n_win_per_level[idx], params, lv)
    return g


def generate_partial_growth(spec: HierarchySpec, params: GrowthParams) -> SpatialGraph:
    """Distance-only long-range wiring over a grown sector.

    Every node of every other cell is an eligible target and each source
    uses exactly n_min_chances chances. The region level keeps the
    reciprocal trial (so each ordered pair sees two draws); deeper levels
    draw forward only, matching the growth pipeline's level asymmetry.
    """
    g = grow_sector(spec.levels[0], params)
    for lv in range(1, spec.n_levels):
        nb = g.n_nodes
        tiled = tile_along_diagonal(g, spec.levels[lv])
        sub = tiled.hierarchy
        n_cells = spec.levels[lv][0] * spec.levels[lv][1]
        n = tiled.n_nodes
        P = _cell_origin_probs(sub, sub.n_levels - 1, params.p0_higher, params)
        trials = 2 if lv == 1 else 1
        adj = np.zeros((n, n), dtype=bool)
        e = tiled.edges
        adj[e[:, 0], e[:, 1]] = True
        nch = params.n_min_chances
        for c in range(n_cells):
            tcs = [t for t in range(n_cells) if t != c]
            for local in range(nb):
                s = c * nb + local
                u = node_stream(params.seed, lv, s).random((len(tcs), nb, trials))
                for i, t in enumerate(tcs):
                    q = 1.0 - (1.0 - P[c, t]) ** nch
                    hit = (u[i, :, :] < q).any(axis=1)
                    adj[s, t * nb + np.nonzero(hit)[0]] = True
        src, dst = np.nonzero(adj)
        g = SpatialGraph(sub, np.stack([src, dst], axis=1))
    return g


def generate_random(
    n_nodes: int,
    n_edges: int,
    seed: int,
    spec: HierarchySpec | None = None,
) -> SpatialGraph:
    """Exactly n_edges distinct directed non-self-loop edges, uniform.

    Pass `spec` to lay the nodes out on a hierarchy grid (for spatial and
    census comparisons against structured networks of the same shape);
    edges stay position-independent either way.
    """
    cap = n_nodes * (n_nodes - 1)
    if n_edges > cap:
        raise InvalidArgumentError(f"{n_edges} edges exceed capacity {cap}")
    if spec is not None and spec.n_nodes != n_nodes:
        raise InvalidArgumentError(
            f"hierarchy holds {spec.n_nodes} nodes, asked for {n_nodes}"
        )
    rng = node_stream(seed, _RANDOM_STREAM, 0)
    have = np.empty((0,), dtype=np.int64)
    while len(have) < n_edges:
        need = n_edges - len(have)
        draw = rng.integers(0, cap, size=int(need * 1.05) + 16, dtype=np.int64)
        have = np.unique(np.concatenate([have, draw]))
    # unique() sorts; subsample randomly so low codes are not favored
    pick = rng.choice(len(have), size=n_edges, replace=False)
    codes = have[np.sort(pick)]
    src = codes // (n_nodes - 1)
    rem = codes % (n_nodes - 1)
    dst = np.where(rem >= src, rem + 1, rem)
    if spec is None:
        spec = HierarchySpec(((1, n_nodes),))
    return SpatialGraph(spec, np.stack([src, dst], axis=1))


@dataclass
class GeneratedSet:
    """One seed's worth of comparison networks."""

    growth: SpatialGraph
    partial: SpatialGraph
    random: SpatialGraph
    params: GrowthParams
