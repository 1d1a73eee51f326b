"""Directed-graph measurements: clustering, path lengths, degree fits,
hierarchy edge census, and Rent exponent.

All functions are pure reads of an immutable SpatialGraph; nothing here
mutates the graph and results do not depend on evaluation order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from .graph_core import InvalidArgumentError, SpatialGraph


class UndefinedResultError(ValueError):
    pass


class FitFailureError(ValueError):
    pass


# -- clustering ------------------------------------------------------------


def _clustering_vector(graph: SpatialGraph) -> np.ndarray:
    """Per-node directed clustering (all-motif variant).

    C_i = [(A+A^T)^3]_ii / (2 [d_tot (d_tot - 1) - 2 d_bi]); nodes whose
    denominator is not positive contribute 0.
    """
    n = graph.n_nodes
    A = graph.out_adjacency().astype(np.int64)
    S = (A + A.T).tocsr()
    tri = np.zeros(n, dtype=np.int64)
    # blocked (S @ S) rows keep peak memory bounded on dense-ish graphs
    step = 1024
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        rows = S[lo:hi, :]
        tri[lo:hi] = np.asarray((rows @ S).multiply(rows).sum(axis=1)).ravel()
    d_tot = graph.total_degree()
    e = graph.edges
    codes_f = e[:, 0] * n + e[:, 1]
    codes_r = e[:, 1] * n + e[:, 0]
    recip_edge = np.isin(codes_f, codes_r)
    d_bi = np.bincount(e[recip_edge, 0], minlength=n)
    den = 2 * (d_tot * (d_tot - 1) - 2 * d_bi)
    c = np.zeros(n, dtype=np.float64)
    ok = den > 0
    c[ok] = tri[ok] / den[ok]
    return c


def clustering_coefficient(graph: SpatialGraph, node: int) -> float:
    if node < 0 or node >= graph.n_nodes:
        raise InvalidArgumentError(f"node {node} out of range")
    return float(_clustering_vector(graph)[node])


def mean_clustering(graph: SpatialGraph) -> float:
    if graph.n_nodes == 0:
        raise InvalidArgumentError("empty graph")
    return float(_clustering_vector(graph).mean())


# -- shortest paths ---------------------------------------------------------


def bfs_distances(graph: SpatialGraph, source: int) -> np.ndarray:
    """Directed hop distances from `source`; unreachable nodes get -1."""
    n = graph.n_nodes
    indptr = graph.out_adjacency().indptr
    indices = graph.out_adjacency().indices
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in indices[indptr[u] : indptr[u + 1]]:
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(int(v))
        frontier = nxt
    return dist


def _apl_bitparallel(graph: SpatialGraph) -> tuple[float, int]:
    """Mean hops over ordered reachable pairs and the unreachable count.

    Runs 64 sources at a time as uint64 visit masks, propagating along the
    transposed adjacency so each step is one gather plus a reduce.
    """
    n = graph.n_nodes
    At = graph.out_adjacency().T.tocsr()  # row v: sources that reach v in 1
    indptr = At.indptr.astype(np.int64)
    indices = At.indices.astype(np.int64)
    total = 0
    reached = 0
    lut = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(axis=1)

    def popcount(arr: np.ndarray) -> int:
        return int(lut[arr.view(np.uint8)].sum())

    for lo in range(0, n, 64):
        k = min(64, n - lo)
        visited = np.zeros(n, dtype=np.uint64)
        visited[lo : lo + k] = np.uint64(1) << np.arange(k, dtype=np.uint64)
        frontier = visited.copy()
        d = 0
        while True:
            d += 1
            gathered = frontier[indices]
            # OR the frontier bits of all in-neighbors of each node
            segs = np.zeros(n, dtype=np.uint64)
            nonempty = indptr[:-1] != indptr[1:]
            if gathered.size:
                segs[nonempty] = np.bitwise_or.reduceat(gathered, indptr[:-1][nonempty])
            new = segs & ~visited
            cnt = popcount(new)
            if cnt == 0:
                break
            total += d * cnt
            reached += cnt
            visited |= new
            frontier = new
    ordered_pairs = n * (n - 1)
    unreachable = ordered_pairs - reached
    if reached == 0:
        raise UndefinedResultError("no reachable ordered pairs")
    return total / reached, unreachable


def average_path_length(graph: SpatialGraph) -> float:
    if graph.n_nodes < 2:
        raise InvalidArgumentError("need at least 2 nodes")
    return _apl_bitparallel(graph)[0]


def average_path_length_report(graph: SpatialGraph) -> tuple[float, int]:
    """(APL, count of unreachable ordered pairs)."""
    if graph.n_nodes < 2:
        raise InvalidArgumentError("need at least 2 nodes")
    return _apl_bitparallel(graph)


def small_world_index(candidate: "MetricsReport", baseline: "MetricsReport") -> float:
    if baseline.mean_clustering <= 0:
        raise UndefinedResultError("baseline clustering is zero")
    return (candidate.mean_clustering / candidate.apl) / (
        baseline.mean_clustering / baseline.apl
    )


# -- power-law fit ----------------------------------------------------------


@dataclass
class PowerLawFit:
    amplitude: float
    gamma: float
    k_lo: int
    k_hi: int
    residual: float


def fit_power_law(
    degrees: np.ndarray,
    n_bins: int = 40,
    k_lo: int | None = None,
    k_hi: int | None = None,
) -> PowerLawFit:
    """Least-squares line on (log k, log N(k)) over log-binned counts.

    N(k) is the per-unit-degree height of the histogram (bin count divided
    by bin width), evaluated at the mean degree inside each bin; geometric
    bin centers sit off the mass centroid of the narrow low-k bins and bias
    the slope by over a percent. The default fit range spans the observed
    degrees; pass k_lo/k_hi to restrict it.
    """
    deg = np.asarray(degrees)
    deg = deg[deg > 0]
    if len(deg) == 0:
        raise FitFailureError("no positive degrees")
    lo = int(k_lo) if k_lo is not None else int(deg.min())
    hi = int(k_hi) if k_hi is not None else int(deg.max())
    deg = deg[(deg >= lo) & (deg <= hi)]
    edges = np.unique(np.round(np.logspace(np.log10(lo), np.log10(hi + 1), n_bins)).astype(np.int64))
    if len(edges) < 4:
        raise FitFailureError("degree range too narrow for log binning")
    counts, _ = np.histogram(deg, bins=edges)
    width = np.diff(edges)
    sums, _ = np.histogram(deg, bins=edges, weights=deg.astype(np.float64))
    centers = np.where(counts > 0, sums / np.maximum(counts, 1), 1.0)
    keep = counts > 0
    if keep.sum() < 3:
        raise FitFailureError("fewer than 3 nonzero bins")
    x = np.log10(centers[keep])
    y = np.log10(counts[keep] / width[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return PowerLawFit(float(10**intercept), float(-slope), lo, hi, resid)


def fit_power_law_mle(degrees: np.ndarray, k_lo: int | None = None) -> float:
    """Continuous MLE exponent (secondary diagnostic, not the Table fit)."""
    deg = np.asarray(degrees, dtype=np.float64)
    lo = float(k_lo) if k_lo is not None else float(deg[deg > 0].min())
    d = deg[deg >= lo]
    if len(d) < 2:
        raise FitFailureError("not enough tail samples")
    return 1.0 + len(d) / float(np.log(d / lo).sum())


# -- hierarchy census and Rent exponent -------------------------------------


def hierarchy_edge_census(graph: SpatialGraph) -> np.ndarray:
    """Mean in-edges per node by deepest shared hierarchy cell.

    Entry L is the per-node mean count of in-edges whose source shares the
    target's level-L cell but not its level-(L-1) cell. The entries sum to
    the overall mean in-degree.
    """
    if graph.hierarchy.n_levels < 1:
        raise InvalidArgumentError("graph has no hierarchy")
    e = graph.edges
    n_levels = graph.hierarchy.n_levels
    deepest = np.full(len(e), n_levels - 1, dtype=np.int64)
    for lv in range(n_levels - 2, -1, -1):
        bs = graph.hierarchy.block_size(lv)
        same = e[:, 0] // bs == e[:, 1] // bs
        deepest[same] = lv
    means = np.array(
        [(deepest == lv).sum() / graph.n_nodes for lv in range(n_levels)]
    )
    return means


def census_table_convention(census: np.ndarray) -> np.ndarray:
    """Paper-table form of the census: the top level is scaled by the number
    of peer cells at that level (3 for a 2x2 module). Both reference census
    rows in the paper are reproduced only under this convention; the raw
    per-node means from hierarchy_edge_census satisfy the degree identity
    instead. See the decisions ledger.
    """
    out = census.copy()
    out[-1] *= 3.0
    return out


@dataclass
class RentReport:
    p_t: float
    table: list  # (level, n_nodes, crossing_edges, log-formula p_T)
    d_t_bound: float


def rent_exponent(graph: SpatialGraph) -> RentReport:
    """Rent slope from (nodes, boundary-crossing edges) per partition scale."""
    if graph.hierarchy.n_levels < 2:
        raise InvalidArgumentError("need at least 2 hierarchy levels")
    e = graph.edges
    table = []
    ns, es = [], []
    for lv in range(graph.hierarchy.n_levels):
        bs = graph.hierarchy.block_size(lv)
        n_cells = graph.n_nodes // bs
        if n_cells < 2:
            continue
        crossing = (e[:, 0] // bs != e[:, 1] // bs).sum()
        mean_e = float(crossing) * 2.0 / n_cells  # both directions, per cell
        if mean_e <= 0:
            warnings.warn(f"partition level {lv} has no crossing edges; excluded")
            continue
        table.append((lv, bs, mean_e, float(np.log10(bs) / np.log10(mean_e))))
        ns.append(bs)
        es.append(mean_e)
    if len(ns) < 2:
        raise FitFailureError("fewer than 2 usable partition scales")
    slope = np.polyfit(np.log10(es), np.log10(ns), 1)[0]
    p_t = float(slope)
    d_t = 1.0 / (1.0 - p_t) if p_t < 1.0 else float("inf")
    return RentReport(p_t, table, d_t)


# -- aggregate report --------------------------------------------------------


@dataclass
class MetricsReport:
    mean_clustering: float
    apl: float
    unreachable_pairs: int
    census: tuple
    census_table: tuple
    in_fit: PowerLawFit | None
    out_fit: PowerLawFit | None
    degree_min: int
    degree_max: int
    rent: RentReport | None
    swi: float | None = None
    extras: dict = field(default_factory=dict)

    def to_row(self) -> dict:
        row = {
            "cc": self.mean_clustering,
            "apl": self.apl if math.isfinite(self.apl) else None,
            "swi": self.swi,
            "unreachable_pairs": self.unreachable_pairs,
            "degree_min": self.degree_min,
            "degree_max": self.degree_max,
            "gamma_in": self.in_fit.gamma if self.in_fit else None,
            "gamma_out": self.out_fit.gamma if self.out_fit else None,
            "rent_p": self.rent.p_t if self.rent else None,
        }
        for i, v in enumerate(self.census_table):
            row[f"census_l{i}"] = v
        return row


def measure(graph: SpatialGraph, fit_degrees: bool = True) -> MetricsReport:
    cc = mean_clustering(graph)
    try:
        apl, unreachable = average_path_length_report(graph)
    except UndefinedResultError:
        # edgeless: every ordered pair is unreachable
        apl, unreachable = math.nan, graph.n_nodes * (graph.n_nodes - 1)
    census = hierarchy_edge_census(graph)
    table = census_table_convention(census)
    d_tot = graph.total_degree()
    in_fit = out_fit = None
    if fit_degrees:
        try:
            in_fit = fit_power_law(graph.in_degree())
            out_fit = fit_power_law(graph.out_degree())
        except FitFailureError:
            pass
    rent = None
    if graph.hierarchy.n_levels >= 2:
        try:
            rent = rent_exponent(graph)
        except (FitFailureError, InvalidArgumentError):
            pass
    return MetricsReport(
        mean_clustering=cc,
        apl=apl,
        unreachable_pairs=unreachable,
        census=tuple(float(x) for x in census),
        census_table=tuple(float(x) for x in table),
        in_fit=in_fit,
        out_fit=out_fit,
        degree_min=int(d_tot.min()),
        degree_max=int(d_tot.max()),
        rent=rent,
    )
