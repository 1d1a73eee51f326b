"""Photonic routing area model, layout diagrams, and feed-forward loss.

The area model prices each neuron's contribution per hierarchy level:
sparsity-scaled routing column/row area at every level, plus the neuron
footprint once (distant synapses stack on higher waveguide planes). Level
degrees come from the deepest-shared-cell edge classification, matching
the hierarchy census.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import InvalidArgumentError, SpatialGraph
from .metrics import FitFailureError, hierarchy_edge_census
from .scaling_laws import DegreeLawParams, max_degree, normalization, power_integral


@dataclass(frozen=True)
class PhysicalParams:
    w_wg: float = 500e-9  # waveguide width
    g_wg: float = 1e-6  # waveguide gap
    h_sine: float = 1e-6  # sine bend height
    l_sine: float = 1e-6  # sine bend length
    g_tap: float = 500e-9  # evanescent tap gap
    l_tap: float = 5e-6  # power tap length
    l_ipc: float = 36e-6  # inter-planar coupler length
    w_ipc: float = 4e-6  # inter-planar coupler width
    l_spd: float = 10e-6  # detector length
    r_bend: float = 2e-6  # routing bend radius
    l_demux: float = 5e-6  # de-multiplexer length
    n_spd: int = 3  # detectors per synapse
    plane_pairs: int = 3  # waveguide plane pairs, split evenly over levels
    # inter-sector routing runs in silicon nitride at twice the silicon
    # area; set 1.0 to price an all-silicon stack
    nitride_factor: float = 2.0

    def __post_init__(self):
        lengths = (
            self.w_wg, self.g_wg, self.h_sine, self.l_sine, self.g_tap,
            self.l_tap, self.l_ipc, self.w_ipc, self.l_spd, self.r_bend,
            self.l_demux,
        )
        if min(lengths) <= 0:
            raise InvalidArgumentError("all lengths must be positive")
        if self.n_spd < 1 or self.plane_pairs < 1:
            raise InvalidArgumentError("counts must be at least 1")
        if self.nitride_factor < 1.0:
            raise InvalidArgumentError("nitride factor cannot shrink area")


def tap_pitch(params: PhysicalParams) -> float:
    """Per-lane pitch a = w_wg + g_tap + h_sine + (w_wg + w_ipc)/2."""
    return params.w_wg + params.g_tap + params.h_sine + (params.w_wg + params.w_ipc) / 2.0


def column_width(n_row: int, params: PhysicalParams) -> float:
    if n_row < 1:
        raise InvalidArgumentError("n_row must be at least 1")
    return 2.0 * n_row * (tap_pitch(params) + params.g_wg) + 2.0 * params.r_bend


def row_height(n_n: int, params: PhysicalParams) -> float:
    if n_n < 1:
        raise InvalidArgumentError("n_n must be at least 1")
    a = tap_pitch(params)
    return n_n * (a + params.n_spd * (params.w_wg + params.g_wg)) + 2.0 * params.r_bend


def neuron_footprint(k_in: int, params: PhysicalParams) -> tuple[float, float]:
    """(height, width) of the neuron body for k_in terminating lanes."""
    if k_in < 0:
        raise InvalidArgumentError("k_in must be non-negative")
    h = 2.0 * params.l_spd
    w = k_in * (params.w_wg + params.g_wg) + 1.5 * (
        params.l_tap + params.l_sine + params.l_demux + params.l_ipc + params.r_bend
    )
    return h, w


def neuron_area(k_in: int, params: PhysicalParams) -> float:
    h, w = neuron_footprint(k_in, params)
    return h * w


@dataclass
class AreaReport:
    per_node: np.ndarray  # m^2, each node's full contribution
    per_level_routing: tuple  # m^2 totals, one per hierarchy level
    footprint_total: float
    total: float
    area_exponent: float | None
    plane_pairs: int

    def to_dict(self) -> dict:
        return {
            "total_m2": self.total,
            "footprint_total_m2": self.footprint_total,
            "per_level_routing_m2": list(self.per_level_routing),
            "area_exponent": self.area_exponent,
            "plane_pairs": self.plane_pairs,
        }


def _level_degrees(graph: SpatialGraph) -> tuple[np.ndarray, np.ndarray]:
    """(k_in, k_out) per node per level, deepest-shared-cell classification."""
    e = graph.edges
    n = graph.n_nodes
    n_levels = graph.hierarchy.n_levels
    deepest = np.full(len(e), n_levels - 1, dtype=np.int64)
    for lv in range(n_levels - 2, -1, -1):
        bs = graph.hierarchy.block_size(lv)
        deepest[e[:, 0] // bs == e[:, 1] // bs] = lv
    k_in = np.zeros((n_levels, n), dtype=np.int64)
    k_out = np.zeros((n_levels, n), dtype=np.int64)
    for lv in range(n_levels):
        sel = deepest == lv
        k_in[lv] = np.bincount(e[sel, 1], minlength=n)
        k_out[lv] = np.bincount(e[sel, 0], minlength=n)
    return k_in, k_out


def _level_dims(graph: SpatialGraph) -> list:
    """(rows of neurons, neurons) per hierarchy level cell."""
    dims = []
    rows = 1
    n = 1
    for lv in range(graph.hierarchy.n_levels):
        r, c = graph.hierarchy.levels[lv]
        rows *= r
        n *= r * c
        dims.append((rows, n))
    return dims


def network_area_exact(graph: SpatialGraph, params: PhysicalParams) -> AreaReport:
    """Exact per-node area of a hierarchical network.

    Per node: the neuron footprint once, sized by the node's full in-degree
    (every in-edge terminates at the neuron; higher-level synapses stack on
    higher planes over the same footprint), plus at each level the routing
    rectangle w_col * h_row scaled by (k_out / n_N)(k_in / n_N) for that
    level's census-classified degrees and dimensions. Each level's share is
    divided by the plane pairs assigned to it (total pairs split evenly
    across levels); inter-sector routing carries the nitride factor.
    """
    if graph.hierarchy.n_levels < 2:
        raise InvalidArgumentError("area model needs at least 2 hierarchy levels")
    census = hierarchy_edge_census(graph)
    if census[0] < census[-1]:
        raise InvalidArgumentError(
            "long-range-dominated wiring (census level 0 below top level); "
            "this routing model only prices hierarchy-localized networks"
        )
    k_in, k_out = _level_degrees(graph)
    dims = _level_dims(graph)
    pairs_per_level = params.plane_pairs / graph.hierarchy.n_levels
    per_node = np.zeros(graph.n_nodes, dtype=np.float64)
    per_level = []
    foot = np.array(
        [neuron_area(int(k), params) for k in graph.in_degree()]
    ) / pairs_per_level
    per_node += foot
    for lv in range(graph.hierarchy.n_levels):
        rows, n_n = dims[lv]
        wc = column_width(rows, params)
        hr = row_height(n_n, params)
        factor = params.nitride_factor if lv >= 1 else 1.0
        routing = factor * (wc * k_out[lv] / n_n) * (hr * k_in[lv] / n_n) / pairs_per_level
        per_node += routing
        per_level.append(float(routing.sum()))
    exponent = None
    try:
        exponent = area_fit(per_node, graph.total_degree())
    except FitFailureError:
        pass
    return AreaReport(
        per_node=per_node,
        per_level_routing=tuple(per_level),
        footprint_total=float(foot.sum()),
        total=float(per_node.sum()),
        area_exponent=exponent,
        plane_pairs=params.plane_pairs,
    )


def area_fit(
    per_node_areas: np.ndarray, degrees: np.ndarray, n_bins: int = 40
) -> float:
    """Log-log least-squares exponent of area against total degree.

    Areas are averaged inside logarithmic degree bins before the fit; a
    plain per-node fit would be dominated by the dense low-degree cloud
    and systematically under-weight the hub tail.
    """
    a = np.asarray(per_node_areas, dtype=np.float64)
    k = np.asarray(degrees, dtype=np.float64)
    ok = (a > 0) & (k > 0)
    a, k = a[ok], k[ok]
    if len(a) < 10:
        raise FitFailureError("need at least 10 nodes with positive degree")
    if k.max() / k.min() < 10.0:
        raise FitFailureError("need at least one decade of degree spread")
    edges = np.logspace(np.log10(k.min()), np.log10(k.max() * (1 + 1e-9)), n_bins + 1)
    idx = np.clip(np.digitize(k, edges) - 1, 0, n_bins - 1)
    bx, by = [], []
    for b in range(n_bins):
        sel = idx == b
        if sel.any():
            bx.append(np.sqrt(edges[b] * edges[b + 1]))
            by.append(a[sel].mean())
    slope = np.polyfit(np.log10(bx), np.log10(by), 1)[0]
    return float(slope)


def anchored_area_law(
    total_area: float,
    n_nodes: int,
    area_exponent: float,
    gamma: float = 1.6,
    k_min: float = 10.0,
) -> float:
    """Coefficient C of A_n(k) = C * k**exponent, anchored to a measured network.

    Solves n_nodes * C * integral(k**exponent p(k) dk) = total_area with
    p(k) the truncated power law at the network's own size, so the scaling
    formula reproduces the exact model at the anchor point. The anchor
    cancels the law normalization; the choice of k_min barely matters.
    """
    if total_area <= 0 or n_nodes < 1:
        raise InvalidArgumentError("need a positive measured area and node count")
    k_max = max_degree(gamma, k_min, n_nodes)
    b = normalization(gamma, k_min, k_max)
    integral = b * power_integral(area_exponent - gamma, k_min, k_max)
    return total_area / (n_nodes * integral)


def network_area_scaling(
    n_tot: float,
    law: DegreeLawParams,
    area_coeff: float,
    area_exponent: float,
    plane_pairs: int,
    calibration_pairs: int = 3,
) -> float:
    """A_N = n_tot * integral(A_n(k) p(k) dk), A_n(k) = area_coeff * k**area_exponent.

    area_coeff/area_exponent come from the uniform-degree curve fit at
    calibration_pairs plane pairs; area divides out linearly with
    additional pairs. A degenerate degree bracket (k_min == k_max) is the
    delta-distribution case: exactly n_tot * A_n(k_min).
    """
    if plane_pairs < 1:
        raise InvalidArgumentError("plane_pairs must be at least 1")
    scale = calibration_pairs / plane_pairs
    if law.k_min == law.k_max:
        return n_tot * area_coeff * law.k_min**area_exponent * scale
    b = normalization(law.gamma, law.k_min, law.k_max)
    integral = b * power_integral(area_exponent - law.gamma, law.k_min, law.k_max)
    return n_tot * area_coeff * integral * scale


# template dimensions for uniform-degree capacity: the reference module
_DELTA_TEMPLATE_ROWS = 90
_DELTA_TEMPLATE_N = 8100


def delta_degree_area(k0: float, params: PhysicalParams) -> float:
    """Area of one neuron in a uniform-degree network (k_in = k_out = k0).

    Priced with the reference-module routing dimensions: uniform wiring has
    no hierarchy locality, so every connection routes at module scale. The
    silicon template is used regardless of the nitride setting; the quoted
    uniform-degree capacities assume an all-silicon stack.
    """
    if k0 < 1:
        raise InvalidArgumentError("k0 must be at least 1")
    wc = column_width(_DELTA_TEMPLATE_ROWS, params)
    hr = row_height(_DELTA_TEMPLATE_N, params)
    routing = (wc * k0 / _DELTA_TEMPLATE_N) * (hr * k0 / _DELTA_TEMPLATE_N)
    h, w = neuron_footprint(int(round(k0)), params)
    return (routing + h * w) / params.plane_pairs


def delta_degree_capacity(k0: float, die_area: float, params: PhysicalParams) -> float:
    """Neurons of uniform degree k0 that fit in die_area (m^2)."""
    if die_area <= 0:
        raise InvalidArgumentError("die area must be positive")
    return die_area / delta_degree_area(k0, params)


def node_area_curve(k_total: float, params: PhysicalParams) -> float:
    """Area of a neuron of total degree k under the symmetric split
    (in-degree = out-degree = k/2), module routing template."""
    if k_total < 1:
        raise InvalidArgumentError("k_total must be at least 1")
    half = k_total / 2.0
    wc = column_width(_DELTA_TEMPLATE_ROWS, params)
    hr = row_height(_DELTA_TEMPLATE_N, params)
    routing = (wc * half / _DELTA_TEMPLATE_N) * (hr * half / _DELTA_TEMPLATE_N)
    h_n = 2.0 * params.l_spd
    w_lane = params.w_wg + params.g_wg
    w_fixed = 1.5 * (
        params.l_tap + params.l_sine + params.l_demux + params.l_ipc + params.r_bend
    )
    return (routing + h_n * (half * w_lane + w_fixed)) / params.plane_pairs


def symmetric_node_areas(graph: SpatialGraph, params: PhysicalParams) -> np.ndarray:
    """Per-node areas under the symmetric-degree model, for the A_n(k) fit.

    Pricing each neuron at its own total degree with in = out = k/2 makes
    the area-degree relation a clean power law; the asymmetric exact areas
    (in-degree hubs are not out-degree hubs, so their quadratic routing
    term rarely activates) fit far shallower (see the decisions ledger).
    """
    kt = graph.total_degree()
    return np.array([node_area_curve(float(max(k, 1)), params) for k in kt])


def area_curve_fit(
    params: PhysicalParams, k_lo: float, k_hi: float, n_points: int = 50
) -> tuple[float, float]:
    """(coefficient, exponent) power-law fit of the symmetric node-area
    curve, sampled on a log grid over total degree [k_lo, k_hi]. This is
    the A_n(k) that the scaling integral consumes."""
    if not (0 < k_lo < k_hi):
        raise InvalidArgumentError("need 0 < k_lo < k_hi")
    if k_hi / k_lo < 10.0:
        raise FitFailureError("need at least one decade of degree spread")
    ks = np.logspace(np.log10(k_lo), np.log10(k_hi), n_points)
    areas = np.array([node_area_curve(float(k), params) for k in ks])
    slope, intercept = np.polyfit(np.log10(ks), np.log10(areas), 1)
    return float(10**intercept), float(slope)


# -- routing layout -----------------------------------------------------------


@dataclass
class Segment:
    plane: str  # ns | ew
    x0: float
    y0: float
    x1: float
    y1: float
    kind: str  # trunk | branch | coupler | tap | spd
    source: int = -1  # emitting node, for highlight styling; not in the CSV


@dataclass
class RoutingLayout:
    segments: list
    svg: str
    grid: tuple


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def emit_routing_layout(
    graph: SpatialGraph, params: PhysicalParams, highlight: int | None = None
) -> RoutingLayout:
    """Deterministic row-column routing plan for a single-sector graph.

    Sources are processed center-out (squared grid distance, ties by id).
    Each source with targets gets a west exit lead (trunk, ew plane), a
    north and/or south trunk in its column corridor reaching every target
    row's branch lane, a coupler mark at each trunk-to-branch transition,
    east/west branches along each such lane, a tap drop per target, and an
    spd mark at the target. Lanes pack outward: the i-th waveguide
    claiming a column or row corridor sits i lane pitches from the axis.

    Segment counts follow from the adjacency alone: per source, 1 exit
    lead + 1 trunk per used direction (a branch lane sits just south of
    its row, so same-row targets pull a south stub); per (source, row
    with targets), 1 coupler + 1 branch per side holding targets; per
    edge, 1 tap + 1 spd. Lane offsets wrap once a corridor's slots are
    full, so a lane never drifts past the half-pitch midline and the
    north/south split stays a pure function of the row indices.
    """
    if graph.hierarchy.n_levels != 1:
        raise InvalidArgumentError("routing layout expects a single-sector graph")
    rows, cols = graph.hierarchy.levels[0]
    n = graph.n_nodes
    a = tap_pitch(params)
    lane = a + params.g_wg
    k_in_max = int(graph.in_degree().max()) if n else 0
    pitch_x = column_width(rows, params) + neuron_footprint(k_in_max, params)[1]
    pitch_y = 2.0 * params.l_spd + cols * lane + 2.0 * params.r_bend
    x_slots = max(1, int((pitch_x / 2.0 - params.r_bend) / lane))
    y_slots = max(1, int((pitch_y / 2.0 - params.r_bend) / lane))
    xs = (np.arange(n) % cols) * pitch_x
    ys = (np.arange(n) // cols) * pitch_y
    order = np.lexsort(
        (np.arange(n), (xs - xs.mean()) ** 2 + (ys - ys.mean()) ** 2)
    )
    out = graph.out_adjacency()
    col_lanes = {}
    row_lanes = {}
    segments: list[Segment] = []

    for s in order:
        s = int(s)
        targets = out.indices[out.indptr[s] : out.indptr[s + 1]]
        if len(targets) == 0:
            continue
        sx, sy = float(xs[s]), float(ys[s])
        col = s % cols
        off = (col_lanes.get(col, 0) % x_slots) * lane
        col_lanes[col] = col_lanes.get(col, 0) + 1
        trunk_x = sx - params.r_bend - off
        segments.append(Segment("ew", sx, sy, trunk_x, sy, "trunk", s))
        branch_rows = []
        for r in sorted(set(int(t) // cols for t in targets)):
            roff = (row_lanes.get(r, 0) % y_slots) * lane
            row_lanes[r] = row_lanes.get(r, 0) + 1
            branch_rows.append((r, r * pitch_y - params.r_bend - roff))
        lane_ys = [ly for _, ly in branch_rows]
        north = [ly for ly in lane_ys if ly > sy]
        south = [ly for ly in lane_ys if ly <= sy]
        if north:
            segments.append(Segment("ns", trunk_x, sy, trunk_x, max(north), "trunk", s))
        if south:
            segments.append(Segment("ns", trunk_x, sy, trunk_x, min(south), "trunk", s))
        for r, by in branch_rows:
            in_row = [int(t) for t in targets if int(t) // cols == r]
            t_xs = [float(xs[t]) for t in in_row]
            east = [x for x in t_xs if x > trunk_x]
            west = [x for x in t_xs if x <= trunk_x]
            segments.append(Segment("ns", trunk_x, by, trunk_x, by, "coupler", s))
            if east:
                segments.append(Segment("ew", trunk_x, by, max(east), by, "branch", s))
            if west:
                segments.append(Segment("ew", trunk_x, by, min(west), by, "branch", s))
            for t in in_row:
                tx, ty = float(xs[t]), float(ys[t])
                segments.append(Segment("ew", tx, by, tx, ty, "tap", s))
                segments.append(Segment("ew", tx, ty, tx, ty, "spd", s))

    svg = _layout_svg(segments, xs, ys, highlight, graph, params)
    return RoutingLayout(segments=segments, svg=svg, grid=(rows, cols))


def _layout_svg(
    segments, xs, ys, highlight, graph: SpatialGraph, params: PhysicalParams
) -> str:
    scale = 1e6  # meters to microns
    pad = 50.0
    w = (xs.max() - xs.min()) * scale + 2 * pad if len(xs) else 2 * pad
    h = (ys.max() - ys.min()) * scale + 2 * pad if len(ys) else 2 * pad
    colors = {"trunk": "#2266aa", "branch": "#22aa66", "tap": "#999999",
              "coupler": "#cc8800", "spd": "#555555"}
    hi_targets = set()
    if highlight is not None:
        o = graph.out_adjacency()
        hi_targets = set(int(t) for t in o.indices[o.indptr[highlight]: o.indptr[highlight + 1]])
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        '<g stroke-linecap="round">',
    ]
    ymax = ys.max() * scale if len(ys) else 0.0
    for seg in segments:
        hot = highlight is not None and seg.source == highlight
        if highlight is not None and not hot:
            continue  # highlight mode shows one node's out-tree alone
        x0, y0 = seg.x0 * scale + pad, ymax - seg.y0 * scale + pad
        x1, y1 = seg.x1 * scale + pad, ymax - seg.y1 * scale + pad
        color = "#dd3333" if hot else colors[seg.kind]
        if seg.kind == "coupler":
            lines.append(
                f'<path d="M {_fmt(x0 - 2)} {_fmt(y0)} l 2 -3 l 2 3 z M {_fmt(x0 - 2)} '
                f'{_fmt(y0 + 1)} l 2 3 l 2 -3 z" fill="{color}" stroke="none"/>'
            )
        elif seg.kind == "spd":
            lines.append(
                f'<rect x="{_fmt(x0 - 1.5)}" y="{_fmt(y0 - 1.5)}" width="3" height="3" '
                f'fill="{color}"/>'
            )
        else:
            width = "1.6" if hot else "0.8"
            lines.append(
                f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                f'stroke="{color}" stroke-width="{width}"/>'
            )
    for i in range(len(xs)):
        cx, cy = xs[i] * scale + pad, ymax - ys[i] * scale + pad
        fill = "#dd3333" if (highlight is not None and (i == highlight or i in hi_targets)) else "#333333"
        lines.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3" fill="{fill}"/>')
    lines.append("</g></svg>")
    return "\n".join(lines) + "\n"


def segments_to_csv(segments) -> str:
    rows = ["plane,x0,y0,x1,y1,kind"]
    for s in segments:
        rows.append(f"{s.plane},{s.x0!r},{s.y0!r},{s.x1!r},{s.y1!r},{s.kind}")
    return "\n".join(rows) + "\n"


# -- feed-forward ----------------------------------------------------------


@dataclass
class FeedForwardReport:
    max_distance: float  # m
    loss_db: float
    layer_width: float  # m
    layer_height: float  # m


def feedforward_metrics(
    neurons_per_layer: int,
    params: PhysicalParams,
    loss_rate_db_per_cm: float = 0.2,
) -> FeedForwardReport:
    """Worst-case row-column distance between two adjacent all-to-all layers.

    Neurons of a layer sit abreast, each sized to terminate n inputs, so
    the layer width is n * w_neuron(n). The inter-layer corridor carries
    one ribbon lane per source at the row pitch. The worst path runs from
    the bottom of one layer across the full width, through the corridor,
    to the top of the next layer; loss is the flat propagation rate times
    that distance.
    """
    n = int(neurons_per_layer)
    if n < 1:
        raise InvalidArgumentError("need at least 1 neuron per layer")
    h_n, w_n = neuron_footprint(n, params)
    width = n * w_n
    corridor = n * (tap_pitch(params) + params.n_spd * (params.w_wg + params.g_wg))
    height = 2.0 * h_n + corridor
    distance = width + corridor + 2.0 * h_n
    loss = loss_rate_db_per_cm * distance * 100.0
    return FeedForwardReport(distance, loss, width, height)
