"""Photonic geometry, exact area model, scaling fits, layout, feed-forward."""

import dataclasses
from collections import Counter

import numpy as np
import pytest

from growthnet.graph_core import HierarchySpec, InvalidArgumentError, SpatialGraph
from growthnet.metrics import FitFailureError
from growthnet.physical_layout import (
    PhysicalParams,
    anchored_area_law,
    area_curve_fit,
    area_fit,
    column_width,
    delta_degree_area,
    delta_degree_capacity,
    emit_routing_layout,
    feedforward_metrics,
    network_area_exact,
    network_area_scaling,
    neuron_footprint,
    node_area_curve,
    row_height,
    segments_to_csv,
    symmetric_node_areas,
    tap_pitch,
)
from growthnet.scaling_laws import (
    DegreeLawParams,
    max_degree,
    normalization,
    power_integral,
)

P = PhysicalParams()
UM = 1e-6


def _all_to_all(rows, cols):
    n = rows * cols
    e = [(i, j) for i in range(n) for j in range(n) if i != j]
    return SpatialGraph(HierarchySpec(((rows, cols),)), np.array(e))


class TestGeometry:
    def test_tap_pitch(self):
        # 0.5 + 0.5 + 1 + (0.5 + 4)/2 microns
        assert tap_pitch(P) == pytest.approx(4.25 * UM)

    def test_column_width(self):
        # 2 n (a + g_wg) + 2 r_bend = 10.5 n + 4 microns
        assert column_width(9, P) == pytest.approx(98.5 * UM)
        assert column_width(45, P) == pytest.approx(476.5 * UM)
        assert column_width(90, P) == pytest.approx(949.0 * UM)

    def test_row_height(self):
        # n (a + 3 * 1.5) + 4 = 8.75 n + 4 microns
        assert row_height(81, P) == pytest.approx(712.75 * UM)
        assert row_height(2025, P) == pytest.approx(17722.75 * UM)
        assert row_height(8100, P) == pytest.approx(70879.0 * UM)

    def test_neuron_footprint(self):
        h, w = neuron_footprint(0, P)
        assert h == pytest.approx(20 * UM)
        assert w == pytest.approx(73.5 * UM)  # 1.5 * (5+1+5+36+2)
        assert neuron_footprint(100, P)[1] == pytest.approx(223.5 * UM)

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            column_width(0, P)
        with pytest.raises(InvalidArgumentError):
            row_height(0, P)
        with pytest.raises(InvalidArgumentError):
            neuron_footprint(-1, P)
        with pytest.raises(InvalidArgumentError):
            PhysicalParams(w_wg=0.0)
        with pytest.raises(InvalidArgumentError):
            PhysicalParams(nitride_factor=0.5)


class TestExactArea:
    def _toy(self):
        # 8 nodes in two 4-node cells; 4 within-cell edges, 2 cross
        spec = HierarchySpec(((2, 2), (1, 2)))
        edges = np.array([[0, 1], [1, 0], [1, 2], [0, 4], [5, 2], [4, 1]])
        return SpatialGraph(spec, edges)

    def test_spreadsheet_oracle(self):
        # by hand, 2 plane pairs so each level gets exactly one:
        #   footprints: k_in = (1,2,2,0,1,0,0,0) -> 20*(1.5k+73.5) each,
        #     total 11940 um^2
        #   level 0: wc(2)=25, hr(4)=39; only nodes 0 (1 in, 1 out) and
        #     1 (1 in, 2 out) have both degrees: 25*39/16 * (1 + 2) = 182.8125
        #   level 1 (nitride x2): wc(2)=25, hr(8)=74; only node 4 has both:
        #     2 * 25*74/64 = 57.8125
        rep = network_area_exact(self._toy(), PhysicalParams(plane_pairs=2))
        assert rep.footprint_total == pytest.approx(11940e-12, rel=1e-12, abs=0.0)
        assert rep.per_level_routing[0] == pytest.approx(182.8125e-12, rel=1e-12, abs=0.0)
        assert rep.per_level_routing[1] == pytest.approx(57.8125e-12, rel=1e-12, abs=0.0)
        assert rep.total == pytest.approx(12180.625e-12, rel=1e-12, abs=0.0)
        assert rep.per_node[4] == pytest.approx(1557.8125e-12, rel=1e-12, abs=0.0)
        assert rep.per_node[1] == pytest.approx(1651.875e-12, rel=1e-12, abs=0.0)

    def test_total_is_sum_of_parts(self):
        rep = network_area_exact(self._toy(), PhysicalParams(plane_pairs=2))
        assert rep.total == pytest.approx(rep.per_node.sum(), rel=1e-15, abs=0.0)
        assert rep.total == pytest.approx(
            rep.footprint_total + sum(rep.per_level_routing), rel=1e-12, abs=0.0)
        assert rep.area_exponent is None  # degree spread under one decade

    def test_quadratic_length_scaling(self):
        base = network_area_exact(self._toy(), PhysicalParams(plane_pairs=2))
        scaled_fields = {
            f.name: getattr(P, f.name) * 3.0
            for f in dataclasses.fields(P)
            if isinstance(getattr(P, f.name), float) and f.name != "nitride_factor"
        }
        big = network_area_exact(
            self._toy(), PhysicalParams(plane_pairs=2, **scaled_fields))
        assert big.total == pytest.approx(9.0 * base.total, rel=1e-12, abs=0.0)

    def test_plane_pairs_divide_area(self):
        one = network_area_exact(self._toy(), PhysicalParams(plane_pairs=2))
        three = network_area_exact(self._toy(), PhysicalParams(plane_pairs=6))
        assert one.total == pytest.approx(3.0 * three.total, rel=1e-12, abs=0.0)

    def test_rejects_long_range_dominated_graphs(self):
        spec = HierarchySpec(((2, 2), (1, 2)))
        g = SpatialGraph(spec, np.array([[0, 4], [1, 5]]))
        with pytest.raises(InvalidArgumentError, match="long-range"):
            network_area_exact(g, P)

    def test_rejects_flat_hierarchy(self):
        with pytest.raises(InvalidArgumentError):
            network_area_exact(_all_to_all(2, 2), P)


class TestAreaFit:
    def test_recovers_synthetic_exponent(self):
        ks = np.unique(np.round(np.logspace(1, 3, 200)).astype(int))
        areas = 3e-9 * ks.astype(float) ** 1.4
        assert area_fit(areas, ks) == pytest.approx(1.4, abs=0.02)

    def test_needs_population_and_spread(self):
        with pytest.raises(FitFailureError):
            area_fit(np.full(5, 1e-9), np.arange(1, 6) * 100)
        with pytest.raises(FitFailureError):
            area_fit(np.full(50, 1e-9), np.linspace(100, 500, 50))


class TestAnchoredLaw:
    def test_reproduces_anchor_exactly(self):
        total, n, exp = 5e-5, 8100, 1.4
        coeff = anchored_area_law(total, n, exp)
        k_max = max_degree(1.6, 10.0, n)
        b = normalization(1.6, 10.0, k_max)
        back = n * coeff * b * power_integral(exp - 1.6, 10.0, k_max)
        assert back == pytest.approx(total, rel=1e-12, abs=0.0)

    def test_scaling_consumes_the_anchor(self):
        total, n, exp = 5e-5, 8100, 1.4
        coeff = anchored_area_law(total, n, exp)
        k_max = max_degree(1.6, 10.0, n)
        law = DegreeLawParams(1.6, 10.0, k_max, n)
        got = network_area_scaling(n, law, coeff, exp, 3, calibration_pairs=3)
        assert got == pytest.approx(total, rel=1e-12, abs=0.0)

    def test_k_min_insensitivity(self):
        # the anchor cancels the law normalization
        c10 = anchored_area_law(5e-5, 8100, 1.4, k_min=10.0)
        a10 = network_area_scaling(
            1e6, DegreeLawParams(1.6, 10.0, max_degree(1.6, 10.0, 1e6), 1e6),
            c10, 1.4, 3)
        c17 = anchored_area_law(5e-5, 8100, 1.4, k_min=17.0)
        a17 = network_area_scaling(
            1e6, DegreeLawParams(1.6, 17.0, max_degree(1.6, 17.0, 1e6), 1e6),
            c17, 1.4, 3)
        assert a17 == pytest.approx(a10, rel=0.25, abs=0.0)

    def test_rejects_empty_anchor(self):
        with pytest.raises(InvalidArgumentError):
            anchored_area_law(0.0, 8100, 1.4)


class TestScalingAndDelta:
    def test_degenerate_bracket_is_delta_distribution(self):
        law = DegreeLawParams(1.6, 300.0, 300.0, 5000)
        got = network_area_scaling(5000, law, 2e-11, 1.3, 3, calibration_pairs=3)
        assert got == pytest.approx(5000 * 2e-11 * 300.0**1.3, rel=1e-12, abs=0.0)

    def test_extra_plane_pairs_divide_linearly(self):
        law = DegreeLawParams(1.6, 10.0, 500.0, 8100)
        a3 = network_area_scaling(8100, law, 2e-11, 1.3, 3)
        a9 = network_area_scaling(8100, law, 2e-11, 1.3, 9)
        assert a3 == pytest.approx(3.0 * a9, rel=1e-12, abs=0.0)

    def test_delta_area_hand_value(self):
        # routing (949*300/8100)*(70879*300/8100) + footprint 20*523.5,
        # all in um^2, over 3 plane pairs
        wc, hr = 949e-6, 70879e-6
        hand = ((wc * 300 / 8100) * (hr * 300 / 8100) + 20e-6 * 523.5e-6) / 3
        assert delta_degree_area(300.0, P) == pytest.approx(hand, rel=1e-12, abs=0.0)

    def test_reference_capacities(self):
        # ~3000 uniform-degree-300 neurons per cm^2 die at 3 pairs;
        # ~40,000 degree-4000 neurons per 300 mm wafer at 9 pairs
        die = delta_degree_capacity(300.0, 1e-4, P)
        assert die == pytest.approx(2920.0, abs=1.0)
        wafer = delta_degree_capacity(
            4000.0, np.pi * 0.15**2, PhysicalParams(plane_pairs=9))
        assert wafer == pytest.approx(38498.0, abs=2.0)
        assert 1500 < die < 6000 and 20000 < wafer < 80000

    def test_symmetric_curve_matches_manual_split(self):
        # in = out = k/2 on the module routing template
        k = 200.0
        wc, hr = column_width(90, P), row_height(8100, P)
        routing = (wc * 100 / 8100) * (hr * 100 / 8100)
        foot = 20e-6 * (100 * 1.5e-6 + 73.5e-6)
        assert node_area_curve(k, P) == pytest.approx((routing + foot) / 3, rel=1e-12, abs=0.0)

    def test_symmetric_node_areas_floor_degree_one(self):
        g = SpatialGraph(HierarchySpec(((1, 3),)), np.array([[0, 1], [1, 2]]))
        areas = symmetric_node_areas(g, P)
        # isolated-ish node 0 has total degree 1; nothing degenerates
        assert (areas > 0).all()
        assert areas[0] == pytest.approx(node_area_curve(1.0, P))

    def test_curve_fit_summarizes_curve(self):
        # the curve mixes a linear footprint with quadratic routing, so the
        # exponent must land strictly between those regimes and the fit can
        # sag a few tens of percent at midrange
        coeff, exp = area_curve_fit(P, 30.0, 1500.0)
        assert 1.0 < exp < 2.0
        for k in (30.0, 300.0, 1500.0):
            assert coeff * k**exp == pytest.approx(node_area_curve(k, P), rel=0.5, abs=0.0)
        with pytest.raises(FitFailureError):
            area_curve_fit(P, 100.0, 500.0)


class TestRoutingLayout:
    def test_all_to_all_segment_census(self):
        # 25 exit leads; south trunks always (own-row lane sits south),
        # north trunks except from the top row: 25 + 45 ns+ew trunks.
        # One coupler per (source, row) = 125. Branches: 10 per source
        # except west-edge (no west, 5) and east-edge (own row has no
        # east target, 9): 3*5*10 + 25 + 45 = 220. One tap and one spd
        # per edge = 600 each.
        lay = emit_routing_layout(_all_to_all(5, 5), P)
        counts = Counter(s.kind for s in lay.segments)
        assert counts == {
            "trunk": 70, "coupler": 125, "branch": 220, "tap": 600, "spd": 600}
        assert len(lay.segments) == 1615

    def test_interior_source_shape(self):
        lay = emit_routing_layout(_all_to_all(5, 5), P)
        center = Counter(s.kind for s in lay.segments if s.source == 12)
        assert center == {"trunk": 3, "coupler": 5, "branch": 10, "tap": 24, "spd": 24}
        trunks = [s for s in lay.segments if s.source == 12 and s.kind == "trunk"]
        assert Counter(s.plane for s in trunks) == {"ew": 1, "ns": 2}

    def test_empty_and_single_node(self):
        g = SpatialGraph(HierarchySpec(((1, 1),)), np.empty((0, 2), dtype=np.int64))
        lay = emit_routing_layout(g, P)
        assert lay.segments == [] and lay.grid == (1, 1)

    def test_sparse_graph_renders_only_present_paths(self):
        g = SpatialGraph(HierarchySpec(((2, 2),)), np.array([[0, 3]]))
        counts = Counter(s.kind for s in emit_routing_layout(g, P).segments)
        assert counts == {"trunk": 2, "coupler": 1, "branch": 1, "tap": 1, "spd": 1}

    def test_svg_deterministic_and_highlight(self):
        g = _all_to_all(3, 3)
        a = emit_routing_layout(g, P)
        b = emit_routing_layout(g, P)
        assert a.svg == b.svg
        hl = emit_routing_layout(g, P, highlight=4)
        assert hl.svg != a.svg and "#dd3333" in hl.svg

    def test_segments_csv_shape(self):
        lay = emit_routing_layout(_all_to_all(2, 2), P)
        text = segments_to_csv(lay.segments)
        lines = text.strip().split("\n")
        assert lines[0] == "plane,x0,y0,x1,y1,kind"
        assert len(lines) == 1 + len(lay.segments)

    def test_rejects_multilevel_graph(self):
        spec = HierarchySpec(((2, 2), (1, 2)))
        g = SpatialGraph(spec, np.array([[0, 1]]))
        with pytest.raises(InvalidArgumentError):
            emit_routing_layout(g, P)


class TestFeedForward:
    def test_thousand_neuron_layer(self):
        rep = feedforward_metrics(1000, P)
        assert rep.layer_width == pytest.approx(1.5735, rel=1e-12, abs=0.0)
        assert rep.layer_height == pytest.approx(8.79e-3, rel=1e-12, abs=0.0)
        assert rep.max_distance == pytest.approx(1.58229, rel=1e-9, abs=0.0)
        assert rep.loss_db == pytest.approx(31.6458, rel=1e-9, abs=0.0)
        # the corridor crossing stays within a couple-of-meters assembly
        assert 1.0 < rep.max_distance < 2.5

    def test_single_neuron_is_fixed_overheads(self):
        rep = feedforward_metrics(1, P)
        assert rep.layer_width == pytest.approx(75e-6)
        assert rep.max_distance == pytest.approx((75 + 8.75 + 40) * UM)

    def test_loss_linear_in_rate_and_distance(self):
        base = feedforward_metrics(500, P)
        double = feedforward_metrics(500, P, loss_rate_db_per_cm=0.4)
        assert double.loss_db == pytest.approx(2.0 * base.loss_db)
        assert base.loss_db == pytest.approx(0.2 * base.max_distance * 100.0)

    def test_rejects_empty_layer(self):
        with pytest.raises(InvalidArgumentError):
            feedforward_metrics(0, P)
