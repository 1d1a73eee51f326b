"""Command-line pipelines: generate networks, measure them, and evaluate
the photonic area, power, and signal-pool models from one config file.

Artifacts are deterministic for a fixed config and seed list: graphs
serialize in sorted edge order, every CSV has a header row and a fixed
column order, floats are written with 17 significant digits, and the
manifest records a sha256 digest per artifact. Re-running a command with
the same config and seeds must reproduce identical digests.

Subcommands: generate, analyze, area, power, pool, sweep, reproduce-paper.
Shared flags: --config PATH (TOML file or the name of a shipped profile),
--seed N (repeatable, overrides the config seed list), --out DIR,
--generator {growth,partial,random}, --format {json,csv,svg}.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python 3.10
    import tomli as tomllib

from . import __version__
from .graph_core import (
    HierarchySpec,
    InvalidArgumentError,
    InvalidSpecError,
    SpatialGraph,
)
from .growth_gen import (
    GenerationReport,
    GrowthParams,
    generate_growth,
    generate_partial_growth,
    generate_random,
)
from .metrics import (
    FitFailureError,
    UndefinedResultError,
    measure,
    small_world_index,
)
from .physical_layout import (
    PhysicalParams,
    anchored_area_law,
    area_curve_fit,
    area_fit,
    delta_degree_capacity,
    emit_routing_layout,
    feedforward_metrics,
    network_area_exact,
    network_area_scaling,
    segments_to_csv,
    symmetric_node_areas,
)
from .power_model import (
    PowerParams,
    mean_frequency,
    mean_k,
    network_power,
    unit_energy,
)
from .scaling_laws import (
    DegreeLawParams,
    PoolParams,
    max_degree,
    mean_degree,
    pool_area,
    pool_count_ratio,
    pool_diameter,
    total_edges,
)

GENERATORS = ("growth", "partial", "random")
SWEEPS = ("fig5a", "fig5b", "fig5c", "fig7", "fig14")
FORMATS = ("json", "csv", "svg")


class CliError(Exception):
    """User-facing failure; main() prints it and exits nonzero."""


# -- config -------------------------------------------------------------------


@dataclass(frozen=True)
class AreaOptions:
    law_gamma: float = 1.6
    law_k_min: float = 10.0
    capacity_plane_pairs: int = 9
    die_area_m2: float = 1e-4
    wafer_diameter_m: float = 0.3
    delta_k0: tuple = (300.0, 4000.0)
    delta_plane_pairs: tuple = (3, 9)
    delta_target: tuple = ("die", "wafer")

    def __post_init__(self):
        if self.law_gamma <= 1.0 or self.law_k_min < 1.0:
            raise InvalidArgumentError("need law_gamma > 1 and law_k_min >= 1")
        if self.capacity_plane_pairs < 1:
            raise InvalidArgumentError("capacity_plane_pairs must be at least 1")
        if self.die_area_m2 <= 0 or self.wafer_diameter_m <= 0:
            raise InvalidArgumentError("target areas must be positive")
        if not (len(self.delta_k0) == len(self.delta_plane_pairs) == len(self.delta_target)):
            raise InvalidArgumentError("delta_* lists must have equal length")
        for t in self.delta_target:
            if t not in ("die", "wafer"):
                raise InvalidArgumentError(f"delta_target entries must be die|wafer, got {t!r}")

    @property
    def wafer_area_m2(self) -> float:
        return math.pi * (self.wafer_diameter_m / 2.0) ** 2


@dataclass(frozen=True)
class PoolOptions:
    soen: PoolParams = PoolParams(v=3e8, f=1e6, w=2.7e-4)
    brain: PoolParams = PoolParams(v=2.0, f=10.0, w=2.4e-6)
    fiber_velocity: float = 2e8

    def __post_init__(self):
        if self.fiber_velocity <= 0:
            raise InvalidArgumentError("fiber_velocity must be positive")


@dataclass
class RunConfig:
    hierarchy: HierarchySpec
    growth: GrowthParams
    physical: PhysicalParams
    power: PowerParams
    power_n_tot: float
    pool: PoolOptions
    area: AreaOptions
    random_edges: int
    seeds: tuple
    generators: tuple
    out: str
    fmt: str

    def resolved_dict(self) -> dict:
        d = {
            "run": {
                "seeds": list(self.seeds),
                "generators": list(self.generators),
                "out": self.out,
                "format": self.fmt,
            },
            "hierarchy": {"levels": [list(l) for l in self.hierarchy.levels]},
            "growth": dataclasses.asdict(self.growth),
            "random": {"n_edges": self.random_edges},
            "physical": dataclasses.asdict(self.physical),
            "area": dataclasses.asdict(self.area),
            "power": dataclasses.asdict(self.power),
            "pool": dataclasses.asdict(self.pool),
        }
        d["power"]["n_tot"] = self.power_n_tot
        d["growth"].pop("seed")  # seeds come from [run], never from [growth]
        d["growth"]["n_win_per_level"] = list(self.growth.n_win_per_level)
        d["area"]["delta_k0"] = list(self.area.delta_k0)
        d["area"]["delta_plane_pairs"] = list(self.area.delta_plane_pairs)
        d["area"]["delta_target"] = list(self.area.delta_target)
        return d

    def config_hash(self) -> str:
        d = self.resolved_dict()
        d["run"].pop("out")  # destination is not part of the experiment identity
        return hashlib.sha256(dumps17(d).encode()).hexdigest()


_GROWTH_KEYS = {f.name for f in dataclasses.fields(GrowthParams)} - {"seed"}
_PHYSICAL_KEYS = {f.name for f in dataclasses.fields(PhysicalParams)}
# h and phi0 live in the constants table; they are not config knobs
_POWER_KEYS = ({f.name for f in dataclasses.fields(PowerParams)} - {"planck_h", "phi0"}) | {"n_tot"}
_AREA_KEYS = {f.name for f in dataclasses.fields(AreaOptions)}
_SCHEMA = {
    "run": {"seeds", "generators", "out", "format"},
    "hierarchy": {"levels"},
    "growth": _GROWTH_KEYS,
    "random": {"n_edges"},
    "physical": _PHYSICAL_KEYS,
    "area": _AREA_KEYS,
    "power": _POWER_KEYS,
    "pool": {"soen", "brain", "fiber_velocity"},
}


def _check_keys(doc: dict) -> None:
    for section, body in doc.items():
        if section not in _SCHEMA:
            raise CliError(f"unknown config key: {section}")
        if not isinstance(body, dict):
            raise CliError(f"config section [{section}] must be a table")
        for key in body:
            if key not in _SCHEMA[section]:
                raise CliError(f"unknown config key: {section}.{key}")
    for sub in ("soen", "brain"):
        table = doc.get("pool", {}).get(sub, {})
        for key in table:
            if key not in {"v", "f", "w"}:
                raise CliError(f"unknown config key: pool.{sub}.{key}")


def _find_config(name: str) -> bytes:
    p = Path(name)
    if p.is_file():
        return p.read_bytes()
    prof = resources.files("growthnet").joinpath("profiles", f"{name}.toml")
    if prof.is_file():
        return prof.read_bytes()
    raise CliError(f"config not found: {name} (no such file and no shipped profile)")


def load_config(args: argparse.Namespace) -> RunConfig:
    doc: dict = {}
    if args.config:
        try:
            doc = tomllib.loads(_find_config(args.config).decode())
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise CliError(f"cannot parse {args.config}: {exc}") from exc
    _check_keys(doc)

    def sect(name: str) -> dict:
        return dict(doc.get(name, {}))

    try:
        hierarchy = HierarchySpec(
            tuple(tuple(int(x) for x in lv) for lv in sect("hierarchy").get("levels", [[9, 9], [5, 5], [2, 2]]))
        )
        g = sect("growth")
        if "n_win_per_level" in g:
            g["n_win_per_level"] = tuple(int(x) for x in g["n_win_per_level"])
        growth = GrowthParams(**g)
        physical = PhysicalParams(**sect("physical"))
        pw = sect("power")
        power_n_tot = float(pw.pop("n_tot", hierarchy.n_nodes))
        power = PowerParams(**pw)
        a = sect("area")
        for key in ("delta_k0", "delta_plane_pairs", "delta_target"):
            if key in a:
                a[key] = tuple(a[key])
        area = AreaOptions(**a)
        pl = sect("pool")
        pool = PoolOptions(
            soen=PoolParams(**pl["soen"]) if "soen" in pl else PoolOptions().soen,
            brain=PoolParams(**pl["brain"]) if "brain" in pl else PoolOptions().brain,
            fiber_velocity=float(pl.get("fiber_velocity", 2e8)),
        )
        random_edges = int(sect("random").get("n_edges", 330430))
    except (TypeError, ValueError) as exc:
        # TypeError carries the offending keyword for bad field names
        raise CliError(f"invalid config: {exc}") from exc

    run = sect("run")
    seeds = tuple(int(s) for s in (args.seed or run.get("seeds", [1])))
    if not seeds:
        raise CliError("invalid config: run.seeds is empty")
    generators = tuple(run.get("generators", list(GENERATORS)))
    for gen in generators:
        if gen not in GENERATORS:
            raise CliError(f"invalid config: run.generators entry {gen!r}")
    if args.generator:
        generators = (args.generator,)
    out = args.out or run.get("out", "runs/growthnet")
    fmt = args.fmt or run.get("format", "json")
    if fmt not in FORMATS:
        raise CliError(f"invalid config: run.format {fmt!r}")
    if random_edges < 0:
        raise CliError("invalid config: random.n_edges must be non-negative")
    return RunConfig(
        hierarchy=hierarchy,
        growth=growth,
        physical=physical,
        power=power,
        power_n_tot=power_n_tot,
        pool=pool,
        area=area,
        random_edges=random_edges,
        seeds=seeds,
        generators=generators,
        out=out,
        fmt=fmt,
    )


# -- serialization helpers ----------------------------------------------------


def f17(x: float) -> str:
    """Floats at 17 significant digits, the round-trip-exact width."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise CliError("non-finite number in artifact")
        return format(x, ".17g")
    return str(x)


def dumps17(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps17(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        return "[" + ", ".join(dumps17(v, indent) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return f17(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise CliError(f"cannot serialize {type(obj).__name__}")


def csv_text(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, (float, np.floating)):
                cells.append(f17(float(v)))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


class ArtifactWriter:
    """Writes artifacts under the run directory and tracks their digests."""

    def __init__(self, out: str):
        self.out = Path(out)
        self.digests: dict = {}

    def emit(self, relpath: str, text: str) -> Path:
        path = self.out / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        data = text.encode()
        path.write_bytes(data)
        self.digests[relpath] = hashlib.sha256(data).hexdigest()
        return path

    def write_manifest(self, cfg: RunConfig) -> None:
        mpath = self.out / "manifest.json"
        artifacts = {}
        if mpath.is_file():
            try:
                artifacts = json.loads(mpath.read_text()).get("artifacts", {})
            except json.JSONDecodeError:
                artifacts = {}
        artifacts.update(self.digests)
        doc = {
            "tool_version": __version__,
            "config_hash": cfg.config_hash(),
            "seeds": list(cfg.seeds),
            "artifacts": {k: artifacts[k] for k in sorted(artifacts)},
        }
        mpath.parent.mkdir(parents=True, exist_ok=True)
        mpath.write_text(dumps17(doc) + "\n")


# -- graph plumbing -----------------------------------------------------------


def _graph_relpath(gen: str, seed: int) -> str:
    return f"graphs/{gen}_seed{seed}.json"


def _build_graph(cfg: RunConfig, gen: str, seed: int) -> SpatialGraph:
    need = cfg.hierarchy.n_levels - 1
    if gen in ("growth", "partial") and len(cfg.growth.n_win_per_level) < need:
        raise CliError(
            f"invalid config: growth.n_win_per_level needs {need} entries "
            f"for {cfg.hierarchy.n_levels} hierarchy levels"
        )
    params = dataclasses.replace(cfg.growth, seed=seed)
    if gen == "growth":
        return generate_growth(cfg.hierarchy, params)
    if gen == "partial":
        return generate_partial_growth(cfg.hierarchy, params)
    return generate_random(cfg.hierarchy.n_nodes, cfg.random_edges, seed, cfg.hierarchy)


def _load_graph(cfg: RunConfig, gen: str, seed: int, cache: dict) -> SpatialGraph:
    key = (gen, seed)
    if key not in cache:
        path = Path(cfg.out) / _graph_relpath(gen, seed)
        if not path.is_file():
            raise CliError(f"missing graph file {path}; run generate first")
        try:
            cache[key] = SpatialGraph.from_json_doc(path.read_text())
        except (OSError, json.JSONDecodeError, KeyError, InvalidArgumentError, InvalidSpecError) as exc:
            raise CliError(f"cannot read {path}: {exc}") from exc
    return cache[key]


# -- commands -----------------------------------------------------------------


def do_generate(cfg: RunConfig, w: ArtifactWriter, cache: dict) -> None:
    for gen in cfg.generators:
        for seed in cfg.seeds:
            graph = _build_graph(cfg, gen, seed)
            cache[(gen, seed)] = graph
            w.emit(_graph_relpath(gen, seed), graph.to_json_doc())
            if cfg.fmt == "csv":
                w.emit(f"graphs/{gen}_seed{seed}.csv", graph.to_csv())
            rep = GenerationReport.of(graph)
            w.emit(
                f"reports/{gen}_seed{seed}_generation.json",
                dumps17(
                    {
                        "network": gen,
                        "seed": seed,
                        "n_nodes": graph.n_nodes,
                        "edges_created": rep.edges_created,
                        "reciprocal_edges": rep.reciprocal_edges,
                        "per_level_edges": list(rep.per_level_edges),
                    }
                )
                + "\n",
            )
            print(f"generate {gen} seed {seed}: {graph.n_edges} edges")
    if cfg.fmt == "svg":
        if cfg.hierarchy.n_levels != 1:
            raise CliError(
                "routing layout needs a single-level hierarchy; "
                f"got {cfg.hierarchy.n_levels} levels (use --format json or csv)"
            )
        for gen in cfg.generators:
            for seed in cfg.seeds:
                layout = emit_routing_layout(cache[(gen, seed)], cfg.physical)
                w.emit(f"layouts/{gen}_seed{seed}.svg", layout.svg)
                w.emit(f"layouts/{gen}_seed{seed}_segments.csv", segments_to_csv(layout.segments))


def _mean_sd(vals: list) -> tuple:
    xs = [v for v in vals if v is not None]
    if not xs:
        return None, None
    if len(xs) == 1:
        return float(xs[0]), None
    return float(np.mean(xs)), float(np.std(xs, ddof=1))


def _degree_histogram(all_degrees: list, n_bins: int = 40) -> list:
    pooled = np.concatenate(all_degrees)
    pooled = pooled[pooled > 0]
    if len(pooled) == 0:
        return []
    edges = np.unique(
        np.round(np.logspace(0, np.log10(pooled.max() + 1), n_bins)).astype(np.int64)
    )
    counts, _ = np.histogram(pooled, bins=edges)
    rows = []
    for i in range(len(counts)):
        if counts[i] == 0:
            continue
        width = edges[i + 1] - edges[i]
        center = math.sqrt(edges[i] * edges[i + 1])
        rows.append((int(edges[i]), int(edges[i + 1]), center, counts[i] / (len(pooled) * width)))
    return rows


def do_analyze(cfg: RunConfig, w: ArtifactWriter, cache: dict) -> dict:
    reports: dict = {}
    for gen in cfg.generators:
        for seed in cfg.seeds:
            graph = _load_graph(cfg, gen, seed, cache)
            reports[(gen, seed)] = measure(graph)
    for seed in cfg.seeds:
        base = reports.get(("random", seed))
        if base is None:
            continue
        for gen in ("growth", "partial"):
            rep = reports.get((gen, seed))
            if rep is not None:
                try:
                    rep.swi = small_world_index(rep, base)
                except UndefinedResultError:
                    rep.swi = None

    row_header = None
    rows = []
    for gen in cfg.generators:
        for seed in cfg.seeds:
            rep = reports[(gen, seed)]
            graph = cache[(gen, seed)]
            row = {"network": gen, "seed": seed, "n_nodes": graph.n_nodes, "n_edges": graph.n_edges}
            row.update(rep.to_row())
            if row_header is None:
                row_header = list(row)
            rows.append([row.get(k) for k in row_header])
            doc = dict(row)
            doc["census"] = list(rep.census)
            doc["census_table"] = list(rep.census_table)
            w.emit(f"metrics/{gen}_seed{seed}.json", dumps17(doc) + "\n")
    w.emit("metrics/metrics_rows.csv", csv_text(row_header, rows))

    table_header = [
        "network", "n_seeds", "cc_mean", "cc_sd", "apl_mean", "apl_sd",
        "swi_mean", "swi_sd", "edges_mean", "edges_sd", "degree_max_mean",
        "gamma_in_mean", "gamma_out_mean",
    ]
    table_rows = []
    summary: dict = {}
    for gen in cfg.generators:
        reps = [reports[(gen, s)] for s in cfg.seeds]
        cc = _mean_sd([r.mean_clustering for r in reps])
        apl = _mean_sd([r.apl for r in reps if math.isfinite(r.apl)])
        swi = _mean_sd([r.swi for r in reps])
        edges = _mean_sd([float(cache[(gen, s)].n_edges) for s in cfg.seeds])
        dmax = _mean_sd([float(r.degree_max) for r in reps])
        gin = _mean_sd([r.in_fit.gamma for r in reps if r.in_fit])
        gout = _mean_sd([r.out_fit.gamma for r in reps if r.out_fit])
        table_rows.append([
            gen, len(cfg.seeds), cc[0], cc[1], apl[0], apl[1], swi[0], swi[1],
            edges[0], edges[1], dmax[0], gin[0], gout[0],
        ])
        summary[gen] = {
            "cc": cc, "apl": apl, "swi": swi, "edges": edges,
            "degree_max": dmax, "gamma_in": gin, "gamma_out": gout,
            "census_table": [
                _mean_sd([r.census_table[i] for r in reps])[0]
                for i in range(cfg.hierarchy.n_levels)
            ],
        }
    w.emit("metrics/table1.csv", csv_text(table_header, table_rows))

    for gen in cfg.generators:
        for which, pick in (("in", "in_degree"), ("out", "out_degree")):
            degs = [getattr(cache[(gen, s)], pick)() for s in cfg.seeds]
            hist = _degree_histogram(degs)
            w.emit(
                f"figures/fig2_degree_hist_{which}_{gen}.csv",
                csv_text(["k_lo", "k_hi", "k_center", "density"], hist),
            )

    # single-instance matrix figures use the first seed as representative
    seed0 = cfg.seeds[0]
    for gen in cfg.generators:
        graph = cache[(gen, seed0)]
        adj = [(int(d), int(s)) for s, d in graph.edges]
        w.emit(f"figures/fig6_adjacency_{gen}_seed{seed0}.csv", csv_text(["x", "y"], adj))
        pos = graph.positions
        for which, degs in (("in", graph.in_degree()), ("out", graph.out_degree())):
            rows = [
                (int(pos[i, 0]), int(pos[i, 1]), math.log10(degs[i]))
                for i in range(graph.n_nodes)
                if degs[i] > 0
            ]
            w.emit(
                f"figures/fig8_degree_{which}_{gen}_seed{seed0}.csv",
                csv_text(["x", "y", "log10_degree"], rows),
            )
    return summary


def _capacity(target_area: float, pairs: int, coeff: float, exponent: float,
              gamma: float, k_min: float) -> float:
    """Largest N whose scaled network area fits target_area."""
    lo, hi = 10.0, 1e12
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        law = DegreeLawParams(gamma, k_min, max_degree(gamma, k_min, mid), mid)
        a = network_area_scaling(mid, law, coeff, exponent, plane_pairs=pairs)
        if a < target_area:
            lo = mid
        else:
            hi = mid
    return lo


def do_area(cfg: RunConfig, w: ArtifactWriter, cache: dict) -> dict:
    gen = cfg.generators[0] if len(cfg.generators) == 1 else "growth"
    totals, exponents, reports = [], [], []
    for seed in cfg.seeds:
        graph = _load_graph(cfg, gen, seed, cache)
        rep = network_area_exact(graph, cfg.physical)
        reports.append(rep)
        totals.append(rep.total)
        try:
            exponents.append(
                area_fit(symmetric_node_areas(graph, cfg.physical), graph.total_degree())
            )
        except FitFailureError:
            exponents.append(None)
    n_nodes = cache[(gen, cfg.seeds[0])].n_nodes
    total_mean, total_sd = _mean_sd(totals)
    exp_mean, _ = _mean_sd(exponents)
    ao = cfg.area
    # the scaling extrapolation needs the fit; without it the exact model
    # and the uniform-degree capacities still stand
    coeff = wafer_cap = die_cap = None
    if exp_mean is not None:
        coeff = anchored_area_law(total_mean, n_nodes, exp_mean, ao.law_gamma, ao.law_k_min)
        wafer_cap = _capacity(ao.wafer_area_m2, ao.capacity_plane_pairs, coeff, exp_mean,
                              ao.law_gamma, ao.law_k_min)
        die_cap = _capacity(ao.die_area_m2, cfg.physical.plane_pairs, coeff, exp_mean,
                            ao.law_gamma, ao.law_k_min)
    deltas = []
    for k0, pairs, target in zip(ao.delta_k0, ao.delta_plane_pairs, ao.delta_target):
        area = ao.die_area_m2 if target == "die" else ao.wafer_area_m2
        p = dataclasses.replace(cfg.physical, plane_pairs=pairs)
        deltas.append({
            "k0": k0, "plane_pairs": pairs, "target": target,
            "target_area_m2": area, "capacity": delta_degree_capacity(k0, area, p),
        })
    ff = feedforward_metrics(1000, cfg.physical)
    summary = {
        "network": gen,
        "n_nodes": n_nodes,
        "plane_pairs": cfg.physical.plane_pairs,
        "total_m2_mean": total_mean,
        "total_m2_sd": total_sd,
        "total_cm2_mean": total_mean * 1e4,
        "per_level_routing_m2_mean": [
            float(np.mean([r.per_level_routing[i] for r in reports]))
            for i in range(cfg.hierarchy.n_levels)
        ],
        "footprint_m2_mean": float(np.mean([r.footprint_total for r in reports])),
        "area_exponent": exp_mean,
        "area_coeff": coeff,
        "law_gamma": ao.law_gamma,
        "law_k_min": ao.law_k_min,
        "wafer_capacity": {"plane_pairs": ao.capacity_plane_pairs,
                           "area_m2": ao.wafer_area_m2, "n_tot": wafer_cap},
        "die_capacity": {"plane_pairs": cfg.physical.plane_pairs,
                         "area_m2": ao.die_area_m2, "n_tot": die_cap},
        "delta_degree": deltas,
        "feedforward_1000": {
            "max_distance_m": ff.max_distance,
            "loss_db": ff.loss_db,
            "layer_width_m": ff.layer_width,
            "layer_height_m": ff.layer_height,
        },
    }
    w.emit("area/area_summary.json", dumps17(summary) + "\n")
    w.emit(
        "area/area_per_seed.csv",
        csv_text(
            ["network", "seed", "total_m2", "fit_exponent"],
            [[gen, s, t, e] for s, t, e in zip(cfg.seeds, totals, exponents)],
        ),
    )
    if cfg.fmt == "svg":
        graph = cache[(gen, cfg.seeds[0])]
        sector = graph.subgraph(0, 0) if cfg.hierarchy.n_levels > 1 else graph
        layout = emit_routing_layout(sector, cfg.physical)
        w.emit(f"area/layout_sector0_{gen}_seed{cfg.seeds[0]}.svg", layout.svg)
        w.emit(
            f"area/layout_sector0_{gen}_seed{cfg.seeds[0]}_segments.csv",
            segments_to_csv(layout.segments),
        )
    fit_note = (
        f"fit exponent {exp_mean:.3f}, wafer capacity {wafer_cap:.3e}"
        if exp_mean is not None
        else "fit unavailable (degree spread under one decade)"
    )
    print(
        f"area {gen}: {total_mean * 1e4:.3f} cm^2 at {cfg.physical.plane_pairs} pairs, "
        + fit_note
    )
    return summary


def _area_law_constants(cfg: RunConfig) -> tuple:
    """(coeff, exponent) for density columns: the anchored values from a
    prior area stage when present, else the closed-form curve fit."""
    path = Path(cfg.out) / "area/area_summary.json"
    if path.is_file():
        try:
            doc = json.loads(path.read_text())
            return float(doc["area_coeff"]), float(doc["area_exponent"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            pass
    return area_curve_fit(cfg.physical, 2.0 * cfg.power.k_min, 2.0 * cfg.power.k_max)


def do_power(cfg: RunConfig, w: ArtifactWriter) -> dict:
    p = cfg.power
    e0, photonic, fluxonic = unit_energy(p)
    p_n = network_power(cfg.power_n_tot, p)
    coeff, exponent = _area_law_constants(cfg)
    ao = cfg.area
    rows = []
    last = None
    for n in np.logspace(2, 7, 26):
        law = DegreeLawParams(ao.law_gamma, ao.law_k_min,
                              max_degree(ao.law_gamma, ao.law_k_min, n), n)
        area = network_area_scaling(n, law, coeff, exponent,
                                    plane_pairs=cfg.physical.plane_pairs)
        power = network_power(n, p)
        density = power / area
        if last is not None and density >= last:
            raise CliError("power density failed to decrease along the size sweep")
        last = density
        rows.append([n, p.gamma, p.mu, power, density])
    w.emit("power/power_sweep.csv", csv_text(["n_tot", "gamma", "mu", "p_n_w", "p_density_w_m2"], rows))
    summary = {
        "unit_energy_j": e0,
        "photonic_term_j": photonic,
        "fluxonic_term_j": fluxonic,
        "mean_degree": mean_k(p),
        "mean_frequency_hz": mean_frequency(p),
        "n_tot": cfg.power_n_tot,
        "network_power_w": p_n,
        "gamma": p.gamma,
        "mu": p.mu,
        "k_range": [p.k_min, p.k_max],
        "f_range_hz": [p.f_min, p.f_max],
    }
    w.emit("power/power_summary.json", dumps17(summary) + "\n")
    print(f"power: E0 {e0:.4e} J, P_N({cfg.power_n_tot:.0f}) {p_n * 1e6:.3f} uW")
    return summary


def do_pool(cfg: RunConfig, w: ArtifactWriter) -> dict:
    pl = cfg.pool
    summary = {
        "soen": dataclasses.asdict(pl.soen),
        "brain": dataclasses.asdict(pl.brain),
        "pool_diameter_m": pool_diameter(pl.soen.v, pl.soen.f),
        "pool_area_m2": pool_area(pl.soen.v, pl.soen.f),
        "pool_area_1mhz_m2": pool_area(pl.soen.v, 1e6),
        "count_ratio": pool_count_ratio(pl.soen, pl.brain),
        "fiber_velocity": pl.fiber_velocity,
        "fiber_area_1mhz_m2": pool_area(pl.fiber_velocity, 1e6),
    }
    w.emit("pool/pool_summary.json", dumps17(summary) + "\n")
    print(
        f"pool: area(1 MHz) {summary['pool_area_1mhz_m2']:.3e} m^2, "
        f"count ratio {summary['count_ratio']:.3e}"
    )
    return summary


def _sweep_fig5a(cfg: RunConfig, w: ArtifactWriter) -> None:
    coeff, exponent = _area_law_constants(cfg)
    ao = cfg.area
    rows, drows = [], []
    for pairs in (cfg.physical.plane_pairs, ao.capacity_plane_pairs):
        last_area, last_density = None, None
        for n in np.logspace(3, 7, 33):
            law = DegreeLawParams(ao.law_gamma, ao.law_k_min,
                                  max_degree(ao.law_gamma, ao.law_k_min, n), n)
            area = network_area_scaling(n, law, coeff, exponent, plane_pairs=pairs)
            density = network_power(n, cfg.power) / area
            if last_area is not None and area <= last_area:
                raise CliError("network area failed to grow along the size sweep")
            if last_density is not None and density >= last_density:
                raise CliError("power density failed to decrease along the size sweep")
            last_area, last_density = area, density
            rows.append([n, area, f"pairs-{pairs}"])
            drows.append([n, density, f"pairs-{pairs}"])
    w.emit("sweeps/fig5a.csv", csv_text(["x", "y", "label"], rows))
    w.emit("sweeps/fig5a_density.csv", csv_text(["x", "y", "label"], drows))


def _sweep_fig5b(cfg: RunConfig, w: ArtifactWriter) -> None:
    ao = cfg.area
    rows = []
    for pairs, target, area in (
        (cfg.physical.plane_pairs, "die", ao.die_area_m2),
        (ao.capacity_plane_pairs, "wafer", ao.wafer_area_m2),
    ):
        p = dataclasses.replace(cfg.physical, plane_pairs=pairs)
        for k0 in np.logspace(1, 4, 31):
            rows.append([k0, delta_degree_capacity(k0, area, p), f"{target}-{pairs}pairs"])
    w.emit("sweeps/fig5b.csv", csv_text(["x", "y", "label"], rows))


def _sweep_fig5c(cfg: RunConfig, w: ArtifactWriter) -> None:
    rows = []
    for v, label in ((cfg.pool.soen.v, "vacuum"), (cfg.pool.fiber_velocity, "fiber")):
        for f in np.logspace(0, 8, 33):
            rows.append([f, pool_area(v, f), label])
    w.emit("sweeps/fig5c.csv", csv_text(["x", "y", "label"], rows))


def _sweep_fig7(cfg: RunConfig, w: ArtifactWriter, cache: dict) -> None:
    rows = []
    full = cfg.hierarchy.n_levels
    for k in range(1, full + 1):
        spec = HierarchySpec(cfg.hierarchy.levels[:k])
        edges, dmax, dmean = [], [], []
        for seed in cfg.seeds:
            if k == full and ("growth", seed) in cache:
                g = cache[("growth", seed)]
            else:
                params = dataclasses.replace(
                    cfg.growth, seed=seed,
                    n_win_per_level=cfg.growth.n_win_per_level[: k - 1],
                )
                g = generate_growth(spec, params)
            edges.append(g.n_edges)
            kt = g.total_degree()
            dmax.append(int(kt.max()))
            dmean.append(float(kt.mean()))
        n = spec.n_nodes
        rows.append([n, float(np.mean(edges)), "edges-measured"])
        rows.append([n, float(np.mean(dmax)), "max-degree-measured"])
        rows.append([n, float(np.mean(dmean)), "mean-degree-measured"])
    ao = cfg.area
    for n in np.logspace(np.log10(81), 7, 25):
        km = max_degree(ao.law_gamma, ao.law_k_min, n)
        law = DegreeLawParams(ao.law_gamma, ao.law_k_min, km, n)
        rows.append([n, total_edges(law), "edges-law"])
        rows.append([n, km, "max-degree-law"])
        rows.append([n, mean_degree(law), "mean-degree-law"])
    w.emit("sweeps/fig7.csv", csv_text(["x", "y", "label"], rows))


def _sweep_fig14(cfg: RunConfig, w: ArtifactWriter) -> None:
    rows = []
    for eta in np.logspace(-6, -1, 26):
        p = dataclasses.replace(cfg.power, eta=float(eta))
        _, photonic, fluxonic = unit_energy(p)
        rows.append([float(eta), photonic, fluxonic])
    w.emit("sweeps/fig14.csv", csv_text(["eta", "photonic_j", "fluxonic_j"], rows))


def do_sweep(cfg: RunConfig, w: ArtifactWriter, cache: dict, names: list) -> None:
    wanted = list(SWEEPS) if "all" in names else names
    for name in wanted:
        if name == "fig5a":
            _sweep_fig5a(cfg, w)
        elif name == "fig5b":
            _sweep_fig5b(cfg, w)
        elif name == "fig5c":
            _sweep_fig5c(cfg, w)
        elif name == "fig7":
            _sweep_fig7(cfg, w, cache)
        elif name == "fig14":
            _sweep_fig14(cfg, w)
        print(f"sweep {name}: written")


def _fmt_pm(pair: tuple, scale: float = 1.0, digits: int = 4) -> str:
    mean, sd = pair
    if mean is None:
        return "n/a"
    if sd is None:
        return f"{mean * scale:.{digits}g}"
    return f"{mean * scale:.{digits}g} +/- {sd * scale:.{digits}g}"


def do_reproduce(cfg: RunConfig, w: ArtifactWriter, cache: dict) -> None:
    do_generate(cfg, w, cache)
    summary = do_analyze(cfg, w, cache)
    area = do_area(cfg, w, cache)
    power = do_power(cfg, w)
    pool = do_pool(cfg, w)
    do_sweep(cfg, w, cache, ["all"])
    lines = ["", "network comparison (mean +/- sd over seeds)"]
    for gen in cfg.generators:
        s = summary[gen]
        lines.append(
            f"  {gen:<8} cc {_fmt_pm(s['cc'])}  apl {_fmt_pm(s['apl'])}  "
            f"swi {_fmt_pm(s['swi'])}  edges {_fmt_pm(s['edges'], digits=6)}"
        )
    scale_note = (
        f"fit exponent {area['area_exponent']:.3f}; "
        f"wafer capacity {area['wafer_capacity']['n_tot']:.3e} at "
        f"{area['wafer_capacity']['plane_pairs']} pairs"
        if area["area_exponent"] is not None
        else "scaling fit unavailable"
    )
    lines += [
        "",
        f"area: {area['total_cm2_mean']:.3f} cm^2 exact at {area['plane_pairs']} pairs; "
        + scale_note,
        f"power: E0 {power['unit_energy_j']:.4e} J; "
        f"P_N({power['n_tot']:.0f}) {power['network_power_w'] * 1e6:.3f} uW",
        f"pool: 1 MHz area {pool['pool_area_1mhz_m2']:.3e} m^2; "
        f"count ratio {pool['count_ratio']:.3e}",
    ]
    print("\n".join(lines))


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthnet",
        description="hierarchical growth networks and their hardware cost models",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "generate": "build graphs for each generator and seed",
        "analyze": "measure generated graphs and emit table/figure data",
        "area": "exact and scaled routing-area model (needs generated graphs)",
        "power": "firing energy and network power model",
        "pool": "light-speed signal-pool model",
        "sweep": "figure-data sweeps",
        "reproduce-paper": "full pipeline: generate, analyze, area, power, pool, sweeps",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, help=h)
        sp.add_argument("--config", metavar="PATH", help="TOML config file or shipped profile name")
        sp.add_argument("--seed", metavar="N", action="append", type=int,
                        help="seed (repeatable; overrides config)")
        sp.add_argument("--out", metavar="DIR", help="output directory")
        sp.add_argument("--generator", choices=GENERATORS, help="restrict to one generator")
        sp.add_argument("--format", dest="fmt", choices=FORMATS,
                        help="artifact format where applicable")
        if name == "sweep":
            sp.add_argument("names", nargs="+", choices=SWEEPS + ("all",), help="sweep names")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        w = ArtifactWriter(cfg.out)
        cache: dict = {}
        if args.command == "generate":
            do_generate(cfg, w, cache)
        elif args.command == "analyze":
            do_analyze(cfg, w, cache)
        elif args.command == "area":
            do_area(cfg, w, cache)
        elif args.command == "power":
            do_power(cfg, w)
        elif args.command == "pool":
            do_pool(cfg, w)
        elif args.command == "sweep":
            do_sweep(cfg, w, cache, args.names)
        else:
            do_reproduce(cfg, w, cache)
        w.write_manifest(cfg)
    except (CliError, InvalidArgumentError, InvalidSpecError, FitFailureError,
            UndefinedResultError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
