"""Directed spatial graphs with nested grid hierarchy.

Nodes live on an integer grid (units of the minimum node spacing) and carry
a hierarchy address: position within sector, sector within region, region
within module, for as many levels as the spec defines. Node ids nest
block-major, so every hierarchy cell covers a contiguous id range.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np


class InvalidSpecError(ValueError):
    pass


class InvalidArgumentError(ValueError):
    pass


@dataclass(frozen=True)
class HierarchySpec:
    """Grid dimensions per level, innermost first.

    levels[0] is the sector grid (neurons), levels[1] the region grid
    (sectors), levels[2] the module grid (regions), and so on.
    """

    levels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.levels:
            raise InvalidSpecError("hierarchy needs at least one level")
        lv = tuple((int(r), int(c)) for r, c in self.levels)
        for r, c in lv:
            if r < 1 or c < 1:
                raise InvalidSpecError(f"level dimensions must be positive, got {(r, c)}")
        object.__setattr__(self, "levels", lv)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_nodes(self) -> int:
        n = 1
        for r, c in self.levels:
            n *= r * c
        return n

    def block_size(self, level: int) -> int:
        """Nodes contained in one cell at `level` (level 0 cell = 1 sector)."""
        n = 1
        for r, c in self.levels[: level + 1]:
            n *= r * c
        return n

    def cell_count(self, level: int) -> int:
        return self.n_nodes // self.block_size(level)

    def pitch(self, level: int) -> int:
        """Grid distance between origins of adjacent cells at `level`."""
        p = 1
        for r, c in self.levels[:level]:
            # cells are square in the paper configuration; use column count
            # for x pitch and row count for y pitch via pitch_xy if needed
            p *= c
        return p

    def pitch_xy(self, level: int) -> tuple[int, int]:
        px = py = 1
        for r, c in self.levels[:level]:
            px *= c
            py *= r
        return px, py


def positions_for_hierarchy(spec: HierarchySpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-node (x, y) grid positions and hierarchy addresses.

    Returns (positions, addresses): positions is (N, 2) int64 with neighbors
    inside a sector exactly 1 apart; addresses is (N, n_levels) int64 where
    column L is the node's cell index at level L (row-major within that
    level's grid).
    """
    n = spec.n_nodes
    ids = np.arange(n, dtype=np.int64)
    addresses = np.empty((n, spec.n_levels), dtype=np.int64)
    rem = ids
    for lv in range(spec.n_levels):
        r, c = spec.levels[lv]
        cells = r * c
        addresses[:, lv] = rem % cells
        rem = rem // cells
    x = np.zeros(n, dtype=np.int64)
    y = np.zeros(n, dtype=np.int64)
    for lv in range(spec.n_levels):
        r, c = spec.levels[lv]
        px, py = spec.pitch_xy(lv)
        x += (addresses[:, lv] % c) * px
        y += (addresses[:, lv] // c) * py
    return np.stack([x, y], axis=1), addresses


class SpatialGraph:
    """Immutable binary directed graph with positions and hierarchy.

    Edges are kept as a lexicographically sorted (E, 2) array with no
    duplicates and no self loops; in/out adjacency is built lazily.
    """

    def __init__(self, hierarchy: HierarchySpec, edges: np.ndarray):
        self.hierarchy = hierarchy
        self.n_nodes = hierarchy.n_nodes
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if e.min() < 0 or e.max() >= self.n_nodes:
                raise InvalidArgumentError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise InvalidArgumentError("self loops are not allowed")
            e = np.unique(e, axis=0)
        self.edges = e
        self.positions, self.addresses = positions_for_hierarchy(hierarchy)
        self._csr = None
        self._csc = None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def out_adjacency(self):
        """CSR boolean adjacency, rows = sources."""
        if self._csr is None:
            from scipy.sparse import csr_matrix

            n = self.n_nodes
            data = np.ones(len(self.edges), dtype=np.int8)
            self._csr = csr_matrix(
                (data, (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)
            )
        return self._csr

    def in_adjacency(self):
        if self._csc is None:
            self._csc = self.out_adjacency().tocsc()
        return self._csc

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.n_nodes).astype(np.int64)

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n_nodes).astype(np.int64)

    def total_degree(self) -> np.ndarray:
        return self.in_degree() + self.out_degree()

    # -- hierarchy helpers ------------------------------------------------

    def cell_of(self, level: int) -> np.ndarray:
        """Flat cell index at `level` for every node (contiguous id blocks)."""
        return np.arange(self.n_nodes, dtype=np.int64) // self.hierarchy.block_size(level)

    def subgraph(self, level: int, cell_index: int) -> "SpatialGraph":
        """Induced subgraph on one hierarchy cell; internal edges only."""
        if level < 0 or level >= self.hierarchy.n_levels:
            raise InvalidArgumentError(f"no hierarchy level {level}")
        bs = self.hierarchy.block_size(level)
        n_cells = self.n_nodes // bs
        if cell_index < 0 or cell_index >= n_cells:
            raise InvalidArgumentError(f"cell {cell_index} out of range for level {level}")
        lo = cell_index * bs
        hi = lo + bs
        e = self.edges
        keep = (e[:, 0] >= lo) & (e[:, 0] < hi) & (e[:, 1] >= lo) & (e[:, 1] < hi)
        sub = HierarchySpec(self.hierarchy.levels[: level + 1])
        return SpatialGraph(sub, e[keep] - lo)

    # -- serialization ----------------------------------------------------

    def to_json_doc(self) -> str:
        doc = {
            "n_nodes": int(self.n_nodes),
            "hierarchy": [[int(r), int(c)] for r, c in self.hierarchy.levels],
            "positions": self.positions.tolist(),
            "edges": self.edges.tolist(),
        }
        return json.dumps(doc, separators=(",", ":")) + "\n"

    @classmethod
    def from_json_doc(cls, text: str) -> "SpatialGraph":
        doc = json.loads(text)
        spec = HierarchySpec(tuple((r, c) for r, c in doc["hierarchy"]))
        if spec.n_nodes != doc["n_nodes"]:
            raise InvalidArgumentError("node count does not match hierarchy")
        g = cls(spec, np.array(doc["edges"], dtype=np.int64).reshape(-1, 2))
        pos = np.array(doc["positions"], dtype=np.int64)
        if pos.shape != g.positions.shape or not np.array_equal(pos, g.positions):
            raise InvalidArgumentError("positions do not match hierarchy layout")
        return g

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["src", "dst"])
        for s, d in self.edges:
            w.writerow([int(s), int(d)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, hierarchy: HierarchySpec) -> "SpatialGraph":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["src", "dst"]:
            raise InvalidArgumentError("expected header 'src,dst'")
        e = np.array([[int(a), int(b)] for a, b in rows[1:]], dtype=np.int64)
        return cls(hierarchy, e.reshape(-1, 2))


def tile_along_diagonal(block: SpatialGraph, grid) -> SpatialGraph:
    """Block-diagonal tiling of `block` over a cell grid.

    `grid` is (rows, cols) of the new outer level, or an integer n meaning
    (1, n). Copy c holds nodes [c*n_block, (c+1)*n_block); edge (i, j)
    exists in copy c iff (i, j) is an edge of the block.
    """
    if isinstance(grid, int):
        if grid < 1:
            raise InvalidArgumentError("need at least one copy")
        grid = (1, grid)
    rows, cols = int(grid[0]), int(grid[1])
    if rows < 1 or cols < 1:
        raise InvalidArgumentError("need at least one copy")
    copies = rows * cols
    nb = block.n_nodes
    spec = HierarchySpec(block.hierarchy.levels + ((rows, cols),))
    offs = (np.arange(copies, dtype=np.int64) * nb)[:, None, None]
    e = (block.edges[None, :, :] + offs).reshape(-1, 2)
    return SpatialGraph(spec, e)


@dataclass
class DegreeSummary:
    in_degree: np.ndarray
    out_degree: np.ndarray
    total_degree: np.ndarray = field(init=False)

    def __post_init__(self):
        self.total_degree = self.in_degree + self.out_degree

    @classmethod
    def of(cls, graph: SpatialGraph) -> "DegreeSummary":
        return cls(graph.in_degree(), graph.out_degree())

    def histogram(self, which: str = "total") -> np.ndarray:
        deg = getattr(self, f"{which}_degree")
        return np.bincount(deg)
