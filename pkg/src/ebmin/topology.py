"""Network realizations: dense/extended random placements, regular grids,
and the cell/window occupancy statistics computed on them.

Node labels are 1-based (node 1 is the source); coordinate arrays are
0-based, so node ``i`` lives in row ``i - 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PreconditionError

CLASS_TAGS = ("dense", "extended", "regular")
PLACEMENT_POLICIES = ("center", "uniformInWindow", "cornerAdversarial")

# slack for points computed exactly on a window edge
_EDGE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Network:
    nodes: np.ndarray
    area_side: float
    class_tag: str

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise PreconditionError("nodes must be an (k, 2) array")
        if nodes.shape[0] < 2:
            raise PreconditionError("a network needs at least 2 nodes")
        if self.class_tag not in CLASS_TAGS:
            raise PreconditionError(f"unknown class tag {self.class_tag!r}")
        if not self.area_side > 0:
            raise PreconditionError("area side must be positive")
        tol = _EDGE_TOL * self.area_side
        if nodes.min() < -tol or nodes.max() > self.area_side + tol:
            raise PreconditionError("node coordinates fall outside the area")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def k(self) -> int:
        return self.nodes.shape[0]

    @property
    def area(self) -> float:
        return self.area_side**2

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.class_tag == other.class_tag
            and self.area_side == other.area_side
            and np.array_equal(self.nodes, other.nodes)
        )

    def scaled(self, c: float) -> "Network":
        return Network(self.nodes * c, self.area_side * c, self.class_tag)

    def to_dict(self) -> dict:
        return {
            "class": self.class_tag,
            "areaSide": self.area_side,
            "nodes": self.nodes.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Network":
        try:
            return cls(np.asarray(data["nodes"], dtype=float),
                       float(data["areaSide"]), str(data["class"]))
        except KeyError as exc:
            raise KeyError(f"network file is missing key {exc}") from None


def save_network(network: Network, path) -> None:
    Path(path).write_text(json.dumps(network.to_dict()) + "\n")


def load_network(path) -> Network:
    return Network.from_dict(json.loads(Path(path).read_text()))


def _uniform_with_source(k: int, side: float, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    nodes = np.zeros((k, 2))
    nodes[1:] = rng.uniform(0.0, side, size=(k - 1, 2))
    return nodes


def generate_dense(k: int, area: float, seed) -> Network:
    """Source at the origin plus ``k - 1`` uniform nodes on a square of area ``area``."""
    if k < 2 or not area > 0:
        raise PreconditionError("dense network needs k >= 2 and positive area")
    side = math.sqrt(area)
    return Network(_uniform_with_source(k, side, seed), side, "dense")


def validate_dense_sequence(a: float, b: float) -> bool:
    """Whether ``A_k = a k / (ln k)**b`` grows strictly slower than ``k / ln k``."""
    if not a > 0:
        raise PreconditionError("area-rule coefficient must be positive")
    return b > 1


def dense_area(k: int, a: float = 1.0, b: float = 2.0) -> float:
    return a * k / math.log(k) ** b


def generate_extended(k: int, lam: float, seed) -> Network:
    """Constant-density placement: area grows as ``k / lam``."""
    if k < 2 or not lam > 0:
        raise PreconditionError("extended network needs k >= 2 and lam > 0")
    side = math.sqrt(k / lam)
    return Network(_uniform_with_source(k, side, seed), side, "extended")


@dataclass(frozen=True)
class RegularSpec:
    k: int
    s: float
    beta: float
    policy: str = "center"

    def __post_init__(self):
        if self.k < 4 or math.isqrt(self.k) ** 2 != self.k:
            raise PreconditionError(f"regular networks need a square k >= 4, got {self.k}")
        if not self.s > 0:
            raise PreconditionError("cell side must be positive")
        if not 0 <= self.beta < 1:
            raise PreconditionError("beta must lie in [0, 1)")
        if self.policy not in PLACEMENT_POLICIES:
            raise PreconditionError(f"unknown placement policy {self.policy!r}")

    @property
    def side_cells(self) -> int:
        return math.isqrt(self.k)


def generate_regular(spec: RegularSpec, seed=None) -> Network:
    """One node per cell, inside the cell's centered window of side ``beta * s``.

    Nodes are ordered row by row from cell C(0, 0), which holds the source.
    """
    n, s, beta = spec.side_cells, spec.s, spec.beta
    iy, ix = np.divmod(np.arange(spec.k), n)
    corner = np.column_stack([ix, iy]) * s
    half = beta * s / 2
    if spec.policy == "center":
        offset = np.full((spec.k, 2), s / 2)
    elif spec.policy == "cornerAdversarial":
        offset = np.full((spec.k, 2), s / 2 + half)
    else:
        rng = np.random.default_rng(seed)
        offset = s / 2 + rng.uniform(-half, half, size=(spec.k, 2))
    return Network(corner + offset, n * s, "regular")


def infer_beta(network: Network, side_cells: int) -> float:
    """Smallest window fraction consistent with a regular network's placement."""
    s = network.area_side / side_cells
    u = np.mod(network.nodes, s) / s
    return float(min(2 * np.abs(u - 0.5).max(), 1.0))


def pair_distance(network: Network, i: int, j: int) -> float:
    k = network.k
    if not (1 <= i <= k and 1 <= j <= k):
        raise IndexError(f"node labels must lie in 1..{k}")
    d = network.nodes[i - 1] - network.nodes[j - 1]
    return float(math.hypot(d[0], d[1]))


def grid_dim(area_side: float, s: float) -> int:
    """Cells per side; ``s`` must tile the area side exactly."""
    if not s > 0:
        raise PreconditionError("cell side must be positive")
    ratio = area_side / s
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(ratio, 1.0):
        raise PreconditionError(
            f"cell side {s} does not divide area side {area_side} (ratio {ratio})"
        )
    return n


def divisor_cell_side(area_side: float, s_max: float) -> float:
    """Largest cell side not exceeding ``s_max`` that tiles ``area_side``."""
    return area_side / math.ceil(area_side / s_max - 1e-12)


def _cell_indices(network: Network, s: float, n: int) -> np.ndarray:
    idx = np.floor(network.nodes / s).astype(np.int64)
    return np.clip(idx, 0, n - 1)


@dataclass(frozen=True)
class CellGrid:
    cell_side: float
    counts: np.ndarray  # counts[ix, iy]

    @property
    def dim(self) -> int:
        return self.counts.shape[0]


def cell_grid(network: Network, s: float) -> CellGrid:
    """Node counts per cell, cells half-open ``[x, x+s)`` except on the top/right edge."""
    n = grid_dim(network.area_side, s)
    idx = _cell_indices(network, s, n)
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (idx[:, 0], idx[:, 1]), 1)
    return CellGrid(s, counts)


@dataclass(frozen=True)
class WindowOccupancy:
    inside: np.ndarray
    outside: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.inside + self.outside


def in_window_mask(network: Network, s: float, beta: float) -> np.ndarray:
    n = grid_dim(network.area_side, s)
    idx = _cell_indices(network, s, n)
    offset = network.nodes - (idx + 0.5) * s
    return np.all(np.abs(offset) <= beta * s / 2 + _EDGE_TOL * s, axis=1)


def window_occupancy(network: Network, s: float, beta: float) -> WindowOccupancy:
    """Per-cell counts inside and outside the centered window (window edge is inside)."""
    if not 0 <= beta <= 1:
        raise PreconditionError("beta must lie in [0, 1]")
    n = grid_dim(network.area_side, s)
    idx = _cell_indices(network, s, n)
    inside_mask = in_window_mask(network, s, beta)
    inside = np.zeros((n, n), dtype=np.int64)
    outside = np.zeros((n, n), dtype=np.int64)
    np.add.at(inside, (idx[inside_mask, 0], idx[inside_mask, 1]), 1)
    np.add.at(outside, (idx[~inside_mask, 0], idx[~inside_mask, 1]), 1)
    return WindowOccupancy(inside, outside)
