"""Bounds and flooding simulation for minimum energy per bit in wireless multicast.

Node labels in the public API are 1-based; node 1 is the source.
"""

__version__ = "0.1.0"

from .errors import PreconditionError
from .flood import FloodParams, FloodTrace, coverage_fraction, simulate_flood
from .pathloss import PathLossModel, gain
from .radius import (BoundReport, effective_radius, lower_bound_ebn0,
                     tightened_lower_bound, total_gain_from)
from .topology import (CellGrid, Network, RegularSpec, WindowOccupancy, cell_grid,
                       generate_dense, generate_extended, generate_regular,
                       load_network, pair_distance, save_network, window_occupancy)

__all__ = [
    "BoundReport", "CellGrid", "FloodParams", "FloodTrace", "Network", "PathLossModel",
    "PreconditionError", "RegularSpec", "WindowOccupancy", "cell_grid",
    "coverage_fraction", "effective_radius", "gain", "generate_dense",
    "generate_extended", "generate_regular", "load_network", "lower_bound_ebn0",
    "pair_distance", "save_network", "simulate_flood", "tightened_lower_bound",
    "total_gain_from", "window_occupancy",
]
