"""Placement events behind the random-network results, their analytic
probability bounds, and Monte-Carlo checks of those bounds.

Per-trial randomness comes from ``trial_seed(master, t)``: the first 64-bit
state word of the numpy ``SeedSequence`` with entropy ``master`` and spawn
key ``(t,)`` (the ``t``-th child of ``SeedSequence(master).spawn``). Trials
can therefore run in any order or in parallel and still reproduce exactly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import PreconditionError
from .topology import (Network, cell_grid, generate_dense, window_occupancy)

EVENT_KINDS = ("denseGood", "extendedGood", "noEmptyCell")


def trial_seed(master_seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(x) for x in key))
    return int(ss.generate_state(1, np.uint64)[0])


# ------------------------------------------------------------ dense

def dense_occupancy_window(k: int, area: float, s: float, delta: float) -> tuple[float, float]:
    mean = (k - 1) * s * s / area
    return (1 - delta) * mean, (1 + delta) * mean + 1


def check_dense_good(network: Network, s: float, delta: float) -> bool:
    """Every cell, the origin cell included, holds a near-average node count."""
    lo, hi = dense_occupancy_window(network.k, network.area, s, delta)
    counts = cell_grid(network, s).counts
    return bool(counts.min() >= lo and counts.max() < hi)


def dense_good_bound(k: int, area: float, s: float, delta: float) -> float:
    """Chernoff/union bound on the probability that some cell is badly filled."""
    if not (0 < delta < 1 and area > 0 and s > 0 and k >= 2):
        raise PreconditionError("need 0 < delta < 1, positive area and cell side, k >= 2")
    mean = (k - 1) * s * s / area
    return 2 * area / (s * s) * math.exp(-delta**2 * (1 - delta) * mean / 2)


# --------------------------------------------------------- extended

def _square_side(k: int) -> int:
    n = math.isqrt(k)
    if n * n != k:
        raise PreconditionError(f"extended good-cell events need a square k, got {k}")
    return n


def count_good_cells(network: Network, lam: float, beta: float) -> int:
    """Non-origin cells of side ``lam**-1/2`` holding exactly one node, inside the window."""
    _square_side(network.k)
    occ = window_occupancy(network, lam**-0.5, beta)
    good = (occ.inside == 1) & (occ.outside == 0)
    good[0, 0] = False
    return int(np.count_nonzero(good))


def expected_good_cells(k: int, beta: float) -> float:
    """Mean good-cell count for uniform placement, ``beta^2 (k-1)^k / k^(k-1)``."""
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if beta == 0:
        return 0.0
    return math.exp(2 * math.log(beta) + k * math.log(k - 1) - (k - 1) * math.log(k))


def extended_good_bound(k: int, beta: float, delta: float) -> float:
    """Bounded-differences bound on the probability of too few good cells."""
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if beta == 0:
        return 2.0
    ratio = math.exp((2 * k - 1) * math.log(k - 1) - (2 * k - 2) * math.log(k))
    return 2 * math.exp(-0.5 * delta**2 * beta**4 * ratio)


def check_extended_good(network: Network, lam: float, beta: float, delta: float) -> bool:
    threshold = (1 - delta) * expected_good_cells(network.k, beta)
    return count_good_cells(network, lam, beta) >= threshold


def check_no_empty_cell(network: Network, s_k: float) -> bool:
    return bool(cell_grid(network, s_k).counts.min() >= 1)


def empty_cell_union_bound(k: int, area: float, s_k: float) -> float:
    """Union bound over non-origin cells on the probability that one is empty."""
    frac = s_k * s_k / area
    if not 0 < frac < 1:
        raise PreconditionError("need 0 < s_k^2 < A_k")
    return (1 / frac - 1) * (1 - frac) ** (k - 1)


# ------------------------------------------------------ Monte Carlo

@dataclass(frozen=True)
class EventSpec:
    """An event plus its parameters.

    ``denseGood`` uses ``s`` and ``delta``; ``extendedGood`` uses ``lam``,
    ``beta`` and ``delta``; ``noEmptyCell`` uses ``s`` as the cell side.
    """

    kind: str
    s: float | None = None
    delta: float | None = None
    lam: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise PreconditionError(f"unknown event kind {self.kind!r}")
        need = {"denseGood": ("s", "delta"), "extendedGood": ("lam", "beta", "delta"),
                "noEmptyCell": ("s",)}[self.kind]
        missing = [f for f in need if getattr(self, f) is None]
        if missing:
            raise PreconditionError(f"{self.kind} needs {', '.join(missing)}")
        if self.delta is not None and not 0 < self.delta < 1:
            raise PreconditionError("delta must lie in (0, 1)")
        if self.beta is not None and not 0 <= self.beta <= 1:
            raise PreconditionError("beta must lie in [0, 1]")

    def holds(self, network: Network) -> bool:
        if self.kind == "denseGood":
            return check_dense_good(network, self.s, self.delta)
        if self.kind == "extendedGood":
            return check_extended_good(network, self.lam, self.beta, self.delta)
        return check_no_empty_cell(network, self.s)

    def analytic_bound(self, k: int, area: float) -> float:
        if self.kind == "denseGood":
            return dense_good_bound(k, area, self.s, self.delta)
        if self.kind == "extendedGood":
            return extended_good_bound(k, self.beta, self.delta)
        return empty_cell_union_bound(k, area, self.s)


@dataclass(frozen=True)
class McResult:
    trials: int
    failures: int
    analytic_bound: float

    @property
    def frequency(self) -> float:
        return self.failures / self.trials

    @property
    def standard_error(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1 - f) / self.trials)

    @property
    def dominated(self) -> bool:
        """Bound at least the observed failure rate, allowing three standard errors."""
        return self.frequency <= self.analytic_bound + 3 * self.standard_error

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(frequency=self.frequency, standard_error=self.standard_error)
        return d


def mc_estimate(event: EventSpec, k: int, area: float, trials: int,
                seed: int) -> McResult:
    """Failure frequency of ``event`` over uniform placements (source at the origin)."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    if event.kind == "extendedGood" and not math.isclose(area, k / event.lam):
        raise PreconditionError("extendedGood needs area == k / lam")
    failures = 0
    for t in range(trials):
        net = generate_dense(k, area, trial_seed(seed, t))
        failures += not event.holds(net)
    return McResult(trials, failures, event.analytic_bound(k, area))


def mc_good_cells_mean(k: int, lam: float, beta: float, trials: int,
                       seed: int) -> tuple[float, float]:
    """Sample mean and standard error of the good-cell count."""
    counts = np.empty(trials)
    area = k / lam
    for t in range(trials):
        net = generate_dense(k, area, trial_seed(seed, t))
        counts[t] = count_good_cells(net, lam, beta)
    return float(counts.mean()), float(counts.std(ddof=1) / math.sqrt(trials))
