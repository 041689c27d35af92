"""Effective network radius and the cut-set converse on energy per bit.

For a destination set R, the effective radius is

    G(R) = max_i sum_{j in R, j != i} g(r_ij) / |R|

and no scheme without transmitter channel knowledge can deliver a bit to all
of R with less than ``ln 2 / G(R)`` energy (in units of N0).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .pathloss import PathLossModel
from .topology import Network

LN2 = math.log(2.0)
EXHAUSTIVE_LIMIT = 20


@dataclass(frozen=True)
class BoundReport:
    G: float
    lower_bound_ebn0: float
    destination_set_size: int
    argmax_node: int
    destinations: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["destinations"] is not None:
            d["destinations"] = list(d["destinations"])
        return d


def all_destinations(network: Network) -> tuple[int, ...]:
    return tuple(range(2, network.k + 1))


def _check_destinations(network: Network, R: Iterable[int]) -> np.ndarray:
    R = np.unique(np.asarray(list(R), dtype=np.int64))
    if R.size == 0:
        raise PreconditionError("destination set must be nonempty")
    if R[0] < 2 or R[-1] > network.k:
        raise PreconditionError(f"destinations must lie in 2..{network.k}")
    return R


def _source_sums(network: Network, model: PathLossModel, R0: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(network.nodes[:, 0])
    y = np.ascontiguousarray(network.nodes[:, 1])
    return _kernels.source_gain_sums(x, y, R0, float(model.alpha), float(model.gbar))


def total_gain_from(network: Network, model: PathLossModel, i: int,
                    R: Iterable[int]) -> float:
    """Sum of gains from node ``i`` to every member of ``R`` except itself."""
    R = _check_destinations(network, R)
    if not 1 <= i <= network.k:
        raise IndexError(f"node label {i} outside 1..{network.k}")
    d = network.nodes[R - 1] - network.nodes[i - 1]
    g = model.gain(np.hypot(d[:, 0], d[:, 1]))
    return float(np.sum(np.where(R == i, 0.0, g)))


def effective_radius(network: Network, model: PathLossModel,
                     R: Iterable[int] | None = None) -> tuple[float, int]:
    """``(G(R), argmax node)``; ties go to the smallest node label."""
    R = _check_destinations(network, all_destinations(network) if R is None else R)
    sums = _source_sums(network, model, R - 1)
    best = int(np.argmax(sums))
    return float(sums[best]) / R.size, best + 1


def lower_bound_ebn0(network: Network, model: PathLossModel,
                     R: Iterable[int] | None = None) -> BoundReport:
    R = _check_destinations(network, all_destinations(network) if R is None else R)
    G, arg = effective_radius(network, model, R)
    if G <= 0:
        raise PreconditionError("effective radius is zero: no finite energy suffices")
    return BoundReport(G, LN2 / G, int(R.size), arg, tuple(int(r) for r in R))


def _gain_matrix(network: Network, model: PathLossModel, R: np.ndarray) -> np.ndarray:
    """``M[i, t] = g(r_{i, R[t]})`` with self-gains zeroed (h_ii = 0)."""
    d = network.nodes[:, None, :] - network.nodes[None, R - 1, :]
    M = np.asarray(model.gain(np.hypot(d[..., 0], d[..., 1])))
    M[R - 1, np.arange(R.size)] = 0.0
    return M


def _scan(M: np.ndarray, member: np.ndarray):
    """Effective radius of each subset row of ``member`` (boolean, subsets x |R|).

    Members are accumulated in destination order so a subset gets the same
    value whichever batch it is evaluated in.
    """
    sums = np.zeros((member.shape[0], M.shape[0]))
    for t in range(member.shape[1]):
        sums += np.where(member[:, t, None], M[None, :, t], 0.0)
    arg = np.argmax(sums, axis=1)
    G = sums[np.arange(sums.shape[0]), arg] / member.sum(axis=1)
    return G, arg


def _report(G: float, arg: int, member: np.ndarray, R: np.ndarray) -> BoundReport:
    return BoundReport(float(G), LN2 / float(G), int(member.sum()), int(arg) + 1,
                       tuple(int(r) for r in R[member]))


def heuristic_family(network: Network, R: np.ndarray) -> np.ndarray:
    """R itself, every singleton, and every prefix of R ordered by distance
    from the source, as a boolean membership matrix."""
    m = R.size
    d = np.hypot(*(network.nodes[R - 1] - network.nodes[0]).T)
    order = np.argsort(d, kind="stable")
    rows = [np.ones(m, dtype=bool)]
    rows += list(np.eye(m, dtype=bool))
    for size in range(2, m):
        row = np.zeros(m, dtype=bool)
        row[order[:size]] = True
        rows.append(row)
    return np.array(rows)


def _best(M, member, R, best=None):
    G, arg = _scan(M, member)
    t = int(np.argmin(G))  # largest bound = smallest radius
    if best is None or G[t] < best[0]:
        best = (G[t], arg[t], member[t])
    return best


def _exhaustive(M: np.ndarray, R: np.ndarray, chunk: int = 1 << 14) -> BoundReport:
    m = R.size
    bits = 1 << np.arange(m)
    best = None
    for start in range(1, 1 << m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << m))
        best = _best(M, (masks[:, None] & bits[None, :]) != 0, R, best)
    return _report(*best, R)


def tightened_lower_bound(network: Network, model: PathLossModel,
                          R: Iterable[int] | None = None,
                          strategy: str = "heuristic") -> BoundReport:
    """Best converse over nonempty subsets of ``R``.

    ``exhaustive`` scans all ``2**|R| - 1`` subsets (|R| <= 20); ``heuristic``
    scans a distance-structured family that always contains ``R``.
    """
    R = _check_destinations(network, all_destinations(network) if R is None else R)
    if strategy == "exhaustive":
        if R.size > EXHAUSTIVE_LIMIT:
            raise PreconditionError(
                f"exhaustive search refused for |R|={R.size} > {EXHAUSTIVE_LIMIT}"
            )
        found = _exhaustive(_gain_matrix(network, model, R), R)
    elif strategy == "heuristic":
        M = _gain_matrix(network, model, R)
        family = heuristic_family(network, R)
        best = None
        for start in range(0, family.shape[0], 256):
            best = _best(M, family[start:start + 256], R, best)
        found = _report(*best, R)
    else:
        raise PreconditionError(f"unknown strategy {strategy!r}")
    # R is in every family; prefer its plain evaluation so the result is never
    # below lower_bound_ebn0 by a rounding difference
    plain = lower_bound_ebn0(network, model, R)
    return plain if plain.lower_bound_ebn0 >= found.lower_bound_ebn0 else found
