"""Slot-level simulation of FLOOD(eb1, eb2) with energy-accumulation decoding.

Energies are per information bit in units of N0. A node decodes at the end
of the first slot in which its accumulated received energy strictly exceeds
ln 2, then retransmits once, in the following slot, with ``eb2``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .pathloss import PathLossModel
from .topology import Network

LN2 = math.log(2.0)
NEVER = -1


@dataclass(frozen=True)
class FloodParams:
    eb1: float
    eb2: float
    max_slots: int

    def __post_init__(self):
        if not self.eb1 > 0:
            raise PreconditionError("eb1 must be positive")
        if not self.eb2 >= 0:
            raise PreconditionError("eb2 must be non-negative")
        if int(self.max_slots) != self.max_slots or self.max_slots < 1:
            raise PreconditionError("max_slots must be an integer >= 1")


@dataclass(frozen=True, eq=False)
class FloodTrace:
    """Per-node history, indexed by node position (row ``i - 1`` is node ``i``).

    ``decode_slot`` and ``transmit_slot`` hold ``NEVER`` (-1) for nodes that
    never decoded / never transmitted. ``accum_energy`` is frozen at the value
    reached when a node decoded; the source's entry is 0.
    """

    decode_slot: np.ndarray
    transmit_slot: np.ndarray
    accum_energy: np.ndarray
    total_energy_per_bit: float
    slots_used: int

    @property
    def k(self) -> int:
        return self.decode_slot.shape[0]

    @property
    def covered(self) -> bool:
        return bool(np.all(self.decode_slot >= 0))

    def __eq__(self, other):
        if not isinstance(other, FloodTrace):
            return NotImplemented
        return (np.array_equal(self.decode_slot, other.decode_slot)
                and np.array_equal(self.transmit_slot, other.transmit_slot)
                and np.array_equal(self.accum_energy, other.accum_energy)
                and self.total_energy_per_bit == other.total_energy_per_bit)


def simulate_flood(network: Network, model: PathLossModel,
                   params: FloodParams) -> FloodTrace:
    k = network.k
    x = np.ascontiguousarray(network.nodes[:, 0])
    y = np.ascontiguousarray(network.nodes[:, 1])
    alpha, gbar = float(model.alpha), float(model.gbar)

    decode = np.full(k, NEVER, dtype=np.int64)
    transmit = np.full(k, NEVER, dtype=np.int64)
    accum = np.zeros(k)
    decode[0] = 0
    transmit[0] = 1

    pending = np.arange(1, k)
    tx = np.array([0], dtype=np.int64)
    energy = np.array([params.eb1])
    total = params.eb1
    t = 1
    while True:
        if pending.size:
            accum[pending] += _kernels.received_energy(x, y, tx, energy, pending, alpha, gbar)
        fresh = accum[pending] > LN2
        newly = pending[fresh]
        pending = pending[~fresh]
        decode[newly] = t
        if newly.size == 0 or params.eb2 == 0 or t + 1 > params.max_slots:
            break
        # relays cannot tell whether anyone is still listening, so they always transmit
        transmit[newly] = t + 1
        total += params.eb2 * newly.size
        tx = newly
        energy = np.full(newly.size, params.eb2)
        t += 1
    return FloodTrace(decode, transmit, accum, float(total), t)


def coverage_fraction(trace: FloodTrace) -> float:
    return float(np.count_nonzero(trace.decode_slot[1:] >= 0)) / (trace.k - 1)


TRACE_COLUMNS = ("nodeIndex", "x", "y", "decodeSlot", "transmitSlot", "accumEnergy")


def trace_to_csv(network: Network, trace: FloodTrace) -> str:
    """Per-node trace rows; slots that never happened are left empty."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for i in range(trace.k):
        d, t = int(trace.decode_slot[i]), int(trace.transmit_slot[i])
        w.writerow([i + 1, repr(float(network.nodes[i, 0])), repr(float(network.nodes[i, 1])),
                    "" if d == NEVER else d, "" if t == NEVER else t,
                    repr(float(trace.accum_energy[i]))])
    return buf.getvalue()
