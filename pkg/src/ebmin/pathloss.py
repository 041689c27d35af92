"""Distance-to-gain law used by every bound and by the flooding simulator.

The expected power gain between two nodes a distance ``r`` apart is
``r**-alpha`` in the far field (``r >= r0``) and is clamped at ``gbar``
below that, so ``g(r) = min(gbar, r**-alpha)`` with ``g(0) = gbar``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError


@dataclass(frozen=True)
class PathLossModel:
    alpha: float = 4.0
    r0: float = 1.0
    gbar: float = 1.0

    def __post_init__(self):
        if not self.alpha > 2:
            raise PreconditionError(f"alpha must exceed 2, got {self.alpha}")
        if not self.r0 > 0:
            raise PreconditionError(f"r0 must be positive, got {self.r0}")
        # tolerate rounding when gbar is computed as r0**-alpha
        if self.gbar < self.r0 ** (-self.alpha) * (1 - 1e-12):
            raise PreconditionError(
                f"gbar={self.gbar} is below r0**-alpha={self.r0 ** -self.alpha}"
            )

    def gain(self, r):
        """Expected power gain at distance ``r`` (scalar or array)."""
        return gain(self, r)

    def inverse_gain(self, r) -> float:
        """``1 / g(r)``, the energy multiplier needed to reach distance ``r``."""
        return 1.0 / float(gain(self, r))

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "r0": self.r0, "gbar": self.gbar}


def gain(model: PathLossModel, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise PreconditionError("distance must be non-negative")
    with np.errstate(divide="ignore", over="ignore"):
        g = np.minimum(model.gbar, r ** (-model.alpha))
    return float(g) if g.ndim == 0 else g
