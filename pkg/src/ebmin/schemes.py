"""Flooding parameterizations that provably cover each network class, the
scaling constants that accompany them, and a certified zeta evaluator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .flood import FloodParams
from .pathloss import PathLossModel
from .topology import divisor_cell_side

LN2 = math.log(2.0)
SQRT8 = math.sqrt(8.0)

DEFAULT_EPS1 = 1e-6 * LN2
DEFAULT_EPS2 = 1.0
DEFAULT_DELTA = 0.1


# ---------------------------------------------------------------- zeta

def zeta_bracket(s: float, n_terms: int) -> tuple[float, float, float]:
    """Partial sum of ``n**-s`` for ``n < N`` plus rigorous bounds on the tail.

    Returns ``(partial, tail_lo, tail_hi)`` with ``N = n_terms``. Because
    ``x**-s`` is convex and decreasing, the trapezoid rule underestimates and
    the midpoint rule overestimates each unit step of the tail.
    """
    N = n_terms
    n = np.arange(1, N, dtype=float)
    partial = float(np.sum(n[::-1] ** -s))  # smallest terms first
    integral = N ** (1 - s) / (s - 1)
    lo = integral + 0.5 * N ** -s
    hi = (N - 0.5) ** (1 - s) / (s - 1)
    return partial, lo, hi


def _zeta_terms(s: float, tol: float) -> int:
    # bracket width ~ s N**-(s+1) / 8
    N = int(math.ceil((s / (8 * tol)) ** (1 / (s + 1)))) + 8
    return max(N, 16)


def zeta(s: float, tol: float = 1e-10) -> float:
    """Riemann zeta for real ``s > 1``, absolute error below ``tol``."""
    if not s > 1 + 1e-6:
        raise PreconditionError(f"zeta needs s > 1 + 1e-6, got {s}")
    N = _zeta_terms(s, tol)
    while True:
        partial, lo, hi = zeta_bracket(s, N)
        if hi - lo < tol:
            return partial + 0.5 * (lo + hi)
        N *= 2


# ------------------------------------------------------------ configs

@dataclass(frozen=True)
class SchemeConfig:
    class_tag: str
    params: FloodParams
    cell_side: float
    case_id: int | None = None
    step_radius: int | None = None

    def __post_init__(self):
        if (self.case_id is not None) != (self.class_tag == "regular"):
            raise PreconditionError("case_id is set exactly for regular networks")
        if self.step_radius is not None and self.step_radius < 1:
            raise PreconditionError("step radius must be at least 1")


@dataclass(frozen=True)
class TheoremConstants:
    c1: float
    c2: float | None
    regime: str | None = None


def dense_cell_side(area: float, model: PathLossModel) -> float:
    """Largest cell side ``<= r0/sqrt(8)`` that tiles a dense network's area."""
    return divisor_cell_side(math.sqrt(area), model.r0 / SQRT8)


def dense_params(k: int, area: float, model: PathLossModel,
                 eps1: float = DEFAULT_EPS1, eps2: float = DEFAULT_EPS2,
                 cell_side: float | None = None) -> SchemeConfig:
    """FLOOD energies that cover a dense network whenever its cells are well filled.

    Without ``cell_side`` the cells have side ``r0/sqrt(8)``; a smaller side
    (e.g. one tiling the area exactly) keeps the same covering argument.
    """
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if not model.r0**2 <= 8 * area:
        raise PreconditionError(f"dense scheme needs r0^2 <= 8 A_k (A_k={area})")
    if not (eps1 > 0 and eps2 > 0):
        raise PreconditionError("eps1 and eps2 must be positive")
    s = model.r0 / SQRT8 if cell_side is None else float(cell_side)
    if s > model.r0 / SQRT8 * (1 + 1e-12):
        raise PreconditionError("dense cell side may not exceed r0/sqrt(8)")
    if cell_side is None:
        inv_hop = model.r0**model.alpha  # g(sqrt(8) s) = r0^-alpha
        eb2 = (1 + eps2) * 8 * area * model.r0 ** (model.alpha - 2) * LN2 / (k - 1)
    else:
        inv_hop = model.inverse_gain(SQRT8 * s)
        eb2 = (1 + eps2) * area * LN2 * inv_hop / (s * s * (k - 1))
    eb1 = LN2 * inv_hop + eps1
    T = math.ceil(math.sqrt(area) / s - 1e-9)
    return SchemeConfig("dense", FloodParams(eb1, eb2, T), s)


def dense_constants(model: PathLossModel) -> TheoremConstants:
    a, r0, gbar = model.alpha, model.r0, model.gbar
    c1 = 2 * LN2 / (49 * gbar * r0**2 + 2 ** (a + 2) / (a - 2) * 3 / r0 ** (a - 2))
    c2 = 24 * r0 ** (a - 2) * LN2
    return TheoremConstants(c1, c2)


def extended_raw_cell_side(area: float, lam: float, delta: float) -> float:
    if not area > 1:
        raise PreconditionError("extended cells need A_k > 1")
    return math.sqrt((2 + delta) * math.log(area) / lam)


def extended_cell_side(area: float, lam: float, delta: float) -> float:
    """Cell side ``sqrt((2+delta) ln A_k / lam)`` rounded down to tile the area."""
    return divisor_cell_side(math.sqrt(area), extended_raw_cell_side(area, lam, delta))


def extended_params(k: int, lam: float, model: PathLossModel,
                    eps: float = DEFAULT_EPS1, delta: float = DEFAULT_DELTA) -> SchemeConfig:
    if k < 2 or not lam > 0 or not delta > 0 or not eps > 0:
        raise PreconditionError("extended scheme needs k >= 2 and lam, delta, eps > 0")
    area = k / lam
    s = extended_cell_side(area, lam, delta) if area > 1 else 0.0
    if SQRT8 * s < model.r0:
        kmin = next(
            kk for kk in range(k + 1, 10**7)
            if kk / lam > 1 and SQRT8 * extended_cell_side(kk / lam, lam, delta) >= model.r0
        )
        raise PreconditionError(
            f"extended cells too small at k={k}: sqrt(8)*s_k={SQRT8 * s:.4g} < r0; "
            f"need k >= {kmin}"
        )
    eb = LN2 * model.inverse_gain(SQRT8 * s) + eps / k
    T = round(math.sqrt(area) / s)
    return SchemeConfig("extended", FloodParams(eb, eb, T), s)


def extended_constants(model: PathLossModel, lam: float) -> TheoremConstants:
    if not lam > 0:
        raise PreconditionError("lam must be positive")
    a, r0, gbar = model.alpha, model.r0, model.gbar
    c2 = 3 * 2 ** (2 * a - 1) * LN2 * lam ** (-a / 2)
    if lam < 1 / (9 * r0**2):
        c1 = LN2 * lam ** (-a / 2) / (2**4 * 3 ** (a + 2) * math.e * zeta(a - 1))
        return TheoremConstants(c1, c2, "lowDensity")
    c1 = LN2 / lam / (2**5 * 3**3 * (gbar * r0**2 + 1 / ((a - 2) * 6**a * r0 ** (a - 2))))
    return TheoremConstants(c1, c2, "highDensity")


def extended_window_beta(model: PathLossModel, lam: float) -> float:
    """Window fraction used by the extended converse in each density regime."""
    return 1 / 3 if lam < 1 / (9 * model.r0**2) else 1.0


def regular_case(k: int, s: float, beta: float, r0: float) -> int:
    if (k - 1) * s * s < r0 * r0:
        return 2
    if r0 < (1 - beta) * s:
        return 1
    return 3


def regular_params(k: int, s: float, beta: float, model: PathLossModel,
                   eps1: float = DEFAULT_EPS1) -> SchemeConfig:
    n = math.isqrt(k)
    if k < 2 or n * n != k:
        raise PreconditionError(f"regular scheme needs a square k, got {k}")
    if not (0 <= beta < 1 and s > 0 and eps1 > 0):
        raise PreconditionError("need 0 <= beta < 1, s > 0, eps1 > 0")
    r0 = model.r0
    case = regular_case(k, s, beta, r0)
    if case == 1:
        eb = LN2 * model.inverse_gain(SQRT8 * s) + eps1
        return SchemeConfig("regular", FloodParams(eb, eb, n), s, case_id=1)
    if case == 2:
        eb1 = LN2 * model.inverse_gain(2 * r0) + eps1
        return SchemeConfig("regular", FloodParams(eb1, 0.0, 1), s, case_id=2)
    L = int(math.floor(r0 / ((1 - beta) * s) * (1 + 1e-12)))
    hop = 2 * math.sqrt(2) * s
    eb1 = LN2 * model.inverse_gain(hop * L) + eps1
    weight = sum(l * float(model.gain(hop * l)) for l in range(1, L + 1))
    eb2 = LN2 / weight + eps1
    # with L >= sqrt(k) - 1 the source alone reaches every cell
    T = max(1, n - L + 1)
    return SchemeConfig("regular", FloodParams(eb1, eb2, T), s, case_id=3, step_radius=L)


def regular_ratio_bound(model: PathLossModel, beta: float) -> float:
    """Upper bound on flood energy over the converse for any regular network."""
    if not 0 <= beta < 1:
        raise PreconditionError("beta must lie in [0, 1)")
    a, r0, gbar = model.alpha, model.r0, model.gbar
    b = 1 - beta
    multihop = 2 ** (1.5 * a + 4) * zeta(a - 1) / b**a
    one_shot = (2 * r0) ** a * gbar
    stepped = (2 ** (1.5 * a + 3) * r0**a / b ** (a + 2)
               * (gbar + 2 ** (a - 2) / ((a - 2) * r0**a)) * (1 + 4 * b * b))
    return max(multihop, one_shot, stepped)
