"""Sweep and lemma-validation drivers that back the ``ebmin`` CLI.

Rows are produced in (k, trial) order; every per-trial network seed is
``trial_seed(master_seed, k, trial)``, so a row can be regenerated alone.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import PreconditionError
from .flood import coverage_fraction, simulate_flood
from .pathloss import PathLossModel
from .placement import (EventSpec, check_dense_good, check_extended_good,
                        check_no_empty_cell, mc_estimate, mc_good_cells_mean,
                        expected_good_cells, trial_seed)
from .radius import lower_bound_ebn0
from .schemes import (DEFAULT_DELTA, DEFAULT_EPS1, DEFAULT_EPS2, dense_cell_side,
                      dense_constants, dense_params, extended_constants,
                      extended_params, extended_window_beta, regular_params,
                      regular_ratio_bound)
from .topology import (CLASS_TAGS, PLACEMENT_POLICIES, RegularSpec, dense_area,
                       generate_dense, generate_extended, generate_regular,
                       validate_dense_sequence, window_occupancy)


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


@dataclass
class SweepConfig:
    network_class: str = "dense"
    k_list: list[int] = field(default_factory=lambda: [256, 1024])
    alpha: float = 4.0
    r0: float = 1.0
    gbar: float = 1.0
    area_rule: tuple[float, float] = (1.0, 2.0)
    lam: float = 1.0
    s: float = 1.0
    beta: float = 0.0
    policy: str = "center"
    eps1: float = DEFAULT_EPS1
    eps2: float = DEFAULT_EPS2
    delta: float = DEFAULT_DELTA
    trials_per_k: int = 10
    master_seed: int = 0
    output_path: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = cls(**data)
        try:
            cfg.validate()
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config value: {exc}") from None
        return cfg

    @property
    def model(self) -> PathLossModel:
        return PathLossModel(self.alpha, self.r0, self.gbar)

    def validate(self) -> None:
        if self.network_class not in CLASS_TAGS:
            raise ConfigError(f"network_class must be one of {CLASS_TAGS}")
        self.k_list = [int(k) for k in self.k_list]
        if not self.k_list or min(self.k_list) < 2:
            raise ConfigError("k_list must hold integers >= 2")
        if int(self.trials_per_k) < 1:
            raise ConfigError("trials_per_k must be >= 1")
        try:
            self.model
        except PreconditionError as exc:
            raise ConfigError(str(exc)) from None
        if self.network_class == "dense":
            a, b = self.area_rule
            self.area_rule = (float(a), float(b))
            try:
                ok = validate_dense_sequence(a, b)
            except PreconditionError as exc:
                raise ConfigError(str(exc)) from None
            if not ok:
                raise ConfigError(f"area rule A_k = {a} k/(ln k)^{b} is not o(k/log k); need b > 1")
        elif self.network_class == "extended":
            if not self.lam > 0:
                raise ConfigError("lam must be positive")
        else:
            if self.policy not in PLACEMENT_POLICIES:
                raise ConfigError(f"policy must be one of {PLACEMENT_POLICIES}")
            for k in self.k_list:
                if math.isqrt(k) ** 2 != k or k < 4:
                    raise ConfigError(f"regular networks need square k >= 4, got {k}")
            if not (self.s > 0 and 0 <= self.beta < 1):
                raise ConfigError("regular networks need s > 0 and 0 <= beta < 1")


SWEEP_COLUMNS = {
    "class": "network class (dense, extended, regular)",
    "k": "number of nodes including the source",
    "trial": "trial index within this k",
    "seed": "network seed, SeedSequence(master_seed, spawn_key=(k, trial)) state word",
    "ak_or_lambda": "dense: area A_k; extended: density lambda; regular: cell side s",
    "area": "network area A_k",
    "cell_side": "cell side used by the scheme and placement event",
    "case_id": "regular networks: case 1, 2 or 3 selected by the scheme",
    "max_slots": "slot budget T handed to FLOOD",
    "eb1": "source energy per bit (units of N0)",
    "eb2": "relay energy per bit (units of N0)",
    "placement_event_holds": "event the covering argument needs: dense good placement, "
                             "extended no-empty-cell, regular window occupancy",
    "converse_event_holds": "event the converse needs: dense good placement, extended "
                            "good-cell count (blank for non-square k), regular window occupancy",
    "covered": "all nodes decoded",
    "coverage": "fraction of non-source nodes decoded",
    "total_eb_per_bit": "energy spent by FLOOD per bit (units of N0)",
    "lower_bound_ebn0": "ln2 / G({2..k})",
    "ratio": "total_eb_per_bit / lower_bound_ebn0",
    "c1": "dense/extended: converse constant; regular: ratio bound",
    "c2": "dense/extended: achievability constant; blank for regular",
    "upper_unit": "dense: A_k; extended: k (ln k)^(alpha/2); regular: ln2/G",
    "lower_unit": "dense: A_k; extended: k; regular: ln2/G",
    "normalized_upper": "total_eb_per_bit / upper_unit (compare with c2; regular: with c1)",
    "normalized_lower": "lower_bound_ebn0 / lower_unit (compare with c1)",
    "error": "precondition failure for this trial, blank otherwise",
}


def _sweep_row(cfg: SweepConfig, k: int, trial: int) -> dict:
    model = cfg.model
    seed = trial_seed(cfg.master_seed, k, trial)
    row = {"class": cfg.network_class, "k": k, "trial": trial, "seed": seed}
    cls = cfg.network_class
    if cls == "dense":
        area = dense_area(k, *cfg.area_rule)
        row.update(ak_or_lambda=area, area=area)
        net = generate_dense(k, area, seed)
        s = dense_cell_side(area, model)
        scheme = dense_params(k, area, model, cfg.eps1, cfg.eps2, cell_side=s)
        holds = check_dense_good(net, s, cfg.delta)
        row.update(placement_event_holds=holds, converse_event_holds=holds)
        consts = dense_constants(model)
        upper_unit = lower_unit = area
    elif cls == "extended":
        area = k / cfg.lam
        row.update(ak_or_lambda=cfg.lam, area=area)
        net = generate_extended(k, cfg.lam, seed)
        scheme = extended_params(k, cfg.lam, model, cfg.eps1, cfg.delta)
        row["placement_event_holds"] = check_no_empty_cell(net, scheme.cell_side)
        if math.isqrt(k) ** 2 == k:
            beta = extended_window_beta(model, cfg.lam)
            row["converse_event_holds"] = check_extended_good(net, cfg.lam, beta, cfg.delta)
        consts = extended_constants(model, cfg.lam)
        upper_unit = k * math.log(k) ** (model.alpha / 2)
        lower_unit = k
    else:
        spec = RegularSpec(k, cfg.s, cfg.beta, cfg.policy)
        row.update(ak_or_lambda=cfg.s, area=k * cfg.s**2)
        net = generate_regular(spec, seed)
        scheme = regular_params(k, cfg.s, cfg.beta, model, cfg.eps1)
        occ = window_occupancy(net, cfg.s, cfg.beta)
        holds = bool(np.all(occ.inside == 1) and np.all(occ.outside == 0))
        row.update(placement_event_holds=holds, converse_event_holds=holds,
                   case_id=scheme.case_id)
        consts = None
    p = scheme.params
    row.update(cell_side=scheme.cell_side, max_slots=p.max_slots, eb1=p.eb1, eb2=p.eb2)
    trace = simulate_flood(net, model, p)
    bound = lower_bound_ebn0(net, model).lower_bound_ebn0
    total = trace.total_energy_per_bit
    if consts is None:
        consts_c1, consts_c2 = regular_ratio_bound(model, cfg.beta), None
        upper_unit = lower_unit = bound
    else:
        consts_c1, consts_c2 = consts.c1, consts.c2
    row.update(covered=trace.covered, coverage=coverage_fraction(trace),
               total_eb_per_bit=total, lower_bound_ebn0=bound, ratio=total / bound,
               c1=consts_c1, c2=consts_c2, upper_unit=upper_unit, lower_unit=lower_unit,
               normalized_upper=total / upper_unit, normalized_lower=bound / lower_unit)
    return row


def sweep_rows(cfg: SweepConfig):
    for k in cfg.k_list:
        for trial in range(int(cfg.trials_per_k)):
            try:
                yield _sweep_row(cfg, k, trial)
            except PreconditionError as exc:
                yield {"class": cfg.network_class, "k": k, "trial": trial,
                       "seed": trial_seed(cfg.master_seed, k, trial), "error": str(exc)}


# ------------------------------------------------------------ lemmas

LEMMA_COLUMNS = {
    "eventKind": "denseGood, extendedGood, noEmptyCell, or goodCellsMean",
    "k": "number of nodes including the source",
    "area": "network area A_k",
    "s": "cell side (denseGood, noEmptyCell)",
    "lam": "density (extendedGood, goodCellsMean)",
    "beta": "window fraction (extendedGood, goodCellsMean)",
    "delta": "deviation parameter",
    "trials": "Monte-Carlo trials",
    "failures": "trials in which the event failed (blank for goodCellsMean)",
    "frequency": "failure frequency; goodCellsMean: sample mean of the good-cell count",
    "stdErr": "standard error of frequency",
    "analyticBound": "analytic failure bound; goodCellsMean: exact expectation",
    "dominated": "frequency <= analyticBound + 3 stdErr; goodCellsMean: |mean - expectation| <= 3 stdErr",
}

DEFAULT_LEMMA_GRID = [
    {"kind": "denseGood", "k": 201, "area": 4.0, "s": 1.0, "delta": 0.5},
    {"kind": "denseGood", "k": 401, "area": 4.0, "s": 1.0, "delta": 0.5},
    {"kind": "extendedGood", "k": 100, "lam": 1.0, "beta": 1.0, "delta": 0.5},
    {"kind": "extendedGood", "k": 100, "lam": 1.0, "beta": 1 / 3, "delta": 0.5},
    {"kind": "noEmptyCell", "k": 4, "area": 4.0, "s": 1.0},
    {"kind": "noEmptyCell", "k": 64, "area": 64.0, "s": 8 / 3},
    {"kind": "goodCellsMean", "k": 100, "lam": 1.0, "beta": 1 / 3},
]


def lemma_row(entry: dict, trials: int, seed: int) -> dict:
    entry = dict(entry)
    kind = entry.pop("kind")
    k = int(entry.pop("k"))
    trials = int(entry.pop("trials", trials))
    lam = entry.get("lam")
    area = float(entry.pop("area", k / lam if lam else float("nan")))
    row = {"eventKind": kind, "k": k, "area": area, "trials": trials,
           "s": entry.get("s"), "lam": lam, "beta": entry.get("beta"),
           "delta": entry.get("delta")}
    if kind == "goodCellsMean":
        mean, se = mc_good_cells_mean(k, lam, entry["beta"], trials, seed)
        expect = expected_good_cells(k, entry["beta"])
        row.update(frequency=mean, stdErr=se, analyticBound=expect,
                   dominated=abs(mean - expect) <= 3 * se)
        return row
    try:
        event = EventSpec(kind, **entry)
    except TypeError as exc:
        raise ConfigError(f"bad lemma entry: {exc}") from None
    res = mc_estimate(event, k, area, trials, seed)
    row.update(failures=res.failures, frequency=res.frequency, stdErr=res.standard_error,
               analyticBound=res.analytic_bound, dominated=res.dominated)
    return row


# ------------------------------------------------------------ output

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(rows, columns, stream, header_line: str | None = None) -> None:
    if header_line is not None:
        stream.write(f"# {header_line}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()
