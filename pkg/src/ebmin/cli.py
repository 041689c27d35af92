"""Command-line driver: ``ebmin {generate,bounds,flood,sweep,validate-lemmas,schema}``.

Exit codes: 0 success, 2 usage/config error, 3 precondition error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime
import json
import math
import os
import sys

from . import __version__
from .errors import PreconditionError
from .experiments import (DEFAULT_LEMMA_GRID, LEMMA_COLUMNS, SWEEP_COLUMNS,
                          ConfigError, SweepConfig, lemma_row, sweep_rows, write_csv)
from .flood import TRACE_COLUMNS, FloodParams, simulate_flood, trace_to_csv, coverage_fraction
from .pathloss import PathLossModel
from .radius import lower_bound_ebn0, tightened_lower_bound
from .schemes import (DEFAULT_DELTA, DEFAULT_EPS1, DEFAULT_EPS2, dense_cell_side,
                      dense_params, extended_params, regular_params)
from .topology import (CLASS_TAGS, PLACEMENT_POLICIES, RegularSpec, dense_area,
                       generate_dense, generate_extended, generate_regular, infer_beta,
                       load_network, save_network)

EXIT_USAGE, EXIT_PRECONDITION, EXIT_IO = 2, 3, 4

TRACE_DOC = dict(zip(TRACE_COLUMNS, (
    "node label, 1 is the source",
    "x coordinate (m)",
    "y coordinate (m)",
    "slot at whose end the node decoded (0 for the source, blank if never)",
    "slot in which the node transmitted (blank if never)",
    "received energy per bit when it decoded, or at the end (units of N0)",
)))

CONFIG_DOC = {
    "network_class": "dense | extended | regular",
    "k_list": "list of node counts",
    "alpha, r0, gbar": "path-loss model",
    "area_rule": "[a, b]: dense area A_k = a k / (ln k)^b, b > 1 required",
    "lam": "extended density (nodes / m^2)",
    "s, beta, policy": "regular cell side, window fraction, placement policy",
    "eps1, eps2, delta": "scheme margins; delta is the dense good-placement slack and "
                         "the extended cell-size / good-cell slack",
    "trials_per_k": "trials per node count",
    "master_seed": "master seed (EBMIN_SEED overrides, --seed overrides both)",
    "output_path": "CSV destination (stdout if absent)",
}


def _model(args) -> PathLossModel:
    return PathLossModel(args.alpha, args.r0, args.gbar)


def _add_model_args(p):
    p.add_argument("--alpha", type=float, default=4.0, help="path-loss exponent (> 2)")
    p.add_argument("--r0", type=float, default=1.0, help="near-field cutoff distance")
    p.add_argument("--gbar", type=float, default=1.0, help="gain cap")


def _header(args) -> str | None:
    if args.deterministic:
        return None
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return f"generated {stamp} by ebmin {__version__}"


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_generate(args) -> int:
    if args.network_class == "dense":
        if args.k < 2:
            raise PreconditionError("k must be at least 2")
        area = args.area if args.area is not None else dense_area(args.k, *args.area_rule)
        net = generate_dense(args.k, area, args.seed)
    elif args.network_class == "extended":
        net = generate_extended(args.k, args.lam, args.seed)
    else:
        net = generate_regular(RegularSpec(args.k, args.s, args.beta, args.policy), args.seed)
    save_network(net, args.output)
    print(json.dumps({"k": net.k, "areaSide": net.area_side, "class": net.class_tag}))
    return 0


def _load(path):
    try:
        return load_network(path)
    except PreconditionError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise OSError(f"cannot parse network file {path}: {exc}") from None


def _destinations(spec: str, k: int):
    if spec == "all":
        return None
    labels = [int(x) for x in spec.split(",") if x.strip()]
    if not labels:
        raise ConfigError("destination set is empty")
    return labels


def cmd_bounds(args) -> int:
    net = _load(args.network)
    model = _model(args)
    R = _destinations(args.dest, net.k)
    out = {"plain": lower_bound_ebn0(net, model, R).to_dict()}
    if args.tighten != "none":
        out["tightened"] = tightened_lower_bound(net, model, R, args.tighten).to_dict()
        out["tightened"]["strategy"] = args.tighten
    print(json.dumps(out, indent=2))
    return 0


def auto_scheme(net, model, eps1=DEFAULT_EPS1, eps2=DEFAULT_EPS2, delta=DEFAULT_DELTA,
                beta=None):
    """Prescribed FLOOD parameters for a network, chosen from its class tag."""
    k = net.k
    if net.class_tag == "dense":
        return dense_params(k, net.area, model, eps1, eps2,
                            cell_side=dense_cell_side(net.area, model))
    if net.class_tag == "extended":
        return extended_params(k, k / net.area, model, eps1, delta)
    n = math.isqrt(k)
    if n * n != k:
        raise PreconditionError(f"regular network with non-square k={k}")
    if beta is None:
        beta = infer_beta(net, n)
    return regular_params(k, net.area_side / n, min(beta, 1 - 1e-12), model, eps1)


def cmd_flood(args) -> int:
    net = _load(args.network)
    model = _model(args)
    summary = {}
    if args.scheme == "auto":
        scheme = auto_scheme(net, model, args.eps1, args.eps2, args.delta, args.beta)
        params = scheme.params
        summary.update(cellSide=scheme.cell_side, caseId=scheme.case_id,
                       stepRadius=scheme.step_radius)
    else:
        if args.eb1 is None:
            raise ConfigError("manual scheme needs --eb1 (and optionally --eb2, --slots)")
        params = FloodParams(args.eb1, args.eb2, args.slots)
    trace = simulate_flood(net, model, params)
    bound = lower_bound_ebn0(net, model).lower_bound_ebn0
    summary.update(eb1=params.eb1, eb2=params.eb2, maxSlots=params.max_slots,
                   covered=trace.covered, coverage=coverage_fraction(trace),
                   totalEnergyPerBit=trace.total_energy_per_bit, slotsUsed=trace.slots_used,
                   lowerBoundEbN0=bound, ratioToLowerBound=trace.total_energy_per_bit / bound)
    with _open_out(args.output) as fh:
        fh.write(trace_to_csv(net, trace))
    text = json.dumps(summary, indent=2)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text + "\n")
    print(text, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def _load_config(path) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _master_seed(args, data: dict) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("EBMIN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"EBMIN_SEED must be an integer, got {env!r}") from None
    return int(data.get("master_seed", 0))


def cmd_sweep(args) -> int:
    data = _load_config(args.config)
    overrides = {
        "network_class": args.network_class, "trials_per_k": args.trials,
        "alpha": args.alpha, "r0": args.r0, "gbar": args.gbar, "lam": args.lam,
        "s": args.s, "beta": args.beta, "policy": args.policy, "eps1": args.eps1,
        "eps2": args.eps2, "delta": args.delta, "output_path": args.output,
    }
    if args.k_list:
        overrides["k_list"] = [int(x) for x in args.k_list.split(",")]
    if args.area_rule:
        overrides["area_rule"] = tuple(args.area_rule)
    data.update({k: v for k, v in overrides.items() if v is not None})
    data["master_seed"] = _master_seed(args, data)
    cfg = SweepConfig.from_dict(data)
    with _open_out(cfg.output_path) as fh:
        write_csv(sweep_rows(cfg), list(SWEEP_COLUMNS), fh, _header(args))
    return 0


def cmd_validate_lemmas(args) -> int:
    data = _load_config(args.config)
    grid = data.get("lemmas", DEFAULT_LEMMA_GRID)
    trials = args.trials or int(data.get("trials", 2000))
    seed = _master_seed(args, data)
    output = args.output or data.get("output_path")
    rows = [lemma_row(entry, trials, seed) for entry in grid]
    with _open_out(output) as fh:
        write_csv(rows, list(LEMMA_COLUMNS), fh, _header(args))
    return 0


def cmd_schema(args) -> int:
    docs = {"sweep": SWEEP_COLUMNS, "lemmas": LEMMA_COLUMNS, "trace": TRACE_DOC,
            "config": CONFIG_DOC}
    for name in ([args.which] if args.which else docs):
        print(f"[{name}]")
        for col, doc in docs[name].items():
            print(f"  {col:24s} {doc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebmin",
        description="Energy-per-bit bounds and flooding simulation for wireless multicast.",
        epilog="Run 'ebmin schema' for the column layout of every CSV output.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a network JSON file")
    p.add_argument("--class", dest="network_class", choices=CLASS_TAGS, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--area", type=float, help="dense: explicit area A_k")
    p.add_argument("--area-rule", type=float, nargs=2, default=(1.0, 2.0), metavar=("A", "B"),
                   help="dense: A_k = A k / (ln k)^B")
    p.add_argument("--lam", type=float, default=1.0, help="extended: density")
    p.add_argument("--s", type=float, default=1.0, help="regular: cell side")
    p.add_argument("--beta", type=float, default=0.0, help="regular: window fraction")
    p.add_argument("--policy", choices=PLACEMENT_POLICIES, default="center")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bounds", help="converse bound for a network file (JSON)")
    p.add_argument("network")
    _add_model_args(p)
    p.add_argument("--dest", default="all", help="'all' or comma-separated node labels")
    p.add_argument("--tighten", choices=("none", "heuristic", "exhaustive"), default="none")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("flood", help="simulate FLOOD on a network file, trace as CSV")
    p.add_argument("network")
    _add_model_args(p)
    p.add_argument("--scheme", choices=("manual", "auto"), default="auto")
    p.add_argument("--eb1", type=float)
    p.add_argument("--eb2", type=float, default=0.0)
    p.add_argument("--slots", type=int, default=1)
    p.add_argument("--eps1", type=float, default=DEFAULT_EPS1)
    p.add_argument("--eps2", type=float, default=DEFAULT_EPS2)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--beta", type=float, help="regular: window fraction (inferred if absent)")
    p.add_argument("-o", "--output", help="trace CSV path (stdout if absent)")
    p.add_argument("--summary", help="also write the JSON summary here")
    p.set_defaults(func=cmd_flood)

    p = sub.add_parser("sweep", help="scaling experiment, one CSV row per trial")
    p.add_argument("--config")
    p.add_argument("--class", dest="network_class", choices=CLASS_TAGS)
    p.add_argument("--k-list", help="comma-separated node counts")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r0", type=float)
    p.add_argument("--gbar", type=float)
    p.add_argument("--area-rule", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--lam", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--policy", choices=PLACEMENT_POLICIES)
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("-o", "--output")
    p.add_argument("--deterministic", action="store_true", help="omit the timestamp header")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-lemmas", help="Monte-Carlo check of placement bounds")
    p.add_argument("--config")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_validate_lemmas)

    p = sub.add_parser("schema", help="document CSV columns and config keys")
    p.add_argument("which", nargs="?", choices=("sweep", "lemmas", "trace", "config"))
    p.set_defaults(func=cmd_schema)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ebmin: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"ebmin: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"ebmin: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
