"""Command-line interface: single runs, parameter sweeps, and figure-data
emission.

Verbs:

``run``
    execute one experiment and write ``records.json`` + ``results.csv`` +
    ``MANIFEST`` into the output directory.
``sweep``
    execute the Cartesian product of the configured grids; points land in
    per-point staging files and are merged, ordered by point index.
``plotdata``
    post-process one or more ``records.json`` files into per-figure CSVs.

Configuration comes from an INI file with sections ``[experiment]``,
``[reservoir]``, ``[task]``, ``[sweep]``; command-line flags override file
values.  Relative output directories are resolved under the
``SWAPQRN_OUTPUT_ROOT`` environment variable when it is set.
"""

import argparse
import configparser
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, asdict, replace
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__
from .gates import check_gamma
from .reservoir import ReservoirConfig
from .tasks import (
    StmcSpec, NarmaSpec, EsnConfig, run_stmc, run_narma, run_esn_narma,
)

TASKS = ("stmc", "narma5", "esn-baseline")
BACKENDS = ("exact", "sampled", "trajectory")

RANDOM_GUESS_U01 = float(np.sqrt(1.0 / 12.0))

DEFAULT_GAMMA_GRID = tuple(round(0.05 * k, 10) for k in range(1, 21))
DEFAULT_NQUBITS_GRID = tuple(range(2, 17, 2))
DEFAULT_NREPEATS_GRID = (1, 3)

_RESERVOIR_DEFAULTS = {
    "stmc": dict(n_qubits=16, gamma=0.55, n_repeats=1, c=1,
                 n_shots=30000, seed=42, backend="exact"),
    "narma5": dict(n_qubits=12, gamma=0.75, n_repeats=3, c=5,
                   n_shots=60000, seed=42, backend="exact"),
    "esn-baseline": dict(n_qubits=12, gamma=0.75, n_repeats=3, c=5,
                         n_shots=60000, seed=42, backend="exact"),
}

_RESERVOIR_SCHEMA = {
    "n_qubits": int, "gamma": float, "n_repeats": int, "c": int,
    "n_shots": int, "seed": int, "backend": str,
}
_NARMA_TASK_SCHEMA = {
    "n_total": int, "n_train": int, "n_test": int, "n_washout": int,
    "alpha": float, "seed": int,
}
_TASK_SCHEMA = {
    "stmc": {**_NARMA_TASK_SCHEMA, "delays": "int_list"},
    "narma5": _NARMA_TASK_SCHEMA,
    "esn-baseline": {**_NARMA_TASK_SCHEMA, "n_esn_seeds": int,
                     "spectral_radius": float, "leak_rate": float},
}
_SWEEP_SCHEMA = {"gamma": "float_list", "n_qubits": "int_list",
                 "n_repeats": "int_list"}
_EXPERIMENT_SCHEMA = {"task": str, "outdir": str}

_RESERVOIR_FLAGS = ("n_qubits", "gamma", "n_repeats", "n_shots", "c", "backend")
_ESN_ONLY_KEYS = ("n_esn_seeds", "spectral_radius", "leak_rate")


class ConfigError(ValueError):
    """Invalid, unknown, or out-of-range configuration input."""


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    reservoir: ReservoirConfig
    task_spec: object
    esn: EsnConfig | None
    n_esn_seeds: int
    sweep: dict | None
    outdir: Path


@dataclass(frozen=True)
class SweepPoint:
    index: int
    n_qubits: int
    gamma: float
    n_repeats: int


def _coerce(raw, kind, path):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return str(raw)
        items = [x.strip() for x in str(raw).split(",") if x.strip()]
        if not items:
            raise ValueError("empty list")
        typ = int if kind == "int_list" else float
        return tuple(typ(x) for x in items)
    except ValueError as exc:
        raise ConfigError(f"invalid value for {path}: {raw!r} ({exc})") from exc


def _read_sections(config_path):
    parser = configparser.ConfigParser(interpolation=None)
    if not parser.read(config_path):
        raise ConfigError(f"cannot read config file {config_path}")
    known = {"experiment", "reservoir", "task", "sweep"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(
                f"unknown section [{section}] (expected one of {sorted(known)})")
    return parser


def _section_values(parser, section, schema):
    values = {}
    if parser is None or not parser.has_section(section):
        return values
    for key, raw in parser.items(section):
        if key not in schema:
            raise ConfigError(
                f"unknown key '{section}.{key}' "
                f"(expected one of {sorted(schema)})")
        values[key] = _coerce(raw, schema[key], f"{section}.{key}")
    return values


def _validate_grids(sweep):
    for g in sweep.get("gamma", ()):
        try:
            check_gamma(g)
        except ValueError as exc:
            raise ConfigError(f"sweep.gamma: {exc}") from exc
    for n in sweep.get("n_qubits", ()):
        if n < 2 or n % 2 != 0:
            raise ConfigError(
                f"sweep.n_qubits: values must be even and >= 2, got {n}")
    for r in sweep.get("n_repeats", ()):
        if r < 1:
            raise ConfigError(f"sweep.n_repeats: values must be >= 1, got {r}")


def parse_config(task=None, config_path=None, flag_overrides=None):
    """Merge defaults, config-file sections, and flag overrides into a
    validated :class:`ExperimentConfig`.  Flags win over file values."""
    flags = dict(flag_overrides or {})
    parser = _read_sections(config_path) if config_path else None

    experiment = _section_values(parser, "experiment", _EXPERIMENT_SCHEMA)
    task = task or flags.pop("task", None) or experiment.get("task", "stmc")
    if task not in TASKS:
        raise ConfigError(f"experiment.task must be one of {TASKS}, got {task!r}")

    reservoir_values = dict(_RESERVOIR_DEFAULTS[task])
    reservoir_values.update(_section_values(parser, "reservoir", _RESERVOIR_SCHEMA))
    task_values = _section_values(parser, "task", _TASK_SCHEMA[task])
    sweep_values = _section_values(parser, "sweep", _SWEEP_SCHEMA)

    for key in _RESERVOIR_FLAGS:
        if flags.get(key) is not None:
            reservoir_values[key] = flags[key]
    if flags.get("seed") is not None:
        reservoir_values["seed"] = flags["seed"]
        task_values["seed"] = flags["seed"]
    if flags.get("alpha") is not None:
        task_values["alpha"] = flags["alpha"]
    if flags.get("n_esn_seeds") is not None and task == "esn-baseline":
        task_values["n_esn_seeds"] = flags["n_esn_seeds"]
    for axis in ("gamma", "n_qubits", "n_repeats"):
        raw = flags.get(f"{axis}_grid")
        if raw is not None:
            sweep_values[axis] = _coerce(
                raw, _SWEEP_SCHEMA[axis], f"sweep.{axis}")

    try:
        reservoir = ReservoirConfig(**reservoir_values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config error in [reservoir]: {exc}") from exc

    esn = None
    n_esn_seeds = 200
    if task == "esn-baseline":
        n_esn_seeds = task_values.pop("n_esn_seeds", 200)
        if n_esn_seeds < 1:
            raise ConfigError(
                f"task.n_esn_seeds must be >= 1, got {n_esn_seeds}")
        esn_kwargs = {k: task_values.pop(k) for k in
                      ("spectral_radius", "leak_rate") if k in task_values}
        try:
            esn = EsnConfig(n_nodes=reservoir.n_mem,
                            seed=task_values.get("seed", 42), **esn_kwargs)
        except ValueError as exc:
            raise ConfigError(f"config error in [task]: {exc}") from exc

    spec_cls = StmcSpec if task == "stmc" else NarmaSpec
    try:
        task_spec = spec_cls(**task_values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config error in [task]: {exc}") from exc

    sweep = sweep_values or None
    if sweep:
        _validate_grids(sweep)

    outdir = (flags.get("outdir") or experiment.get("outdir")
              or os.path.join("results", task))
    if not os.path.isabs(outdir):
        outdir = os.path.join(os.environ.get("SWAPQRN_OUTPUT_ROOT", "."), outdir)
    return ExperimentConfig(task=task, reservoir=reservoir, task_spec=task_spec,
                            esn=esn, n_esn_seeds=n_esn_seeds, sweep=sweep,
                            outdir=Path(outdir))


def sweep_points(cfg):
    """Enumerate the sweep grid in deterministic order (index = position)."""
    sweep = cfg.sweep or {}
    if cfg.task == "esn-baseline":
        sizes = sweep.get("n_qubits", DEFAULT_NQUBITS_GRID)
        return [SweepPoint(i, n, cfg.reservoir.gamma, cfg.reservoir.n_repeats)
                for i, n in enumerate(sizes)]
    default_sizes = (DEFAULT_NQUBITS_GRID if cfg.task == "stmc"
                     else (cfg.reservoir.n_qubits,))
    sizes = sweep.get("n_qubits", default_sizes)
    gammas = sweep.get("gamma", DEFAULT_GAMMA_GRID)
    repeats = sweep.get("n_repeats", DEFAULT_NREPEATS_GRID)
    return [SweepPoint(i, n, g, r)
            for i, (n, g, r) in enumerate(product(sizes, gammas, repeats))]


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _run_stmc_point(cfg, rc, rng):
    result = run_stmc(cfg.task_spec, rc, rng=rng)
    return {
        "r2": {str(tau): result.metrics[tau].r2 for tau in cfg.task_spec.delays},
        "rmse": {str(tau): result.metrics[tau].rmse
                 for tau in cfg.task_spec.delays},
        "mean_rmse_short": result.mean_rmse_short,
    }


def _run_narma_point(cfg, rc, rng):
    result = run_narma(cfg.task_spec, rc, rng=rng)
    return {"rmse": result.metrics.rmse, "r2": result.metrics.r2,
            "target_std": result.target_std}


def _run_esn_point(cfg, rc, rng):
    esn_cfg = replace(cfg.esn, n_nodes=rc.n_qubits // 2)
    summary = run_esn_narma(cfg.task_spec, esn_cfg, cfg.n_esn_seeds)
    return {"n_nodes": esn_cfg.n_nodes, "median": summary.median,
            "q1": summary.q1, "q3": summary.q3,
            "rmse_per_seed": summary.rmse.tolist()}


TASK_RUNNERS = {
    "stmc": _run_stmc_point,
    "narma5": _run_narma_point,
    "esn-baseline": _run_esn_point,
}


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def _execute_point(cfg, point):
    """Run one grid point; failures become error records, not crashes."""
    start = time.perf_counter()
    rc = replace(cfg.reservoir, n_qubits=point.n_qubits, gamma=point.gamma,
                 n_repeats=point.n_repeats)
    record_cfg = {"n_qubits": rc.n_qubits, "gamma": rc.gamma,
                  "n_repeats": rc.n_repeats, "c": rc.c, "n_shots": rc.n_shots,
                  "seed": rc.seed, "backend": rc.backend}
    if cfg.task == "esn-baseline":
        record_cfg["n_nodes"] = rc.n_qubits // 2
    record = {"point_index": point.index, "task": cfg.task,
              "config": record_cfg, "version": __version__, "seed": rc.seed}
    try:
        rng = (np.random.default_rng([cfg.reservoir.seed, point.index])
               if rc.backend != "exact" else None)
        record["metrics"] = _json_safe(TASK_RUNNERS[cfg.task](cfg, rc, rng))
        record["status"] = "ok"
    except Exception as exc:  # per-point failures recorded, sweep continues
        record["metrics"] = {}
        record["status"] = "error"
        record["error"] = f"{type(exc).__name__}: {exc}"
    record["wall_time_s"] = time.perf_counter() - start
    return record


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def _fmt(value):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return "nan"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _config_payload(cfg):
    payload = {
        "task": cfg.task,
        "reservoir": asdict(cfg.reservoir),
        "task_spec": _json_safe(asdict(cfg.task_spec)),
        "esn": asdict(cfg.esn) if cfg.esn is not None else None,
        "n_esn_seeds": cfg.n_esn_seeds if cfg.task == "esn-baseline" else None,
        "sweep": ({k: list(v) for k, v in cfg.sweep.items()}
                  if cfg.sweep else None),
    }
    return payload


def _metric_rows(record):
    """Tidy rows (metric, delay, value) for one successful record."""
    metrics = record["metrics"]
    if record["task"] == "stmc":
        for name in ("r2", "rmse"):
            for tau in sorted(metrics[name], key=int, reverse=True):
                yield name, tau, metrics[name][tau]
        yield "mean_rmse_short", "", metrics["mean_rmse_short"]
    elif record["task"] == "narma5":
        for name in ("rmse", "r2", "target_std"):
            yield name, "", metrics[name]
    else:
        for name in ("median", "q1", "q3"):
            yield name, "", metrics[name]


def write_results_csv(path, records):
    header = ["point_index", "task", "n_qubits", "n_nodes", "gamma",
              "n_repeats", "c", "n_shots", "backend", "seed",
              "metric", "delay", "value"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for record in records:
            if record["status"] != "ok":
                continue
            c = record["config"]
            base = [record["point_index"], record["task"], c["n_qubits"],
                    c.get("n_nodes", ""), _fmt(c["gamma"]), c["n_repeats"],
                    c["c"], c["n_shots"] if c["n_shots"] is not None else "",
                    c["backend"], c["seed"]]
            for metric, delay, value in _metric_rows(record):
                writer.writerow(base + [metric, delay, _fmt(value)])


def _write_manifest(outdir, cfg, filenames):
    payload = json.dumps(_config_payload(cfg), sort_keys=True,
                         separators=(",", ":"))
    digest = hashlib.sha256(payload.encode()).hexdigest()
    lines = [f"artifact swapqrn {__version__}", f"config_sha256 {digest}"]
    lines += [f"file {name}" for name in filenames]
    (Path(outdir) / "MANIFEST").write_text("\n".join(lines) + "\n")


def write_outputs(cfg, records):
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    payload = {"version": __version__, "task": cfg.task,
               "config": _config_payload(cfg), "records": records}
    with open(outdir / "records.json", "w") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    write_results_csv(outdir / "results.csv", records)
    _write_manifest(outdir, cfg, ["records.json", "results.csv"])
    return outdir


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------

def _write_fig_csv(path, header, rows):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def emit_plotdata(payloads, outdir):
    """Per-figure CSVs from one or more records.json payloads."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    records = [r for p in payloads for r in p["records"] if r["status"] == "ok"]
    by_task = {t: [r for r in records if r["task"] == t] for t in TASKS}
    written = []

    if by_task["stmc"]:
        rows = []
        for r in by_task["stmc"]:
            c = r["config"]
            for tau in sorted(r["metrics"]["r2"], key=int, reverse=True):
                rows.append([c["n_qubits"], c["n_repeats"], _fmt(c["gamma"]),
                             tau, _fmt(r["metrics"]["r2"][tau])])
        _write_fig_csv(outdir / "fig_stmc_r2_vs_tau.csv",
                       ["n_qubits", "n_repeats", "gamma", "tau", "r2"], rows)
        rows = []
        for r in by_task["stmc"]:
            c = r["config"]
            rows.append([c["n_qubits"], c["n_repeats"], _fmt(c["gamma"]),
                         _fmt(r["metrics"]["mean_rmse_short"]),
                         _fmt(RANDOM_GUESS_U01)])
        _write_fig_csv(outdir / "fig_stmc_rmse_vs_gamma.csv",
                       ["n_qubits", "n_repeats", "gamma", "mean_rmse_short",
                        "random_guess"], rows)
        written += ["fig_stmc_r2_vs_tau.csv", "fig_stmc_rmse_vs_gamma.csv"]

    if by_task["narma5"]:
        rows = []
        for r in by_task["narma5"]:
            c = r["config"]
            rows.append([c["n_qubits"], c["n_repeats"], _fmt(c["gamma"]),
                         _fmt(r["metrics"]["rmse"]),
                         _fmt(r["metrics"]["target_std"])])
        _write_fig_csv(outdir / "fig_narma_rmse_vs_gamma.csv",
                       ["n_qubits", "n_repeats", "gamma", "rmse",
                        "random_guess"], rows)
        written.append("fig_narma_rmse_vs_gamma.csv")

    if by_task["esn-baseline"]:
        rows = [[r["metrics"]["n_nodes"], _fmt(r["metrics"]["median"]),
                 _fmt(r["metrics"]["q1"]), _fmt(r["metrics"]["q3"])]
                for r in by_task["esn-baseline"]]
        _write_fig_csv(outdir / "fig_esn_comparison.csv",
                       ["n_nodes", "median", "q1", "q3"], rows)
        written.append("fig_esn_comparison.csv")
    return written


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_run(cfg):
    point = SweepPoint(0, cfg.reservoir.n_qubits, cfg.reservoir.gamma,
                       cfg.reservoir.n_repeats)
    record = _execute_point(cfg, point)
    outdir = write_outputs(cfg, [record])
    if record["status"] != "ok":
        print(f"run failed: {record['error']}", file=sys.stderr)
        return 1
    summary = ", ".join(f"{m}={_fmt(v)}" for m, d, v in _metric_rows(record)
                        if d == "")
    print(f"task={cfg.task} point 0 ok ({summary}) -> {outdir}")
    return 0


def cmd_sweep(cfg, workers):
    points = sweep_points(cfg)
    outdir = Path(cfg.outdir)
    staging = outdir / "points"
    staging.mkdir(parents=True, exist_ok=True)

    def stage(record):
        name = staging / f"point_{record['point_index']:04d}.json"
        with open(name, "w") as handle:
            json.dump(record, handle, indent=2)
            handle.write("\n")

    records = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_execute_point, cfg, p) for p in points]
            for future in as_completed(futures):
                record = future.result()
                stage(record)
                records.append(record)
    else:
        for point in points:
            record = _execute_point(cfg, point)
            stage(record)
            records.append(record)

    records.sort(key=lambda r: r["point_index"])
    write_outputs(cfg, records)
    n_ok = sum(r["status"] == "ok" for r in records)
    n_err = len(records) - n_ok
    print(f"task={cfg.task} sweep: {n_ok} ok, {n_err} failed, "
          f"{len(records)} points -> {outdir}")
    for record in records:
        if record["status"] != "ok":
            print(f"  point {record['point_index']} failed: {record['error']}",
                  file=sys.stderr)
    return 0 if n_ok > 0 else 1


def cmd_plotdata(records_paths, outdir):
    payloads = []
    for path in records_paths:
        with open(path) as handle:
            payloads.append(json.load(handle))
    if outdir is None:
        outdir = os.path.dirname(os.path.abspath(records_paths[0]))
    written = emit_plotdata(payloads, outdir)
    print(f"wrote {len(written)} figure files -> {outdir}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="INI config file")
    shared.add_argument("--task", choices=TASKS)
    shared.add_argument("--outdir")
    shared.add_argument("--n-qubits", type=int, dest="n_qubits")
    shared.add_argument("--gamma", type=float)
    shared.add_argument("--n-repeats", type=int, dest="n_repeats")
    shared.add_argument("--n-shots", type=int, dest="n_shots")
    shared.add_argument("--context", type=int, dest="c",
                        help="input context window length")
    shared.add_argument("--alpha", type=float, help="ridge regularization")
    shared.add_argument("--seed", type=int,
                        help="sets both the weight seed and the data seed")
    shared.add_argument("--backend", choices=BACKENDS)
    shared.add_argument("--n-esn-seeds", type=int, dest="n_esn_seeds")

    parser = argparse.ArgumentParser(
        prog="swapqrn",
        description="Reservoir-computing benchmarks on a measured quantum "
                    "register with tunable partial-SWAP readout coupling.")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("run", parents=[shared], help="execute one experiment")
    sweep = sub.add_parser("sweep", parents=[shared],
                           help="execute a parameter grid")
    sweep.add_argument("--gamma-grid", dest="gamma_grid",
                       help="comma-separated list")
    sweep.add_argument("--n-qubits-grid", dest="n_qubits_grid",
                       help="comma-separated list")
    sweep.add_argument("--n-repeats-grid", dest="n_repeats_grid",
                       help="comma-separated list")
    sweep.add_argument("--workers", type=int, default=1)
    plot = sub.add_parser("plotdata", help="emit per-figure CSVs from records")
    plot.add_argument("--records", nargs="+", required=True)
    plot.add_argument("--outdir")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "plotdata":
            return cmd_plotdata(args.records, args.outdir)
        flag_keys = ("task", "outdir", "n_qubits", "gamma", "n_repeats",
                     "n_shots", "c", "alpha", "seed", "backend", "n_esn_seeds",
                     "gamma_grid", "n_qubits_grid", "n_repeats_grid")
        flags = {k: getattr(args, k, None) for k in flag_keys}
        cfg = parse_config(config_path=args.config, flag_overrides=flags)
        if args.verb == "run":
            return cmd_run(cfg)
        return cmd_sweep(cfg, args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
