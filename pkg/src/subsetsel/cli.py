"""Command-line interface.

Subcommands: fit, fit-group, sweep, simulate, embed. Every run writes its
delimited/JSON outputs plus a run manifest into --out; report figures render
alongside unless --no-figures is given. Wall-clock timings live only in the
manifest so that all other outputs are byte-identical across reruns with
the same seed.

Exit codes: 0 success, 2 input/parse failure, 3 invalid configuration,
4 solver guard (shape or domain violations).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .core import (
    DesignMatrix,
    GroupStructure,
    ResponseBlock,
    SelectionProblem,
    read_numeric_csv,
)
from .embeddings import (
    GraphSpec,
    default_levels,
    empirical_quantiles,
    kde_density,
    laplacian_embed,
)
from .errors import (
    AsymmetricAdjacency,
    ConfigError,
    CsvFormatError,
    DimensionMismatch,
    DomainBoundary,
    GridMismatch,
    IndexOutOfRange,
    InfeasibleBudget,
    InvalidGrouping,
    InvalidLabel,
    InvalidPenalty,
    NonFiniteData,
    NonPositiveBandwidth,
    NotOLS,
    ShapeMismatch,
    TooFewSamples,
    TooLarge,
)
from .losses import LossSpec, broadcast_losses
from .simulation import MultivariateScenario, WassersteinScenario, run_study
from .solver import SolverConfig, fit, fit_group

THREADS_ENV = "SUBSETSEL_THREADS"

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_GUARD = 4

_IO_ERRORS = (OSError, CsvFormatError, NonFiniteData)
_GUARD_ERRORS = (
    DimensionMismatch,
    NotOLS,
    DomainBoundary,
    TooLarge,
    ShapeMismatch,
    TooFewSamples,
    NonPositiveBandwidth,
    GridMismatch,
    AsymmetricAdjacency,
    IndexOutOfRange,
)
_CONFIG_ERRORS = (
    ConfigError,
    InfeasibleBudget,
    InvalidPenalty,
    InvalidLabel,
    InvalidGrouping,
    ValueError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetsel",
        description="Budgeted feature selection for multi-response regression.",
        epilog="Exit codes: 0 ok, 2 input/parse failure, 3 invalid "
        "configuration, 4 solver guard.",
    )
    parser.add_argument("--version", action="version", version=f"subsetsel {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_fit_flags(p, group: bool = False):
        p.add_argument("--x", required=True, help="design CSV (headered, numeric)")
        p.add_argument("--y", required=True, help="response CSV (headered, numeric)")
        if group:
            p.add_argument(
                "--groups",
                required=True,
                help="CSV with a 'group' column, one row per design column",
            )
        p.add_argument("--gamma", required=True, type=float, help="ridge weight, > 0")
        p.add_argument(
            "--loss",
            default="ols",
            help="comma list of per-coordinate losses (ols, pinball:<q>, "
            "logistic); shorter lists repeat the last entry",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--stall-window", type=int, default=25)
        p.add_argument("--step-size", default="auto", help="positive float or 'auto'")
        p.add_argument("--standardize", choices=("on", "off"), default="on")
        p.add_argument(
            "--mode",
            choices=("subgradient", "ols_alternating"),
            default="subgradient",
        )
        p.add_argument(
            "--no-refit",
            action="store_true",
            help="skip the dual polish on the final support (non-OLS losses)",
        )
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default ${THREADS_ENV} or 1)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--no-figures", action="store_true")

    p_fit = sub.add_parser("fit", help="select k features")
    add_fit_flags(p_fit)
    p_fit.add_argument("--k", required=True, type=int, help="selection budget")

    p_group = sub.add_parser("fit-group", help="select k feature groups")
    add_fit_flags(p_group, group=True)
    p_group.add_argument("--k", required=True, type=int, help="group budget")

    p_sweep = sub.add_parser("sweep", help="one fit per budget in a list")
    add_fit_flags(p_sweep)
    p_sweep.add_argument("--k-list", required=True, help="comma list of budgets")

    p_sim = sub.add_parser("simulate", help="run a synthetic study from a config file")
    p_sim.add_argument("--config", required=True, help="key = value study config")
    p_sim.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default ${THREADS_ENV} or 1)")
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--no-figures", action="store_true")

    p_emb = sub.add_parser("embed", help="turn raw observations into response rows")
    p_emb.add_argument(
        "--mode", choices=("quantile", "density", "graph"), default="quantile"
    )
    p_emb.add_argument(
        "--input",
        nargs="+",
        required=True,
        help="long-format CSV with id,value columns (quantile/density) or "
        "adjacency CSVs, one per graph",
    )
    p_emb.add_argument("--levels", type=int, default=20, help="quantile grid size")
    p_emb.add_argument("--bandwidth", type=float, default=None)
    p_emb.add_argument("--grid-min", type=float, default=None)
    p_emb.add_argument("--grid-max", type=float, default=None)
    p_emb.add_argument("--grid-points", type=int, default=50)
    p_emb.add_argument("--out", required=True)
    p_emb.add_argument("--no-figures", action="store_true")
    return parser


def _resolve_threads(value) -> int:
    if value is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            value = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"thread count must be at least 1, got {value}")
    return int(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _write_manifest(outdir: Path, subcommand, argv, inputs, config, seed, threads,
                    outputs, timings) -> None:
    manifest = {
        "tool": "subsetsel",
        "version": __version__,
        "subcommand": subcommand,
        "argv": list(argv),
        "inputs": inputs,
        "config": config,
        "seed": seed,
        "threads": threads,
        "outputs": sorted(outputs),
        "timings": timings,
    }
    _write_json(outdir / "manifest.json", manifest)


def _solver_config(args) -> SolverConfig:
    step = args.step_size
    if step != "auto":
        step = float(step)
    return SolverConfig(
        step_size=step,
        max_iters=args.max_iters,
        stall_window=args.stall_window,
        seed=args.seed,
        mode=args.mode,
        standardize=args.standardize == "on",
        refit=not args.no_refit,
    )


def _parse_losses(text: str, m: int):
    specs = [LossSpec.parse(part) for part in text.split(",") if part.strip()]
    if not specs:
        raise ConfigError("--loss must name at least one loss")
    return broadcast_losses(specs, m)


def _load_groups(path, X: DesignMatrix) -> GroupStructure:
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    if "group" not in frame.columns:
        raise CsvFormatError(f"{path} needs a 'group' column")
    labels = frame["group"].tolist()
    if len(labels) != X.p:
        raise DimensionMismatch(
            f"{len(labels)} group rows for {X.p} design columns"
        )
    return GroupStructure.from_labels(labels)


def _result_payload(result, problem, args, Y: ResponseBlock) -> dict:
    return {
        "selected_indices": result.selected,
        "selected_features": result.selected_names,
        "support": result.support.astype(int),
        "group_support": None
        if result.group_support is None
        else result.group_support.astype(int),
        "beta": result.beta,
        "intercept": result.intercept,
        "objective": result.objective,
        "tight": result.tight,
        "gap": result.gap,
        "iterations": result.iterations,
        "k": problem.k,
        "gamma": problem.gamma,
        "losses": [spec.label() for spec in problem.losses],
        "mode": result.mode,
        "standardize": args.standardize == "on",
        "feature_names": result.feature_names,
        "coordinate_labels": Y.coordinate_labels,
    }


def _beta_frame(result, Y: ResponseBlock, groups=None) -> pd.DataFrame:
    data = {
        "feature": result.feature_names,
        "selected": result.support.astype(int),
    }
    if groups is not None:
        data["group"] = groups.assignment
    for t, label in enumerate(Y.coordinate_labels):
        data[label] = result.beta[:, t]
    return pd.DataFrame(data)


def cmd_fit(args, argv) -> int:
    t0 = time.perf_counter()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    X = DesignMatrix.from_csv(args.x)
    Y = ResponseBlock.from_csv(args.y)
    grouped = args.subcommand == "fit-group"
    groups = _load_groups(args.groups, X) if grouped else None
    losses = _parse_losses(args.loss, Y.m)
    problem = SelectionProblem(losses, args.k, args.gamma, groups)
    config = _solver_config(args)
    threads = _resolve_threads(args.threads)

    result = fit_group(X, Y, problem, config) if grouped else fit(X, Y, problem, config)

    outputs = ["result.json", "beta.csv"]
    _write_json(outdir / "result.json", _result_payload(result, problem, args, Y))
    _beta_frame(result, Y, groups).to_csv(outdir / "beta.csv", index=False)
    if not args.no_figures:
        from .report import save_fit_figure

        save_fit_figure(result, Y.coordinate_labels, outdir / "coefficients.png")
        outputs.append("coefficients.png")

    inputs = {"x": args.x, "y": args.y}
    if grouped:
        inputs["groups"] = args.groups
    _write_manifest(
        outdir,
        args.subcommand,
        argv,
        inputs,
        {
            "k": args.k,
            "gamma": args.gamma,
            "loss": args.loss,
            "max_iters": args.max_iters,
            "stall_window": args.stall_window,
            "step_size": args.step_size,
            "standardize": args.standardize,
            "mode": args.mode,
            "refit": not args.no_refit,
        },
        args.seed,
        threads,
        outputs,
        {"total_s": time.perf_counter() - t0, "fit_s": result.wall_time_s},
    )
    sel = ", ".join(result.selected_names)
    print(f"selected [{sel}] objective {result.objective:.6g} tight {result.tight}")
    return EXIT_OK


def cmd_sweep(args, argv) -> int:
    t0 = time.perf_counter()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    X = DesignMatrix.from_csv(args.x)
    Y = ResponseBlock.from_csv(args.y)
    losses = _parse_losses(args.loss, Y.m)
    config = _solver_config(args)
    threads = _resolve_threads(args.threads)
    try:
        ks = [int(part) for part in args.k_list.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"--k-list must be a comma list of integers: {exc}") from exc
    if not ks:
        raise ConfigError("--k-list must name at least one budget")

    rows = []
    entries = []
    fit_seconds = 0.0
    for k in ks:
        problem = SelectionProblem(losses, k, args.gamma)
        result = fit(X, Y, problem, config)
        fit_seconds += result.wall_time_s
        rows.append(
            {
                "k": k,
                "objective": result.objective,
                "tight": result.tight,
                "gap": result.gap,
                "iterations": result.iterations,
                "selected": ";".join(result.selected_names),
            }
        )
        entries.append(
            {
                "k": k,
                "objective": result.objective,
                "tight": result.tight,
                "gap": result.gap,
                "iterations": result.iterations,
                "selected_indices": result.selected,
                "selected_features": result.selected_names,
            }
        )
    frame = pd.DataFrame(rows)
    frame.to_csv(outdir / "sweep.csv", index=False)
    _write_json(outdir / "sweep.json", {"k_list": ks, "results": entries})
    outputs = ["sweep.csv", "sweep.json"]
    if not args.no_figures:
        from .report import save_sweep_figure

        save_sweep_figure(
            frame["k"], frame["objective"], frame["tight"], outdir / "sweep.png"
        )
        outputs.append("sweep.png")
    _write_manifest(
        outdir,
        "sweep",
        argv,
        {"x": args.x, "y": args.y},
        {
            "k_list": args.k_list,
            "gamma": args.gamma,
            "loss": args.loss,
            "max_iters": args.max_iters,
            "stall_window": args.stall_window,
            "step_size": args.step_size,
            "standardize": args.standardize,
            "mode": args.mode,
            "refit": not args.no_refit,
        },
        args.seed,
        threads,
        outputs,
        {"total_s": time.perf_counter() - t0, "fit_s": fit_seconds},
    )
    print(frame.to_string(index=False))
    return EXIT_OK


def parse_config(path) -> dict:
    """Parse a declarative key = value file; comma values become lists."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        parts = [p.strip() for p in value.split(",")]
        if any(not p for p in parts):
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        out[key] = parts
    return out


def _cfg_take(cfg: dict, key: str, default=None, required: bool = False):
    if key in cfg:
        return cfg.pop(key)
    if required:
        raise ConfigError(f"config is missing required key {key!r}")
    return default


def _scalar(values, key: str, cast):
    if values is None:
        return None
    if len(values) != 1:
        raise ConfigError(f"config key {key!r} must be a single value")
    try:
        return cast(values[0])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc


def _grid(values, key: str, cast):
    try:
        return [cast(v) for v in values]
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc


def _study_solver_config(cfg: dict) -> SolverConfig:
    step = _scalar(_cfg_take(cfg, "step_size", ["auto"]), "step_size", str)
    if step != "auto":
        step = float(step)
    standardize = _scalar(_cfg_take(cfg, "standardize", ["on"]), "standardize", str)
    if standardize not in ("on", "off"):
        raise ConfigError("config key 'standardize' must be on or off")
    return SolverConfig(
        step_size=step,
        max_iters=_scalar(_cfg_take(cfg, "max_iters", ["500"]), "max_iters", int),
        stall_window=_scalar(_cfg_take(cfg, "stall_window", ["25"]), "stall_window", int),
        mode=_scalar(_cfg_take(cfg, "mode", ["subgradient"]), "mode", str),
        standardize=standardize == "on",
    )


def _build_scenarios(cfg: dict):
    """Expand the config grid into scenarios plus run-level settings."""
    study = _scalar(_cfg_take(cfg, "study", required=True), "study", str)
    reps = _scalar(_cfg_take(cfg, "reps", ["50"]), "reps", int)
    seed = _scalar(_cfg_take(cfg, "seed", ["0"]), "seed", int)
    gamma = _scalar(_cfg_take(cfg, "gamma", ["auto"]), "gamma", str)
    if gamma != "auto":
        gamma = float(gamma)
    config = _study_solver_config(cfg)

    scenarios = []
    if study == "multivariate":
        ns = _grid(_cfg_take(cfg, "n", required=True), "n", int)
        ps = _grid(_cfg_take(cfg, "p", required=True), "p", int)
        ms = _grid(_cfg_take(cfg, "m", required=True), "m", int)
        rxs = _grid(_cfg_take(cfg, "rho_x", ["0"]), "rho_x", float)
        rys = _grid(_cfg_take(cfg, "rho_y", ["0"]), "rho_y", float)
        effects = _grid(_cfg_take(cfg, "effect", required=True), "effect", float)
        s_true = tuple(_grid(_cfg_take(cfg, "s_true", ["0", "1"]), "s_true", int))
        if cfg:
            raise ConfigError(f"unknown config keys: {sorted(cfg)}")
        for i, (n, p, m, rx, ry, eff) in enumerate(
            itertools.product(ns, ps, ms, rxs, rys, effects)
        ):
            scenarios.append(
                MultivariateScenario(
                    n=n, p=p, m=m, rho_x=rx, rho_y=ry, effect=eff,
                    s_true=s_true, seed=seed + i,
                )
            )
    elif study == "wasserstein":
        ns = _grid(_cfg_take(cfg, "n", required=True), "n", int)
        ms = _grid(_cfg_take(cfg, "m", required=True), "m", int)
        budgets = _grid(_cfg_take(cfg, "budget", ["1"]), "budget", int)
        fixed = {
            "p": _scalar(_cfg_take(cfg, "p", ["10"]), "p", int),
            "rho": _scalar(_cfg_take(cfg, "rho", ["0.5"]), "rho", float),
            "mean_base": _scalar(_cfg_take(cfg, "mean_base", ["0"]), "mean_base", float),
            "scale_base": _scalar(_cfg_take(cfg, "scale_base", ["3"]), "scale_base", float),
            "mean_effect": _scalar(
                _cfg_take(cfg, "mean_effect", ["3"]), "mean_effect", float
            ),
            "scale_effect": _scalar(
                _cfg_take(cfg, "scale_effect", ["0.5"]), "scale_effect", float
            ),
            "mean_noise_var": _scalar(
                _cfg_take(cfg, "mean_noise_var", ["1"]), "mean_noise_var", float
            ),
            "scale_noise_var": _scalar(
                _cfg_take(cfg, "scale_noise_var", ["2"]), "scale_noise_var", float
            ),
            "true_index": _scalar(_cfg_take(cfg, "true_index", ["3"]), "true_index", int),
        }
        if cfg:
            raise ConfigError(f"unknown config keys: {sorted(cfg)}")
        for i, (n, m, budget) in enumerate(itertools.product(ns, ms, budgets)):
            scenarios.append(
                WassersteinScenario(n=n, m=m, budget=budget, seed=seed + i, **fixed)
            )
    else:
        raise ConfigError(f"unknown study {study!r}")
    return study, scenarios, reps, seed, gamma, config


def cmd_simulate(args, argv) -> int:
    t0 = time.perf_counter()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = parse_config(args.config)
    study, scenarios, reps, seed, gamma, config = _build_scenarios(cfg)
    threads = _resolve_threads(args.threads)

    frames = []
    for scenario in scenarios:
        g = 1.0 / scenario.n if gamma == "auto" else gamma
        frames.append(run_study([scenario], reps, g, config, threads))
    frame = pd.concat(frames, ignore_index=True)
    frame.to_csv(outdir / "results.csv", index=False)
    outputs = ["results.csv"]
    if not args.no_figures:
        from .report import save_study_figure

        save_study_figure(frame, study, outdir / "study.png")
        outputs.append("study.png")
    _write_manifest(
        outdir,
        "simulate",
        argv,
        {"config": args.config},
        {"study": study, "reps": reps, "gamma": gamma, "scenarios": len(scenarios)},
        seed,
        threads,
        outputs,
        {"total_s": time.perf_counter() - t0},
    )
    print(frame.to_string(index=False))
    return EXIT_OK


def _read_long_csv(path) -> list:
    """Read an id,value file into (id, samples) pairs in appearance order."""
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    cols = {c.strip().lower(): c for c in frame.columns}
    if "id" not in cols or "value" not in cols:
        raise CsvFormatError(f"{path} needs 'id' and 'value' columns")
    ids = frame[cols["id"]]
    values = pd.to_numeric(frame[cols["value"]], errors="coerce").to_numpy()
    if np.isnan(values).any() or np.isinf(values).any():
        raise NonFiniteData(f"{path}: 'value' column has non-numeric or non-finite entries")
    pairs = []
    for key, chunk in frame.groupby(ids, sort=False):
        pairs.append((key, pd.to_numeric(chunk[cols["value"]]).to_numpy(dtype=np.float64)))
    return pairs


def cmd_embed(args, argv) -> int:
    t0 = time.perf_counter()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs = []
    if args.mode in ("quantile", "density"):
        if len(args.input) != 1:
            raise ConfigError(f"--mode {args.mode} takes exactly one input file")
        pairs = _read_long_csv(args.input[0])
        if args.mode == "quantile":
            if args.levels < 1:
                raise ConfigError("--levels must be at least 1")
            levels = default_levels(args.levels)
            rows = [empirical_quantiles(samples, levels).values for _, samples in pairs]
            frame = pd.DataFrame(rows, columns=[f"q{lev:g}" for lev in levels])
            frame.insert(0, "id", [key for key, _ in pairs])
            frame.to_csv(outdir / "curves.csv", index=False)
            outputs.append("curves.csv")
            if not args.no_figures:
                from .report import save_curves_figure

                save_curves_figure(
                    levels, np.asarray(rows), outdir / "curves.png",
                    "level", "quantile",
                )
                outputs.append("curves.png")
            config = {"mode": "quantile", "levels": args.levels}
        else:
            if args.bandwidth is None:
                raise ConfigError("--mode density needs --bandwidth")
            if args.grid_min is None or args.grid_max is None:
                raise ConfigError("--mode density needs --grid-min and --grid-max")
            if args.grid_points < 2 or not args.grid_max > args.grid_min:
                raise ConfigError("density grid must be increasing with at least 2 points")
            grid = np.linspace(args.grid_min, args.grid_max, args.grid_points)
            rows = [
                kde_density(samples, args.bandwidth, grid).values
                for _, samples in pairs
            ]
            frame = pd.DataFrame(rows, columns=[f"d{g:g}" for g in grid])
            frame.insert(0, "id", [key for key, _ in pairs])
            frame.to_csv(outdir / "densities.csv", index=False)
            outputs.append("densities.csv")
            if not args.no_figures:
                from .report import save_curves_figure

                save_curves_figure(
                    grid, np.asarray(rows), outdir / "densities.png",
                    "value", "density",
                )
                outputs.append("densities.png")
            config = {
                "mode": "density",
                "bandwidth": args.bandwidth,
                "grid_min": args.grid_min,
                "grid_max": args.grid_max,
                "grid_points": args.grid_points,
            }
    else:
        rows = []
        names = []
        size = None
        for path in args.input:
            frame = read_numeric_csv(path)
            A = frame.to_numpy(dtype=np.float64)
            graph = GraphSpec(A)
            if size is None:
                size = graph.num_vertices
            elif graph.num_vertices != size:
                raise DimensionMismatch(
                    f"{path} has {graph.num_vertices} vertices, expected {size}"
                )
            rows.append(laplacian_embed(graph))
            names.append(Path(path).stem)
        columns = [f"l_{r}_{c}" for r in range(size) for c in range(size)]
        frame = pd.DataFrame(rows, columns=columns)
        frame.insert(0, "graph", names)
        frame.to_csv(outdir / "laplacian.csv", index=False)
        outputs.append("laplacian.csv")
        if not args.no_figures:
            from .report import save_curves_figure

            save_curves_figure(
                np.arange(size * size), np.asarray(rows), outdir / "laplacian.png",
                "entry (row-major)", "value",
            )
            outputs.append("laplacian.png")
        config = {"mode": "graph", "graphs": len(rows)}

    _write_manifest(
        outdir,
        "embed",
        argv,
        {"input": list(args.input)},
        config,
        0,
        1,
        outputs,
        {"total_s": time.perf_counter() - t0},
    )
    print(f"wrote {', '.join(sorted(outputs))} to {outdir}")
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand in ("fit", "fit-group"):
            return cmd_fit(args, argv)
        if args.subcommand == "sweep":
            return cmd_sweep(args, argv)
        if args.subcommand == "simulate":
            return cmd_simulate(args, argv)
        return cmd_embed(args, argv)
    except _IO_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _GUARD_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
