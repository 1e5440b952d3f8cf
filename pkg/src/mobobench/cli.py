"""Command-line interface: synth / validate / run / suite / report.

Every run and suite writes its fully resolved configuration next to its
outputs, and that file feeds back through --config to reproduce the run
(explicit flags override file values). Round logs are byte-identical across
repeated invocations with the same inputs; wall-clock columns are zeroed
unless --timings is given, since timing is the one field that honest
re-measurement would change.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from .acquisition import ACQUISITION_KINDS, AcquisitionConfig
from .data import (
    DatasetError,
    generate_synthetic,
    load_dataset,
    read_round_log,
    write_dataset,
    write_round_log,
    write_summary,
)
from .engine import (
    DEFAULT_CIRCLES_THRESHOLDS,
    RNG_ALGORITHM,
    RunConfig,
    RunRecord,
    derive_streams,
    run,
    run_suite,
)
from .gp import GPHyperparams
from .metrics import generate_directions, n_circles, r2_indicator
from .pareto import hypervolume_exact, non_dominated_filter

__all__ = ["main", "entry", "RUN_CONFIG_FORMAT", "SUITE_CONFIG_FORMAT", "REPORT_FORMAT"]

RUN_CONFIG_FORMAT = "mobo-run-config/1"
SUITE_CONFIG_FORMAT = "mobo-suite-config/1"
REPORT_FORMAT = "mobo-report/1"

_RUN_DEFAULTS = {
    "acquisition": "ehvi",
    "seed": 0,
    "rounds": 200,
    "init_size": 10,
    "mc_samples": 1000,
    "fresh_draws": False,
    "ref": None,
    "weights": None,
    "kernel": "minmax",
    "directions_granularity": 12,
    "circles_thresholds": list(DEFAULT_CIRCLES_THRESHOLDS),
    "workers": 1,
    "timings": False,
    "gp": {"amplitude": 1.0, "noise_variance": 1e-4, "mean": 0.0},
}

_SUITE_DEFAULTS = dict(
    _RUN_DEFAULTS,
    acquisitions=["ehvi", "scalarized_ei", "random"],
    seeds=[0, 1, 2],
    trial_workers=1,
)
del _SUITE_DEFAULTS["acquisition"], _SUITE_DEFAULTS["seed"]


def _cli_kind(kind: str) -> str:
    return kind.replace("_", "-")


def _internal_kind(kind: str) -> str:
    out = kind.replace("-", "_")
    if out not in ACQUISITION_KINDS:
        raise ValueError(
            f"unknown acquisition {kind!r}; expected one of "
            + ", ".join(_cli_kind(k) for k in ACQUISITION_KINDS)
        )
    return out


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobobench",
        description="Pool-based multi-objective Bayesian optimization benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="emit a synthetic benchmark dataset")
    p_synth.add_argument("--out", required=True, help="output dataset path")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--n", type=int, required=True, help="number of molecules")
    p_synth.add_argument("--d", type=int, default=3, help="number of objectives")
    p_synth.add_argument("--n-features", type=int, default=512)
    p_synth.add_argument("--density", type=float, default=0.05)

    p_val = sub.add_parser("validate", help="check a dataset file against the format contract")
    p_val.add_argument("dataset", help="dataset path")

    def add_run_flags(p: argparse.ArgumentParser, suite: bool) -> None:
        p.add_argument("--dataset", required=True)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--config", default=None, help="resolved config file to replay; flags override")
        if suite:
            p.add_argument("--acquisitions", default=None, help="comma-separated kinds")
            p.add_argument("--seeds", default=None, help="comma-separated master seeds")
            p.add_argument("--trial-workers", type=int, default=None)
        else:
            p.add_argument("--acquisition", default=None, help="ehvi | scalarized-ei | random")
            p.add_argument("--seed", type=int, default=None)
        p.add_argument("--rounds", type=int, default=None)
        p.add_argument("--init-size", type=int, default=None)
        p.add_argument("--mc-samples", type=int, default=None)
        p.add_argument("--fresh-draws", action=argparse.BooleanOptionalAction, default=None,
                       help="draw a fresh MC matrix per candidate instead of sharing one per round")
        p.add_argument("--ref", default=None, help="comma-separated reference point (default: origin)")
        p.add_argument("--weights", default=None, help="comma-separated scalarization weights (default: uniform)")
        p.add_argument("--kernel", default=None, help="minmax | tanimoto")
        p.add_argument("--directions-granularity", type=int, default=None)
        p.add_argument("--circles-thresholds", default=None, help="comma-separated distance thresholds")
        p.add_argument("--workers", type=int, default=None, help="threads for acquisition scoring")
        p.add_argument("--timings", action=argparse.BooleanOptionalAction, default=None,
                       help="record real per-round wall time instead of zeros")

    p_run = sub.add_parser("run", help="one (dataset, acquisition, seed) optimization trial")
    add_run_flags(p_run, suite=False)

    p_suite = sub.add_parser("suite", help="acquisitions x seeds benchmark with a summary report")
    add_run_flags(p_suite, suite=True)

    p_rep = sub.add_parser("report", help="recompute and cross-check metrics from a round log")
    p_rep.add_argument("--config", required=True, help="resolved run config written next to the log")
    p_rep.add_argument("--log", required=True, help="round_log.csv path")
    p_rep.add_argument("--out", required=True, help="report JSON path")

    return parser


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return obj


def _resolve(flag_value, file_config: dict, key: str, defaults: dict):
    if flag_value is not None:
        return flag_value
    if key in file_config:
        return file_config[key]
    return defaults[key]


def _resolve_common(args: argparse.Namespace, file_config: dict, defaults: dict) -> dict:
    cfg: dict = {}
    cfg["rounds"] = int(_resolve(args.rounds, file_config, "rounds", defaults))
    cfg["init_size"] = int(_resolve(args.init_size, file_config, "init_size", defaults))
    cfg["mc_samples"] = int(_resolve(args.mc_samples, file_config, "mc_samples", defaults))
    cfg["fresh_draws"] = bool(_resolve(args.fresh_draws, file_config, "fresh_draws", defaults))
    ref = _resolve(_float_list(args.ref) if args.ref is not None else None, file_config, "ref", defaults)
    cfg["ref"] = None if ref is None else [float(x) for x in ref]
    weights = _resolve(
        _float_list(args.weights) if args.weights is not None else None, file_config, "weights", defaults
    )
    cfg["weights"] = None if weights is None else [float(x) for x in weights]
    cfg["kernel"] = str(_resolve(args.kernel, file_config, "kernel", defaults))
    cfg["directions_granularity"] = int(
        _resolve(args.directions_granularity, file_config, "directions_granularity", defaults)
    )
    thresholds = _resolve(
        _float_list(args.circles_thresholds) if args.circles_thresholds is not None else None,
        file_config,
        "circles_thresholds",
        defaults,
    )
    cfg["circles_thresholds"] = [float(t) for t in thresholds]
    cfg["workers"] = int(_resolve(args.workers, file_config, "workers", defaults))
    cfg["timings"] = bool(_resolve(args.timings, file_config, "timings", defaults))
    gp = _resolve(None, file_config, "gp", defaults)
    cfg["gp"] = {
        "amplitude": float(gp["amplitude"]),
        "noise_variance": float(gp["noise_variance"]),
        "mean": float(gp["mean"]),
    }
    return cfg


def _concretize(cfg: dict, d: int, *, needs_weights: bool) -> dict:
    # no hidden defaults: the echoed config carries the vectors actually used
    out = dict(cfg)
    out["ref"] = [0.0] * d if cfg["ref"] is None else cfg["ref"]
    if needs_weights and cfg["weights"] is None:
        out["weights"] = [1.0 / d] * d
    out["rng"] = RNG_ALGORITHM
    return out


def _run_config(cfg: dict, kind: str, seed: int) -> RunConfig:
    acq = AcquisitionConfig(
        kind=kind,
        ref=tuple(cfg["ref"]),
        weights=tuple(cfg["weights"]) if (kind == "scalarized_ei" and cfg["weights"] is not None) else None,
        mc_samples=cfg["mc_samples"],
        fresh_draws=cfg["fresh_draws"],
    )
    return RunConfig(
        acquisition=acq,
        rounds=cfg["rounds"],
        init_size=cfg["init_size"],
        master_seed=seed,
        ref=tuple(cfg["ref"]),
        directions_granularity=cfg["directions_granularity"],
        circles_thresholds=tuple(cfg["circles_thresholds"]),
        kernel=cfg["kernel"],
        hyperparams=GPHyperparams(
            amplitude=cfg["gp"]["amplitude"],
            noise_variance=cfg["gp"]["noise_variance"],
            mean=cfg["gp"]["mean"],
        ),
        workers=cfg["workers"],
    )


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _zero_wall(records: list[RunRecord]) -> list[RunRecord]:
    return [replace(rec, wall_ms=0.0) for rec in records]


def _cmd_synth(args: argparse.Namespace) -> int:
    header, pool = generate_synthetic(
        seed=args.seed, n=args.n, d=args.d, n_features=args.n_features, density=args.density
    )
    write_dataset(args.out, header, pool)
    _write_json(
        args.out + ".config.json",
        {
            "format": "mobo-synth-config/1",
            "seed": args.seed,
            "n": args.n,
            "d": args.d,
            "n_features": args.n_features,
            "density": args.density,
            "out": args.out,
        },
    )
    print(f"wrote {len(pool)} records ({pool.dimension} objectives) to {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    header, pool = load_dataset(args.dataset)
    print(
        f"{args.dataset}: valid {header.format_version} dataset, task {header.task!r}, "
        f"{len(pool)} records, {pool.dimension} objectives"
    )
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    file_config = _load_config_file(args.config)
    cfg = _resolve_common(args, file_config, _RUN_DEFAULTS)
    kind = _internal_kind(str(_resolve(args.acquisition, file_config, "acquisition", _RUN_DEFAULTS)))
    seed = int(_resolve(args.seed, file_config, "seed", _RUN_DEFAULTS))
    dataset_path = args.dataset

    header, pool = load_dataset(dataset_path)
    cfg = _concretize(cfg, pool.dimension, needs_weights=kind == "scalarized_ei")
    run_config = _run_config(cfg, kind, seed)

    result = run(pool, run_config)
    os.makedirs(args.out, exist_ok=True)
    records = result.records if cfg["timings"] else _zero_wall(result.records)
    log_path = os.path.join(args.out, "round_log.csv")
    write_round_log(records, log_path, n_objectives=pool.dimension)
    echo = dict(cfg)
    echo.update(
        {"format": RUN_CONFIG_FORMAT, "dataset": dataset_path, "task": header.task,
         "acquisition": kind, "seed": seed}
    )
    _write_json(os.path.join(args.out, "config.json"), echo)
    final = records[-1] if records else None
    if final is not None:
        print(
            f"run complete: {kind}, seed {seed}, {len(records)} rounds, "
            f"final hv {format(final.hypervolume, '.6g')}, final r2 {format(final.r2, '.6g')}"
        )
    else:
        print(f"run complete: {kind}, seed {seed}, 0 rounds")
    print(f"wrote {log_path}")
    return 0


def _cmd_suite(args: argparse.Namespace) -> int:
    file_config = _load_config_file(args.config)
    cfg = _resolve_common(args, file_config, _SUITE_DEFAULTS)
    raw_kinds = _resolve(
        [tok.strip() for tok in args.acquisitions.split(",") if tok.strip()] if args.acquisitions else None,
        file_config,
        "acquisitions",
        _SUITE_DEFAULTS,
    )
    kinds = [_internal_kind(str(k)) for k in raw_kinds]
    seeds = [
        int(s)
        for s in _resolve(
            _int_list(args.seeds) if args.seeds is not None else None, file_config, "seeds", _SUITE_DEFAULTS
        )
    ]
    trial_workers = int(_resolve(args.trial_workers, file_config, "trial_workers", _SUITE_DEFAULTS))

    header, pool = load_dataset(args.dataset)
    cfg = _concretize(cfg, pool.dimension, needs_weights="scalarized_ei" in kinds)
    base = _run_config(cfg, kinds[0], seeds[0])
    suite = run_suite(pool, base, seeds, kinds, trial_workers=trial_workers)

    os.makedirs(args.out, exist_ok=True)
    for trial in suite.trials:
        trial_dir = os.path.join(args.out, f"{trial.acquisition}_seed{trial.seed}")
        os.makedirs(trial_dir, exist_ok=True)
        records = trial.records if cfg["timings"] else _zero_wall(trial.records)
        write_round_log(records, os.path.join(trial_dir, "round_log.csv"), n_objectives=pool.dimension)
    text_path = os.path.join(args.out, "summary.txt")
    json_path = os.path.join(args.out, "summary.json")
    write_summary(suite, text_path, json_path)
    echo = dict(cfg)
    echo.update(
        {"format": SUITE_CONFIG_FORMAT, "dataset": args.dataset, "task": header.task,
         "acquisitions": kinds, "seeds": seeds, "trial_workers": trial_workers}
    )
    _write_json(os.path.join(args.out, "config.json"), echo)
    for kind in kinds:
        m = suite.methods[kind]
        print(
            f"{kind}: final hv {format(m.hv_mean, '.6g')} ± {format(m.hv_std, '.6g')}, "
            f"final r2 {format(m.r2_mean, '.6g')} ± {format(m.r2_std, '.6g')}"
        )
    print(f"wrote {text_path} and {json_path}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    cfg = _load_config_file(args.config)
    for key in ("dataset", "seed", "init_size", "ref", "directions_granularity",
                "circles_thresholds", "acquisition"):
        if key not in cfg:
            raise ValueError(f"{args.config}: missing key {key!r}; not a resolved run config")
    records = read_round_log(args.log)
    _, pool = load_dataset(cfg["dataset"])
    d = pool.dimension
    ref = np.asarray(cfg["ref"], dtype=np.float64)
    if ref.shape != (d,):
        raise ValueError(f"config ref has dimension {ref.shape}, dataset has {d}")
    directions = generate_directions(d, int(cfg["directions_granularity"]))

    rngs = derive_streams(int(cfg["seed"]))
    init_size = int(cfg["init_size"])
    if init_size > len(pool):
        raise ValueError(f"init_size {init_size} exceeds pool size {len(pool)}")
    init_idx = rngs.init.choice(len(pool), size=init_size, replace=False)
    ids = [pool.ids[int(i)] for i in init_idx]

    curves = {"round": [], "hv": [], "r2": []}
    for i, rec in enumerate(records, start=1):
        if rec.round_index != i:
            raise ValueError(f"{args.log}: round {i} is recorded as {rec.round_index}")
        idx = pool.index_of(rec.selected_id)
        logged = np.asarray(rec.objectives)
        actual = pool.objectives[idx]
        if logged.shape != actual.shape or not np.all(logged == actual):
            raise ValueError(
                f"{args.log}: round {i}: objectives for {rec.selected_id!r} do not match the dataset"
            )
        if rec.selected_id in ids:
            raise ValueError(f"{args.log}: round {i}: {rec.selected_id!r} selected twice")
        ids.append(rec.selected_id)
        values = pool.objectives[[pool.index_of(mol_id) for mol_id in ids]]
        hv = hypervolume_exact(values, ref)
        r2 = r2_indicator(values, directions)
        if hv != rec.hypervolume:
            raise ValueError(
                f"{args.log}: round {i}: hv mismatch (logged {rec.hypervolume!r}, recomputed {hv!r})"
            )
        if r2 != rec.r2:
            raise ValueError(
                f"{args.log}: round {i}: r2 mismatch (logged {rec.r2!r}, recomputed {r2!r})"
            )
        curves["round"].append(i)
        curves["hv"].append(hv)
        curves["r2"].append(r2)

    values = pool.objectives[[pool.index_of(mol_id) for mol_id in ids]]
    front = non_dominated_filter(
        (mol_id, pool.objectives[pool.index_of(mol_id)]) for mol_id in ids
    )
    front_fps = [pool.fingerprints[pool.index_of(mol_id)] for mol_id in front.ids]
    circles = {
        format(float(t), ".2f"): n_circles(front_fps, float(t)) for t in cfg["circles_thresholds"]
    }
    report = {
        "format": REPORT_FORMAT,
        "config": cfg,
        "log": args.log,
        "rounds": len(records),
        "verified": True,
        "final_hypervolume": hypervolume_exact(values, ref),
        "final_r2": r2_indicator(values, directions),
        "front": [
            {"id": mol_id, "objectives": [float(v) for v in pool.objectives[pool.index_of(mol_id)]]}
            for mol_id in front.ids
        ],
        "circles": circles,
        "curves": curves,
    }
    _write_json(args.out, report)
    print(
        f"report verified {len(records)} rounds: final hv "
        f"{format(report['final_hypervolume'], '.6g')}, final r2 {format(report['final_r2'], '.6g')}"
    )
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "validate": _cmd_validate,
    "run": _cmd_run,
    "suite": _cmd_suite,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        return 1
    except (DatasetError, ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
