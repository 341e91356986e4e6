"""Scenario-driven command line.

Subcommands::

    lidarplace optimize      --scenario S.json --out DIR [--seed N] [--threads N]
    lidarplace evaluate      --scenario S.json --poses P.json --out DIR
    lidarplace sweep         --scenario S.json --counts 1,2,3 [--models a,b] --out DIR
    lidarplace odr           --scenario S.json (--poses P.json | --record results.json)
                             [--scatter N] --out DIR
    lidarplace export-voxels --record results.json --out DIR

Result files are deterministic: rerunning any command with the same scenario
and seed reproduces them byte for byte, regardless of ``--threads``.  Timing
is printed to stdout only, never written into result files.  Errors exit
nonzero and print ``error[CODE]: message`` on stderr; see the README for the
code list.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bees, cost
from .geometry import PoseConfig, build_voxel_grid
from .odr import estimate_odr
from .scenario import (
    Scenario,
    ScenarioError,
    canonical_dict,
    load_scenario,
    parse_pose,
    scenario_digest,
    with_seed,
)
from .segmentation import component_ids, first_level_labels

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_MISSING = 4


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_INVALID):
        self.code = code
        self.exit_code = exit_code
        super().__init__(message)


def _fmt(value: float) -> str:
    """Shortest round-trip decimal form; identical on every run."""
    return repr(float(value))


def _pose_dict(pose: PoseConfig) -> dict:
    return {
        "position": [float(c) for c in pose.position],
        "yaw": float(pose.yaw),
        "pitch": float(pose.pitch),
        "roll": float(pose.roll),
    }


def _subspace_rows(report: cost.PlacementReport) -> list[dict]:
    return [
        {
            "component": rec.component_id,
            "code": list(rec.code),
            "voxel_count": rec.voxel_count,
            "volume": rec.volume,
            "surface_area": rec.surface_area,
            "vsr": rec.vsr,
            "inscribed_radius_estimate": rec.inscribed_radius_estimate,
        }
        for rec in report.subspaces
    ]


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_convergence_csv(path: Path, history: np.ndarray) -> None:
    lines = ["iter,best,mean"]
    for i in range(history.shape[0]):
        lines.append(f"{i},{_fmt(history[i, 0])},{_fmt(history[i, 1])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _component_color(component: int) -> tuple[int, int, int]:
    """Deterministic, well-spread RGB for a component id (golden-angle hue)."""
    h = (component * 0.6180339887498949) % 1.0
    s, v = 0.65, 0.95
    i = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    p, q, t = v * (1 - s), v * (1 - s * f), v * (1 - s * (1 - f))
    rgb = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][i]
    return tuple(int(round(255 * c)) for c in rgb)


def _write_voxel_export(out_dir: Path, grid, labels: np.ndarray, comp: np.ndarray) -> tuple[Path, Path]:
    csv_path = out_dir / "voxels.csv"
    ply_path = out_dir / "voxels.ply"
    centers = grid.active_centers
    n = grid.num_active

    lines = ["x,y,z,code,component"]
    for i in range(n):
        code = "-".join(str(int(d)) for d in labels[i])
        lines.append(
            f"{_fmt(centers[i, 0])},{_fmt(centers[i, 1])},{_fmt(centers[i, 2])},{code},{int(comp[i])}"
        )
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    ply = [
        "ply",
        "format ascii 1.0",
        f"element vertex {n}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    for i in range(n):
        r, g, b = _component_color(int(comp[i]))
        ply.append(f"{_fmt(centers[i, 0])} {_fmt(centers[i, 1])} {_fmt(centers[i, 2])} {r} {g} {b}")
    ply_path.write_text("\n".join(ply) + "\n", encoding="utf-8")
    return csv_path, ply_path


def _print_pose_table(poses) -> None:
    print(f"{'lidar':>5} {'x':>8} {'y':>8} {'z':>8} {'yaw':>8} {'pitch':>8} {'roll':>8}")
    for i, pose in enumerate(poses):
        x, y, z = pose.position
        print(
            f"{i:>5} {x:>8.3f} {y:>8.3f} {z:>8.3f} {pose.yaw:>8.3f} {pose.pitch:>8.3f} {pose.roll:>8.3f}"
        )


def _load_effective_scenario(args) -> Scenario:
    path = Path(args.scenario)
    if not path.exists():
        raise CliError("SCENARIO_MISSING", f"scenario file not found: {path}", EXIT_MISSING)
    return with_seed(load_scenario(path), args.seed)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_poses_file(path_str: str) -> tuple[PoseConfig, ...]:
    path = Path(path_str)
    if not path.exists():
        raise CliError("POSES_MISSING", f"poses file not found: {path}", EXIT_MISSING)
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, list) or not data:
        raise CliError("POSES_INVALID", "poses file must hold a non-empty JSON list of poses")
    return tuple(parse_pose(entry, f"poses[{i}]") for i, entry in enumerate(data))


def _warn_out_of_bounds(poses, bounds) -> None:
    for i, pose in enumerate(poses):
        if not bounds.contains(pose):
            print(
                f"warning[POSE_OUT_OF_BOUNDS]: pose {i} lies outside the scenario "
                "bounds; evaluating anyway",
                file=sys.stderr,
            )


def cmd_optimize(args) -> int:
    scenario = _load_effective_scenario(args)
    out = _out_dir(args)
    digest = scenario_digest(scenario)
    grid = build_voxel_grid(scenario.roi)
    models = scenario.model_sequence()

    started = time.perf_counter()
    result = bees.optimize(
        cost.make_objective(models, grid),
        cost.decision_bounds(scenario.bounds, len(models)),
        scenario.abc,
        threads=args.threads,
    )
    duration = time.perf_counter() - started

    poses = cost.poses_from_vector(result.best_solution, len(models))
    report = cost.evaluate_placement(poses, models, grid)

    labels = first_level_labels(poses, models, grid)
    comp, _ = component_ids(labels, grid)
    csv_path, ply_path = _write_voxel_export(out, grid, labels, comp)
    _write_convergence_csv(out / "convergence.csv", result.history)
    _write_json(
        out / "results.json",
        {
            "command": "optimize",
            "scenario_digest": digest,
            "scenario": canonical_dict(scenario),
            "seed": scenario.abc.rng_seed,
            "objective": float(result.best_cost),
            "best_poses": [_pose_dict(p) for p in poses],
            "subspaces": _subspace_rows(report),
            "files": {
                "convergence": "convergence.csv",
                "voxels_csv": csv_path.name,
                "voxels_ply": ply_path.name,
            },
        },
    )

    print(f"scenario digest: {digest}")
    print(f"objective (max VSR): {result.best_cost:.6f} m over {len(report.subspaces)} subspaces")
    _print_pose_table(poses)
    print(f"wrote results to {out} in {duration:.1f} s")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    scenario = _load_effective_scenario(args)
    out = _out_dir(args)
    poses = _load_poses_file(args.poses)
    models = scenario.model_sequence()
    if len(poses) != len(models):
        raise CliError(
            "POSES_INVALID",
            f"scenario places {len(models)} sensors but poses file holds {len(poses)}",
        )
    _warn_out_of_bounds(poses, scenario.bounds)

    grid = build_voxel_grid(scenario.roi)
    report = cost.evaluate_placement(poses, models, grid)
    _write_json(
        out / "evaluation.json",
        {
            "command": "evaluate",
            "scenario_digest": scenario_digest(scenario),
            "scenario": canonical_dict(scenario),
            "poses": [_pose_dict(p) for p in poses],
            "objective": report.objective,
            "subspaces": _subspace_rows(report),
        },
    )
    print(f"objective (max VSR): {report.objective:.6f} m over {len(report.subspaces)} subspaces")
    worst = report.worst
    print(
        f"worst subspace: component {worst.component_id} code "
        f"{'-'.join(str(d) for d in worst.code)} with {worst.voxel_count} voxels"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load_effective_scenario(args)
    out = _out_dir(args)
    counts = [part for part in (args.counts or "").split(",") if part != ""]
    if not counts:
        raise CliError("SWEEP_EMPTY", "--counts must list at least one sensor count", EXIT_USAGE)
    try:
        counts = [int(c) for c in counts]
    except ValueError as exc:
        raise CliError("SWEEP_EMPTY", f"--counts entries must be integers: {exc}", EXIT_USAGE)
    if any(c < 1 for c in counts):
        raise CliError("SWEEP_EMPTY", "--counts entries must be >= 1", EXIT_USAGE)

    model_names = (
        [m for m in args.models.split(",") if m] if args.models else sorted(scenario.models)
    )
    for name in model_names:
        if name not in scenario.models:
            raise CliError("MODEL_UNKNOWN", f"--models references unknown model {name!r}")

    rows = ["model,count,best_max_vsr"]
    for name in model_names:
        best_by_count = []
        for count in counts:
            cell = Scenario(
                roi=scenario.roi,
                models=scenario.models,
                lidars=((name, count),),
                bounds=scenario.bounds,
                abc=scenario.abc,
                odr=scenario.odr,
            )
            try:
                grid = build_voxel_grid(cell.roi)
                models = cell.model_sequence()
                result = bees.optimize(
                    cost.make_objective(models, grid),
                    cost.decision_bounds(cell.bounds, len(models)),
                    cell.abc,
                    threads=args.threads,
                )
                rows.append(f"{name},{count},{_fmt(result.best_cost)}")
                best_by_count.append((count, result.best_cost))
                print(f"{name} x{count}: best max VSR {result.best_cost:.6f}")
            except Exception as exc:  # keep sweeping; record the failure
                rows.append(f"{name},{count},")
                print(f"error[SWEEP_CELL]: {name} x{count} failed: {exc}", file=sys.stderr)
        # more sensors are expected to help; a rise is worth a look, not a stop
        ordered = sorted(best_by_count)
        for (c_a, v_a), (c_b, v_b) in zip(ordered, ordered[1:]):
            if v_b > v_a:
                print(
                    f"warning[SWEEP_NON_MONOTONE]: {name} best max VSR rose from "
                    f"{v_a:.6f} at count {c_a} to {v_b:.6f} at count {c_b}",
                    file=sys.stderr,
                )
    (out / "sweep.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"wrote {out / 'sweep.csv'}")
    return EXIT_OK


def _poses_from_record(path_str: str) -> tuple[tuple[PoseConfig, ...], dict]:
    path = Path(path_str)
    if not path.exists():
        raise CliError("RECORD_MISSING", f"run record not found: {path}", EXIT_MISSING)
    record = json.loads(path.read_text(encoding="utf-8"))
    if "best_poses" not in record or "scenario" not in record:
        raise CliError("RECORD_INVALID", f"{path} is not an optimize result record")
    poses = tuple(
        parse_pose(entry, f"record.best_poses[{i}]")
        for i, entry in enumerate(record["best_poses"])
    )
    return poses, record["scenario"]


def cmd_odr(args) -> int:
    scenario = _load_effective_scenario(args)
    out = _out_dir(args)
    models = scenario.model_sequence()
    grid = build_voxel_grid(scenario.roi)
    settings = scenario.odr
    seed = scenario.abc.rng_seed

    if args.poses:
        poses = _load_poses_file(args.poses)
    elif args.record:
        poses, _ = _poses_from_record(args.record)
    else:
        raise CliError("POSES_MISSING", "odr needs --poses or --record", EXIT_USAGE)
    if len(poses) != len(models):
        raise CliError(
            "POSES_INVALID",
            f"scenario places {len(models)} sensors but got {len(poses)} poses",
        )

    report = estimate_odr(
        poses,
        models,
        grid,
        settings.obj,
        settings.trials,
        settings.threshold,
        np.random.default_rng(seed),
    )
    payload = {
        "command": "odr",
        "scenario_digest": scenario_digest(scenario),
        "seed": seed,
        "trials": report.trials,
        "detections": report.detections,
        "odr": report.odr,
        "threshold": report.threshold,
        "poses": [_pose_dict(p) for p in poses],
    }

    if args.scatter:
        rows = ["max_vsr,odr"]
        seeds = np.random.SeedSequence(seed).spawn(args.scatter + 1)
        config_rng = np.random.default_rng(seeds[0])
        lower, upper = cost.decision_bounds(scenario.bounds, len(models))
        for s in range(args.scatter):
            vec = config_rng.uniform(lower, upper)
            sample_poses = cost.poses_from_vector(vec, len(models))
            sample_vsr = cost.max_vsr(sample_poses, models, grid)
            sample = estimate_odr(
                sample_poses,
                models,
                grid,
                settings.obj,
                settings.trials,
                settings.threshold,
                np.random.default_rng(seeds[s + 1]),
            )
            rows.append(f"{_fmt(sample_vsr)},{_fmt(sample.odr)}")
        (out / "vsr_odr.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        payload["files"] = {"scatter": "vsr_odr.csv"}
        print(f"wrote {args.scatter}-point VSR/ODR scatter to {out / 'vsr_odr.csv'}")

    _write_json(out / "odr.json", payload)
    print(
        f"ODR: {report.odr:.4f} ({report.detections}/{report.trials} detections, "
        f"threshold {report.threshold})"
    )
    return EXIT_OK


def cmd_export_voxels(args) -> int:
    out = _out_dir(args)
    poses, scenario_data = _poses_from_record(args.record)
    scenario = with_seed(_parse_record_scenario(scenario_data), args.seed)
    grid = build_voxel_grid(scenario.roi)
    models = scenario.model_sequence()
    if len(poses) != len(models):
        raise CliError("RECORD_INVALID", "record poses do not match its scenario")
    labels = first_level_labels(poses, models, grid)
    comp, count = component_ids(labels, grid)
    csv_path, ply_path = _write_voxel_export(out, grid, labels, comp)
    print(f"exported {grid.num_active} voxels over {count} subspaces")
    print(f"wrote {csv_path} and {ply_path}")
    return EXIT_OK


def _parse_record_scenario(data) -> Scenario:
    from .scenario import parse_scenario

    try:
        return parse_scenario(data)
    except ScenarioError as exc:
        raise CliError("RECORD_INVALID", f"record scenario invalid: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lidarplace",
        description="Multi-LiDAR placement: minimize the worst blind-spot VSR.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario_required=True):
        if scenario_required:
            p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--seed", type=int, default=None, help="override the scenario RNG seed")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument("--threads", type=int, default=1, help="objective evaluation threads")

    p = sub.add_parser("optimize", help="search for the best sensor poses")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate", help="score user-supplied poses without optimizing")
    common(p)
    p.add_argument("--poses", required=True, help="JSON file with one pose per sensor")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="optimize over sensor counts and models")
    common(p)
    p.add_argument("--counts", required=True, help="comma-separated sensor counts, e.g. 1,2,3,4")
    p.add_argument("--models", default=None, help="comma-separated model names (default: all)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("odr", help="estimate object detection rate for poses")
    common(p)
    p.add_argument("--poses", default=None, help="JSON file with one pose per sensor")
    p.add_argument("--record", default=None, help="results.json from an optimize run")
    p.add_argument(
        "--scatter",
        type=int,
        default=0,
        metavar="N",
        help="also sample N random configurations and export a VSR/ODR scatter CSV",
    )
    p.set_defaults(func=cmd_odr)

    p = sub.add_parser("export-voxels", help="export voxel labels from a run record")
    common(p, scenario_required=False)
    p.add_argument("--record", required=True, help="results.json from an optimize run")
    p.set_defaults(func=cmd_export_voxels)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except ScenarioError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error[INVALID_VALUE]: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
