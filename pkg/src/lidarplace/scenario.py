"""Scenario files: the JSON schema driving every command.

A scenario bundles the ROI, the available LiDAR models, how many of each to
place, the mounting-pose box bounds, the colony settings, and the detection
trial settings.  Angles may be written as plain numbers (radians), tagged
objects ``{"deg": 15}`` / ``{"rad": 0.26}``, or suffixed strings ``"15deg"`` /
``"0.26rad"``; the canonical serialized form is always radians.

Parsing failures raise :class:`ScenarioError` carrying a stable machine code
(e.g. ``GRID_NOT_DIVISIBLE``) that the command line surfaces verbatim.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bees import AbcParams
from .geometry import Box, LidarModel, PoseBounds, PoseConfig, RoiSpec
from .odr import ObjectSpec

__all__ = [
    "ScenarioError",
    "OdrSettings",
    "Scenario",
    "parse_angle",
    "parse_pose",
    "parse_scenario",
    "load_scenario",
    "canonical_dict",
    "serialize_scenario",
    "scenario_digest",
    "with_seed",
]

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Scenario validation failure with a stable machine-parsable code."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class OdrSettings:
    """Detection-trial settings: the test object, trial count, and threshold."""

    obj: ObjectSpec
    trials: int = 1000
    threshold: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("odr trials must be >= 1")
        if self.threshold < 0:
            raise ValueError("odr threshold must be >= 0")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything a run needs; see the README for the JSON schema."""

    roi: RoiSpec
    models: dict[str, LidarModel]
    lidars: tuple[tuple[str, int], ...]
    bounds: PoseBounds
    abc: AbcParams
    odr: OdrSettings

    @property
    def num_lidars(self) -> int:
        return sum(count for _, count in self.lidars)

    def model_sequence(self) -> tuple[LidarModel, ...]:
        """One model per placed sensor, expanded in scenario order."""
        out: list[LidarModel] = []
        for name, count in self.lidars:
            out.extend([self.models[name]] * count)
        return tuple(out)


def parse_angle(value) -> float:
    """Angle in radians from a number, ``{"deg"|"rad": x}``, or ``"15deg"``."""
    if isinstance(value, bool):
        raise ScenarioError("ANGLE_INVALID", f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, dict):
        if set(value) == {"deg"}:
            return math.radians(float(value["deg"]))
        if set(value) == {"rad"}:
            return float(value["rad"])
        raise ScenarioError("ANGLE_INVALID", f"angle object needs a single deg/rad key: {value!r}")
    if isinstance(value, str):
        text = value.strip().lower()
        for suffix, factor in (("deg", math.pi / 180.0), ("rad", 1.0)):
            if text.endswith(suffix):
                try:
                    return float(text[: -len(suffix)]) * factor
                except ValueError:
                    break
        raise ScenarioError("ANGLE_INVALID", f"angle strings need a deg/rad suffix: {value!r}")
    raise ScenarioError("ANGLE_INVALID", f"not an angle: {value!r}")


def _require(mapping: dict, key: str, context: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ScenarioError("SCHEMA_FIELD", f"missing {context}.{key}")
    return mapping[key]


def _number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError("SCHEMA_FIELD", f"{context} must be a number, got {value!r}")
    return float(value)


def _vec(value, context: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ScenarioError("SCHEMA_FIELD", f"{context} must be a 3-element list")
    return [_number(v, context) for v in value]


def parse_pose(data, context: str = "pose") -> PoseConfig:
    """Pose from ``{"position": [x,y,z], "yaw": a, "pitch": b, "roll": c}``.

    Omitted angles default to zero; angle values take any accepted form.
    """
    position = _vec(_require(data, "position", context), f"{context}.position")
    angles = {
        name: parse_angle(data.get(name, 0.0)) for name in ("yaw", "pitch", "roll")
    }
    try:
        return PoseConfig(position=position, **angles)
    except ValueError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"{context}: {exc}") from exc


def _parse_bound_vector(value, context: str) -> PoseConfig:
    if not isinstance(value, (list, tuple)) or len(value) != 6:
        raise ScenarioError(
            "SCHEMA_FIELD", f"{context} must list [x, y, z, yaw, pitch, roll]"
        )
    angles = [parse_angle(v) for v in value[3:]]
    try:
        return PoseConfig(
            position=[_number(v, context) for v in value[:3]],
            yaw=angles[0],
            pitch=angles[1],
            roll=angles[2],
        )
    except ValueError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"{context}: {exc}") from exc


def _parse_model(data, name: str) -> LidarModel:
    context = f"models.{name}"
    if not isinstance(data, dict):
        raise ScenarioError("SCHEMA_FIELD", f"{context} must be an object")
    if "beam_pitches" in data:
        pitches = [parse_angle(v) for v in data["beam_pitches"]]
        try:
            return LidarModel(beam_pitches=np.asarray(pitches, dtype=float))
        except ValueError as exc:
            raise ScenarioError("SCHEMA_INVALID", f"{context}: {exc}") from exc
    if "evenly_spaced" in data:
        spec = data["evenly_spaced"]
        count = int(_number(_require(spec, "count", f"{context}.evenly_spaced"), f"{context}.count"))
        start = parse_angle(_require(spec, "start", f"{context}.evenly_spaced"))
        stop = parse_angle(_require(spec, "stop", f"{context}.evenly_spaced"))
        try:
            return LidarModel.evenly_spaced(count, start, stop)
        except ValueError as exc:
            raise ScenarioError("SCHEMA_INVALID", f"{context}: {exc}") from exc
    raise ScenarioError(
        "SCHEMA_FIELD", f"{context} needs either beam_pitches or evenly_spaced"
    )


def parse_scenario(data: dict) -> Scenario:
    """Validate a scenario dict and build the typed configuration."""
    if not isinstance(data, dict):
        raise ScenarioError("SCHEMA_INVALID", "scenario must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            "SCHEMA_VERSION", f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})"
        )

    roi_data = _require(data, "roi", "scenario")
    extent = np.asarray(_vec(_require(roi_data, "extent", "roi"), "roi.extent"))
    resolution = np.asarray(_vec(_require(roi_data, "resolution", "roi"), "roi.resolution"))
    if np.any(extent <= 0) or np.any(resolution <= 0):
        raise ScenarioError("SCHEMA_INVALID", "roi extent and resolution must be positive")
    dims = np.rint(extent / resolution)
    if np.any(dims < 1) or np.any(np.abs(dims * resolution - extent) > 1e-9 * extent):
        raise ScenarioError(
            "GRID_NOT_DIVISIBLE",
            "roi extent must be an integer multiple of the resolution on every axis",
        )
    boxes = []
    for i, box_data in enumerate(roi_data.get("excluded_boxes", [])):
        lo = _vec(_require(box_data, "min", f"roi.excluded_boxes[{i}]"), "box min")
        hi = _vec(_require(box_data, "max", f"roi.excluded_boxes[{i}]"), "box max")
        try:
            boxes.append(Box(minimum=lo, maximum=hi))
        except ValueError as exc:
            raise ScenarioError("SCHEMA_INVALID", f"roi.excluded_boxes[{i}]: {exc}") from exc
    try:
        roi = RoiSpec(extent=extent, resolution=resolution, excluded_boxes=tuple(boxes))
    except ValueError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"roi: {exc}") from exc

    models_data = _require(data, "models", "scenario")
    if not isinstance(models_data, dict) or not models_data:
        raise ScenarioError("SCHEMA_FIELD", "models must map at least one name to a model")
    models = {name: _parse_model(spec, name) for name, spec in models_data.items()}

    lidars_data = _require(data, "lidars", "scenario")
    if not isinstance(lidars_data, list) or not lidars_data:
        raise ScenarioError("SCHEMA_FIELD", "lidars must be a non-empty list")
    lidars = []
    for i, entry in enumerate(lidars_data):
        name = _require(entry, "model", f"lidars[{i}]")
        if name not in models:
            raise ScenarioError("MODEL_UNKNOWN", f"lidars[{i}] references unknown model {name!r}")
        count = int(_number(entry.get("count", 1), f"lidars[{i}].count"))
        if count < 1:
            raise ScenarioError("SCHEMA_INVALID", f"lidars[{i}].count must be >= 1")
        lidars.append((str(name), count))

    bounds_data = _require(data, "bounds", "scenario")
    lower = _parse_bound_vector(_require(bounds_data, "lower", "bounds"), "bounds.lower")
    upper = _parse_bound_vector(_require(bounds_data, "upper", "bounds"), "bounds.upper")
    if np.any(lower.as_vector() > upper.as_vector()):
        raise ScenarioError("BOUNDS_INVERTED", "bounds.lower exceeds bounds.upper")
    bounds = PoseBounds(lower=lower, upper=upper)

    abc_data = _require(data, "abc", "scenario")
    try:
        abc = AbcParams(
            num_bees=int(_number(_require(abc_data, "num_bees", "abc"), "abc.num_bees")),
            max_iterations=int(
                _number(_require(abc_data, "max_iterations", "abc"), "abc.max_iterations")
            ),
            abandonment_threshold=int(
                _number(abc_data.get("abandonment_threshold", 100), "abc.abandonment_threshold")
            ),
            rng_seed=int(_number(abc_data.get("rng_seed", 0), "abc.rng_seed")),
            mutate_all_dims=bool(abc_data.get("mutate_all_dims", False)),
        )
    except ValueError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"abc: {exc}") from exc

    odr_data = data.get("odr", {})
    region = None
    if "placement_region" in odr_data:
        region_data = odr_data["placement_region"]
        region = Box(
            minimum=_vec(_require(region_data, "min", "odr.placement_region"), "min"),
            maximum=_vec(_require(region_data, "max", "odr.placement_region"), "max"),
        )
    try:
        obj = ObjectSpec(
            dims=_vec(odr_data.get("object_dims", [0.5, 0.5, 1.7]), "odr.object_dims"),
            placement_region=region,
        )
        obj.corner_region(roi.extent)
        settings = OdrSettings(
            obj=obj,
            trials=int(_number(odr_data.get("trials", 1000), "odr.trials")),
            threshold=int(_number(odr_data.get("threshold", 1), "odr.threshold")),
        )
    except ValueError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"odr: {exc}") from exc

    return Scenario(roi=roi, models=models, lidars=tuple(lidars), bounds=bounds, abc=abc, odr=settings)


def load_scenario(path) -> Scenario:
    """Parse a scenario JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("SCHEMA_INVALID", f"{path}: not valid JSON ({exc})") from exc
    return parse_scenario(data)


def _floats(values) -> list[float]:
    return [float(v) for v in np.asarray(values, dtype=float)]


def canonical_dict(scenario: Scenario) -> dict:
    """Canonical plain-JSON form: radians everywhere, stable field set.

    Parsing the canonical form reproduces the scenario exactly, so
    parse -> serialize -> parse is the identity.
    """
    out = {
        "schema_version": SCHEMA_VERSION,
        "roi": {
            "extent": _floats(scenario.roi.extent),
            "resolution": _floats(scenario.roi.resolution),
            "excluded_boxes": [
                {"min": _floats(b.minimum), "max": _floats(b.maximum)}
                for b in scenario.roi.excluded_boxes
            ],
        },
        "models": {
            name: {"beam_pitches": _floats(model.beam_pitches)}
            for name, model in sorted(scenario.models.items())
        },
        "lidars": [{"model": name, "count": count} for name, count in scenario.lidars],
        "bounds": {
            "lower": _floats(scenario.bounds.lower.as_vector()),
            "upper": _floats(scenario.bounds.upper.as_vector()),
        },
        "abc": {
            "num_bees": scenario.abc.num_bees,
            "max_iterations": scenario.abc.max_iterations,
            "abandonment_threshold": scenario.abc.abandonment_threshold,
            "rng_seed": scenario.abc.rng_seed,
            "mutate_all_dims": scenario.abc.mutate_all_dims,
        },
        "odr": {
            "object_dims": _floats(scenario.odr.obj.dims),
            "trials": scenario.odr.trials,
            "threshold": scenario.odr.threshold,
        },
    }
    region = scenario.odr.obj.placement_region
    if region is not None:
        out["odr"]["placement_region"] = {
            "min": _floats(region.minimum),
            "max": _floats(region.maximum),
        }
    return out


def serialize_scenario(scenario: Scenario) -> str:
    """Pretty canonical JSON text for the scenario."""
    return json.dumps(canonical_dict(scenario), sort_keys=True, indent=2) + "\n"


def scenario_digest(scenario: Scenario) -> str:
    """SHA-256 of the canonical compact JSON; identifies scenario content.

    The colony seed is part of the content, so a seed override yields a new
    digest while identical scenario+seed runs share one.
    """
    compact = json.dumps(canonical_dict(scenario), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def with_seed(scenario: Scenario, seed: int | None) -> Scenario:
    """Scenario with the colony seed overridden (no-op for ``None``)."""
    if seed is None:
        return scenario
    return Scenario(
        roi=scenario.roi,
        models=scenario.models,
        lidars=scenario.lidars,
        bounds=scenario.bounds,
        abc=replace(scenario.abc, rng_seed=int(seed)),
        odr=scenario.odr,
    )
