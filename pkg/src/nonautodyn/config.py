"""Experiment configuration: a versioned JSON document.

Example::

    {
      "version": 1,
      "system": {"entry": "E1", "params": {"rho": "golden"}},
      "seed": 0,
      "output": "out/e1",
      "detectors": [
        {"detector": "visit_times", "which": ["f", "g"],
         "args": {"point": "iso:(3,0)", "targets": [{"center": "iso:(2,0)", "radius": 0.5}]},
         "params": {"horizon": 1000}}
      ]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

from .corpus import BUILDERS
from .detect import DetectorParams, ROW_NAMES, SENSITIVITY_MODES
from .errors import ConfigError

CONFIG_VERSION = 1

# detector name -> (allowed args, required args)
DETECTORS: dict[str, tuple[set[str], set[str]]] = {
    "separation_hitting_set": ({"center", "radius", "eps"}, {"center", "radius"}),
    "sensitivity": ({"mode"}, {"mode"}),
    "equicontinuity": ({"point"}, set()),
    "syndetic_equicontinuity": ({"point"}, set()),
    "eventual_sensitivity": (set(), set()),
    "cover_hitting_set": ({"center", "radius"}, {"center", "radius"}),
    "hausdorff_sensitivity": ({"mode"}, {"mode"}),
    "eqp": ({"x", "y", "o_radius"}, {"x", "y", "o_radius"}),
    "seqp": ({"x", "y", "o_radius"}, {"x", "y", "o_radius"}),
    "visit_times": ({"point", "targets"}, {"point", "targets"}),
    "minimality": ({"starts"}, set()),
    "omega_nonwandering": ({"point"}, {"point"}),
    "dichotomy_report": ({"rows"}, set()),
}
WHICH = ("f", "g")
_PARAM_FIELDS = {f.name for f in fields(DetectorParams)} - {"workers", "seed"}


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(path, msg)


def _check_keys(d: dict, allowed: set[str], required: set[str], path: str) -> None:
    _require(isinstance(d, dict), path, "expected an object")
    extra = sorted(set(d) - allowed)
    _require(not extra, f"{path}.{extra[0]}" if extra else path, "unknown field")
    missing = sorted(required - set(d))
    _require(not missing, f"{path}.{missing[0]}" if missing else path, "missing field")


@dataclass(frozen=True)
class DetectorSpec:
    detector: str
    which: tuple[str, ...] = ("f",)
    args: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"detector": self.detector, "which": list(self.which), "args": self.args, "params": self.params}

    @staticmethod
    def from_dict(d: dict, path: str) -> "DetectorSpec":
        _check_keys(d, {"detector", "which", "args", "params"}, {"detector"}, path)
        name = d["detector"]
        _require(name in DETECTORS, f"{path}.detector", f"unknown detector {name!r}")
        which = d.get("which", ["f"])
        _require(isinstance(which, list) and which and all(w in WHICH for w in which), f"{path}.which",
                 "expected a nonempty list drawn from ['f', 'g']")
        _require(len(set(which)) == len(which), f"{path}.which", "duplicate entries")
        args = d.get("args", {})
        allowed, required = DETECTORS[name]
        _check_keys(args, allowed, required, f"{path}.args")
        if "mode" in args:
            _require(args["mode"] in SENSITIVITY_MODES, f"{path}.args.mode", f"must be one of {list(SENSITIVITY_MODES)}")
        if "rows" in args:
            rows = args["rows"]
            _require(isinstance(rows, list) and all(r in ROW_NAMES for r in rows), f"{path}.args.rows",
                     f"rows must be drawn from {list(ROW_NAMES)}")
        if "targets" in args:
            _require(isinstance(args["targets"], list), f"{path}.args.targets", "expected a list")
            for i, t in enumerate(args["targets"]):
                _check_keys(t, {"center", "radius"}, {"center", "radius"}, f"{path}.args.targets[{i}]")
        params = d.get("params", {})
        _check_keys(params, _PARAM_FIELDS, set(), f"{path}.params")
        for i, r in enumerate(params.get("regions", [])):
            _check_keys(r, {"center", "radius"}, {"center", "radius"}, f"{path}.params.regions[{i}]")
        try:
            DetectorParams(**{k: v for k, v in params.items() if k != "regions"})
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{path}.params", str(e)) from None
        return DetectorSpec(name, tuple(which), dict(args), dict(params))


@dataclass(frozen=True)
class ExperimentConfig:
    entry: str
    system_params: dict = field(default_factory=dict)
    detectors: tuple[DetectorSpec, ...] = ()
    output: str = "out"
    seed: int = 0
    version: int = CONFIG_VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "system": {"entry": self.entry, "params": self.system_params},
            "seed": self.seed,
            "output": self.output,
            "detectors": [d.to_dict() for d in self.detectors],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        _check_keys(d, {"version", "system", "seed", "output", "detectors"}, {"version", "system"}, "config")
        _require(d["version"] == CONFIG_VERSION, "config.version", f"unsupported version (expected {CONFIG_VERSION})")
        sysd = d["system"]
        _check_keys(sysd, {"entry", "params"}, {"entry"}, "config.system")
        _require(sysd["entry"] in BUILDERS, "config.system.entry", f"unknown entry; known: {sorted(BUILDERS)}")
        sp = sysd.get("params", {})
        _check_keys(sp, {"rho"}, set(), "config.system.params")
        seed = d.get("seed", 0)
        _require(isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0, "config.seed",
                 "expected a nonnegative integer")
        output = d.get("output", "out")
        _require(isinstance(output, str) and output != "", "config.output", "expected a nonempty path")
        dets = d.get("detectors", [])
        _require(isinstance(dets, list), "config.detectors", "expected a list")
        specs = tuple(DetectorSpec.from_dict(x, f"config.detectors[{i}]") for i, x in enumerate(dets))
        return ExperimentConfig(sysd["entry"], dict(sp), specs, output, seed, d["version"])

    @staticmethod
    def loads(text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError("config", f"invalid JSON: {e}") from None
        return ExperimentConfig.from_dict(d)

    @staticmethod
    def load(path: str) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return ExperimentConfig.loads(fh.read())
