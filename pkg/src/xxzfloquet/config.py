"""Run configuration: YAML file with sections, overridden by CLI flags.

Sections and keys (all optional; defaults are the standard L=16 runs)::

    lattice:  kind (chain|square|custom), length, lx, ly, periodic,
              num_sites, edges (1-based pairs, custom only)
    model:    two_s, j_perp, j_par_bar, omega, amplitude_a | delta_j
    evolve:   steps_per_period, t_max, snapshots ({every: dt} or list),
              krylov_dim, tolerance, scheme
    run:      state (A0|A1|B0|B1 or spin string), driver (periodic|effective)
"""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .errors import InvalidArgumentError
from .hilbert import SpinBasis
from .lattice import LatticeGraph, build_chain, build_custom, build_square
from .operators import ModelParams

DEFAULTS: dict[str, dict[str, Any]] = {
    "lattice": {"kind": "chain", "length": 16, "periodic": True},
    "model": {
        "two_s": 1,
        "j_perp": -0.75,
        "j_par_bar": -1.0,
        "omega": 10.0,
        "amplitude_a": 2.4048,
    },
    "evolve": {
        "steps_per_period": 64,
        "t_max": 50.0,
        "snapshots": {"every": 0.5},
        "krylov_dim": 20,
        "tolerance": 1e-10,
        "scheme": "interaction",
    },
    "run": {"state": "A0", "driver": "periodic"},
}

_KNOWN = {
    "lattice": {"kind", "length", "lx", "ly", "periodic", "num_sites", "edges"},
    "model": {"two_s", "j_perp", "j_par_bar", "omega", "amplitude_a", "delta_j"},
    "evolve": {"steps_per_period", "t_max", "snapshots", "krylov_dim", "tolerance", "scheme"},
    "run": {"state", "driver"},
}


class ConfigError(InvalidArgumentError):
    """Invalid configuration; the message starts with the offending key path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_file(path: str | Path) -> dict:
    """Read a YAML/JSON config, or the ``config`` echoed inside a manifest."""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(str(path), f"cannot read config ({exc})") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(str(path), "top level must be a mapping")
    if "subcommand" in data and "config" in data:
        data = data["config"]
    return data


def merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for section, values in override.items():
        if section not in _KNOWN:
            raise ConfigError(section, f"unknown section; expected one of {sorted(_KNOWN)}")
        if not isinstance(values, dict):
            raise ConfigError(section, "must be a mapping")
        for key, value in values.items():
            if key not in _KNOWN[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            if value is None:
                continue
            out.setdefault(section, {})[key] = value
    if "delta_j" in override.get("model", {}) and override["model"]["delta_j"] is not None:
        if "amplitude_a" in override.get("model", {}) and override["model"]["amplitude_a"] is not None:
            raise ConfigError("model.delta_j", "mutually exclusive with model.amplitude_a")
        out["model"].pop("amplitude_a", None)
    elif "amplitude_a" in override.get("model", {}) and override["model"]["amplitude_a"] is not None:
        out["model"].pop("delta_j", None)
    return out


def resolve(file_config: dict | None = None, overrides: dict | None = None) -> dict:
    cfg = merge(DEFAULTS, file_config or {})
    return merge(cfg, overrides or {})


def _num(cfg, section, key, kind=float, positive=False, minimum=None):
    path = f"{section}.{key}"
    try:
        value = cfg[section][key]
    except KeyError:
        raise ConfigError(path, "missing") from None
    if isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {value!r}")
    try:
        value = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected {kind.__name__}, got {value!r}") from None
    if kind is float and not np.isfinite(value):
        raise ConfigError(path, "must be finite")
    if positive and not value > 0:
        raise ConfigError(path, f"must be positive, got {value}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _flag(cfg, section, key) -> bool:
    value = cfg[section].get(key, True)
    if not isinstance(value, bool):
        raise ConfigError(f"{section}.{key}", f"expected a boolean, got {value!r}")
    return value


def build_lattice(cfg: dict) -> LatticeGraph:
    lat = cfg["lattice"]
    kind = lat.get("kind", "chain")
    try:
        if kind == "chain":
            return build_chain(_num(cfg, "lattice", "length", int), _flag(cfg, "lattice", "periodic"))
        if kind == "square":
            return build_square(
                _num(cfg, "lattice", "lx", int), _num(cfg, "lattice", "ly", int), _flag(cfg, "lattice", "periodic")
            )
        if kind == "custom":
            edges = lat.get("edges")
            if not isinstance(edges, list) or not edges:
                raise ConfigError("lattice.edges", "custom lattices need a non-empty list of 1-based pairs")
            pairs = []
            for n, e in enumerate(edges):
                if not (isinstance(e, (list, tuple)) and len(e) == 2):
                    raise ConfigError(f"lattice.edges[{n}]", f"expected a pair, got {e!r}")
                pairs.append((int(e[0]) - 1, int(e[1]) - 1))
            num_sites = lat.get("num_sites") or max(max(p) for p in pairs) + 1
            return build_custom(int(num_sites), pairs)
    except ConfigError:
        raise
    except InvalidArgumentError as exc:
        raise ConfigError("lattice", str(exc)) from None
    raise ConfigError("lattice.kind", f"expected chain, square or custom, got {kind!r}")


def build_basis(cfg: dict, graph: LatticeGraph) -> SpinBasis:
    return SpinBasis(graph.num_sites, _num(cfg, "model", "two_s", int, positive=True))


def build_params(cfg: dict) -> ModelParams:
    j_perp = _num(cfg, "model", "j_perp")
    j_par_bar = _num(cfg, "model", "j_par_bar")
    omega = _num(cfg, "model", "omega", positive=True)
    try:
        if cfg["model"].get("delta_j") is not None:
            return ModelParams.from_delta_j(j_perp, j_par_bar, omega, _num(cfg, "model", "delta_j"))
        return ModelParams(j_perp, j_par_bar, omega, _num(cfg, "model", "amplitude_a", minimum=0.0))
    except ConfigError:
        raise
    except InvalidArgumentError as exc:
        raise ConfigError("model", str(exc)) from None


def time_unit(params: ModelParams) -> float:
    """Physical time per unit of configured time: ``1/|J_par_bar|`` (1 if zero)."""
    return 1.0 / abs(params.j_par_bar) if params.j_par_bar else 1.0


def snapshot_times(cfg: dict) -> list[float]:
    t_max = _num(cfg, "evolve", "t_max", minimum=0.0)
    snaps = cfg["evolve"].get("snapshots")
    if snaps is None:
        return [0.0, t_max]
    if isinstance(snaps, dict):
        if set(snaps) != {"every"}:
            raise ConfigError("evolve.snapshots", "mapping form must be {every: dt}")
        every = _num({"s": snaps}, "s", "every", positive=True)
        n = int(np.floor(t_max / every + 1e-9))
        times = [k * every for k in range(n + 1)]
        if t_max - times[-1] > 1e-9 * every:
            times.append(t_max)
        return times
    if isinstance(snaps, list):
        try:
            times = sorted(float(t) for t in snaps)
        except (TypeError, ValueError):
            raise ConfigError("evolve.snapshots", "list entries must be numbers") from None
        if times and (times[0] < 0 or times[-1] > t_max):
            raise ConfigError("evolve.snapshots", "times must lie in [0, t_max]")
        return times
    raise ConfigError("evolve.snapshots", f"expected a list or {{every: dt}}, got {snaps!r}")


def dumps(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True)
