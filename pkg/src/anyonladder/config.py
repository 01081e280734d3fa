"""Experiment configuration: flat key=value text with dotted sections.

A config is a flat string->string mapping.  Values are parsed on
access, and `canonical()` re-renders every value in a normalized
spelling (floats via repr, angle literals expanded), so two configs
that mean the same thing produce identical canonical forms no matter
how they were written or ordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import ModelParams

KINDS = (
    "counts_vs_jp",
    "maxim_heatmap",
    "threshold_vs_L",
    "spectrum_vs_jp",
    "quench",
    "im_dos",
    "symmetry_residuals",
    "commutator_check",
    "perturbation_check",
)

# model.* keys mirror ModelParams; everything else is per-kind plumbing
KNOWN_KEYS = {
    "kind",
    "label",
    "out",
    "model.L",
    "model.N",
    "model.J",
    "model.alpha",
    "model.Jp",
    "model.U",
    "model.mu",
    "model.theta",
    "model.n_cap",
    "grid.theta",
    "grid.jp",
    "grid.L",
    "quench.j_ini",
    "quench.j_final",
    "time.grid",
    "dos.bins",
    "dos.range",
    "onset.im_tol",
    "onset.rel_width",
}


class ConfigError(ValueError):
    """Invalid configuration; carries the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def parse_angle(text: str, field_name: str = "angle") -> float:
    """Parse '0.4pi', 'pi', '-pi' or a plain float literal."""
    s = text.strip().lower()
    try:
        if s == "pi":
            return math.pi
        if s == "-pi":
            return -math.pi
        if s.endswith("pi"):
            return float(s[:-2]) * math.pi
        return float(s)
    except ValueError:
        raise ConfigError(field_name, f"cannot parse angle {text!r}") from None


def parse_float(text: str, field_name: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ConfigError(field_name, f"cannot parse number {text!r}") from None


def parse_int(text: str, field_name: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(field_name, f"cannot parse integer {text!r}") from None


def parse_grid(text: str, field_name: str) -> np.ndarray:
    """Grid spec: 'log:min:max:points', 'linear:min:max:points', or a comma list."""
    s = text.strip()
    if s.startswith(("log:", "linear:")):
        parts = s.split(":")
        if len(parts) != 4:
            raise ConfigError(field_name, f"grid spec needs scale:min:max:points, got {text!r}")
        scale = parts[0]
        lo = parse_float(parts[1], field_name)
        hi = parse_float(parts[2], field_name)
        n = parse_int(parts[3], field_name)
        if n < 1:
            raise ConfigError(field_name, "grid needs at least 1 point")
        if not lo < hi:
            raise ConfigError(field_name, f"grid min {lo} must be below max {hi}")
        if scale == "log":
            if lo <= 0:
                raise ConfigError(field_name, "log grid needs positive min")
            return np.geomspace(lo, hi, n)
        return np.linspace(lo, hi, n)
    vals = [parse_float(p, field_name) for p in s.split(",") if p.strip()]
    if not vals:
        raise ConfigError(field_name, "empty grid")
    arr = np.array(vals)
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise ConfigError(field_name, "grid must be strictly increasing")
    return arr


def parse_angle_list(text: str, field_name: str) -> list[float]:
    vals = [parse_angle(p, field_name) for p in text.split(",") if p.strip()]
    if not vals:
        raise ConfigError(field_name, "empty angle list")
    return vals


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Read 'key = value' lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(source, f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, canonicalized experiment description."""

    values: dict[str, str] = field(default_factory=dict)

    @staticmethod
    def from_mapping(raw: dict[str, str]) -> "ExperimentConfig":
        cfg = ExperimentConfig(dict(raw))
        cfg.validate()
        return cfg

    # -- raw access ----------------------------------------------------
    def get(self, key: str, default: str | None = None) -> str | None:
        return self.values.get(key, default)

    def require(self, key: str) -> str:
        if key not in self.values:
            raise ConfigError(key, "required key missing")
        return self.values[key]

    # -- typed accessors ------------------------------------------------
    @property
    def kind(self) -> str:
        return self.require("kind")

    def model_params(self) -> ModelParams:
        kwargs = {}
        kwargs["L"] = parse_int(self.require("model.L"), "model.L")
        kwargs["N"] = parse_int(self.require("model.N"), "model.N")
        for name, parser in (
            ("J", parse_float),
            ("alpha", parse_float),
            ("Jp", parse_float),
            ("U", parse_float),
            ("mu", parse_float),
        ):
            key = f"model.{name}"
            if key in self.values:
                kwargs[name] = parser(self.values[key], key)
        if "model.theta" in self.values:
            kwargs["theta"] = parse_angle(self.values["model.theta"], "model.theta")
        if "model.n_cap" in self.values:
            kwargs["n_cap"] = parse_int(self.values["model.n_cap"], "model.n_cap")
        try:
            return ModelParams(**kwargs)
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from None

    def theta_grid(self) -> list[float]:
        return parse_angle_list(self.require("grid.theta"), "grid.theta")

    def jp_grid(self) -> np.ndarray:
        return parse_grid(self.require("grid.jp"), "grid.jp")

    def L_grid(self) -> list[int]:
        vals = [parse_int(p, "grid.L") for p in self.require("grid.L").split(",") if p.strip()]
        if not vals:
            raise ConfigError("grid.L", "empty list")
        if vals != sorted(vals) or len(set(vals)) != len(vals):
            raise ConfigError("grid.L", "sizes must be strictly increasing")
        return vals

    def time_grid(self) -> np.ndarray:
        spec = self.get("time.grid", "log:0.1:1e5:200")
        grid = parse_grid(spec, "time.grid")
        if grid[0] < 0:
            raise ConfigError("time.grid", "times must be nonnegative")
        if grid[0] > 0.0:
            grid = np.concatenate([[0.0], grid])
        return grid

    # -- validation ------------------------------------------------------
    def validate(self) -> None:
        kind = self.require("kind")
        if kind not in KINDS:
            raise ConfigError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        for key in self.values:
            if key not in KNOWN_KEYS:
                raise ConfigError(key, "unknown key")
        for key in _REQUIRED[kind]:
            self.require(key)
        # parse everything present once so errors surface at config time
        self.model_params()
        if "grid.theta" in self.values:
            self.theta_grid()
        if "grid.jp" in self.values:
            self.jp_grid()
        if "grid.L" in self.values:
            self.L_grid()
        if kind == "quench":
            parse_float(self.require("quench.j_ini"), "quench.j_ini")
            parse_float(self.require("quench.j_final"), "quench.j_final")
            self.time_grid()
        if kind == "im_dos":
            bins = parse_int(self.get("dos.bins", "81"), "dos.bins")
            if bins < 1:
                raise ConfigError("dos.bins", "need at least one bin")
            if "dos.range" in self.values:
                rng = [
                    parse_float(p, "dos.range")
                    for p in self.values["dos.range"].split(",")
                    if p.strip()
                ]
                if len(rng) != 2 or not rng[0] < rng[1]:
                    raise ConfigError("dos.range", "expected lo,hi with lo < hi")
        if "onset.im_tol" in self.values:
            parse_float(self.values["onset.im_tol"], "onset.im_tol")
        if "onset.rel_width" in self.values:
            parse_float(self.values["onset.rel_width"], "onset.rel_width")

    # -- canonical form ----------------------------------------------------
    def canonical(self) -> list[str]:
        """Sorted 'key = value' lines with normalized value spellings."""
        lines = []
        for key in sorted(self.values):
            lines.append(f"{key} = {self._canonical_value(key)}")
        return lines

    def _canonical_value(self, key: str) -> str:
        raw = self.values[key]
        if key in ("model.L", "model.N", "model.n_cap", "dos.bins"):
            return str(parse_int(raw, key))
        if key in ("model.J", "model.alpha", "model.Jp", "model.U", "model.mu",
                   "quench.j_ini", "quench.j_final", "onset.im_tol", "onset.rel_width"):
            return repr(parse_float(raw, key))
        if key == "model.theta":
            return repr(parse_angle(raw, key))
        if key == "grid.theta":
            return ",".join(repr(float(v)) for v in parse_angle_list(raw, key))
        if key in ("grid.jp", "time.grid"):
            return ",".join(repr(float(v)) for v in parse_grid(raw, key))
        if key == "grid.L":
            return ",".join(str(v) for v in self.L_grid())
        if key == "dos.range":
            vals = [parse_float(p, key) for p in raw.split(",") if p.strip()]
            return ",".join(repr(v) for v in vals)
        return raw


_REQUIRED = {
    "counts_vs_jp": ("model.L", "model.N", "grid.theta", "grid.jp"),
    "maxim_heatmap": ("model.L", "model.N", "grid.theta", "grid.jp"),
    "threshold_vs_L": ("model.N", "model.L", "grid.theta", "grid.L", "grid.jp"),
    "spectrum_vs_jp": ("model.L", "model.N", "model.theta", "grid.jp"),
    "quench": ("model.L", "model.N", "model.theta", "quench.j_ini", "quench.j_final"),
    "im_dos": ("model.L", "model.N", "model.theta", "model.Jp"),
    "symmetry_residuals": ("model.L", "model.N", "model.Jp", "grid.theta"),
    "commutator_check": ("model.L", "model.N", "grid.theta"),
    "perturbation_check": ("model.L", "model.N", "grid.theta"),
}
