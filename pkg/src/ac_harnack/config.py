"""Run-configuration parsing: flat INI-style sections, unknown keys rejected.

Verification tooling must not silently ignore typos, so any section or key
outside the schema below is a ConfigError, as is a missing section that
the requested command needs.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from typing import Any

from .errors import ConfigError
from .grid import TorusGrid
from .params import HarnackParams, beta_admissible_max
from .solver import SchemeConfig

__all__ = ["RunConfig", "parse_config"]

_SCHEMA: dict[str, dict[str, Any]] = {
    "grid": {"dim": int, "lengths": "floats", "points": "ints"},
    "ic": {"type": str, "value": float, "seed": int, "fmin": float,
           "fmax": float, "modes": int},
    "scheme": {"kind": str, "dt": "float_or_auto", "sigma": float},
    "time": {"t_end": float, "snapshot_every": float},
    "harnack": {"alpha": float, "beta": "float_or_auto", "t_min": float,
                "tol": float, "n": int, "k": float, "d": float},
    "classical": {"pairs": int, "seed": int},
    "output": {"directory": str, "formats": str},
    "waves": {"n": int, "samples": int, "halfwidth": float, "step": float,
              "shoot_halfwidth": float, "shoot_step": float},
}

_FORMATS = ("csv", "json", "text")


def _convert(section: str, key: str, raw: str):
    kind = _SCHEMA[section][key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw.strip()
        if kind == "floats":
            return tuple(float(s) for s in raw.split(","))
        if kind == "ints":
            return tuple(int(s) for s in raw.split(","))
        if kind == "float_or_auto":
            s = raw.strip().lower()
            return "auto" if s == "auto" else float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None
    raise AssertionError(kind)


@dataclass
class RunConfig:
    """Parsed configuration; sections absent from the file map to None."""

    sections: dict[str, dict[str, Any]]

    def has(self, section: str) -> bool:
        return section in self.sections

    def _section(self, name: str) -> dict[str, Any]:
        if name not in self.sections:
            raise ConfigError(f"missing required config section [{name}]")
        return self.sections[name]

    def get(self, section: str, key: str, default=None):
        sec = self._section(section)
        if key in sec:
            return sec[key]
        if default is None:
            raise ConfigError(f"missing required key {key!r} in section [{section}]")
        return default

    # --- typed builders ------------------------------------------------

    def build_grid(self) -> TorusGrid:
        sec = self._section("grid")
        dim = self.get("grid", "dim")
        lengths = self.get("grid", "lengths")
        points = self.get("grid", "points")
        if not 1 <= dim <= 3:
            raise ConfigError(f"[grid] dim must be 1, 2 or 3, got {dim}")
        if len(lengths) != dim or len(points) != dim:
            raise ConfigError(
                f"[grid] lengths/points must each have {dim} entries, "
                f"got {len(lengths)}/{len(points)}"
            )
        try:
            return TorusGrid(lengths, points)
        except ValueError as exc:
            raise ConfigError(f"[grid] {exc}") from None

    def build_scheme(self) -> SchemeConfig:
        kind = self.get("scheme", "kind")
        dt = self.get("scheme", "dt", default="auto")
        sigma = self.get("scheme", "sigma", default=0.8)
        try:
            return SchemeConfig(kind=kind, dt=None if dt == "auto" else dt, sigma=sigma)
        except ValueError as exc:
            raise ConfigError(f"[scheme] {exc}") from None

    def ic_spec(self, seed_override: int | None = None) -> dict[str, Any]:
        sec = dict(self._section("ic"))
        kind = sec.get("type")
        if kind == "constant":
            if "value" not in sec:
                raise ConfigError("[ic] type=constant requires 'value'")
            if not 0.0 < sec["value"] < 1.0:
                raise ConfigError(f"[ic] constant value must lie in (0,1), got {sec['value']}")
            return {"type": "constant", "value": sec["value"]}
        if kind == "fourier":
            for key in ("seed", "fmin", "fmax", "modes"):
                if key not in sec:
                    raise ConfigError(f"[ic] type=fourier requires {key!r}")
            seed = seed_override if seed_override is not None else sec["seed"]
            return {
                "type": "fourier",
                "seed": seed,
                "fmin": sec["fmin"],
                "fmax": sec["fmax"],
                "modes": sec["modes"],
            }
        raise ConfigError(f"[ic] type must be 'constant' or 'fourier', got {kind!r}")

    def build_params(self, dim: int | None = None) -> HarnackParams:
        sec = self._section("harnack")
        n = sec.get("n", dim)
        if n is None:
            raise ConfigError("[harnack] needs 'n' when no grid section provides it")
        if dim is not None and "n" in sec and sec["n"] != dim:
            raise ConfigError(f"[harnack] n={sec['n']} contradicts grid dim={dim}")
        alpha = self.get("harnack", "alpha")
        k = sec.get("k", 0.0)
        d = sec.get("d", 0.0)
        beta = self.get("harnack", "beta")
        try:
            if beta == "auto":
                beta = -float(n) if (alpha == 0.5 and k == 0.0) else beta_admissible_max(alpha, n, k)
            return HarnackParams(alpha=alpha, beta=beta, n=n, k=k, d=d)
        except ValueError as exc:
            raise ConfigError(f"[harnack] {exc}") from None

    def formats(self) -> tuple[str, ...]:
        if not self.has("output"):
            return _FORMATS
        raw = self.sections["output"].get("formats")
        if raw is None:
            return _FORMATS
        fmts = tuple(s.strip() for s in raw.split(",") if s.strip())
        for f in fmts:
            if f not in _FORMATS:
                raise ConfigError(f"[output] unknown format {f!r}; allowed: {_FORMATS}")
        return fmts


def parse_config(path) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    sections: dict[str, dict[str, Any]] = {}
    for name in cp.sections():
        if name not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{name}]")
        out = {}
        for key, raw in cp.items(name):
            if key not in _SCHEMA[name]:
                raise ConfigError(f"{path}: unknown key {key!r} in section [{name}]")
            out[key] = _convert(name, key, raw)
        sections[name] = out
    return RunConfig(sections)
