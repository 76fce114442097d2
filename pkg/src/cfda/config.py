"""Flat JSON experiment configuration.

Keys follow the usual radar symbols; angles are in degrees and everything
else in SI units. Unknown keys and ill-typed values raise ``ConfigError``
naming the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .scene import Scenario

__all__ = ["ConfigError", "ExperimentConfig", "SCENARIO_KEYS", "EXTRA_KEYS", "load_config"]


class ConfigError(ValueError):
    pass


# config key -> (Scenario field, converter to internal units)
SCENARIO_KEYS = {
    "f_c": ("carrier_frequency", float),
    "delta_f": ("frequency_offset", float),
    "B": ("bandwidth", float),
    "T_p": ("pulse_width", float),
    "T": ("pri", float),
    "d": ("element_spacing", float),
    "M": ("num_tx", int),
    "N": ("num_rx", int),
    "K": ("num_pulses", int),
    "H": ("platform_height", float),
    "v_a": ("platform_velocity", float),
    "psi_deg": ("yaw", lambda v: math.radians(float(v))),
    "f_s": ("sample_rate", float),
    "sigma_n2": ("noise_power", float),
    "rng_seed": ("rng_seed", int),
}

EXTRA_KEYS = {
    "R_t": ("target_range", float),
    "phi_t_deg": ("target_azimuth_deg", float),
    "v_t": ("target_velocity", float),
    "f_D": ("target_doppler", float),
    "R_j": ("jammer_range", float),
    "SNR_in_dB": ("snr_db", float),
    "INR_dB": ("inr_db", float),
    "CNR_dB": ("cnr_db", float),
    "I": ("num_patches", int),
    "P": ("num_ambiguous", int),
}


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario = field(default_factory=Scenario.desk)
    target_range: float = 12e3
    target_azimuth_deg: float = 0.0
    target_velocity: float = 25.0
    target_doppler: float | None = None
    jammer_range: float = 12.5e3
    snr_db: float = 10.0
    inr_db: float = 30.0
    cnr_db: float = 50.0
    num_patches: int = 60
    num_ambiguous: int = 3

    def __post_init__(self):
        sc = self.scenario
        for name, key in (("target_range", "R_t"), ("jammer_range", "R_j")):
            r = getattr(self, name)
            if not r >= sc.platform_height:
                raise ConfigError(
                    f"{key} = {r} m is below the platform height {sc.platform_height} m (no ground intersection)"
                )
        if self.num_patches < 1:
            raise ConfigError(f"I must be >= 1, got {self.num_patches}")
        if self.num_ambiguous < 0:
            raise ConfigError(f"P must be >= 0, got {self.num_ambiguous}")

    @property
    def target_azimuth(self) -> float:
        return math.radians(self.target_azimuth_deg)

    def to_dict(self) -> dict:
        """Resolved parameters in config-file units (degrees at the boundary)."""
        sc = asdict(self.scenario)
        out = {}
        for key, (attr, _) in SCENARIO_KEYS.items():
            v = sc[attr]
            out[key] = math.degrees(v) if key == "psi_deg" else v
        for key, (attr, _) in EXTRA_KEYS.items():
            out[key] = getattr(self, attr)
        return out


def _convert(key, value, conv):
    if isinstance(value, bool) or value is None or isinstance(value, (list, dict, str)):
        raise ConfigError(f"field {key!r} must be a number, got {value!r}")
    try:
        if conv is int and float(value) != int(value):
            raise ValueError
        return conv(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {key!r} has invalid value {value!r}") from exc


def build_config(raw: dict, fig_scale: bool = False) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object of key/value pairs")
    unknown = sorted(set(raw) - set(SCENARIO_KEYS) - set(EXTRA_KEYS))
    if unknown:
        raise ConfigError(f"unknown configuration field {unknown[0]!r}")
    base = Scenario.table1() if fig_scale else Scenario.desk()
    extras = {} if not fig_scale else {"num_patches": 360, "num_ambiguous": 5}
    sc_changes = {}
    for key, value in raw.items():
        if key in SCENARIO_KEYS:
            attr, conv = SCENARIO_KEYS[key]
            sc_changes[attr] = _convert(key, value, conv)
        else:
            attr, conv = EXTRA_KEYS[key]
            extras[attr] = _convert(key, value, conv)
    try:
        sc = base.replace(**sc_changes)
    except ValueError as exc:
        inv = {attr: key for key, (attr, _) in SCENARIO_KEYS.items()}
        msg = str(exc)
        for attr, key in inv.items():
            msg = msg.replace(f"'{attr}'", f"'{key}'")
        raise ConfigError(msg) from exc
    return ExperimentConfig(scenario=sc, **extras)


def load_config(path: str | Path | None, fig_scale: bool = False) -> ExperimentConfig:
    if path is None:
        return build_config({}, fig_scale)
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed configuration file {path}: {exc}") from exc
    return build_config(raw, fig_scale)


def field_names() -> list[str]:
    return [f.name for f in fields(ExperimentConfig)]
