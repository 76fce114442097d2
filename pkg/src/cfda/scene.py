"""Scenario parameters and the geometric / frequency quantities derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

C = 3e8  # rounded value; keeps the 150 m / 15 km / 80 us reference numbers exact

__all__ = [
    "C",
    "Scenario",
    "PointEmitter",
    "DelaySet",
    "delays",
    "spatial_frequency",
    "doppler_frequency",
    "range_frequency",
    "elevation_from_range",
]


@dataclass(frozen=True)
class Scenario:
    """Radar, platform and sampling parameters.

    Angles are radians. Defaults are the full-size simulation set (10 GHz,
    8x8 elements, 8 pulses, 100 MHz sampling); :meth:`desk` gives the reduced
    configuration used for fast tests.
    """

    carrier_frequency: float = 10e9
    frequency_offset: float = 1e6
    bandwidth: float = 1e6
    pulse_width: float = 10e-6
    pri: float = 100e-6
    element_spacing: float = 0.015
    num_tx: int = 8
    num_rx: int = 8
    num_pulses: int = 8
    platform_height: float = 3000.0
    platform_velocity: float = 75.0
    yaw: float = math.pi / 2
    sample_rate: float = 100e6
    noise_power: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        checks = [
            ("carrier_frequency", self.carrier_frequency > 0),
            ("frequency_offset", self.frequency_offset >= 0),
            ("bandwidth", self.bandwidth > 0),
            ("pulse_width", self.pulse_width > 0),
            ("pri", self.pri >= self.pulse_width),
            ("element_spacing", self.element_spacing > 0),
            ("num_tx", self.num_tx >= 1),
            ("num_rx", self.num_rx >= 1),
            ("num_pulses", self.num_pulses >= 1),
            ("platform_height", self.platform_height >= 0),
            ("sample_rate", self.sample_rate >= 2 * self.bandwidth),
            ("noise_power", self.noise_power > 0),
        ]
        for name, ok in checks:
            if not ok:
                raise ValueError(f"invalid scenario field {name!r}: {getattr(self, name)!r}")

    @classmethod
    def table1(cls, **overrides) -> "Scenario":
        return cls(**overrides)

    @classmethod
    def desk(cls, **overrides) -> "Scenario":
        base = dict(num_tx=4, num_rx=4, num_pulses=4, sample_rate=20e6)
        base.update(overrides)
        return cls(**base)

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    @property
    def wavelength(self) -> float:
        return C / self.carrier_frequency

    @property
    def chirp_rate(self) -> float:
        return self.bandwidth / self.pulse_width

    @property
    def num_samples(self) -> int:
        """Samples per pulse, ``round(f_s * T_p)``."""
        return int(round(self.sample_rate * self.pulse_width))

    @property
    def unambiguous_range(self) -> float:
        return C * self.pri / 2

    @property
    def range_resolution(self) -> float:
        return C / (2 * self.bandwidth)

    @property
    def range_bin(self) -> float:
        """Range spacing of one fast-time sample."""
        return C / (2 * self.sample_rate)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.num_tx, self.num_rx, self.num_pulses


@dataclass(frozen=True)
class PointEmitter:
    """A point scatterer (target, jammer or clutter patch).

    ``doppler`` overrides the normalized Doppler computed from the platform
    and emitter velocities; sweeps over target Doppler set it directly.
    """

    azimuth: float
    elevation: float
    range: float
    velocity: float = 0.0
    power: float = 1.0
    kind: str = "target"
    doppler: float | None = None

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError(f"emitter range must be positive, got {self.range}")
        if self.power < 0:
            raise ValueError(f"emitter power must be non-negative, got {self.power}")
        if self.kind not in ("target", "jammer", "clutter_patch"):
            raise ValueError(f"unknown emitter kind {self.kind!r}")

    @classmethod
    def at_range(cls, sc: Scenario, range_m: float, azimuth: float = 0.0, **kw) -> "PointEmitter":
        """Emitter on the ground at ``range_m``; elevation follows from the platform height."""
        return cls(azimuth=azimuth, elevation=elevation_from_range(sc, range_m), range=range_m, **kw)

    def replace(self, **changes) -> "PointEmitter":
        return replace(self, **changes)


@dataclass(frozen=True)
class DelaySet:
    propagation: float
    tx_displacement: np.ndarray = field(repr=False)
    rx_displacement: np.ndarray = field(repr=False)
    doppler: np.ndarray = field(repr=False)

    def rx_pulse(self) -> np.ndarray:
        """``tau_{n,k}`` as an (N, K) array."""
        return self.propagation - self.rx_displacement[:, None] - self.doppler[None, :]

    def path(self) -> np.ndarray:
        """Full per-path delay ``tau_{m,n,k}`` as an (M, N, K) array."""
        return self.rx_pulse()[None, :, :] - self.tx_displacement[:, None, None]


def delays(sc: Scenario, e: PointEmitter) -> DelaySet:
    geo = sc.element_spacing / C * math.cos(e.azimuth) * math.cos(e.elevation)
    m = np.arange(sc.num_tx)
    n = np.arange(sc.num_rx)
    k = np.arange(sc.num_pulses)
    dop = (
        2 * (sc.platform_velocity + e.velocity) / C * sc.pri
        * math.cos(e.azimuth + sc.yaw) * math.cos(e.elevation)
    )
    if e.doppler is not None:
        # keep the slow-time delay consistent with an overridden Doppler
        dop = e.doppler / sc.carrier_frequency
    return DelaySet(
        propagation=2 * e.range / C,
        tx_displacement=m * geo,
        rx_displacement=n * geo,
        doppler=k * dop,
    )


def spatial_frequency(sc: Scenario, azimuth, elevation):
    return sc.element_spacing / sc.wavelength * np.cos(azimuth) * np.cos(elevation)


def doppler_frequency(sc: Scenario, e: PointEmitter) -> float:
    if e.doppler is not None:
        return float(e.doppler)
    return (
        2 * (sc.platform_velocity + e.velocity) * sc.pri / sc.wavelength
        * math.cos(e.azimuth + sc.yaw) * math.cos(e.elevation)
    )


def range_frequency(sc: Scenario, range_m):
    out = -2 * np.asarray(range_m, dtype=float) * sc.frequency_offset / C
    return out if out.ndim else float(out)


def elevation_from_range(sc: Scenario, range_m):
    r = np.asarray(range_m, dtype=float)
    if np.any(r < sc.platform_height) or np.any(r <= 0):
        raise ValueError(
            f"range {range_m} is below platform height {sc.platform_height}; no ground intersection"
        )
    out = np.arcsin(sc.platform_height / r)
    return out if out.ndim else float(out)
