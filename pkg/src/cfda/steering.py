"""Steering vectors and closed-form snapshots for the four array architectures.

Index convention: entry ``(m, n, k)`` (all 0-based) of an MNK vector lives at
flat position ``(m*N + n)*K + k``; the Kronecker order is range (or
tx-range) first, then receive, then Doppler.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .scene import PointEmitter, Scenario, doppler_frequency, range_frequency, spatial_frequency

__all__ = [
    "Architecture",
    "Snapshot",
    "SteeringModel",
    "flat_index",
    "unflat_index",
    "tx_steering",
    "rx_steering",
    "doppler_steering",
    "range_steering",
    "ideal_snapshot",
]


class Architecture(enum.Enum):
    PA = "pa"
    MIMO = "mimo"
    FDA_MIMO = "fda-mimo"
    C_FDA = "c-fda"

    @classmethod
    def parse(cls, value) -> "Architecture":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for a in cls:
            if a.value == key:
                return a
        raise ValueError(f"unknown architecture {value!r}; expected one of {[a.value for a in cls]}")

    def __str__(self) -> str:
        return self.value


def flat_index(m, n, k, N: int, K: int):
    return (np.asarray(m) * N + np.asarray(n)) * K + np.asarray(k)


def unflat_index(i, N: int, K: int):
    i = np.asarray(i)
    return i // (N * K), (i // K) % N, i % K


def _geometric(count: int, freq: float) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) * freq)


def tx_steering(sc: Scenario, azimuth: float, elevation: float) -> np.ndarray:
    return _geometric(sc.num_tx, spatial_frequency(sc, azimuth, elevation))


def rx_steering(sc: Scenario, azimuth: float, elevation: float) -> np.ndarray:
    return _geometric(sc.num_rx, spatial_frequency(sc, azimuth, elevation))


def doppler_steering(sc: Scenario, f_d: float) -> np.ndarray:
    return _geometric(sc.num_pulses, f_d)


def range_steering(sc: Scenario, range_m: float) -> np.ndarray:
    if not range_m > 0:
        raise ValueError(f"range must be positive, got {range_m}")
    return _geometric(sc.num_tx, range_frequency(sc, range_m))


@dataclass(frozen=True)
class Snapshot:
    """One fast-time sample of the processed data cube."""

    data: np.ndarray
    architecture: Architecture
    bin_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "data", np.asarray(self.data, dtype=complex).ravel())
        object.__setattr__(self, "architecture", Architecture.parse(self.architecture))

    def __len__(self) -> int:
        return self.data.size

    def cube(self, sc: Scenario) -> np.ndarray:
        """Reshape to (M, N, K), or (N, K) for PA."""
        if self.architecture is Architecture.PA:
            return self.data.reshape(sc.num_rx, sc.num_pulses)
        return self.data.reshape(sc.num_tx, sc.num_rx, sc.num_pulses)


@dataclass(frozen=True)
class SteeringModel:
    architecture: Architecture
    scenario: Scenario

    def __post_init__(self):
        object.__setattr__(self, "architecture", Architecture.parse(self.architecture))

    @property
    def dim(self) -> int:
        M, N, K = self.scenario.dims
        return N * K if self.architecture is Architecture.PA else M * N * K

    def transmit_range(self, azimuth: float, elevation: float, range_m: float) -> np.ndarray:
        """The leading M-vector of the Kronecker product (unused for PA)."""
        sc = self.scenario
        arch = self.architecture
        if arch is Architecture.MIMO:
            return tx_steering(sc, azimuth, elevation)
        if arch is Architecture.FDA_MIMO:
            return tx_steering(sc, azimuth, elevation) * range_steering(sc, range_m)
        if arch is Architecture.C_FDA:
            return range_steering(sc, range_m)
        raise ValueError("phased array has no transmit-range factor")

    def vector(self, azimuth: float, elevation: float, range_m: float, f_d: float) -> np.ndarray:
        """Unit-modulus space-time(-range) steering vector."""
        sc = self.scenario
        rd = np.kron(rx_steering(sc, azimuth, elevation), doppler_steering(sc, f_d))
        if self.architecture is Architecture.PA:
            return rd
        return np.kron(self.transmit_range(azimuth, elevation, range_m), rd)

    def emitter_vector(self, e: PointEmitter) -> np.ndarray:
        return self.vector(e.azimuth, e.elevation, e.range, doppler_frequency(self.scenario, e))

    def gain(self, amplitude_coefficient: float | None = None) -> float:
        """Per-entry magnitude of a unit-amplitude noise-normalized snapshot.

        PA: M (coherent transmit). MIMO / FDA-MIMO: 1. C-FDA: E.
        """
        arch = self.architecture
        if arch is Architecture.PA:
            return float(self.scenario.num_tx)
        if arch is Architecture.C_FDA:
            if amplitude_coefficient is None:
                from .rxchain import amplitude_coefficient as _ac

                return _ac(self.scenario).value
            return float(amplitude_coefficient)
        return 1.0


def ideal_snapshot(
    model: SteeringModel,
    emitter: PointEmitter,
    amplitude: complex = 1.0,
    amplitude_coefficient: float | None = None,
) -> Snapshot:
    """Closed-form snapshot ``gain * xi * steering`` in units of one pulse's sample energy.

    ``amplitude_coefficient`` is the C-FDA factor E; it is computed from the
    scenario when omitted.
    """
    g = model.gain(amplitude_coefficient)
    return Snapshot(g * amplitude * model.emitter_vector(emitter), model.architecture)
