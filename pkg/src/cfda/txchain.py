"""Transmit beamforming weights and the composite signal seen by an emitter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scene import C, PointEmitter, Scenario, delays
from .waveform import ComplexSignal, WaveformBank

__all__ = ["BeamformWeights", "tx_weights", "uniform_weights", "composite_coefficients", "transmit_signal"]


@dataclass(frozen=True)
class BeamformWeights:
    values: np.ndarray
    azimuth: float | None = None
    elevation: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if not np.allclose(np.abs(v), 1.0, rtol=0, atol=1e-12):
            raise ValueError("transmit weights must have unit modulus")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def element_frequencies(sc: Scenario) -> np.ndarray:
    return sc.carrier_frequency + np.arange(sc.num_tx) * sc.frequency_offset


def tx_weights(sc: Scenario, azimuth: float, elevation: float) -> BeamformWeights:
    """Steering weights ``v_m = exp(-j2π f_m (m-1) d cosφ cosθ / c)`` with per-element ``f_m``."""
    m = np.arange(sc.num_tx)
    lag = m * sc.element_spacing / C * np.cos(azimuth) * np.cos(elevation)
    v = np.exp(-2j * np.pi * element_frequencies(sc) * lag)
    return BeamformWeights(v, azimuth, elevation)


def uniform_weights(sc: Scenario) -> BeamformWeights:
    """No transmit beamforming (orthogonal-waveform architectures)."""
    return BeamformWeights(np.ones(sc.num_tx, dtype=complex))


def composite_coefficients(sc: Scenario, w: BeamformWeights, e: PointEmitter) -> np.ndarray:
    """Complex weight of each spectral component as it arrives at ``e``.

    Element ``m`` leads the reference element by ``tau_m^(t)``; under the
    narrow-band assumption that lead only rotates phase, giving
    ``v_m * exp(+j2π f_m tau_m^(t))``.
    """
    if len(w) != sc.num_tx:
        raise ValueError(f"weights have {len(w)} entries, scenario has {sc.num_tx} transmitters")
    lead = delays(sc, e).tx_displacement
    return w.values * np.exp(2j * np.pi * element_frequencies(sc) * lead)


def transmit_signal(sc: Scenario, bank: WaveformBank, w: BeamformWeights, e: PointEmitter) -> ComplexSignal:
    """Composite baseband signal radiated towards ``e``, relative to the common path delay."""
    if bank.num_elements != len(w):
        raise ValueError(f"bank has {bank.num_elements} elements but weights have {len(w)}")
    c = composite_coefficients(sc, w, e)
    return ComplexSignal(c @ bank.signals, bank.sample_rate, bank.t0)
