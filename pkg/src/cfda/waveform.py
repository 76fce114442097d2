"""LFM baseband pulse, per-element transmit bank and the waveform Gram matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scene import Scenario

__all__ = [
    "ComplexSignal",
    "WaveformBank",
    "lfm_envelope",
    "lfm",
    "lfm_baseband",
    "transmit_bank",
    "gram_matrix",
]


@dataclass(frozen=True)
class ComplexSignal:
    """Uniformly sampled complex baseband series; sample ``i`` sits at ``t0 + i/sample_rate``."""

    samples: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))

    def __len__(self) -> int:
        return self.samples.shape[-1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.sample_rate

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    @property
    def energy(self) -> float:
        """Sum of ``|x|^2`` over samples (sample-domain energy)."""
        return float(np.sum(np.abs(self.samples) ** 2))


def _num_samples(T_p: float, f_s: float) -> int:
    return int(round(f_s * T_p))


def lfm_envelope(t, T_p: float, f_s: float) -> np.ndarray:
    """Amplitude-1 rectangular envelope on ``[-T_p/2, T_p/2)``.

    The edges are placed by sample-index arithmetic so that exactly
    ``round(f_s*T_p)`` grid points fall inside the pulse, also when ``t`` is
    shifted by a whole number of samples.
    """
    n = _num_samples(T_p, f_s)
    u = np.asarray(t, dtype=float) * f_s + n / 2
    eps = 1e-6
    return ((u > -eps) & (u < n - eps)).astype(float)


def lfm(t, T_p: float, kappa: float, f_s: float) -> np.ndarray:
    """Evaluate ``A(t/T_p) exp(j pi kappa t^2)`` at arbitrary times."""
    t = np.asarray(t, dtype=float)
    return lfm_envelope(t, T_p, f_s) * np.exp(1j * np.pi * kappa * t * t)


def lfm_baseband(T_p: float, B: float, f_s: float) -> ComplexSignal:
    """Sampled LFM pulse with chirp rate ``B/T_p`` and ``round(f_s*T_p)`` samples.

    Raises ValueError when ``f_s < 2B``.
    """
    if not T_p > 0:
        raise ValueError(f"pulse width must be positive, got {T_p}")
    if B < 0:
        raise ValueError(f"bandwidth must be non-negative, got {B}")
    if f_s < 2 * B:
        raise ValueError(f"undersampled LFM: sample rate {f_s:g} Hz < 2*bandwidth {2 * B:g} Hz")
    n = _num_samples(T_p, f_s)
    t0 = -(n // 2) / f_s
    t = t0 + np.arange(n) / f_s
    kappa = B / T_p
    return ComplexSignal(np.exp(1j * np.pi * kappa * t * t), f_s, t0)


@dataclass(frozen=True)
class WaveformBank:
    """Per-element transmit signals at complex baseband (rows are elements)."""

    signals: np.ndarray
    sample_rate: float
    t0: float
    frequency_offset: float

    @property
    def num_elements(self) -> int:
        return self.signals.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.signals.shape[1]) / self.sample_rate

    def element(self, m: int) -> ComplexSignal:
        return ComplexSignal(self.signals[m], self.sample_rate, self.t0)


def transmit_bank(sc: Scenario) -> WaveformBank:
    """Element ``m`` (0-based) carries the LFM pulse rotated by ``m*Δf``."""
    base = lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate)
    t = base.times
    offsets = np.arange(sc.num_tx)[:, None] * sc.frequency_offset
    sig = base.samples[None, :] * np.exp(2j * np.pi * offsets * t[None, :])
    return WaveformBank(sig, sc.sample_rate, base.t0, sc.frequency_offset)


def gram_matrix(bank: WaveformBank) -> np.ndarray:
    """Normalized Gram matrix ``G[i, j] = <u_i, u_j> / sqrt(|u_i|^2 |u_j|^2)``."""
    u = bank.signals
    g = u @ u.conj().T
    d = np.sqrt(np.real(np.diag(g)))
    g = g / np.outer(d, d)
    g = 0.5 * (g + g.conj().T)
    np.fill_diagonal(g, 1.0)
    return g
