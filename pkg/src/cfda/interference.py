"""Mainlobe jamming: MVDR suppression, output SINR, secondary range ambiguity, Capon maps.

All snapshots here are closed-form and expressed in noise-normalized units:
a unit-amplitude emitter contributes ``gain * steering`` and the noise
covariance is ``sigma_n**2 * I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .numerics import HermitianMatrix, NotPositiveDefiniteError, default_loading, dirichlet, hermitian_solve
from .scene import C, PointEmitter, Scenario, doppler_frequency
from .steering import Architecture, Snapshot, SteeringModel, ideal_snapshot

__all__ = [
    "CovarianceEstimate",
    "JammerScene",
    "target_snapshot",
    "jammer_snapshot",
    "jamming_covariance",
    "sample_covariance",
    "mvdr_weights",
    "sinr_closed_form",
    "sinr_direct",
    "sra_ranges",
    "sra_count",
    "capon_map",
]

PSD_RTOL = 1e-9
SOURCES = ("jamming+noise", "clutter+noise", "target+jamming", "noise", "sample")


@dataclass(frozen=True)
class CovarianceEstimate:
    """Hermitian PSD covariance with provenance.

    ``diagonal_loading`` is added on every solve, not stored in ``matrix``.
    """

    matrix: np.ndarray
    source: str = "jamming+noise"
    diagonal_loading: float = 0.0

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown covariance source {self.source!r}")
        h = HermitianMatrix(self.matrix)
        ev = h.eigvalsh()
        if ev.size and ev.min() < -PSD_RTOL * max(abs(ev.max()), np.finfo(float).tiny):
            raise ValueError(f"covariance is not positive semidefinite (min eigenvalue {ev.min():.3e})")
        object.__setattr__(self, "matrix", h.data)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def solve(self, b) -> np.ndarray:
        return hermitian_solve(self.matrix, b, self.diagonal_loading)

    def with_loading(self, loading: float | None = None) -> "CovarianceEstimate":
        lv = default_loading(self.matrix) if loading is None else float(loading)
        return CovarianceEstimate(self.matrix, self.source, lv)


@dataclass(frozen=True)
class JammerScene:
    """Target plus one towed mainlobe jammer sharing its angle and Doppler.

    ``snr_in`` and ``inr`` are linear ratios to ``sigma_n**2``.
    """

    scenario: Scenario
    architecture: Architecture
    target: PointEmitter
    jammer: PointEmitter
    snr_in: float = 10.0
    inr: float = 1000.0
    amplitude_coefficient: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "architecture", Architecture.parse(self.architecture))
        t, j = self.target, self.jammer
        if not (math.isclose(t.azimuth, j.azimuth, abs_tol=1e-12) and math.isclose(t.elevation, j.elevation, abs_tol=1e-12)):
            raise ValueError("jammer must share the target's azimuth and elevation")
        if not math.isclose(doppler_frequency(self.scenario, t), doppler_frequency(self.scenario, j), abs_tol=1e-12):
            raise ValueError("jammer must share the target's Doppler")
        if self.snr_in < 0 or self.inr < 0:
            raise ValueError("snr_in and inr must be non-negative")
        if self.architecture is Architecture.C_FDA and self.amplitude_coefficient is None:
            from .rxchain import amplitude_coefficient

            object.__setattr__(self, "amplitude_coefficient", amplitude_coefficient(self.scenario).value)

    @classmethod
    def make(
        cls,
        sc: Scenario,
        arch,
        target_range: float = 12e3,
        jammer_range: float = 12.5e3,
        snr_db: float = 10.0,
        inr_db: float = 30.0,
        azimuth: float = 0.0,
        doppler: float | None = None,
        amplitude_coefficient: float | None = None,
    ) -> "JammerScene":
        t = PointEmitter.at_range(sc, target_range, azimuth=azimuth, doppler=doppler)
        if doppler is None:
            doppler = doppler_frequency(sc, t)
            t = t.replace(doppler=doppler)
        j = PointEmitter(azimuth, t.elevation, jammer_range, kind="jammer", doppler=doppler)
        return cls(sc, arch, t, j, 10 ** (snr_db / 10), 10 ** (inr_db / 10), amplitude_coefficient)

    @property
    def model(self) -> SteeringModel:
        return SteeringModel(self.architecture, self.scenario)

    @property
    def delta_range(self) -> float:
        return self.jammer.range - self.target.range


def target_snapshot(scene: JammerScene) -> Snapshot:
    return ideal_snapshot(scene.model, scene.target, 1.0, scene.amplitude_coefficient)


def jammer_snapshot(scene: JammerScene) -> Snapshot:
    """Unit-amplitude jammer snapshot; it differs from the target only through range steering."""
    return ideal_snapshot(scene.model, scene.jammer, 1.0, scene.amplitude_coefficient)


def jamming_covariance(scene: JammerScene) -> CovarianceEstimate:
    j = jammer_snapshot(scene).data
    s2 = scene.scenario.noise_power
    R = s2 * (scene.inr * np.outer(j, j.conj()) + np.eye(j.size))
    return CovarianceEstimate(R, "jamming+noise")


def sample_covariance(
    scene: JammerScene, num_snapshots: int, rng: np.random.Generator | None = None
) -> CovarianceEstimate:
    """Average of noisy jammer-plus-noise snapshots (random jammer amplitude per snapshot)."""
    sc = scene.scenario
    rng = np.random.default_rng(sc.rng_seed) if rng is None else rng
    j = jammer_snapshot(scene).data
    s = math.sqrt(sc.noise_power / 2)
    xi = math.sqrt(scene.inr) * s * (rng.standard_normal(num_snapshots) + 1j * rng.standard_normal(num_snapshots))
    noise = s * (rng.standard_normal((j.size, num_snapshots)) + 1j * rng.standard_normal((j.size, num_snapshots)))
    X = np.outer(j, xi) + noise
    R = X @ X.conj().T / num_snapshots
    return CovarianceEstimate(R, "sample")


def mvdr_weights(t, R: CovarianceEstimate) -> np.ndarray:
    """Distortionless minimum-variance weights ``R^{-1} t / (t^H R^{-1} t)``."""
    t = t.data if isinstance(t, Snapshot) else np.asarray(t, dtype=complex)
    try:
        x = R.solve(t)
    except NotPositiveDefiniteError as exc:
        raise NotPositiveDefiniteError(
            f"{exc}; retry with CovarianceEstimate.with_loading() (default 1e-6*tr(R)/dim)"
        ) from exc
    return x / np.vdot(t, x)


def _gains(scene: JammerScene) -> tuple[float, float]:
    """``|t|^2`` and ``|t^H j|^2`` for unit-amplitude snapshots, from Dirichlet kernels."""
    sc = scene.scenario
    M, N, K = sc.dims
    arch = scene.architecture
    if arch is Architecture.PA:
        g = float(M * M * N * K)
        return g, g * g
    if arch is Architecture.MIMO:
        g = float(M * N * K)
        return g, g * g
    phi_r = dirichlet(M, 2 * scene.delta_range * sc.frequency_offset / C)
    if arch is Architecture.FDA_MIMO:
        return float(M * N * K), float((N * K) ** 2 * phi_r**2)
    E = scene.amplitude_coefficient
    return E**2 * M * N * K, E**4 * (N * K) ** 2 * phi_r**2


def sinr_closed_form(scene: JammerScene) -> float:
    """``SNR_in [G - INR |t^H j|^2 / (1 + INR G)]`` with Dirichlet-kernel overlap.

    Evaluated as ``SNR_in (G + INR (G^2 - C)) / (1 + INR G)`` which avoids
    cancellation at high INR.
    """
    G, Cc = _gains(scene)
    inr = scene.inr
    return scene.snr_in * (G + inr * (G * G - Cc)) / (1 + inr * G)


def sinr_direct(scene: JammerScene, R: CovarianceEstimate | None = None) -> float:
    """Brute-force output SINR with MVDR weights from an explicitly assembled covariance."""
    t = target_snapshot(scene).data
    R_true = jamming_covariance(scene)
    R_w = R_true if R is None else R
    w = mvdr_weights(t, R_w)
    sig = scene.snr_in * scene.scenario.noise_power * abs(np.vdot(w, t)) ** 2
    den = float(np.real(np.vdot(w, R_true.matrix @ w)))
    return sig / den


def sra_count(sc: Scenario) -> int:
    """Number of secondary ambiguous ranges in one unambiguous interval, ``floor(Δf*T)``."""
    return int(math.floor(sc.frequency_offset * sc.pri + 1e-9))


def sra_ranges(sc: Scenario, target_range: float, detection_width: float | None = None) -> list[float]:
    """Ranges ``R_t ± L c/(2Δf)`` (``L >= 1``) inside ``R_t ± detection_width/2``.

    ``detection_width`` defaults to the unambiguous range ``c T / 2``.
    """
    if sc.frequency_offset <= 0:
        return []
    width = sc.unambiguous_range if detection_width is None else detection_width
    period = C / (2 * sc.frequency_offset)
    lmax = int(math.floor(width / 2 / period + 1e-9))
    out = [target_range + s * L * period for L in range(1, lmax + 1) for s in (-1, 1)]
    return sorted(r for r in out if r > 0)


def capon_map(scene: JammerScene, range_grid, azimuth_grid, loading: float = 0.0) -> np.ndarray:
    """Capon spectrum ``1 / (s^H Q^{-1} s)`` over (range, azimuth), in linear units.

    ``Q`` holds target, jammer and noise. Scan vectors are unit-modulus
    steering vectors at the target's elevation and Doppler.
    """
    sc = scene.scenario
    model = scene.model
    t = target_snapshot(scene).data
    j = jammer_snapshot(scene).data
    s2 = sc.noise_power
    Q = s2 * (scene.snr_in * np.outer(t, t.conj()) + scene.inr * np.outer(j, j.conj()) + np.eye(t.size))
    Q = CovarianceEstimate(Q, "target+jamming", loading)
    factor = scipy.linalg.cho_factor(Q.matrix + loading * np.eye(Q.dim), lower=True)
    ranges = np.asarray(range_grid, dtype=float)
    az = np.asarray(azimuth_grid, dtype=float)
    f_d = doppler_frequency(sc, scene.target)
    el = scene.target.elevation
    out = np.empty((ranges.size, az.size))
    for a, phi in enumerate(az):
        S = np.stack([model.vector(phi, el, r, f_d) for r in ranges], axis=1)
        X = scipy.linalg.cho_solve(factor, S)
        out[:, a] = 1.0 / np.real(np.sum(S.conj() * X, axis=0))
    return out
