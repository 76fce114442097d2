"""Range-ambiguous ground clutter, SRDC, STRAP filtering and SDR loss.

Clutter lives on rings at ``R_p = R_t + p R_u`` (``R_u = cT/2``), each split
into ``I`` patches uniformly spread over 360 degrees of azimuth. Patch
Doppler uses the cell-under-test elevation for every ring, patch spatial
frequency uses the ring's own elevation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .interference import CovarianceEstimate, mvdr_weights
from .numerics import db10, dirichlet
from .scene import C, PointEmitter, Scenario, elevation_from_range, range_frequency, spatial_frequency
from .steering import Architecture, SteeringModel

__all__ = [
    "ClutterRing",
    "ClutterModel",
    "patch_doppler",
    "clutter_columns",
    "scale_powers",
    "srdc_vector",
    "clutter_covariance",
    "strap_weights",
    "sdr_direct",
    "sdr_closed_form",
    "SdrCurve",
    "sdr_loss_curve",
    "clutter_spectrum",
    "count_notches",
]

TRAINING_SPACING = 150.0


@dataclass(frozen=True)
class ClutterRing:
    index: int
    range: float
    elevation: float
    azimuths: np.ndarray = field(repr=False)
    powers: np.ndarray = field(repr=False)

    @property
    def num_patches(self) -> int:
        return self.azimuths.size


@dataclass(frozen=True)
class ClutterModel:
    """CUT ring (``index == 0``) plus ``P`` range-ambiguous rings.

    ``rings[*].powers`` are relative (equal within a ring, ``R_p**-4`` across
    rings); :func:`scale_powers` turns them into absolute patch powers that
    reproduce ``cnr = tr(R_d) / (sigma_n**2 * dim)``.
    """

    rings: tuple[ClutterRing, ...]
    cnr: float
    target_range: float
    target_azimuth: float = 0.0

    @classmethod
    def build(
        cls,
        sc: Scenario,
        target_range: float = 12e3,
        num_patches: int = 60,
        num_ambiguous: int = 3,
        cnr_db: float = 50.0,
        target_azimuth: float = 0.0,
    ) -> "ClutterModel":
        if num_patches < 1 or num_ambiguous < 0:
            raise ValueError("need at least one patch and a non-negative ambiguity count")
        az = 2 * np.pi * np.arange(num_patches) / num_patches
        rings = []
        for p in range(num_ambiguous + 1):
            r = target_range + p * sc.unambiguous_range
            pw = np.full(num_patches, (target_range / r) ** 4 / num_patches)
            rings.append(ClutterRing(p, r, elevation_from_range(sc, r), az, pw))
        return cls(tuple(rings), 10 ** (cnr_db / 10), target_range, target_azimuth)

    @property
    def num_columns(self) -> int:
        return sum(r.num_patches for r in self.rings)

    @property
    def cut_elevation(self) -> float:
        return self.rings[0].elevation

    def at_range(self, sc: Scenario, range_m: float) -> "ClutterModel":
        """Same patch layout with the CUT moved to ``range_m`` (used for training bins)."""
        rings = []
        for ring in self.rings:
            r = range_m + ring.index * sc.unambiguous_range
            pw = ring.powers * (ring.range / r) ** 4
            rings.append(ClutterRing(ring.index, r, elevation_from_range(sc, r), ring.azimuths, pw))
        return ClutterModel(tuple(rings), self.cnr, range_m, self.target_azimuth)

    def relative_powers(self) -> np.ndarray:
        return np.concatenate([r.powers for r in self.rings])


def patch_doppler(sc: Scenario, azimuth, cut_elevation: float):
    """Normalized Doppler ``(2 v_a T / λ) cos(θ_t) cos(φ + ψ)`` of stationary ground."""
    return 2 * sc.platform_velocity * sc.pri / sc.wavelength * np.cos(cut_elevation) * np.cos(
        np.asarray(azimuth) + sc.yaw
    )


def clutter_columns(
    sc: Scenario, model: ClutterModel, arch, amplitude_coefficient: float | None = None
) -> np.ndarray:
    """Unit-amplitude patch snapshots, one column per patch, rings in order."""
    sm = SteeringModel(arch, sc)
    g = sm.gain(amplitude_coefficient)
    th_t = model.cut_elevation
    cols = []
    for ring in model.rings:
        fd = patch_doppler(sc, ring.azimuths, th_t)
        for phi, f in zip(ring.azimuths, fd):
            cols.append(sm.vector(phi, ring.elevation, ring.range, f))
    return g * np.stack(cols, axis=1)


def scale_powers(model: ClutterModel, columns: np.ndarray, noise_power: float) -> np.ndarray:
    """Absolute patch powers so that ``tr(R_c + σ² I) / (σ² dim) == cnr``."""
    rel = model.relative_powers()
    dim = columns.shape[0]
    col_energy = np.sum(np.abs(columns) ** 2, axis=0)
    tr_rel = float(np.sum(rel * col_energy))
    target = (model.cnr - 1.0) * noise_power * dim
    if target < 0:
        raise ValueError("CNR below 0 dB cannot be reached: the noise floor alone gives 1")
    return rel * (target / tr_rel) if tr_rel > 0 else rel * 0.0


def srdc_vector(sc: Scenario, target_range: float, arch="c-fda") -> np.ndarray:
    """Compensation ``r ⊗ 1_N ⊗ 1_K`` with ``r_m = exp(j2π m 2 R_t Δf / c)``."""
    r = np.exp(-2j * np.pi * np.arange(sc.num_tx) * range_frequency(sc, target_range))
    if Architecture.parse(arch) is Architecture.PA:
        return np.ones(sc.num_rx * sc.num_pulses, dtype=complex)
    return np.kron(r, np.ones(sc.num_rx * sc.num_pulses))


def clutter_covariance(columns: np.ndarray, powers, noise_power: float) -> CovarianceEstimate:
    """``R_d = V diag(powers) V^H + σ² I``."""
    powers = np.asarray(powers, dtype=float)
    if powers.shape != (columns.shape[1],):
        raise ValueError(f"expected {columns.shape[1]} patch powers, got shape {powers.shape}")
    if np.any(powers < 0):
        raise ValueError("patch powers must be non-negative")
    R = (columns * powers) @ columns.conj().T + noise_power * np.eye(columns.shape[0])
    return CovarianceEstimate(R, "clutter+noise")


def strap_weights(t, R: CovarianceEstimate) -> np.ndarray:
    """Space-time-range weights ``R_d^{-1} t / (t^H R_d^{-1} t)``."""
    return mvdr_weights(t, R)


def _target_vector(sc: Scenario, model: ClutterModel, arch, doppler: float, g: float) -> np.ndarray:
    sm = SteeringModel(arch, sc)
    return g * sm.vector(model.target_azimuth, model.cut_elevation, model.target_range, doppler)


def _cfda_gain(sc: Scenario, arch, E):
    return SteeringModel(arch, sc).gain(E)


def sdr_direct(
    sc: Scenario,
    model: ClutterModel,
    arch,
    doppler: float = 0.0,
    snr_in: float = 10.0,
    amplitude_coefficient: float | None = None,
    powers=None,
) -> float:
    """Output SDR ``σ_t² |w^H t|² / (w^H R_d w)`` with STRAP weights from the exact covariance."""
    g = _cfda_gain(sc, arch, amplitude_coefficient)
    V = clutter_columns(sc, model, arch, g if Architecture.parse(arch) is Architecture.C_FDA else None)
    pw = scale_powers(model, V, sc.noise_power) if powers is None else np.asarray(powers, dtype=float)
    R = clutter_covariance(V, pw, sc.noise_power)
    t = _target_vector(sc, model, arch, doppler, g)
    w = strap_weights(t, R)
    return snr_in * sc.noise_power * abs(np.vdot(w, t)) ** 2 / float(np.real(np.vdot(w, R.matrix @ w)))


def sdr_closed_form(
    sc: Scenario,
    model: ClutterModel,
    arch,
    doppler: float = 0.0,
    snr_in: float = 10.0,
    amplitude_coefficient: float | None = None,
    powers=None,
) -> float:
    """Per-patch (diagonal) approximation of the SDR via Dirichlet kernels.

    ``SNR_in [G - Σ g⁴ σ_i² |Φ_tx|² |Φ_rx|² |Φ_D|² / (σ² + g² dim σ_i²)]``
    where ``g`` is the per-entry gain and ``Φ_tx`` is the range kernel
    (C-FDA), the combined transmit-angle/range kernel (FDA-MIMO), the
    transmit-angle kernel (MIMO) or absent (PA). Cross-patch coupling is
    neglected, so it is accurate when clutter patches are well resolved.
    """
    arch = Architecture.parse(arch)
    M, N, K = sc.dims
    s2 = sc.noise_power
    g = _cfda_gain(sc, arch, amplitude_coefficient)
    V = clutter_columns(sc, model, arch, g if arch is Architecture.C_FDA else None)
    pw = scale_powers(model, V, s2) if powers is None else np.asarray(powers, dtype=float)
    dim = V.shape[0]
    th_t = model.cut_elevation
    f_t = spatial_frequency(sc, model.target_azimuth, th_t)
    fr_t = range_frequency(sc, model.target_range)
    kernels = []
    for ring in model.rings:
        f_i = spatial_frequency(sc, ring.azimuths, ring.elevation)
        fd_i = patch_doppler(sc, ring.azimuths, th_t)
        k_rx = dirichlet(N, f_i - f_t)
        k_d = dirichlet(K, fd_i - doppler)
        dr = range_frequency(sc, ring.range) - fr_t
        if arch is Architecture.PA:
            k_tx = np.ones_like(f_i)
        elif arch is Architecture.MIMO:
            k_tx = dirichlet(M, f_i - f_t)
        elif arch is Architecture.FDA_MIMO:
            k_tx = dirichlet(M, f_i - f_t + dr)
        else:
            k_tx = np.full_like(f_i, dirichlet(M, dr))
        kernels.append(np.abs(k_tx * k_rx * k_d) ** 2)
    kern = np.concatenate(kernels)
    G = g * g * dim
    rho = g**4 * pw / (s2 + g * g * dim * pw)
    return snr_in * (G - float(np.sum(rho * kern)))


@dataclass(frozen=True)
class SdrCurve:
    """SDR versus target Doppler.

    ``loss_db`` is the output SDR relative to the clutter-free output
    ``G * SNR_in`` (always <= 0 dB). ``raw_loss_db`` is ``SDR_o / SDR_i`` with
    ``SDR_i = SNR_in / (1 + CNR)``.
    """

    doppler: np.ndarray
    sdr_out: np.ndarray
    loss_db: np.ndarray
    raw_loss_db: np.ndarray
    architecture: Architecture
    method: str
    srdc: bool
    delta_f: float


STAP_METHODS = ("strap", "3d_stap", "dw_stap")


def _training_ranges(model: ClutterModel, training_bins: int, spacing: float) -> list[float]:
    return [model.target_range + s * b * spacing for b in range(1, training_bins + 1) for s in (-1, 1)]


def sdr_loss_curve(
    sc: Scenario,
    model: ClutterModel,
    arch,
    doppler_grid,
    method: str = "strap",
    srdc: bool = False,
    snr_in: float = 10.0,
    amplitude_coefficient: float | None = None,
    training_bins: int = 0,
    training_spacing: float = TRAINING_SPACING,
) -> SdrCurve:
    """Sweep the target Doppler and report the STRAP output SDR.

    With ``training_bins == 0`` the weights use the exact CUT covariance
    (``strap`` and ``3d_stap`` are the same full-dimension solve; SRDC is a
    unitary diagonal there and leaves the SDR unchanged). With
    ``training_bins = n`` the covariance is the average over ``2n`` range
    bins at ``±training_spacing`` steps around the CUT, each built from its
    own clutter rings, and the SDR is evaluated against the true CUT
    covariance. ``srdc`` then compensates every bin with its own range.

    ``dw_stap`` additionally rotates each training bin's Doppler block so the
    CUT-ring mainbeam Doppler matches that of the CUT before averaging.
    """
    if method not in STAP_METHODS:
        raise ValueError(f"unknown STAP method {method!r}; expected one of {STAP_METHODS}")
    arch = Architecture.parse(arch)
    s2 = sc.noise_power
    g = _cfda_gain(sc, arch, amplitude_coefficient)
    E = g if arch is Architecture.C_FDA else None
    V = clutter_columns(sc, model, arch, E)
    pw = scale_powers(model, V, s2)
    dim = V.shape[0]
    comp = srdc_vector(sc, model.target_range, arch) if srdc else np.ones(dim)
    Vc = V * comp[:, None]
    R_cut = clutter_covariance(Vc, pw, s2)
    scale_ref = pw.sum() / max(model.relative_powers().sum(), np.finfo(float).tiny)
    if training_bins > 0:
        acc = np.zeros((dim, dim), dtype=complex)
        ranges = _training_ranges(model, training_bins, training_spacing)
        f_cut = patch_doppler(sc, model.target_azimuth, model.cut_elevation)
        for r in ranges:
            mb = model.at_range(sc, r)
            Vb = clutter_columns(sc, mb, arch, E)
            if srdc:
                Vb = Vb * srdc_vector(sc, r, arch)[:, None]
            if method == "dw_stap":
                shift = f_cut - patch_doppler(sc, model.target_azimuth, mb.cut_elevation)
                warp = np.exp(2j * np.pi * np.arange(sc.num_pulses) * shift)
                Vb = Vb * np.tile(warp, dim // sc.num_pulses)[:, None]
            acc += (Vb * (mb.relative_powers() * scale_ref)) @ Vb.conj().T
        R_w = CovarianceEstimate(acc / len(ranges) + s2 * np.eye(dim), "clutter+noise")
    else:
        R_w = R_cut
    fd = np.asarray(doppler_grid, dtype=float)
    sdr = np.empty(fd.size)
    for i, f in enumerate(fd):
        t = _target_vector(sc, model, arch, f, g) * comp
        w = strap_weights(t, R_w)
        sdr[i] = snr_in * s2 * abs(np.vdot(w, t)) ** 2 / float(np.real(np.vdot(w, R_cut.matrix @ w)))
    G = g * g * dim
    loss = db10(sdr / (G * snr_in))
    raw = db10(sdr / (snr_in / (1 + model.cnr)))
    return SdrCurve(fd, sdr, loss, raw, arch, method, srdc, sc.frequency_offset)


def clutter_spectrum(
    sc: Scenario,
    model: ClutterModel,
    arch,
    range_offsets,
    doppler_grid,
    amplitude_coefficient: float | None = None,
    after_stap: bool = False,
) -> np.ndarray:
    """Range-Doppler clutter power at the target azimuth, shape (ranges, dopplers), dB.

    Before STAP this is the conventional beam output ``s^H R_b s / |s|^2``
    for the covariance of each range bin; after STAP it is the residual
    clutter-plus-noise power ``w^H R_b w`` of the CUT's STRAP weights, each
    normalized by ``|s|^2``.
    """
    arch = Architecture.parse(arch)
    g = _cfda_gain(sc, arch, amplitude_coefficient)
    E = g if arch is Architecture.C_FDA else None
    V0 = clutter_columns(sc, model, arch, E)
    pw0 = scale_powers(model, V0, sc.noise_power)
    scale_ref = pw0.sum() / model.relative_powers().sum()
    R_cut = clutter_covariance(V0, pw0, sc.noise_power)
    fd = np.asarray(doppler_grid, dtype=float)
    out = np.empty((len(range_offsets), fd.size))
    for a, off in enumerate(range_offsets):
        mb = model.at_range(sc, model.target_range + off)
        Vb = clutter_columns(sc, mb, arch, E)
        Rb = clutter_covariance(Vb, mb.relative_powers() * scale_ref, sc.noise_power).matrix
        for b, f in enumerate(fd):
            s = _target_vector(sc, mb, arch, f, 1.0)
            if after_stap:
                w = strap_weights(s, R_cut)
                w = w / np.linalg.norm(w)
                out[a, b] = np.real(np.vdot(w, Rb @ w))
            else:
                out[a, b] = np.real(np.vdot(s, Rb @ s)) / np.real(np.vdot(s, s))
    return db10(out)


def count_notches(loss_db, depth_db: float = 10.0, prominence_db: float = 3.0, plateau_db: float | None = None) -> int:
    """Number of local minima lying ``depth_db`` below the plateau with ``prominence_db`` prominence.

    The plateau defaults to the 90th percentile of the curve. Endpoints of the
    grid are treated as interior by periodic extension, since normalized
    Doppler wraps at ±0.5.
    """
    y = np.asarray(loss_db, dtype=float)
    plateau = np.percentile(y, 90) if plateau_db is None else plateau_db
    n = y.size
    ext = np.concatenate([y, y, y])
    idx, _ = find_peaks(-ext, prominence=prominence_db)
    idx = idx[(idx >= n) & (idx < 2 * n)]
    return int(np.sum(y[idx - n] < plateau - depth_db))
