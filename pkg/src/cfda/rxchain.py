"""Echo synthesis and the three receiver pipelines.

All time-domain processing is at complex baseband relative to ``f_c``.
Matched-filter outputs are kept raw (so range profiles show the physical
peak heights, e.g. ``M**2 * N_s`` for a coherent C-FDA pulse) and each
channel is rescaled to unit noise gain per sample energy when a snapshot is
taken: snapshot entries are ``gain * xi * N_s`` and per-entry noise power is
``sigma_n**2 * N_s`` for every architecture.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

from .numerics import fft_convolve
from .scene import C, PointEmitter, Scenario, delays
from .steering import Architecture, Snapshot
from .txchain import BeamformWeights, composite_coefficients, tx_weights, uniform_weights
from .waveform import lfm, lfm_baseband

__all__ = [
    "EchoCube",
    "ChannelOutput",
    "AmplitudeCoefficient",
    "default_window",
    "transmit_weights_for",
    "synthesize_echo",
    "mfm",
    "mmf",
    "mmf_templates",
    "sample_peak",
    "peak_bins",
    "pa_receiver",
    "fdamimo_receiver",
    "cfda_receiver",
    "receive",
    "simulate_snapshot",
    "amplitude_coefficient",
    "range_profile_rows",
    "GainEstimate",
    "array_gain_mc",
]

NOISE_MODES = ("per_channel", "per_element")


@dataclass(frozen=True)
class EchoCube:
    """Received echoes ``y_{n,k}(t)`` on a shared sample grid.

    ``signal`` has shape (N, K, L). ``noise`` is None, (N, K, L) when every
    receive channel sees the element's own noise, or (M, N, K, L) when each
    mixing channel carries an independent draw.
    """

    signal: np.ndarray
    sample_rate: float
    start_index: int
    emitter: PointEmitter | None = None
    noise: np.ndarray | None = field(default=None, repr=False)

    @property
    def num_samples(self) -> int:
        return self.signal.shape[-1]

    @property
    def times(self) -> np.ndarray:
        return (self.start_index + np.arange(self.num_samples)) / self.sample_rate

    @property
    def has_noise(self) -> bool:
        return self.noise is not None

    def channel(self, m: int) -> np.ndarray:
        """Data entering receive channel ``m`` (before mixing)."""
        if self.noise is None:
            return self.signal
        if self.noise.ndim == 4:
            return self.signal + self.noise[m]
        return self.signal + self.noise


@dataclass(frozen=True)
class ChannelOutput:
    """Matched-filter outputs ``z[m, n, k, lag]`` and per-channel noise scale.

    Lag ``j`` corresponds to delay ``(start_index + j) / sample_rate``.
    ``scale[m]`` is ``sqrt(|h_m|^2 / N_s)``; dividing by it gives every
    channel the same white-noise output power.
    """

    z: np.ndarray
    sample_rate: float
    start_index: int
    scale: np.ndarray
    architecture: Architecture
    num_pulse_samples: int

    @property
    def num_channels(self) -> int:
        return self.z.shape[0]

    @property
    def delays(self) -> np.ndarray:
        return (self.start_index + np.arange(self.z.shape[-1])) / self.sample_rate

    @property
    def ranges(self) -> np.ndarray:
        return C * self.delays / 2

    def lag_index(self, delay: float) -> int:
        return int(round(delay * self.sample_rate)) - self.start_index


@dataclass(frozen=True)
class AmplitudeCoefficient:
    value: float
    delta_f: float
    method: str
    per_channel: np.ndarray = field(repr=False)

    @property
    def spread(self) -> float:
        """Relative max-min spread of the per-channel coefficients."""
        pc = self.per_channel
        return float((pc.max() - pc.min()) / pc.max())


def default_window(sc: Scenario, e: PointEmitter, pad: int | None = None) -> tuple[int, int]:
    """Sample window ``(start_index, length)`` holding the echo plus ``pad`` samples each side."""
    ns = sc.num_samples
    pad = ns if pad is None else int(pad)
    centre = int(round(2 * e.range / C * sc.sample_rate))
    start = centre - ns // 2 - pad
    return start, ns + 2 * pad + 1


def transmit_weights_for(sc: Scenario, arch, steer: PointEmitter) -> BeamformWeights:
    """Coherent architectures steer towards ``steer``; orthogonal ones radiate unweighted."""
    arch = Architecture.parse(arch)
    if arch in (Architecture.PA, Architecture.C_FDA):
        return tx_weights(sc, steer.azimuth, steer.elevation)
    return uniform_weights(sc)


def synthesize_echo(
    sc: Scenario,
    e: PointEmitter,
    weights: BeamformWeights,
    amplitude: complex = 1.0,
    with_noise: bool = False,
    rng: np.random.Generator | None = None,
    window: tuple[int, int] | None = None,
    noise_mode: str = "per_channel",
) -> EchoCube:
    """Delayed, phase-rotated copies of the composite transmit signal for every (n, k).

    Each spectral component ``i`` of the echo carries the phase
    ``exp(-j2π[f_c + iΔf] tau_{n,k})``; the pulse is evaluated analytically at
    the delayed times, so fractional delays are exact.
    """
    if noise_mode not in NOISE_MODES:
        raise ValueError(f"noise_mode must be one of {NOISE_MODES}, got {noise_mode!r}")
    start, length = window if window is not None else default_window(sc, e)
    fs = sc.sample_rate
    t = (start + np.arange(length)) / fs
    tau = delays(sc, e).rx_pulse()
    half = sc.num_samples / 2 / fs
    lo, hi = t[0], t[-1] + 1 / fs
    if tau.min() - half < lo - 1e-6 / fs or tau.max() + half > hi + 1e-6 / fs:
        raise ValueError(
            f"echo of emitter at {e.range:g} m ({tau.min() * 1e6:.3f} us) falls outside the "
            f"receive window [{lo * 1e6:.3f}, {hi * 1e6:.3f}) us"
        )
    coeff = composite_coefficients(sc, weights, e)
    tt = t[None, None, :] - tau[:, :, None]
    kappa = sc.chirp_rate
    pulse = lfm(tt, sc.pulse_width, kappa, fs)
    offs = np.arange(sc.num_tx) * sc.frequency_offset
    tones = np.exp(2j * np.pi * tt[..., None] * offs) @ coeff
    carrier = np.exp(-2j * np.pi * sc.carrier_frequency * tau)[:, :, None]
    y = amplitude * carrier * pulse * tones
    noise = None
    if with_noise:
        rng = np.random.default_rng(sc.rng_seed) if rng is None else rng
        shape = y.shape if noise_mode == "per_element" else (sc.num_tx,) + y.shape
        noise = _complex_noise(rng, shape, sc.noise_power)
    return EchoCube(y, fs, start, e, noise)


def _complex_noise(rng: np.random.Generator, shape, power: float) -> np.ndarray:
    s = math.sqrt(power / 2)
    return s * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def noise_cube(sc: Scenario, window: tuple[int, int], rng: np.random.Generator, noise_mode="per_channel") -> EchoCube:
    """Noise-only cube on ``window``."""
    start, length = window
    y = np.zeros((sc.num_rx, sc.num_pulses, length), dtype=complex)
    shape = y.shape if noise_mode == "per_element" else (sc.num_tx,) + y.shape
    return EchoCube(y, sc.sample_rate, start, None, _complex_noise(rng, shape, sc.noise_power))


def _mix(sc: Scenario, cube: EchoCube) -> np.ndarray:
    t = cube.times
    out = np.empty((sc.num_tx,) + cube.signal.shape, dtype=complex)
    for m in range(sc.num_tx):
        out[m] = cube.channel(m) * np.exp(-2j * np.pi * m * sc.frequency_offset * t)
    return out


def mfm(sc: Scenario, cube: EchoCube) -> np.ndarray:
    """Multi-channel frequency mixing: channel ``m`` is shifted down by ``m*Δf``. Shape (M, N, K, L)."""
    return _mix(sc, cube)


def mmf_templates(sc: Scenario) -> np.ndarray:
    """Filter templates ``phi(t) * sum_i exp(j2π(i-m)Δf t)`` for every channel, shape (M, N_s)."""
    base = lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate)
    t = base.times
    M = sc.num_tx
    i = np.arange(M)
    rel = (i[None, :] - i[:, None]) * sc.frequency_offset
    tones = np.exp(2j * np.pi * rel[:, :, None] * t[None, None, :]).sum(axis=1)
    return base.samples[None, :] * tones


def _matched(data: np.ndarray, template: np.ndarray, ns: int) -> np.ndarray:
    """Correlate ``data[..., L]`` with ``template[..., ns]``, returning lags aligned to the data grid."""
    kernel = np.conj(template[..., ::-1])
    full = fft_convolve(data, kernel, axis=-1)
    first = ns - ns // 2 - 1
    return full[..., first : first + data.shape[-1]]


def mmf(sc: Scenario, mixed: np.ndarray, start_index: int) -> ChannelOutput:
    """Multi-channel matched filtering of MFM outputs."""
    h = mmf_templates(sc)
    ns = h.shape[1]
    z = _matched(mixed, h[:, None, None, :], ns)
    scale = np.sqrt(np.sum(np.abs(h) ** 2, axis=1) / ns)
    return ChannelOutput(z, sc.sample_rate, start_index, scale, Architecture.C_FDA, ns)


def cfda_receiver(sc: Scenario, cube: EchoCube) -> ChannelOutput:
    return mmf(sc, mfm(sc, cube), cube.start_index)


def pa_receiver(sc: Scenario, cube: EchoCube) -> ChannelOutput:
    """Single matched filter per element and pulse; the output has one channel."""
    base = lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate).samples
    ns = base.size
    z = _matched(cube.channel(0)[None], base, ns)
    return ChannelOutput(z, sc.sample_rate, cube.start_index, np.ones(1), Architecture.PA, ns)


def fdamimo_receiver(sc: Scenario, cube: EchoCube) -> ChannelOutput:
    """Mix channel ``m`` down by ``m*Δf`` and match against the bare pulse."""
    base = lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate).samples
    ns = base.size
    z = _matched(_mix(sc, cube), base, ns)
    return ChannelOutput(z, sc.sample_rate, cube.start_index, np.ones(sc.num_tx), Architecture.FDA_MIMO, ns)


def receive(sc: Scenario, cube: EchoCube, arch) -> ChannelOutput:
    arch = Architecture.parse(arch)
    if arch is Architecture.PA:
        return pa_receiver(sc, cube)
    if arch is Architecture.C_FDA:
        return cfda_receiver(sc, cube)
    if arch is Architecture.FDA_MIMO:
        return fdamimo_receiver(sc, cube)
    raise ValueError("the MIMO baseline is closed-form only; no time-domain receiver exists for it")


def peak_bins(out: ChannelOutput) -> np.ndarray:
    """Per-channel lag index of the maximum of ``sum_{n,k} |z|^2``."""
    power = np.sum(np.abs(out.z) ** 2, axis=(1, 2))
    return np.argmax(power, axis=-1)


def sample_peak(
    out: ChannelOutput,
    mode: str = "at_known_delay",
    emitter: PointEmitter | None = None,
    sc: Scenario | None = None,
    lag: int | None = None,
) -> Snapshot:
    """Take one fast-time sample per channel and normalize it.

    ``at_known_delay`` samples each (n, k) at the grid point nearest
    ``tau_{n,k}`` (needs ``emitter`` and ``sc``) unless an explicit ``lag`` is
    given. ``argmax`` uses :func:`peak_bins` per channel and reports the
    channel-0 bin as ``bin_index``.
    """
    z = out.z
    M, N, K, L = z.shape
    if mode == "at_known_delay":
        if lag is not None:
            idx = np.full((M, N, K), int(lag))
        else:
            if emitter is None or sc is None:
                raise ValueError("at_known_delay sampling needs the emitter and scenario (or a lag)")
            tau = delays(sc, emitter).rx_pulse()
            idx = np.broadcast_to(np.rint(tau * out.sample_rate).astype(int) - out.start_index, (M, N, K))
        bin_index = int(idx[0, 0, 0])
    elif mode == "argmax":
        bins = peak_bins(out)
        idx = np.broadcast_to(bins[:, None, None], (M, N, K))
        bin_index = int(bins[0])
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    if np.any(idx < 0) or np.any(idx >= L):
        raise ValueError("requested sample lies outside the filter output")
    vals = np.take_along_axis(z, idx[..., None], axis=-1)[..., 0]
    vals = vals / out.scale[:, None, None]
    return Snapshot(vals.ravel(), out.architecture, bin_index)


def simulate_snapshot(
    sc: Scenario,
    arch,
    e: PointEmitter,
    amplitude: complex = 1.0,
    steer: PointEmitter | None = None,
    mode: str = "at_known_delay",
) -> Snapshot:
    """Noise-free end-to-end snapshot; PA runs with the frequency offset forced to zero."""
    arch = Architecture.parse(arch)
    if arch is Architecture.PA:
        sc = sc.replace(frequency_offset=0.0)
    w = transmit_weights_for(sc, arch, steer or e)
    cube = synthesize_echo(sc, e, w, amplitude)
    out = receive(sc, cube, arch)
    return sample_peak(out, mode, emitter=e, sc=sc)


def _spectral_energy(sc: Scenario) -> np.ndarray:
    """Per-channel peak of the inverse transform of ``|sum_i Z(f - (i-m)Δf)|^2``."""
    base = lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate)
    t = base.times
    ns = base.samples.size
    nfft = next_fast_len(2 * ns)
    M = sc.num_tx
    shifts = np.arange(-(M - 1), M) * sc.frequency_offset
    # Z evaluated at shifted frequencies: spectrum of the pulse modulated by each shift
    Zs = fft(base.samples[None, :] * np.exp(2j * np.pi * shifts[:, None] * t[None, :]), nfft, axis=1)
    out = np.empty(M)
    for m in range(M):
        rows = np.arange(M) - m + (M - 1)
        Q = Zs[rows].sum(axis=0)
        r = ifft(np.abs(Q) ** 2)
        out[m] = np.max(np.abs(r))
    return out


def amplitude_coefficient(sc: Scenario, method: str = "spectral") -> AmplitudeCoefficient:
    """C-FDA amplitude coefficient ``E = sqrt(peak / N_s)`` of the exactly matched MMF.

    ``E == M`` at zero offset. Warns when ``Δf >= B/(M-1)``, where the
    overlapped-spectrum regime no longer holds.
    """
    M = sc.num_tx
    if M > 1 and sc.frequency_offset >= sc.bandwidth / (M - 1):
        warnings.warn(
            f"frequency offset {sc.frequency_offset:g} Hz >= B/(M-1); spectra no longer overlap",
            RuntimeWarning,
            stacklevel=2,
        )
    ns = sc.num_samples
    if method == "spectral":
        per = np.sqrt(_spectral_energy(sc) / ns)
    elif method == "time_peak":
        ref = sc.replace(num_rx=1, num_pulses=1, platform_velocity=0.0)
        lag = int(round(2 * 12e3 / C * ref.sample_rate))
        e = PointEmitter(azimuth=math.pi / 2, elevation=0.0, range=lag * C / (2 * ref.sample_rate))
        cube = synthesize_echo(ref, e, uniform_weights(ref), 1.0)
        snap = sample_peak(cfda_receiver(ref, cube), "at_known_delay", emitter=e, sc=ref)
        per = np.abs(snap.data) / ns
    else:
        raise ValueError(f"unknown amplitude-coefficient method {method!r}")
    return AmplitudeCoefficient(float(per[0]), sc.frequency_offset, method, per)


def range_profile_rows(out: ChannelOutput, channels=None):
    """Rows ``(channel_m, rx_n, pulse_k, range_m, magnitude, phase_rad)`` of the raw filter output."""
    M, N, K, L = out.z.shape
    ranges = out.ranges
    chans = range(M) if channels is None else channels
    for m in chans:
        for n in range(N):
            for k in range(K):
                z = out.z[m, n, k]
                mag = np.abs(z)
                ph = np.angle(z)
                for j in range(L):
                    yield (m + 1, n + 1, k + 1, float(ranges[j]), float(mag[j]), float(ph[j]))


@dataclass(frozen=True)
class GainEstimate:
    """Monte-Carlo output SNR for the beamformer ``w = t``.

    ``normalized`` divides by ``N_s * |xi|^2 / sigma_n^2`` so that the
    coherent-PA value is ``M**2 * N * K``.
    """

    architecture: Architecture
    output_snr: float
    normalized: float
    signal_power: float
    noise_power: float
    trials: int
    samples: int


def array_gain_mc(
    sc: Scenario,
    arch,
    trials: int = 200,
    seed: int | None = None,
    target: PointEmitter | None = None,
    noise_mode: str = "per_channel",
    pad_factor: int = 4,
) -> GainEstimate:
    """Measure ``|t^H t|^2 / E|t^H n|^2`` with ``t`` the noise-free snapshot.

    Noise statistics pool every lag whose filter support lies fully inside
    the window, over ``trials`` independent draws (one spawned RNG stream per
    trial, so results do not depend on evaluation order).
    """
    arch = Architecture.parse(arch)
    if arch is Architecture.PA:
        sc = sc.replace(frequency_offset=0.0)
    e = target or PointEmitter.at_range(sc, 12e3, azimuth=0.0)
    t = simulate_snapshot(sc, arch, e).data
    ns = sc.num_samples
    window = default_window(sc, e, pad=pad_factor * ns)
    lo, hi = ns, window[1] - ns
    seed = sc.rng_seed if seed is None else seed
    streams = np.random.SeedSequence(seed).spawn(trials)
    acc = np.zeros(trials)
    count = hi - lo
    for i, ss in enumerate(streams):
        cube = noise_cube(sc, window, np.random.default_rng(ss), noise_mode)
        out = receive(sc, cube, arch)
        zn = out.z[..., lo:hi] / out.scale[:, None, None, None]
        proj = np.tensordot(t.conj().reshape(zn.shape[:3]), zn, axes=([0, 1, 2], [0, 1, 2]))
        acc[i] = np.sum(np.abs(proj) ** 2)
    noise = float(np.sum(acc) / (trials * count))
    sig = float(np.real(np.vdot(t, t)) ** 2)
    snr = sig / noise
    return GainEstimate(arch, snr, snr * sc.noise_power / ns, sig, noise, trials, trials * count)
