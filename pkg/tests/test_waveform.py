import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from cfda.scene import Scenario
from cfda.waveform import ComplexSignal, gram_matrix, lfm, lfm_baseband, lfm_envelope, transmit_bank


def test_chirp_rate_and_sample_count(desk):
    assert desk.chirp_rate == pytest.approx(1e11)
    assert desk.chirp_rate * desk.pulse_width == pytest.approx(desk.bandwidth)
    assert len(lfm_baseband(10e-6, 1e6, 20e6)) == 200


def test_baseband_is_unit_amplitude_chirp():
    s = lfm_baseband(10e-6, 1e6, 20e6)
    np.testing.assert_allclose(np.abs(s.samples), 1.0)
    # instantaneous frequency sweeps -B/2..B/2
    f = np.diff(np.unwrap(np.angle(s.samples))) * s.sample_rate / (2 * np.pi)
    assert f[0] == pytest.approx(-0.5e6, rel=0.02)
    assert f[-1] == pytest.approx(0.5e6, rel=0.02)
    assert s.energy == pytest.approx(200.0)


def test_zero_bandwidth_is_rectangle():
    s = lfm_baseband(10e-6, 0.0, 20e6)
    np.testing.assert_allclose(s.samples, 1.0)


def test_undersampling_raises():
    with pytest.raises(ValueError, match="undersampled"):
        lfm_baseband(10e-6, 1e6, 1.5e6)


def test_envelope_counts_and_shift_invariance():
    fs, tp = 20e6, 10e-6
    t = np.arange(-400, 400) / fs
    assert lfm_envelope(t, tp, fs).sum() == 200
    for shift in (1, 17, -33):
        assert lfm_envelope(t + shift / fs, tp, fs).sum() == 200


def test_lfm_matches_sampled_pulse():
    s = lfm_baseband(10e-6, 1e6, 20e6)
    np.testing.assert_allclose(lfm(s.times, 10e-6, 1e11, 20e6), s.samples, atol=1e-12)


def test_odd_sample_count_grid():
    s = lfm_baseband(10.05e-6, 1e6, 20e6)
    assert len(s) == 201
    assert s.t0 * s.sample_rate == pytest.approx(-100)


def test_complex_signal_properties():
    c = ComplexSignal(np.ones(10), 5.0, t0=1.0)
    assert c.duration == 2.0
    assert c.times[-1] == pytest.approx(1.0 + 9 / 5)
    with pytest.raises(ValueError):
        ComplexSignal(np.ones(3), 0.0)


def test_zero_offset_bank_identical(desk):
    bank = transmit_bank(desk.replace(frequency_offset=0.0))
    for m in range(1, bank.num_elements):
        np.testing.assert_array_equal(bank.signals[m], bank.signals[0])


def test_single_element_bank_is_baseband(desk):
    bank = transmit_bank(desk.replace(num_tx=1))
    np.testing.assert_allclose(bank.element(0).samples, lfm_baseband(10e-6, 1e6, 20e6).samples)


@pytest.mark.parametrize("df", [1e5, 1e6])
def test_spectral_shift_per_element(desk, df):
    bank = transmit_bank(desk.replace(frequency_offset=df))
    nfft = 4096
    binw = bank.sample_rate / nfft
    ref = np.abs(np.fft.fft(bank.signals[0], nfft))
    for m in range(1, bank.num_elements):
        mag = np.abs(np.fft.fft(bank.signals[m], nfft))
        xc = np.fft.ifft(np.fft.fft(mag) * np.conj(np.fft.fft(ref))).real
        lag = int(np.argmax(xc))
        lag = lag - nfft if lag > nfft // 2 else lag
        assert abs(lag * binw - m * df) <= binw


def test_bank_energy_constant(desk):
    bank = transmit_bank(desk)
    np.testing.assert_allclose(np.sum(np.abs(bank.signals) ** 2, axis=1), desk.num_samples)


def test_gram_zero_offset_all_ones(desk):
    g = gram_matrix(transmit_bank(desk.replace(frequency_offset=0.0)))
    np.testing.assert_allclose(g, np.ones((4, 4)), atol=1e-12)


def _gram_entry_quad(tp, df_ij):
    # |phi|^2 == 1 so u_i u_j^* reduces to exp(j2π (i-j) Δf t) over the pulse
    re = quad(lambda t: np.cos(2 * np.pi * df_ij * t), -tp / 2, tp / 2, limit=200)[0]
    im = quad(lambda t: np.sin(2 * np.pi * df_ij * t), -tp / 2, tp / 2, limit=200)[0]
    return (re + 1j * im) / tp


@pytest.mark.parametrize("df", [1e6, 1.3e6, 2e6])
def test_gram_orthogonal_when_offset_exceeds_bandwidth(desk, df):
    sc = desk.replace(frequency_offset=df)
    g = gram_matrix(transmit_bank(sc))
    off = g[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off)) <= 0.05
    for i, j in [(0, 1), (0, 3), (2, 1)]:
        oracle = _gram_entry_quad(sc.pulse_width, (i - j) * df)
        assert abs(g[i, j]) == pytest.approx(abs(oracle), abs=0.01)


@given(st.floats(0, 3e6))
def test_gram_hermitian_unit_diag_psd(df):
    g = gram_matrix(transmit_bank(Scenario.desk(frequency_offset=df)))
    np.testing.assert_allclose(g, g.conj().T, atol=1e-14)
    np.testing.assert_allclose(np.diag(g), 1.0)
    assert np.linalg.eigvalsh(g).min() > -1e-10


@given(st.floats(0, 3e5))
def test_gram_matches_quadrature(df):
    sc = Scenario.desk(frequency_offset=df)
    g = gram_matrix(transmit_bank(sc))
    oracle = _gram_entry_quad(sc.pulse_width, -df)
    assert abs(g[0, 1]) == pytest.approx(abs(oracle), abs=0.01)
