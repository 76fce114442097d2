import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfda.scene import C, PointEmitter, Scenario
from cfda.txchain import BeamformWeights, composite_coefficients, transmit_signal, tx_weights, uniform_weights
from cfda.waveform import WaveformBank, lfm_baseband, transmit_bank


def test_broadside_weights_are_one(desk):
    np.testing.assert_allclose(tx_weights(desk, math.pi / 2, 0.3).values, 1.0, atol=1e-12)


def test_first_weight_is_one(desk):
    for az in (0.0, 0.7, -1.2):
        assert tx_weights(desk, az, 0.2).values[0] == 1.0


def test_zero_offset_weights_are_pa_steering(desk):
    sc = desk.replace(frequency_offset=0.0)
    az, el = 0.3, 0.25
    m = np.arange(4)
    ref = np.exp(-2j * np.pi * sc.carrier_frequency * m * sc.element_spacing / C * math.cos(az) * math.cos(el))
    np.testing.assert_allclose(tx_weights(sc, az, el).values, ref, atol=1e-12)


def test_weights_must_be_unit_modulus():
    with pytest.raises(ValueError, match="unit modulus"):
        BeamformWeights(np.array([1.0, 0.5]))


def test_single_element_transmit_is_element_signal(desk):
    sc = desk.replace(num_tx=1)
    e = PointEmitter.at_range(sc, 12e3, azimuth=0.4)
    s = transmit_signal(sc, transmit_bank(sc), tx_weights(sc, 0.4, e.elevation), e)
    np.testing.assert_allclose(s.samples, lfm_baseband(sc.pulse_width, sc.bandwidth, sc.sample_rate).samples)


@given(st.floats(-math.pi, math.pi), st.floats(3000.0, 30e3))
def test_steered_zero_offset_sum_is_coherent(az, r):
    sc = Scenario.desk(frequency_offset=0.0)
    e = PointEmitter.at_range(sc, r, azimuth=az)
    s = transmit_signal(sc, transmit_bank(sc), tx_weights(sc, az, e.elevation), e)
    np.testing.assert_allclose(np.abs(s.samples), sc.num_tx, rtol=1e-12)
    np.testing.assert_allclose(np.abs(composite_coefficients(sc, tx_weights(sc, az, e.elevation), e)), 1.0)
    np.testing.assert_allclose(composite_coefficients(sc, tx_weights(sc, az, e.elevation), e), 1.0, atol=1e-9)


def test_broadside_emitter_coherent(desk):
    sc = desk.replace(frequency_offset=0.0)
    e = PointEmitter(math.pi / 2, 0.2, 12e3)
    s = transmit_signal(sc, transmit_bank(sc), tx_weights(sc, math.pi / 2, 0.2), e)
    np.testing.assert_allclose(np.abs(s.samples), 4.0)


def test_transmit_linear_in_bank(desk, rng):
    sc = desk.replace(frequency_offset=20e3)
    e = PointEmitter.at_range(sc, 10e3, azimuth=0.3)
    w = tx_weights(sc, 0.1, 0.2)
    b1 = transmit_bank(sc)
    sig2 = rng.standard_normal(b1.signals.shape) + 1j * rng.standard_normal(b1.signals.shape)
    b2 = WaveformBank(sig2, b1.sample_rate, b1.t0, b1.frequency_offset)
    b12 = WaveformBank(2.0 * b1.signals - 3j * sig2, b1.sample_rate, b1.t0, b1.frequency_offset)
    lhs = transmit_signal(sc, b12, w, e).samples
    rhs = 2.0 * transmit_signal(sc, b1, w, e).samples - 3j * transmit_signal(sc, b2, w, e).samples
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_uniform_weights_and_mismatch(desk):
    w = uniform_weights(desk)
    assert len(w) == 4
    e = PointEmitter.at_range(desk, 12e3)
    with pytest.raises(ValueError):
        composite_coefficients(desk.replace(num_tx=3), w, e)
    with pytest.raises(ValueError):
        transmit_signal(desk, transmit_bank(desk.replace(num_tx=3)), w, e)
