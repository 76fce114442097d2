import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfda.clutter import (
    ClutterModel,
    ClutterRing,
    clutter_columns,
    clutter_covariance,
    clutter_spectrum,
    count_notches,
    patch_doppler,
    scale_powers,
    sdr_closed_form,
    sdr_direct,
    sdr_loss_curve,
    srdc_vector,
    strap_weights,
)
from cfda.scene import PointEmitter, Scenario, elevation_from_range
from cfda.steering import SteeringModel, ideal_snapshot

E = 3.0


def _model(sc, I=60, P=3, cnr_db=50.0, r=12e3):
    return ClutterModel.build(sc, r, I, P, cnr_db)


def test_single_patch_column_is_ideal_snapshot(desk):
    sc = desk.replace(frequency_offset=50e3)
    m = _model(sc, I=1, P=0)
    V = clutter_columns(sc, m, "c-fda", E)
    assert V.shape == (64, 1)
    e = PointEmitter(0.0, m.cut_elevation, 12e3, kind="clutter_patch", doppler=float(patch_doppler(sc, 0.0, m.cut_elevation)))
    np.testing.assert_allclose(V[:, 0], ideal_snapshot(SteeringModel("c-fda", sc), e, 1.0, E).data, atol=1e-12)


def test_column_count_reference_layout(fig):
    m = ClutterModel.build(fig, 12e3, 360, 5, 50.0)
    assert m.num_columns == 2160
    assert [r.range for r in m.rings] == pytest.approx([12e3 + p * 15e3 for p in range(6)])


def test_zero_offset_rings_share_range_block(desk):
    sc = desk.replace(frequency_offset=0.0)
    m = _model(sc, I=6, P=2)
    V = clutter_columns(sc, m, "c-fda", E).reshape(4, 16, -1)
    # range block all ones: every transmit slice equals the first
    for mm in range(1, 4):
        np.testing.assert_allclose(V[mm], V[0], atol=1e-12)
    # rings differ only through elevation in the spatial factor
    ring0, ring2 = V[0, :, :6], V[0, :, 12:18]
    dop0 = ring0.reshape(4, 4, 6)[0]
    dop2 = ring2.reshape(4, 4, 6)[0]
    np.testing.assert_allclose(dop0, dop2, atol=1e-12)


def test_srdc_examples(desk):
    np.testing.assert_allclose(srdc_vector(desk.replace(frequency_offset=0.0), 12e3), 1.0)
    sc = desk.replace(frequency_offset=37e3)
    e = PointEmitter.at_range(sc, 12e3, azimuth=0.2)
    t = ideal_snapshot(SteeringModel("c-fda", sc), e, 1.0, E).data
    comp = (t * srdc_vector(sc, 12e3)).reshape(4, 16)
    np.testing.assert_allclose(comp / comp[0], 1.0, atol=1e-12)


def test_srdc_residual_phase_on_ambiguous_rings(desk):
    sc = desk.replace(frequency_offset=37e3)
    m = _model(sc, I=4, P=2)
    V = clutter_columns(sc, m, "c-fda", E) * srdc_vector(sc, 12e3)[:, None]
    for p in range(3):
        col = V[:, 4 * p].reshape(4, 16)[:, 0]
        step = col[1:] / col[:-1]
        expected = np.exp(-2j * np.pi * 2 * p * sc.unambiguous_range * sc.frequency_offset / 3e8)
        np.testing.assert_allclose(step, expected, atol=1e-9)


@given(st.floats(0, 2e6), st.floats(3500.0, 14e3), st.integers(1, 12))
def test_srdc_exact_on_cut_ring(df, r, I):
    sc = Scenario.desk(frequency_offset=df)
    m = ClutterModel.build(sc, r, I, 0, 40.0)
    V = clutter_columns(sc, m, "c-fda", E) * srdc_vector(sc, r)[:, None]
    rng_phase = V.reshape(4, 16, I) / V.reshape(4, 16, I)[:1]
    assert np.max(np.abs(rng_phase - 1.0)) <= 1e-12


@given(st.sampled_from(["pa", "mimo", "fda-mimo", "c-fda"]), st.floats(0, 60), st.integers(1, 20), st.integers(0, 3))
def test_covariance_hermitian_psd(arch, cnr_db, I, P):
    sc = Scenario.desk(frequency_offset=50e3)
    m = ClutterModel.build(sc, 12e3, I, P, max(cnr_db, 0.0))
    V = clutter_columns(sc, m, arch, E)
    R = clutter_covariance(V, scale_powers(m, V, 1.0), 1.0).matrix
    np.testing.assert_allclose(R, R.conj().T, atol=0)
    ev = np.linalg.eigvalsh(R)
    assert ev.min() >= -1e-9 * ev.max()


def test_zero_power_covariance_is_noise(desk):
    m = _model(desk, I=5, P=1)
    V = clutter_columns(desk, m, "fda-mimo")
    np.testing.assert_allclose(clutter_covariance(V, np.zeros(10), 2.0).matrix, 2.0 * np.eye(64))


def test_clutter_rank_bound(desk):
    m = _model(desk, I=5, P=1)
    V = clutter_columns(desk, m, "c-fda", E)
    Rc = clutter_covariance(V, scale_powers(m, V, 1.0), 1.0).matrix - np.eye(64)
    assert np.linalg.matrix_rank(Rc, tol=1e-8 * np.abs(Rc).max()) <= 10


@pytest.mark.parametrize("arch", ["pa", "fda-mimo", "c-fda"])
@pytest.mark.parametrize("cnr_db", [20.0, 50.0])
def test_cnr_round_trip(desk, arch, cnr_db):
    m = _model(desk, cnr_db=cnr_db)
    V = clutter_columns(desk, m, arch, E)
    R = clutter_covariance(V, scale_powers(m, V, 1.0), 1.0).matrix
    cnr = np.trace(R).real / V.shape[0]
    assert cnr == pytest.approx(10 ** (cnr_db / 10), rel=0.01)


def test_cnr_below_noise_rejected(desk):
    m = _model(desk, cnr_db=-3.0)
    with pytest.raises(ValueError, match="CNR"):
        scale_powers(m, clutter_columns(desk, m, "pa"), 1.0)


def test_strap_clutter_free_is_matched_filter(desk, rng):
    t = np.exp(2j * np.pi * rng.random(64))
    V = np.zeros((64, 1), dtype=complex)
    w = strap_weights(t, clutter_covariance(V, [0.0], 1.0))
    np.testing.assert_allclose(w, t / 64, atol=1e-15)


def test_strap_rejects_ambiguous_patch(desk):
    sc = desk.replace(frequency_offset=50e3)
    r1 = 12e3 + sc.unambiguous_range
    cut = _model(sc, I=1, P=0)
    ring = ClutterRing(1, r1, elevation_from_range(sc, r1), np.array([0.0]), np.array([1.0]))
    m = ClutterModel((ring,), 1e5, 12e3)
    V = clutter_columns(sc, m, "c-fda", E)
    R = clutter_covariance(V, scale_powers(m, V, 1.0), 1.0)
    t = E * SteeringModel("c-fda", sc).vector(0.0, cut.cut_elevation, 12e3, 0.0)
    w = strap_weights(t, R)
    assert np.vdot(w, t) == pytest.approx(1.0)
    c = V[:, 0]
    mf = t / np.vdot(t, t)
    # same azimuth and Doppler, range-aliased ring: only STRAP separates it
    assert 10 * math.log10(abs(np.vdot(mf, c)) ** 2 / abs(np.vdot(w, c)) ** 2) > 20.0


@given(st.integers(0, 10**6))
def test_strap_distortionless(seed):
    r = np.random.default_rng(seed)
    sc = Scenario.desk(frequency_offset=float(r.uniform(0, 1e6)))
    m = ClutterModel.build(sc, float(r.uniform(4e3, 14e3)), 12, 1, float(r.uniform(0, 60)))
    V = clutter_columns(sc, m, "c-fda", E)
    R = clutter_covariance(V, scale_powers(m, V, 1.0), 1.0)
    t = E * np.exp(2j * np.pi * r.random(64))
    assert np.vdot(strap_weights(t, R), t) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("arch", ["pa", "mimo", "fda-mimo", "c-fda"])
def test_sdr_clutter_free(desk, arch):
    sc = desk.replace(frequency_offset=0.0) if arch == "pa" else desk.replace(frequency_offset=50e3)
    m = _model(sc, I=4, P=1)
    zero = np.zeros(8)
    G = {"pa": 256, "mimo": 64, "fda-mimo": 64, "c-fda": E**2 * 64}[arch]
    assert sdr_closed_form(sc, m, arch, 0.2, 10.0, E, zero) == pytest.approx(10 * G)
    assert sdr_direct(sc, m, arch, 0.2, 10.0, E, zero) == pytest.approx(10 * G)


@pytest.mark.parametrize("arch", ["pa", "mimo", "fda-mimo", "c-fda"])
@pytest.mark.parametrize("df", [2.5e3, 50e3, 1e6])
def test_sdr_closed_form_matches_direct_when_resolved(desk, arch, df):
    sc = desk.replace(frequency_offset=0.0 if arch == "pa" else df)
    m = _model(sc, I=3, P=0, cnr_db=40.0)
    V = clutter_columns(sc, m, arch, E)
    pw = scale_powers(m, V, 1.0)
    assert np.min(V.shape[0] * pw) >= 100.0
    for fd in np.linspace(-0.45, 0.45, 10):
        d = sdr_direct(sc, m, arch, fd, 10.0, E)
        c = sdr_closed_form(sc, m, arch, fd, 10.0, E)
        assert c == pytest.approx(d, rel=0.10)


def test_sdr_direct_phase_invariant(desk):
    sc = desk.replace(frequency_offset=50e3)
    m = _model(sc, I=8, P=1)
    V = clutter_columns(sc, m, "c-fda", E)
    pw = scale_powers(m, V, 1.0)
    R1 = clutter_covariance(V, pw, 1.0).matrix
    R2 = clutter_covariance(V * np.exp(1j * 0.7), pw, 1.0).matrix
    np.testing.assert_allclose(R1, R2, atol=1e-9 * np.abs(R1).max())


@given(st.integers(0, 15), st.floats(0.0, 5.0))
def test_sdr_direct_monotone_in_patch_power(idx, extra_log):
    sc = Scenario.desk(frequency_offset=50e3)
    m = ClutterModel.build(sc, 12e3, 8, 1, 30.0)
    V = clutter_columns(sc, m, "c-fda", E)
    pw = scale_powers(m, V, 1.0)
    bigger = pw.copy()
    bigger[idx] *= 10**extra_log
    a = sdr_direct(sc, m, "c-fda", 0.13, 10.0, E, pw)
    b = sdr_direct(sc, m, "c-fda", 0.13, 10.0, E, bigger)
    assert b <= a * (1 + 1e-9)


def test_fdamimo_sdr_minimum_at_ambiguity_condition(desk):
    # a range with R_t = p c/(2T) - L c/(2Δf) against the midpoint between two such ranges
    sc = desk.replace(frequency_offset=1e6)
    on = 10 * math.log10(sdr_direct(sc, _model(sc, r=12000.0), "fda-mimo", 0.25, 10.0))
    off = 10 * math.log10(sdr_direct(sc, _model(sc, r=12075.0), "fda-mimo", 0.25, 10.0))
    assert on < off - 1.0


@given(st.floats(-math.pi, math.pi))
def test_patch_doppler_symmetric_about_heading(phi):
    sc = Scenario.desk()
    psi = sc.yaw
    a = patch_doppler(sc, -psi + phi, 0.25)
    b = patch_doppler(sc, -psi - phi, 0.25)
    assert a == pytest.approx(b, abs=1e-12)


def test_sdr_loss_curve_shapes(desk):
    sc = desk.replace(frequency_offset=2.5e3)
    m = _model(sc)
    fd = np.linspace(-0.5, 0.5, 21, endpoint=False)
    c = sdr_loss_curve(sc, m, "c-fda", fd)
    assert c.loss_db.shape == (21,) and np.all(c.loss_db <= 1e-9)
    assert np.all(c.raw_loss_db > c.loss_db)
    srdc = sdr_loss_curve(sc, m, "c-fda", fd, srdc=True)
    # with the exact CUT covariance SRDC is a unitary diagonal and changes nothing
    np.testing.assert_allclose(srdc.sdr_out, c.sdr_out, rtol=1e-8)
    with pytest.raises(ValueError):
        sdr_loss_curve(sc, m, "c-fda", fd, method="magic")


def test_dw_stap_equals_3d_stap_for_flat_heading(desk):
    sc = desk.replace(frequency_offset=2.5e3)
    m = _model(sc)
    fd = np.linspace(-0.5, 0.5, 10, endpoint=False)
    a = sdr_loss_curve(sc, m, "c-fda", fd, method="3d_stap", training_bins=2)
    b = sdr_loss_curve(sc, m, "c-fda", fd, method="dw_stap", training_bins=2)
    np.testing.assert_allclose(a.sdr_out, b.sdr_out, rtol=1e-9)


def test_clutter_spectrum_shapes(desk):
    sc = desk.replace(frequency_offset=50e3)
    m = _model(sc, I=12, P=1)
    before = clutter_spectrum(sc, m, "c-fda", [0.0, 150.0], np.linspace(-0.5, 0.5, 8, endpoint=False))
    after = clutter_spectrum(sc, m, "c-fda", [0.0, 150.0], np.linspace(-0.5, 0.5, 8, endpoint=False), after_stap=True)
    assert before.shape == after.shape == (2, 8)
    assert after[0].max() < before[0].max()


def test_count_notches_synthetic():
    x = np.linspace(-0.5, 0.5, 200, endpoint=False)
    flat = np.zeros_like(x)
    assert count_notches(flat) == 0
    one = -30 * np.exp(-(((x - 0.1) / 0.02) ** 2))
    assert count_notches(one) == 1
    two = one - 20 * np.exp(-(((x + 0.3) / 0.02) ** 2))
    assert count_notches(two) == 2
    shallow = two - 5 * np.exp(-(((x - 0.4) / 0.01) ** 2))
    assert count_notches(shallow) == 2
    wrapped = -30 * np.exp(-(((x + 0.5) / 0.02) ** 2)) - 30 * np.exp(-(((x - 0.5) / 0.02) ** 2))
    assert count_notches(wrapped) == 1
