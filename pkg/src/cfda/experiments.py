"""Experiment runners behind the CLI. Each returns a header and sorted rows."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .clutter import ClutterModel, clutter_spectrum, sdr_loss_curve
from .config import ExperimentConfig
from .interference import JammerScene, capon_map, sinr_closed_form
from .numerics import db10
from .rxchain import amplitude_coefficient, array_gain_mc, receive, synthesize_echo, transmit_weights_for
from .scene import PointEmitter
from .steering import Architecture

__all__ = ["EXPERIMENTS", "run_experiment", "default_delta_f"]


def default_delta_f(cfg: ExperimentConfig, arch: Architecture) -> list[float]:
    if arch in (Architecture.PA, Architecture.MIMO):
        return [0.0]
    if arch is Architecture.FDA_MIMO:
        return [cfg.scenario.frequency_offset]
    return [50e3]


def _target(cfg: ExperimentConfig, sc) -> PointEmitter:
    return PointEmitter.at_range(
        sc, cfg.target_range, azimuth=cfg.target_azimuth, velocity=cfg.target_velocity, doppler=cfg.target_doppler
    )


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _pairs(cfg, archs, delta_fs):
    out = []
    for a in archs:
        dfs = [0.0] if a in (Architecture.PA, Architecture.MIMO) else (delta_fs or default_delta_f(cfg, a))
        out.extend((a, float(df)) for df in dfs)
    return out


def mf_profile(cfg, archs, delta_fs, seed, trials, jobs):
    header = ["architecture", "delta_f_Hz", "channel_m", "rx_n", "pulse_k", "range_m", "magnitude", "phase_rad"]

    def one(pair):
        arch, df = pair
        if arch is Architecture.MIMO:
            raise ValueError("mf-profile needs a time-domain receiver; choose pa, fda-mimo or c-fda")
        sc = cfg.scenario.replace(frequency_offset=df)
        e = _target(cfg, sc)
        w = transmit_weights_for(sc, arch, e)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        cube = synthesize_echo(sc, e, w, 1.0, with_noise=trials > 0, rng=rng)
        out = receive(sc, cube, arch)
        z = out.z[0, 0, 0]
        return [
            (str(arch), df, 1, 1, 1, float(r), float(abs(v)), float(np.angle(v)))
            for r, v in zip(out.ranges, z)
        ]

    rows = [r for block in _pmap(one, _pairs(cfg, archs, delta_fs), jobs) for r in block]
    return header, rows


def gain_sweep(cfg, archs, delta_fs, seed, trials, jobs):
    sc0 = cfg.scenario
    M = sc0.num_tx
    dfs = delta_fs or [0.0, 10e3, 50e3, 100e3]
    header = ["delta_f_Hz", "E_spectral", "E_time_peak", "sqrt_M", "M", "in_bounds", "mc_gain_cfda", "mc_gain_pa"]
    pa = array_gain_mc(sc0, "pa", trials=trials, seed=seed).normalized if trials > 0 else float("nan")

    def one(df):
        sc = sc0.replace(frequency_offset=df)
        es = amplitude_coefficient(sc, "spectral").value
        et = amplitude_coefficient(sc, "time_peak").value
        ok = math.sqrt(M) < es <= M * (1 + 1e-9) or (df == 0 and abs(es - M) <= 1e-6 * M)
        g = array_gain_mc(sc, "c-fda", trials=trials, seed=seed).normalized if trials > 0 else float("nan")
        return (float(df), es, et, math.sqrt(M), float(M), int(ok), g, pa)

    return header, _pmap(one, dfs, jobs)


def sinr_sweep(cfg, archs, delta_fs, seed, trials, jobs, offsets=None):
    header = ["delta_R_m", "architecture", "delta_f_Hz", "SINR_dB"]
    offs = np.arange(-1500.0, 1500.0 + 1e-9, 10.0) if offsets is None else np.asarray(offsets, dtype=float)

    def one(pair):
        arch, df = pair
        sc = cfg.scenario.replace(frequency_offset=df)
        E = amplitude_coefficient(sc).value if arch is Architecture.C_FDA else None
        doppler = cfg.target_doppler
        rows = []
        for dr in offs:
            js = JammerScene.make(
                sc, arch, cfg.target_range, cfg.target_range + dr, cfg.snr_db, cfg.inr_db,
                cfg.target_azimuth, doppler, E,
            )
            rows.append((float(dr), str(arch), df, float(db10(sinr_closed_form(js)))))
        return rows

    rows = [r for block in _pmap(one, _pairs(cfg, archs, delta_fs), jobs) for r in block]
    return header, rows


def capon(cfg, archs, delta_fs, seed, trials, jobs, n_range=100, n_az=61):
    header = ["architecture", "delta_f_Hz", "range_m", "azimuth_deg", "P_F_dB"]
    ranges = np.linspace(cfg.target_range - 500.0, cfg.target_range + 1000.0, n_range)
    az_deg = np.linspace(-30.0, 30.0, n_az)

    def one(pair):
        arch, df = pair
        sc = cfg.scenario.replace(frequency_offset=df)
        js = JammerScene.make(
            sc, arch, cfg.target_range, cfg.jammer_range, cfg.snr_db, cfg.inr_db, cfg.target_azimuth, cfg.target_doppler
        )
        P = db10(capon_map(js, ranges, np.radians(az_deg)))
        return [
            (str(arch), df, float(r), float(a), float(P[i, j]))
            for i, r in enumerate(ranges)
            for j, a in enumerate(az_deg)
        ]

    rows = [r for block in _pmap(one, _pairs(cfg, archs, delta_fs), jobs) for r in block]
    return header, rows


def _clutter_model(cfg, sc):
    return ClutterModel.build(
        sc, cfg.target_range, cfg.num_patches, cfg.num_ambiguous, cfg.cnr_db, cfg.target_azimuth
    )


def clutter_spec(cfg, archs, delta_fs, seed, trials, jobs, n_range=21, n_doppler=64):
    header = ["architecture", "delta_f_Hz", "stage", "range_bin", "doppler_bin", "range_m", "doppler", "power_dB"]
    offsets = (np.arange(n_range) - n_range // 2) * 150.0
    fd = np.arange(n_doppler) / n_doppler - 0.5

    def one(pair):
        arch, df = pair
        sc = cfg.scenario.replace(frequency_offset=df)
        model = _clutter_model(cfg, sc)
        rows = []
        for stage, after in (("before", False), ("after", True)):
            S = clutter_spectrum(sc, model, arch, offsets, fd, after_stap=after)
            for i, off in enumerate(offsets):
                for j, f in enumerate(fd):
                    rows.append((str(arch), df, stage, i, j, float(cfg.target_range + off), float(f), float(S[i, j])))
        return rows

    rows = [r for block in _pmap(one, _pairs(cfg, archs, delta_fs), jobs) for r in block]
    return header, rows


def sdr_loss(cfg, archs, delta_fs, seed, trials, jobs, n_doppler=100, training_bins=2):
    header = [
        "architecture", "delta_f_Hz", "method", "srdc_flag", "doppler_normalized", "sdr_loss_dB", "sdr_loss_raw_dB",
    ]
    fd = np.arange(n_doppler) / n_doppler - 0.5
    jobs_list = []
    for arch, df in _pairs(cfg, archs, delta_fs):
        jobs_list.append((arch, df, "strap", False, 0))
        if arch is Architecture.C_FDA:
            for m in ("3d_stap", "dw_stap"):
                for s in (False, True):
                    jobs_list.append((arch, df, m, s, training_bins))

    def one(item):
        arch, df, method, srdc, tb = item
        sc = cfg.scenario.replace(frequency_offset=df)
        model = _clutter_model(cfg, sc)
        c = sdr_loss_curve(sc, model, arch, fd, method=method, srdc=srdc, snr_in=10 ** (cfg.snr_db / 10), training_bins=tb)
        return [
            (str(arch), df, method, int(srdc), float(f), float(l), float(r))
            for f, l, r in zip(c.doppler, c.loss_db, c.raw_loss_db)
        ]

    rows = [r for block in _pmap(one, jobs_list, jobs) for r in block]
    return header, rows


EXPERIMENTS = {
    "mf-profile": mf_profile,
    "gain-sweep": gain_sweep,
    "sinr-sweep": sinr_sweep,
    "capon-map": capon,
    "clutter-spectrum": clutter_spec,
    "sdr-loss": sdr_loss,
}


def run_experiment(name, cfg, archs, delta_fs, seed=0, trials=0, jobs=1):
    """Run one experiment; rows come back sorted so output bytes never depend on scheduling."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}")
    archs = [Architecture.parse(a) for a in archs]
    header, rows = EXPERIMENTS[name](cfg, archs, list(delta_fs or []), seed, trials, jobs)
    rows = sorted(rows, key=lambda r: tuple((0, v) if isinstance(v, (int, float)) else (1, str(v)) for v in r))
    return header, rows
