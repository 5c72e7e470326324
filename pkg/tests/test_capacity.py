"""Tests for eigenprofiles, waterfilling, and the SNR/power mapping."""

import math

import numpy as np
import pytest

from ristrace.capacity import (
    ChannelEigenprofile,
    NonPositivePowerError,
    eigenprofile,
    power_to_snr,
    snr_to_power,
    waterfill,
)
from ristrace.channel import ChannelSpec, realize
from ristrace.designs import build_for_kind, compose_f, DesignKind
from ristrace.linalg import trace_gram


def profile(*eigs, n_ch_max=None):
    w = np.array(sorted(eigs, reverse=True), dtype=float)
    return ChannelEigenprofile(eigenvalues=w, n_ch_max=n_ch_max or w.size)


# ---------------------------------------------------------------------------
# eigenprofile
# ---------------------------------------------------------------------------


def test_eigenprofile_identity_channel():
    p = eigenprofile(np.eye(3), n_ris=3)
    assert np.allclose(p.eigenvalues, 1.0)
    assert p.n_ch_max == 3


def test_eigenprofile_sums_to_channel_power():
    rng = np.random.default_rng(5)
    f = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    p = eigenprofile(f, n_ris=8)
    assert p.total == pytest.approx(trace_gram(f), rel=1e-12)
    assert p.eigenvalues.size == 6  # one per transmit antenna
    assert p.n_ch_max == 4


def test_eigenprofile_clamps_rounding_negatives():
    # rank-deficient F: trailing eigenvalues are rounding noise around zero
    rng = np.random.default_rng(7)
    u = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    p = eigenprofile(np.outer(u, v), n_ris=5)
    assert np.all(p.eigenvalues >= 0)
    assert p.eigenvalues[1] <= 1e-12 * p.eigenvalues[0]


# ---------------------------------------------------------------------------
# waterfilling
# ---------------------------------------------------------------------------


def test_waterfill_single_mode():
    res = waterfill(profile(2.0), total_power=3.0)
    assert res.capacity_bits == pytest.approx(math.log2(1.0 + 6.0), rel=1e-12)
    assert res.powers[0] == pytest.approx(3.0, rel=1e-12)


def test_waterfill_equal_modes_split_evenly():
    res = waterfill(profile(1.5, 1.5), total_power=2.0)
    assert np.allclose(res.powers, 1.0)
    assert res.capacity_bits == pytest.approx(2 * math.log2(2.5), rel=1e-12)


def test_waterfill_weak_mode_stays_dry_grid_oracle():
    # eigenvalues (1, 0.01) with unit budget: the weak mode activates only
    # past budget 1/0.01 - 1/1 = 99, so everything goes to the strong one.
    # Grid-search oracle over the split confirms, and the value is exactly
    # log2(2) = 1 bit.
    lam = np.array([1.0, 0.01])
    p1 = np.linspace(0.0, 1.0, 1_000_001)
    grid_best = np.max(
        np.log2(1.0 + p1 * lam[0]) + np.log2(1.0 + (1.0 - p1) * lam[1])
    )
    res = waterfill(profile(*lam), total_power=1.0)
    assert res.capacity_bits == pytest.approx(grid_best, abs=1e-9)
    assert res.capacity_bits == pytest.approx(1.0, rel=1e-12)
    assert res.powers[1] == 0.0


def test_waterfill_respects_budget_and_kkt():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = rng.integers(1, 9)
        lam = np.sort(rng.uniform(0.0, 4.0, n))[::-1]
        if rng.uniform() < 0.3:
            lam[max(1, n // 2):] = 0.0
        if lam[0] == 0.0:
            lam[0] = 0.5
        total = float(rng.uniform(0.1, 50.0))
        res = waterfill(ChannelEigenprofile(lam, n_ch_max=n), total)
        assert res.powers.sum() == pytest.approx(total, rel=1e-9)
        assert np.all(res.powers >= 0)
        for p, l in zip(res.powers, lam):
            if p > 0:
                assert p + 1.0 / l == pytest.approx(res.water_level, rel=1e-9)
            elif l > 0:
                assert 1.0 / l >= res.water_level * (1 - 1e-9)


def test_waterfill_monotone_in_budget():
    lam = profile(3.0, 1.0, 0.2)
    caps = [waterfill(lam, p).capacity_bits for p in (0.5, 1.0, 5.0, 50.0)]
    assert all(b > a for a, b in zip(caps, caps[1:]))


def test_waterfill_beats_uniform_split():
    rng = np.random.default_rng(13)
    for _ in range(20):
        lam = np.sort(rng.uniform(0.01, 5.0, 6))[::-1]
        total = float(rng.uniform(0.5, 20.0))
        res = waterfill(ChannelEigenprofile(lam, n_ch_max=6), total)
        uniform = float(np.sum(np.log2(1.0 + (total / 6) * lam)))
        assert res.capacity_bits >= uniform - 1e-12


def test_waterfill_activates_all_at_high_power():
    lam = profile(3.0, 1.0, 0.2)
    res = waterfill(lam, total_power=1e6)
    assert np.all(res.powers > 0)


def test_waterfill_all_zero_profile():
    res = waterfill(profile(0.0, 0.0), total_power=1.0)
    assert res.all_zero
    assert res.capacity_bits == 0.0
    assert np.allclose(res.powers, 0.5)


def test_waterfill_rejects_bad_budget():
    with pytest.raises(NonPositivePowerError):
        waterfill(profile(1.0), total_power=0.0)


# ---------------------------------------------------------------------------
# SNR mapping
# ---------------------------------------------------------------------------


def test_snr_to_power_definition():
    # SNR_ch = P_ave * E[power] / n_ch; 0 dB with E = n_ch gives P_ave = 1
    total = snr_to_power(0.0, mean_sigma2_f=4.0, n_ch=4, n_tx=3)
    assert total == pytest.approx(3.0, rel=1e-12)
    per_antenna = snr_to_power(0.0, 4.0, 4, 3, budget_mode="per_antenna")
    assert per_antenna == pytest.approx(1.0, rel=1e-12)


def test_snr_power_roundtrip():
    for mode in ("per_symbol_total", "per_antenna"):
        for snr in (-20.0, -2.5, 0.0, 17.5, 30.0):
            total = snr_to_power(snr, 123.4, 7, 5, budget_mode=mode)
            back = power_to_snr(total, 123.4, 7, 5, budget_mode=mode)
            assert back == pytest.approx(snr, abs=1e-12)


def test_snr_to_power_ten_db_steps():
    p0 = snr_to_power(0.0, 10.0, 2, 2)
    p10 = snr_to_power(10.0, 10.0, 2, 2)
    assert p10 / p0 == pytest.approx(10.0, rel=1e-12)


def test_snr_to_power_validation():
    with pytest.raises(NonPositivePowerError):
        snr_to_power(0.0, 0.0, 2, 2)
    with pytest.raises(NonPositivePowerError):
        snr_to_power(math.nan, 1.0, 2, 2)
    with pytest.raises(ValueError):
        snr_to_power(0.0, 1.0, 2, 2, budget_mode="bogus")


# ---------------------------------------------------------------------------
# received-power identity (Monte Carlo)
# ---------------------------------------------------------------------------


def test_received_power_identity():
    # E||F x + w||^2 = P_ave * trace_gram(F) + n_rx for x ~ CN(0, P_ave I),
    # w ~ CN(0, I)
    spec = ChannelSpec(n_tx=4, n_rx=4, n_ris=6, n_paths_h=5, n_paths_g=5, seed=23)
    real = realize(spec)
    d = build_for_kind(DesignKind.OPT_DIAG, real.h, real.g)
    f = compose_f(real.g, d.phi, real.h)
    p_ave = 0.7
    rng = np.random.default_rng(29)
    m = 100_000
    x = (rng.standard_normal((4, m)) + 1j * rng.standard_normal((4, m))) * math.sqrt(
        p_ave / 2.0
    )
    w = (rng.standard_normal((4, m)) + 1j * rng.standard_normal((4, m))) * math.sqrt(
        0.5
    )
    z = f @ x + w
    mean_power = float(np.mean(np.sum(np.abs(z) ** 2, axis=0)))
    expected = p_ave * trace_gram(f) + 4.0
    assert mean_power == pytest.approx(expected, rel=0.02)
