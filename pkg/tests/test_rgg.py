"""Random geometric graphs: kernels, calibration, estimators, sweeps."""

import dataclasses
import math

import numpy as np
import pytest

from gramrd.errors import DomainError, ValidationError
from gramrd.linalg import gram_from_latents, gram_loss_L
from gramrd.rgg import (
    ExperimentRecord,
    GraphSample,
    SweepSummary,
    calibrate_threshold,
    coding_cost_bits,
    fit_calibration_scale,
    generate_graph,
    graph_from_latents,
    phase_sweep,
    spectral_estimate,
    trivial_estimate,
)
from gramrd.sampling import LatentConfig, Prior, sample_latents


def _cfg(n=40, d=4, prior=Prior.GAUSSIAN, seed=0):
    return LatentConfig(n=n, d=d, prior=prior, seed=seed)


def test_graph_sample_validation():
    adj = np.zeros((3, 3), dtype=np.uint8)
    lat = sample_latents(_cfg(n=3, d=2))
    g = GraphSample(adjacency=adj, latents=lat, kernel_threshold=0.0, target_density=0.5)
    assert g.n == 3 and g.edge_count == 0
    assert g.realized_density == 0.0
    bad = adj.copy()
    bad[0, 1] = 1  # asymmetric
    with pytest.raises(ValidationError):
        GraphSample(adjacency=bad, latents=lat, kernel_threshold=0.0, target_density=0.5)
    with pytest.raises(ValidationError):
        GraphSample(adjacency=np.eye(3, dtype=np.uint8), latents=lat,
                    kernel_threshold=0.0, target_density=0.5)
    with pytest.raises(ValidationError):
        GraphSample(adjacency=adj, latents=lat, kernel_threshold=0.0, target_density=1.5)


def test_threshold_oracle_three_sphere():
    """On S^2 the inner product of independent uniform points is uniform on
    [-1, 1], so the (1-p)-quantile is exactly 1 - 2p."""
    for p in (0.25, 0.5):
        tau = calibrate_threshold(3, p, Prior.SPHERE, samples=400_000, seed=9)
        assert tau == pytest.approx(1.0 - 2.0 * p, abs=5e-3)


def test_threshold_gaussian_symmetric():
    # <w, w'> is symmetric about 0, so p = 1/2 puts the threshold at ~0.
    tau = calibrate_threshold(6, 0.5, Prior.GAUSSIAN, samples=400_000, seed=2)
    assert abs(tau) < 5e-3
    with pytest.raises(DomainError):
        calibrate_threshold(6, 0.5, Prior.GAUSSIAN, samples=100)
    with pytest.raises(DomainError):
        calibrate_threshold(6, 0.0, Prior.GAUSSIAN)


def test_graph_from_latents_matches_kernel():
    lat = sample_latents(_cfg(n=25, d=3, seed=4))
    X = lat.entries @ lat.entries.T
    tau = 0.1
    g = graph_from_latents(lat, tau, target_density=0.3)
    expect = (X >= tau).astype(np.uint8)
    np.fill_diagonal(expect, 0)
    np.testing.assert_array_equal(g.adjacency, expect)


def test_realized_density_binomial_band():
    p = 0.25
    cfg = _cfg(n=120, d=3, prior=Prior.SPHERE, seed=8)
    tau = 1.0 - 2.0 * p
    g = generate_graph(cfg, tau, p)
    m = 120 * 119 / 2
    sd = math.sqrt(p * (1 - p) / m)
    assert abs(g.realized_density - p) <= 4.0 * sd + 0.01


def test_trivial_estimate_loss_near_one():
    cfg = _cfg(n=150, d=6, seed=3)
    lat = sample_latents(cfg)
    X = gram_from_latents(lat)
    tau = calibrate_threshold(6, 0.3, Prior.GAUSSIAN, samples=100_000, seed=3)
    g = generate_graph(cfg, tau, 0.3)
    t = trivial_estimate(g)
    loss = gram_loss_L(X.entries, t.entries, 6)
    assert 0.6 < loss < 1.4  # E loss = 1; generous one-sample band


def test_spectral_estimate_beats_trivial_in_easy_regime():
    cfg = _cfg(n=150, d=4, seed=21)
    tau = calibrate_threshold(4, 0.4, Prior.GAUSSIAN, samples=300_000, seed=21)
    g = generate_graph(cfg, tau, 0.4)
    X = gram_from_latents(g.latents)
    est = spectral_estimate(g, 4, 0.4)
    spectral = gram_loss_L(X.entries, est.entries, 4)
    trivial = gram_loss_L(X.entries, trivial_estimate(g).entries, 4)
    assert spectral < 0.6 * trivial


def test_spectral_estimate_spherical_unit_diag():
    cfg = _cfg(n=60, d=5, prior=Prior.SPHERE, seed=13)
    tau = calibrate_threshold(5, 0.3, Prior.SPHERE, samples=200_000, seed=13)
    g = generate_graph(cfg, tau, 0.3)
    est = spectral_estimate(g, 5, 0.3)
    np.testing.assert_allclose(np.diag(est.entries), 1.0, rtol=0.0, atol=1e-9)


def test_spectral_estimate_domain():
    cfg = _cfg(n=20, d=3, seed=1)
    g = generate_graph(cfg, 0.0, 0.5)
    with pytest.raises(DomainError):
        spectral_estimate(g, 25, 0.5)  # d > n has no spectral embedding
    with pytest.raises(DomainError):
        spectral_estimate(g, 3, 0.0)


def test_permutation_equivariance():
    """Relabeling vertices permutes the estimate: the estimator sees only
    the adjacency matrix, so conjugating by a permutation must commute with
    estimation up to tiny eigensolver noise."""
    cfg = _cfg(n=50, d=3, seed=30)
    tau = 0.05
    g = generate_graph(cfg, tau, 0.4)
    scale = fit_calibration_scale(cfg, tau, 0.4)
    perm = np.random.default_rng(1).permutation(50)
    adj_p = g.adjacency[np.ix_(perm, perm)]
    g_p = GraphSample(adjacency=adj_p, latents=dataclasses.replace(
        g.latents, entries=g.latents.entries[perm]),
        kernel_threshold=tau, target_density=0.4)
    a = spectral_estimate(g, 3, 0.4, scale=scale).entries[np.ix_(perm, perm)]
    b = spectral_estimate(g_p, 3, 0.4, scale=scale).entries
    np.testing.assert_allclose(a, b, rtol=0.0, atol=1e-8)


def test_coding_cost_routes_agree():
    """Budget C(n,2) h2(p-hat) bits vs. summed per-pair log-likelihood at
    the fitted density: identical up to the 2-bit header by construction,
    and the identity is what certifies both routes."""
    cfg = _cfg(n=90, d=7, seed=17)
    tau = calibrate_threshold(7, 0.2, Prior.GAUSSIAN, samples=200_000, seed=17)
    g = generate_graph(cfg, tau, 0.2)
    budget, code = coding_cost_bits(g)
    assert budget > 0.0
    assert code == pytest.approx(budget + 2.0, rel=1e-9)


def test_experiment_record_validation():
    with pytest.raises(ValidationError):
        ExperimentRecord(n=10, d=2, p=0.5, tau=0.0, seed=0,
                         estimator_name="x", loss_L=-0.5, runtime_seconds=0.0)


def test_phase_sweep_shapes_and_summary():
    grid = [(30, 2, 0.4), (30, 8, 0.4)]
    records, summaries = phase_sweep(grid, trials=3, seed=5, tau_samples=50_000)
    assert len(records) == len(grid) * 3 * 2  # two estimators per trial
    assert len(summaries) == len(grid)
    s = summaries[0]
    assert isinstance(s, SweepSummary)
    assert s.trials == 3
    # abscissa d / (n h(p)) in nats
    h = -(0.4 * math.log(0.4) + 0.6 * math.log(0.6))
    assert s.abscissa == pytest.approx(2 / (30 * h), rel=1e-12)
    d = s.to_json_dict()
    assert "d_over_n_hp" in d


def test_phase_sweep_deterministic_modulo_runtime():
    grid = [(25, 3, 0.3)]
    strip = lambda r: dataclasses.replace(r, runtime_seconds=0.0)
    r1, s1 = phase_sweep(grid, trials=4, seed=9, tau_samples=50_000)
    r2, s2 = phase_sweep(grid, trials=4, seed=9, tau_samples=50_000)
    assert [strip(r) for r in r1] == [strip(r) for r in r2]
    assert s1 == s2
    # thread count must not change results
    r3, s3 = phase_sweep(grid, trials=4, seed=9, threads=3, tau_samples=50_000)
    assert [strip(r) for r in r1] == [strip(r) for r in r3]
    assert s3 == s1


def test_phase_sweep_caps_embedding_dimension():
    # d > n grid points are legal in a sweep; the embedding is capped at n.
    grid = [(12, 40, 0.5)]
    records, summaries = phase_sweep(grid, trials=2, seed=3, tau_samples=50_000)
    assert summaries[0].d == 40
    assert all(r.loss_L >= 0.0 for r in records)


def test_phase_sweep_validation():
    with pytest.raises(DomainError):
        phase_sweep([(1, 2, 0.5)], trials=2)
    with pytest.raises(DomainError):
        phase_sweep([(10, 2, 0.0)], trials=2)
    with pytest.raises(DomainError):
        phase_sweep([(10, 2, 0.5)], trials=0)
