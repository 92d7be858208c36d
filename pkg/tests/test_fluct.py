import math

import numpy as np
import pytest

from markovlab.fluct import (
    ENSEMBLES,
    CLTStat,
    DiagramFluct,
    FluctCoeffs,
    arcsin_u_overlaps,
    clt_covariance,
    clt_run,
    clt_summary,
    fluct_lemma_residual,
    jackknife_variance_ci,
    linearized_markov_push,
    measure_fluct_coeffs,
    normality_pvalue,
    predicted_fluct_integrals,
    target_variance,
    transport_check,
)
from markovlab.interlacing import AtomicMeasure

Z_GRID = [3 + 0j, -3 + 0j, 2 + 2j, -2.5 + 0.5j, 1j]


def test_fluct_coeffs_validation():
    with pytest.raises(ValueError):
        FluctCoeffs(np.array([np.nan]))
    c = FluctCoeffs([1.0, 2.0])
    assert c.k_max == 2
    assert c.coeff(1) == 1.0 and c.coeff(2) == 2.0 and c.coeff(5) == 0.0
    with pytest.raises(ValueError):
        c.coeff(0)


def test_push_pure_first_coefficient():
    # c_1 only: the pushed fluctuation is -4 c_1 arcsin(x/2) / pi
    push = linearized_markov_push(FluctCoeffs([math.pi / 4.0]))
    assert push.arcsin_coeff == pytest.approx(-1.0)
    assert np.allclose(push.u, 0.0)


def test_push_higher_coefficients():
    # c_k -> u_{k-2} = 4 c_k / (k - 1)
    push = linearized_markov_push(FluctCoeffs([0.0, 1.0]))
    assert push.arcsin_coeff == 0.0
    assert push.u[0] == pytest.approx(4.0)
    c = [0.0] + [math.sqrt(k - 1) / 2.0 for k in range(2, 7)]
    push = linearized_markov_push(FluctCoeffs(c))
    for k in range(2, 7):
        assert push.u[k - 2] == pytest.approx(2.0 / math.sqrt(k - 1))


def test_lemma_residual_first_coefficient_direction():
    # the pure c_1 direction is also first-order accurate; use a small
    # epsilon so the edge-positivity clipping never activates
    r1 = fluct_lemma_residual(FluctCoeffs([1.0]), 1e-4, 200, Z_GRID)
    r2 = fluct_lemma_residual(FluctCoeffs([1.0]), 1e-5, 200, Z_GRID)
    assert r1 < 1e-3
    assert r1 / max(r2, 1e-300) > 5.0


def test_lemma_residual_shrinks_linearly():
    for c in ([0.0, 1.0], [0.0, 0.0, 1.0]):
        r1 = fluct_lemma_residual(FluctCoeffs(c), 1e-3, 100, Z_GRID)
        r2 = fluct_lemma_residual(FluctCoeffs(c), 1e-4, 100, Z_GRID)
        assert r1 < 0.05
        assert r1 / max(r2, 1e-300) > 5.0


def test_lemma_residual_rejects_large_epsilon():
    with pytest.raises(ValueError):
        fluct_lemma_residual(FluctCoeffs([0.0, 0.0, 50.0]), 0.5, 100, Z_GRID)


def test_target_variance_table():
    assert target_variance("gue-trace", 3) == 0.75
    assert target_variance("gue-spectral", 5) == 1.0
    assert target_variance("unimodular-trace", 1) == 0.0
    assert target_variance("unimodular-trace", 2) == 0.0
    assert target_variance("unimodular-trace", 4) == 1.0
    assert target_variance("plancherel-transition", 2) == 0.0
    assert target_variance("plancherel-transition", 5) == 1.0
    with pytest.raises(ValueError):
        target_variance("nope", 3)


def test_jackknife_matches_iid_normal():
    rng = np.random.default_rng(0)
    x = rng.normal(0.0, 2.0, size=10_000)
    var, lo, hi = jackknife_variance_ci(x)
    assert var == pytest.approx(4.0, rel=0.05)
    assert lo < var < hi
    assert hi - lo < 0.7
    with pytest.raises(ValueError):
        jackknife_variance_ci(np.zeros(50))


def test_jackknife_constant_samples():
    var, lo, hi = jackknife_variance_ci(np.full(200, 3.0))
    assert var == 0.0 and lo == 0.0 and hi == 0.0


def test_clt_summary_synthetic():
    rng = np.random.default_rng(1)
    good = CLTStat("gue-trace", 2, 100, "n", rng.normal(0, math.sqrt(0.5), 5000))
    bad = CLTStat("gue-trace", 2, 100, "n", rng.normal(0, 2.0, 5000))
    zero = CLTStat("unimodular-trace", 2, 100, "n", np.full(5000, -0.5))
    out = clt_summary([good, bad, zero])
    assert out[0].passed and not out[1].passed
    assert out[2].passed and out[2].var == 0.0 and out[2].target == 0.0
    assert out[0].M == 5000


def test_clt_covariance_independent_streams():
    rng = np.random.default_rng(2)
    m = 20_000
    a = CLTStat("gue-trace", 1, 10, "n", rng.normal(size=m))
    b = CLTStat("gue-trace", 2, 10, "n", rng.normal(size=m))
    cov = clt_covariance([a, b])
    assert cov.shape == (2, 2)
    assert abs(cov[0, 1]) < 3.0 / math.sqrt(m)


def test_clt_run_determinism_and_thread_invariance():
    s1 = clt_run("gue-trace", 20, 8, 3, 7)
    s2 = clt_run("gue-trace", 20, 8, 3, 7)
    for a, b in zip(s1, s2):
        assert np.array_equal(a.samples, b.samples)
    s3 = clt_run("gue-trace", 20, 8, 3, 7, threads=2)
    for a, b in zip(s1, s3):
        assert np.allclose(a.samples, b.samples)
    s4 = clt_run("gue-trace", 20, 8, 3, 8)
    assert not np.array_equal(s1[0].samples, s4[0].samples)
    with pytest.raises(ValueError):
        clt_run("nope", 20, 8, 3, 7)


def test_unimodular_low_statistics_are_exact():
    stats = clt_run("unimodular-trace", 12, 5, 2, 3)
    assert np.allclose(stats[0].samples, 0.0, atol=1e-9)
    assert np.allclose(stats[1].samples, -0.5, atol=1e-9)


def test_ensembles_all_runnable():
    for ensemble in ENSEMBLES:
        stats = clt_run(ensemble, 12, 2, 3, 1)
        assert len(stats) == 3
        assert all(s.samples.size == 2 for s in stats)


def test_normality_pvalue():
    rng = np.random.default_rng(3)
    assert normality_pvalue(rng.normal(size=2000)) > 1e-4
    assert normality_pvalue(rng.exponential(size=2000)) < 1e-6


def test_measure_fluct_coeffs_semicircle_rule_is_small():
    # a fine semicircle quadrature rule has tiny Chebyshev fluctuations
    from markovlab.chebyshev import ReferenceMeasure, gauss_nodes

    rule = gauss_nodes(ReferenceMeasure.SEMICIRCLE, 400)
    n = 9  # atoms live on [-2 sqrt(n), 2 sqrt(n)] after unscaling
    mu = AtomicMeasure(rule.atoms * math.sqrt(n), rule.weights)
    c = measure_fluct_coeffs(mu, n, 5)
    assert np.max(np.abs(c.c)) < 1e-10


def test_predicted_integrals_layout():
    overlaps = arcsin_u_overlaps(3, nodes=200)
    # even-index overlaps vanish by parity (arcsin odd, U_j parity (-1)^j)
    assert abs(overlaps[0]) < 1e-12
    assert abs(overlaps[1]) > 0.1
    push = DiagramFluct(2.0, np.array([1.0, 0.5]))
    got = predicted_fluct_integrals(push, 3, overlaps)
    want = 2.0 * overlaps + np.array([1.0, 0.5, 0.0, 0.0])
    assert np.allclose(got, want)


def test_transport_check_small():
    rms, measured, predicted = transport_check(200, 20, 5, 11)
    assert measured.shape == (4,) and predicted.shape == (4,)
    assert rms < 0.25
