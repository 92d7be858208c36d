"""Linearized Markov transport of measure fluctuations to diagram
fluctuations, and the Monte Carlo harness for the central limit theorems
of the four ensembles.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats

from .chebyshev import (
    ChebKind,
    ReferenceMeasure,
    cheb_eval,
    gauss_nodes,
    lsvk_shape,
    semicircle_tk_moment,
    sqrt_z2m4,
    stieltjes_semicircle,
)
from .interlacing import AtomicMeasure, Diagram, InterlacingPair, markov_inverse
from .jacobi import de_sample, spectral_measure, spectral_pair, tridiag_eigenvalues
from .plancherel import plancherel_grow, transition_measure
from .seeds import (
    STREAM_DE,
    STREAM_GUE,
    STREAM_PLANCHEREL,
    STREAM_UNIMODULAR,
    derive_seed,
)
from .wigner import EnsembleKind, EnsembleSpec, hermitian_eigenvalues, sample

ENSEMBLES = (
    "gue-trace",
    "gue-spectral",
    "unimodular-trace",
    "plancherel-transition",
)


@dataclass(frozen=True)
class FluctCoeffs:
    """Coefficients c_k (k = 1..k_max) of a measure fluctuation in the
    basis 2 T_k(x/2) dx / (pi sqrt(4 - x^2)).
    """

    c: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("need at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "c", c)

    @property
    def k_max(self) -> int:
        return self.c.size

    def coeff(self, k: int) -> float:
        """c_k for 1 <= k <= k_max, zero beyond."""
        if k < 1:
            raise ValueError("k must be >= 1")
        return float(self.c[k - 1]) if k <= self.k_max else 0.0


@dataclass(frozen=True)
class DiagramFluct:
    """A diagram fluctuation: arcsin_coeff * arcsin(x/2) plus the series
    sum_j u[j] U_j(x/2) sqrt(4 - x^2) / (2 pi), j = 0..k_max-2.
    """

    arcsin_coeff: float
    u: np.ndarray

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u, dtype=float))
        if not (np.isfinite(self.arcsin_coeff) and np.all(np.isfinite(u))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "u", u)


def linearized_markov_push(c: FluctCoeffs) -> DiagramFluct:
    """Image of a measure fluctuation under the linearized inverse Markov
    transform: arcsin_coeff = -4 c_1 / pi and u[k-2] = 4 c_k / (k-1).
    """
    k_max = c.k_max
    u = np.zeros(max(k_max - 1, 1))
    for k in range(2, k_max + 1):
        u[k - 2] = 4.0 * c.coeff(k) / (k - 1)
    return DiagramFluct(-4.0 * c.coeff(1) / np.pi, u)


def _resolvent_r(c: FluctCoeffs, z: np.ndarray) -> np.ndarray:
    """R(z) = sum_k c_k w_k(z) with w_k(z) the arcsine-weighted Chebyshev
    Stieltjes transforms -((z - sqrt(z^2-4))/2)^k / sqrt(z^2-4).
    """
    z = np.asarray(z, dtype=complex)
    root = sqrt_z2m4(z)
    base = (z - root) / 2.0
    out = np.zeros_like(z)
    power = np.ones_like(z)
    for k in range(1, c.k_max + 1):
        power = power * base
        out = out - c.coeff(k) * power / root
    return out


def fluct_lemma_residual(
    direction: FluctCoeffs, epsilon: float, N: int, z_grid
) -> float:
    """First-order accuracy of the linearized inverse transform.

    Discretizes the semicircle on the midpoint grid in the angle variable
    (spectrally accurate, so no quadrature floor masks the epsilon
    scaling), perturbs the weights so that the Stieltjes transform of the
    measure moves by exactly epsilon R(z) to first order, and compares
    the resulting diagram change against 2 R(z) / w(z), where w is the
    semicircle Stieltjes transform.  Returns the max residual over the
    grid.
    """
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=complex))
    # midpoint rule in theta: atoms 2 cos(theta_j) with semicircle cell
    # weights (2/N) sin^2(theta_j); the weights sum to 1 exactly
    theta = (2.0 * np.arange(N, 0, -1) - 1.0) * np.pi / (2.0 * N)
    atoms = 2.0 * np.cos(theta)
    base = (2.0 / N) * np.sin(theta) ** 2
    mu0 = AtomicMeasure(atoms, base)

    delta = np.zeros(N)
    for k in range(1, direction.k_max + 1):
        delta += direction.coeff(k) * np.cos(k * theta)
    delta *= epsilon / N

    # keep weights positive near the edges, where the perturbation
    # density dominates the semicircle cells; a large clipped mass means
    # the linearization itself is out of range
    clipped = np.maximum(delta, -0.9 * base)
    if np.sum(clipped - delta) > 0.05 * epsilon:
        raise ValueError("epsilon too large: perturbed weights not positive")
    perturbed = base + clipped
    mu_eps = AtomicMeasure(atoms, perturbed / perturbed.sum())

    b0 = markov_inverse(mu0).b
    b_eps = markov_inverse(mu_eps).b

    # d(omega_eps - omega_0) has atoms only at the interior roots (the
    # outer atoms coincide), so its Stieltjes transform telescopes to
    # 2 sum_i log((b_eps_i - z)/(b0_i - z)).
    z = z_grid[:, None]
    s = 2.0 * np.sum(np.log((b_eps[None, :] - z) / (b0[None, :] - z)), axis=1)
    target = 2.0 * _resolvent_r(direction, z_grid) / stieltjes_semicircle(z_grid)
    return float(np.max(np.abs(s / epsilon - target)))


# ---------------------------------------------------------------------------
# Monte Carlo CLT harness.


@dataclass(frozen=True)
class CLTStat:
    """All Monte Carlo samples of one centered statistic."""

    ensemble: str
    k: int
    n: int
    scale: str  # "n" for trace-type statistics, "sqrt(n)" otherwise
    samples: np.ndarray

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        object.__setattr__(
            self, "samples", np.asarray(self.samples, dtype=float)
        )


@dataclass(frozen=True)
class CLTSummary:
    ensemble: str
    k: int
    n: int
    M: int
    mean: float
    var: float
    var_lo: float
    var_hi: float
    target: float
    passed: bool


_STREAM_OF = {
    "gue-trace": STREAM_DE,
    "gue-spectral": STREAM_DE,
    "unimodular-trace": STREAM_UNIMODULAR,
    "plancherel-transition": STREAM_PLANCHEREL,
}


def _tk_limit(k: int) -> float:
    """Limiting Chebyshev averages against the semicircle law."""
    return semicircle_tk_moment(k)


def _one_sample(ensemble: str, n: int, k_max: int, task_seed: int) -> np.ndarray:
    """The centered statistics X_1..X_{k_max} for a single draw."""
    ks = np.arange(1, k_max + 1)
    root_n = np.sqrt(n)
    if ensemble == "gue-trace":
        eigs = tridiag_eigenvalues(de_sample(n, 2.0, task_seed))
        x = eigs / (2.0 * root_n)
        return np.array(
            [np.sum(cheb_eval(ChebKind.FIRST, k, x)) - n * _tk_limit(k) for k in ks]
        )
    if ensemble == "gue-spectral":
        mu = spectral_measure(de_sample(n, 2.0, task_seed))
        x = mu.atoms / (2.0 * root_n)
        return np.array(
            [root_n * np.sum(mu.weights * cheb_eval(ChebKind.SECOND, k, x)) for k in ks]
        )
    if ensemble == "unimodular-trace":
        h = sample(EnsembleSpec(EnsembleKind.UNIMODULAR, n), task_seed)
        x = hermitian_eigenvalues(h) / (2.0 * root_n)
        return np.array(
            [np.sum(cheb_eval(ChebKind.FIRST, k, x)) - n * _tk_limit(k) for k in ks]
        )
    if ensemble == "plancherel-transition":
        mu = transition_measure(plancherel_grow(n, task_seed))
        x = mu.atoms / (2.0 * root_n)
        return np.array(
            [
                root_n
                * (np.sum(mu.weights * cheb_eval(ChebKind.FIRST, k, x)) - _tk_limit(k))
                for k in ks
            ]
        )
    raise ValueError(f"unknown ensemble {ensemble!r}")


def _sample_task(args) -> np.ndarray:
    ensemble, n, k_max, task_seed = args
    return _one_sample(ensemble, n, k_max, task_seed)


def clt_run(
    ensemble: str, n: int, M: int, k_max: int, seed: int, threads: int = 1
) -> list:
    """Draw M independent samples of the centered statistics for
    k = 1..k_max.  Sample i always uses the seed derived from
    (seed, ensemble stream, i), so results do not depend on threads.
    """
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    if M < 1 or n < 2 or k_max < 1:
        raise ValueError("need M >= 1, n >= 2, k_max >= 1")
    stream = _STREAM_OF[ensemble]
    tasks = [
        (ensemble, n, k_max, derive_seed(seed, stream, i)) for i in range(M)
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(
                pool.map(_sample_task, tasks, chunksize=max(1, M // (8 * threads)))
            )
    else:
        rows = [_sample_task(t) for t in tasks]
    samples = np.vstack(rows)
    scale = "n" if ensemble.endswith("trace") else "sqrt(n)"
    return [
        CLTStat(ensemble, k, n, scale, samples[:, k - 1])
        for k in range(1, k_max + 1)
    ]


def target_variance(ensemble: str, k: int) -> float:
    """Limiting variance of the k-th statistic for the ensemble."""
    if ensemble == "gue-trace":
        return k / 4.0
    if ensemble == "gue-spectral":
        return 1.0
    if ensemble == "unimodular-trace":
        return k / 4.0 if k >= 3 else 0.0
    if ensemble == "plancherel-transition":
        return (k - 1) / 4.0 if k >= 3 else 0.0
    raise ValueError(f"unknown ensemble {ensemble!r}")


def jackknife_variance_ci(samples: np.ndarray, z: float = 1.96) -> tuple:
    """(variance, lo, hi) with a delete-one jackknife standard error."""
    x = np.asarray(samples, dtype=float)
    m = x.size
    if m < 100:
        raise ValueError("need at least 100 samples")
    s1 = x.sum()
    s2 = np.sum(x**2)
    var = (s2 - s1**2 / m) / (m - 1)
    mean_i = (s1 - x) / (m - 1)
    var_i = (s2 - x**2 - (m - 1) * mean_i**2) / (m - 2)
    se = np.sqrt((m - 1) / m * np.sum((var_i - var_i.mean()) ** 2))
    return float(var), float(var - z * se), float(var + z * se)


def clt_summary(
    stats: list, rel_tol: float = 0.15, zero_tol: float = 0.05
) -> list:
    """Per-k summaries with jackknife variance intervals and pass flags.

    A statistic passes when its variance lies within rel_tol of its
    positive target, or below zero_tol when the target is zero.
    """
    out = []
    for stat in stats:
        m = stat.samples.size
        var, lo, hi = jackknife_variance_ci(stat.samples)
        target = target_variance(stat.ensemble, stat.k)
        if target > 0:
            ok = (1 - rel_tol) * target <= var <= (1 + rel_tol) * target
        else:
            ok = var <= zero_tol
        out.append(
            CLTSummary(
                stat.ensemble,
                stat.k,
                stat.n,
                m,
                float(stat.samples.mean()),
                var,
                lo,
                hi,
                target,
                bool(ok),
            )
        )
    return out


def clt_covariance(stats: list) -> np.ndarray:
    """Sample covariance matrix of the statistics (rows = samples)."""
    if not stats:
        raise ValueError("no statistics")
    return np.cov(np.vstack([s.samples for s in stats]))


def normality_pvalue(samples: np.ndarray) -> float:
    """D'Agostino-Pearson omnibus test p-value."""
    return float(_scipy_stats.normaltest(np.asarray(samples, float)).pvalue)


# ---------------------------------------------------------------------------
# Linearized-transport cross-check helpers.


def measure_fluct_coeffs(mu: AtomicMeasure, n: int, k_max: int) -> FluctCoeffs:
    """Chebyshev-T coefficients of sqrt(n)(rescaled mu - semicircle)."""
    x = mu.atoms / (2.0 * np.sqrt(n))
    c = np.array(
        [
            np.sqrt(n)
            * (np.sum(mu.weights * cheb_eval(ChebKind.FIRST, k, x)) - _tk_limit(k))
            for k in range(1, k_max + 1)
        ]
    )
    return FluctCoeffs(c)


def _legendre_rule(nodes: int) -> tuple:
    t, w = np.polynomial.legendre.leggauss(nodes)
    return 2.0 * t, 2.0 * w  # map [-1, 1] to [-2, 2]


def arcsin_u_overlaps(j_max: int, nodes: int = 800) -> np.ndarray:
    """A_j = integral of U_j(x/2) arcsin(x/2) over [-2, 2], j = 0..j_max."""
    x, w = _legendre_rule(nodes)
    asn = np.arcsin(x / 2.0)
    return np.array(
        [np.sum(w * cheb_eval(ChebKind.SECOND, j, x / 2.0) * asn) for j in range(j_max + 1)]
    )


def diagram_fluct_integrals(
    diagram: Diagram, n: int, j_max: int, nodes: int = 800
) -> np.ndarray:
    """I_j = integral of U_j(x/2) times sqrt(n)(rescaled diagram - limit
    shape) over [-2, 2], j = 0..j_max.
    """
    x, w = _legendre_rule(nodes)
    root_n = np.sqrt(n)
    delta = diagram.eval(root_n * x) - root_n * lsvk_shape(x)
    return np.array(
        [np.sum(w * cheb_eval(ChebKind.SECOND, j, x / 2.0) * delta) for j in range(j_max + 1)]
    )


def predicted_fluct_integrals(
    push: DiagramFluct, j_max: int, overlaps: np.ndarray
) -> np.ndarray:
    """Predicted I_j from a pushed fluctuation: arcsin_coeff * A_j + u_j."""
    u = np.zeros(j_max + 1)
    u[: min(push.u.size, j_max + 1)] = push.u[: j_max + 1]
    return push.arcsin_coeff * overlaps[: j_max + 1] + u


def transport_check(
    n: int, M: int, k_max: int, seed: int, nodes: int = 800, threads: int = 1
) -> tuple:
    """Relative RMS gap between measured and predicted diagram-fluctuation
    coefficients over M spectral-measure draws.

    Returns (relative RMS, measured I array, predicted I array), with the
    arrays averaged over samples, indexed j = 0..k_max-2.
    """
    j_max = k_max - 2
    if j_max < 0:
        raise ValueError("k_max must be >= 2")
    overlaps = arcsin_u_overlaps(j_max, nodes)
    tasks = [derive_seed(seed, STREAM_DE, i) for i in range(M)]

    def one(task_seed):
        j = de_sample(n, 2.0, task_seed)
        mu = spectral_measure(j)
        diag = Diagram(spectral_pair(j))
        measured = diagram_fluct_integrals(diag, n, j_max, nodes)
        push = linearized_markov_push(measure_fluct_coeffs(mu, n, k_max))
        return measured, predicted_fluct_integrals(push, j_max, overlaps)

    pairs = [one(t) for t in tasks]
    measured = np.vstack([p[0] for p in pairs])
    predicted = np.vstack([p[1] for p in pairs])
    num = np.sqrt(np.mean((measured - predicted) ** 2))
    den = np.sqrt(np.mean(measured**2))
    return float(num / den), measured.mean(axis=0), predicted.mean(axis=0)
