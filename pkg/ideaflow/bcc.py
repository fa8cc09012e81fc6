"""
Local cointegration detection with a two-regime switching model.

Regime 0 is cointegrated: the regression residual follows a stationary
AR(1), eps_k ~ N(phi * eps_{k-1}, sigma2_c). Regime 1 is a unit root,
eps_k ~ N(eps_{k-1}, sigma2_n). Regimes form a symmetric Markov chain
with self-transition rho_stay and a uniform start; posteriors come from
an exact scaled forward-backward pass.
"""

import logging
import math
from typing import Tuple, Union, Sequence

import numpy as np
from scipy import stats

from .config import BccConfig
from .exceptions import DimensionError, DegenerateRegressorError
from .models import TimeSeries, RegressionFit, RegimeTrace

logger = logging.getLogger(__name__)

MIN_LENGTH = 8
PHI_BOUND = 0.99
REGRESSOR_VARIANCE_FLOOR = 1e-12

COINTEGRATED, UNIT_ROOT = 0, 1

SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


def _values(series: SeriesLike) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=np.float64)


def fit_regression(x_aligned: SeriesLike, y_aligned: SeriesLike) -> RegressionFit:
    """
    Ordinary least squares fit of y' on x' over the whole aligned series.

    Raises:
        DimensionError: if lengths differ or are shorter than 8
        DegenerateRegressorError: if x' has no variance
    """
    x = _values(x_aligned)
    y = _values(y_aligned)
    if x.size != y.size:
        raise DimensionError(f"Aligned series lengths differ: {x.size} vs {y.size}")
    if x.size < MIN_LENGTH:
        raise DimensionError(f"Cointegration needs at least {MIN_LENGTH} points, got {x.size}")
    if x.var() < REGRESSOR_VARIANCE_FLOOR:
        raise DegenerateRegressorError("Regressor series is constant")

    result = stats.linregress(x, y)
    alpha = float(result.intercept)
    beta = float(result.slope)
    y_var = float(y.var())
    return RegressionFit(
        alpha=alpha,
        beta=beta,
        residuals=y - alpha - beta * x,
        scale=y_var if y_var > 0.0 else 1.0
    )


def regime_loglik(fit: RegressionFit, cfg: BccConfig) -> Tuple[np.ndarray, float, float, float]:
    """
    Emission log-likelihoods of both regimes at every time point.

    The first point has no predecessor and gets zero log-likelihood under
    both regimes.

    Returns:
        (loglik of shape (T, 2), phi, sigma2_c, sigma2_n)
    """
    eps = fit.residuals
    prev, cur = eps[:-1], eps[1:]

    if prev @ prev > 0:
        phi = float(np.linalg.lstsq(prev[:, None], cur, rcond=None)[0][0])
    else:
        phi = 0.0
    phi = float(np.clip(phi, -PHI_BOUND, PHI_BOUND))

    floor = cfg.variance_floor * fit.scale
    sigma2_c = max(float(np.mean((cur - phi * prev) ** 2)), floor)
    sigma2_n = max(float(np.mean((cur - prev) ** 2)), floor)

    loglik = np.zeros((eps.size, 2))
    loglik[1:, COINTEGRATED] = stats.norm.logpdf(cur, loc=phi * prev, scale=math.sqrt(sigma2_c))
    loglik[1:, UNIT_ROOT] = stats.norm.logpdf(cur, loc=prev, scale=math.sqrt(sigma2_n))
    return loglik, phi, sigma2_c, sigma2_n


def forward_backward(loglik: np.ndarray, rho_stay: float) -> Tuple[np.ndarray, float]:
    """
    Exact posterior regime marginals of a symmetric two-state chain.

    Args:
        loglik: (T, 2) emission log-likelihoods
        rho_stay: self-transition probability

    Returns:
        (posterior of shape (T, 2), log-evidence of the switching model)
    """
    T, M = loglik.shape
    transition = np.array([[rho_stay, 1.0 - rho_stay], [1.0 - rho_stay, rho_stay]])
    shift = loglik.max(axis=1)
    likelihood = np.exp(loglik - shift[:, None])

    alpha = np.zeros((T, M))
    scale = np.zeros(T)
    alpha[0] = np.full(M, 1.0 / M) * likelihood[0]
    scale[0] = alpha[0].sum()
    alpha[0] /= scale[0]
    for t in range(1, T):
        alpha[t] = (alpha[t - 1] @ transition) * likelihood[t]
        scale[t] = alpha[t].sum()
        alpha[t] /= scale[t]

    beta = np.zeros((T, M))
    beta[-1] = 1.0
    for t in reversed(range(T - 1)):
        beta[t] = transition @ (beta[t + 1] * likelihood[t + 1]) / scale[t + 1]

    gamma = alpha * beta
    gamma /= gamma.sum(axis=1, keepdims=True)
    log_evidence = float(np.sum(np.log(scale)) + np.sum(shift))
    return gamma, log_evidence


def regime_posterior(fit: RegressionFit, cfg: BccConfig = BccConfig()) -> RegimeTrace:
    """
    Posterior probability of the cointegrated regime at every time point.

    A residual whose mean square is at or below the variance floor, taken
    relative to the variance of y', is an exact fit and is cointegrated
    everywhere.

    The evidence gain compares the switching model with the all-unit-root
    model, charging the switching model log(T-1) for its two extra
    parameters (phi, sigma2_c).
    """
    eps = fit.residuals
    if eps.size < MIN_LENGTH:
        raise DimensionError(f"Cointegration needs at least {MIN_LENGTH} points, got {eps.size}")

    floor = cfg.variance_floor * fit.scale
    if float(np.mean(eps ** 2)) <= floor:
        ones = np.ones(eps.size)
        return RegimeTrace(
            posterior=ones,
            c_prime=ones,
            phi=0.0,
            sigma2_c=floor,
            sigma2_n=floor,
            log_evidence_gain=math.inf
        )

    loglik, phi, sigma2_c, sigma2_n = regime_loglik(fit, cfg)
    gamma, log_evidence = forward_backward(loglik, cfg.rho_stay)
    unit_root_evidence = float(loglik[:, UNIT_ROOT].sum())
    gain = log_evidence - unit_root_evidence - math.log(eps.size - 1)

    posterior = gamma[:, COINTEGRATED]
    return RegimeTrace(
        posterior=posterior,
        c_prime=(posterior >= cfg.theta_local).astype(np.int8),
        phi=phi,
        sigma2_c=sigma2_c,
        sigma2_n=sigma2_n,
        log_evidence_gain=gain
    )


def detect_cointegration(
    x_aligned: SeriesLike,
    y_aligned: SeriesLike,
    cfg: BccConfig = BccConfig()
) -> Tuple[np.ndarray, bool]:
    """
    Per-time-point cointegration indicators plus the global check.

    Returns:
        (c_prime, global_pass); c_prime is all zeros when the global check
        fails or the regressor is degenerate
    """
    x = _values(x_aligned)
    zeros = np.zeros(x.size, dtype=np.int8)
    try:
        fit = fit_regression(x, y_aligned)
    except DegenerateRegressorError:
        return zeros, False

    trace = regime_posterior(fit, cfg)
    global_pass = trace.log_evidence_gain >= cfg.theta_global
    logger.debug("phi=%.3f gain=%.2f global=%s", trace.phi, trace.log_evidence_gain, global_pass)
    if not global_pass:
        return zeros, False
    return trace.c_prime.copy(), True
