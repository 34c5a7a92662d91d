"""Ordinary least squares with standardized predictors and hand-rolled t tests.

The t distribution CDF is computed through the regularized incomplete beta
function (Lentz's continued fraction), so the package needs no statistics
dependency; tests cross-check it against an independent implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MAX_CF_ITERATIONS = 300
_CF_EPS = 3.0e-14
_CF_FLOOR = 1.0e-300


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_FLOOR:
        d = _CF_FLOOR
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FLOOR:
            d = _CF_FLOOR
        c = 1.0 + aa / c
        if abs(c) < _CF_FLOOR:
            c = _CF_FLOOR
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FLOOR:
            d = _CF_FLOOR
        c = 1.0 + aa / c
        if abs(c) < _CF_FLOOR:
            c = _CF_FLOOR
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if a <= 0.0 or b <= 0.0:
        raise ValueError("a and b must be positive")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    """Two-sided p-value for a Student-t statistic with df degrees of freedom."""
    if df <= 0.0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def zscore(values: np.ndarray) -> np.ndarray:
    """Standardize to zero mean, unit (population) standard deviation."""
    values = np.asarray(values, dtype=float)
    sd = float(values.std())
    if sd <= 1e-12 * max(1.0, abs(float(values.mean()))):
        raise ValueError("cannot standardize a constant predictor")
    return (values - values.mean()) / sd


@dataclass(frozen=True)
class PredictorEstimate:
    name: str
    coefficient: float
    standard_error: float
    t_statistic: float
    p_value: float


@dataclass(frozen=True)
class OlsFit:
    estimates: tuple[PredictorEstimate, ...]  # one per predictor, intercept last
    residuals: np.ndarray
    degrees_of_freedom: int


def ols_fit(X: np.ndarray, y: np.ndarray, names: list[str]) -> OlsFit:
    """OLS of y on the columns of X (an intercept column is appended here).

    Standard errors use sigma_hat^2 with n - p degrees of freedom, p counting
    the intercept; a zero residual variance yields t = 0, p = 1 rather than a
    division blow-up.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    design = np.column_stack([X, np.ones(n)])
    p = design.shape[1]
    if n <= p:
        raise ValueError("need more observations than parameters")
    if np.linalg.matrix_rank(design) < p:
        raise ValueError("singular design matrix")

    beta, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ beta
    df = n - p
    sigma_sq = float(residuals @ residuals) / df
    # An exact fit leaves only rounding residue; snap it to zero so the
    # t statistics degrade to "no evidence" instead of 0/0 noise.
    y_scale = max(1.0, float(np.abs(y).max()))
    if math.sqrt(sigma_sq) <= 1e-10 * y_scale:
        sigma_sq = 0.0
    covariance = sigma_sq * np.linalg.inv(design.T @ design)
    std_errors = np.sqrt(np.diag(covariance))

    estimates = []
    for name, coef, se in zip(names + ["intercept"], beta, std_errors):
        if se == 0.0:
            t_stat, p_val = 0.0, 1.0
        else:
            t_stat = float(coef / se)
            p_val = t_two_sided_p(t_stat, df)
        estimates.append(
            PredictorEstimate(
                name=name,
                coefficient=float(coef),
                standard_error=float(se),
                t_statistic=t_stat,
                p_value=p_val,
            )
        )
    return OlsFit(estimates=tuple(estimates), residuals=residuals, degrees_of_freedom=df)
