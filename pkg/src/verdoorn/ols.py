"""Bivariate ordinary least squares with the diagnostics a growth-law
table needs: coefficient standard errors, two-sided t-test p-values,
R squared, the Durbin-Watson statistic and degrees of freedom.

The fit uses centered (two-pass) sums, which keeps the normal equations
well conditioned when the data carry a large common offset. Student-t
tail probabilities are computed from the regularized incomplete beta
function, evaluated with a modified Lentz continued fraction, so the
package needs no statistics dependency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateRegressorError,
    InvalidInputError,
    SampleTooSmallError,
)

__all__ = [
    "FitResult",
    "SignificanceMark",
    "durbin_watson",
    "mark_significance",
    "ols_fit",
    "regularized_incomplete_beta",
    "t_critical",
    "t_two_sided_p",
]


@dataclass(frozen=True)
class FitResult:
    """Everything a bivariate OLS fit reports.

    ``df`` is always ``n - 2``: one intercept, one slope, nothing else.
    ``residuals`` keeps input order because the Durbin-Watson statistic
    depends on it. ``degenerate`` marks fits whose residual variance is
    exactly zero; their Durbin-Watson is fixed at the no-autocorrelation
    reference value 2.0 because the statistic itself is 0/0.
    """

    intercept: float
    slope: float
    se_intercept: float
    se_slope: float
    t_intercept: float
    t_slope: float
    p_intercept: float
    p_slope: float
    r_squared: float
    durbin_watson: float
    df: int
    n: int
    residuals: tuple[float, ...]
    degenerate: bool = False


class SignificanceMark(Enum):
    """Star convention used in the rendered tables.

    One star flags significance at the 5% level, two stars at the 10%
    level (but not 5%), following the convention of the classic
    returns-to-scale tables this toolkit reproduces.
    """

    FIVE_PERCENT = "5%"
    TEN_PERCENT = "10%"
    NONE = "none"

    @property
    def stars(self) -> str:
        if self is SignificanceMark.FIVE_PERCENT:
            return "*"
        if self is SignificanceMark.TEN_PERCENT:
            return "**"
        return ""


def mark_significance(p: float) -> SignificanceMark:
    """Classify a two-sided p-value: p <= 0.05 one star, p <= 0.10 two."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p-value outside [0, 1]: {p!r}")
    if p <= 0.05:
        return SignificanceMark.FIVE_PERCENT
    if p <= 0.10:
        return SignificanceMark.TEN_PERCENT
    return SignificanceMark.NONE


def durbin_watson(residuals: Sequence[float], segments: Sequence[int] | None = None) -> float:
    """Durbin-Watson statistic of an ordered residual vector.

    ``segments`` optionally gives the lengths of contiguous blocks (for
    example one block per region in a stacked panel); successive-pair
    differences straddling a block boundary are then excluded. Zero
    residual variance returns the reference value 2.0.
    """
    u = np.asarray(residuals, dtype=float)
    denom = float(u @ u)
    if denom == 0.0:
        return 2.0
    if segments is None:
        d = np.diff(u)
        num = float(d @ d)
    else:
        if sum(segments) != u.size:
            raise ValueError("segment lengths must sum to the residual count")
        num = 0.0
        start = 0
        for length in segments:
            block = u[start : start + length]
            if length >= 2:
                d = np.diff(block)
                num += float(d @ d)
            start += length
    # The statistic is mathematically confined to [0, 4]; rounding can
    # nudge it a hair outside, so clamp.
    return min(max(num / denom, 0.0), 4.0)


def ols_fit(
    x: Sequence[float],
    y: Sequence[float],
    *,
    dw_segments: Sequence[int] | None = None,
) -> FitResult:
    """Fit y = intercept + slope * x by least squares.

    Requires n >= 3 paired observations, finite values throughout and a
    regressor with nonzero variance. ``dw_segments`` is forwarded to
    :func:`durbin_watson` to keep the statistic from crossing block
    boundaries in stacked panels.
    """
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.ndim != 1 or yv.ndim != 1 or xv.size != yv.size:
        raise InvalidInputError("x and y must be one-dimensional and equally long")
    n = int(xv.size)
    if n < 3:
        raise SampleTooSmallError(f"need at least 3 observations, got {n}")
    if not (np.isfinite(xv).all() and np.isfinite(yv).all()):
        raise InvalidInputError("non-finite value in regression input")

    xbar = float(xv.mean())
    ybar = float(yv.mean())
    xc = xv - xbar
    yc = yv - ybar
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise DegenerateRegressorError("regressor has zero variance")
    sxy = float(xc @ yc)
    syy = float(yc @ yc)

    slope = sxy / sxx
    intercept = ybar - slope * xbar
    resid = yv - intercept - slope * xv
    ssr = float(resid @ resid)
    df = n - 2
    s2 = ssr / df
    se_slope = math.sqrt(s2 / sxx)
    se_intercept = math.sqrt(s2 * (1.0 / n + xbar * xbar / sxx))

    t_slope = _t_ratio(slope, se_slope)
    t_intercept = _t_ratio(intercept, se_intercept)
    p_slope = _p_from_t(t_slope, df)
    p_intercept = _p_from_t(t_intercept, df)

    if syy == 0.0:
        r_squared = 1.0  # flat response fitted exactly; nothing left to explain
    else:
        r_squared = min(max(1.0 - ssr / syy, 0.0), 1.0)

    degenerate = ssr == 0.0
    dw = 2.0 if degenerate else durbin_watson(resid, dw_segments)

    return FitResult(
        intercept=intercept,
        slope=slope,
        se_intercept=se_intercept,
        se_slope=se_slope,
        t_intercept=t_intercept,
        t_slope=t_slope,
        p_intercept=p_intercept,
        p_slope=p_slope,
        r_squared=r_squared,
        durbin_watson=dw,
        df=df,
        n=n,
        residuals=tuple(float(u) for u in resid),
        degenerate=degenerate,
    )


def _t_ratio(coefficient: float, se: float) -> float:
    if se > 0.0:
        return coefficient / se
    if coefficient == 0.0:
        return 0.0  # 0/0 on a degenerate fit: no evidence either way
    return math.copysign(math.inf, coefficient)


def _p_from_t(t: float, df: int) -> float:
    if math.isinf(t):
        return 0.0
    return t_two_sided_p(t, df)


# Continued-fraction evaluation of the regularized incomplete beta
# function, the only special function the t-test needs.

_BETA_EPS = 1e-10
_BETA_MAX_ITER = 300
_FPMIN = 1e-300


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise InvalidInputError("incomplete beta requires a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - ln_beta)
    # Use the expansion that converges fast on each side of the mean.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: int) -> float:
    """P(|T_df| >= |t|) for Student's t with ``df`` degrees of freedom.

    Uses the identity P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2).
    """
    if df < 1:
        raise InvalidInputError(f"degrees of freedom must be >= 1, got {df}")
    if not math.isfinite(t):
        raise InvalidInputError(f"t statistic must be finite, got {t!r}")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return min(max(p, 0.0), 1.0)


@lru_cache(maxsize=None)
def t_critical(alpha: float, df: int) -> float:
    """Two-sided critical value: the t with t_two_sided_p(t, df) == alpha."""
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    lo, hi = 0.0, 1.0
    while t_two_sided_p(hi, df) > alpha:
        lo = hi
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("critical value search failed to bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_two_sided_p(mid, df) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
