"""Distribution functions for the p values: normal, Student t and F.

The t and F distributions go through the regularized incomplete beta
function, evaluated by its continued fraction with the modified Lentz
algorithm.
"""

import math

from ..exceptions import StatsError

_MAX_ITER = 10000
_EPS = 1e-16
_TINY = 1e-300


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge "
                          f"(a={a}, b={b}, x={x})")


def betainc(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise StatsError("betainc needs a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def _check_df(*dfs):
    for df in dfs:
        if not (df >= 1) or math.isinf(df):
            raise StatsError(f"degrees of freedom must be >= 1, got {df}")


def normal_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def t_cdf(x, df):
    """Student t CDF with ``df`` degrees of freedom."""
    _check_df(df)
    if math.isnan(x):
        raise StatsError("t_cdf of NaN")
    if x == 0:
        return 0.5
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + x * x))
    return 1.0 - tail if x > 0 else tail


def t_sf_two_sided(x, df):
    """P(|T| >= |x|)."""
    _check_df(df)
    if math.isinf(x):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + x * x))


def f_cdf(x, d1, d2):
    """F distribution CDF with (d1, d2) degrees of freedom."""
    _check_df(d1, d2)
    if math.isnan(x):
        raise StatsError("f_cdf of NaN")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2))


def f_sf(x, d1, d2):
    """Upper tail of the F distribution, accurate for tiny p."""
    _check_df(d1, d2)
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x))
