"""Welch's two-sample t-test with a self-contained Student-t CDF."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _betacf(a, b, x, max_iter=500, eps=1e-16):
    # modified Lentz evaluation of the incomplete-beta continued fraction
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float, complement: float | None = None) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    ``complement`` may carry ``1 - x`` computed without cancellation.
    """
    y = 1.0 - x if complement is None else complement
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0 or y == 0.0:
        return 0.0 if x == 0.0 else 1.0
    lbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(y)
    front = math.exp(lbt)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, y) / b


def t_sf_two_sided(t: float, dof: float) -> float:
    """``P(|T| >= |t|)`` for Student's t with ``dof`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    if math.isnan(t):
        return 1.0
    t2 = t * t
    return betainc(0.5 * dof, 0.5, dof / (dof + t2), t2 / (dof + t2))


def t_cdf(t: float, dof: float) -> float:
    p = 0.5 * t_sf_two_sided(t, dof)
    return 1.0 - p if t > 0 else p


@dataclass(frozen=True)
class WelchResult:
    t: float
    dof: float
    p_two_sided: float
    p_greater: float


def welch_t(a, b) -> WelchResult:
    """Welch's t-test of ``mean(a) - mean(b)``.

    ``p_greater`` is the one-sided p-value for the alternative
    ``mean(a) > mean(b)``. Two constant samples with equal means give
    ``t = 0`` and a two-sided p of 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two observations")
    ma, mb = a.mean(), b.mean()
    qa = a.var(ddof=1) / len(a)
    qb = b.var(ddof=1) / len(b)
    se2 = qa + qb
    if se2 == 0.0:
        if ma == mb:
            return WelchResult(0.0, float(len(a) + len(b) - 2), 1.0, 0.5)
        t = math.inf if ma > mb else -math.inf
        return WelchResult(t, float(len(a) + len(b) - 2), 0.0, 0.0 if t > 0 else 1.0)
    t = float((ma - mb) / math.sqrt(se2))
    dof = float(se2 ** 2 / (qa ** 2 / (len(a) - 1) + qb ** 2 / (len(b) - 1)))
    p2 = t_sf_two_sided(t, dof)
    return WelchResult(t, dof, p2, 0.5 * p2 if t > 0 else 1.0 - 0.5 * p2)
