"""Closed-form illumination bound from random cross-polytopes only.

With ``p`` the measure of a radius-pi/4 cap and ``q`` that of a radius
``pi/2 - arccos(1/sqrt(n))`` cap, ``x`` rotated cross-polytopes leave at
most ``(1 - 2np)**x / q`` mid-sized caps unlit, giving

    f(x) = (1 - 2np)**x / q + 2nx + n + 1

directions in total.  The integer minimum of ``f`` is majorized step by step
down to an expression in ``n`` alone.
"""

import math
from dataclasses import asdict, dataclass

from capillum.sphere import HALF_PI, QUARTER_PI, cap_measure

MAX_DIM = 200


def _check(n, minimum=4):
    if int(n) != n or not minimum <= n <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in [{minimum}, {MAX_DIM}], got {n}")


def p_value(n):
    return cap_measure(n, QUARTER_PI)


def q_value(n):
    return cap_measure(n, HALF_PI - math.acos(1.0 / math.sqrt(n)))


def _log_miss(n):
    """``ln(1 - 2np)``, negative."""
    return math.log1p(-2.0 * n * p_value(n))


def f_value(n, x):
    _check(n)
    if x < 0:
        raise ValueError("x must be non-negative")
    return math.exp(x * _log_miss(n)) / q_value(n) + 2.0 * n * x + n + 1


def f_derivative(n, x):
    lm = _log_miss(n)
    return math.exp(x * lm) * lm / q_value(n) + 2.0 * n


def minimizer_x0(n):
    """Stationary point of ``f``."""
    _check(n)
    neg = -_log_miss(n)
    return (math.log(neg) - math.log(2.0 * n * q_value(n))) / neg


def g_value(n, t):
    """``f'`` at ``x0 + t``: ``2n (1 - (1 - 2np)**t)``."""
    return 2.0 * n * (1.0 - math.exp(t * _log_miss(n)))


def pq_bounds(n):
    """``(p_lower, p_upper, q_lower)`` from the elementary cap-area estimates."""
    _check(n)
    half_pow = math.exp(-0.5 * n * math.log(2.0))
    p_lower = half_pow / math.sqrt(math.pi * n)
    p_upper = half_pow * math.sqrt(2.0 / (math.pi * (n - 1)))
    q_lower = math.exp(-0.5 * n * math.log(n)) / math.sqrt(2.0 * math.pi)
    return p_lower, p_upper, q_lower


def rhs_eq1(n):
    """``n + 7 + sqrt(2)^n sqrt(pi n) (1 + 3/n + n/2 ln(n/2) + ln(2/sqrt(n-1)))``."""
    _check(n, 9)
    bracket = 1.0 + 3.0 / n + 0.5 * n * math.log(n / 2.0) + math.log(2.0 / math.sqrt(n - 1))
    log_scale = 0.5 * n * math.log(2.0) + 0.5 * math.log(math.pi * n)
    return n + 7 + math.exp(log_scale) * bracket


def threshold_check(n):
    return rhs_eq1(n) < 2.0 ** n - 1


def explicit_direction_count(n):
    """``min(f(floor(x0)), f(ceil(x0)))`` with exact cap measures."""
    _check(n)
    x0 = minimizer_x0(n)
    lo = max(math.floor(x0), 0)
    return min(f_value(n, lo), f_value(n, math.ceil(x0)))


def majorant_chain(n):
    """Successive upper bounds on the integer minimum of ``f``.

    ``mvt``: value at ``x0`` plus the derivative bound ``4n^2 p / (1 - 2np)``;
    ``log_step``: after ``-ln(1-2np) <= 3/n`` and ``ln(1+x) <= x``;
    ``pq_step``: with ``p``, ``q`` replaced by their closed-form estimates;
    ``rhs``: the final closed form.
    """
    _check(n, 9)
    p, q = p_value(n), q_value(n)
    neg = -_log_miss(n)
    two_n = 2.0 * n
    mvt = (
        4.0 * n * n * p / (1.0 - two_n * p)
        + two_n / neg
        + two_n / neg * (math.log(neg) - math.log(two_n * q))
        + n + 1
    )
    log_step = n + 7 + (1.0 + math.log(p / q) + 3.0 / n) / p
    p_lo, p_hi, q_lo = pq_bounds(n)
    pq_step = n + 7 + (1.0 + 3.0 / n + math.log(p_hi / q_lo)) / p_lo
    return {"mvt": mvt, "log_step": log_step, "pq_step": pq_step, "rhs": rhs_eq1(n)}


@dataclass
class ExplicitReport:
    n: int
    p: float
    q: float
    p_lower: float
    p_upper: float
    q_lower: float
    x0: float
    f_floor: float
    f_ceil: float
    direction_count: float
    mvt_bound: float
    rhs_eq1: float
    passes_2n: bool

    def as_dict(self):
        return asdict(self)


def explicit_report(n):
    _check(n, 9)
    x0 = minimizer_x0(n)
    p_lo, p_hi, q_lo = pq_bounds(n)
    rhs = rhs_eq1(n)
    return ExplicitReport(
        n=n,
        p=p_value(n),
        q=q_value(n),
        p_lower=p_lo,
        p_upper=p_hi,
        q_lower=q_lo,
        x0=x0,
        f_floor=f_value(n, max(math.floor(x0), 0)),
        f_ceil=f_value(n, math.ceil(x0)),
        direction_count=explicit_direction_count(n),
        mvt_bound=majorant_chain(n)["mvt"],
        rhs_eq1=rhs,
        passes_2n=rhs < 2.0 ** n - 1,
    )
