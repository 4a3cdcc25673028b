"""Regularized incomplete beta function.

Evaluated with the modified Lentz continued fraction, switching to the
symmetric form ``1 - I_{1-z}(b, a)`` when ``z`` lies past the mean so the
fraction converges quickly.
"""

import math

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _betacf(z, a, b):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * z / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2))
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
    raise ArithmeticError(f"continued fraction did not converge for z={z}, a={a}, b={b}")


def regularized_incomplete_beta(z, a, b):
    """Return ``I_z(a, b) = B(z; a, b) / B(a, b)``.

    Raises ``ValueError`` for ``z`` outside ``[0, 1]`` or non-positive
    shape parameters.
    """
    z = float(z)
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0) or math.isnan(a) or math.isnan(b):
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(z) + b * math.log1p(-z)
    )
    front = math.exp(log_front)
    if z < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(z, a, b) / a
    return 1.0 - front * _betacf(1.0 - z, b, a) / b
