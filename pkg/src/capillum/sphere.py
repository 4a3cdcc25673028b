"""Spherical measures of caps, cap intersections and cap unions.

All measures are normalized (the whole sphere has measure 1).  Radii and
distances are geodesic angles in radians.

The pairwise-intersection measure of two caps of radius ``alpha`` whose
centres are ``2 * beta`` apart is

    (n - 2) / pi * int_{cos(alpha)/cos(beta)}^1
        (1 - r^2)^((n - 4) / 2) * (arccos(cos(alpha) / r) - beta) * r dr

which vanishes for tangent caps (``beta == alpha``) and reduces to the
single-cap measure at ``beta == 0``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from capillum.special import regularized_incomplete_beta

HALF_PI = 0.5 * math.pi
QUARTER_PI = 0.25 * math.pi

DEFAULT_STEPS = 200
DEFAULT_ABS_TOL = 1e-10


class MeasureKind(str, enum.Enum):
    EXACT = "exact"
    UPPER = "upper-bound"
    LOWER = "lower-bound"


@dataclass(frozen=True)
class CapMeasure:
    value: float
    kind: MeasureKind = MeasureKind.EXACT

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"measure must lie in [0, 1], got {self.value}")

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class QuadratureConfig:
    steps: int = DEFAULT_STEPS
    abs_tol: float = DEFAULT_ABS_TOL

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")


class Family(str, enum.Enum):
    SIMPLEX = "simplex"
    CROSS_POLYTOPE = "cross-polytope"


@dataclass(frozen=True)
class VertexFamily:
    """Vertex set of a regular simplex or cross-polytope inscribed in the sphere."""

    kind: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Family(self.kind))
        if self.n < 3:
            raise ValueError("dimension must be >= 3")

    @property
    def size(self):
        return self.n + 1 if self.kind is Family.SIMPLEX else 2 * self.n

    @property
    def pair_count(self):
        """Number of vertex pairs at the minimal mutual distance."""
        if self.kind is Family.SIMPLEX:
            return self.n * (self.n + 1) // 2
        # each of the 2n vertices is orthogonal to all but itself and its antipode
        return 2 * self.n * (self.n - 1)

    @property
    def half_separation(self):
        """Half the geodesic distance between neighbouring vertices."""
        if self.kind is Family.SIMPLEX:
            return 0.5 * math.acos(-1.0 / self.n)
        return QUARTER_PI

    @property
    def triple_threshold(self):
        """Radius past which the union is frozen at its value here (monotone branch)."""
        if self.kind is Family.SIMPLEX:
            return math.acos(1.0 / 3.0)
        return math.acos(1.0 / math.sqrt(3.0))

    @property
    def pair_exact_limit(self):
        """Radius up to which pairwise inclusion-exclusion is exact.

        For the cross-polytope this is the triple-overlap radius.  For the
        simplex in dimension ``n >= 4`` three caps already meet at
        ``arccos(sqrt((n-2)/(3n)))``, below ``arccos(1/3)``; between the two
        the pairwise formula is only a lower bound.
        """
        if self.kind is Family.SIMPLEX:
            return math.acos(math.sqrt((self.n - 2) / (3.0 * self.n)))
        return self.triple_threshold

    @property
    def covering_radius(self):
        if self.kind is Family.SIMPLEX:
            return math.acos(1.0 / self.n)
        return math.acos(1.0 / math.sqrt(self.n))

    def points(self):
        return generate_points(self)


def _check_angle(name, value, upper=math.pi):
    if not (0.0 <= value <= upper) or math.isnan(value):
        raise ValueError(f"{name}={value} outside [0, {upper}]")


def _check_dim(n, minimum):
    if int(n) != n or n < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {n}")


def cap_measure(n, theta):
    """Normalized measure of a closed cap of radius ``theta <= pi/2`` on S^{n-1}."""
    _check_dim(n, 3)
    _check_angle("theta", theta, HALF_PI)
    if theta == HALF_PI:
        return 0.5
    s = math.sin(theta)
    return 0.5 * regularized_incomplete_beta(s * s, 0.5 * (n - 1), 0.5)


def cap_measure_bounds(n, theta):
    """Closed-form lower and upper estimates of ``cap_measure(n, theta)``.

    The upper estimate holds only up to ``arccos(1/sqrt(n))``; past that it
    is returned as ``None``.
    """
    _check_dim(n, 3)
    if not 0.0 < theta <= HALF_PI:
        raise ValueError(f"theta={theta} outside (0, pi/2]")
    s_pow = math.sin(theta) ** (n - 1)
    lower = s_pow / math.sqrt(2.0 * math.pi * n)
    upper = None
    if theta <= math.acos(1.0 / math.sqrt(n)):
        upper = s_pow / (math.sqrt(2.0 * math.pi * (n - 1)) * math.cos(theta))
    return lower, upper


def _check_pair(n, alpha, beta):
    _check_dim(n, 4)
    _check_angle("alpha", alpha, HALF_PI)
    _check_angle("beta", beta, HALF_PI)
    if beta > alpha:
        raise ValueError(f"half-distance beta={beta} exceeds radius alpha={alpha}")


def _lower_limit(alpha, beta):
    if alpha == HALF_PI:
        return 0.0
    return min(1.0, math.cos(alpha) / math.cos(beta))


def intersection_measure_exact(n, alpha, beta, cfg=None):
    """Measure of ``C[x, alpha] & C[y, alpha]`` with ``angle(x, y) = 2 * beta``.

    Computed by adaptive Gauss-Kronrod quadrature to ``cfg.abs_tol``.
    """
    _check_pair(n, alpha, beta)
    cfg = cfg or QuadratureConfig()
    r0 = _lower_limit(alpha, beta)
    if r0 >= 1.0:
        return CapMeasure(0.0)
    cos_a = math.cos(alpha)
    expo = 0.5 * (n - 4)

    def integrand(r):
        return (1.0 - r * r) ** expo * (math.acos(min(1.0, cos_a / r)) - beta) * r

    value, _ = integrate.quad(integrand, r0, 1.0, epsabs=cfg.abs_tol, epsrel=0.0, limit=200)
    value *= (n - 2) / math.pi
    return CapMeasure(min(max(value, 0.0), 1.0))


def intersection_measure_upper(n, alpha, beta, steps=DEFAULT_STEPS):
    """Step-function upper bound on :func:`intersection_measure_exact`.

    The interval is split into ``steps`` equal pieces; on each piece the
    decreasing weight ``(1 - r^2)^((n-4)/2)`` is taken at the left end and the
    increasing factors at the right end.
    """
    _check_pair(n, alpha, beta)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    r0 = _lower_limit(alpha, beta)
    if r0 >= 1.0:
        return CapMeasure(0.0, MeasureKind.UPPER)
    h = (1.0 - r0) / steps
    j = np.arange(steps, dtype=float)
    left = r0 + j * h
    right = left + h
    cos_a = math.cos(alpha)
    weight = (1.0 - left * left) ** (0.5 * (n - 4))
    angle = np.arccos(np.minimum(1.0, cos_a / right)) - beta
    total = float(np.sum(weight * angle * right)) * h * (n - 2) / math.pi
    return CapMeasure(min(max(total, 0.0), 1.0), MeasureKind.UPPER)


def generate_points(family):
    """Unit vectors of the simplex or cross-polytope, one per row."""
    n = family.n
    if family.kind is Family.CROSS_POLYTOPE:
        eye = np.eye(n)
        return np.vstack([eye, -eye])
    # centre the standard basis of R^{n+1} and express it in an orthonormal
    # basis of the hyperplane sum(x) = 0
    centred = np.eye(n + 1) - 1.0 / (n + 1)
    u, _, _ = np.linalg.svd(centred)
    basis = u[:, :n]
    pts = centred @ basis
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def union_measure(family, theta, steps=DEFAULT_STEPS, cfg=None):
    """Measure of the union of radius-``theta`` caps centred at ``family``.

    Four regimes, split at half the neighbour distance, the triple-overlap
    radius and the covering radius:

    * disjoint caps: ``size * cap`` (exact);
    * up to the triple-overlap radius: inclusion-exclusion over pairs.  With
      ``steps`` set, the pair term uses the step-function upper bound so the
      result is a lower bound; ``steps=None`` uses quadrature and the value
      is exact while no three caps meet (see ``pair_exact_limit``), a lower
      bound otherwise;
    * possible triple overlaps: the value at the triple-overlap radius, a
      lower bound by monotonicity;
    * past the covering radius: exactly 1.
    """
    if not 0.0 < theta <= HALF_PI:
        raise ValueError(f"theta={theta} outside (0, pi/2]")
    n = family.n
    if theta > family.covering_radius:
        return CapMeasure(1.0)
    if theta > family.triple_threshold:
        value = union_measure(family, family.triple_threshold, steps, cfg).value
        return CapMeasure(value, MeasureKind.LOWER)
    single = family.size * cap_measure(n, theta)
    if theta <= family.half_separation:
        return CapMeasure(min(single, 1.0))
    if steps is None:
        pair = intersection_measure_exact(n, theta, family.half_separation, cfg).value
        kind = MeasureKind.EXACT if theta <= family.pair_exact_limit else MeasureKind.LOWER
    else:
        pair = intersection_measure_upper(n, theta, family.half_separation, steps).value
        kind = MeasureKind.LOWER
    value = single - family.pair_count * pair
    return CapMeasure(min(max(value, 0.0), 1.0), kind)


def union_measure_upper(family, theta, steps=DEFAULT_STEPS):
    """Certified-direction union measure used for the integer program weights.

    Despite the name (kept for symmetry with the pairwise bound it consumes),
    the value never exceeds the true union measure, so ``1 - value`` is a
    safe upper bound on the probability of missing every cap.
    """
    return union_measure(family, theta, steps=steps)
