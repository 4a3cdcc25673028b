"""Independent checks: sphere sampling, Monte Carlo measures, cap bodies.

Nothing here uses the analytic formulas of :mod:`capillum.sphere`; the
estimates are meant to be compared against them.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from capillum.simplex import LPError, linprog_max
from capillum.sphere import Family, VertexFamily, generate_points

HALF_PI = 0.5 * math.pi
UNIT_TOL = 1e-12
SPAN_MARGIN = 1e-9


def make_rng(seed=None):
    return np.random.default_rng(seed)


def split_rngs(seed, count):
    """Independent child generators derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def sample_sphere(n, count, rng):
    """``count`` i.i.d. uniform points on S^{n-1} (normalized Gaussians)."""
    if n < 2 or count < 1:
        raise ValueError("need n >= 2 and count >= 1")
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def random_rotation(n, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed)."""
    if n < 2:
        raise ValueError("need n >= 2")
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def mc_estimate_measure(n, predicate, samples, rng, chunk=1_000_000):
    """Fraction of uniform sphere points accepted by ``predicate``.

    ``predicate`` maps a ``(k, n)`` array of unit vectors to a boolean array.
    Returns ``(estimate, standard_error)``.
    """
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    hits = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        hits += int(np.count_nonzero(predicate(sample_sphere(n, k, rng))))
        done += k
    p = hits / samples
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / samples)


def in_cap(center, theta):
    center = np.asarray(center, dtype=float)
    cos_t = math.cos(theta)
    return lambda x: x @ center >= cos_t


def in_both_caps(n, alpha, beta):
    """Membership in two radius-``alpha`` caps whose centres are ``2*beta`` apart."""
    x1 = np.zeros(n)
    x2 = np.zeros(n)
    x1[:2] = math.cos(beta), math.sin(beta)
    x2[:2] = math.cos(beta), -math.sin(beta)
    cos_a = math.cos(alpha)
    return lambda x: (x @ x1 >= cos_a) & (x @ x2 >= cos_a)


def in_union(points, theta):
    pts = np.asarray(points, dtype=float)
    cos_t = math.cos(theta)
    return lambda x: (x @ pts.T).max(axis=1) >= cos_t


def _angle(u, v):
    return math.acos(max(-1.0, min(1.0, float(np.dot(u, v)))))


class InvalidCapBody(ValueError):
    pass


class CapBody:
    """Union of ``conv({x_i} | B^n)`` over vertices ``x_i`` outside the unit ball."""

    def __init__(self, vertices):
        x = np.atleast_2d(np.asarray(vertices, dtype=float))
        if x.size == 0:
            raise InvalidCapBody("a cap body needs at least one vertex")
        n = x.shape[1]
        if n < 3:
            raise InvalidCapBody("dimension must be >= 3")
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms <= 1.0):
            raise InvalidCapBody("every vertex must lie outside the unit ball")
        self.vertices = x
        self.n = n
        self.centers = x / norms[:, None]
        self.radii = np.arccos(1.0 / norms)
        for a in range(len(x)):
            for b in range(a + 1, len(x)):
                if _angle(self.centers[a], self.centers[b]) < self.radii[a] + self.radii[b]:
                    raise InvalidCapBody(f"base caps of vertices {a} and {b} overlap")

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def from_caps(cls, centers, radii):
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        centers = centers / np.linalg.norm(centers, axis=1, keepdims=True)
        radii = np.asarray(radii, dtype=float)
        if np.any((radii <= 0) | (radii >= HALF_PI)):
            raise InvalidCapBody("cap radii must lie in (0, pi/2)")
        return cls(centers / np.cos(radii)[:, None])

    def to_json(self):
        return {"n": self.n, "vertices": self.vertices.tolist()}

    @classmethod
    def from_json(cls, data):
        body = cls(data["vertices"])
        if "n" in data and int(data["n"]) != body.n:
            raise InvalidCapBody(f"declared n={data['n']} but vertices have length {body.n}")
        return body


def random_cap_body(n, rng, caps=20, min_radius=None, max_radius=None, attempts=2000):
    """Greedy random cap body: propose random caps, keep those that stay disjoint."""
    lo = HALF_PI - math.acos(1.0 / n) if min_radius is None else min_radius
    hi = 0.5 * math.pi * 0.98 if max_radius is None else max_radius
    centers, radii = [], []
    for _ in range(attempts):
        if len(centers) == caps:
            break
        c = sample_sphere(n, 1, rng)[0]
        r = float(rng.uniform(lo, hi))
        if all(_angle(c, c2) >= r + r2 for c2, r2 in zip(centers, radii)):
            centers.append(c)
            radii.append(r)
    return CapBody.from_caps(centers, radii)


@dataclass
class DirectionSet:
    directions: np.ndarray
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if d.size and np.any(np.abs(np.linalg.norm(d, axis=1) - 1.0) > UNIT_TOL):
            raise ValueError("directions must be unit vectors")
        self.directions = d
        if not self.provenance:
            self.provenance = ["given"] * len(d)

    def __len__(self):
        return len(self.directions)

    def extend(self, other):
        return DirectionSet(
            np.vstack([self.directions, other.directions]),
            self.provenance + other.provenance,
        )

    @classmethod
    def from_json(cls, data):
        dirs = data["directions"] if isinstance(data, dict) else data
        d = np.asarray(dirs, dtype=float)
        return cls(d / np.linalg.norm(d, axis=1, keepdims=True))


def rotated_family(family, rng):
    q = random_rotation(family.n, rng)
    return DirectionSet(generate_points(family) @ q.T, [family.kind.value] * family.size)


def positive_hull_spans(dirs, margin=SPAN_MARGIN):
    """True iff every vector is a strictly positive combination of ``dirs``.

    Equivalent to: the directions span R^n and some combination with all
    coefficients ``>= margin`` (coefficients summing to 1) vanishes.
    """
    d = np.atleast_2d(dirs.directions if isinstance(dirs, DirectionSet) else dirs)
    k, n = d.shape
    if k < n + 1 or np.linalg.matrix_rank(d) < n:
        return False
    # variables: c_1..c_k, tau; maximise tau with c_j >= tau, sum c = 1, sum c_j d_j = 0
    obj = np.zeros(k + 1)
    obj[-1] = 1.0
    a_ub = np.hstack([-np.eye(k), np.ones((k, 1))])
    a_eq = np.vstack([np.hstack([d.T, np.zeros((n, 1))]), np.append(np.ones(k), 0.0)])
    b_eq = np.append(np.zeros(n), 1.0)
    try:
        res = linprog_max(obj, a_ub, np.zeros(k), a_eq, b_eq)
    except LPError:
        return False
    return res.value > margin


@dataclass
class IlluminationVerdict:
    vertex_lit: np.ndarray
    spans: bool

    @property
    def illuminated(self):
        return bool(self.spans and self.vertex_lit.all())

    @property
    def unlit(self):
        return np.flatnonzero(~self.vertex_lit)


def lit_vertices(body, directions):
    """Vertex ``i`` is lit when some direction is strictly closer than
    ``pi/2 - radius_i`` to the antipode of its cap centre."""
    d = np.atleast_2d(directions)
    lit = np.zeros(len(body), dtype=bool)
    if d.size == 0:
        return lit
    angles = np.arccos(np.clip(-body.centers @ d.T, -1.0, 1.0))
    return (angles < (HALF_PI - body.radii)[:, None]).any(axis=1)


def verify_illumination(body, dirs):
    return IlluminationVerdict(lit_vertices(body, dirs.directions), positive_hull_spans(dirs))


class IlluminationFailed(RuntimeError):
    pass


def illuminate(body, s, l, extra_budget, rng, retries=100):
    """Illuminate ``body`` with ``s`` rotated simplices, ``l`` rotated
    cross-polytopes and at most ``extra_budget`` further directions.

    Each cap missed by the rotated families gets the direction pointing at
    the antipode of its centre.  Fresh rotations are drawn up to ``retries``
    times.
    """
    if s < 0 or l < 0 or s + l < 1:
        raise ValueError("need s + l >= 1")
    n = body.n
    families = [VertexFamily(Family.SIMPLEX, n)] * s + [VertexFamily(Family.CROSS_POLYTOPE, n)] * l
    for _ in range(retries):
        dirs = rotated_family(families[0], rng)
        for fam in families[1:]:
            dirs = dirs.extend(rotated_family(fam, rng))
        extra = []
        lit = lit_vertices(body, dirs.directions)
        for i in np.flatnonzero(~lit):
            if extra and lit_vertices(body, np.array(extra))[i]:
                continue
            extra.append(-body.centers[i])
            if len(extra) > extra_budget:
                break
        if len(extra) > extra_budget:
            continue
        if extra:
            dirs = dirs.extend(DirectionSet(np.array(extra), ["patch"] * len(extra)))
        if verify_illumination(body, dirs).illuminated:
            return dirs
    raise IlluminationFailed(f"no illumination within budget after {retries} attempts")


class PackingCounterexample(AssertionError):
    pass


def check_packing_lemma(points):
    """Return a pair ``(i, j)`` with non-negative inner product.

    Any ``n + 2`` unit vectors in R^n contain such a pair; not finding one
    raises :class:`PackingCounterexample`.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    k, n = x.shape
    if k < n + 2:
        raise ValueError(f"need at least n + 2 = {n + 2} points, got {k}")
    gram = x @ x.T
    i, j = np.triu_indices(k, 1)
    hit = np.flatnonzero(gram[i, j] >= 0.0)
    if hit.size == 0:
        raise PackingCounterexample("all pairwise angles exceed pi/2")
    return int(i[hit[0]]), int(j[hit[0]])
