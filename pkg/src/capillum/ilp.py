"""Integer program bounding the expected number of unilluminated caps.

Cap radii are bucketed on a grid ``a_0 < a_1 < ... < a_t = pi/2`` starting
at ``a_0 = pi/2 - arccos(1/n)`` (smaller caps are always illuminated).  A
bucket ``i`` holds the caps with radius in ``(a_i, a_{i+1}]``; its variable
``n_i`` counts them.  The program is

    maximize    sum_i n_i * u_i**s * v_i**l
    subject to  sum_i n_i * cap_measure(a_i) <= 1          (caps are disjoint)
                sum_{i : a_i >= pi/4} n_i <= n + 1          (packing lemma)
                n_i >= 0 integer

where ``u_i`` / ``v_i`` bound the probability that a randomly rotated simplex
/ cross-polytope misses a cap of radius ``a_{i+1}``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from capillum.sphere import (
    DEFAULT_STEPS,
    HALF_PI,
    QUARTER_PI,
    Family,
    VertexFamily,
    cap_measure,
    union_measure_upper,
)

UNIFORM = "uniform"
DEGREE = "degree"


@dataclass(frozen=True)
class Grid:
    n: int
    angles: np.ndarray = field(repr=False)
    kind: str = UNIFORM

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("grid needs at least two angles")
        if np.any(np.diff(a) <= 0):
            raise ValueError("grid angles must be strictly increasing")
        if not a[0] < QUARTER_PI < a[-1]:
            raise ValueError("grid must straddle pi/4")
        object.__setattr__(self, "angles", a)

    @property
    def t(self):
        return self.angles.size - 1

    @classmethod
    def uniform(cls, n, t=200):
        """``t`` equal steps from the smallest relevant radius to pi/2."""
        a0 = HALF_PI - math.acos(1.0 / n)
        i = np.arange(t + 1)
        return cls(n, a0 + (HALF_PI - a0) * i / t, UNIFORM)

    @classmethod
    def degree(cls, n, t=None):
        """One-degree steps from ``a_0``, with the last point moved to pi/2."""
        a0 = HALF_PI - math.acos(1.0 / n)
        step = math.pi / 180.0
        if t is None:
            t = int(math.floor((HALF_PI - a0) / step)) + 1
        if a0 + (t - 1) * step >= HALF_PI:
            raise ValueError(f"t={t} too large for one-degree steps in dimension {n}")
        a = a0 + step * np.arange(t + 1)
        a[-1] = HALF_PI
        return cls(n, a, DEGREE)


@dataclass(frozen=True)
class WeightTable:
    """Per-bucket miss probabilities (upper bounds), costs and size flags."""

    n: int
    simplex_miss: np.ndarray
    cross_miss: np.ndarray
    cost: np.ndarray
    large: np.ndarray
    steps: int = DEFAULT_STEPS

    @property
    def t(self):
        return self.cost.size

    def instance(self, s, l):
        if s < 0 or l < 0:
            raise ValueError("family counts must be non-negative")
        w = self.simplex_miss ** s * self.cross_miss ** l
        return IlpInstance(w, self.cost, self.large, max_large=self.n + 1)


def _miss_probability(family, theta, steps):
    if theta <= 0.0:
        return 1.0
    return 1.0 - union_measure_upper(family, theta, steps).value


def build_weights(n, grid=None, steps=DEFAULT_STEPS):
    """Weight table for dimension ``n`` on ``grid`` (default: 200 uniform steps)."""
    if n < 4:
        raise ValueError("the integer program is set up for n >= 4")
    grid = grid or Grid.uniform(n)
    a = grid.angles
    simplex = VertexFamily(Family.SIMPLEX, n)
    cross = VertexFamily(Family.CROSS_POLYTOPE, n)
    # bucket i uses its right end a_{i+1} for the miss probability ...
    theta = HALF_PI - a[1:]
    u = np.array([_miss_probability(simplex, th, steps) for th in theta])
    v = np.array([_miss_probability(cross, th, steps) for th in theta])
    # ... and its left end a_i for the area it occupies
    cost = np.array([cap_measure(n, ai) for ai in a[:-1]])
    large = a[:-1] >= QUARTER_PI
    return WeightTable(n, u, v, cost, large, steps)


@dataclass(frozen=True)
class IlpInstance:
    weights: np.ndarray
    costs: np.ndarray
    large: np.ndarray
    max_large: int
    capacity: float = 1.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        c = np.asarray(self.costs, dtype=float)
        big = np.asarray(self.large, dtype=bool)
        if not (w.shape == c.shape == big.shape) or w.ndim != 1:
            raise ValueError("weights, costs and flags must be 1-d of equal length")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        if np.any(~(c > 0)) or not np.all(np.isfinite(c)):
            raise ValueError("costs must be finite and positive")
        if self.max_large < 0 or self.capacity < 0:
            raise ValueError("constraint bounds must be non-negative")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "costs", c)
        object.__setattr__(self, "large", big)

    @property
    def size(self):
        return self.weights.size

    def is_feasible(self, counts):
        counts = np.asarray(counts)
        if counts.shape != self.weights.shape or np.any(counts < 0):
            return False
        used = math.fsum(float(k) * c for k, c in zip(counts, self.costs))
        return used <= self.capacity and int(counts[self.large].sum()) <= self.max_large

    def objective(self, counts):
        return math.fsum(float(k) * w for k, w in zip(counts, self.weights))


@dataclass
class IlpSolution:
    value: float
    counts: np.ndarray
    lp_bound: float = math.nan
    nodes: int = 0
    optimal: bool = True

    def sparse(self):
        return {int(i): int(k) for i, k in enumerate(self.counts) if k}


def lp_relax_bound(inst):
    """Optimum of the continuous relaxation.

    With two constraints some optimal vertex has at most two non-zero
    coordinates, so it suffices to scan single variables, a small bucket
    paired with a large one, and pairs of large buckets.
    """
    value, _ = _lp_relax(inst)
    return value


def _lp_relax(inst):
    w, c, big = inst.weights, inst.costs, inst.large
    cap, k = inst.capacity, inst.max_large
    x = np.zeros(inst.size)
    best = 0.0
    ratio = w / c
    small_idx = np.flatnonzero(~big)
    large_idx = np.flatnonzero(big) if k > 0 else np.zeros(0, dtype=int)
    rho = 0.0
    if small_idx.size:
        i = int(small_idx[np.argmax(ratio[small_idx])])
        rho = float(ratio[i])
        if cap * rho > best:
            best = cap * rho
            x[:] = 0.0
            x[i] = cap / c[i]
    if large_idx.size:
        amount = np.minimum(cap / c[large_idx], k)
        vals = w[large_idx] * amount
        j = int(np.argmax(vals))
        if vals[j] > best:
            best = float(vals[j])
            x[:] = 0.0
            x[large_idx[j]] = amount[j]
        if small_idx.size:
            fits = k * c[large_idx] <= cap
            if fits.any():
                lj = large_idx[fits]
                vals = k * w[lj] + (cap - k * c[lj]) * rho
                m = int(np.argmax(vals))
                if vals[m] > best:
                    best = float(vals[m])
                    x[:] = 0.0
                    x[lj[m]] = k
                    x[i] = (cap - k * c[lj[m]]) / c[i]
        level = cap / k
        lo = large_idx[c[large_idx] < level]
        hi = large_idx[c[large_idx] > level]
        if lo.size and hi.size:
            cl, ch = c[lo][:, None], c[hi][None, :]
            wl, wh = w[lo][:, None], w[hi][None, :]
            xh = (cap - k * cl) / (ch - cl)
            vals = k * wl + xh * (wh - wl)
            p, q = np.unravel_index(int(np.argmax(vals)), vals.shape)
            if vals[p, q] > best:
                best = float(vals[p, q])
                x[:] = 0.0
                x[hi[q]] = xh[p, q]
                x[lo[p]] = k - xh[p, q]
    return best, x


def _undominated(w, c, big):
    """Indices of buckets not dominated by a cheaper, heavier, no-more-restricted one."""
    keep = []
    for j in np.flatnonzero(w > 0):
        better = (c <= c[j]) & (w >= w[j]) & (big <= big[j])
        better[j] = False
        strictly = (c < c[j]) | (w > w[j]) | (big < big[j])
        # identical buckets: keep the lowest index
        if np.any(better & (strictly | (np.arange(w.size) < j))):
            continue
        keep.append(int(j))
    return np.array(keep, dtype=int)


class _Search:
    """Depth-first enumeration of bucket counts in decreasing ratio order.

    Nodes are pruned with two Lagrangian bounds on the remaining buckets:
    the plain capacity bound ``R * max_ratio`` and
    ``R * lam + K * mu`` with ``lam`` the best small-bucket ratio and
    ``mu = max(w_j - lam * c_j)`` over the remaining large buckets.
    """

    def __init__(self, inst, cutoff, max_nodes, rel_tol):
        idx = _undominated(inst.weights, inst.costs, inst.large)
        ratio = inst.weights[idx] / inst.costs[idx]
        order = idx[np.lexsort((inst.costs[idx], -ratio))]
        self.order = order
        self.w = [float(v) for v in inst.weights[order]]
        self.c = [float(v) for v in inst.costs[order]]
        self.big = [bool(v) for v in inst.large[order]]
        m = len(order)
        self.m = m
        rho_all = [0.0] * (m + 1)
        rho_small = [0.0] * (m + 1)
        for k in range(m - 1, -1, -1):
            r = self.w[k] / self.c[k]
            rho_all[k] = max(rho_all[k + 1], r)
            rho_small[k] = rho_small[k + 1] if self.big[k] else max(rho_small[k + 1], r)
        mu = [0.0] * (m + 1)
        for k in range(m):
            lam = rho_small[k]
            mu[k] = max(
                [0.0] + [self.w[j] - lam * self.c[j] for j in range(k, m) if self.big[j]]
            )
        self.rho_all, self.rho_small, self.mu = rho_all, rho_small, mu
        self.cutoff = cutoff
        self.max_nodes = max_nodes
        self.rel_tol = rel_tol
        self.best = 0.0
        self.best_counts = [0] * m
        self.counts = [0] * m
        self.nodes = 0
        self.stopped = False

    def bound(self, k, room, slots):
        lagr = self.rho_small[k] * room + self.mu[k] * slots
        if slots > 0:
            return min(room * self.rho_all[k], lagr)
        return lagr

    def run(self, capacity, max_large):
        self.dfs(0, capacity, max_large, 0.0)

    def dfs(self, k, room, slots, value):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            self.stopped = True
        if self.stopped:
            return
        if value > self.best:
            self.best = value
            self.best_counts = list(self.counts)
            if self.cutoff is not None and value >= self.cutoff:
                self.stopped = True
                return
        if k == self.m:
            return
        ck, wk, big = self.c[k], self.w[k], self.big[k]
        top = int(math.floor(room / ck))
        while top > 0 and top * ck > room:
            top -= 1
        if big:
            top = min(top, slots)
        for cnt in range(top, -1, -1):
            r = room - cnt * ck
            if r < 0.0:
                r = 0.0
            sl = slots - cnt if big else slots
            v = value + cnt * wk
            ub = v + self.bound(k + 1, r, sl)
            if ub <= self.best + self.rel_tol * max(1.0, self.best):
                if big:
                    continue
                # the bound only shrinks as fewer copies of the best-ratio
                # small bucket are used
                break
            self.counts[k] = cnt
            self.dfs(k + 1, r, sl, v)
            self.counts[k] = 0
            if self.stopped:
                return


def solve_exact(inst, cutoff=None, max_nodes=50_000_000, rel_tol=1e-12):
    """Exact integer optimum by branch and bound.

    With ``cutoff`` set the search stops as soon as a feasible point reaches
    it; the returned solution is then marked ``optimal=False`` and only
    certifies ``value >= cutoff``.
    """
    lp_value = lp_relax_bound(inst)
    search = _Search(inst, cutoff, max_nodes, rel_tol)
    search.run(inst.capacity, inst.max_large)
    counts = np.zeros(inst.size, dtype=np.int64)
    for pos, cnt in zip(search.order, search.best_counts):
        counts[pos] = cnt
    if search.nodes > max_nodes:
        raise RuntimeError(f"branch and bound exceeded {max_nodes} nodes")
    return IlpSolution(
        value=inst.objective(counts),
        counts=counts,
        lp_bound=lp_value,
        nodes=search.nodes,
        optimal=not search.stopped,
    )


def brute_force_enumerate(inst, limit=10_000_000):
    """Exhaustive search over every feasible integer point (test oracle)."""
    c, big = inst.costs, inst.large
    ranges = [int(math.floor(inst.capacity / ci)) for ci in c]
    space = 1
    for i, r in enumerate(ranges):
        if big[i]:
            r = min(r, inst.max_large)
            ranges[i] = r
        space *= r + 1
        if space > limit:
            raise ValueError(f"search space exceeds {limit} points")

    best_val = 0.0
    best = np.zeros(inst.size, dtype=np.int64)
    counts = np.zeros(inst.size, dtype=np.int64)
    visited = 0

    # walks every feasible lattice point; infeasible partial sums are cut
    def rec(i, used, slots):
        nonlocal best_val, best, visited
        if i == inst.size:
            visited += 1
            val = inst.objective(counts)
            if val > best_val and inst.is_feasible(counts):
                best_val = val
                best = counts.copy()
            return
        for k in range(ranges[i] + 1):
            if used + k * c[i] > inst.capacity or (big[i] and k > slots):
                break
            counts[i] = k
            rec(i + 1, used + k * c[i], slots - k if big[i] else slots)
        counts[i] = 0

    rec(0, 0.0, inst.max_large)
    return IlpSolution(value=best_val, counts=best, nodes=visited)
