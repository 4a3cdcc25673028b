import numpy as np
import pytest

from capillum.search import PUBLISHED, BoundReport, candidate_pairs, direction_count, sweep


def test_direction_count():
    assert direction_count(4, 1, 0) == 5
    assert direction_count(7, 1, 1) == 22


@pytest.mark.parametrize("n", [4, 5, 8])
def test_candidate_pairs(n):
    pairs = list(candidate_pairs(n))
    assert (0, 0) not in pairs
    assert all(direction_count(n, s, l) <= 2**n for s, l in pairs)
    assert len(set(pairs)) == len(pairs)
    expected = {
        (s, l)
        for l in range(2**n // (2 * n) + 1)
        for s in range((2**n - 2 * n * l) // (n + 1) + 1)
        if s + l
    }
    assert set(pairs) == expected
    # l-major order
    ls = [l for _, l in pairs]
    assert ls == sorted(ls)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_pruning_is_sound(n):
    fast = sweep(n)
    full = sweep(n, prune=False)
    assert (fast.s, fast.l) == (full.s, full.l)
    assert fast.M == full.M
    assert fast.solved < full.solved


def test_deterministic():
    a, b = sweep(6), sweep(6)
    da, db = a.as_dict(), b.as_dict()
    da.pop("runtime"), db.pop("runtime")
    assert da == db


@pytest.mark.parametrize("n", [4, 5, 7])
def test_published_rows(n):
    rep = sweep(n)
    bound, s, l = PUBLISHED[n]
    assert (rep.s, rep.l) == (s, l)
    assert abs(rep.total_bound - bound) <= 0.25
    assert rep.total_bound < 2**n
    assert rep.total_bound == pytest.approx(rep.M + direction_count(n, s, l))


@pytest.mark.parametrize("n", [5, 7])
def test_refinement_does_not_raise_bound(n):
    coarse = sweep(n, steps=200)
    fine = sweep(n, steps=400)
    assert fine.total_bound <= coarse.total_bound + 1e-9


def test_report_fields():
    rep = BoundReport(n=4, s=1, l=0, M=6.257, directions=5, total_bound=11.257, t=200, steps=200, grid="uniform")
    assert rep.integer_bound == 11
    assert rep.rounded == 11.26
    assert rep.ratio_to_2n == pytest.approx(11.257 / 16)
    d = rep.as_dict()
    assert d["below_2n"] is True
    exact = BoundReport(n=4, s=1, l=0, M=7.0, directions=5, total_bound=12.0, t=200, steps=200, grid="uniform")
    assert exact.integer_bound == 11


def test_degree_grid_still_below_2n():
    from capillum.ilp import Grid

    rep = sweep(6, grid=Grid.degree(6))
    assert rep.grid == "degree"
    assert rep.total_bound < 2**6
    assert np.isfinite(rep.M)
