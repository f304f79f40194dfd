import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from linseq import cadlag
from linseq.cadlag import (StepPath, compactness_report, count_oscillations, count_upcrossings,
                           eval_path, from_csv_text, h_dist, lemma_a1_gap, lemma_a2_bound,
                           local_beta, oscillation, plot_affine, plot_auto, pulse, scale_path,
                           staircase, sum_paths, sup_norm, to_csv_text)
from linseq.errors import DegenerateRangeError, DomainError, PreconditionNotMet

STAIR = staircase([0.0, 1.0, 2.0, 3.0])


@st.composite
def step_paths(draw, max_breaks=12, grid=None):
    m = draw(st.integers(1, max_breaks))
    if grid:
        cuts = draw(st.sets(st.integers(1, grid - 1), max_size=m - 1))
        t = [0.0] + sorted(c / grid for c in cuts)
    else:
        cuts = draw(st.sets(st.floats(0.001, 0.999, allow_nan=False), max_size=m - 1))
        t = [0.0] + sorted(cuts)
    v = draw(st.lists(st.integers(-5, 5).map(float) | st.floats(-5, 5, allow_nan=False),
                      min_size=len(t), max_size=len(t)))
    return StepPath(t, v)


# ---------------------------------------------------------------- oracles

def brute_pairs(vals, ok):
    """Exhaustive search over index systems i1 < i2 <= i3 < i4 <= ...."""
    m = len(vals)
    best = 0

    def extend(start, n):
        nonlocal best
        best = max(best, n)
        for i in range(start, m):
            for j in range(i + 1, m):
                if ok(vals[i], vals[j]):
                    extend(j, n + 1)

    extend(0, 0)
    return best


def osc_interval_oracle(x, delta):
    """Cubic search over piece triples j < i < l with an explicit feasibility check."""
    tau = list(x.breakpoints) + [1.0]
    v = x.values
    m = len(v)
    best = 0.0
    for j, i, l in itertools.combinations(range(m), 3):
        lo = max(tau[i], tau[l] - delta)
        hi = min(tau[i + 1], tau[j + 1] + delta)
        if lo < hi:
            best = max(best, h_dist(v[j], v[i], v[l]))
    return best


def osc_grid_oracle(x, delta, grid):
    """Brute force over time points on a grid twice as fine as the breakpoints and delta."""
    pts = np.arange(2 * grid + 1) / (2 * grid)
    vals = eval_path(x, pts)
    best = 0.0
    for a, b, c in itertools.combinations(range(pts.size), 3):
        if pts[b] - pts[a] <= delta + 1e-12 and pts[c] - pts[b] <= delta + 1e-12:
            best = max(best, h_dist(vals[a], vals[b], vals[c]))
    return best


# ---------------------------------------------------------------- basics

def test_eval_examples():
    x = staircase([0.0, 1.0, 2.0], [0.0, 0.25, 0.5])
    assert x(0.25) == 1.0 and x(0.2499) == 0.0 and x(1.0) == 2.0
    assert eval_path(x, [0.0, 0.6]).tolist() == [0.0, 2.0]
    with pytest.raises(DomainError):
        x(1.01)


def test_step_path_validation():
    for t, v in (([0.1], [1.0]), ([0.0, 0.5, 0.5], [1, 2, 3]), ([0.0, 1.5], [1, 2]),
                 ([0.0], [1.0, 2.0]), ([], [])):
        with pytest.raises(DomainError):
            StepPath(t, v)
    x = StepPath([0.0, 0.5], [1.0, 2.0])
    with pytest.raises(ValueError):
        x.values[0] = 3.0
    assert x == StepPath([0.0, 0.5], [1.0, 2.0]) and hash(x) == hash(StepPath([0, 0.5], [1, 2]))


def test_sup_norm_and_h():
    assert sup_norm(StepPath.constant()) == 0.0
    assert sup_norm(pulse(8)) == 1.0
    assert sup_norm(StepPath([0.0, 0.5], [-3.0, 2.0])) == 3.0
    assert h_dist(0, 0.5, 1) == 0 and h_dist(0, 2, 1) == 1 and h_dist(1, 0, 2) == 1


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_h_dist_properties(a, b, c):
    assert h_dist(a, b, c) == h_dist(c, b, a)
    assert h_dist(a, b, c) >= 0
    assert (h_dist(a, b, c) == 0) == (min(a, c) <= b <= max(a, c))


# ---------------------------------------------------------------- oscillation

def test_oscillation_examples():
    assert oscillation(STAIR, 0.3) == 0.0
    assert oscillation(STAIR, 1.0) == 0.0
    for n in (4, 10, 64):
        assert oscillation(pulse(n), 2.0 / n) == 1.0
    assert oscillation(pulse(100), 0.005) == 0.0
    with pytest.raises(DomainError):
        oscillation(STAIR, 0.0)


@settings(max_examples=150, deadline=None)
@given(step_paths(max_breaks=40), st.floats(0.001, 1.0))
def test_oscillation_matches_cubic_oracle(x, delta):
    assert oscillation(x, delta) == osc_interval_oracle(x, delta)


@settings(max_examples=60, deadline=None)
@given(step_paths(max_breaks=10, grid=16), st.integers(1, 16))
def test_oscillation_matches_time_grid_oracle(x, k):
    assert oscillation(x, k / 16) == osc_grid_oracle(x, k / 16, 16)


@settings(max_examples=100, deadline=None)
@given(step_paths(max_breaks=20), st.floats(0.001, 0.5), st.floats(0.001, 0.5))
def test_oscillation_monotone_in_delta(x, d1, d2):
    lo, hi = sorted((d1, d2))
    assert oscillation(x, lo) <= oscillation(x, hi) <= local_beta(x)
    assert oscillation(x, 1.0) == local_beta(x)


# ---------------------------------------------------------------- counting

def test_counting_examples():
    assert count_oscillations(STAIR, 0.5) == 3
    assert count_oscillations(STAIR, 1.5) == 1
    assert count_oscillations(pulse(8), 0.5, 0.0, 1.0) == 2
    assert count_upcrossings(pulse(8), 0.25, 0.75) == 1
    assert count_upcrossings(STAIR, 0.5, 2.5) == 1
    # a move of exactly eta does not count
    assert count_oscillations(STAIR, 1.0) == 1
    with pytest.raises(DomainError):
        count_oscillations(STAIR, 0.5, 0.6, 0.6)
    with pytest.raises(DomainError):
        count_upcrossings(STAIR, 1.0, 1.0)
    with pytest.raises(DomainError):
        count_oscillations(STAIR, 0.0)


def test_counting_on_subinterval():
    # [0.3, 0.6] sees the pieces starting at 0.25 and 0.5
    assert count_oscillations(STAIR, 0.5, 0.3, 0.6) == 1
    assert count_upcrossings(STAIR, 0.5, 2.5, 0.3, 1.0) == 0


@pytest.mark.parametrize("m", range(1, 7))
def test_counting_exhaustive(m):
    for vals in itertools.product((-1.0, 0.0, 1.0, 2.0), repeat=m):
        vals = list(vals)
        for eta in (0.5, 1.5, 2.5):
            assert cadlag._count_eta(vals, eta) == brute_pairs(vals, lambda p, q: abs(q - p) > eta)
        for a, b in ((-0.5, 0.5), (0.5, 1.5)):
            assert cadlag._count_up(vals, a, b) == brute_pairs(vals, lambda p, q: p < a and q > b)


@settings(max_examples=200, deadline=None)
@given(step_paths(max_breaks=30), st.floats(0.01, 5), st.floats(0.01, 5))
def test_counting_properties(x, e1, e2):
    lo, hi = sorted((e1, e2))
    assert count_oscillations(x, lo) >= count_oscillations(x, hi)
    assert count_upcrossings(x, -hi / 2, hi / 2) <= count_oscillations(x, hi)
    assert count_oscillations(scale_path(x, 2.0), 2 * lo) == count_oscillations(x, lo)
    assert count_oscillations(x, lo, 0.25, 0.75) <= count_oscillations(x, lo)


# ---------------------------------------------------------------- lemmas

def test_lemma_examples():
    c = StepPath.constant(2.0)
    assert lemma_a1_gap(c, 0.0, 0.2, 0.7, 1.0) == 0.0
    x = staircase([0.0, 1.0, 2.0, 3.0, 4.0])
    # monotone: H terms vanish
    assert lemma_a1_gap(x, 0.0, 0.3, 0.5, 1.0) == 2 * 4 - 1
    rec = lemma_a2_bound(STAIR, 0.5)
    assert (rec.count, rec.bound, rec.beta_local, rec.holds) == (3, 12.0, 0.0, True)
    rec = lemma_a2_bound(c, 0.1)
    assert (rec.count, rec.bound) == (0, 0.0)
    with pytest.raises(PreconditionNotMet):
        lemma_a2_bound(pulse(8), 1.5)
    with pytest.raises(DomainError):
        lemma_a1_gap(x, 0.5, 0.4, 0.6, 1.0)
    assert not issubclass(PreconditionNotMet, DomainError)


@settings(max_examples=300, deadline=None)
@given(step_paths(max_breaks=40), st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_lemma_a1_property(x, times):
    s, u, v, t = sorted(times)
    assume(u < v)
    assert lemma_a1_gap(x, s, u, v, t) >= 0


@settings(max_examples=300, deadline=None)
@given(step_paths(max_breaks=40), st.floats(1e-6, 5))
def test_lemma_a2_property(x, excess):
    eta = 2 * local_beta(x) + excess
    assert lemma_a2_bound(x, eta).holds


# ---------------------------------------------------------------- maps

def test_plot_maps():
    x = StepPath([0.0, 0.5], [-2.0, 2.0])
    assert plot_affine(x, 0.0, 1.0) == x
    assert plot_affine(StepPath.constant(3.0), 1.0, 5.0) == StepPath.constant(0.5)
    assert plot_auto(x).values.tolist() == [0.0, 1.0]
    assert plot_auto(STAIR).values.tolist() == pytest.approx([0, 1 / 3, 2 / 3, 1])
    with pytest.raises(DegenerateRangeError):
        plot_auto(StepPath.constant(1.0))
    with pytest.raises(DomainError):
        plot_affine(x, 1.0, 1.0)


@given(step_paths(), st.floats(-10, 10), st.floats(0.1, 10))
def test_plot_properties(x, a, width):
    y = plot_affine(x, a, a + width)
    assert plot_affine(y, 0.0, 1.0) == y
    assert np.allclose(y.values * width + a, x.values, atol=1e-9)
    if np.ptp(x.values) > 0:
        z = plot_auto(x)
        assert z.values.min() == 0.0 and z.values.max() == 1.0
        assert plot_auto(z) == z


def test_sum_paths_examples():
    x = pulse(8)
    assert sum_paths(x, StepPath.constant()) == x
    shifted = StepPath([0.0, 0.3, 0.55], [0.0, 1.0, 0.0])
    assert sup_norm(sum_paths(x, shifted)) <= 2.0


@settings(max_examples=200, deadline=None)
@given(step_paths(max_breaks=20), step_paths(max_breaks=20), st.sampled_from([0.1, 0.5, 1.0]))
def test_sum_inequalities(x, y, eta):
    z = sum_paths(x, y)
    assert sup_norm(z) <= sup_norm(x) + sup_norm(y)
    assert count_oscillations(z, eta) <= (count_oscillations(x, eta / 2)
                                          + count_oscillations(y, eta / 2))


# ---------------------------------------------------------------- compactness

def test_compactness_examples():
    rep = compactness_report([pulse(n) for n in (4, 8, 16, 64)], etas=[0.5], bands=[(0.25, 0.75)])
    assert rep.sup_norm_max == 1.0
    assert rep.osc_counts[0.5] == 2 and rep.upcross_counts[(0.25, 0.75)] == 1
    rep = compactness_report([StepPath.constant(1.0)], etas=[0.5], bands=[(0.0, 2.0)])
    assert rep.osc_counts[0.5] == 0 and rep.upcross_counts[(0.0, 2.0)] == 0
    stairs = [staircase(np.arange(k + 1, dtype=float)) for k in range(1, 11)]
    assert compactness_report(stairs, etas=[0.5]).osc_counts[0.5] == 10
    with pytest.raises(DomainError):
        compactness_report([])


# ---------------------------------------------------------------- CSV

def test_csv_format():
    text = to_csv_text(StepPath([0.0, 0.5], [-0.0, 1 / 3]))
    assert text == "t,value\n0,0\n0.5,0.33333333333333331\n"
    with pytest.raises(DomainError):
        from_csv_text("x,y\n0,1\n")


@given(step_paths(max_breaks=30))
def test_csv_roundtrip(x):
    assert from_csv_text(to_csv_text(x)) == x
