import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from wignoise.errors import CausticPoint, DegenerateDelta, OutOfSupport
from wignoise.shiftmodels import (GOLDEN_MEAN, GaussianShift, GoldenMean,
                                  TrajectoryWindow, TwoTone, arcsine_density,
                                  caustic_asymptote_check, critical_points,
                                  density, entropy, fibonacci, fibonacci_ratio,
                                  golden_mean_density_convolution,
                                  integrate_against_density, is_degenerate,
                                  shift_at, support_interval, theta_period)


# ---------------------------------------------------------------------------
# tone ratios and trajectories
# ---------------------------------------------------------------------------

def test_fibonacci_ratio_values():
    assert fibonacci_ratio(1) == Fraction(1, 2)
    assert fibonacci_ratio(5) == Fraction(8, 13)
    assert float(fibonacci_ratio(40)) == pytest.approx(GOLDEN_MEAN, abs=1e-15)
    assert GOLDEN_MEAN == pytest.approx(0.6180339887498949, abs=1e-16)


def test_fibonacci_guards():
    with pytest.raises(ValueError):
        fibonacci_ratio(0)
    with pytest.raises(ValueError):
        fibonacci_ratio(91)
    assert fibonacci(0) == 1 and fibonacci(1) == 1 and fibonacci(6) == 13


def test_shift_at_anchor_points():
    model = TwoTone(16.1, 2.0, 1)
    assert shift_at(model, 0.0) == pytest.approx(16.1, abs=1e-14)
    # ratio 1/2 at phase pi: sin(pi) = 0, sin(pi/2) = 1
    assert shift_at(model, math.pi) == pytest.approx(16.1 + 2.0, rel=1e-14)


@given(st.floats(0.0, 1000.0), st.integers(1, 8))
def test_shift_bounded_by_twice_amplitude(theta, j):
    model = TwoTone(3.0, 1.7, j)
    assert abs(shift_at(model, theta) - 3.0) <= 2 * 1.7 + 1e-12


def test_period_closes():
    for j in (1, 3, 5):
        model = TwoTone(1.0, 2.0, j)
        period = theta_period(model)
        theta = np.linspace(0.0, 2.0, 17)
        np.testing.assert_allclose(shift_at(model, theta + period),
                                   shift_at(model, theta), atol=1e-9)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def test_gaussian_density_peak():
    model = GaussianShift(16.1, 0.7)
    assert density(model, 16.1) == pytest.approx(
        1.0 / math.sqrt(2 * math.pi * 0.49), rel=1e-14)


def test_gaussian_density_normalized():
    model = GaussianShift(2.0, 1.3)
    val, _ = quad(lambda d: density(model, d), 2.0 - 14 * 1.3, 2.0 + 14 * 1.3,
                  epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_golden_boundary_value():
    model = GoldenMean(0.0, 2.0)
    expected = 1.0 / (2.0 * math.pi * 2.0)
    assert density(model, 4.0) == pytest.approx(expected, rel=1e-12)
    assert density(model, -4.0) == pytest.approx(expected, rel=1e-12)
    assert density(model, 4.0001) == 0.0


def test_two_tone_histogram_oracle():
    # Monte-Carlo histogram of the drive sampled over one period; sample
    # count keeps the per-bin noise well under the 2 percent gate
    model = TwoTone(16.1, 2.0, 1)
    period = theta_period(model)
    rng = np.random.default_rng(123)
    samples = shift_at(model, rng.uniform(0.0, period, 10 ** 7))
    _, values = critical_points(model)
    lo, hi = 16.1 - 4.0, 16.1 + 4.0
    hist, edges = np.histogram(samples, bins=64, range=(lo, hi), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    width = edges[1] - edges[0]
    for c, h in zip(centers, hist):
        if h == 0.0 or np.min(np.abs(values - c)) < 2.5 * width:
            continue  # caustic-adjacent bins average the divergence
        assert density(model, float(c)) == pytest.approx(h, rel=0.02)


def test_two_tone_density_normalized():
    model = TwoTone(16.1, 2.0, 3)
    val = integrate_against_density(model, lambda d: np.ones_like(d),
                                    nodes_per_segment=300)
    assert val == pytest.approx(1.0, abs=1e-3)


def test_golden_density_normalized():
    model = GoldenMean(0.0, 2.0)
    val = integrate_against_density(model, lambda d: np.ones_like(d),
                                    nodes_per_segment=400)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_two_tone_density_symmetric_about_center():
    model = TwoTone(16.1, 2.0, 2)
    for off in (0.3, 1.1, 2.6, 3.4):
        assert density(model, 16.1 + off) == pytest.approx(
            density(model, 16.1 - off), rel=1e-9)


def test_two_tone_histogram_symmetric():
    model = TwoTone(0.0, 2.0, 3)
    period = theta_period(model)
    rng = np.random.default_rng(42)
    samples = shift_at(model, rng.uniform(0.0, period, 10 ** 6))
    hist, _ = np.histogram(samples, bins=40, range=(-4, 4))
    asym = np.abs(hist - hist[::-1]) / hist.max()
    assert float(asym.max()) < 0.02


def test_caustic_count_nondecreasing():
    counts = [len(critical_points(TwoTone(0.0, 2.0, j))[0]) for j in range(1, 6)]
    assert counts == sorted(counts)
    assert counts[0] < counts[-1]


def test_golden_limit_of_two_tone_histogram():
    # high-order rational drive approaches the irrational-ratio density
    model = TwoTone(0.0, 2.0, 12)
    period = theta_period(model)
    rng = np.random.default_rng(7)
    samples = shift_at(model, rng.uniform(0.0, period, 10 ** 7))
    hist, edges = np.histogram(samples, bins=80, range=(-4, 4), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    golden = GoldenMean(0.0, 2.0)
    keep = np.abs(centers / 2.0) > 0.1
    for c, h in zip(centers[keep], hist[keep]):
        if abs(c) >= 4.0:
            continue
        assert h == pytest.approx(density(golden, float(c)), rel=0.03)


# ---------------------------------------------------------------------------
# entropies
# ---------------------------------------------------------------------------

def test_gaussian_entropy_closed_form():
    assert entropy(GaussianShift(0.0, 1.0)) == pytest.approx(
        0.5 * math.log(2 * math.pi * math.e), rel=1e-14)


def test_two_tone_entropies_reference_values():
    window = TrajectoryWindow(n_samples=2 ** 16)
    assert entropy(TwoTone(16.1, 2.0, 1), window) == pytest.approx(1.6165, abs=0.02)
    assert entropy(TwoTone(16.1, 2.0, 5), window) == pytest.approx(1.9434, abs=0.02)


def test_entropy_strictly_increasing_in_tone_index():
    window = TrajectoryWindow(n_samples=2 ** 15)
    values = [entropy(TwoTone(16.1, 2.0, j), window) for j in range(1, 6)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_entropy_convergence_check_passes():
    val = entropy(TwoTone(16.1, 2.0, 2), TrajectoryWindow(n_samples=2 ** 16),
                  check=True)
    assert math.isfinite(val)


def test_entropy_translation_invariant_in_center():
    w = TrajectoryWindow(n_samples=2 ** 14)
    a = entropy(TwoTone(0.0, 2.0, 2), w)
    b = entropy(TwoTone(16.1, 2.0, 2), w)
    assert a == pytest.approx(b, abs=1e-9)


def test_golden_entropy_continues_trend():
    w = TrajectoryWindow(n_samples=2 ** 16)
    s5 = entropy(TwoTone(16.1, 2.0, 5), w)
    sg = entropy(GoldenMean(16.1, 2.0), w)
    assert sg > s5


# ---------------------------------------------------------------------------
# arcsine distribution and the golden-mean closed form
# ---------------------------------------------------------------------------

def test_arcsine_center_value_and_normalization():
    assert arcsine_density(0.0) == pytest.approx(1.0 / math.pi, rel=1e-15)
    val, _ = quad(arcsine_density, -1.0, 1.0, epsabs=1e-12, limit=300)
    assert val == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(OutOfSupport):
        arcsine_density(1.0)


def test_arcsine_self_convolution_matches_golden_density():
    # quadrature of the arcsine self-convolution as the oracle for the
    # elliptic closed form (centered model, unit amplitude)
    golden = GoldenMean(0.0, 1.0)

    def convolved(u):
        def integrand(s):
            t = u - s
            if abs(t) >= 1.0:
                return 0.0
            return arcsine_density(s) * arcsine_density(t)

        pts = [p for p in (u - 1.0, u + 1.0) if -1.0 < p < 1.0]
        val, _ = quad(integrand, -1.0, 1.0, points=sorted(set(pts)) or None,
                      limit=500, epsabs=1e-12)
        return val

    for u in (0.25, 0.9, 1.6):
        assert density(golden, u) == pytest.approx(convolved(u), abs=1e-9)


def test_convolution_route_matches_elliptic_route():
    model = GoldenMean(3.0, 2.0)
    for u in (-1.8, -0.7, 0.05, 0.6, 1.2, 1.95):
        d = 3.0 + 2.0 * u
        assert golden_mean_density_convolution(model, d) == \
            pytest.approx(density(model, d), abs=1e-10)


def test_caustic_asymptote_ratios():
    model = GoldenMean(0.0, 2.0)
    r3 = caustic_asymptote_check(model, 2.0 * 1e-3)
    r4 = caustic_asymptote_check(model, 2.0 * 1e-4)
    r5 = caustic_asymptote_check(model, 2.0 * 1e-5)
    assert r3 == pytest.approx(1.0, abs=0.05)
    assert r4 == pytest.approx(1.0, abs=0.03)
    assert abs(r5 - 1.0) < abs(r3 - 1.0)
    with pytest.raises(ValueError):
        caustic_asymptote_check(model, 2.0 * 0.5)


# ---------------------------------------------------------------------------
# errors and degeneracy
# ---------------------------------------------------------------------------

def test_degenerate_models():
    assert is_degenerate(GaussianShift(1.0, 0.0))
    assert is_degenerate(TwoTone(1.0, 0.0, 3))
    with pytest.raises(DegenerateDelta):
        density(GaussianShift(1.0, 0.0), 1.0)
    with pytest.raises(DegenerateDelta):
        entropy(TwoTone(1.0, 0.0, 3))


def test_caustic_point_signaled():
    model = TwoTone(0.0, 2.0, 1)
    _, values = critical_points(model)
    with pytest.raises(CausticPoint):
        density(model, float(values[0]))
    with pytest.raises(CausticPoint):
        density(GoldenMean(5.0, 2.0), 5.0)


def test_two_tone_density_outside_support_is_zero():
    model = TwoTone(0.0, 2.0, 1)
    lo, hi = support_interval(model)
    assert density(model, lo - 0.5) == 0.0
    assert density(model, hi + 0.5) == 0.0


def test_support_interval_bound():
    model = TwoTone(16.1, 2.0, 4)
    lo, hi = support_interval(model)
    assert 16.1 - 4.0 <= lo < hi <= 16.1 + 4.0


def test_model_validation():
    with pytest.raises(ValueError):
        TwoTone(0.0, -1.0, 2)
    with pytest.raises(ValueError):
        TwoTone(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        GaussianShift(0.0, -0.1)
    with pytest.raises(ValueError):
        TrajectoryWindow(n_samples=1)
