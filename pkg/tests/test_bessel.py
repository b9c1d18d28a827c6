import numpy as np
import pytest
import scipy.special

from shapeft import j1
from shapeft._j1_coeffs import SERIES_CUTOFF


def j1_reference_series(x, terms=64):
    """Plain 64-term ascending series, the in-repo validation reference."""
    x = np.asarray(x, dtype=float)
    q = 0.25 * x * x
    term = np.full_like(x, 0.5)
    total = term.copy()
    for k in range(1, terms):
        term = term * (-q) / (k * (k + 1))
        total = total + term
    return total * x


def test_against_scipy_dense_grid():
    x = np.linspace(0.0, 200.0, 20011)
    assert np.max(np.abs(j1(x) - scipy.special.j1(x))) < 1e-10


def test_against_long_series_1000_points():
    x = np.linspace(0.0, SERIES_CUTOFF, 1000)
    assert np.max(np.abs(j1(x) - j1_reference_series(x))) < 1e-12


def test_odd_symmetry():
    x = np.linspace(0.1, 40, 500)
    assert np.allclose(j1(-x), -j1(x), rtol=0, atol=0)


def test_scalar_round_trip():
    val = j1(2.0)
    assert isinstance(val, float)
    assert val == pytest.approx(scipy.special.j1(2.0), abs=1e-12)


def test_branch_seam_is_continuous():
    below = j1(np.nextafter(SERIES_CUTOFF, 0.0))
    above = j1(np.nextafter(SERIES_CUTOFF, 100.0))
    assert abs(below - above) < 1e-10


def test_first_zero_by_bisection():
    lo, hi = 3.0, 4.5
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if j1(lo) * j1(mid) <= 0:
            hi = mid
        else:
            lo = mid
    assert 0.5 * (lo + hi) == pytest.approx(3.8317059702075123, abs=1e-9)
