"""Coefficient tables shared by both Bessel J1 kernel backends.

The ascending series for J1 converges fast below the crossover; beyond it
the large-argument form sqrt(2/(pi x)) [P(x) cos(chi) - Q(x) sin(chi)] with
chi = x - 3 pi/4 is used.  P and Q are even/odd series in 1/x whose
coefficients c_m = prod_{j=1..m} (4 - (2j-1)^2) / (m! 8^m) are generated
here from exact integer ratios so both backends use identical doubles.
Truncation at HANKEL_TERMS keeps the absolute error below 1e-10 for all
x >= SERIES_CUTOFF.
"""

SERIES_CUTOFF = 12.0
SERIES_TERMS = 40
HANKEL_TERMS = 8  # index k: P uses c[2k], Q uses c[2k+1], k = 0..HANKEL_TERMS


def _factor_tables() -> tuple[tuple[float, ...], tuple[float, ...]]:
    c = [1.0]
    for m in range(1, 2 * HANKEL_TERMS + 2):
        c.append(c[-1] * (4.0 - (2 * m - 1) ** 2) / (8.0 * m))
    p = tuple(((-1.0) ** k) * c[2 * k] for k in range(HANKEL_TERMS + 1))
    q = tuple(((-1.0) ** k) * c[2 * k + 1] for k in range(HANKEL_TERMS + 1))
    return p, q


P_COEFFS, Q_COEFFS = _factor_tables()
