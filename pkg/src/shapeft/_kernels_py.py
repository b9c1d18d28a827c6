"""Pure NumPy implementations of the hot numeric kernels.

Mirrors the compiled extension in `_kernels.pyx`; the backend selector picks
whichever is importable.  Keep the two in algorithmic lockstep: same branch
cutoffs, same coefficient tables, same term counts.
"""

from __future__ import annotations

import numpy as np

from ._j1_coeffs import HANKEL_TERMS, P_COEFFS, Q_COEFFS, SERIES_CUTOFF, SERIES_TERMS

# Below this |x| the sine ratio switches to its series to avoid 0/0.
_SINC_SMALL = 1e-4

# Cap per-call scratch memory for the beta x edge outer products.
_CHUNK = 16384


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with a series fallback near zero."""
    small = np.abs(x) < _SINC_SMALL
    safe = np.where(small, 1.0, x)
    out = np.sin(safe) / safe
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, out)


def edge_sum_many(verts: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Edge-sum Fourier transform of a polygon at many nonzero wavevectors.

    verts: (N, 2) vertex array, implicit closing edge; betas: (M, 2) with no
    zero rows.  Returns (M,) complex.  Each edge contributes
    (b_perp . l) * sinc(b . l / 2) * exp(i b . c) with b_perp = (b2, -b1),
    l the directed edge and c its midpoint; the total is multiplied by
    i / |b|^2.  CCW polygons give +area as b -> 0.
    """
    v = np.asarray(verts, dtype=float)
    b = np.asarray(betas, dtype=float)
    w = np.roll(v, -1, axis=0)
    lx, ly = (w - v).T
    cx, cy = (0.5 * (w + v)).T

    out = np.empty(len(b), dtype=np.complex128)
    for lo in range(0, len(b), _CHUNK):
        hi = min(lo + _CHUNK, len(b))
        b1 = b[lo:hi, 0:1]
        b2 = b[lo:hi, 1:2]
        half = 0.5 * (b1 * lx + b2 * ly)
        weight = (b2 * lx - b1 * ly) * _sinc(half)
        phase = b1 * cx + b2 * cy
        acc = (weight * np.exp(1j * phase)).sum(axis=1)
        bsq = (b1 * b1 + b2 * b2)[:, 0]
        out[lo:hi] = 1j * acc / bsq
    return out


def _j1_small(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    term = np.full_like(x, 0.5)
    total = term.copy()
    for k in range(1, SERIES_TERMS):
        term = term * (-q) / (k * (k + 1))
        total += term
    return total * x


def _j1_large(x: np.ndarray) -> np.ndarray:
    z = 1.0 / (x * x)
    p = np.full_like(x, P_COEFFS[HANKEL_TERMS])
    q = np.full_like(x, Q_COEFFS[HANKEL_TERMS])
    for k in range(HANKEL_TERMS - 1, -1, -1):
        p = p * z + P_COEFFS[k]
        q = q * z + Q_COEFFS[k]
    q = q / x
    chi = x - 0.75 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def j1_many(x: np.ndarray) -> np.ndarray:
    """Bessel J1 on a double array: ascending series up to the crossover,
    large-argument asymptotic form beyond; odd in x."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax <= SERIES_CUTOFF
    if small.any():
        out[small] = _j1_small(ax[small])
    if (~small).any():
        out[~small] = _j1_large(ax[~small])
    return np.where(x < 0, -out, out)
