"""Small finite-difference stencils used as independent oracles in tests."""

from __future__ import annotations

import numpy as np

__all__ = ["fd_gradient", "fd_laplacian", "fd_laplacian_4th"]


def fd_gradient(func, point, step=1e-6):
    """Central-difference gradient of a scalar function of one point."""
    point = np.asarray(point, dtype=float)
    out = np.zeros_like(point)
    for i in range(point.size):
        e = np.zeros_like(point)
        e[i] = step
        out[i] = (func(point + e) - func(point - e)) / (2.0 * step)
    return out


def fd_laplacian(func, point, step=1e-4):
    """Second-order central-difference Laplacian."""
    point = np.asarray(point, dtype=float)
    center = func(point)
    total = 0.0
    for i in range(point.size):
        e = np.zeros_like(point)
        e[i] = step
        total += func(point + e) - 2.0 * center + func(point - e)
    return total / step**2


def fd_laplacian_4th(func, point, step=5e-3):
    """Fourth-order central-difference Laplacian (five-point stencil per
    axis); preferred when the target tolerance is below ~1e-7."""
    point = np.asarray(point, dtype=float)
    center = func(point)
    total = 0.0
    for i in range(point.size):
        e = np.zeros_like(point)
        e[i] = step
        f1p, f1m = func(point + e), func(point - e)
        f2p, f2m = func(point + 2 * e), func(point - 2 * e)
        total += (-f2p + 16 * f1p - 30 * center + 16 * f1m - f2m) / 12.0
    return total / step**2
