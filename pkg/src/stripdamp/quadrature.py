"""Panel Gauss-Legendre quadrature and uniform-grid finite differences."""

from __future__ import annotations

import numpy as np


def gauss_panels(breakpoints, max_widths, nodes_per_panel=10):
    """Composite Gauss-Legendre rule on [breakpoints[0], breakpoints[-1]].

    breakpoints: increasing sequence; panels never straddle one, so kinks of
    the integrand should be listed here.
    max_widths: scalar or per-segment cap on the panel width.
    Returns (nodes, weights).
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    if np.any(np.diff(breakpoints) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    nseg = len(breakpoints) - 1
    widths = np.broadcast_to(np.asarray(max_widths, dtype=float), (nseg,))
    gx, gw = np.polynomial.legendre.leggauss(nodes_per_panel)
    xs, ws = [], []
    for (lo, hi), wmax in zip(zip(breakpoints[:-1], breakpoints[1:]), widths):
        npanel = max(1, int(np.ceil((hi - lo) / wmax)))
        edges = np.linspace(lo, hi, npanel + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        xs.append((centers[:, None] + half[:, None] * gx[None, :]).ravel())
        ws.append((half[:, None] * gw[None, :]).ravel())
    return np.concatenate(xs), np.concatenate(ws)


_D1_ONESIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_D2_ONESIDED = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0


def fd_derivative(values, dx, order=1):
    """Fourth-order finite difference of sampled values on a uniform grid.

    Central five-point stencils inside, one-sided stencils of the same order
    at the two points nearest each end. Works for complex data.
    """
    f = np.asarray(values)
    if f.shape[0] < 7:
        raise ValueError("need at least 7 samples for fourth-order differences")
    d = np.empty_like(f)
    if order == 1:
        d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * dx)
        d[0] = _D1_ONESIDED @ f[:5] / dx
        d[1] = _D1_ONESIDED @ f[1:6] / dx
        d[-1] = -(_D1_ONESIDED @ f[-1:-6:-1]) / dx
        d[-2] = -(_D1_ONESIDED @ f[-2:-7:-1]) / dx
    elif order == 2:
        d[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (
            12 * dx * dx
        )
        d[0] = _D2_ONESIDED @ f[:6] / dx**2
        d[1] = _D2_ONESIDED @ f[1:7] / dx**2
        d[-1] = _D2_ONESIDED @ f[-1:-7:-1] / dx**2
        d[-2] = _D2_ONESIDED @ f[-2:-8:-1] / dx**2
    else:
        raise ValueError("order must be 1 or 2")
    return d


def complex_interp(xq, x, y):
    """Linear interpolation of complex samples, zero outside the grid."""
    re = np.interp(xq, x, y.real, left=0.0, right=0.0)
    im = np.interp(xq, x, y.imag, left=0.0, right=0.0)
    return re + 1j * im
