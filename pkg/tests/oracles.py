"""Independent oracles used by the test suite.

Everything here is deliberately brute force and shares no code with the
library paths it checks: overlap fractions come from counting grid-cell
centers, 1D integrals from dense trapezoid sums, and the segment escape
probability from a hand-derived closed form.
"""

import math

import numpy as np
from scipy.stats import norm


# ---------------------------------------------------------------------------
# Grid-count overlap oracles: fraction of cell-center points of a regular
# grid that lie in U  ∩ (U - d), over those in U.
# ---------------------------------------------------------------------------

def _count_centers_in(lo, hi, res):
    """Number of grid centers (i + 0.5)/res, i = 0..res-1, inside [lo, hi]."""
    i_lo = np.ceil(np.asarray(lo) * res - 0.5)
    i_hi = np.floor(np.asarray(hi) * res - 0.5)
    return np.clip(i_hi - i_lo + 1, 0, res)


def overlap_interval(steps, res=10**6):
    d = np.asarray(steps, dtype=float).reshape(-1)
    return _count_centers_in(np.maximum(0.0, -d), np.minimum(1.0, 1.0 - d), res) / res


def overlap_box(steps, res):
    """Unit square / cube: the overlap factorizes per axis."""
    steps = np.asarray(steps, dtype=float)
    out = np.ones(len(steps))
    for k in range(steps.shape[1]):
        out *= overlap_interval(steps[:, k], res)
    return out


def overlap_triangle(steps, res=2000):
    steps = np.asarray(steps, dtype=float)
    dx, dy = steps[:, 0], steps[:, 1]
    x0 = np.maximum(0.0, -dx)
    y0 = np.maximum(0.0, -dy)
    t = 1.0 - np.maximum(0.0, dx + dy)
    centers = (np.arange(res) + 0.5) / res
    i_lo = np.ceil(x0 * res - 0.5)
    i_hi = np.floor((t[:, None] - centers[None, :]) * res - 0.5)
    counts = np.clip(i_hi - i_lo[:, None] + 1, 0, res)
    counts *= centers[None, :] >= y0[:, None]
    denom = np.clip(np.floor((1.0 - centers) * res - 0.5) + 1, 0, res).sum()
    return counts.sum(axis=1) / denom


def overlap_tetrahedron(steps, res=400, chunk=100):
    steps = np.asarray(steps, dtype=float)
    x0 = np.maximum(0.0, -steps[:, 0])
    y0 = np.maximum(0.0, -steps[:, 1])
    z0 = np.maximum(0.0, -steps[:, 2])
    t = 1.0 - np.maximum(0.0, steps.sum(axis=1))
    centers = (np.arange(res) + 0.5) / res
    ygrid, zgrid = np.meshgrid(centers, centers, indexing="ij")
    yz = (ygrid + zgrid).ravel()
    yv, zv = ygrid.ravel(), zgrid.ravel()
    denom = np.clip(np.floor((1.0 - yz) * res - 0.5) + 1, 0, res).sum()
    out = np.empty(len(steps))
    for a in range(0, len(steps), chunk):
        b = min(a + chunk, len(steps))
        i_lo = np.ceil(x0[a:b] * res - 0.5)
        i_hi = np.floor((t[a:b, None] - yz[None, :]) * res - 0.5)
        counts = np.clip(i_hi - i_lo[:, None] + 1, 0, res)
        counts *= (yv[None, :] >= y0[a:b, None]) & (zv[None, :] >= z0[a:b, None])
        out[a:b] = counts.sum(axis=1)
    return out / denom


# ---------------------------------------------------------------------------
# 1D analytic and trapezoid oracles
# ---------------------------------------------------------------------------

def segment_escape_wiener(length, dt):
    """Closed-form escape probability for a segment under Gaussian steps.

    Derived by integrating min(|dx| / l, 1) against the N(0, dt) density:
    the |dx| <= l part gives (sqrt(2 dt / pi) / l)(1 - exp(-l^2 / (2 dt)))
    and the two tails give 2 Phi(-l / sqrt(dt)).
    """
    sigma = math.sqrt(dt)
    return (math.sqrt(2.0 * dt / math.pi) / length) * (
        1.0 - math.exp(-(length**2) / (2.0 * dt))
    ) + 2.0 * norm.cdf(-length / sigma)


def transition_1d_trapezoid(source, target, dt, panels=10**6):
    """Dense trapezoid evaluation of the 1D transition integral."""
    a, b = source
    c, d = target
    x = np.linspace(c - b, d - a, panels + 1)
    overlap = np.minimum(b, d - x) - np.maximum(a, c - x)
    cond = np.maximum(0.0, overlap) / (b - a)
    return np.trapezoid(cond * norm.pdf(x, scale=math.sqrt(dt)), x)


def vjump_density_trapezoid(x, rate=1.0, dim=1, panels=10**6, t_max=60.0):
    """Dense trapezoid evaluation of the velocity-jump mixture density."""
    t = np.linspace(1e-12, t_max, panels + 1)
    with np.errstate(divide="ignore", over="ignore"):
        g = (
            t ** (-dim)
            * rate
            * np.exp(-rate * t)
            * (2.0 * math.pi) ** (-dim / 2.0)
            * np.exp(-(x * x) / (2.0 * t * t))
        )
    g[~np.isfinite(g)] = 0.0
    return float(np.trapezoid(g, t))


def vjump_cdf_from_density(density_fn, x_max=80.0, n_points=2500):
    """CDF of a symmetric 1D law by cumulative trapezoid of its density.

    Returns a callable suitable for scipy.stats.kstest.  The density is
    evaluated on a grid refined geometrically near the origin (where the
    velocity-jump density has its integrable singularity).
    """
    grid = np.concatenate([
        np.geomspace(1e-8, 1e-2, 400),
        np.linspace(1e-2, x_max, n_points)[1:],
    ])
    dens = density_fn(grid[:, None])
    half = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    total = 2.0 * half[-1]
    xs = np.concatenate([-grid[::-1], [0.0], grid])
    cdf = np.concatenate([0.5 - half[::-1] / total, [0.5], 0.5 + half / total])

    def F(x):
        return np.interp(x, xs, cdf, left=0.0, right=1.0)

    return F


# ---------------------------------------------------------------------------
# Geometry helpers for uniformity and measure checks
# ---------------------------------------------------------------------------

def simplex_box_volume(lo, hi, total=1.0):
    """Volume of {x : lo <= x <= hi, sum(x) <= total, x >= 0} assuming lo >= 0.

    Inclusion-exclusion over the upper bounds, with the corner volume
    V(x >= c, sum(x) <= total) = max(0, total - sum(c))^n / n!.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.size
    vol = 0.0
    for mask in range(2**n):
        corner = lo.copy()
        bits = 0
        for i in range(n):
            if (mask >> i) & 1:
                corner[i] = hi[i]
                bits += 1
        vol += (-1) ** bits * max(0.0, total - corner.sum()) ** n / math.factorial(n)
    return vol


def bounding_box(points):
    pts = np.asarray(points, dtype=float)
    return pts.min(axis=0), pts.max(axis=0)
