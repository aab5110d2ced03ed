"""Conditional escape probabilities for a fixed step.

Given a step ``d`` in reference-cell coordinates, the fraction of the cell
that stays inside when translated by ``d`` is the overlap ratio
``V(U ∩ (U - d)) / V(U)``.  For boxes the overlap factorizes per axis; for
simplices the intersection is again a simplex:

    U ∩ (U - d) = {x : x_i >= max(0, -d_i),  sum(x) <= 1 - max(0, sum(d))}

so its side length is ``1 - max(0, sum(d)) - sum(max(0, -d_i))`` and the
stay fraction is that side (clamped at 0) raised to the cell dimension.
On each sign orthant this reproduces the per-case closed forms (squared /
cubed terms like ``(1 - |dxi| - |deta|)^2``), and it extends them
continuously across the case boundaries where sign products vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateElement, DimensionMismatch, EmptyInterval
from .geometry import Box, MeshElement, ReferenceCell, build_affine_map, to_local

__all__ = [
    "StayRegion",
    "stay_fraction",
    "conditional_escape",
    "conditional_transition_1d",
    "support_subdomains",
]


def _as_steps(cell: ReferenceCell, step) -> tuple[np.ndarray, bool]:
    d = np.asarray(step, dtype=float)
    scalar = d.ndim == 1
    if scalar:
        d = d[None, :]
    if d.ndim != 2 or d.shape[1] != cell.dim:
        raise DimensionMismatch(
            f"step must have {cell.dim} component(s) for the {cell.label} cell"
        )
    if not np.all(np.isfinite(d)):
        raise DimensionMismatch("step components must be finite")
    return d, scalar


def _stay_box(d: np.ndarray) -> np.ndarray:
    return np.prod(np.maximum(0.0, 1.0 - np.abs(d)), axis=1)


def _stay_simplex(d: np.ndarray) -> np.ndarray:
    side = 1.0 - np.maximum(0.0, d.sum(axis=1)) - np.maximum(0.0, -d).sum(axis=1)
    return np.maximum(0.0, side) ** d.shape[1]


def stay_fraction(cell: ReferenceCell, step) -> float | np.ndarray:
    """Overlap ratio ``V(U ∩ (U - step)) / V(U)`` in [0, 1].

    ``step`` is a single local step ``(n,)`` or a batch ``(m, n)``.
    Interval: ``max(0, 1 - |d|)``; square/cube: per-axis product of the
    same factor; triangle/tetrahedron: the simplex overlap described in the
    module docstring.
    """
    d, scalar = _as_steps(cell, step)
    if cell.is_simplex and cell.dim > 1:
        out = _stay_simplex(d)
    else:
        out = _stay_box(d)
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def conditional_escape(element: MeshElement, global_step) -> float | np.ndarray:
    """Escape probability for a fixed global step.

    Equals ``1 - stay_fraction`` of the step expressed in the element's
    reference-cell coordinates; affine maps preserve volume ratios, so no
    geometry-specific overlap computation is needed.

    Raises
    ------
    DegenerateElement
        Propagated from the affine map construction.
    """
    amap = build_affine_map(element)
    local = to_local(amap, global_step)
    stay = stay_fraction(element.reference_cell, local)
    return 1.0 - stay


def conditional_transition_1d(source, target, step) -> float | np.ndarray:
    """Probability of landing in ``[c, d]`` from uniform start in ``[a, b]``.

    For a fixed 1D step the value is
    ``max(0, min(b, d - step) - max(a, c - step)) / (b - a)`` inside the
    window ``c - b <= step <= d - a`` and 0 outside.  The overlap length is
    clamped at 0 so that floating-point underflow of the window check can
    never produce a spurious positive value.

    ``step`` may be a scalar or an array.
    """
    a, b = float(source[0]), float(source[1])
    c, d = float(target[0]), float(target[1])
    if b <= a:
        raise EmptyInterval(f"source interval [{a}, {b}] has non-positive length")
    if d <= c:
        raise EmptyInterval(f"target interval [{c}, {d}] has non-positive length")
    dx = np.asarray(step, dtype=float)
    overlap = np.minimum(b, d - dx) - np.maximum(a, c - dx)
    inside = (dx >= c - b) & (dx <= d - a)
    out = np.where(inside, np.maximum(0.0, overlap) / (b - a), 0.0)
    if np.ndim(step) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class StayRegion:
    """Axis-aligned boxes covering the support of the stay fraction.

    The boxes have pairwise disjoint interiors and the stay fraction
    vanishes identically outside their union.  On each box the integrand
    is smooth up to kink sets of measure zero, which adaptive quadrature
    resolves by further subdivision.
    """

    cell: ReferenceCell
    boxes: tuple[Box, ...]


def _orthant_boxes(n: int) -> tuple[Box, ...]:
    out = []
    for mask in range(2**n):
        lo = np.array([-1.0 if (mask >> i) & 1 else 0.0 for i in range(n)])
        out.append(Box(lo=lo, hi=lo + 1.0))
    return tuple(out)


def support_subdomains(cell: ReferenceCell) -> StayRegion:
    """Sign-orthant decomposition of ``[-1, 1]^n``, the stay support.

    The stay fraction is zero as soon as any local step component exceeds
    1 in magnitude, so the orthants of ``[-1, 1]^n`` cover its support for
    every cell kind (2 intervals in 1D, 4 quadrants in 2D, 8 octants in 3D).
    """
    return StayRegion(cell=cell, boxes=_orthant_boxes(cell.dim))
