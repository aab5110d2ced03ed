"""Mesh elements, reference cells, and the affine transformation between them.

An element is described by its spanning vertices.  Each element kind is
affinely equivalent to a reference unit cell; the map ``g(xi) = A @ xi + b``
sends the reference cell onto the element, with the columns of ``A`` being
the edge vectors from the first vertex.  All heavy operations (containment,
uniform sampling) are vectorized over numpy arrays of points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateElement, DimensionMismatch, InputError

__all__ = [
    "ElementKind",
    "ReferenceCell",
    "MeshElement",
    "AffineMap",
    "Box",
    "mesh_element",
    "element_from_dict",
    "element_to_dict",
    "load_element",
    "build_affine_map",
    "to_local",
    "contains",
    "sample_uniform",
    "measure",
]

# Boundary-inclusive containment tolerance in reference-cell coordinates.
CONTAINMENT_TOL = 1e-12
# Relative tolerance for validating redundant (implied) vertices.
IMPLIED_VERTEX_RTOL = 1e-12


class ElementKind(str, Enum):
    SEGMENT = "segment"
    TRIANGLE = "triangle"
    PARALLELOGRAM = "parallelogram"
    TETRAHEDRON = "tetrahedron"
    PARALLELEPIPED = "parallelepiped"


class ReferenceCell(Enum):
    """Canonical unit cells that elements are affinely equivalent to."""

    INTERVAL = ("interval", 1, 1.0, True)
    TRIANGLE = ("triangle", 2, 0.5, True)
    SQUARE = ("square", 2, 1.0, False)
    TETRAHEDRON = ("tetrahedron", 3, 1.0 / 6.0, True)
    CUBE = ("cube", 3, 1.0, False)

    def __init__(self, label: str, dim: int, measure: float, is_simplex: bool):
        self.label = label
        self.dim = dim
        self.measure = measure
        self.is_simplex = is_simplex


_KIND_INFO = {
    # kind: (dim, number of spanning vertices, full vertex count, reference cell)
    ElementKind.SEGMENT: (1, 2, 2, ReferenceCell.INTERVAL),
    ElementKind.TRIANGLE: (2, 3, 3, ReferenceCell.TRIANGLE),
    ElementKind.PARALLELOGRAM: (2, 3, 4, ReferenceCell.SQUARE),
    ElementKind.TETRAHEDRON: (3, 4, 4, ReferenceCell.TETRAHEDRON),
    ElementKind.PARALLELEPIPED: (3, 4, 8, ReferenceCell.CUBE),
}


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by its lower and upper corners."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
            raise ValueError("box corners must be non-empty 1D arrays of equal length")
        if np.any(hi <= lo):
            raise ValueError("box must have positive extent along every axis")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))


@dataclass(frozen=True)
class MeshElement:
    """A mesh cell given by its full (canonical) vertex list.

    Use :func:`mesh_element` to construct one; it accepts either the
    spanning vertices or the full list and validates implied vertices.
    """

    kind: ElementKind
    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        verts.flags.writeable = False
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return _KIND_INFO[self.kind][0]

    @property
    def reference_cell(self) -> ReferenceCell:
        return _KIND_INFO[self.kind][3]

    @property
    def spanning_vertices(self) -> np.ndarray:
        return self.vertices[: _KIND_INFO[self.kind][1]]


def _implied_vertices(kind: ElementKind, spanning: np.ndarray) -> np.ndarray:
    """Full canonical vertex list from the spanning vertices."""
    if kind == ElementKind.PARALLELOGRAM:
        a, b, c = spanning
        return np.vstack([spanning, b + c - a])
    if kind == ElementKind.PARALLELEPIPED:
        a, b, c, d = spanning
        extra = [b + c - a, b + d - a, b + c + d - 2 * a, c + d - a]
        return np.vstack([spanning, extra])
    return spanning


def mesh_element(kind: ElementKind | str, vertices) -> MeshElement:
    """Build a validated mesh element.

    Parameters
    ----------
    kind : ElementKind or str
        One of ``segment``, ``triangle``, ``parallelogram``, ``tetrahedron``,
        ``parallelepiped``.
    vertices : array_like
        Ordered vertex coordinates, shape ``(count, dim)`` (a plain list of
        numbers is accepted for segments).  Either the spanning vertices or
        the full list (parallelogram: 4th vertex ``B + C - A``;
        parallelepiped: the 4 remaining corners) may be given; redundant
        vertices are checked against the implied ones.

    Raises
    ------
    InputError
        Wrong vertex count, wrong coordinate dimension, non-finite
        coordinates, or redundant vertices that contradict the implied ones.
    """
    try:
        kind = ElementKind(kind)
    except ValueError:
        valid = ", ".join(k.value for k in ElementKind)
        raise InputError("kind", f"unknown element kind {kind!r}; expected one of {valid}") from None
    dim, n_span, n_full, _ = _KIND_INFO[kind]

    verts = np.asarray(vertices, dtype=float)
    if kind == ElementKind.SEGMENT and verts.ndim == 1:
        verts = verts[:, None]
    if verts.ndim != 2:
        raise InputError("vertices", "expected a 2D array of vertex coordinates")
    if verts.shape[1] != dim:
        raise InputError(
            "vertices",
            f"{kind.value} vertices must have {dim} coordinate(s), got {verts.shape[1]}",
        )
    if not np.all(np.isfinite(verts)):
        raise InputError("vertices", "coordinates must be finite numbers")
    if verts.shape[0] not in (n_span, n_full):
        expected = str(n_span) if n_span == n_full else f"{n_span} or {n_full}"
        raise InputError(
            "vertices",
            f"{kind.value} expects {expected} vertices, got {verts.shape[0]}",
        )

    full = _implied_vertices(kind, verts[:n_span])
    if verts.shape[0] == n_full and n_full > n_span:
        scale = max(np.max(np.abs(full)), 1.0)
        if not np.allclose(verts[n_span:], full[n_span:], rtol=0.0, atol=IMPLIED_VERTEX_RTOL * scale):
            raise InputError(
                "vertices",
                f"supplied {kind.value} vertices are inconsistent with the "
                f"vertices implied by the spanning ones",
            )
    return MeshElement(kind=kind, vertices=full)


def element_from_dict(data: dict) -> MeshElement:
    """Build an element from ``{"kind": ..., "vertices": [...]}``."""
    if not isinstance(data, dict):
        raise InputError("geometry", "expected a JSON object")
    if "kind" not in data:
        raise InputError("kind", "missing required field")
    if "vertices" not in data:
        raise InputError("vertices", "missing required field")
    try:
        return mesh_element(data["kind"], data["vertices"])
    except (TypeError, ValueError) as exc:
        raise InputError("vertices", f"could not parse vertex coordinates: {exc}") from None


def element_to_dict(element: MeshElement) -> dict:
    return {"kind": element.kind.value, "vertices": element.vertices.tolist()}


def load_element(path) -> MeshElement:
    """Read an element from a JSON geometry file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("geometry", f"invalid JSON: {exc}") from None
    return element_from_dict(data)


@dataclass(frozen=True)
class AffineMap:
    """The pair ``(A, b)`` mapping reference-cell coordinates to global ones.

    ``inverse`` and ``abs_det`` are computed once and cached on the instance.
    """

    matrix: np.ndarray
    offset: np.ndarray
    inverse: np.ndarray
    abs_det: float

    @classmethod
    def from_matrix(cls, matrix, offset) -> "AffineMap":
        matrix = np.asarray(matrix, dtype=float)
        offset = np.asarray(offset, dtype=float)
        det = float(np.linalg.det(matrix))
        if det == 0.0 or not np.isfinite(det):
            raise DegenerateElement("affine matrix is singular")
        inverse = np.linalg.inv(matrix)
        for arr in (matrix, offset, inverse):
            arr.flags.writeable = False
        return cls(matrix=matrix, offset=offset, inverse=inverse, abs_det=abs(det))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_global(self, local_points: np.ndarray) -> np.ndarray:
        return np.asarray(local_points, dtype=float) @ self.matrix.T + self.offset

    def to_local(self, global_points: np.ndarray) -> np.ndarray:
        return (np.asarray(global_points, dtype=float) - self.offset) @ self.inverse.T

    def local_step(self, global_step: np.ndarray) -> np.ndarray:
        """Displacement vectors transform without the offset."""
        return np.asarray(global_step, dtype=float) @ self.inverse.T

    def global_step(self, local_step: np.ndarray) -> np.ndarray:
        return np.asarray(local_step, dtype=float) @ self.matrix.T


def build_affine_map(element: MeshElement) -> AffineMap:
    """Affine map sending the element's reference cell onto the element.

    Columns of the matrix are the edge vectors from the first vertex to the
    other spanning vertices; the offset is the first vertex.

    Raises
    ------
    DegenerateElement
        If ``|det| <= 1e-14 * scale**n`` where ``scale`` is the largest
        spanning edge norm (unit-independent degeneracy check).
    """
    span = element.spanning_vertices
    a = span[0]
    edges = span[1:] - a
    matrix = edges.T
    n = element.dim
    scale = float(np.max(np.linalg.norm(edges, axis=1)))
    det = float(np.linalg.det(matrix)) if n > 1 else float(matrix[0, 0])
    eps = 1e-14 * scale**n
    if not np.isfinite(det) or abs(det) <= eps:
        raise DegenerateElement(
            f"{element.kind.value} spanning edges are linearly dependent "
            f"(|det| = {abs(det):.3e} <= {eps:.3e})"
        )
    return AffineMap.from_matrix(matrix, a.copy())


def to_local(affine_map: AffineMap, global_step) -> np.ndarray:
    """Convert a global displacement to reference-cell coordinates.

    Returns ``A^-1 @ step``; no offset is applied because steps are
    displacement vectors, not points.
    """
    step = np.asarray(global_step, dtype=float)
    if step.shape[-1] != affine_map.dim:
        raise DimensionMismatch(
            f"step has dimension {step.shape[-1]}, map has {affine_map.dim}"
        )
    local = affine_map.local_step(step)
    if not np.all(np.isfinite(local)):
        raise DimensionMismatch("step produced non-finite local coordinates")
    return local


def _reference_contains(cell: ReferenceCell, local: np.ndarray) -> np.ndarray:
    inside = np.all(local >= -CONTAINMENT_TOL, axis=-1)
    if cell.is_simplex and cell.dim > 1:
        inside &= local.sum(axis=-1) <= 1.0 + CONTAINMENT_TOL
    else:
        inside &= np.all(local <= 1.0 + CONTAINMENT_TOL, axis=-1)
    return inside


def contains(element: MeshElement, point) -> bool | np.ndarray:
    """Boundary-inclusive membership test in reference-cell coordinates.

    Accepts a single point ``(n,)`` or a batch ``(m, n)``; returns a bool or
    a boolean array accordingly.
    """
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1] != element.dim:
        raise DimensionMismatch(
            f"point has dimension {pts.shape[-1]}, element has {element.dim}"
        )
    amap = build_affine_map(element)
    local = amap.to_local(pts)
    result = _reference_contains(element.reference_cell, local)
    if pts.ndim == 1:
        return bool(result)
    return result


def _sample_reference(cell: ReferenceCell, rng: np.random.Generator, m: int) -> np.ndarray:
    """Uniform samples in the reference cell, shape (m, dim).

    Simplices use the constant-cost folding constructions rather than
    rejection: the unit square folds onto the triangle across u + v = 1,
    and the unit cube folds onto the tetrahedron in two stages.
    """
    u = rng.random((m, cell.dim))
    if cell == ReferenceCell.TRIANGLE:
        over = u.sum(axis=1) > 1.0
        u[over] = 1.0 - u[over]
        return u
    if cell == ReferenceCell.TETRAHEDRON:
        s, t, w = u[:, 0].copy(), u[:, 1].copy(), u[:, 2].copy()
        fold = s + t > 1.0
        s[fold] = 1.0 - s[fold]
        t[fold] = 1.0 - t[fold]
        case_a = t + w > 1.0
        case_b = ~case_a & (s + t + w > 1.0)
        t_a, w_a = t[case_a].copy(), w[case_a].copy()
        t[case_a] = 1.0 - w_a
        w[case_a] = 1.0 - s[case_a] - t_a
        s_b, w_b = s[case_b].copy(), w[case_b].copy()
        s[case_b] = 1.0 - t[case_b] - w_b
        w[case_b] = s_b + t[case_b] + w_b - 1.0
        return np.column_stack([s, t, w])
    return u


def sample_uniform(element: MeshElement, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw points uniformly inside the element.

    Samples uniformly in the reference cell and applies the affine map,
    which preserves uniformity.  Returns shape ``(n,)`` when ``size`` is
    None, else ``(size, n)``.  Only the supplied generator is mutated.
    """
    amap = build_affine_map(element)
    m = 1 if size is None else int(size)
    local = _sample_reference(element.reference_cell, rng, m)
    pts = amap.to_global(local)
    if size is None:
        return pts[0]
    return pts


def measure(element: MeshElement) -> float:
    """Length, area, or volume: ``|det(A)| * measure(reference cell)``."""
    amap = build_affine_map(element)
    return amap.abs_det * element.reference_cell.measure
