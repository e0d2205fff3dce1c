"""Floating-point backend for norm-dependent quantities.

Everything norm-related (gap between subspaces, reduced minimum
modulus, distances) is computed here with SVD-based numerical rank.
Exact objects are converted on the way in; results are plain floats.
All norms are Euclidean/spectral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import Matrix, Subspace

_ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for numerical rank and empirical convergence calls.

    rank_rel: singular values below rank_rel * sigma_max count as zero.
    conv_tol: a delta tail below this reads as converged.
    tail_window: number of trailing samples that make up a tail.
    """

    rank_rel: float = 1e-9
    conv_tol: float = 1e-6
    tail_window: int = 5

    def __post_init__(self):
        if self.rank_rel <= 0 or self.conv_tol <= 0 or self.tail_window <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


class FloatSubspace:
    """Subspace given by a column-orthonormal basis matrix."""

    __slots__ = ("ambient_dim", "ortho_basis")

    def __init__(self, ambient_dim: int, ortho_basis: np.ndarray):
        q = np.asarray(ortho_basis)
        if q.ndim != 2 or q.shape[0] != ambient_dim:
            raise ValueError("basis must be an ambient_dim x k array")
        if q.shape[1]:
            gram = q.conj().T @ q
            if np.linalg.norm(gram - np.eye(q.shape[1])) > _ORTHO_TOL * max(1, q.shape[1]):
                raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "ortho_basis", q)

    def __setattr__(self, name, value):
        raise AttributeError("FloatSubspace is immutable")

    @property
    def dim(self) -> int:
        return self.ortho_basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "FloatSubspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    def projector(self) -> np.ndarray:
        q = self.ortho_basis
        if q.shape[1] == 0:
            return np.zeros((self.ambient_dim, self.ambient_dim))
        return q @ q.conj().T

    def __repr__(self) -> str:
        return f"FloatSubspace(dim {self.dim} of {self.ambient_dim})"


def to_float(value: Matrix | Subspace) -> np.ndarray | FloatSubspace:
    """Entry-wise conversion; subspaces come back orthonormalized."""
    if isinstance(value, Matrix):
        return matrix_to_array(value)
    if isinstance(value, Subspace):
        return subspace_to_float(value)
    raise TypeError(f"cannot convert {type(value).__name__}")


def matrix_to_array(a: Matrix) -> np.ndarray:
    if any(v.im for v in a.entries):
        data = [v.to_complex() for v in a.entries]
        return np.array(data, dtype=np.complex128).reshape(a.rows, a.cols)
    data = [float(v.re) for v in a.entries]
    return np.array(data, dtype=np.float64).reshape(a.rows, a.cols)


def array_from_obj(obj: dict) -> np.ndarray:
    """Float matrix from the shared JSON shape with field "f64"."""
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        field = obj.get("field", "f64")
        raw = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if field != "f64":
        raise ValueError(f"expected field 'f64', got {field!r}")
    if len(raw) != rows or any(len(r) != cols for r in raw):
        raise ValueError("entry grid does not match rows x cols")
    return np.array([[float(v) for v in row] for row in raw], dtype=np.float64)


def array_to_obj(a: np.ndarray) -> dict:
    a = np.asarray(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "field": "f64",
        "entries": [[float(v) for v in row] for row in a.real],
    }


def subspace_to_float(s: Subspace) -> FloatSubspace:
    if s.dim == 0:
        return FloatSubspace.zero(s.ambient_dim)
    rows = matrix_to_array(s.basis)
    q, _ = np.linalg.qr(rows.conj().T)
    return FloatSubspace(s.ambient_dim, q[:, : s.dim])


def orthonormalize_rows(rows: np.ndarray, ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> FloatSubspace:
    """Span of the given row vectors as a FloatSubspace (rank-truncated)."""
    a = np.atleast_2d(np.asarray(rows))
    if a.shape[1] != ambient_dim:
        raise ValueError("row length must match the ambient dimension")
    if a.shape[0] == 0:
        return FloatSubspace.zero(ambient_dim)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = _rank_from_singulars(s, tol)
    return FloatSubspace(ambient_dim, vh[:r].conj().T)


def _rank_from_singulars(s: np.ndarray, tol: Tolerance) -> int:
    if s.size == 0:
        return 0
    cutoff = tol.rank_rel * float(s[0])
    return int(np.sum(s > cutoff))


def float_rank(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    return _rank_from_singulars(s, tol)


def float_kernel(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> FloatSubspace:
    """Null space within the rank tolerance, as an orthonormal basis."""
    a = np.asarray(a)
    _, s, vh = np.linalg.svd(a)
    r = _rank_from_singulars(s, tol)
    return FloatSubspace(a.shape[1], vh[r:].conj().T)


def float_image(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> FloatSubspace:
    """Column space within the rank tolerance."""
    a = np.asarray(a)
    u, s, _ = np.linalg.svd(a)
    r = _rank_from_singulars(s, tol)
    return FloatSubspace(a.shape[0], u[:, :r])


def gamma(a: np.ndarray | Matrix, tol: Tolerance = DEFAULT_TOL) -> float:
    """Reduced minimum modulus: smallest singular value above the rank cut.

    For a matrix this equals inf ||Tx|| over x at unit distance from the
    null space.  The zero operator maps to infinity by convention.
    """
    if isinstance(a, Matrix):
        a = matrix_to_array(a)
    a = np.asarray(a)
    if a.size == 0:
        return math.inf
    s = np.linalg.svd(a, compute_uv=False)
    r = _rank_from_singulars(s, tol)
    if r == 0:
        return math.inf
    return float(s[r - 1])


def delta(y: FloatSubspace, z: FloatSubspace) -> float:
    """One-sided gap sup_{x in Y, |x|<=1} dist(x, Z), in [0, 1].

    Computed as the largest singular value of (I - P_Z) Q_Y.  The
    supremum over the closed unit ball of the zero subspace is 0.
    """
    if y.ambient_dim != z.ambient_dim:
        raise ValueError(f"ambient mismatch: {y.ambient_dim} vs {z.ambient_dim}")
    if y.dim == 0:
        return 0.0
    qy = y.ortho_basis
    if z.dim == 0:
        resid = qy
    else:
        qz = z.ortho_basis
        resid = qy - qz @ (qz.conj().T @ qy)
    s = np.linalg.svd(resid, compute_uv=False)
    return float(s[0]) if s.size else 0.0


def gap(y: FloatSubspace, z: FloatSubspace) -> float:
    """Symmetric gap max(delta(Y,Z), delta(Z,Y))."""
    return max(delta(y, z), delta(z, y))


def dist_to_subspace(x: np.ndarray, y: FloatSubspace) -> float:
    """Euclidean distance from a vector to the subspace."""
    v = np.asarray(x).reshape(-1)
    if v.shape[0] != y.ambient_dim:
        raise ValueError("vector length must match the ambient dimension")
    if y.dim == 0:
        return float(np.linalg.norm(v))
    q = y.ortho_basis
    return float(np.linalg.norm(v - q @ (q.conj().T @ v)))


def operator_norm(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])
