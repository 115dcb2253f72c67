"""Isotropic and anisotropic Gaussian kernels and the RBF-Direct baseline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from hermitegf.errors import SingularMatrix
from hermitegf.linalg import condition_number_2, lu_factor, solve


@dataclass(frozen=True, eq=False)
class ShapeMatrix:
    """Invertible shape matrix ``E`` of the kernel ``exp(-r^T E^T E r)``."""

    matrix: np.ndarray
    kind: str = "general"
    eps: float | None = None

    def __post_init__(self):
        E = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if E.shape[0] != E.shape[1]:
            raise ValueError(f"shape matrix must be square, got {E.shape}")
        try:
            lu_factor(E)
        except SingularMatrix as exc:
            raise SingularMatrix("shape matrix E is not invertible") from exc
        E.setflags(write=False)
        object.__setattr__(self, "matrix", E)

    @classmethod
    def isotropic(cls, eps: float, d: int) -> "ShapeMatrix":
        if not eps > 0:
            raise ValueError("eps must be positive")
        return cls(eps * np.eye(d), kind="isotropic", eps=float(eps))

    @classmethod
    def general(cls, E) -> "ShapeMatrix":
        return cls(np.asarray(E, dtype=float), kind="general")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def gram(self) -> np.ndarray:
        """``E^T E``."""
        return self.matrix.T @ self.matrix

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def as_shape_matrix(E, d: int | None = None) -> ShapeMatrix:
    """Coerce a scalar eps, an array or a :class:`ShapeMatrix` into a ShapeMatrix."""
    if isinstance(E, ShapeMatrix):
        return E
    if np.ndim(E) == 0:
        if d is None:
            raise ValueError("dimension required for a scalar shape parameter")
        return ShapeMatrix.isotropic(float(E), d)
    return ShapeMatrix.general(E)


def as_points(points, d: int | None = None) -> np.ndarray:
    """Return points as a float array of shape (n, d)."""
    P = np.asarray(points, dtype=float)
    if P.ndim == 0:
        P = P.reshape(1, 1)
    elif P.ndim == 1:
        P = P[:, None] if (d is None or d == 1) else P[None, :]
    if d is not None and P.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}, got {P.shape[1]}")
    if not np.all(np.isfinite(P)):
        raise ValueError("point coordinates must be finite")
    return P


def gaussian_matrix(xs, centers, E) -> np.ndarray:
    """Kernel matrix ``exp(-(x_i - c_k)^T E^T E (x_i - c_k))``, shape (n_x, n_c)."""
    C = as_points(centers)
    d = C.shape[1]
    X = as_points(xs, d)
    S = as_shape_matrix(E, d)
    if S.kind == "isotropic":
        diff = X[:, None, :] - C[None, :, :]
        r2 = np.einsum("ikj,ikj->ik", diff, diff)
        return np.exp(-(S.eps ** 2) * r2)
    # work with E r so the quadratic form is a plain sum of squares
    ER = (X[:, None, :] - C[None, :, :]) @ S.matrix.T
    return np.exp(-np.einsum("ikj,ikj->ik", ER, ER))


class DirectFit(NamedTuple):
    coeffs: np.ndarray
    cond: float


def rbf_direct_fit(colloc, f, E) -> DirectFit:
    """Solve the collocation system ``Phi alpha = f`` directly.

    Returns the coefficients together with the 2-norm condition number of
    the collocation matrix.  No regularization is attempted; a numerically
    singular system raises :class:`SingularMatrix`.
    """
    X = as_points(colloc)
    f = np.asarray(f, dtype=float)
    if f.shape[0] != X.shape[0]:
        raise ValueError("number of data values must match number of points")
    Phi = gaussian_matrix(X, X, E)
    cond = condition_number_2(Phi)
    try:
        coeffs = solve(Phi, f)
    except SingularMatrix as exc:
        exc.cond = cond
        raise
    return DirectFit(coeffs, cond)


def rbf_direct_eval(coeffs, evalpts, centers, E) -> np.ndarray:
    """Evaluate ``s(x) = sum_k alpha_k phi_k(x)``."""
    return gaussian_matrix(evalpts, centers, E) @ np.asarray(coeffs, dtype=float)

