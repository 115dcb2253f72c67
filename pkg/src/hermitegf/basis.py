"""HermiteGF basis functions and the expansion factors of anisotropic Gaussians.

The HermiteGF functions are

    H_l(x) = t**(|l|/2) / sqrt(2**|l| l!) * h_l(G^T x) * exp(-x^T E^T E x),

and every Gaussian ``phi_q(x) = exp(-(x-q)^T E^T E (x-q))`` expands as
``phi_q(x) = sum_l B[l, q] H_l(x - x0)`` with ``B^T = C D``:

    C[k, l] = exp(-D_k^T E^T E D_k + D_k^T Gt D_k) * v_k**l
    D[l, l] = d_vec**l * sqrt(2**|l|) / sqrt(t**|l| l!)

where ``D_k = x_k - x0``, ``Gt = E^T E G^-T G^-1 E^T E``, ``d_vec`` is the
diagonal of ``G^-1 E^T E`` and ``v_k = (Id + Diag^-1 Rem) D_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.special import gammaln

from hermitegf.errors import DegenerateDiagonal, DomainError, ExponentOverflow
from hermitegf.gaussian import ShapeMatrix, as_points, as_shape_matrix
from hermitegf.hermite import hermite_function_1d
from hermitegf.linalg import PIVOT_FLOOR, lu_factor
from hermitegf.multiindex import GradedIndexList, enumerate_graded, pow_multi_table

EXP_LIMIT = 709.0


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Parameters ``(E, G, t, x0, j_max)`` of a truncated HermiteGF basis."""

    E: np.ndarray
    G: np.ndarray
    t: float
    x0: np.ndarray
    j_max: int
    _idx_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        E = np.asarray(as_shape_matrix(self.E, np.size(self.x0)).matrix, dtype=float)
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        d = x0.shape[0]
        if E.shape != (d, d) or G.shape != (d, d):
            raise ValueError(f"E {E.shape} and G {G.shape} must be {d}x{d}")
        if not (0.0 < self.t < 1.0):
            raise DomainError(f"t must lie in (0, 1), got {self.t}")
        if self.j_max < 0:
            raise ValueError("j_max must be >= 0")
        lu_factor(G)
        for arr in (E, G, x0):
            arr.setflags(write=False)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "j_max", int(self.j_max))

    @classmethod
    def isotropic(cls, eps, gamma, t, x0, j_max) -> "BasisSpec":
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        d = x0.shape[0]
        return cls(ShapeMatrix.isotropic(eps, d).matrix, gamma * np.eye(d), t, x0, j_max)

    @property
    def dim(self) -> int:
        return self.x0.shape[0]

    @property
    def idx(self) -> GradedIndexList:
        idx = self._idx_cache.get(self.j_max)
        if idx is None:
            idx = enumerate_graded(self.dim, self.j_max)
            self._idx_cache[self.j_max] = idx
        return idx

    @property
    def M(self) -> int:
        return len(self.idx)

    @cached_property
    def gram(self) -> np.ndarray:
        return self.E.T @ self.E

    def with_jmax(self, j_max: int) -> "BasisSpec":
        return replace(self, j_max=j_max, _idx_cache={})

    def with_t(self, t: float) -> "BasisSpec":
        return replace(self, t=t, _idx_cache={})


@dataclass(frozen=True, eq=False)
class ExpansionFactors:
    delta: np.ndarray       # (N, d), x_k - x0
    d_vec: np.ndarray       # (d,), diagonal of G^-1 E^T E
    rem_factor: np.ndarray  # (d, d), Id + Diag^-1 Rem
    Gtilde: np.ndarray      # (d, d)
    v: np.ndarray           # (N, d)
    log_expfac: np.ndarray  # (N,)

    @property
    def expfac(self) -> np.ndarray:
        return np.exp(self.log_expfac)

    @property
    def y(self) -> np.ndarray:
        """``y_k = Diag v_k``, shape (N, d)."""
        return self.v * self.d_vec


def expansion_factors(centers, spec: BasisSpec) -> ExpansionFactors:
    """Diag/Rem splitting of ``G^-1 E^T E`` and the per-center quantities."""
    X = as_points(centers, spec.dim)
    delta = X - spec.x0
    A = np.linalg.solve(spec.G, spec.gram)
    d_vec = np.diag(A).copy()
    tiny = np.flatnonzero(np.abs(d_vec) < PIVOT_FLOOR)
    if tiny.size:
        raise DegenerateDiagonal(f"diagonal entry {tiny[0]} of G^-1 E^T E vanishes")
    rem = A - np.diag(d_vec)
    rem_factor = np.eye(spec.dim) + rem / d_vec[:, None]
    # E^T E is symmetric, so Gt = A^T A
    Gtilde = A.T @ A
    v = delta @ rem_factor.T
    log_expfac = (np.einsum("ki,ij,kj->k", delta, Gtilde, delta)
                  - np.einsum("ki,ij,kj->k", delta, spec.gram, delta))
    return ExpansionFactors(delta, d_vec, rem_factor, Gtilde, v, log_expfac)


def _quadratic_exponent(shifted, spec):
    # x^T (G G^T / 2 - E^T E) x per row
    B = shifted @ spec.G
    Ex = shifted @ spec.E.T
    return 0.5 * np.einsum("ki,ki->k", B, B) - np.einsum("ki,ki->k", Ex, Ex), B


def hermitegf_eval(points, spec: BasisSpec, j_max: int | None = None) -> np.ndarray:
    """Values ``H_l(x_k - x0)`` for all ``|l| <= j_max``, shape (n, M).

    Evaluated as ``pi**(d/4) t**(|l|/2) psi_l(G^T x) exp(x^T (G G^T/2 - E^T E) x)``
    with tensor-product Hermite functions ``psi_l``.
    """
    j = spec.j_max if j_max is None else j_max
    X = as_points(points, spec.dim)
    shifted = X - spec.x0
    q, B = _quadratic_exponent(shifted, spec)
    over = np.flatnonzero(q > EXP_LIMIT)
    if over.size:
        k = int(over[0])
        raise ExponentOverflow(
            f"exponential factor overflows at point {k} ({X[k].tolist()}); reduce G or the domain",
            index=k,
        )
    idx = spec.idx if j == spec.j_max else enumerate_graded(spec.dim, j)
    out = np.ones((X.shape[0], len(idx)))
    for i in range(spec.dim):
        psi = hermite_function_1d(B[:, i], j).values
        out *= psi[:, idx.indices[:, i]]
    log_scale = 0.5 * idx.degrees * np.log(spec.t) + 0.25 * spec.dim * np.log(np.pi)
    out *= np.exp(log_scale)[None, :]
    out *= np.exp(q)[:, None]
    return out


def squared_degree_sums(points, spec: BasisSpec, J: int) -> np.ndarray:
    """``S[k, n] = sum_{|l| = n} H_l(x_k - x0)**2`` for ``n = 0..J``.

    Uses the tensor structure: per degree the sum is a discrete convolution of
    the one-dimensional sequences ``t**m psi_m(b_i)**2``.
    """
    X = as_points(points, spec.dim)
    shifted = X - spec.x0
    q, B = _quadratic_exponent(shifted, spec)
    tw = spec.t ** np.arange(J + 1, dtype=float)
    acc = None
    for i in range(spec.dim):
        seq = hermite_function_1d(B[:, i], J).values ** 2 * tw
        if acc is None:
            acc = seq
            continue
        nxt = np.zeros_like(acc)
        for m in range(J + 1):
            nxt[:, m:] += acc[:, m:m + 1] * seq[:, :J + 1 - m]
        acc = nxt
    return acc * (np.pi ** (spec.dim / 2.0)) * np.exp(2.0 * q)[:, None]


def hlim_rows(points, spec: BasisSpec) -> np.ndarray:
    """Closed-form ``sum_l H_l(x_k - x0)**2`` for each row (arguments shifted by x0)."""
    X = as_points(points, spec.dim)
    shifted = X - spec.x0
    Ex = shifted @ spec.E.T
    Gx = shifted @ spec.G
    t = spec.t
    expo = -2.0 * np.einsum("ki,ki->k", Ex, Ex) + 2.0 * t * np.einsum("ki,ki->k", Gx, Gx) / (1.0 + t)
    return np.exp(expo) / (1.0 - t * t) ** (spec.dim / 2.0)


@dataclass(frozen=True, eq=False)
class CDFactorization:
    """``B^T = C diag(D)`` with D held as sign and log-magnitude.

    ``L`` is the scaling applied to C columns (``C`` carries ``(v/L)**l``,
    ``D`` the compensating ``L**|l|``); it is 1 unless requested.
    """

    C: np.ndarray
    D_sign: np.ndarray
    D_log: np.ndarray
    L: float = 1.0

    @property
    def D(self) -> np.ndarray:
        return self.D_sign * np.exp(self.D_log)


def default_scale(factors: ExpansionFactors) -> float:
    """Center-radius scaling ``L = max_k |v_k|`` used in one dimension, 1 otherwise."""
    if factors.v.shape[1] != 1:
        return 1.0
    L = float(np.max(np.abs(factors.v))) if factors.v.size else 0.0
    return L if L > 0.0 else 1.0


def log_d_diagonal(spec: BasisSpec, d_vec, L: float = 1.0, idx: GradedIndexList | None = None):
    """Sign and log-magnitude of ``D[l, l] * L**|l|`` for every index of ``idx``."""
    idx = spec.idx if idx is None else idx
    ind = idx.indices
    deg = idx.degrees
    logd = np.log(np.abs(d_vec))
    D_log = (ind @ logd + 0.5 * deg * (np.log(2.0) - np.log(spec.t))
             - 0.5 * idx.log_factorials() + deg * np.log(L))
    neg = (ind * (d_vec < 0)[None, :]).sum(axis=1) % 2 == 1
    D_sign = np.where(neg, -1.0, 1.0)
    return D_sign, D_log


def vandermonde_split(centers, spec: BasisSpec, factors: ExpansionFactors | None = None,
                      L: float = 1.0, idx: GradedIndexList | None = None):
    """``C = diag(Ebar) W`` with ``Ebar_k = expfac_k`` and ``W[k, l] = (v_k / L)**l``."""
    if factors is None:
        factors = expansion_factors(centers, spec)
    idx = spec.idx if idx is None else idx
    Ebar = factors.expfac
    W = pow_multi_table(factors.v / L, idx.indices)
    return Ebar, W


def build_cd(centers, spec: BasisSpec, factors: ExpansionFactors | None = None,
             L: float | None = None, idx: GradedIndexList | None = None) -> CDFactorization:
    """Factor the expansion coefficients as ``B^T = C D``.

    In one dimension the C columns are divided by ``L**l`` with ``L`` the
    largest center offset (compensated in D); pass ``L`` to override.
    """
    if factors is None:
        factors = expansion_factors(centers, spec)
    if L is None:
        L = default_scale(factors)
    Ebar, W = vandermonde_split(centers, spec, factors, L=L, idx=idx)
    C = Ebar[:, None] * W
    D_sign, D_log = log_d_diagonal(spec, factors.d_vec, L=L, idx=idx)
    return CDFactorization(C, D_sign, D_log, float(L))


def expansion_coefficients(center, spec: BasisSpec) -> np.ndarray:
    """Coefficients of ``phi_center`` in the HermiteGF basis, straight from the formula."""
    q = np.atleast_1d(np.asarray(center, dtype=float))
    delta = q - spec.x0
    a = np.linalg.solve(spec.G, spec.gram @ delta)
    Gt = spec.gram @ np.linalg.solve(spec.G.T, np.linalg.solve(spec.G, spec.gram))
    log_pref = delta @ (Gt - spec.gram) @ delta
    ind = spec.idx.indices
    deg = spec.idx.degrees
    with np.errstate(divide="ignore", invalid="ignore"):
        loga = np.log(np.abs(a))
        logpow = np.where(ind == 0, 0.0, ind * loga[None, :]).sum(axis=1)
    logc = (log_pref + logpow + 0.5 * deg * (np.log(2.0) - np.log(spec.t))
            - 0.5 * spec.idx.log_factorials())
    neg = (ind * (a < 0)[None, :]).sum(axis=1) % 2 == 1
    return np.where(neg, -1.0, 1.0) * np.exp(logc)


def expansion_reconstruct(x, center, spec: BasisSpec) -> float:
    """Truncated HermiteGF expansion of ``phi_center`` evaluated at ``x``."""
    coef = expansion_coefficients(center, spec)
    H = hermitegf_eval(np.atleast_1d(np.asarray(x, dtype=float))[None, :], spec)[0]
    return float(coef @ H)
