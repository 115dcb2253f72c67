"""HermiteGF-QR: the stabilized basis Psi and interpolation in it.

With ``C = Q (R1 R2)`` and ``D = diag(D1, D2)`` the basis
``Psi(x)^T = X^-1 Phi(x)^T`` for ``X = Q R1 D1`` is

    Psi(x)^T = (Id | K) H(x - x0)^T,    K = (R1^-1 R2) o Dt,

where ``Dt[i, j] = D[N+j] / D[i]`` is formed from log-magnitudes so the
ill-conditioned diagonal never appears on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.special import gammaln

from hermitegf.basis import (
    BasisSpec,
    CDFactorization,
    ExpansionFactors,
    build_cd,
    expansion_factors,
    hermitegf_eval,
    vandermonde_split,
)
from hermitegf.errors import InsufficientBasis, RankDeficientC, SingularMatrix
from hermitegf.gaussian import as_points
from hermitegf.linalg import (
    condition_number_2,
    lu_factor,
    lu_solve,
    qr_thin,
    upper_tri_solve_right,
)
from hermitegf.multiindex import basis_count


def dtilde(cd: CDFactorization, N: int, M: int | None = None) -> np.ndarray:
    """``Dt[i, j] = D[N + j] / D[i]`` for ``i < N``, ``j < M - N``, via log quotients."""
    M = cd.D_log.shape[0] if M is None else M
    logq = cd.D_log[None, N:M] - cd.D_log[:N, None]
    sign = cd.D_sign[None, N:M] * cd.D_sign[:N, None]
    with np.errstate(over="ignore"):
        return sign * np.exp(logq)


def dtilde_1d_closed(N: int, M: int, eps: float, gamma: float, t: float, L: float = 1.0) -> np.ndarray:
    """Closed-form 1D quotient matrix for ``E = eps``, ``G = gamma``.

    Row ``i`` (degree ``i``) and column ``j`` (degree ``N + j``), both 0-based:
    ``(eps**2 L / gamma * sqrt(2/t))**(N+j-i) * sqrt(i! / (N+j)!)``.
    """
    i = np.arange(N)[:, None]
    n = np.arange(N, M)[None, :]
    base = np.log(eps * eps * L / gamma * np.sqrt(2.0 / t))
    return np.exp((n - i) * base + 0.5 * (gammaln(i + 1.0) - gammaln(n + 1.0)))


@dataclass(frozen=True, eq=False)
class StableBasis:
    """Factored stable basis ``Psi(x)^T = (Id | K) H(x - x0)^T``.

    Column ``j`` of ``K`` belongs to multi-index ``spec.idx[N + j]``.
    """

    spec: BasisSpec
    centers: np.ndarray
    K: np.ndarray
    factors: ExpansionFactors
    cd: CDFactorization
    R1: np.ndarray | None = None
    method: str = "qr"

    @property
    def N(self) -> int:
        return self.centers.shape[0]

    @property
    def M(self) -> int:
        return self.spec.M

    @cached_property
    def cond_R1(self) -> float:
        return condition_number_2(self.R1) if self.R1 is not None else float("nan")

    @property
    def finite(self) -> bool:
        return bool(np.all(np.isfinite(self.K)))

    def truncated(self, j_max: int) -> "StableBasis":
        """The same basis cut at a lower degree (columns of K are prefix stable)."""
        if j_max > self.spec.j_max:
            raise ValueError("can only truncate to a lower degree")
        M = basis_count(self.spec.dim, j_max)
        if M < self.N:
            raise InsufficientBasis(f"M={M} < N={self.N}")
        return replace(self, spec=self.spec.with_jmax(j_max), K=self.K[:, :M - self.N])


def build_stable_basis(centers, spec: BasisSpec, method: str = "qr", L: float | None = None) -> StableBasis:
    """Construct the stabilized basis for the given centers.

    ``method="qr"`` is the production path; ``method="vandermonde"`` uses the
    alternative ``C = Ebar W`` splitting, ``K = (W1^-1 W2) o Dt``.
    """
    X = as_points(centers, spec.dim)
    N = X.shape[0]
    M = spec.M
    if M < N:
        raise InsufficientBasis(f"basis size M={M} is smaller than the number of centers N={N}")
    factors = expansion_factors(X, spec)
    cd = build_cd(X, spec, factors, L=L)
    C1, C2 = cd.C[:, :N], cd.C[:, N:]
    R1 = None
    if method == "qr":
        Q, R1, full_rank = qr_thin(C1)
        if not full_rank:
            raise RankDeficientC("R1 has a vanishing diagonal entry; node layout is degenerate")
        Rt = upper_tri_solve_right(R1, Q.T @ C2)
    elif method == "vandermonde":
        # the common Ebar row factor cancels in W1^-1 W2
        _, W = vandermonde_split(X, spec, factors, L=cd.L)
        W1, W2 = W[:, :N], W[:, N:]
        Rt = lu_solve(lu_factor(W1), W2) if W2.size else np.zeros((N, 0))
    else:
        raise ValueError(f"unknown method {method!r}")
    K = Rt * dtilde(cd, N, M)
    return StableBasis(spec, X, K, factors, cd, R1, method)


def psi_matrix(points, basis: StableBasis, H: np.ndarray | None = None) -> np.ndarray:
    """Stable basis values ``Psi(x_i)_j``, shape (n_points, N)."""
    if H is None:
        H = hermitegf_eval(points, basis.spec)
    N = basis.N
    return H[:, :N] + H[:, N:basis.M] @ basis.K.T


@dataclass(frozen=True, eq=False)
class Interpolant:
    """Gaussian interpolant in the stable basis, ``s(x) = Psi(x) Psi_col^-1 f``."""

    basis: StableBasis
    colloc: np.ndarray
    fvals: np.ndarray
    psi_col: np.ndarray

    @cached_property
    def cond(self) -> float:
        """2-norm condition number of the collocation matrix ``Psi_col``."""
        return condition_number_2(self.psi_col)

    @cached_property
    def _lu(self):
        try:
            return lu_factor(self.psi_col)
        except SingularMatrix as exc:
            exc.cond = self.cond
            raise

    def cardinal(self, evalpts) -> np.ndarray:
        """``Psi(X_eval) Psi_col^-1``, formed by a right solve."""
        P = psi_matrix(evalpts, self.basis)
        return lu_solve(self._lu, P.T, trans=1).T

    def __call__(self, evalpts) -> np.ndarray:
        return evaluate(self, evalpts)


def fit(colloc, f, basis: StableBasis) -> Interpolant:
    """Set up the interpolant; collocation points must coincide with the centers."""
    X = as_points(colloc, basis.spec.dim)
    f = np.asarray(f, dtype=float)
    if X.shape != basis.centers.shape or not np.array_equal(X, basis.centers):
        raise ValueError("collocation points must coincide with the basis centers")
    if f.shape != (X.shape[0],):
        raise ValueError("need one data value per collocation point")
    return Interpolant(basis, X, f, psi_matrix(X, basis))


def evaluate(ip: Interpolant, evalpts) -> np.ndarray:
    """Evaluate the interpolant; the cardinal matrix is formed before touching ``f``."""
    return ip.cardinal(evalpts) @ ip.fvals
