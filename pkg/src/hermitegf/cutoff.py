"""Choice of the truncation degree ``j_max`` (and of ``t``) for the HermiteGF basis.

Two criteria are provided:

* the legacy one, which stops once every entry of the next degree block of
  ``Dt`` is below machine epsilon;
* the analytic one, which bounds the truncation error of the stable basis,

      ||dPsi(x)||**2 <= const_j * (H_lim(x - x0) - sum_{|l|<=j} H_l(x - x0)**2),

  and asks for ``max_k ||dPsi(x_k)|| / ||Psi_hat(x_k)|| <= tol`` over the
  collocation points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from hermitegf.basis import (
    BasisSpec,
    ExpansionFactors,
    default_scale,
    expansion_factors,
    hermitegf_eval,
    hlim_rows,
    log_d_diagonal,
    squared_degree_sums,
)
from hermitegf.errors import (
    CapacityExceeded,
    CriterionNotMet,
    ExponentOverflow,
    SingularMatrix,
    SingularVandermonde,
)
from hermitegf.gaussian import as_points
from hermitegf.linalg import condition_number_2, lu_factor, lu_solve
from hermitegf.multiindex import GradedIndexList, basis_count, enumerate_graded, pow_multi_table
from hermitegf.stabilization import StableBasis, build_stable_basis

logger = logging.getLogger(__name__)

EPS_MACH = float(np.finfo(float).eps)
EXP_LIMIT = 709.0
MAX_BASIS_HIGH_DIM = 100_000


def default_jcap(d: int) -> int:
    """60 for ``d <= 2``; otherwise the largest degree with at most 1e5 basis functions."""
    if d <= 2:
        return 60
    j = 0
    while basis_count(d, j + 1) <= MAX_BASIS_HIGH_DIM:
        j += 1
    return j


def min_jmax(d: int, N: int) -> int:
    """Smallest degree whose basis has at least ``N`` functions."""
    j = 0
    while basis_count(d, j) < N:
        j += 1
    return j


@dataclass
class CutoffConfig:
    tol: float = 1e-6
    j_start: int | None = None
    j_cap: int | None = None
    t_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.3, 0.99, 10))
    # extra degrees summed explicitly for the tail of the HermiteGF norm
    tail_extra: int = 40

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        self.t_grid = np.atleast_1d(np.asarray(self.t_grid, dtype=float))
        if self.t_grid.size == 0 or np.any((self.t_grid <= 0) | (self.t_grid >= 1)):
            raise ValueError("t_grid must be a nonempty subset of (0, 1)")


@dataclass
class CutoffResult:
    j_max: int
    M: int
    t: float
    bound_values: np.ndarray
    ratios: np.ndarray
    legacy_j_max: int | None
    converged: bool = True
    spec: BasisSpec | None = None
    basis: StableBasis | None = field(default=None, repr=False)

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios)) if self.ratios.size else 0.0


# ---------------------------------------------------------------- legacy

def legacy_jmax(centers, spec: BasisSpec, j_cap: int | None = None) -> int:
    """Smallest ``j_max`` such that all ``Dt`` entries of degree ``j_max + 1`` are below eps."""
    X = as_points(centers, spec.dim)
    N = X.shape[0]
    d = spec.dim
    j_cap = default_jcap(d) if j_cap is None else j_cap
    factors = expansion_factors(X, spec)
    L = default_scale(factors)
    idx = enumerate_graded(d, j_cap + 1)
    _, D_log = log_d_diagonal(spec, factors.d_vec, L=L, idx=idx)
    # largest quotient D[col] / D[i] over the first N rows
    row_min = D_log[:N].min()
    log_eps = np.log(EPS_MACH)
    for j in range(min_jmax(d, N), j_cap + 1):
        lo, hi = basis_count(d, j), basis_count(d, j + 1)
        if D_log[lo:hi].max() - row_min < log_eps:
            return j
    raise CapacityExceeded(f"legacy criterion not met up to j_cap={j_cap}")


# ---------------------------------------------------------------- analytic bound

def omega_weights(W1) -> np.ndarray:
    """Row sums of squares of ``W1^-1``: ``omega_k = sum_i (W1^-1)_{ki}**2``."""
    W1 = np.asarray(W1, dtype=float)
    try:
        factors = lu_factor(W1)
    except SingularMatrix as exc:
        raise SingularVandermonde(
            f"Vandermonde block is singular at pivot {exc.pivot_index}; "
            "perturb the nodes or change the expansion center",
            pivot_index=exc.pivot_index,
        ) from exc
    inv = lu_solve(factors, np.eye(W1.shape[0]))
    return np.einsum("ki,ki->k", inv, inv)


def log_truncation_const(j_max: int, omega, factors: ExpansionFactors, t: float,
                         idx: GradedIndexList) -> float:
    """Natural log of the rescaled truncation constant ``const_{j_max}``."""
    omega = np.asarray(omega, dtype=float)
    N = omega.shape[0]
    d = factors.d_vec.shape[0]
    k = idx.indices[:N]
    jp1 = j_max + 1
    y = factors.y
    ny2 = np.einsum("ki,ki->k", y, y)
    big = np.flatnonzero((2.0 / t) * ny2 > EXP_LIMIT)
    if big.size:
        i = int(big[0])
        raise ExponentOverflow(
            f"node {i} is too far from x0 relative to G (exp((2/t)|y|^2) overflows); increase G",
            index=i,
        )
    log_s = np.log((2.0 / t) * factors.d_vec ** 2)
    with np.errstate(divide="ignore"):
        first = (np.log(omega) + gammaln(k + 1.0).sum(axis=1)
                 + ((-k + jp1 / d) * log_s[None, :]).sum(axis=1) - gammaln(jp1 + 1.0))
        log_g = np.log(np.abs(factors.d_vec)).mean()
        nyD = np.sqrt(ny2) / np.exp(log_g)
        second = (2.0 / t) * ny2 + 2.0 * jp1 * np.log(nyD)
    return float(logsumexp(first) + logsumexp(second))


def truncation_const(j_max: int, omega, factors: ExpansionFactors, t: float,
                     idx: GradedIndexList) -> float:
    """Rescaled truncation constant ``const_{j_max}`` (products evaluated in log space)."""
    with np.errstate(over="ignore"):
        return float(np.exp(log_truncation_const(j_max, omega, factors, t, idx)))


def hermite_tail(points, spec: BasisSpec, j_max: int, extra: int = 40) -> np.ndarray:
    """``H_lim(x - x0) - sum_{|l|<=j_max} H_l(x - x0)**2`` for each point.

    The degrees ``j_max+1 .. j_max+extra`` are summed explicitly and only the
    remainder beyond comes from the closed form, so no cancellation occurs
    when the tail is small.
    """
    return _tails(points, spec, j_max + extra)[:, j_max]


def _tails(points, spec, J):
    # tails[:, j] = sum_{n > j} S_n, for j = 0..J
    S = squared_degree_sums(points, spec, J)
    rem = np.maximum(hlim_rows(points, spec) - S.sum(axis=1), 0.0)
    rev = np.cumsum(S[:, ::-1], axis=1)[:, ::-1]
    tails = np.empty_like(S)
    tails[:, :-1] = rev[:, 1:]
    tails[:, -1] = 0.0
    return tails + rem[:, None]


def delta_psi_bound(x, j_max: int, const_jmax: float, spec: BasisSpec, extra: int = 40) -> float:
    """Upper bound on the truncation error ``||dPsi(x)||_2`` of the stable basis."""
    tail = hermite_tail(np.atleast_1d(np.asarray(x, dtype=float))[None, :], spec, j_max, extra)[0]
    return float(np.sqrt(const_jmax * max(0.0, tail)))


# ---------------------------------------------------------------- search

class _CutoffProblem:
    """Quantities shared by all candidate ``(t, j_max)`` for fixed nodes."""

    def __init__(self, colloc, spec: BasisSpec, cfg: CutoffConfig):
        self.X = as_points(colloc, spec.dim)
        self.N = self.X.shape[0]
        self.template = spec
        self.cfg = cfg
        d = spec.dim
        self.j_lo = max(min_jmax(d, self.N), cfg.j_start or 0)
        self.j_cap = default_jcap(d) if cfg.j_cap is None else cfg.j_cap
        if self.j_cap < self.j_lo:
            raise CapacityExceeded(f"j_cap={self.j_cap} below the minimal degree {self.j_lo}")
        self.factors = expansion_factors(self.X, spec)
        self.idx_N = enumerate_graded(d, min_jmax(d, self.N))
        W1 = pow_multi_table(self.factors.v, self.idx_N.indices[:self.N])
        self.cond_W1 = condition_number_2(W1)
        self.omega = omega_weights(W1)

    def run(self, t: float) -> CutoffResult:
        cfg = self.cfg
        spec_t = self.template.with_t(t)
        tails = _tails(self.X, spec_t, self.j_cap + cfg.tail_extra)
        try:
            legacy = legacy_jmax(self.X, spec_t, self.j_cap)
        except CapacityExceeded:
            legacy = None

        j_build = min(self.j_cap, self.j_lo + 12)
        basis = None
        j = self.j_lo
        best = None
        while True:
            if basis is None or basis.spec.j_max < j:
                basis = build_stable_basis(self.X, spec_t.with_jmax(j_build))
                H = hermitegf_eval(self.X, basis.spec)
                psi = None
            N = self.N
            M = basis_count(spec_t.dim, j)
            if psi is None:
                psi = H[:, :N] + H[:, N:M] @ basis.K[:, :M - N].T
            else:
                M_prev = basis_count(spec_t.dim, j - 1)
                psi = psi + H[:, M_prev:M] @ basis.K[:, M_prev - N:M - N].T
            log_c = log_truncation_const(j, self.omega, self.factors, t, basis.spec.idx)
            with np.errstate(over="ignore"):
                bounds = np.sqrt(np.exp(log_c) * tails[:, j])
            norms = np.sqrt(np.einsum("ki,ki->k", psi, psi))
            ratios = bounds / norms
            result = CutoffResult(j, M, t, bounds, ratios, legacy, True,
                                  basis.spec.with_jmax(j), None)
            ok = bool(np.all(ratios <= cfg.tol))
            if best is None or result.max_ratio < best.max_ratio:
                best = result
            if ok:
                result.basis = basis.truncated(j)
                return result
            if j >= self.j_cap:
                break
            j += 1
            if j > j_build:
                j_build = min(self.j_cap, 2 * j_build)
        result.converged = False
        result.basis = basis.truncated(result.j_max)
        logger.info("cut-off criterion not met for t=%g up to j_cap=%d (max ratio %.3e)",
                    t, self.j_cap, result.max_ratio)
        return result


def choose_jmax(colloc, spec: BasisSpec, cfg: CutoffConfig | None = None,
                strict: bool = False) -> CutoffResult:
    """Smallest ``j_max <= j_cap`` meeting the analytic criterion at fixed ``spec.t``.

    ``spec.j_max`` is ignored.  If no degree qualifies a best-effort result
    with ``converged=False`` is returned (or :class:`CriterionNotMet` raised
    when ``strict``).
    """
    cfg = CutoffConfig() if cfg is None else cfg
    result = _CutoffProblem(colloc, spec, cfg).run(spec.t)
    if strict and not result.converged:
        raise CriterionNotMet(f"criterion not met up to j_max={result.j_max}", result)
    return result


def auto_t(colloc, spec: BasisSpec, cfg: CutoffConfig | None = None):
    """Scan ``cfg.t_grid`` and return the ``t`` giving the smallest ``j_max``.

    Ties go to the largest ``t``.  Raises :class:`CriterionNotMet` only when
    no grid value converges.
    """
    cfg = CutoffConfig() if cfg is None else cfg
    problem = _CutoffProblem(colloc, spec, cfg)
    results = [problem.run(float(t)) for t in cfg.t_grid]
    good = [r for r in results if r.converged]
    if not good:
        best = min(results, key=lambda r: r.max_ratio)
        raise CriterionNotMet("no t in the grid satisfies the cut-off criterion", best)
    chosen = min(good, key=lambda r: (r.j_max, -r.t))
    return chosen.t, chosen
