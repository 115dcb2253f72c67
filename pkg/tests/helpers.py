"""Reference computations shared by the module and acceptance tests."""

import numpy as np

from hermitegf.basis import BasisSpec, expansion_factors, hermitegf_eval
from hermitegf.cutoff import delta_psi_bound, min_jmax, omega_weights, truncation_const
from hermitegf.multiindex import basis_count, enumerate_graded, pow_multi_table
from hermitegf.stabilization import build_stable_basis


def true_and_bound(X, spec: BasisSpec, j_max: int, extra: int = 25):
    """Measured ``||dPsi(x_k)||`` against a ``j_max + extra`` reference, and the analytic bound."""
    N, d = X.shape
    ref = build_stable_basis(X, spec.with_jmax(j_max + extra), method="vandermonde")
    H = hermitegf_eval(X, ref.spec)
    M = basis_count(d, j_max)
    true = np.linalg.norm(H[:, M:] @ ref.K[:, M - N:].T, axis=1)
    fac = expansion_factors(X, spec)
    W1 = pow_multi_table(fac.v, enumerate_graded(d, min_jmax(d, N)).indices[:N])
    const = truncation_const(j_max, omega_weights(W1), fac, spec.t, enumerate_graded(d, j_max))
    bound = np.array([delta_psi_bound(x, j_max, const, spec.with_jmax(j_max)) for x in X])
    return true, bound


def random_bound_configs(n, seed):
    """Random small instances: d in {1, 2}, N <= 12, eps in [0.05, 1], t in {0.4, 0.7}, gamma in {1, 3.5}."""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        d = int(rng.integers(1, 3))
        N = int(rng.integers(2, 13))
        eps = float(np.exp(rng.uniform(np.log(0.05), 0.0)))
        t = float(rng.choice([0.4, 0.7]))
        gamma = float(rng.choice([1.0, 3.5]))
        X = rng.uniform(-1, 1, (N, d))
        j = min_jmax(d, N) + int(rng.integers(0, 6))
        yield X, BasisSpec.isotropic(eps, gamma, t, np.zeros(d), 0), j


def tail_lemma_gap(y, j, terms=80):
    """``rhs - lhs`` of the exponential-tail inequality for one ``y >= 0``."""
    from scipy.special import gammaln

    y = np.asarray(y, dtype=float)
    d = y.size
    idx = enumerate_graded(d, j + terms)
    L = idx.indices
    deg = idx.degrees
    with np.errstate(divide="ignore", invalid="ignore"):
        logy = np.log(y)
        logterm = np.where(L == 0, 0.0, L * logy[None, :]).sum(axis=1) - gammaln(L + 1.0).sum(axis=1)
    term = np.exp(logterm)
    lhs = term[deg >= j].sum()
    rhs = np.exp(y.sum()) * term[deg == j].sum()
    return rhs - lhs, lhs


def refined_direct(X, f, Z, eps, sweeps=4):
    """Gaussian interpolant with the residual formed in extended precision.

    Plain LU in double loses about ``cond * 1e-16``; a few refinement sweeps
    with a long-double residual recover the exact interpolant of the data.
    """
    import scipy.linalg as sla

    def gauss(A, B):
        return np.exp(-(eps * eps) * ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=-1))

    Xl, Zl, fl = (np.asarray(a, dtype=np.longdouble) for a in (X, Z, f))
    P = gauss(Xl, Xl)
    lu = sla.lu_factor(P.astype(float))
    c = sla.lu_solve(lu, np.asarray(f, dtype=float)).astype(np.longdouble)
    for _ in range(sweeps):
        c = c + sla.lu_solve(lu, (fl - P @ c).astype(float))
    return (gauss(Zl, Xl) @ c).astype(float)
