"""Scaled Hermite polynomials, Hermite functions and generating-function identities.

Physicists' convention throughout.  The scaled polynomials
``h~_l = h_l / sqrt(2**l l!)`` and the Hermite functions
``psi_l(y) = pi**(-1/4) h~_l(y) exp(-y**2/2)`` are both produced by the same
normalized three-term recurrence, which never overflows for the Hermite
functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from hermitegf.errors import DomainError
from hermitegf.multiindex import enumerate_graded

HERMITE_BOUND = 1.086435
PI_QUARTER = np.pi ** -0.25


@dataclass(frozen=True, eq=False)
class HermiteTable1D:
    points: np.ndarray
    j_max: int
    values: np.ndarray
    kind: str  # "scaled-polynomial" or "hermite-function"


def _recurrence(xs, j_max, start):
    out = np.empty((xs.shape[0], j_max + 1))
    out[:, 0] = start
    if j_max >= 1:
        out[:, 1] = np.sqrt(2.0) * xs * start
    for l in range(1, j_max):
        out[:, l + 1] = (np.sqrt(2.0 / (l + 1)) * xs * out[:, l]
                         - np.sqrt(l / (l + 1.0)) * out[:, l - 1])
    return out


def hermite_scaled_1d(xs, j_max: int) -> HermiteTable1D:
    """Scaled Hermite polynomials ``h_l(x) / sqrt(2**l l!)`` for ``l = 0..j_max``."""
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    values = _recurrence(xs, j_max, np.ones_like(xs))
    return HermiteTable1D(xs, j_max, values, "scaled-polynomial")


def hermite_function_1d(ys, j_max: int) -> HermiteTable1D:
    """Normalized Hermite functions ``psi_l(y)`` for ``l = 0..j_max``."""
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    values = _recurrence(ys, j_max, PI_QUARTER * np.exp(-0.5 * ys * ys))
    return HermiteTable1D(ys, j_max, values, "hermite-function")


def _log_norm_1d(j_max):
    # ln sqrt(2**m m!) for m = 0..j_max
    m = np.arange(j_max + 1, dtype=float)
    return 0.5 * (m * np.log(2.0) + gammaln(m + 1.0))


def generating_oracle(a, b, j_max: int):
    """Partial sum and closed form of the multivariate Hermite generating function.

    Returns ``(sum_{|l|<=j_max} a**l / l! * h_l(b), exp(2 b.a - a.a))``.
    The unscaled ``h_l`` are recovered from scaled values in log space.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    d = a.shape[0]
    m = np.arange(j_max + 1, dtype=float)
    lognorm = _log_norm_1d(j_max)
    factors = []
    for i in range(d):
        hs = hermite_scaled_1d(b[i:i + 1], j_max).values[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            loga = np.log(abs(a[i]))
            # a**m / m! * h_m = sign * exp(m ln|a| + ln sqrt(2**m m!) - ln m!) * h~_m
            logmag = np.where(m == 0, 0.0, m * loga) + lognorm - gammaln(m + 1.0)
        sign = np.where((a[i] < 0) & (m % 2 == 1), -1.0, 1.0)
        factors.append(sign * np.exp(logmag) * hs)
    idx = enumerate_graded(d, j_max).indices
    terms = np.ones(idx.shape[0])
    for i in range(d):
        terms = terms * factors[i][idx[:, i]]
    closed = float(np.exp(2.0 * b @ a - a @ a))
    return float(terms.sum()), closed


def mehler_partial(x, y, t: float, j_max: int) -> float:
    """``sum_{|l|<=j_max} t**|l| h~_l(x) h~_l(y)`` (Mehler partial sum in scaled form)."""
    _check_t(t)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    d = x.shape[0]
    tw = t ** np.arange(j_max + 1, dtype=float)
    idx = enumerate_graded(d, j_max).indices
    terms = np.ones(idx.shape[0])
    for i in range(d):
        hx = hermite_scaled_1d(x[i:i + 1], j_max).values[0]
        hy = hermite_scaled_1d(y[i:i + 1], j_max).values[0]
        terms = terms * (tw * hx * hy)[idx[:, i]]
    return float(terms.sum())


def mehler_closed(x, y, t: float, d: int | None = None) -> float:
    """Closed form of the multivariate Mehler (bilinear generating) formula."""
    _check_t(t)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if d is None:
        d = x.shape[0]
    s = 1.0 - t * t
    expo = (t / s) * 2.0 * (x @ y) - (t * t / s) * (x @ x + y @ y)
    return float(np.exp(expo) / s ** (d / 2.0))


def hlim(x, spec) -> float:
    """Closed-form squared norm ``sum_l H_l(x)**2`` of the full HermiteGF vector.

    ``spec`` supplies ``E``, ``G`` and ``t``.  The argument is used as given
    (no shift by the expansion center).
    """
    t = spec.t
    _check_t(t)
    E = np.asarray(spec.E, dtype=float)
    G = np.asarray(spec.G, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.shape[0]
    Ex = E @ x
    Gx = G.T @ x
    expo = -2.0 * (Ex @ Ex) + 2.0 * t * (Gx @ Gx) / (1.0 + t)
    return float(np.exp(expo) / (1.0 - t * t) ** (d / 2.0))


def _check_t(t):
    if not (0.0 < t < 1.0):
        raise DomainError(f"t must lie in (0, 1), got {t}")
