"""Node generation: Halton points, boundary clustering, boxes and the hyperbolic domain.

The hyperbolic domain is

    0.04 <= (x + 1.2)**2 - 4 y**2 <= 1,    x**2 + y**2 <= 1,

parameterized by ``(x, y) = (c cosh(s) - 1.2, c sinh(s) / 2)`` with
``c in [0.2, 1]``, so that ``(x + 1.2)**2 - 4 y**2 = c**2``.  By default
the ``s`` range of each branch runs up to where it leaves the unit disk, so
clustering in ``s`` puts nodes on the circular part of the boundary.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from hermitegf.errors import DimensionTooLarge, OutOfDomain, RejectionStalled

MAX_HALTON_DIM = 8
T_LIM = None
C_RANGE = (0.2, 1.0)


def halton(n: int, d: int, skip: int = 0) -> np.ndarray:
    """Points ``skip+1 .. skip+n`` of the (unscrambled) Halton sequence in ``(0, 1)^d``."""
    if d > MAX_HALTON_DIM:
        raise DimensionTooLarge(f"halton supports d <= {MAX_HALTON_DIM}, got {d}")
    if d < 1:
        raise ValueError("d must be >= 1")
    engine = qmc.Halton(d, scramble=False)
    # index 0 of the sequence is the origin
    engine.fast_forward(skip + 1)
    return engine.random(n)


def box_scale(points, lo, hi) -> np.ndarray:
    """Affine map from ``[0, 1]^d`` to the box ``[lo, hi]``."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (P.shape[1],))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (P.shape[1],))
    if np.any(lo >= hi):
        raise ValueError("box needs lo < hi componentwise")
    return lo + P * (hi - lo)


def cluster_boundary(points) -> np.ndarray:
    """Map ``u -> sin(pi u / 2)`` componentwise on ``[-1, 1]^d`` (clusters toward +-1)."""
    P = np.asarray(points, dtype=float)
    if np.any(np.abs(P) > 1.0):
        raise OutOfDomain("cluster_boundary expects coordinates in [-1, 1]")
    return np.sin(0.5 * np.pi * P)


def halton_box(n: int, d: int, lo=-1.0, hi=1.0, clustered: bool = False, skip: int = 0) -> np.ndarray:
    """Halton nodes in a box, optionally clustered toward the boundary."""
    P = box_scale(halton(n, d, skip), -1.0, 1.0)
    if clustered:
        P = cluster_boundary(P)
    return box_scale((P + 1.0) / 2.0, lo, hi)


def hyperbola_map(c, s) -> np.ndarray:
    """Map parameters ``(c, s)`` onto the hyperbola ``(x + 1.2)**2 - 4 y**2 = c**2``."""
    c = np.asarray(c, dtype=float)
    s = np.asarray(s, dtype=float)
    return np.stack([c * np.cosh(s) - 1.2, 0.5 * c * np.sinh(s)], axis=-1)


def in_hyperbolic_domain(points, atol: float = 1e-12) -> np.ndarray:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = P[:, 0], P[:, 1]
    h = (x + 1.2) ** 2 - 4.0 * y ** 2
    return (h >= 0.04 - atol) & (h <= 1.0 + atol) & (x * x + y * y <= 1.0 + atol)


def disk_exit(c) -> np.ndarray:
    """Parameter ``s > 0`` at which the branch ``c`` crosses the unit circle."""
    c = np.asarray(c, dtype=float)
    # (c u - 1.2)**2 + c**2 (u**2 - 1) / 4 = 1 with u = cosh(s)
    u = (2.4 + np.sqrt(3.56 + 1.25 * c * c)) / (2.5 * c)
    return np.arccosh(np.maximum(u, 1.0))


def _params_to_points(U, clustered, t_lim):
    # U in [0, 1]^2 -> (c, s) -> hyperbolic domain candidates
    V = 2.0 * U - 1.0
    if clustered:
        V = cluster_boundary(V)
    c = C_RANGE[0] + (V[:, 0] + 1.0) / 2.0 * (C_RANGE[1] - C_RANGE[0])
    s_max = disk_exit(c) if t_lim is None else t_lim
    return hyperbola_map(c, s_max * V[:, 1])


def hyperbolic_nodes(n: int, clustered: bool = True, grid_based: bool = False,
                     t_lim: float | None = T_LIM) -> np.ndarray:
    """Nodes in the hyperbolic domain.

    With ``t_lim=None`` branch ``c`` is sampled for ``|s| <= disk_exit(c)``.
    A number instead samples ``|s| <= t_lim`` on every branch and relies on
    rejection to clip at the disk.

    Halton-based (``grid_based=False``): draw parameter pairs from the Halton
    sequence, map and reject until ``n`` points are accepted.

    Grid-based: a uniform ``m x m`` parameter grid with ``m = ceil(sqrt(n))``
    is mapped and clipped; the surviving points (fewer than ``n``) are returned.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if grid_based:
        m = int(np.ceil(np.sqrt(n)))
        g = np.linspace(0.0, 1.0, m)
        U = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        P = _params_to_points(U, clustered, t_lim)
        return P[in_hyperbolic_domain(P, atol=1e-12)]
    accepted = []
    count = 0
    drawn = 0
    batch = max(4 * n, 256)
    while count < n:
        U = halton(batch, 2, skip=drawn)
        drawn += batch
        P = _params_to_points(U, clustered, t_lim)
        P = P[in_hyperbolic_domain(P, atol=1e-12)]
        accepted.append(P)
        count += P.shape[0]
        if drawn >= 100_000 and count < 0.01 * drawn:
            raise RejectionStalled(f"acceptance rate {count / drawn:.2%} below 1%")
    return np.concatenate(accepted)[:n]
