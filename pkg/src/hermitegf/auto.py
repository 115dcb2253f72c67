"""One-call interpolation: choose ``t`` and ``j_max``, then fit."""

from __future__ import annotations

import numpy as np

from hermitegf.basis import BasisSpec
from hermitegf.cutoff import CutoffConfig, CutoffResult, auto_t, choose_jmax
from hermitegf.errors import CriterionNotMet
from hermitegf.gaussian import as_points, as_shape_matrix
from hermitegf.stabilization import Interpolant, fit


def bbox_center(points) -> np.ndarray:
    """Midpoint of the bounding box, the default expansion center."""
    P = as_points(points)
    return 0.5 * (P.min(axis=0) + P.max(axis=0))


def fit_auto(colloc, f, E, G, x0=None, t: float | None = None,
             cfg: CutoffConfig | None = None, strict: bool = False):
    """Fit a Gaussian interpolant in the stable HermiteGF basis.

    Parameters
    ----------
    colloc : (N, d) array
        Collocation points, which are also the kernel centers.
    f : (N,) array
        Data values.
    E, G : scalar or (d, d) array
        Shape matrix of the Gaussians and scaling matrix of the Hermite
        functions.  Scalars mean multiples of the identity.
    x0 : (d,) array, optional
        Expansion center; defaults to the bounding-box midpoint.
    t : float, optional
        Fixed truncation parameter.  When omitted it is picked from
        ``cfg.t_grid`` by :func:`hermitegf.cutoff.auto_t`.
    strict : bool
        Raise :class:`CriterionNotMet` instead of returning a best-effort
        fit when the cut-off criterion cannot be met.

    Returns
    -------
    (Interpolant, CutoffResult)
    """
    X = as_points(colloc)
    d = X.shape[1]
    E = as_shape_matrix(E, d).matrix
    G = as_shape_matrix(G, d).matrix
    x0 = bbox_center(X) if x0 is None else np.asarray(x0, dtype=float)
    cfg = CutoffConfig() if cfg is None else cfg
    spec = BasisSpec(E, G, 0.5 if t is None else t, x0, 0)
    if t is None:
        try:
            _, result = auto_t(X, spec, cfg)
        except CriterionNotMet as exc:
            if strict:
                raise
            result = exc.result
    else:
        result = choose_jmax(X, spec, cfg, strict=strict)
    return fit(X, f, result.basis), result


def interpolate(colloc, f, evalpts, E, G, **kwargs) -> np.ndarray:
    """Fit with :func:`fit_auto` and evaluate at ``evalpts``."""
    ip: Interpolant
    ip, _ = fit_auto(colloc, f, E, G, **kwargs)
    return ip(evalpts)
