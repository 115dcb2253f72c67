"""Stable Gaussian RBF interpolation in the flat limit via the HermiteGF expansion."""

from hermitegf.auto import fit_auto, interpolate
from hermitegf.basis import BasisSpec, expansion_factors, hermitegf_eval
from hermitegf.cutoff import CutoffConfig, CutoffResult, auto_t, choose_jmax, legacy_jmax
from hermitegf.errors import HermiteGFError
from hermitegf.gaussian import ShapeMatrix, gaussian_matrix, rbf_direct_eval, rbf_direct_fit
from hermitegf.stabilization import Interpolant, StableBasis, build_stable_basis, evaluate, fit

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "CutoffConfig",
    "CutoffResult",
    "HermiteGFError",
    "Interpolant",
    "ShapeMatrix",
    "StableBasis",
    "auto_t",
    "build_stable_basis",
    "choose_jmax",
    "evaluate",
    "expansion_factors",
    "fit",
    "fit_auto",
    "gaussian_matrix",
    "hermitegf_eval",
    "interpolate",
    "legacy_jmax",
    "rbf_direct_eval",
    "rbf_direct_fit",
]
