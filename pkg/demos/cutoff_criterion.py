"""How many HermiteGF functions does the stable basis need?

The analytic cut-off picks the smallest degree for which the truncation
bound drops below the tolerance.  The older rule, which thresholds the
D-quotients, is printed alongside.  The bound is then checked against the
truncation error measured with a much longer expansion.
"""

import numpy as np

from hermitegf.basis import BasisSpec, hermitegf_eval
from hermitegf.cutoff import CutoffConfig, choose_jmax
from hermitegf.pointsets import halton_box
from hermitegf.stabilization import build_stable_basis

X = halton_box(66, 2)

print("tol     eps    j_max  legacy  M")
for tol in (1e-2, 1e-6, 1e-10):
    for eps in (0.01, 0.1, 1.0):
        spec = BasisSpec.isotropic(eps, 3.5, 0.5, np.zeros(2), 0)
        res = choose_jmax(X, spec, CutoffConfig(tol=tol))
        print(f"{tol:<7g} {eps:<6g} {res.j_max:<6} {res.legacy_j_max:<7} {res.M}")

# measured truncation error against the bound, one case
spec = BasisSpec.isotropic(0.1, 3.5, 0.5, np.zeros(2), 0)
res = choose_jmax(X, spec, CutoffConfig(tol=1e-6))
ref = build_stable_basis(X, spec.with_jmax(res.j_max + 25), method="vandermonde")
H = hermitegf_eval(X, ref.spec)
N, M = X.shape[0], res.M
dpsi = np.linalg.norm(H[:, M:] @ ref.K[:, M - N:].T, axis=1)
print(f"\nj_max={res.j_max}: measured |dPsi| max {dpsi.max():.2e}, bound max {res.bound_values.max():.2e}")
