"""Shrink the shape parameter and watch the direct solve fall apart.

The Gaussian collocation matrix becomes numerically singular as eps -> 0,
while the HermiteGF-QR basis keeps a modest condition number and the
interpolant converges to its flat limit.

Run with ``python3 demos/flat_limit.py``.
"""

import numpy as np

from hermitegf import fit_auto
from hermitegf.experiments import error_metric, test_function
from hermitegf.gaussian import gaussian_matrix, rbf_direct_eval
from hermitegf.pointsets import halton_box

X = halton_box(66, 2)
Z = halton_box(500, 2, skip=66)
f, fz = test_function("fh", X), test_function("fh", Z)

print(f"{'eps':>8} {'cond(Phi)':>10} {'cond(Psi)':>10} {'err direct':>11} {'err QR':>10}  t     j_max")
for eps in np.logspace(0, -3, 7):
    Phi = gaussian_matrix(X, X, eps)
    cond_phi = np.linalg.cond(Phi)
    # lstsq keeps going where solve would refuse, which is the point here
    alpha = np.linalg.lstsq(Phi, f, rcond=None)[0]
    err_direct = error_metric(fz, rbf_direct_eval(alpha, Z, X, eps))

    ip, res = fit_auto(X, f, eps, 3.5, x0=np.zeros(2))
    err_qr = error_metric(fz, ip(Z))
    print(f"{eps:8.1e} {cond_phi:10.1e} {ip.cond:10.1e} {err_direct:11.2e} {err_qr:10.2e}  "
          f"{res.t:.2f}  {res.j_max}")
