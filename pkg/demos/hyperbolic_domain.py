"""Convergence in N on the hyperbolic domain.

Nodes are generated by mapping quasi-random parameters onto the confocal
family of hyperbolas and clipping to the unit disk.  The errors should fall
quickly as nodes are added.
"""

from hermitegf.experiments import ExperimentConfig, run_experiment

cfg = ExperimentConfig(experiment="iso2d-hyperbolic", N=[105, 171, 253, 351, 406], eps=[0.05],
                       direct=True)
for row in run_experiment(cfg):
    kind = "direct" if row.baseline else "QR    "
    print(f"{kind} N={row.N:<4} error={row.error:.2e} cond(Phi)={row.cond_phi:.1e} {row.flags}")
