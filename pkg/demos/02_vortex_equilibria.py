"""Point-vortex equilibria from the polynomial roots, and their nondegeneracy.

Run: python3 demos/02_vortex_equilibria.py
"""

import numpy as np

from vortexforge.field import solve_reduced
from vortexforge.vortex import max_residual, nondegeneracy_certificate, symmetric_config

print(" n   force residual   null dim   sigma_min/sigma_max   max kernel angle")
for n in range(1, 7):
    cfg = symmetric_config(n)
    cert = nondegeneracy_certificate(n)
    ratio = cert["sigma_min"] / cert["sigma_max"]
    print(f"{n:2d}   {max_residual(cfg):14.1e}   {cert['null_dim']:8d}   {ratio:19.2e}"
          f"   {max(cert['kernel_angles']):16.1e}")

# speed rescaling: roots scale by 1/mu, speed by mu
cfg2 = symmetric_config(4, mu=2)
print("\nmu = 2, n = 4 residual:", "%.1e" % max_residual(cfg2))

# the perturbed system moves the vortices linearly in the perturbation
n = 4
m = n * (n + 1) // 2
base = np.exp(1j * np.arange(m))
base /= np.linalg.norm(base)
print("\n  delta      displacement/delta   Newton iterations")
for delta in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
    res = solve_reduced(n, delta=delta * base)
    print(f"  {delta:<9g}  {res.displacement_from_seed / delta:18.6f}   {res.newton_iters}")
