"""Degree-one vortex profile, its Jacobi fields, and the glued multi-vortex field.

Run: python3 demos/03_profile_and_field.py   (writes demos/field_n2.svg)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vortexforge.export import write_svg
from vortexforge.field import (
    boundary_winding, check_field_symmetry, error_field, make_sampler, sample_field,
    vortex_windings,
)
from vortexforge.glprofile import jacobi_field_residual, mode_classify, near_zero_check, solve_profile

pt = solve_profile(1, 100.0)
print(f"kappa = {pt.kappa:.11f}, S(10) = {pt(np.array([10.0]))[0]:.6f}")
nz = near_zero_check(pt)
print(f"near zero: S/(kappa r) - 1 ~ {nz['r2_coefficient']:.4f} r^2, remainder slope {nz['slope']:.2f}")

for which in ("Phi0", "PhiPlus1"):
    res = [jacobi_field_residual(solve_profile(1, 100.0, 1e-10, h), which) for h in (0.02, 0.01, 0.005)]
    print(which, "residuals", ["%.1e" % r for r in res])

m0 = mode_classify(pt, 0)
print("n=0 imaginary mode:", m0.growth_class, "c2 = %.3f" % m0.details["c2"].real)
print("n=2 exponents near 0:", [round(e, 3) for e in mode_classify(pt, 2).details["exponents"]])

fs = make_sampler(2, 0.05, profile=pt)
U = sample_field(fs)
print("\nsymmetry deviations:", check_field_symmetry(fs))
print("boundary winding:", boundary_winding(fs, U), " vortex windings:", vortex_windings(fs))
err = error_field(fs)
print(f"far-field slopes: |E| {err['abs_slope']:.2f}, Im E {err['imag_slope']:.2f}")

ext = [fs.grid.x[0], fs.grid.x[-1], fs.grid.y[0], fs.grid.y[-1]]
fig, ax = plt.subplots(figsize=(5, 5))
ax.imshow(np.angle(U), origin="lower", extent=ext, cmap="twilight")
ax.set_title("arg u, n = 2, epsilon = 0.05")
write_svg(Path(__file__).with_name("field_n2.svg"), fig)
