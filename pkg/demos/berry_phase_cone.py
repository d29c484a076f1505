"""Berry phase of a spin precessing around a cone, against the solid angle.

The field traces a cone of half-angle theta once per sweep.  The holonomy of
either level should be half the enclosed solid angle, gamma = -/+ Omega / 2
with Omega = 2 pi (1 - cos theta), up to a sign fixed by the level.
"""

import numpy as np

from aqt import berry_phase, frame_trajectory, rotating_cone

print(f"{'theta/pi':>9}  {'level':>5}  {'gamma':>9}  {'Omega/2':>9}  {'error':>9}")
for theta in np.pi * np.array([1 / 6, 1 / 4, 1 / 3, 1 / 2, 2 / 3]):
    fam = rotating_cone(omega0=1.0, theta=theta)
    fr = frame_trajectory(fam, 8.0, 2048)
    half_omega = np.pi * (1.0 - np.cos(theta))
    for level in (0, 1):
        rep = berry_phase(fr, level)
        err = abs(abs(rep.berry_phase) - half_omega)
        print(f"{theta / np.pi:9.3f}  {level:5d}  {rep.berry_phase:9.5f}"
              f"  {half_omega:9.5f}  {err:9.2e}")

print("\nlower level carries +Omega/2, upper level -Omega/2 (mod 2 pi);")
print("the magnitude is gauge invariant and discretization-stable.")
