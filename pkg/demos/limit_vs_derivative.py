"""Why the T -> infinity limit cannot be taken inside the derivative.

W_T(s) converges as T grows (its values settle onto a limit trajectory), yet
the magnitude of its derivative dW/ds = -K_T W_T does not shrink: the kernel
keeps oscillating with bounded amplitude.  A family with no off-diagonal
coupling shows the contrast, where both quantities vanish together.
"""

import numpy as np

from aqt import constant, formalism_gap, landau_zener

t_grid = (8.0, 16.0, 32.0, 64.0)

for name, fam in (("avoided crossing", landau_zener(delta=1.0, v=2.0)),
                  ("zero coupling", constant(np.diag([1.0, -1.0]).astype(complex)))):
    rep = formalism_gap(fam, t_grid)
    print(f"{name}:")
    print(f"  sup_s ||W_T - W_ref||: {['%.2e' % v for v in rep.w_convergence.values]}"
          f"  -> {rep.w_convergence.verdict}")
    print(f"  sup_s ||K_T W_T||:     {['%.2e' % v for v in rep.dW_magnitude.values]}"
          f"  -> {rep.dW_magnitude.verdict}")

print("\nconvergence of W with a non-vanishing derivative magnitude is the")
print("numerical face of the order-of-limits obstruction.")
