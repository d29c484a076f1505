"""Oscillatory integrals dying, quantitatively.

Three exhibits: the closed-form decay of int_0^1 e^{iTs} ds, the general
bounded-oscillation check for a product int g_T f, and the step-function
construction that turns the qualitative limit into an explicit T* for a
requested tolerance.
"""

import numpy as np

from aqt import appendix_chain, riemann_lebesgue_check, step_approximate


def g(T, s):
    return np.exp(1j * T * s)


t_grid = (8.0, 32.0, 128.0, 512.0)
print("closed form: |int e^{iTs} ds| = |e^{iT} - 1| / T")
for T in t_grid:
    print(f"  T={T:6.0f}: {abs(np.exp(1j * T) - 1.0) / T:.6e}")

rep = riemann_lebesgue_check(g, lambda s: s * (1.0 - s), t_grid, M=1.0)
print(f"\nproduct with f(s) = s(1-s): verdict {rep.product_series.verdict}, "
      f"slope {rep.product_series.slope:.3f}")
print(f"primitive sup decay: verdict {rep.primitive_series.verdict}, "
      f"slope {rep.primitive_series.slope:.3f}")

print("\nstep approximation of f(s) = s:")
for p in (4, 16, 64):
    _, err = step_approximate(lambda s: s, p)
    print(f"  p={p:3d} pieces: L1 error {err:.4e}  (expected 1/(4p) = {1 / (4 * p):.4e})")

chain = appendix_chain(lambda s: s, epsilon=1e-2, M=1.0)
print(f"\ntarget eps = {chain.epsilon}: p = {chain.pieces} pieces, "
      f"predicted T* = {chain.T_star:.0f}, "
      f"|int f g_T| there = {chain.integral_at_T_star:.2e} "
      f"({'inside' if chain.within_epsilon else 'outside'} tolerance)")
