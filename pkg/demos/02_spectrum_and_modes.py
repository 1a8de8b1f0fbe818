"""Spectral anatomy of the telegraph-noise dynamics.

With the coupling off, the doubled generator's spectrum is exactly the bare
spectrum plus a copy shifted down by nu.  Weak coupling moves every
eigenvalue only at second order, so the shifted copies survive as genuine
slow modes whenever nu is small.
"""

import numpy as np

from qmpemba import ThreeLevelParams, build_reference_system, decompose

params = ThreeLevelParams()
W0, _, W = build_reference_system(params)

data0 = decompose(W0)
dataW = decompose(W)

print("bare spectrum (sorted by decay rate):")
for lam in data0.eigenvalues:
    print(f"  {lam.real:+7.3f} {lam.imag:+6.2f}i")

print(f"\ndoubled spectrum at delta1={params.delta1}, nu={params.nu}:")
bare = data0.eigenvalues
for lam in dataW.eigenvalues:
    d_orig = np.abs(bare - lam).min()
    d_shift = np.abs(bare - params.nu - lam).min()
    tag = "original-like" if d_orig < d_shift else "shifted-like"
    print(f"  {lam.real:+8.4f} {lam.imag:+7.3f}i   {tag}")

slow = dataW.eigenvalues[1]
print(f"\nslowest nonsteady mode of the doubled system: {slow:.4f}")
print(f"bare slow mode: {data0.eigenvalues[1]:.4f}")
print("the noise has introduced a slower relaxation channel:",
      slow.real > data0.eigenvalues[3].real)
