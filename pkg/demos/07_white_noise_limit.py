"""Fast-switching limit: telegraph noise degenerates into white noise.

Holding the diffusion strength delta1^2/nu fixed while nu grows, the full
doubled dynamics converges to a single effective generator that adds the
double-commutator dissipator -(delta1^2/nu)[J,[J,.]].  The deviation falls
off like 1/nu.
"""

import numpy as np

from qmpemba import (
    TimeGrid,
    embed,
    extended_generator,
    propagate_expm,
    white_noise_generator,
)
from qmpemba.threelevel import ThreeLevelParams, build_reference_system, initial_state, rtn_spec
from qmpemba.lindblad import vectorize

params = ThreeLevelParams()
W0, _, _ = build_reference_system(params)
p0 = vectorize(initial_state("beta"))
grid = TimeGrid(0.0, 10.0, 201)

diffusion = params.delta1 ** 2 / 10.0
spec_ref = rtn_spec(ThreeLevelParams(delta1=np.sqrt(diffusion * 10), nu=10.0))
eff = propagate_expm(white_noise_generator(W0, spec_ref), p0, grid).states

print(f"fixed diffusion strength delta1^2/nu = {diffusion:.4f}")
print("nu        delta1    max deviation")
prev = None
for nu in (10.0, 100.0, 1000.0):
    d1 = float(np.sqrt(diffusion * nu))
    spec = rtn_spec(ThreeLevelParams(delta1=d1, nu=nu))
    W = extended_generator(W0, spec)
    ext = propagate_expm(W, embed(p0), grid).states[:, :9]
    dev = np.abs(ext - eff).max()
    note = "" if prev is None else f"  (ratio {prev / dev:.1f})"
    print(f"{nu:7.0f}   {d1:6.3f}   {dev:.3e}{note}")
    prev = dev
