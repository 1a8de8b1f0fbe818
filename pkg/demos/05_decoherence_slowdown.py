"""Noise that slows decoherence down.

The coherence relative entropy of the beta state decays at roughly twice
the 1-3 coherence rate.  Without noise that is steep; with telegraph noise
the shifted slow mode keeps feeding the coherence, so after a turning point
the log-curve flattens dramatically.  Smaller nu flattens it further;
stronger coupling moves the turning point earlier.
"""

from qmpemba import run_scenario

bundle = run_scenario("fig2")
rep = bundle.report

print("curve            tail slope   turning point")
for label in rep["curves"]:
    tail = rep["tail_rates"][label]
    turn = rep["turning_points"][label]
    print(f"{label:16s} {tail:+9.3f}   {turn:8.3f}")

print("\nreadings:")
print(" - every noisy tail is flatter than the noise-free one")
print(" - halving nu flattens the tail further (slow mode at lambda_2 - nu)")
print(" - raising the coupling strength pulls the turning point earlier")
