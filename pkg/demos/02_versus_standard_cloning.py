import math

from teleclone import ProtocolSpec, baseline_standard_fidelity, build

# ### Phase-conjugate input against identical copies
#
# Standard telecloning from two identical copies reaches fidelity 1 for two
# clones, but for three or more clones the conjugate pair carries more
# usable information. Sweep M at three squeezing levels.

print(f"{'M':>3} {'r':>5} {'F_pci':>9} {'F_standard':>11}")
for r in (0.0, 1.0, 10.0):
    for M in range(2, 11):
        _, rep = build(ProtocolSpec("A", M, r=r))
        std, _ = baseline_standard_fidelity(M, 1, r)
        mark = "<" if rep.fidelity_clone < std else ">"
        print(f"{M:>3} {r:>5} {rep.fidelity_clone:9.6f} {mark} {std:9.6f}")

# At r = inf the standard scheme gives 2M/(3M-2): 1 at M=2, 6/7 at M=3.
print("standard, M=2:", baseline_standard_fidelity(2, 1, math.inf))
print("standard, M=3:", baseline_standard_fidelity(3, 1, math.inf))
