import numpy as np

from teleclone import ProtocolSpec, build_variant_B
from teleclone.gaussian import joint_covariance
from teleclone.protocols import variant_B_resource

# ### Clones and anticlones both teleported
#
# A second EPR pair replaces the conjugate input at the splitter. Two senders
# measure: one pairs the input with the reflected port, the other pairs the
# conjugate with the second EPR half. Each receiver gets a gain-weighted sum
# of both records.

for r2 in (0.0, 1.0, 10.0):
    _, rep = build_variant_B(ProtocolSpec("B", 3, r=1.0, r2=r2))
    print(f"r2 = {r2:4}: clone var {rep.clone_states[0].var_x:.6f} "
          f"anticlone var {rep.anticlone_states[0].var_x:.6f}")

# As r2 grows the second pair behaves like a perfect conjugate input and the
# single-pair values come back.

# ### The four-mode resource
#
# Before any measurement the senders and receivers share a Gaussian state on
# (a_EPR2, c1t, c1r, b_EPR2).

reg, T, modes = variant_B_resource(ProtocolSpec("B", 2, r=1.0))
V = joint_covariance(reg, T, modes)
np.set_printoptions(precision=4, suppress=True)
print(V)
