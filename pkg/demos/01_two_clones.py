import numpy as np

from teleclone import ProtocolSpec, build_variant_A

# ### Two clones and two anticlones from one EPR pair
#
# The sender holds a coherent state and its phase conjugate. The conjugate is
# mixed with one half of an EPR pair on a weakly reflecting splitter, the
# coherent input is jointly measured with the reflected port, and the results
# are fed forward. Clones appear at remote receivers, anticlones stay local.

spec = ProtocolSpec("A", M=2, r=10.0, x_in=2.0, p_in=4.0)
T, rep = build_variant_A(spec)

print("reflectivity R =", spec.R)
print("gains g1, g2 =", spec.g1, spec.g2)

# Every output is a Gaussian state; print its mean and covariance.
for name, states in (("clone", rep.clone_states), ("anticlone", rep.anticlone_states)):
    for k, st in enumerate(states):
        print(f"{name} {k}: mean = {st.mean}, cov =\n{np.round(st.cov, 12)}")

# With strong squeezing both fidelities sit at 16/17.
print("F_clone     =", rep.fidelity_clone, " closed form:", rep.fidelity_clone_formula)
print("F_anticlone =", rep.fidelity_anticlone, " closed form:", rep.fidelity_anticlone_formula)
print("16/17       =", 16 / 17)

# ### Without entanglement
#
# At r = 0 the clones pay an extra 2/M units of noise while the local
# anticlones do not depend on r at all.

for r in (0.0, 0.5, 1.0, 10.0):
    _, rep = build_variant_A(spec.with_(r=r))
    print(f"r = {r:4}: F_clone = {rep.fidelity_clone:.6f}  F_anti = {rep.fidelity_anticlone:.6f}")

# The network itself: a linear map on the input quadratures whose retained
# rows keep the canonical commutators.
print("symplectic residual:", rep.symplectic_residual)
print("transform shape:", T.matrix.shape)
