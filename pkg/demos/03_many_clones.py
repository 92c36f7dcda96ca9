from teleclone import ProtocolSpec, build, closed_form

# ### The large-M limit and N input copies
#
# With N copies of the input and of its conjugate, both are concentrated
# into single modes before the network. As M grows the fidelity settles at
# 4N/(4N+1), above the measure-and-prepare value 2N/(2N+1).
#
# A full network for M = 10^4 would need a 40000 x 40000 matrix. The first
# few outputs of each cascade do not depend on the later splitters, so only
# those are built (``n_outputs``) and they are exact.

M = 10 ** 4
for N in (1, 2, 3, 4):
    _, rep = build(ProtocolSpec("A-generalized", M, N=N, r=10.0), n_outputs=3)
    print(f"N = {N}: F_clone = {rep.fidelity_clone:.6f}  "
          f"F_anti = {rep.fidelity_anticlone:.6f}  4N/(4N+1) = {4 * N / (4 * N + 1):.6f}")
    print("   ", rep.flags)

# Closed forms accept M = inf directly.
print("limit, N=1:", closed_form("A", float("inf")))

# With fewer clones than copies the splitter reflection changes sign; the
# gain stays at unity.
_, rep = build(ProtocolSpec("A-generalized", 1, N=3, r=1.0, x_in=1.0, p_in=-2.0))
print("M=1, N=3 clone mean:", rep.clone_states[0].mean, rep.flags)
