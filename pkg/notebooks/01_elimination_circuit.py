"""Walk through the optical elimination circuit step by step.

Run with ``python3 notebooks/01_elimination_circuit.py``.
"""
# %% Build the circuit exactly and show each intermediate state
from loqc_parity import fock

trace = fock.elimination_trace("single", exact=True)
for stage in ("mixed", "conditioned", "output"):
    print(f"--- {stage}")
    print(fock.dump_state(trace[stage]))

# %% Success probability and fidelity against the reference resource state
state, prob = fock.elim_resource("single", exact=True)
print("success probability:", prob)
print("fidelity with t_2:", fock.fidelity(state, fock.tn_reference(2)))

# %% The dual-rail variant succeeds with the same probability
dual, prob_dual = fock.elim_resource("dual", exact=True)
print("dual-rail probability:", prob_dual)
print(fock.dump_state(dual))

# %% Growing larger teleporter resources one Bell pair at a time
for n in range(1, 6):
    print(n, "fidelity", round(fock.fidelity(fock.build_tn(n), fock.tn_reference(n)), 12),
          "survival", (n + 2) / (2 * (n + 1)))
