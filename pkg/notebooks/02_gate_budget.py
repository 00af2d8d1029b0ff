"""Gate success probability and the width needed to reach a target.

Run with ``python3 notebooks/02_gate_budget.py``.
"""
# %% Gate budget against code width for matched teleporter orders
from loqc_parity import gates
from loqc_parity.gates import GateConfig

for n in (1, 2, 3, 4):
    row = [gates.gate_budget(GateConfig(n, n, 1, w, 0.99)) for w in (1, 5, 10, 20, 30)]
    print(f"n_a = n_r = {n}:", " ".join(f"{x:.4f}" for x in row))

# %% Success probabilities at the reference configuration
cfg = GateConfig(3, 2, 1, 4, 0.95)
print("single-qubit gate:", gates.p_gate_single(cfg))
print("cnot (approximate):", gates.p_gate_cnot(cfg))
print("cnot (exact):", gates.p_gate_cnot_exact(cfg))
print("smallest width for 0.95:", gates.solve_min_w(0.95, GateConfig(3, 2, 1, None, 0.95)))

# %% Expected primitive usage and resource totals
print(gates.expected_uses(cfg))
print(gates.resource_count(cfg))
