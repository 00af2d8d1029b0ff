"""Compare the Monte Carlo estimates with the closed forms.

Run with ``python3 notebooks/03_monte_carlo_check.py``.
"""
# %% Report table for the reference configuration
from loqc_parity import montecarlo
from loqc_parity.gates import GateConfig
from loqc_parity.rng import RngStream

cfg = GateConfig(3, 2, 1, 4, 0.95)
rows = montecarlo.mc_report(cfg, 50_000, RngStream(7))
for r in rows:
    z = "" if r.z is None else f"{r.z:+.2f}"
    print(f"{r.quantity:24s} {r.source:16s} {r.analytic:12.5f} {r.empirical:12.5f} {z}")

# %% Same seed, same answer
a = montecarlo.sim_cnot(cfg, 10_000, RngStream(3))
b = montecarlo.sim_cnot(cfg, 10_000, RngStream(3))
print("reproducible:", a == b, a.success)
