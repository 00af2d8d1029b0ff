"""Search teleporter orders for the cheapest factory reaching a target.

Run with ``python3 notebooks/04_factory_resources.py``.
"""
# %% Grid over adding and re-encoding orders
from fractions import Fraction

from loqc_parity import gates

rows = gates.factory_grid(0.95)
for r in rows:
    print(r)

# %% Cheapest by Bell-state count
best = min((r for r in rows if r.w is not None), key=lambda r: r.bell_states)
print("cheapest:", best)

# %% Concatenated error reduction for comparison
for f0 in (Fraction(1, 4), Fraction(49, 100), Fraction(3, 5)):
    print(f0, [round(float(gates.klm_concat(f0, k)[0]), 6) for k in range(4)])
