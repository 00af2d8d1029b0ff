"""Parity-encoded gates for linear-optics quantum computing.

Modules:

* :mod:`~loqc_parity.walk` - absorbing random walks of the incremental encoder
* :mod:`~loqc_parity.gates` - gate success, budgets and resource accounting
* :mod:`~loqc_parity.montecarlo` - seeded simulation of the gate algorithms
* :mod:`~loqc_parity.fock` - sparse Fock-state optics and teleporter resources
* :mod:`~loqc_parity.parity` - statevector model of the parity code
* :mod:`~loqc_parity.cli` - batch command line
"""
__version__ = "0.1.0"
