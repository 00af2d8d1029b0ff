"""Published headline numbers kept alongside (never in place of) computed values."""
from __future__ import annotations

from typing import NamedTuple


class Reference(NamedTuple):
    value: float
    context: str
    note: str = ""


#: Encoded CNOT on two width-4 qubits, n_a=3, n_r=2, n_t=1.
RESOURCES_W4 = {
    "t_g": Reference(7.5, "n_a=3 n_r=2 n_t=1 w=4", "T_1/2 CNOT gate attempts"),
    "e_add": Reference(16.0, "n_a=3 n_r=2 n_t=1 w=4", "T_3/4 adding-encoder uses"),
    "e_re": Reference(
        5.7,
        "n_a=3 n_r=2 n_t=1 w=4",
        "T_2/3 re-encoder uses; the stage-mean formulas give 6.375",
    ),
}

#: Minimum primitive counts for a 95% encoded CNOT.
PRIMITIVES_95 = {
    "n_cs": Reference(90.0, "95% encoded CNOT", "physical CS gates; formula gives more"),
    "n_elim": Reference(32.0, "95% encoded CNOT", "elimination circuits; formula gives more"),
}

#: Minimum factory consumption over n_a, n_r with T_1/2 gate teleporters.
FACTORY_95 = {
    "bell_states": Reference(1300.0, "95% encoded CNOT, n_t=1", "minimum over n_a, n_r"),
    "elim_states": Reference(620.0, "95% encoded CNOT, n_t=1", "minimum over n_a, n_r"),
}

#: KLM concatenated-code claim: T_3/4 teleporters need a four-qubit code for >= 95% CS.
KLM_CS_95_WIDTH = Reference(
    4.0, "T_3/4 teleporters", "direct iteration of F_Z gives ~0.925 at two levels"
)

ELIMINATION_SUCCESS = Reference(12 / 441, "single- and dual-rail T_2/3 resource")
