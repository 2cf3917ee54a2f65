"""Independent verifiers: exact elimination, an LP, and a state-vector simulator."""

from .circuits import gadget_circuit
from .elimination import CapacityError, brute_force_decompose
from .lp import LPReport, lp_membership
from .statevector import OracleError, PureState, basis_state, fidelity, statevector_run

__all__ = [
    "CapacityError",
    "LPReport",
    "OracleError",
    "PureState",
    "basis_state",
    "brute_force_decompose",
    "fidelity",
    "gadget_circuit",
    "lp_membership",
    "statevector_run",
]
