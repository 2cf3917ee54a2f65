"""Translate gadgets into state-vector circuits with deterministic faults."""

from __future__ import annotations

from typing import Mapping

from ..gadgets import (
    CODESPACE_2,
    Discard,
    Gadget,
    InjectX,
    MeasurePostselect,
    NoisyCnot,
    PrepPlus,
    PrepZero,
)
from ..distributions import pattern_to_str


def gadget_circuit(g: Gadget, faults: Mapping[str, str] | None = None,
                   inputs: Mapping[int, str] | None = None,
                   flips: Mapping[str, bool] | None = None) -> list[tuple]:
    """Qubit-level circuit of ``g`` with chosen CNOT faults.

    ``faults`` maps a CNOT label to ``"XI"``, ``"IX"`` or ``"XX"``;
    unlisted CNOTs are ideal.  ``flips`` maps an ``inject_x`` label to
    whether the X is applied (rates are ignored).  ``inputs`` overrides the
    state prepared on a wire.  Measurements become postselections on the
    ideal outcome (0 or +); multi-wire codespace checks become a projection
    followed by discarding the check qubits.
    """
    faults = faults or {}
    flips = flips or {}
    inputs = inputs or {}
    ops: list[tuple] = []
    for loc in g.locations:
        if isinstance(loc, PrepZero):
            ops.append(("prep", loc.wire, inputs.get(loc.wire, "0")))
        elif isinstance(loc, PrepPlus):
            ops.append(("prep", loc.wire, inputs.get(loc.wire, "+")))
        elif isinstance(loc, NoisyCnot):
            ops.append(("cnot", loc.control, loc.target))
            f = faults.get(loc.label, "II")
            if f[0] == "X":
                ops.append(("x", loc.control))
            if f[1] == "X":
                ops.append(("x", loc.target))
        elif isinstance(loc, InjectX):
            if flips.get(loc.label, False):
                ops.append(("x", loc.wire))
        elif isinstance(loc, MeasurePostselect):
            if len(loc.wires) == 1:
                outcome = "+" if loc.basis == "x" else 0
                ops.append(("measure", loc.wires[0], loc.basis, outcome))
            else:
                k = len(loc.wires)
                accepted = sorted(pattern_to_str(m, k) for m in (loc.accept or CODESPACE_2))
                ops.append(("postselect_z", list(loc.wires), accepted))
                ops.append(("discard", list(loc.wires)))
        elif isinstance(loc, Discard):
            ops.append(("discard", list(loc.wires)))
    return ops
