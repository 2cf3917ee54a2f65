"""Small dense state-vector simulator used as an independent check.

Circuits are lists of tuples over qubit labels:

    ("prep", q, "0" | "1" | "+" | "-")     add a fresh qubit
    ("cnot", c, t)
    ("x", q)
    ("measure", q, "z" | "x", outcome)       postselect one outcome, drop q
    ("postselect_z", [q, ...], ["00", ...])  project onto a span, keep qubits
    ("discard", [q, ...])                    drop qubits left in a product state

Amplitude index bit k belongs to the k-th live qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_QUBITS = 14
NORM_TOL = 1e-10
ZERO_BRANCH = 1e-14


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    qubits: tuple

    def __post_init__(self):
        nrm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(nrm - 1) > NORM_TOL:
            raise OracleError(f"state norm {nrm} is not 1")

    def reordered(self, order: Sequence) -> np.ndarray:
        """Amplitudes with bit k belonging to ``order[k]``."""
        pos = [self.qubits.index(q) for q in order]
        m = len(self.qubits)
        idx = np.arange(1 << m)
        new_idx = np.zeros_like(idx)
        for k, p in enumerate(pos):
            new_idx |= ((idx >> p) & 1) << k
        out = np.zeros_like(self.amplitudes)
        out[new_idx] = self.amplitudes
        return out


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def basis_state(bits: Sequence[int]) -> np.ndarray:
    out = np.zeros(1 << len(bits), dtype=complex)
    out[sum(b << k for k, b in enumerate(bits))] = 1
    return out


_PREP = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def _pos(live: list, q) -> int:
    try:
        return live.index(q)
    except ValueError:
        raise OracleError(f"qubit {q!r} is not live") from None


def _drop(vec: np.ndarray, pos: int, m: int, weights: tuple) -> np.ndarray:
    """Contract qubit ``pos`` against the bra with components ``weights``."""
    idx = np.arange(1 << (m - 1))
    low = idx & ((1 << pos) - 1)
    high = (idx >> pos) << (pos + 1)
    i0 = high | low
    i1 = i0 | (1 << pos)
    return np.conj(weights[0]) * vec[i0] + np.conj(weights[1]) * vec[i1]


def statevector_run(ops: Sequence[tuple], initial: Sequence[tuple] = ()):
    """Run a circuit; returns ``(postselection probability, PureState)``."""
    live: list = []
    vec = np.ones(1, dtype=complex)
    prob = 1.0
    for op in list(initial) + list(ops):
        name = op[0]
        m = len(live)
        if name == "prep":
            _, q, state = op
            if q in live:
                raise OracleError(f"qubit {q!r} prepared twice")
            if m + 1 > MAX_QUBITS:
                raise OracleError(f"more than {MAX_QUBITS} live qubits")
            vec = np.kron(_PREP[state], vec)
            live.append(q)
        elif name == "cnot":
            c, t = _pos(live, op[1]), _pos(live, op[2])
            if c == t:
                raise OracleError("CNOT on a single qubit")
            idx = np.arange(1 << m)
            new = np.empty_like(vec)
            new[idx ^ (((idx >> c) & 1) << t)] = vec
            vec = new
        elif name == "x":
            p = _pos(live, op[1])
            vec = vec[np.arange(1 << m) ^ (1 << p)]
        elif name == "measure":
            _, q, basis, outcome = op
            p = _pos(live, q)
            key = str(outcome)
            if basis == "x":
                key = {"0": "+", "1": "-"}.get(key, key)
            bra = tuple(_PREP[key])
            vec = _drop(vec, p, m, bra)
            live.pop(p)
            branch = float(np.vdot(vec, vec).real)
            if branch < ZERO_BRANCH:
                raise OracleError(f"postselected outcome {outcome} on {q!r} has zero probability")
            prob *= branch
            vec = vec / np.sqrt(branch)
        elif name == "postselect_z":
            _, qs, accepted = op
            pos = [_pos(live, q) for q in qs]
            idx = np.arange(1 << m)
            sub = np.zeros_like(idx)
            for k, p in enumerate(pos):
                sub |= ((idx >> p) & 1) << k
            ok = {int(s[::-1], 2) for s in accepted}
            vec = np.where(np.isin(sub, list(ok)), vec, 0)
            branch = float(np.vdot(vec, vec).real)
            if branch < ZERO_BRANCH:
                raise OracleError("postselected projector has zero probability")
            prob *= branch
            vec = vec / np.sqrt(branch)
        elif name == "discard":
            qs = list(op[1])
            pos = [_pos(live, q) for q in qs]
            rest = [k for k in range(m) if k not in pos]
            tensor = vec.reshape([2] * m)
            # numpy axes run from the highest bit down
            axes = [m - 1 - k for k in rest] + [m - 1 - k for k in pos]
            mat = np.transpose(tensor, axes).reshape(
                1 << len(rest), 1 << len(pos))
            u, s, vh = np.linalg.svd(mat)
            if len(s) > 1 and s[1] > 1e-9:
                raise OracleError(f"discarded qubits {qs} are entangled with the rest")
            kept = u[:, 0] * s[0]
            # rows of mat are indexed with rest[0] as the most significant axis
            vec = _rows_to_vec(kept, len(rest))
            live = [live[k] for k in rest]
        else:
            raise OracleError(f"unknown op {name!r}")
        nrm = float(np.vdot(vec, vec).real)
        if abs(nrm - 1) > NORM_TOL:
            raise OracleError(f"norm drifted to {nrm} after {op}")
    return prob, PureState(vec, tuple(live))


def _rows_to_vec(rows: np.ndarray, r: int) -> np.ndarray:
    """Row index has bit (r-1-k) for rest[k]; convert to bit k for rest[k]."""
    idx = np.arange(1 << r)
    out = np.zeros_like(rows)
    new_idx = np.zeros_like(idx)
    for k in range(r):
        new_idx |= ((idx >> (r - 1 - k)) & 1) << k
    out[new_idx] = rows
    return out
