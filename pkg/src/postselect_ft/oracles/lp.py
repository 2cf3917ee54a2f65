"""Hull membership as a linear program (HiGHS via scipy).

The margin program maximizes ``t`` subject to ``V lam = target`` and
``lam_w >= t`` for every vertex column of ``V``; the instance is feasible
iff the optimum is nonnegative.  For infeasible instances a Farkas vector
``y`` with ``V^T y >= 0`` and ``y . target < 0`` is returned as the
separating hyperplane.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from ..distributions import ErrorDistribution
from .elimination import CapacityError

MAX_WIRES = 6


@dataclass(frozen=True)
class LPReport:
    feasible: bool
    margin: float
    certificate: list

    def to_json(self) -> dict:
        return {
            "verdict": "feasible" if self.feasible else "infeasible",
            "certificate": {("lambda" if self.feasible else "hyperplane"): self.certificate},
            "margin": self.margin,
        }


def vertex_columns(p: Sequence[float]) -> np.ndarray:
    """Float vertex matrix, built independently of the exact oracle."""
    n = len(p)
    size = 1 << n
    z = np.arange(size)
    mat = np.ones((size, size))
    for w in range(size):
        for i in range(n):
            rate = float(p[i]) if (w >> i) & 1 else 0.0
            zi = (z >> i) & 1
            mat[:, w] *= np.where(zi == 1, rate, 1.0 - rate)
    return mat


def lp_membership(dist: ErrorDistribution, p: Sequence) -> LPReport:
    n = dist.n
    if n > MAX_WIRES:
        raise CapacityError(f"LP oracle supports n <= {MAX_WIRES}")
    target = dist.probs.astype(np.float64)
    mat = vertex_columns(p)
    size = 1 << n
    # variables: lam_0..lam_{size-1}, t
    c = np.zeros(size + 1)
    c[-1] = -1.0
    a_eq = np.hstack([mat, np.zeros((size, 1))])
    a_ub = np.hstack([-np.eye(size), np.ones((size, 1))])
    bounds = [(None, None)] * size + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(size), A_eq=a_eq, b_eq=target,
                  bounds=bounds, method="highs")
    if res.status == 2:
        # V is singular (some p_i = 0) and target is outside its range
        margin = -np.inf
    elif res.status != 0:
        raise RuntimeError(f"margin LP failed: {res.message}")
    else:
        margin = float(res.x[-1])
    if margin >= 0:
        return LPReport(True, margin, [float(v) + 0.0 for v in res.x[:-1]])
    farkas = linprog(target, A_ub=-mat.T, b_ub=np.zeros(size),
                     bounds=[(-1.0, 1.0)] * size, method="highs")
    if farkas.status != 0:
        raise RuntimeError(f"Farkas LP failed: {farkas.message}")
    return LPReport(False, margin, [float(v) + 0.0 for v in farkas.x])
