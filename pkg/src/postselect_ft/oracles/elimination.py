"""Hull decomposition by solving the vertex linear system directly.

Builds the 2^n x 2^n matrix whose columns are the vertex distributions,
entry by entry from the product formula, and solves it with exact
Fraction Gaussian elimination.  Shares no code with the lattice-transform
route in :mod:`postselect_ft.mixing`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..distributions import ErrorDistribution

MAX_WIRES = 6


class CapacityError(ValueError):
    pass


def vertex_matrix(p: Sequence[Fraction]) -> list[list[Fraction]]:
    n = len(p)
    size = 1 << n
    mat = [[Fraction(0)] * size for _ in range(size)]
    for w in range(size):
        for z in range(size):
            pr = Fraction(1)
            for i in range(n):
                rate = p[i] if (w >> i) & 1 else Fraction(0)
                pr *= rate if (z >> i) & 1 else 1 - rate
                if pr == 0:
                    break
            mat[z][w] = pr
    return mat


def solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan with first-nonzero pivoting; raises on a singular system."""
    size = len(rhs)
    aug = [row[:] + [b] for row, b in zip(mat, rhs)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular vertex matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pr = aug[col]
        inv = 1 / pr[col]
        if inv != 1:
            aug[col] = pr = [v * inv for v in pr]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                row = aug[r]
                aug[r] = [a - f * b for a, b in zip(row, pr)]
    return [aug[r][size] for r in range(size)]


def brute_force_decompose(dist: ErrorDistribution, p: Sequence) -> dict:
    """Exact vertex coordinates of ``dist``.

    Returns ``{"member", "coeffs", "zero_rate_wire"}``.  Wires with rate 0
    and no error mass are projected out; rate 0 with mass makes the instance
    infeasible (``coeffs`` is then ``None``).
    """
    n = dist.n
    if n > MAX_WIRES:
        raise CapacityError(f"brute-force decomposition supports n <= {MAX_WIRES}")
    pf = [Fraction(v) for v in p]
    target = [Fraction(v) for v in dist.probs]
    zero = [i for i in range(n) if pf[i] == 0]
    for i in zero:
        mass = sum(t for z, t in enumerate(target) if (z >> i) & 1)
        if mass > 0:
            return {"member": False, "coeffs": None, "zero_rate_wire": i}
    keep = [i for i in range(n) if pf[i] != 0]
    # restrict to patterns supported on the kept wires
    sub_patterns = []
    for s in range(1 << len(keep)):
        sub_patterns.append(sum(1 << keep[k] for k in range(len(keep)) if (s >> k) & 1))
    sol = solve_exact(vertex_matrix([pf[i] for i in keep]), [target[z] for z in sub_patterns])
    coeffs = [Fraction(0)] * (1 << n)
    for s, z in enumerate(sub_patterns):
        coeffs[z] = sol[s]
    return {"member": all(c >= 0 for c in coeffs), "coeffs": coeffs, "zero_rate_wire": None}
