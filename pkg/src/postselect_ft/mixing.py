"""Convex-hull membership against bounded bitwise-independent distributions.

For rates ``p = (p_1, ..., p_n)`` the vertices are the 2**n product
distributions ``w·p`` (rate ``p_i`` on the wires set in ``w``, zero
elsewhere).  The coordinate of a distribution on vertex ``x`` is

    c_x = sum_{y ⊇ x} (-1)^{|y|-|x|} Pr[z ⊇ y] / prod_{i in y} p_i

so all coordinates come from a superset-sum, a pointwise division and a
signed superset (Möbius) transform: O(n 2^n) instead of a 4^n double sum.
The distribution is in the hull iff every coordinate is nonnegative.

Float mode carries the transforms and the coordinates in ``np.longdouble``.
The coordinates can be large and of both signs, so a float64 round trip
loses about ``eps * sum |c_x|``; extended precision keeps that well below
1e-12 at n = 14 on platforms where longdouble is wider than a double.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .distributions import (
    FLOAT,
    RATIONAL,
    DomainError,
    ErrorDistribution,
    as_mode,
    pattern_to_str,
    product_distribution,
    subset_products,
    superset_mobius,
    superset_sum,
)

CLAMP_BAND = 1e-12
WORK = np.longdouble


class ZeroRateInfeasible(Exception):
    """A wire has rate 0 in every vertex but carries error mass."""

    def __init__(self, wire: int, mass):
        super().__init__(f"wire {wire} has p=0 but error mass {mass}")
        self.wire = wire
        self.mass = mass


@dataclass(frozen=True, eq=False)
class MixtureDecomposition:
    params: tuple
    coeffs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def mode(self) -> str:
        return RATIONAL if self.coeffs.dtype == object else FLOAT

    @property
    def member(self) -> bool:
        return bool(all(c >= 0 for c in self.coeffs))

    def total(self):
        return sum(self.coeffs) if self.mode == RATIONAL else float(np.sum(self.coeffs))

    def support(self) -> dict[str, object]:
        return {pattern_to_str(w, self.n): c for w, c in enumerate(self.coeffs) if c != 0}


@dataclass(frozen=True)
class HullVerdict:
    member: bool
    worst_x: int
    worst_value: object
    n: int
    zero_rate_wire: int | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "worst_x": pattern_to_str(self.worst_x, self.n),
            "worst_value": _num_str(self.worst_value),
        }


def _num_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    return repr(float(v))


def _params(p: Sequence, n: int, mode: str) -> np.ndarray:
    if len(p) != n:
        raise DomainError(f"expected {n} rates, got {len(p)}")
    pv = as_mode(p, mode)
    for v in pv:
        if not 0 <= v <= 1:
            raise DomainError(f"rate {v} outside [0, 1]")
    return pv


def _work(values: np.ndarray, mode: str) -> np.ndarray:
    return values if mode == RATIONAL else np.asarray(values, dtype=WORK)


def _rate_products(pv: np.ndarray, n: int, mode: str) -> np.ndarray:
    if mode == RATIONAL:
        return subset_products(pv, n, mode)
    out = np.ones(1, dtype=WORK)
    for i in range(n):
        out = np.concatenate([out, out * WORK(pv[i])])
    return out


def vertex_distribution(w: int, p: Sequence, mode: str | None = None) -> ErrorDistribution:
    n = len(p)
    if not 0 <= w < (1 << n):
        raise DomainError(f"vertex {w} out of range for n={n}")
    zero = Fraction(0) if mode == RATIONAL or (
        mode is None and all(isinstance(v, Fraction) for v in p)) else 0.0
    q = [p[i] if (w >> i) & 1 else zero for i in range(n)]
    return product_distribution(q, mode)


def mixing_coefficients(dist: ErrorDistribution, p: Sequence,
                        clamp: bool = True) -> MixtureDecomposition:
    """Signed coordinates of ``dist`` over the vertices ``w·p``.

    Raises :class:`ZeroRateInfeasible` when some ``p_i = 0`` while wire i
    carries error mass.  Wires with ``p_i = 0`` and no mass are projected
    out (their vertices get coefficient 0).

    In float mode, if every negative coefficient lies within
    ``CLAMP_BAND`` of zero they are zeroed and the rest renormalized.
    """
    mode = dist.mode
    n = dist.n
    pv = _params(p, n, mode)
    up = superset_sum(_work(dist.probs, mode), n)
    for i in range(n):
        if pv[i] == 0 and up[1 << i] > 0:
            raise ZeroRateInfeasible(i, up[1 << i])
    denom = _rate_products(pv, n, mode)
    if mode == RATIONAL:
        ratio = np.empty(len(up), dtype=object)
        for y in range(len(up)):
            ratio[y] = up[y] / denom[y] if denom[y] != 0 else Fraction(0)
    else:
        ratio = np.zeros_like(up)
        nz = denom != 0
        ratio[nz] = up[nz] / denom[nz]
    coeffs = superset_mobius(ratio, n)
    if clamp and mode == FLOAT:
        neg = coeffs < 0
        if neg.any() and coeffs.min() >= -CLAMP_BAND:
            coeffs[neg] = 0.0
            coeffs /= coeffs.sum()
    return MixtureDecomposition(tuple(pv), coeffs)


def reconstruct(decomp: MixtureDecomposition) -> ErrorDistribution:
    """Sum of ``coeff_w · (w·p)`` over all vertices, via two lattice transforms."""
    n = decomp.n
    mode = decomp.mode
    pv = as_mode(decomp.params, mode)
    up = _rate_products(pv, n, mode) * superset_sum(_work(decomp.coeffs, mode), n)
    out = superset_mobius(up, n)
    return ErrorDistribution(n, out if mode == RATIONAL else out.astype(np.float64))


def _verdict_from(decomp: MixtureDecomposition, n: int) -> HullVerdict:
    c = decomp.coeffs
    if decomp.mode == RATIONAL:
        worst = min(range(len(c)), key=lambda k: (c[k], k))
    else:
        worst = int(np.argmin(c))
        return HullVerdict(bool(c[worst] >= 0), worst, float(c[worst]), n)
    return HullVerdict(bool(c[worst] >= 0), worst, c[worst], n)


def check_hull_membership(dist: ErrorDistribution, p: Sequence) -> HullVerdict:
    """Decide whether ``dist`` is a mixture of the vertices ``w·p``.

    In float mode a worst coefficient inside ``[-CLAMP_BAND, 0)`` counts as
    zero: it is below the rounding already present in the input, so an exact
    recomputation on the float values would only judge that rounding.
    """
    n = dist.n
    try:
        decomp = mixing_coefficients(dist, p, clamp=False)
    except ZeroRateInfeasible as exc:
        return HullVerdict(False, 1 << exc.wire, -exc.mass, n, zero_rate_wire=exc.wire)
    verdict = _verdict_from(decomp, n)
    if dist.mode == FLOAT and -CLAMP_BAND <= verdict.worst_value < 0:
        return HullVerdict(True, verdict.worst_x, float(verdict.worst_value), n)
    return verdict


def min_uniform_parameter(dist: ErrorDistribution, q_max: float = 1.0,
                          tol: float = 1e-9) -> float | None:
    """Smallest uniform rate q <= q_max certifying hull membership, or None.

    Bisection is sound because membership is monotone in q: each vertex at
    rate q is a per-wire mixture of vertices at any larger rate.  Returns an
    upper end of the final bracket, so the value always certifies.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not 0 <= q_max <= 1:
        raise DomainError("q_max must lie in [0, 1]")
    n = dist.n

    def ok(q: float) -> bool:
        return check_hull_membership(dist, [q] * n).member

    if ok(0.0):
        return 0.0
    if not ok(q_max):
        return None
    lo, hi = 0.0, float(q_max)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def decomposition_to_json(decomp: MixtureDecomposition, member: bool | None = None) -> dict:
    out = {
        "p": [_num_str(v) if decomp.mode == RATIONAL else float(v) for v in decomp.params],
        "coeffs": {k: _num_str(v) for k, v in decomp.support().items()},
        "member": decomp.member if member is None else member,
    }
    return out

