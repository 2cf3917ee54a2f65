"""Exact distributions over X-error patterns on n wires.

Patterns are stored as integers: wire ``i`` is bit ``1 << i``.  In string
form wire 0 is the *leftmost* character, so ``"1000"`` is an X on wire 0
only and ``"0001"`` an X on wire 3.

Two numeric modes share one representation (a dense numpy vector of length
``2**n``): ``"float"`` uses float64, ``"rational"`` uses an object array of
:class:`fractions.Fraction`.  Every function here preserves the mode of its
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

MAX_WIRES = 24
FLOAT_SUM_TOL = 1e-12

FLOAT = "float"
RATIONAL = "rational"


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


# -- pattern helpers ---------------------------------------------------------


def pattern_from_str(s: str) -> int:
    if not s or any(ch not in "01" for ch in s):
        raise DomainError(f"bad error pattern {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def pattern_to_str(x: int, n: int) -> str:
    if not 0 <= x < (1 << n):
        raise DomainError(f"pattern {x} out of range for n={n}")
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def weight(x: int) -> int:
    return bin(x).count("1")


def bits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (idx >> i) & 1
    return out


# -- numeric mode helpers ----------------------------------------------------


def mode_of(arr: np.ndarray) -> str:
    return RATIONAL if arr.dtype == object else FLOAT


def as_mode(values: Iterable, mode: str) -> np.ndarray:
    """Convert ``values`` to a 1-d array in ``mode``.

    Float-to-rational conversion is exact (binary expansion of the float).
    """
    vals = list(values)
    if mode == RATIONAL:
        out = np.empty(len(vals), dtype=object)
        for k, v in enumerate(vals):
            out[k] = v if isinstance(v, Fraction) else Fraction(v)
        return out
    if mode == FLOAT:
        return np.array([float(v) for v in vals], dtype=np.float64)
    raise DomainError(f"unknown numeric mode {mode!r}")


def _zeros(size: int, mode: str) -> np.ndarray:
    if mode == RATIONAL:
        out = np.empty(size, dtype=object)
        out[:] = [Fraction(0)] * size
        return out
    return np.zeros(size, dtype=np.float64)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_WIRES:
        raise DomainError(f"wire count must be in [1, {MAX_WIRES}], got {n}")


# -- lattice transforms ------------------------------------------------------


def superset_sum(values: np.ndarray, n: int) -> np.ndarray:
    """Zeta transform over the subset lattice: ``out[y] = sum_{z ⊇ y} values[z]``.

    O(n 2^n); works for float and Fraction arrays alike.
    """
    out = np.array(values, copy=True)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 0, :] += view[:, 1, :]
    return out


def superset_mobius(values: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`superset_sum`: ``out[x] = sum_{y ⊇ x} (-1)^{|y|-|x|} values[y]``."""
    out = np.array(values, copy=True)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 0, :] -= view[:, 1, :]
    return out


def subset_products(factors: Sequence, n: int, mode: str) -> np.ndarray:
    """``out[y] = prod_{i in y} factors[i]`` for every pattern y."""
    one = Fraction(1) if mode == RATIONAL else 1.0
    out = as_mode([one], mode)
    f = as_mode(factors, mode)
    for i in range(n):
        out = np.concatenate([out, out * f[i]])
    return out


# -- the distribution type ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class ErrorDistribution:
    """Probability vector over all 2**n X-error patterns."""

    n: int
    probs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        if self.probs.shape != (1 << self.n,):
            raise DomainError(
                f"expected {1 << self.n} probabilities, got shape {self.probs.shape}"
            )
        self.probs.setflags(write=False)

    @property
    def mode(self) -> str:
        return mode_of(self.probs)

    def __getitem__(self, pattern: int | str):
        if isinstance(pattern, str):
            if len(pattern) != self.n:
                raise DomainError(f"pattern {pattern!r} has wrong length for n={self.n}")
            pattern = pattern_from_str(pattern)
        if not 0 <= pattern < len(self.probs):
            raise DomainError(f"pattern {pattern} out of range")
        return self.probs[pattern]

    def total(self):
        return sum(self.probs) if self.mode == RATIONAL else float(np.sum(self.probs))

    def is_normalized(self) -> bool:
        if self.mode == RATIONAL:
            return self.total() == 1
        return abs(self.total() - 1.0) <= FLOAT_SUM_TOL

    def to_mode(self, mode: str) -> "ErrorDistribution":
        if mode == self.mode:
            return self
        return ErrorDistribution(self.n, as_mode(self.probs, mode))

    def support(self) -> dict[str, object]:
        return {
            pattern_to_str(x, self.n): self.probs[x]
            for x in range(len(self.probs))
            if self.probs[x] != 0
        }

    def allclose(self, other: "ErrorDistribution", atol: float = 1e-12) -> bool:
        _same_n(self, other)
        a = self.probs.astype(np.float64)
        b = other.probs.astype(np.float64)
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, ErrorDistribution) or other.n != self.n:
            return NotImplemented
        return bool(np.all(self.probs == other.probs))

    def __repr__(self):
        shown = ", ".join(f"{k}: {v}" for k, v in list(self.support().items())[:8])
        return f"ErrorDistribution(n={self.n}, mode={self.mode}, {{{shown}}})"


def _same_n(a: ErrorDistribution, b: ErrorDistribution) -> None:
    if a.n != b.n:
        raise DomainError(f"dimension mismatch: n={a.n} vs n={b.n}")


def make_distribution(n: int, probs, mode: str | None = None, normalize_check: bool = True):
    """Build a distribution from a dense sequence or a ``{pattern: prob}`` mapping."""
    _check_n(n)
    if isinstance(probs, dict):
        if mode is None:
            mode = RATIONAL if all(isinstance(v, Fraction) for v in probs.values()) else FLOAT
        vec = _zeros(1 << n, mode)
        for key, val in probs.items():
            if isinstance(key, str):
                if len(key) != n:
                    raise DomainError(f"pattern {key!r} has wrong length for n={n}")
                key = pattern_from_str(key)
            vec[key] = Fraction(val) if mode == RATIONAL else float(val)
    else:
        probs = list(probs)
        if mode is None:
            mode = RATIONAL if all(isinstance(v, Fraction) for v in probs) else FLOAT
        vec = as_mode(probs, mode)
    if any(v < 0 for v in vec):
        raise DomainError("probabilities must be nonnegative")
    dist = ErrorDistribution(n, vec)
    if normalize_check and not dist.is_normalized():
        raise DomainError(f"probabilities sum to {dist.total()}, not 1")
    return dist


def point_mass(n: int, pattern: int | str = 0, mode: str = FLOAT) -> ErrorDistribution:
    if isinstance(pattern, str):
        pattern = pattern_from_str(pattern)
    vec = _zeros(1 << n, mode)
    vec[pattern] = Fraction(1) if mode == RATIONAL else 1.0
    return ErrorDistribution(n, vec)


def product_distribution(q: Sequence, mode: str | None = None) -> ErrorDistribution:
    """Bitwise-independent distribution with P(X on wire i) = q[i]."""
    q = list(q)
    n = len(q)
    _check_n(n)
    if mode is None:
        mode = RATIONAL if all(isinstance(v, Fraction) for v in q) else FLOAT
    qv = as_mode(q, mode)
    for v in qv:
        if not 0 <= v <= 1:
            raise DomainError(f"product parameter {v} outside [0, 1]")
    one = Fraction(1) if mode == RATIONAL else 1.0
    out = as_mode([one], mode)
    for i in range(n):
        out = np.concatenate([out * (one - qv[i]), out * qv[i]])
    return ErrorDistribution(n, out)


def upset_probabilities(dist: ErrorDistribution) -> np.ndarray:
    """All up-set probabilities ``Pr[z ⊇ y]`` at once, indexed by y."""
    return superset_sum(dist.probs, dist.n)


def upset_probability(dist: ErrorDistribution, y: int | str):
    """``Pr[{z : z ⊇ y}]`` for a single pattern y."""
    if isinstance(y, str):
        if len(y) != dist.n:
            raise DomainError(f"pattern {y!r} has wrong length for n={dist.n}")
        y = pattern_from_str(y)
    if not 0 <= y < (1 << dist.n):
        raise DomainError(f"pattern {y} out of range for n={dist.n}")
    idx = np.arange(1 << dist.n)
    return sum(dist.probs[(idx & y) == y])


def mix(components: Sequence[tuple[object, ErrorDistribution]]) -> ErrorDistribution:
    """Convex combination of distributions."""
    if not components:
        raise DomainError("empty mixture")
    n = components[0][1].n
    mode = components[0][1].mode
    total = Fraction(0) if mode == RATIONAL else 0.0
    acc = _zeros(1 << n, mode)
    for w, d in components:
        if d.n != n:
            raise DomainError("dimension mismatch in mixture")
        if w < 0:
            raise DomainError(f"negative mixture weight {w}")
        w = Fraction(w) if mode == RATIONAL else float(w)
        acc = acc + w * d.to_mode(mode).probs
        total += w
    if (mode == RATIONAL and total != 1) or (mode == FLOAT and abs(total - 1) > FLOAT_SUM_TOL):
        raise DomainError(f"mixture weights sum to {total}, not 1")
    return ErrorDistribution(n, acc)


def total_variation(a: ErrorDistribution, b: ErrorDistribution):
    _same_n(a, b)
    if a.mode == RATIONAL and b.mode == RATIONAL:
        return sum(abs(x - y) for x, y in zip(a.probs, b.probs)) / 2
    return 0.5 * float(np.sum(np.abs(a.probs.astype(float) - b.probs.astype(float))))


def marginal(dist: ErrorDistribution, wires: Sequence[int]) -> ErrorDistribution:
    """Marginal distribution on ``wires`` (new wire k is old wire ``wires[k]``)."""
    wires = list(wires)
    if len(set(wires)) != len(wires) or any(not 0 <= w < dist.n for w in wires):
        raise DomainError(f"bad wire list {wires}")
    idx = np.arange(1 << dist.n)
    new_idx = np.zeros_like(idx)
    for k, w in enumerate(wires):
        new_idx |= ((idx >> w) & 1) << k
    out = _zeros(1 << len(wires), dist.mode)
    np.add.at(out, new_idx, dist.probs)
    return ErrorDistribution(len(wires), out)


def random_distribution(n: int, rng: np.random.Generator, mode: str = FLOAT,
                        denominator: int = 64, sparsity: float = 0.0) -> ErrorDistribution:
    """Random distribution; rational mode draws integer weights over ``denominator``."""
    size = 1 << n
    if mode == RATIONAL:
        w = rng.integers(0, denominator + 1, size=size)
        if sparsity:
            w[rng.random(size) < sparsity] = 0
        if w.sum() == 0:
            w[0] = 1
        tot = int(w.sum())
        return ErrorDistribution(n, as_mode([Fraction(int(v), tot) for v in w], RATIONAL))
    w = rng.dirichlet(np.ones(size))
    if sparsity:
        w[rng.random(size) < sparsity] = 0
        if w.sum() == 0:
            w[0] = 1
        w = w / w.sum()
    return ErrorDistribution(n, w)
