"""Error classes on the 4-block encoded Bell pair, modulo the all-flip XXXX.

``|0000> + |1111>`` is invariant under flipping all four blocks, so a 4-wire
error pattern ``x`` and ``x ^ 1111`` act identically.  The eight classes are
named in X-string notation; the canonical representative is a minimum-weight
member, and for the weight-2 ties the member with an X on wire 0.

The embedding back into ``{0,1}^4`` gives each class's mass to its
minimum-weight strings, split evenly between the two strings of a weight-2
class.  It is linear, injective, and never touches weight-3 or weight-4
strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .distributions import (
    FLOAT,
    RATIONAL,
    DomainError,
    ErrorDistribution,
    as_mode,
    mix,
    pattern_from_str,
    pattern_to_str,
    weight,
)
from .mixing import (
    MixtureDecomposition,
    check_hull_membership,
    mixing_coefficients,
    reconstruct,
    vertex_distribution,
)

N_WIRES = 4
ALL_FLIP = 0b1111

CLASS_NAMES = ("IIII", "XIII", "IXII", "IIXI", "IIIX", "XXII", "XIXI", "XIIX")


def xstring_to_pattern(s: str) -> int:
    if len(s) != N_WIRES or any(ch not in "IX" for ch in s):
        raise DomainError(f"bad X-string {s!r}")
    return pattern_from_str(s.replace("I", "0").replace("X", "1"))


def pattern_to_xstring(x: int) -> str:
    return pattern_to_str(x, N_WIRES).replace("0", "I").replace("1", "X")


def _canonical_pattern(x: int) -> int:
    y = x ^ ALL_FLIP
    if weight(x) != weight(y):
        return x if weight(x) < weight(y) else y
    return x if x & 1 else y


CLASS_REPS = tuple(xstring_to_pattern(s) for s in CLASS_NAMES)
CLASS_INDEX = {rep: k for k, rep in enumerate(CLASS_REPS)}
# class index of every 4-bit pattern
PATTERN_CLASS = np.array([CLASS_INDEX[_canonical_pattern(x)] for x in range(16)])


@dataclass(frozen=True)
class QuotientClass:
    rep: int

    @property
    def name(self) -> str:
        return pattern_to_xstring(self.rep)

    @property
    def index(self) -> int:
        return CLASS_INDEX[self.rep]

    def members(self) -> tuple[int, int]:
        return (self.rep, self.rep ^ ALL_FLIP)


def canonicalize(x: int | str) -> QuotientClass:
    if isinstance(x, str):
        if len(x) != N_WIRES:
            raise DomainError(f"quotient classes need n=4, got {x!r}")
        x = pattern_from_str(x)
    if not 0 <= x < 16:
        raise DomainError(f"pattern {x} is not a 4-wire pattern")
    return QuotientClass(_canonical_pattern(x))


@dataclass(frozen=True, eq=False)
class QuotientDistribution:
    """Probabilities of the eight classes, in ``CLASS_NAMES`` order."""

    probs: np.ndarray

    def __post_init__(self):
        if self.probs.shape != (8,):
            raise DomainError("a quotient distribution has exactly 8 entries")
        self.probs.setflags(write=False)

    @property
    def mode(self) -> str:
        return RATIONAL if self.probs.dtype == object else FLOAT

    def __getitem__(self, name: str):
        return self.probs[CLASS_NAMES.index(name)]

    def total(self):
        return sum(self.probs) if self.mode == RATIONAL else float(np.sum(self.probs))

    def to_json(self) -> dict:
        return {
            name: (f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else repr(float(v)))
            for name, v in zip(CLASS_NAMES, self.probs)
            if v != 0
        }

    def __eq__(self, other):
        if not isinstance(other, QuotientDistribution):
            return NotImplemented
        return bool(np.all(self.probs == other.probs))

    def __repr__(self):
        return f"QuotientDistribution({self.to_json()})"


def make_quotient(masses: Mapping[str, object] | Sequence, mode: str | None = None) -> QuotientDistribution:
    if isinstance(masses, Mapping):
        for name in masses:
            if name not in CLASS_NAMES:
                raise DomainError(f"unknown class {name!r}; use canonical names {CLASS_NAMES}")
        vals = [masses.get(name, 0) for name in CLASS_NAMES]
    else:
        vals = list(masses)
    if mode is None:
        mode = RATIONAL if all(isinstance(v, (Fraction, int)) for v in vals) else FLOAT
    arr = as_mode(vals, mode)
    if any(v < 0 for v in arr):
        raise DomainError("class probabilities must be nonnegative")
    return QuotientDistribution(arr)


def quotient_of(dist: ErrorDistribution) -> QuotientDistribution:
    """Push a 4-wire distribution onto the classes (sums each class's two members)."""
    if dist.n != N_WIRES:
        raise DomainError(f"quotient map needs n=4, got n={dist.n}")
    out = as_mode([0] * 8, dist.mode)
    np.add.at(out, PATTERN_CLASS, dist.probs)
    return QuotientDistribution(out)


def embed_distribution(qd: QuotientDistribution) -> ErrorDistribution:
    mode = qd.mode
    half = Fraction(1, 2) if mode == RATIONAL else 0.5
    out = as_mode([0] * 16, mode)
    for k, rep in enumerate(CLASS_REPS):
        m = qd.probs[k]
        if weight(rep) == 2:
            out[rep] += m * half
            out[rep ^ ALL_FLIP] += m * half
        else:
            out[rep] += m
    return ErrorDistribution(N_WIRES, out)


def lift_decomposition(decomp: MixtureDecomposition):
    """Map each vertex ``w·p`` back to the classes.

    Returns ``(components, combined)`` where ``components`` is the list of
    ``(coefficient, QuotientDistribution)`` pairs with nonzero coefficient
    and ``combined`` their mixture.
    """
    if decomp.n != N_WIRES:
        raise DomainError("lifting needs a 4-wire decomposition")
    if not decomp.member:
        raise DomainError("cannot lift a decomposition with negative coefficients")
    mode = decomp.mode
    comps = []
    combined = as_mode([0] * 8, mode)
    for w, c in enumerate(decomp.coeffs):
        if c == 0:
            continue
        q = quotient_of(vertex_distribution(w, list(decomp.params), mode))
        comps.append((c, q))
        combined = combined + c * q.probs
    return comps, QuotientDistribution(combined)


# -- randomized verification -------------------------------------------------


def _random_quotient(rng: np.random.Generator, denominator: int = 97) -> QuotientDistribution:
    w = rng.integers(0, denominator, size=8)
    w[0] += denominator * 4
    tot = int(w.sum())
    return QuotientDistribution(as_mode([Fraction(int(v), tot) for v in w], RATIONAL))


def _random_hull_member(rng: np.random.Generator, p: list[Fraction]) -> QuotientDistribution:
    """A class distribution whose embedding passes the mixing test at rates p."""
    while True:
        singles = [Fraction(int(rng.integers(1, 40)), 400) for _ in range(4)]
        doubles = [Fraction(int(rng.integers(0, 20)), 4000) for _ in range(3)]
        rest = 1 - sum(singles) - sum(doubles)
        qd = QuotientDistribution(as_mode([rest, *singles, *doubles], RATIONAL))
        if check_hull_membership(embed_distribution(qd), p).member:
            return qd


def verify_embedding_properties(samples: int = 100, seed: int = 0,
                                p: Sequence | None = None) -> dict:
    """Randomized check of the properties that make hull membership transfer.

    Checks, all in exact rational arithmetic:
    linearity, injectivity on the eight class point masses, mass preservation,
    zero mass on weight >= 3 strings, that each vertex image is a product
    distribution on the classes, and that a hull decomposition of an embedded
    distribution lifts back to the original class distribution.
    """
    if samples <= 0:
        raise DomainError("samples must be positive")
    rng = np.random.default_rng(seed)
    p = [Fraction(1, 5)] * 4 if p is None else [Fraction(v) for v in p]
    violations: list[str] = []
    counts = dict.fromkeys(
        ["linearity", "injectivity", "mass", "support", "vertex_images", "transport"], 0)

    for _ in range(samples):
        a, b = _random_quotient(rng), _random_quotient(rng)
        lam = Fraction(int(rng.integers(0, 17)), 16)
        lhs = embed_distribution(QuotientDistribution(lam * a.probs + (1 - lam) * b.probs))
        rhs = mix([(lam, embed_distribution(a)), (1 - lam, embed_distribution(b))])
        counts["linearity"] += 1
        if lhs != rhs:
            violations.append(f"linearity: {a} {b} lam={lam}")
        e = embed_distribution(a)
        counts["mass"] += 1
        if e.total() != a.total():
            violations.append(f"mass: {a}")
        counts["support"] += 1
        if any(e.probs[x] != 0 for x in range(16) if weight(x) >= 3):
            violations.append(f"support: {a}")
        if quotient_of(e) != a:
            violations.append(f"left inverse: {a}")

    images = []
    for k in range(8):
        pm = [Fraction(0)] * 8
        pm[k] = Fraction(1)
        images.append(embed_distribution(QuotientDistribution(as_mode(pm, RATIONAL))))
        counts["injectivity"] += 1
    for i in range(8):
        for j in range(i + 1, 8):
            if images[i] == images[j]:
                violations.append(f"injectivity: {CLASS_NAMES[i]} ~ {CLASS_NAMES[j]}")

    for w in range(16):
        q = quotient_of(vertex_distribution(w, p, RATIONAL))
        counts["vertex_images"] += 1
        if q != _independent_flip_classes(_rates(w, p)):
            violations.append(f"vertex image: w={pattern_to_str(w, 4)}")

    for _ in range(samples):
        qd = _random_hull_member(rng, p)
        decomp = mixing_coefficients(embed_distribution(qd), p)
        counts["transport"] += 1
        if not decomp.member or reconstruct(decomp) != embed_distribution(qd):
            violations.append(f"transport decomposition: {qd}")
            continue
        _, lifted = lift_decomposition(decomp)
        if lifted != qd:
            violations.append(f"transport lift: {qd} -> {lifted}")

    return {"checked": counts, "violations": violations, "passed": not violations}


def _rates(w: int, p: Sequence) -> list:
    return [p[i] if (w >> i) & 1 else Fraction(0) for i in range(len(p))]


def _independent_flip_classes(rates: Sequence[Fraction]) -> QuotientDistribution:
    """Class probabilities of independent per-block flips, by direct enumeration."""
    out = [Fraction(0)] * 8
    for x in range(16):
        pr = Fraction(1)
        for i, r in enumerate(rates):
            pr *= r if (x >> i) & 1 else 1 - r
        out[canonicalize(x).index] += pr
    return QuotientDistribution(as_mode(out, RATIONAL))
