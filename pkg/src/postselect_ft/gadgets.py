"""Exact propagation of X-error distributions through postselected gadgets.

A gadget is a list of locations applied to a Pauli frame of X errors.  The
ideal circuit is never simulated here: every gate in scope maps X patterns
to X patterns, so it is enough to track the error distribution.

Conventions:

* ``noisy_cnot`` applies the ideal CNOT (an X on the control is copied onto
  the target) and then an XI / IX / XX fault, first letter on the control.
* ``measure_postselect`` keeps the shots whose X pattern on the measured
  wires lies in ``accept`` (``None`` accepts everything).  It also carries
  the probability of the postselected ideal branch (1/2 for a ⟨0| or ⟨+|
  on a maximally mixed qubit) and optional byproducts: an X on a measured
  wire selects the other ideal branch, which is the accepted branch up to
  X on the listed wires.
* Wires enter the frame at their ``prep`` and leave it when measured or
  discarded.  The output distribution is over ``output_wires`` in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .distributions import (
    FLOAT,
    RATIONAL,
    DomainError,
    ErrorDistribution,
    as_mode,
    marginal,
    pattern_from_str,
    pattern_to_str,
)


class GadgetAborts(RuntimeError):
    """Every branch of a postselected measurement is rejected."""


# -- locations ---------------------------------------------------------------


@dataclass(frozen=True)
class PrepZero:
    wire: int
    label: str = ""
    kind = "prep_zero"


@dataclass(frozen=True)
class PrepPlus:
    wire: int
    label: str = ""
    kind = "prep_plus"


@dataclass(frozen=True)
class NoisyCnot:
    control: int
    target: int
    p_xi: object = 0
    p_ix: object = 0
    p_xx: object = 0
    label: str = ""
    kind = "noisy_cnot"

    def __post_init__(self):
        if self.control == self.target:
            raise DomainError("CNOT control and target must differ")
        rates = (self.p_xi, self.p_ix, self.p_xx)
        if any(r < 0 for r in rates):
            raise DomainError(f"negative fault rate in {self}")
        if sum(rates) > 1:
            raise DomainError(f"fault rates of {self.label or 'CNOT'} sum above 1")

    @property
    def wires(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class InjectX:
    wire: int
    rate: object
    label: str = ""
    kind = "inject_x"

    def __post_init__(self):
        if not 0 <= self.rate <= 1:
            raise DomainError(f"injection rate {self.rate} outside [0, 1]")


@dataclass(frozen=True)
class MeasurePostselect:
    wires: tuple[int, ...]
    accept: frozenset | None = None
    ideal_probability: object = 1
    byproducts: tuple = ()
    basis: str = "z"
    label: str = ""
    kind = "measure_postselect"

    def __post_init__(self):
        if not 0 < self.ideal_probability <= 1:
            raise DomainError("ideal branch probability must lie in (0, 1]")
        for w, targets in self.byproducts:
            if w not in self.wires or any(t in self.wires for t in targets):
                raise DomainError(f"bad byproduct {w} -> {targets}")


@dataclass(frozen=True)
class Discard:
    wires: tuple[int, ...]
    label: str = ""
    kind = "discard"


Location = PrepZero | PrepPlus | NoisyCnot | InjectX | MeasurePostselect | Discard


@dataclass(frozen=True)
class Gadget:
    n_wires: int
    locations: tuple
    output_wires: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        validate_gadget(self)

    def location(self, label: str):
        for loc in self.locations:
            if loc.label == label:
                return loc
        raise KeyError(label)


def validate_gadget(g: Gadget) -> None:
    live: set[int] = set()
    used: set[int] = set()
    for loc in g.locations:
        if isinstance(loc, (PrepZero, PrepPlus)):
            if not 0 <= loc.wire < g.n_wires:
                raise DomainError(f"wire {loc.wire} out of range")
            if loc.wire in live:
                raise DomainError(f"wire {loc.wire} prepared twice while live")
            live.add(loc.wire)
            used.add(loc.wire)
            continue
        wires = (loc.wire,) if isinstance(loc, InjectX) else tuple(loc.wires)
        for w in wires:
            if w not in live:
                raise DomainError(f"{loc.kind} {loc.label!r} uses unprepared wire {w}")
        if isinstance(loc, MeasurePostselect):
            for _, targets in loc.byproducts:
                if any(t not in live for t in targets):
                    raise DomainError(f"byproduct of {loc.label!r} targets a dead wire")
        if isinstance(loc, (MeasurePostselect, Discard)):
            live.difference_update(wires)
    if set(g.output_wires) != live or len(set(g.output_wires)) != len(g.output_wires):
        raise DomainError(
            f"output wires {g.output_wires} must be exactly the live wires {sorted(live)}")


@dataclass(frozen=True)
class GadgetResult:
    accept_probability: object
    output: ErrorDistribution

    @property
    def expected_retries(self):
        return 1 / self.accept_probability


# -- primitive operations on dense vectors -----------------------------------


def _one(mode: str):
    return Fraction(1) if mode == RATIONAL else 1.0


def _rate(v, mode: str):
    if mode == RATIONAL:
        return v if isinstance(v, Fraction) else Fraction(v)
    return float(v)


def _cnot_vec(vec: np.ndarray, c: int, t: int, p_xi, p_ix, p_xx) -> np.ndarray:
    mode = RATIONAL if vec.dtype == object else FLOAT
    idx = np.arange(len(vec))
    out = np.empty_like(vec)
    out[idx ^ (((idx >> c) & 1) << t)] = vec
    p_xi, p_ix, p_xx = (_rate(v, mode) for v in (p_xi, p_ix, p_xx))
    if p_xi == 0 and p_ix == 0 and p_xx == 0:
        return out
    mc, mt = 1 << c, 1 << t
    stay = _one(mode) - p_xi - p_ix - p_xx
    return stay * out + p_xi * out[idx ^ mc] + p_ix * out[idx ^ mt] + p_xx * out[idx ^ (mc | mt)]


def _flip_vec(vec: np.ndarray, pos: int, rate) -> np.ndarray:
    mode = RATIONAL if vec.dtype == object else FLOAT
    rate = _rate(rate, mode)
    if rate == 0:
        return vec.copy()
    idx = np.arange(len(vec))
    return (_one(mode) - rate) * vec + rate * vec[idx ^ (1 << pos)]


def _measure_vec(vec: np.ndarray, n: int, positions: Sequence[int],
                 accept: Callable[[int], bool] | frozenset | None,
                 byproducts: Mapping[int, Sequence[int]] | None = None):
    """Condition on the measured sub-pattern and drop the measured positions.

    ``accept`` sees the measured sub-pattern with bit k = ``positions[k]``.
    ``byproducts`` maps a measured position to remaining positions (in the
    *old* numbering) that get flipped when it carries an X.
    Returns ``(accepted mass, new vector)``; the new vector is unnormalized.
    """
    mode = RATIONAL if vec.dtype == object else FLOAT
    idx = np.arange(len(vec))
    sub = np.zeros_like(idx)
    for k, pos in enumerate(positions):
        sub |= ((idx >> pos) & 1) << k
    if accept is None:
        keep = np.ones(len(vec), dtype=bool)
    elif callable(accept):
        table = np.array([bool(accept(m)) for m in range(1 << len(positions))])
        keep = table[sub]
    else:
        keep = np.isin(sub, list(accept))
    flipped = idx.copy()
    for pos, targets in (byproducts or {}).items():
        mask = sum(1 << t for t in targets)
        flipped = np.where((idx >> pos) & 1, flipped ^ mask, flipped)
    remaining = [q for q in range(n) if q not in set(positions)]
    new_idx = np.zeros_like(idx)
    for k, q in enumerate(remaining):
        new_idx |= ((flipped >> q) & 1) << k
    out = as_mode([0] * (1 << len(remaining)), mode)
    np.add.at(out, new_idx[keep], vec[keep])
    mass = sum(vec[keep]) if mode == RATIONAL else float(np.sum(vec[keep]))
    return mass, out


# -- public operations on ErrorDistribution ----------------------------------


def apply_noisy_cnot(dist: ErrorDistribution, loc: NoisyCnot) -> ErrorDistribution:
    if not (0 <= loc.control < dist.n and 0 <= loc.target < dist.n):
        raise DomainError("CNOT wire out of range")
    return ErrorDistribution(
        dist.n, _cnot_vec(dist.probs, loc.control, loc.target, loc.p_xi, loc.p_ix, loc.p_xx))


def inject_x(dist: ErrorDistribution, wire: int, rate) -> ErrorDistribution:
    if not 0 <= rate <= 1:
        raise DomainError(f"injection rate {rate} outside [0, 1]")
    if not 0 <= wire < dist.n:
        raise DomainError(f"wire {wire} out of range")
    return ErrorDistribution(dist.n, _flip_vec(dist.probs, wire, rate))


def measure_postselect(dist: ErrorDistribution, wires: Sequence[int],
                       predicate: Callable[[str], bool] | Iterable[str] | None = None):
    """Postselect on the X pattern of ``wires`` and remove them.

    ``predicate`` takes the measured bit string (character k is
    ``wires[k]``) or is a collection of accepted strings.  Returns
    ``(accept_probability, conditioned distribution on the other wires)``.
    """
    wires = list(wires)
    if any(not 0 <= w < dist.n for w in wires) or len(set(wires)) != len(wires):
        raise DomainError(f"bad measured wires {wires}")
    if len(wires) == dist.n:
        raise DomainError("cannot measure every wire; nothing would remain")
    if predicate is None:
        accept = None
    elif callable(predicate):
        accept = lambda m: predicate(pattern_to_str(m, len(wires)))  # noqa: E731
    else:
        accept = frozenset(pattern_from_str(s) for s in predicate)
    mass, vec = _measure_vec(dist.probs, dist.n, wires, accept)
    if mass == 0:
        raise GadgetAborts("the postselection rejects every branch")
    return mass, ErrorDistribution(dist.n - len(wires), vec / mass)


# -- the exact engine --------------------------------------------------------


def run_exact(g: Gadget, mode: str = FLOAT) -> GadgetResult:
    """Fold the gadget's locations over an error-free frame."""
    live: list[int] = []
    vec = as_mode([1], mode)
    accept = _one(mode)
    for loc in g.locations:
        if isinstance(loc, (PrepZero, PrepPlus)):
            live.append(loc.wire)
            vec = np.concatenate([vec, as_mode([0] * len(vec), mode)])
        elif isinstance(loc, NoisyCnot):
            vec = _cnot_vec(vec, live.index(loc.control), live.index(loc.target),
                            loc.p_xi, loc.p_ix, loc.p_xx)
        elif isinstance(loc, InjectX):
            vec = _flip_vec(vec, live.index(loc.wire), loc.rate)
        elif isinstance(loc, (MeasurePostselect, Discard)):
            positions = [live.index(w) for w in loc.wires]
            if isinstance(loc, Discard):
                mass, vec = _measure_vec(vec, len(live), positions, None)
            else:
                byp = {live.index(w): [live.index(t) for t in ts] for w, ts in loc.byproducts}
                mass, vec = _measure_vec(vec, len(live), positions, loc.accept, byp)
                if mass == 0:
                    raise GadgetAborts(f"measurement {loc.label!r} rejects every branch")
                vec = vec / mass
                accept = accept * mass * _rate(loc.ideal_probability, mode)
            live = [w for w in live if w not in loc.wires]
        else:
            raise DomainError(f"unknown location {loc!r}")
    order = [live.index(w) for w in g.output_wires]
    out = ErrorDistribution(len(live), vec)
    if order != list(range(len(live))):
        out = marginal(out, order)
    return GadgetResult(accept, out)


# -- gadget builders ---------------------------------------------------------


FAULT_LETTERS = {"XI": 0, "IX": 1, "XX": 2}

# Fault chosen by the adversarial split: XX on the preparing CNOTs and IX on
# the checking CNOTs leaves only correlated errors among accepted shots.
ADVERSARIAL_FAULTS = {"P": "XX", "Q": "XX", "A": "XX", "B": "XX", "C": "IX", "D": "IX"}

PLACEMENTS = ("before_a", "between_b_c", "after_d")


@dataclass(frozen=True)
class GadgetConfig:
    """Noise settings for one level of the recursion.

    ``eta`` is the per-CNOT failure rate.  ``split`` is ``"symmetric"``
    (XI, IX, XX each eta/3) or ``"adversarial"`` (all of eta on the fault in
    ``ADVERSARIAL_FAULTS``, XX for unlisted labels).  ``overrides`` maps a
    location label to explicit ``(p_xi, p_ix, p_xx)`` and wins over both.
    """

    eta: object = 0.0
    split: str = "symmetric"
    injections: bool = True
    injection_rate: object = None
    placement: str = "after_d"
    overrides: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.eta < 1:
            raise DomainError(f"eta must lie in [0, 1), got {self.eta}")
        if self.split not in ("symmetric", "adversarial"):
            raise DomainError(f"unknown noise split {self.split!r}")
        if self.placement not in PLACEMENTS:
            raise DomainError(f"unknown injection placement {self.placement!r}")

    @property
    def mode(self) -> str:
        return RATIONAL if isinstance(self.eta, Fraction) else FLOAT

    def rates(self, label: str) -> tuple:
        if label in self.overrides:
            return tuple(self.overrides[label])
        eta = self.eta
        zero = eta * 0
        if self.split == "symmetric":
            return (eta / 3, eta / 3, eta / 3)
        out = [zero, zero, zero]
        out[FAULT_LETTERS[ADVERSARIAL_FAULTS.get(label, "XX")]] = eta
        return tuple(out)

    def inject_rate(self):
        return self.eta if self.injection_rate is None else self.injection_rate

    def with_eta(self, eta) -> "GadgetConfig":
        return replace(self, eta=eta)


def _cnot(cfg: GadgetConfig, label: str, c: int, t: int) -> NoisyCnot:
    p_xi, p_ix, p_xx = cfg.rates(label)
    return NoisyCnot(c, t, p_xi, p_ix, p_xx, label)


def build_plus_prep(cfg: GadgetConfig) -> Gadget:
    """|+>_j as a noisy CNOT from |+>_{j-1} into |0>_{j-1} (two block wires)."""
    return Gadget(2, (PrepPlus(0), PrepZero(1), _cnot(cfg, "P", 0, 1)), (0, 1), "plus-prep")


def plus_quotient_rate(out: ErrorDistribution):
    """Single-wire error rate of a 2-wire cat output, reduced modulo XX."""
    return out.probs[0b01] + out.probs[0b10]


CODESPACE_2 = frozenset({0b00, 0b11})


def build_bell_prep(cfg: GadgetConfig, injections_on: bool | None = None) -> Gadget:
    """Encoded Bell pair on data wires 0..3 checked by wires 4, 5.

    Wires (0, 1) hold |+>_j made by CNOT P, as in :func:`build_plus_prep`.
    CNOTs A (0->2) and B (1->3) copy it onto |0>_j in (2, 3).  The check
    pair (4, 5) is a second |+>_j, made by CNOT Q; C (2->4) and D (3->5)
    copy X errors of the second half onto it without disturbing the logical
    state, and it is measured and accepted on the codespace {00, 11}.
    Optional injections flip each data wire with probability exactly
    ``cfg.inject_rate()``.
    """
    inj = cfg.injections if injections_on is None else injections_on
    rate = cfg.inject_rate()

    def injections(tag: str):
        if not inj:
            return []
        return [InjectX(w, rate, f"inj{w}") for w in range(4)] if cfg.placement == tag else []

    locs = [PrepPlus(0), PrepZero(1), _cnot(cfg, "P", 0, 1), PrepZero(2), PrepZero(3)]
    locs += injections("before_a")
    locs += [_cnot(cfg, "A", 0, 2), _cnot(cfg, "B", 1, 3)]
    locs += injections("between_b_c")
    locs += [PrepPlus(4), PrepZero(5), _cnot(cfg, "Q", 4, 5)]
    locs += [_cnot(cfg, "C", 2, 4), _cnot(cfg, "D", 3, 5)]
    locs += [MeasurePostselect((4, 5), CODESPACE_2, label="check")]
    locs += injections("after_d")
    return Gadget(6, tuple(locs), (0, 1, 2, 3), "bell-prep")


def build_teleported_cnot(cfg: GadgetConfig, input_flips: Sequence = (0, 0)) -> Gadget:
    """Logical CNOT from inputs (0, 1) to outputs (3, 5) through two Bell pairs.

    Bell pairs (2, 3) and (4, 5) get a CNOT 2->4 between their measured
    halves, then each input is Bell-measured into its pair: CNOT input->half,
    ⟨+| on the input, ⟨0| on the half.  All four outcomes are postselected,
    each an ideal branch of probability 1/2.  ``input_flips`` are X rates on
    the inputs before the gadget.
    """
    half = Fraction(1, 2) if cfg.mode == RATIONAL else 0.5
    locs = [PrepZero(0, "in_a"), PrepZero(1, "in_b")]
    locs += [InjectX(w, r, f"in_flip{w}") for w, r in enumerate(input_flips) if r]
    locs += [
        PrepPlus(2), PrepZero(3), _cnot(cfg, "BP1", 2, 3),
        PrepPlus(4), PrepZero(5), _cnot(cfg, "BP2", 4, 5),
        _cnot(cfg, "T", 2, 4),
        _cnot(cfg, "TA", 0, 2),
        _cnot(cfg, "TB", 1, 4),
        MeasurePostselect((0,), None, half, basis="x", label="plus_a"),
        MeasurePostselect((2,), None, half, byproducts=((2, (3, 5)),), label="zero_a"),
        MeasurePostselect((1,), None, half, basis="x", label="plus_b"),
        MeasurePostselect((4,), None, half, byproducts=((4, (5,)),), label="zero_b"),
    ]
    return Gadget(6, tuple(locs), (3, 5), "teleport-cnot")


BUILDERS = {
    "bell-prep": build_bell_prep,
    "plus-prep": build_plus_prep,
    "teleport-cnot": build_teleported_cnot,
}


# -- JSON ---------------------------------------------------------------------


def _num(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return float(v) if not isinstance(v, int) else v


def _parse_num(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def location_to_json(loc) -> dict:
    d = {"kind": loc.kind}
    if loc.label:
        d["label"] = loc.label
    if isinstance(loc, (PrepZero, PrepPlus)):
        d["wire"] = loc.wire
    elif isinstance(loc, NoisyCnot):
        d.update(control=loc.control, target=loc.target,
                 p_xi=_num(loc.p_xi), p_ix=_num(loc.p_ix), p_xx=_num(loc.p_xx))
    elif isinstance(loc, InjectX):
        d.update(wire=loc.wire, rate=_num(loc.rate))
    elif isinstance(loc, MeasurePostselect):
        k = len(loc.wires)
        d.update(wires=list(loc.wires), basis=loc.basis,
                 accept=None if loc.accept is None else sorted(pattern_to_str(m, k) for m in loc.accept),
                 ideal_probability=_num(loc.ideal_probability),
                 byproducts={str(w): list(ts) for w, ts in loc.byproducts})
    elif isinstance(loc, Discard):
        d["wires"] = list(loc.wires)
    return d


def location_from_json(d: Mapping):
    kind = d.get("kind")
    label = d.get("label", "")
    if kind == "prep_zero":
        return PrepZero(int(d["wire"]), label)
    if kind == "prep_plus":
        return PrepPlus(int(d["wire"]), label)
    if kind == "noisy_cnot":
        return NoisyCnot(int(d["control"]), int(d["target"]),
                         *(_parse_num(d.get(k, 0)) for k in ("p_xi", "p_ix", "p_xx")), label)
    if kind == "inject_x":
        return InjectX(int(d["wire"]), _parse_num(d["rate"]), label)
    if kind == "measure_postselect":
        wires = tuple(int(w) for w in d["wires"])
        acc = d.get("accept")
        accept = None if acc is None else frozenset(pattern_from_str(s) for s in acc)
        byp = tuple((int(w), tuple(int(t) for t in ts))
                    for w, ts in sorted(d.get("byproducts", {}).items()))
        return MeasurePostselect(wires, accept, _parse_num(d.get("ideal_probability", 1)),
                                 byp, d.get("basis", "z"), label)
    if kind == "discard":
        return Discard(tuple(int(w) for w in d["wires"]), label)
    raise DomainError(f"unknown location kind {kind!r}")


def gadget_to_json(g: Gadget) -> dict:
    out = {
        "n_wires": g.n_wires,
        "locations": [location_to_json(loc) for loc in g.locations],
        "output_wires": list(g.output_wires),
    }
    if g.name:
        out["name"] = g.name
    return out


def gadget_from_json(d: Mapping) -> Gadget:
    return Gadget(int(d["n_wires"]), tuple(location_from_json(x) for x in d["locations"]),
                  tuple(int(w) for w in d["output_wires"]), d.get("name", ""))
