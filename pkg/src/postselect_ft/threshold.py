"""Level map, threshold sweep and level iteration.

One level of the recursion prepares an encoded Bell pair from sub-blocks
at per-CNOT rate ``eta``, reduces the accepted output modulo XXXX, embeds it
back onto four wires and asks for the smallest uniform rate ``q`` at which
it is a mixture of independent bit flips.  Each half of the next-level
block is a pair of such sub-blocks, and a logical flip needs both to fail,
so the next-level rate is ``q**2``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from .distributions import FLOAT, DomainError
from .gadgets import GadgetConfig, build_bell_prep, run_exact
from .mixing import min_uniform_parameter
from .quotient import embed_distribution, quotient_of

Q_MAX = 0.5
CSV_COLUMNS = ("eta_in", "eta_out", "accept_prob", "member", "expected_retries")


@dataclass(frozen=True)
class LevelParams:
    """Closed-form level-j rate ``(c*eta0)**(2**j) / c``.

    With this normalization ``eta_0 = eta0`` and ``eta_{j+1} = c*eta_j**2``.
    ``bound`` is the unnormalized ``(c*eta0)**(2**j)``.
    """

    eta0: object
    c: object
    j: int

    def __post_init__(self):
        if self.j < 0:
            raise DomainError("level index must be >= 0")
        if self.eta0 < 0 or self.c <= 0:
            raise DomainError("need eta0 >= 0 and c > 0")

    @property
    def bound(self):
        return (self.c * self.eta0) ** (2 ** self.j)

    @property
    def eta_j(self):
        return self.bound / self.c

    def next(self) -> "LevelParams":
        return LevelParams(self.eta0, self.c, self.j + 1)


@dataclass(frozen=True)
class LevelResult:
    eta_in: float
    eta_out: float | None
    q: float | None
    accept_probability: float

    @property
    def member(self) -> bool:
        return self.eta_out is not None

    @property
    def contracts(self) -> bool:
        if self.eta_out is None:
            return False
        return self.eta_out < self.eta_in or self.eta_in == 0 == self.eta_out


def level_map(eta, config: GadgetConfig | None = None, q_max: float = Q_MAX,
              tol: float | None = None) -> LevelResult:
    """One level of the recursion at per-location rate ``eta``.

    ``eta_out`` is ``None`` when no uniform rate up to ``q_max`` certifies
    the embedded output.  ``tol`` defaults to ``1e-9 * eta`` so tiny rates
    keep their relative precision.
    """
    if not 0 <= eta < 1:
        raise DomainError(f"eta must lie in [0, 1), got {eta}")
    cfg = (config or GadgetConfig()).with_eta(eta)
    res = run_exact(build_bell_prep(cfg), cfg.mode)
    emb = embed_distribution(quotient_of(res.output)).to_mode(FLOAT)
    if tol is None:
        tol = max(1e-9 * float(eta), 1e-300)
    q = min_uniform_parameter(emb, q_max, tol)
    accept = float(res.accept_probability)
    if q is None:
        return LevelResult(float(eta), None, None, accept)
    return LevelResult(float(eta), q * q, q, accept)


@dataclass(frozen=True)
class SweepRow:
    eta_in: float
    eta_out: float | None
    accept_probability: float
    member: bool

    @property
    def expected_retries(self) -> float:
        return 1 / self.accept_probability if self.accept_probability > 0 else math.inf

    @classmethod
    def from_level(cls, r: LevelResult) -> "SweepRow":
        return cls(r.eta_in, r.eta_out, r.accept_probability, r.member)

    @property
    def contracts(self) -> bool:
        if self.eta_out is None:
            return False
        return self.eta_out < self.eta_in or self.eta_in == 0 == self.eta_out


@dataclass
class SweepResult:
    rows: list[SweepRow]
    threshold: float
    findings: list[str] = field(default_factory=list)


def _evaluate(etas: Sequence[float], config, q_max, workers) -> list[LevelResult]:
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda e: level_map(e, config, q_max), etas))
    return [level_map(e, config, q_max) for e in etas]


def sweep_threshold(eta_min: float, eta_max: float, steps: int,
                    config: GadgetConfig | None = None, refine_tol: float = 1e-4,
                    q_max: float = Q_MAX, workers: int = 1) -> SweepResult:
    """Evaluate the level map on a uniform grid and locate the threshold.

    The estimate is the end of the contracting prefix of the grid (``eta = 0``
    counts as contracting), refined by bisection against the first
    non-contracting grid point.  Grid points that contract after a failure,
    and decreases of ``eta_out`` along the grid, are reported as findings.
    """
    if not (0 <= eta_min < eta_max < 1) or steps < 2:
        raise DomainError("need 0 <= eta_min < eta_max < 1 and steps >= 2")
    etas = np.linspace(eta_min, eta_max, steps)
    rows = [SweepRow.from_level(r) for r in _evaluate(etas, config, q_max, workers)]
    findings = []

    first_bad = next((k for k, r in enumerate(rows) if not r.contracts), None)
    if first_bad is None:
        threshold = float(etas[-1])
    else:
        for r in rows[first_bad + 1:]:
            if r.contracts:
                findings.append(f"contraction region is not a down-set: eta={r.eta_in:.6g} "
                                f"contracts above eta={rows[first_bad].eta_in:.6g}")
        lo = float(etas[first_bad - 1]) if first_bad > 0 else 0.0
        hi = float(etas[first_bad])
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            if level_map(mid, config, q_max).contracts:
                lo = mid
            else:
                hi = mid
        threshold = lo

    prev = None
    for r in rows:
        out = math.inf if r.eta_out is None else r.eta_out
        if prev is not None and out < prev[1] * (1 - 1e-6):
            findings.append(f"eta_out decreases from {prev[1]:.6g} at eta={prev[0]:.6g} "
                            f"to {out:.6g} at eta={r.eta_in:.6g}")
        prev = (r.eta_in, out)
    return SweepResult(rows, threshold, findings)


def _fmt(v: float) -> str:
    if v is None or v == math.inf:
        return "inf"
    return f"{v:.12g}"


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r.eta_in), _fmt(r.eta_out), _fmt(r.accept_probability),
                    "true" if r.member else "false", _fmt(r.expected_retries)])


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def fit_c(eta_hi: float, config: GadgetConfig | None = None, points: int = 25,
          span: float = 1e-4, q_max: float = Q_MAX) -> float:
    """Smallest ``c`` with ``eta_out <= c * eta**2`` on a geometric grid.

    The grid runs from ``eta_hi * span`` to ``eta_hi``; infeasible points
    are skipped.  Returns ``nan`` when no point is feasible.
    """
    if not 0 < eta_hi < 1:
        raise DomainError("eta_hi must lie in (0, 1)")
    best = math.nan
    for eta in np.geomspace(eta_hi * span, eta_hi, points):
        r = level_map(float(eta), config, q_max)
        if r.eta_out is not None:
            ratio = float(r.eta_out / eta ** 2)
            best = ratio if math.isnan(best) else max(best, ratio)
    return best


@dataclass
class LevelIteration:
    etas: list[float]
    c_fit: float
    status: str
    failed_level: int | None = None

    @property
    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.etas, self.etas[1:]))

    def within_factor(self, factor: float = 2.0) -> bool:
        """Every step satisfies ``c/f * e**2 <= e' <= f*c * e**2``."""
        c = self.c_fit
        return all(c / factor * a * a <= b <= factor * c * a * a
                   for a, b in zip(self.etas, self.etas[1:]))


def iterate_levels(eta0: float, k: int, config: GadgetConfig | None = None,
                   c_fit: float | None = None, q_max: float = Q_MAX) -> LevelIteration:
    """Apply the level map ``k`` times starting from ``eta0``.

    ``status`` is ``"ok"``, ``"non-contracting"`` (some level failed to
    decrease) or ``"infeasible"`` (iteration stopped at ``failed_level``).
    ``c_fit`` is fitted below ``eta0`` when not given.
    """
    if eta0 < 0 or k < 1:
        raise DomainError("need eta0 >= 0 and k >= 1")
    if c_fit is None:
        c_fit = float(fit_c(eta0, config, q_max=q_max)) if eta0 > 0 else 0.0
    etas = [float(eta0)]
    status = "ok"
    for j in range(k):
        r = level_map(etas[-1], config, q_max)
        if r.eta_out is None:
            return LevelIteration(etas, c_fit, "infeasible", j)
        if not r.contracts:
            status = "non-contracting"
        etas.append(r.eta_out)
    return LevelIteration(etas, c_fit, status)


def exact_level_params(eta0: Fraction, c: Fraction, j: int) -> Fraction:
    """Closed form evaluated in exact arithmetic."""
    return LevelParams(Fraction(eta0), Fraction(c), j).eta_j
