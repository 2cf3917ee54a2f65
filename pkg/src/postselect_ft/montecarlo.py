"""Pauli-frame Monte Carlo sampling of gadgets, for cross-checking run_exact."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom, norm

from .distributions import ErrorDistribution
from .gadgets import Discard, Gadget, InjectX, MeasurePostselect, NoisyCnot, PrepPlus, PrepZero

CHUNK = 1 << 17


@dataclass(frozen=True)
class MonteCarloResult:
    shots: int
    accepted: int
    counts: np.ndarray
    n_out: int

    @property
    def accept_rate(self) -> float:
        return self.accepted / self.shots

    @property
    def expected_retries(self) -> float:
        return self.shots / self.accepted if self.accepted else float("inf")

    def distribution(self) -> ErrorDistribution | None:
        if not self.accepted:
            return None
        return ErrorDistribution(self.n_out, self.counts / self.accepted)


def _sample_chunk(g: Gadget, shots: int, seed: int, worker: int) -> tuple[int, np.ndarray]:
    rng = np.random.default_rng([seed, worker])
    frame = np.zeros((shots, g.n_wires), dtype=bool)
    alive = np.ones(shots, dtype=bool)
    for loc in g.locations:
        if isinstance(loc, (PrepZero, PrepPlus)):
            frame[:, loc.wire] = False
        elif isinstance(loc, NoisyCnot):
            c, t = loc.control, loc.target
            frame[:, t] ^= frame[:, c]
            u = rng.random(shots)
            a = float(loc.p_xi)
            b = a + float(loc.p_ix)
            s = b + float(loc.p_xx)
            frame[:, c] ^= (u < a) | ((u >= b) & (u < s))
            frame[:, t] ^= (u >= a) & (u < s)
        elif isinstance(loc, InjectX):
            frame[:, loc.wire] ^= rng.random(shots) < float(loc.rate)
        elif isinstance(loc, MeasurePostselect):
            sub = np.zeros(shots, dtype=np.int64)
            for k, w in enumerate(loc.wires):
                sub |= frame[:, w].astype(np.int64) << k
            if loc.accept is not None:
                alive &= np.isin(sub, list(loc.accept))
            ideal = float(loc.ideal_probability)
            if ideal < 1:
                alive &= rng.random(shots) < ideal
            for w, targets in loc.byproducts:
                hit = frame[:, w].copy()
                for t in targets:
                    frame[:, t] ^= hit
            for w in loc.wires:
                frame[:, w] = False
        elif isinstance(loc, Discard):
            for w in loc.wires:
                frame[:, w] = False
    out = np.zeros(shots, dtype=np.int64)
    for k, w in enumerate(g.output_wires):
        out |= frame[:, w].astype(np.int64) << k
    counts = np.bincount(out[alive], minlength=1 << len(g.output_wires))
    return int(alive.sum()), counts


def sample_pauli_frame(g: Gadget, shots: int, seed: int, workers: int = 1,
                       chunk: int = CHUNK) -> MonteCarloResult:
    """Sample ``shots`` runs of ``g``; deterministic in ``(seed, chunk)``.

    Shots are split into chunks; chunk ``k`` draws from the stream seeded by
    ``(seed, k)`` so the result does not depend on ``workers``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    sizes = [chunk] * (shots // chunk)
    if shots % chunk:
        sizes.append(shots % chunk)
    jobs = [(g, size, seed, k) for k, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _sample_chunk(*a), jobs))
    else:
        parts = [_sample_chunk(*a) for a in jobs]
    accepted = sum(a for a, _ in parts)
    counts = np.sum([c for _, c in parts], axis=0)
    return MonteCarloResult(shots, accepted, counts, len(g.output_wires))


def binomial_sigma(p: float, n: int) -> float:
    return float(np.sqrt(max(p * (1 - p), 0.0) / n))


def within_envelope(mc: MonteCarloResult, exact_accept: float, exact: ErrorDistribution,
                    k_sigma: float = 5.0) -> dict:
    """Compare a Monte Carlo run with the exact engine at ``k_sigma``.

    The accept rate is tested against its binomial sigma.  Each output cell
    is tested with exact binomial tails at the two-sided level that
    ``k_sigma`` has for a normal variable, since sparse cells (expected count
    below one) are far from normal.  The total variation is held to half the
    sum of the per-cell ``k_sigma`` bounds.  Cells with exact probability zero
    must be empty.
    """
    acc_sigma = binomial_sigma(exact_accept, mc.shots)
    report = {
        "accept_rate": mc.accept_rate,
        "accept_exact": float(exact_accept),
        "accept_ok": abs(mc.accept_rate - exact_accept) <= k_sigma * acc_sigma,
        "retries": mc.expected_retries,
        "retries_exact": 1 / float(exact_accept),
    }
    # delta method on 1/p
    retry_sigma = acc_sigma / float(exact_accept) ** 2
    report["retries_ok"] = abs(mc.expected_retries - 1 / float(exact_accept)) <= k_sigma * retry_sigma
    emp = mc.distribution()
    if emp is None:
        report.update(tv=None, tv_bound=None, cells_ok=False, tv_ok=False)
        return report
    p = exact.probs.astype(np.float64)
    q = emp.probs
    sig = np.sqrt(np.clip(p * (1 - p), 0, None) / mc.accepted)
    k = mc.counts
    half = norm.sf(k_sigma)
    lo = binom.cdf(k, mc.accepted, p)
    hi = binom.sf(k - 1, mc.accepted, p)
    cells_ok = bool(np.all((lo >= half) & (hi >= half)))
    tv = 0.5 * float(np.sum(np.abs(q - p)))
    bound = 0.5 * k_sigma * float(np.sum(sig))
    report.update(tv=tv, tv_bound=bound, cells_ok=cells_ok, tv_ok=tv <= bound)
    return report
