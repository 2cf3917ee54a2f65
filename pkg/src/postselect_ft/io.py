"""JSON encoding of distributions, quotients and results."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .distributions import FLOAT, RATIONAL, DomainError, ErrorDistribution, make_distribution
from .gadgets import GadgetResult
from .mixing import _num_str
from .quotient import CLASS_NAMES, QuotientDistribution, embed_distribution, make_quotient


def parse_number(v, mode: str):
    """Number from JSON: ``"num/den"``, a decimal string, or a JSON number.

    Rational mode reads decimals exactly (``"0.1"`` is ``1/10``).
    """
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise DomainError(f"not a number: {v!r}")
    try:
        if mode == RATIONAL:
            return Fraction(v) if isinstance(v, str) else Fraction(str(v))
        return float(Fraction(v)) if isinstance(v, str) else float(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a number: {v!r}") from exc


def format_number(v) -> str:
    return _num_str(v)


def distribution_to_json(dist: ErrorDistribution) -> dict:
    return {
        "n": dist.n,
        "mode": dist.mode,
        "probs": {k: _num_str(v) for k, v in dist.support().items()},
    }


def distribution_from_json(obj: Mapping) -> ErrorDistribution:
    """Read either a distribution object or a quotient object.

    A quotient object maps X-strings to probabilities (optionally under a
    ``"quotient"`` key with a ``"mode"``); it is embedded onto four wires.
    """
    if not isinstance(obj, Mapping):
        raise DomainError("expected a JSON object")
    if "n" not in obj:
        return embed_distribution(quotient_from_json(obj))
    n, mode, probs = obj["n"], obj.get("mode", FLOAT), obj.get("probs")
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError("'n' must be an integer")
    if mode not in (FLOAT, RATIONAL):
        raise DomainError(f"unknown mode {mode!r}")
    if isinstance(probs, Mapping):
        vals = {k: parse_number(v, mode) for k, v in probs.items()}
    elif isinstance(probs, list):
        vals = [parse_number(v, mode) for v in probs]
    else:
        raise DomainError("'probs' must be an object or a list")
    return make_distribution(n, vals, mode)


def quotient_to_json(qd: QuotientDistribution) -> dict:
    return qd.to_json()


def quotient_from_json(obj: Mapping) -> QuotientDistribution:
    mode = obj.get("mode", FLOAT)
    masses = obj.get("quotient", {k: v for k, v in obj.items() if k != "mode"})
    if mode not in (FLOAT, RATIONAL):
        raise DomainError(f"unknown mode {mode!r}")
    bad = [k for k in masses if k not in CLASS_NAMES]
    if bad:
        raise DomainError(f"unknown quotient classes {bad}")
    qd = make_quotient({k: parse_number(v, mode) for k, v in masses.items()}, mode)
    total = qd.total()
    if (mode == RATIONAL and total != 1) or abs(float(total) - 1) > 1e-12:
        raise DomainError(f"quotient masses sum to {total}, not 1")
    return qd


def load_distribution(path: str | Path) -> ErrorDistribution:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc.msg})") from exc
    return distribution_from_json(obj)


def parse_rates(text: str, n: int, mode: str) -> list:
    """Comma-separated rates; a single value is broadcast to all ``n`` wires."""
    parts = [s.strip() for s in text.split(",") if s.strip()]
    vals = [parse_number(s, mode) for s in parts]
    if len(vals) == 1:
        vals = vals * n
    if len(vals) != n:
        raise DomainError(f"expected 1 or {n} rates, got {len(vals)}")
    return vals


def result_to_json(res: GadgetResult) -> dict:
    acc = res.accept_probability
    return {
        "accept_probability": _num_str(acc),
        "expected_retries": _num_str(1 / acc) if acc else "inf",
        "output": distribution_to_json(res.output),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


__all__ = [
    "distribution_from_json",
    "distribution_to_json",
    "dumps",
    "format_number",
    "load_distribution",
    "parse_number",
    "parse_rates",
    "quotient_from_json",
    "quotient_to_json",
    "result_to_json",
]
