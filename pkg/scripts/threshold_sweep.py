"""Sweep the one-level map for every noise split and iterate below threshold.

    python3 scripts/threshold_sweep.py --out-dir results/
"""

import argparse
from pathlib import Path

from postselect_ft.gadgets import GadgetConfig
from postselect_ft.threshold import iterate_levels, sweep_threshold, write_sweep_csv

CASES = [
    ("symmetric", True),
    ("symmetric", False),
    ("adversarial", True),
    ("adversarial", False),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eta-max", type=float, default=0.3)
    ap.add_argument("--steps", type=int, default=61)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out-dir", type=Path, default=None)
    args = ap.parse_args()

    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    for split, inj in CASES:
        cfg = GadgetConfig(split=split, injections=inj)
        res = sweep_threshold(0.0, args.eta_max, args.steps, cfg, workers=args.workers)
        tag = f"{split}-{'inj' if inj else 'noinj'}"
        if args.out_dir:
            with open(args.out_dir / f"sweep-{tag}.csv", "w", newline="") as fh:
                write_sweep_csv(res.rows, fh)
        print(f"{tag:20s} threshold={res.threshold:.6g}")
        for f in res.findings:
            print(f"  finding: {f}")
        if res.threshold > 0:
            it = iterate_levels(res.threshold / 2, args.levels, cfg)
            seq = ", ".join(f"{e:.4g}" for e in it.etas)
            print(f"  from threshold/2: [{seq}] c_fit={it.c_fit:.4g} status={it.status} "
                  f"within_factor_2={it.within_factor(2.0)}")


if __name__ == "__main__":
    main()
