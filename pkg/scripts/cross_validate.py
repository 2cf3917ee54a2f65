"""Cross-check the closed-form hull test against elimination and the LP.

Random rational instances, half of them built as explicit mixtures of
vertices so both verdicts show up.  Prints a disagreement count and exits
nonzero on any disagreement.
"""

import argparse
import sys
from fractions import Fraction

import numpy as np

from postselect_ft.distributions import RATIONAL, mix, random_distribution
from postselect_ft.mixing import check_hull_membership, mixing_coefficients, vertex_distribution
from postselect_ft.oracles import brute_force_decompose, lp_membership


def instance(rng, n):
    p = [Fraction(int(k), 20) for k in rng.integers(1, 20, n)]
    if rng.random() < 0.5:
        w = rng.integers(1, 10, 1 << n)
        tot = int(w.sum())
        d = mix([(Fraction(int(k), tot), vertex_distribution(x, p, RATIONAL)) for x, k in enumerate(w)])
    else:
        d = random_distribution(n, rng, RATIONAL)
    return d, p


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    members = banded = 0
    bad = []
    for k in range(args.count):
        d, p = instance(rng, int(rng.integers(1, args.max_n + 1)))
        closed = check_hull_membership(d, p)
        bf = brute_force_decompose(d, p)
        lp = lp_membership(d, p)
        members += closed.member
        if bf["coeffs"] != list(mixing_coefficients(d, p).coeffs) or bf["member"] != closed.member:
            bad.append((k, "elimination"))
        if abs(lp.margin) < 1e-9:
            banded += 1
        elif lp.feasible != closed.member:
            bad.append((k, "lp"))
    print(f"instances={args.count} members={members} lp_band={banded} disagreements={len(bad)}")
    for k, which in bad[:20]:
        print(f"  instance {k}: {which}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
