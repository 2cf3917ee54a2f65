"""The A/C correlated-failure Bell preparation, with and without injections.

Runs in exact arithmetic and prints, for each (eps, q), the smallest uniform
rate certifying the embedded output (None if no rate below 1 does).
"""

from fractions import Fraction as F

from postselect_ft.distributions import RATIONAL, pattern_to_str
from postselect_ft.gadgets import GadgetConfig, build_bell_prep, run_exact
from postselect_ft.mixing import check_hull_membership, min_uniform_parameter
from postselect_ft.quotient import embed_distribution, quotient_of

CAP = F(999_999, 1_000_000)


def output(eps, q, injections):
    ov = {k: (F(0), F(0), F(0)) for k in "PQBD"}
    ov["A"] = (F(0), F(0), eps)
    ov["C"] = (F(0), eps, F(0))
    cfg = GadgetConfig(eta=F(0), injections=injections, injection_rate=q, overrides=ov)
    res = run_exact(build_bell_prep(cfg), RATIONAL)
    return quotient_of(res.output), res.accept_probability


def main() -> None:
    print("q,eps,injections,accept,member_at_q,worst_x,min_rate")
    for q in (F(1, 20), F(1, 10), F(3, 10)):
        for eps in (F(1, 10), F(1, 100), F(1, 1000), F(1, 10_000)):
            for inj in (False, True):
                quo, acc = output(eps, q, inj)
                emb = embed_distribution(quo)
                v = check_hull_membership(emb, [q] * 4)
                rate = min_uniform_parameter(emb, CAP)
                rate_s = "None" if rate is None else f"{float(rate):.6f}"
                print(f"{float(q):g},{float(eps):g},{inj},{float(acc):.6f},{v.member},"
                      f"{pattern_to_str(v.worst_x, 4)},{rate_s}")


if __name__ == "__main__":
    main()
