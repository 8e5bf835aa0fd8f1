"""Rejection rates of the normal-approximation tests on simulated null portfolios.

    python scripts/type_one_error_study.py --portfolios 2000 --n 200

Observations are drawn with means equal to the predictions, so every rejection
is a false alarm.  Rates near the nominal level indicate a well calibrated test.
"""

import argparse

import numpy as np

from pairdiff.basic import basic_normal, t_test
from pairdiff.interval import estimate_v_unit, interval_normal
from pairdiff.sample import Kind, PairedSample, normalize_weights


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--portfolios", type=int, default=2000)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--level", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=808)
    ap.add_argument("--weighted", action="store_true", help="lognormal exposure weights instead of equal")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    tests = {"t-test": [], "Basic normal": [], "Exp var normal": []}
    for _ in range(args.portfolios):
        lam = rng.uniform(0.05, 0.6, size=args.n)
        ell = rng.beta(2 * lam, 2 * (1 - lam))
        raw = rng.lognormal(0, 1, size=args.n) if args.weighted else np.ones(args.n)
        s = PairedSample(ell, lam, normalize_weights(raw), Kind.UNIT_INTERVAL)
        d, w = s.residuals, s.weights
        tests["t-test"].append(t_test(d, w))
        tests["Basic normal"].append(basic_normal(d, w))
        tests["Exp var normal"].append(interval_normal(s, estimate_v_unit(s.obs, w)))

    print(f"{args.portfolios} portfolios, n = {args.n}, level {args.level}")
    print(f"{'test':<16}{'prudent':>10}{'aggressive':>12}")
    for name, results in tests.items():
        r1 = np.mean([r.p_prudent < args.level for r in results])
        r2 = np.mean([r.p_aggressive < args.level for r in results])
        print(f"{name:<16}{r1:>10.4f}{r2:>12.4f}")


if __name__ == "__main__":
    main()
