"""Time every identity suite on a set of root data and print a table.

    python3 scripts/suite_timings.py --window 1
"""

import argparse
import time

from qasa.rootdata import RootDatum
from qasa.suites import SUITES, build_suite, run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", type=int, default=1)
    ap.add_argument("--configs", nargs="+", default=["1,2", "2,1", "2,2"])
    ap.add_argument("--suites", nargs="+", default=sorted(SUITES))
    args = ap.parse_args()
    print(f"{'suite':<20}{'M,N':<6}{'proved':>10}{'seconds':>10}")
    for name in args.suites:
        for cfg in args.configs:
            rd = RootDatum(*map(int, cfg.split(",")))
            insts = build_suite(name, rd, args.window)
            t0 = time.perf_counter_ns()
            res = run_suite(insts, rd)
            dt = (time.perf_counter_ns() - t0) // 10**6
            done = sum(r.proved for r in res)
            print(f"{name:<20}{cfg:<6}{f'{done}/{len(res)}':>10}{dt // 1000:>6}.{dt % 1000:03d}")


if __name__ == "__main__":
    main()
