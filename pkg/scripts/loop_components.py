"""Decompose the loop module of a natural module and print per-slice dimensions.

    python3 scripts/loop_components.py --b 1/2 --window -4 4
"""

import argparse
from fractions import Fraction

from qasa.loop import build_loop_module, check_evaluation_map, loop_decompose
from qasa.modules import build_natural_evaluation_module, find_highest_weight_vectors, trivial_module
from qasa.rootdata import RootDatum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--b", default="0")
    ap.add_argument("--window", type=int, nargs=2, default=[-4, 4])
    ap.add_argument("--trivial", action="store_true")
    args = ap.parse_args()
    rd = RootDatum(args.m, args.n)
    V = trivial_module(rd) if args.trivial else build_natural_evaluation_module(rd, window=1)
    v = find_highest_weight_vectors(V)[0]
    lm = build_loop_module(V, Fraction(args.b), tuple(args.window))
    dec = loop_decompose(lm, v)
    print(f"r = {dec.r}, interior slices {dec.interior}")
    for comp in dec.components:
        ev = check_evaluation_map(lm, comp, dec.interior)
        dims = [comp.dims()[s] for s in dec.interior]
        print(f"component from slice {comp.start}: dims {dims}, evaluation rank {ev['rank']}, "
              f"intertwines {ev['intertwines']}")
    print("slice sums", [dec.slice_sums[s] for s in dec.interior])


if __name__ == "__main__":
    main()
