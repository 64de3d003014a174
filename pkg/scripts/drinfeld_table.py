"""Print the Drinfeld data of natural evaluation modules for a few parameters.

    python3 scripts/drinfeld_table.py --m 1 --n 2 --params 1 q q^2
"""

import argparse

from qasa.drinfeld import extract_drinfeld_data
from qasa.modules import build_natural_evaluation_module, find_highest_weight_vectors
from qasa.rootdata import RootDatum
from qasa.scalars import format_scalar, parse_scalar


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--params", nargs="+", default=["1", "q", "q^2"])
    ap.add_argument("--trunc", type=int, default=20)
    args = ap.parse_args()
    rd = RootDatum(args.m, args.n)
    for text in args.params:
        mod = build_natural_evaluation_module(rd, parse_scalar(text))
        for v in find_highest_weight_vectors(mod):
            d = extract_drinfeld_data(mod, v, T=args.trunc)
            P = {i: [format_scalar(c) for c in p] for i, p in d.P.items()}
            f = [format_scalar(d.f_coeff(n)) for n in range(-2, 3)]
            print(f"a={text}: P={P} c={format_scalar(d.c)} Q={[format_scalar(c) for c in d.Q]} f[-2..2]={f}")


if __name__ == "__main__":
    main()
