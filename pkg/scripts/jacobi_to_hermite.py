"""Scaled Jacobi resolvents approaching their Hermite limits as alpha grows."""
import argparse

import numpy as np

from rmt_gaps import asymptotics as asy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha-list", default="10,40,160,640")
    ap.add_argument("--N-list", default="1,2,3")
    args = ap.parse_args()
    alphas = [float(v) for v in args.alpha_list.split(",")]
    t = np.linspace(0.3, 2.5, 23)
    print(f"{'N':>3}{'geometry':>10}" + "".join(f"{'a=' + format(a, 'g'):>11}" for a in alphas)
          + f"{'order':>7}{'alpha*dev':>11}")
    for N in (int(v) for v in args.N_list.split(",")):
        for geometry in ("end", "interior"):
            rep = asy.j2h_deviation(alphas, t, N, geometry)
            row = "".join(f"{d:>11.2e}" for d in rep.deviations)
            # a constant alpha * deviation marks a first-order correction
            print(f"{N:>3}{geometry:>10}{row}{rep.fitted_order:>7.2f}{alphas[-1] * rep.deviations[-1]:>11.3f}")


if __name__ == "__main__":
    main()
