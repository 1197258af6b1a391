"""Soft-edge convergence of the scaled finite-N resolvent and agreement of the two limit routes."""
import argparse

import numpy as np

from rmt_gaps import asymptotics as asy
from rmt_gaps import painleve as pl


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N-list", default="10,20,50,100")
    ap.add_argument("--t-min", type=float, default=-2.0)
    ap.add_argument("--t-max", type=float, default=4.0)
    ap.add_argument("--points", type=int, default=25)
    args = ap.parse_args()
    t = np.linspace(args.t_min, args.t_max, args.points)
    Ns = [int(v) for v in args.N_list.split(",")]
    rep = asy.edge_scaling_deviation(Ns, t)
    print(f"{'N':>5}{'sup|r - R_soft|':>18}")
    for N, d in zip(rep.params, rep.deviations):
        print(f"{N:>5}{d:>18.3e}")
    print(f"decreasing: {rep.decreasing}, fitted order: {rep.fitted_order:.2f}")
    tt = np.linspace(-4, 4, 81)
    a = pl.soft_edge_sigma(tt)
    b = pl.soft_edge_pii(tt)[2]
    print(f"sigma-form vs Painleve II on [-4, 4]: {np.max(np.abs(a - b)):.2e}")


if __name__ == "__main__":
    main()
