"""Sampled gap frequencies against exact gap probabilities."""
import argparse

from rmt_gaps import closedform as cf
from rmt_gaps import montecarlo as mc
from rmt_gaps.gapcore import GapGeometry


def combos():
    yield mc.Ensemble.gue(1), GapGeometry.exterior(1.0), cf.gue_closed(1, 1.0).e2
    yield mc.Ensemble.gue(2), GapGeometry.exterior(1.0), cf.gue_closed(2, 1.0).e2
    yield mc.Ensemble.gue(2), GapGeometry.interior(0.5), cf.gue_interior_closed(2, 0.5).e2
    yield mc.Ensemble.jue(2, 3, 2), GapGeometry.jacobi_exterior(0.5), cf.jue_end_closed(2, 1, 0, 0.5).e2
    yield mc.Ensemble.jue(2, 3, 3), GapGeometry.interior(0.4), cf.jue_interior_closed(2, 1, 1, 0.4).e2
    yield mc.Ensemble.jue(3, 3, 3), GapGeometry.jacobi_exterior(0.9), cf.jue_zero_alpha_closed(3, 0.9).e2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=20240)
    args = ap.parse_args()
    print(f"{'ensemble':<16}{'N':>3}{'region':>26}{'exact':>10}{'p_hat':>10}{'stderr':>10}{'z':>7}")
    for ens, geo, exact in combos():
        est = mc.empirical_gap(ens, geo, args.samples, args.seed)
        z = (est.p_hat - exact) / est.stderr
        region = " u ".join(f"({a:g}, {b:g})" for a, b in geo.region(ens.weight).intervals)
        print(f"{ens.label():<16}{ens.N:>3}{region:>26}{exact:>10.5f}{est.p_hat:>10.5f}{est.stderr:>10.2e}{z:>7.2f}")


if __name__ == "__main__":
    main()
