"""Compare ODE-integrated gap probabilities with the Gram determinant."""
import argparse
import time

import numpy as np

from rmt_gaps.gapcore import GapGeometry, gap_probability_value
from rmt_gaps.odesys import integrate
from rmt_gaps.orthopoly import OrthonormalBasis, WeightSpec

GEOMETRY = {"exterior": GapGeometry.exterior, "end": GapGeometry.jacobi_exterior,
            "interior": GapGeometry.interior}


def cases():
    yield WeightSpec.hermite(), "exterior", np.linspace(0.2, 3.0, 20)
    for al, be in ((0.0, 0.0), (0.5, 0.5), (2.0, 2.0), (2.0, 1.0)):
        for geometry in ("end", "interior"):
            yield WeightSpec.jacobi(al, be), geometry, np.linspace(0.05, 0.95, 19)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N-max", type=int, default=6)
    args = ap.parse_args()
    print(f"{'weight':<18}{'geometry':<10}{'N':>3}{'sup|dE2|':>12}{'backend':>10}{'seconds':>9}")
    for w, geometry, grid in cases():
        for N in range(1, args.N_max + 1):
            t0 = time.perf_counter()
            tr = integrate(N, w, geometry, grid)
            basis = OrthonormalBasis(w, N)
            ref = np.array([gap_probability_value(basis, GEOMETRY[geometry](s)) for s in grid])
            name = w.kind if w.is_hermite else f"jacobi({w.alpha},{w.beta})"
            print(f"{name:<18}{geometry:<10}{N:>3}{np.max(np.abs(tr.e2 - ref)):>12.2e}"
                  f"{tr.meta['backend']:>10}{time.perf_counter() - t0:>9.2f}")


if __name__ == "__main__":
    main()
