"""Energy-drift residual under simultaneous refinement of space and time."""

import argparse

import numpy as np

from hcmalab import potentials
from hcmalab.equation import HcmaProblem
from hcmalab.geometry import drift_check
from hcmalab.grid import TorusGrid
from hcmalab.newton import SolverOptions, solve
from hcmalab.path import initial_guess


def drift(N, Nt, eps, amp, c1):
    g = TorusGrid(1, N, Nt)
    f = amp * np.cos(2 * np.pi * g.x(0))
    z, c = potentials.zero(g), potentials.constant(g, c1)
    prob = HcmaProblem(z, c, eps, f)
    rep = solve(prob, initial_guess(z, c, eps=eps), SolverOptions(tol=1e-11))
    return drift_check(rep.path, prob)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--f-amplitude", type=float, default=0.2)
    p.add_argument("--c1", type=float, default=0.3)
    p.add_argument("--levels", type=int, default=3, help="grids 16, 32, ... ")
    args = p.parse_args()
    prev = None
    print(f"{'N':>4} {'Nt':>4} {'drift':>12} {'ratio':>7}")
    for k in range(args.levels):
        N = 16 * 2**k
        d = drift(N, N + 1, args.eps, args.f_amplitude, args.c1)
        ratio = f"{prev / d:7.2f}" if prev else " " * 7
        print(f"{N:4d} {N + 1:4d} {d:12.4e} {ratio}")
        prev = d


if __name__ == "__main__":
    main()
