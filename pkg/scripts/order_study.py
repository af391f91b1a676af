"""Measured convergence order on Kepler (T = 1) for several constructions."""
import argparse

from jacsym.construct import ConstructionParams, solve_alpha
from jacsym.integrator import kepler, measured_order
from jacsym.polybasis import JacobiBasis
from jacsym.quadrature import make_rule
from jacsym.tableau import classical_order, discretize

CASES = {
    "cheb3 xi=2": ((-0.5, 0.5), (2, 1, 1), 1, (0.1, 0.05, 0.025, 0.0125)),
    "cheb3 xi=3": ((-0.5, 0.5), (3, 1, 2), 3, (0.1, 0.05, 0.025, 0.0125)),
    "cheb4 xi=3": ((0.5, -0.5), (3, 1, 2), 3, (0.1, 0.05, 0.025, 0.0125)),
    "cheb3 xi=5": ((-0.5, 0.5), (5, 2, 2), 5, (0.2, 0.1, 0.05, 0.025)),
    "cheb4 xi=5": ((0.5, -0.5), (5, 2, 2), 5, (0.2, 0.1, 0.05, 0.025)),
    "legendre xi=4": ((0.0, 0.0), (4, 2, 2), 2, (0.2, 0.1, 0.05, 0.025)),
}


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    K = kepler()
    print(f"{'method':<16}{'classical':>10}{'slope':>9}  errors")
    for name, (ab, (xi, eta, rho), s, hs) in CASES.items():
        basis = JacobiBasis(*ab)
        coeffs = solve_alpha(ConstructionParams(basis, xi, eta, rho)).particular
        t = discretize(coeffs, make_rule(basis, s))
        est = measured_order(t, K, hs)
        flag = " (flagged)" if est.flagged else ""
        errs = " ".join(f"{e:.2e}" for e in est.errors)
        print(f"{name:<16}{classical_order(t):>10}{est.slope:>9.3f}  {errs}{flag}")


if __name__ == "__main__":
    main()
